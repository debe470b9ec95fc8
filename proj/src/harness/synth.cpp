#include "malkit/harness/synth.hpp"

#include <cmath>
#include <cstdio>
#include <stdexcept>

#include "malkit/rng.hpp"

namespace malkit::harness {

namespace {

std::string padded_id(const char* prefix, std::size_t i) {
    char buf[32];
    std::snprintf(buf, sizeof(buf), "%s-%05zu", prefix, i);
    return buf;
}

// quadrant cycle: joy(+,+), anger(-,+), sadness(-,-), tenderness(+,-)
void quadrant_of(std::size_t blob, int& valence, int& arousal) {
    switch (blob % 4) {
        case 0: valence = 1; arousal = 1; break;
        case 1: valence = -1; arousal = 1; break;
        case 2: valence = -1; arousal = -1; break;
        default: valence = 1; arousal = -1; break;
    }
}

}  // namespace

Dataset synth_dataset(const SynthSpec& spec) {
    if (spec.blobs < 2) throw std::invalid_argument("synth: need at least 2 blobs");
    if (spec.per_blob < 1) throw std::invalid_argument("synth: per_blob must be >= 1");
    if (spec.dim < 1) throw std::invalid_argument("synth: dim must be >= 1");
    if (spec.separation <= 0.0)
        throw std::invalid_argument("synth: separation must be positive");
    if (spec.label_noise < 0.0 || spec.label_noise > 1.0)
        throw std::invalid_argument("synth: label_noise must be in [0, 1]");

    Rng rng(spec.seed);
    const std::size_t n = spec.blobs * spec.per_blob;

    // blob centers: coordinate axes while they last, then random directions
    Tensor2 centers = Tensor2::zeros(spec.blobs, spec.dim);
    for (std::size_t b = 0; b < spec.blobs; ++b) {
        if (b < spec.dim) {
            centers.at(b, b) = spec.separation;
        } else {
            double norm = 0.0;
            for (std::size_t c = 0; c < spec.dim; ++c) {
                centers.at(b, c) = rng.normal();
                norm += centers.at(b, c) * centers.at(b, c);
            }
            norm = std::sqrt(norm);
            for (std::size_t c = 0; c < spec.dim; ++c)
                centers.at(b, c) *= spec.separation / norm;
        }
    }

    Dataset ds;
    ds.id = "synth-blobs";
    ds.notes = "gaussian blobs, separation " + std::to_string(spec.separation);
    ds.features.values = Tensor2::zeros(n, spec.dim);
    for (std::size_t i = 0; i < n; ++i) {
        const std::size_t b = i / spec.per_blob;
        ds.features.ids.push_back(padded_id("synth", i));
        ds.blob.push_back(static_cast<int>(b));
        for (std::size_t c = 0; c < spec.dim; ++c)
            ds.features.values.at(i, c) = centers.at(b, c) + rng.normal();

        int valence, arousal;
        quadrant_of(b, valence, arousal);
        // flip draws happen unconditionally so the feature stream is
        // identical across label_noise settings
        if (rng.uniform() < spec.label_noise) valence = -valence;
        if (rng.uniform() < spec.label_noise) arousal = -arousal;
        ds.valence.push_back(valence);
        ds.arousal.push_back(arousal);
    }
    validate_dataset(ds);
    return ds;
}

Dataset temporal_synth_dataset(const TemporalSynthSpec& spec) {
    if (spec.per_class < 1)
        throw std::invalid_argument("temporal synth: per_class must be >= 1");
    if (spec.frames < 4)
        throw std::invalid_argument("temporal synth: needs at least 4 frames");
    if (spec.dim < 1) throw std::invalid_argument("temporal synth: dim must be >= 1");
    if (spec.motifs < 1)
        throw std::invalid_argument("temporal synth: motifs must be >= 1");
    if (spec.amp_ratio <= 0.0)
        throw std::invalid_argument("temporal synth: amp_ratio must be positive");
    if (spec.noise < 0.0)
        throw std::invalid_argument("temporal synth: noise must be >= 0");

    Rng rng(spec.seed);
    const std::size_t n = 2 * spec.per_class;
    const std::size_t max_shift = spec.frames / 2;
    const std::size_t motif_len = spec.frames + max_shift;

    // each motif: a fixed unit direction (so mean frames have a stable,
    // class-independent angle) plus smooth AR(1) wander around it
    std::vector<Tensor2> motifs;
    for (std::size_t m = 0; m < spec.motifs; ++m) {
        std::vector<double> base(spec.dim);
        double norm = 0.0;
        for (auto& v : base) {
            v = rng.normal();
            norm += v * v;
        }
        norm = std::sqrt(norm);
        for (auto& v : base) v /= norm;

        Tensor2 motif = Tensor2::zeros(motif_len, spec.dim);
        std::vector<double> state(spec.dim, 0.0);
        const double rho = 0.9;
        const double drive = std::sqrt(1.0 - rho * rho) * 0.5;
        for (std::size_t t = 0; t < motif_len; ++t) {
            for (std::size_t c = 0; c < spec.dim; ++c) {
                state[c] = rho * state[c] + drive * rng.normal();
                motif.at(t, c) = base[c] + state[c];
            }
        }
        motifs.push_back(std::move(motif));
    }

    Dataset ds;
    ds.id = "synth-temporal";
    ds.notes = "amplitude-coded sequences, amp_ratio " +
               std::to_string(spec.amp_ratio);
    ds.features.values = Tensor2::zeros(n, spec.dim);
    for (std::size_t u = 0; u < n; ++u) {
        const int cls = static_cast<int>(u % 2);
        const std::size_t m = (u / 2) % spec.motifs;
        const double amp = (cls == 0 ? 1.0 : spec.amp_ratio) *
                           (1.0 + spec.amp_jitter * rng.normal());
        const std::size_t shift = rng.index(max_shift + 1);

        Tensor2 seq = Tensor2::zeros(spec.frames, spec.dim);
        for (std::size_t t = 0; t < spec.frames; ++t)
            for (std::size_t c = 0; c < spec.dim; ++c)
                seq.at(t, c) = amp * motifs[m].at(t + shift, c) +
                               spec.noise * rng.normal();

        // static features: the mean frame; class only scales it
        for (std::size_t t = 0; t < spec.frames; ++t)
            for (std::size_t c = 0; c < spec.dim; ++c)
                ds.features.values.at(u, c) +=
                    seq.at(t, c) / static_cast<double>(spec.frames);

        ds.features.ids.push_back(padded_id("temporal", u));
        ds.sequences.push_back(std::move(seq));
        ds.blob.push_back(static_cast<int>(2 * m) + cls);
        ds.valence.push_back(cls == 1 ? 1 : -1);
        ds.arousal.push_back(m % 2 == 1 ? 1 : -1);
    }
    validate_dataset(ds);
    return ds;
}

}  // namespace malkit::harness
