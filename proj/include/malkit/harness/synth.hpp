#ifndef MALKIT_HARNESS_SYNTH_HPP
#define MALKIT_HARNESS_SYNTH_HPP

#include <cstdint>

#include "malkit/harness/dataset.hpp"

namespace malkit::harness {

// Gaussian blob corpus. Blob b sits at `separation` along coordinate axis
// b (wrapping through random orthonormal-ish directions past the dimension
// count) with unit spread, and is labeled by cycling through the four
// valence/arousal quadrants. label_noise flips each task's label
// independently with that probability.
struct SynthSpec {
    std::size_t blobs = 4;
    std::size_t per_blob = 375;
    std::size_t dim = 40;
    double separation = 5.0;
    double label_noise = 0.0;
    std::uint64_t seed = 0;
};

Dataset synth_dataset(const SynthSpec& spec);

// Sequence corpus where the class lives in the temporal amplitude, not in
// frame direction. Every utterance follows one of `motifs` shared smooth
// frame trajectories; class 0 plays its motif at unit amplitude, class 1
// at `amp_ratio` (both jittered by amp_jitter). The per-utterance mean
// frame is the static feature, so class identity only scales it: angular
// metrics on the raw features cannot see the class, while anything
// amplitude-aware (a sequence model, an RBF on standardized features) can.
// Valence encodes the class; arousal encodes motif parity.
struct TemporalSynthSpec {
    std::size_t per_class = 150;  // two classes
    std::size_t frames = 80;
    std::size_t dim = 20;
    std::size_t motifs = 4;
    double amp_ratio = 1.6;
    double amp_jitter = 0.1;
    double noise = 0.05;
    std::uint64_t seed = 0;
};

Dataset temporal_synth_dataset(const TemporalSynthSpec& spec);

}  // namespace malkit::harness

#endif  // MALKIT_HARNESS_SYNTH_HPP
