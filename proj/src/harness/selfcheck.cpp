#include "malkit/harness/selfcheck.hpp"

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <vector>

#include "malkit/cpc/infonce.hpp"
#include "malkit/cpc/model.hpp"
#include "malkit/dimred/pca.hpp"
#include "malkit/eval/mcc.hpp"
#include "malkit/mal/affinity.hpp"
#include "malkit/mal/kmedoids.hpp"
#include "malkit/rng.hpp"
#include "malkit/tensor.hpp"

namespace malkit::harness {
namespace {

Tensor2 random_points(std::size_t n, std::size_t d, Rng& rng) {
    Tensor2 out(n, d);
    for (double& v : out.data) v = rng.uniform(-1.0, 1.0);
    return out;
}

bool check_mcc(Rng& rng) {
    for (int trial = 0; trial < 1000; ++trial) {
        eval::ConfusionCounts c;
        c.tp = rng.index(20);
        c.tn = rng.index(20);
        c.fp = rng.index(20);
        c.fn = rng.index(20);
        if (c.total() == 0) c.tp = 1;
        double tp = static_cast<double>(c.tp), tn = static_cast<double>(c.tn);
        double fp = static_cast<double>(c.fp), fn = static_cast<double>(c.fn);
        double denom = std::sqrt((tp + fp) * (tp + fn) * (tn + fp) * (tn + fn));
        double want = denom == 0.0 ? 0.0 : (tp * tn - fp * fn) / denom;
        if (std::fabs(eval::mcc(c) - want) > 1e-12) return false;
    }
    return true;
}

// Exhaustive k-medoids optimum by enumerating every k-subset.
double best_cost(const mal::AffinityMatrix& a, std::size_t k) {
    const std::size_t n = a.size();
    std::vector<bool> mask(n, false);
    std::fill(mask.end() - static_cast<long>(k), mask.end(), true);
    double best = 1e300;
    do {
        double cost = 0.0;
        for (std::size_t i = 0; i < n; ++i) {
            double nearest = 1e300;
            for (std::size_t m = 0; m < n; ++m)
                if (mask[m]) nearest = std::min(nearest, a.at(i, m));
            cost += nearest;
        }
        best = std::min(best, cost);
    } while (std::next_permutation(mask.begin(), mask.end()));
    return best;
}

bool check_kmedoids(Rng& rng) {
    for (int trial = 0; trial < 12; ++trial) {
        std::size_t n = 5 + rng.index(4);  // 5..8
        std::size_t k = 1 + rng.index(3);
        Tensor2 pts = random_points(n, 3, rng);
        mal::AffinityMatrix a = mal::affinity(pts, mal::Metric::euclidean);
        mal::ClusteringResult got = mal::k_medoids(a, k, rng.index(1000) + 1);
        if (got.cost > 1.2 * best_cost(a, k) + 1e-12) return false;
        for (std::size_t i = 1; i < got.cost_curve.size(); ++i)
            if (got.cost_curve[i] > got.cost_curve[i - 1] + 1e-12) return false;
    }
    return true;
}

bool check_farthest_first(Rng& rng) {
    for (int trial = 0; trial < 20; ++trial) {
        std::size_t n = 6 + rng.index(10);
        Tensor2 pts = random_points(n, 4, rng);
        mal::AffinityMatrix a = mal::affinity(pts, mal::Metric::euclidean);
        std::size_t k = 2 + rng.index(n - 2);
        std::vector<std::size_t> picks =
            mal::farthest_first(a, k, rng.index(1000));
        std::vector<bool> in_set(n, false);
        in_set[picks[0]] = true;
        for (std::size_t step = 1; step < picks.size(); ++step) {
            // every candidate's distance to the current set
            double best = -1.0;
            std::size_t best_idx = 0;
            for (std::size_t i = 0; i < n; ++i) {
                if (in_set[i]) continue;
                double d = 1e300;
                for (std::size_t j = 0; j < n; ++j)
                    if (in_set[j]) d = std::min(d, a.at(i, j));
                if (d > best) {
                    best = d;
                    best_idx = i;
                }
            }
            if (picks[step] != best_idx) return false;
            in_set[picks[step]] = true;
        }
    }
    return true;
}

// Straight-from-the-definition softmax loss; shares only (z, c) with the
// library.
double brute_infonce(const cpc::CpcModel& model, const cpc::CpcBatch& batch) {
    cpc::CpcForward fwd = cpc::cpc_forward(model, batch);
    const std::size_t B = batch.batch;
    const std::size_t T = batch.steps();
    const std::size_t K = model.config.num_steps;
    const std::size_t H = model.config.hidden_dim;
    double total = 0.0;
    std::size_t steps_used = 0;
    for (std::size_t k = 1; k <= K; ++k) {
        double loss_k = 0.0;
        std::size_t count = 0;
        for (std::size_t t = 0; t + K < T; ++t) {
            for (std::size_t b = 0; b < B; ++b) {
                if (t + k >= batch.real_frames[b]) continue;
                std::vector<double> scores(B, 0.0);
                for (std::size_t j = 0; j < B; ++j)
                    for (std::size_t p = 0; p < H; ++p)
                        for (std::size_t q = 0; q < H; ++q)
                            scores[j] += fwd.z.at((t + k) * B + j, p) *
                                         model.predictors[k - 1].at(p, q) *
                                         fwd.c.at(t * B + b, q);
                double denom = 0.0;
                for (double s : scores) denom += std::exp(s);
                loss_k -= std::log(std::exp(scores[b]) / denom);
                ++count;
            }
        }
        if (count > 0) {
            total += loss_k / static_cast<double>(count);
            ++steps_used;
        }
    }
    return total / static_cast<double>(steps_used);
}

bool check_infonce(Rng& rng) {
    cpc::CpcConfig cfg;
    cfg.input_dim = 5;
    cfg.hidden_dim = 6;
    cfg.num_steps = 3;
    cfg.encoder_dropout = 0.0;
    for (std::size_t B : {2u, 3u, 4u}) {
        cpc::CpcModel model = cpc::make_cpc_model(cfg, rng);
        cpc::CpcBatch batch;
        batch.batch = B;
        std::size_t T = 8 + rng.index(6);
        batch.frames = random_points(T * B, cfg.input_dim, rng);
        batch.real_frames.assign(B, T);
        batch.real_frames[0] = T - rng.index(3);  // some padding
        double got = cpc::infonce_loss(model, batch);
        if (std::fabs(got - brute_infonce(model, batch)) > 1e-10) return false;

        // zero predictors give uniform scores: exactly ln(B)
        for (Tensor2& w : model.predictors) w.fill(0.0);
        if (std::fabs(cpc::infonce_loss(model, batch) -
                      std::log(static_cast<double>(B))) > 1e-12)
            return false;
    }
    return true;
}

bool check_pca(Rng& rng) {
    Tensor2 data = random_points(50, 8, rng);
    dimred::PcaModel model = dimred::pca_fit(data, 8);
    // column i . column j == [i == j]
    for (std::size_t i = 0; i < 8; ++i) {
        for (std::size_t j = 0; j < 8; ++j) {
            double dot = 0.0;
            for (std::size_t d = 0; d < 8; ++d)
                dot += model.components.at(d, i) * model.components.at(d, j);
            if (std::fabs(dot - (i == j ? 1.0 : 0.0)) > 1e-8) return false;
        }
    }
    for (std::size_t i = 1; i < model.explained.size(); ++i)
        if (model.explained[i] > model.explained[i - 1] + 1e-12) return false;
    return true;
}

}  // namespace

int selfcheck(std::ostream& out) {
    Rng rng(20240817);
    int failures = 0;
    auto report = [&](const char* name, bool ok) {
        out << (ok ? "[ok]   " : "[FAIL] ") << name << "\n";
        if (!ok) ++failures;
    };
    report("mcc matches the closed-form formula (1000 random tables)",
           check_mcc(rng));
    report("k-medoids cost within 1.2x of the exhaustive optimum",
           check_kmedoids(rng));
    report("farthest-first picks replay the max-min rule exactly",
           check_farthest_first(rng));
    report("infonce equals the materialized softmax; uniform scores give ln B",
           check_infonce(rng));
    report("pca components orthonormal with descending explained variance",
           check_pca(rng));
    out << (failures == 0 ? "selfcheck: all checks passed\n"
                          : "selfcheck: FAILURES present\n");
    return failures;
}

}  // namespace malkit::harness
