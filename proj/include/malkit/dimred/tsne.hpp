#ifndef MALKIT_DIMRED_TSNE_HPP
#define MALKIT_DIMRED_TSNE_HPP

#include <cstdint>
#include <vector>

#include "malkit/tensor.hpp"

namespace malkit::dimred {

struct TsneConfig {
    double perplexity = 30.0;
    double early_exaggeration = 12.0;
    std::size_t exaggeration_iters = 250;  // also the momentum switch point
    double learning_rate = 200.0;
    std::size_t max_iters = 1000;
    std::uint64_t seed = 0;  // only used when the PCA init degenerates
};

struct TsneResult {
    Tensor2 embedding;             // N x 2
    std::vector<double> kl_curve;  // per-iteration KL against the real P
};

// Exact (quadratic) t-SNE into two dimensions. Per-point bandwidths are
// binary-searched to hit the target perplexity, affinities symmetrized and
// floored at 1e-12, and the embedding starts from 2-D PCA rescaled so its
// first coordinate has std 1e-4. Requires N >= 10 and 3*perplexity < N.
TsneResult tsne_embed(const Tensor2& data, const TsneConfig& config = {});

}  // namespace malkit::dimred

#endif  // MALKIT_DIMRED_TSNE_HPP
