#ifndef MALKIT_MAL_AFFINITY_HPP
#define MALKIT_MAL_AFFINITY_HPP

#include <string>

#include "malkit/tensor.hpp"

namespace malkit::mal {

enum class Metric { euclidean, cosine };

Metric metric_from_string(const std::string& name);
std::string metric_to_string(Metric metric);

// Pairwise distance table. Symmetric, zero diagonal, non-negative;
// cosine distances live in [0, 2].
struct AffinityMatrix {
    Tensor2 dist;   // N x N
    Metric metric = Metric::euclidean;

    std::size_t size() const { return dist.rows; }
    double at(std::size_t i, std::size_t j) const { return dist.at(i, j); }
};

// Computes all pairwise distances. Cosine rejects zero-norm rows.
AffinityMatrix affinity(const Tensor2& data, Metric metric);

// Binary cache so budget sweeps over the same features don't recompute
// the O(N^2 D) table. Format: magic, N, metric tag, row-major f64 block.
void save_affinity(const std::string& path, const AffinityMatrix& a);
AffinityMatrix load_affinity(const std::string& path);

}  // namespace malkit::mal

#endif  // MALKIT_MAL_AFFINITY_HPP
