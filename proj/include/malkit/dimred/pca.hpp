#ifndef MALKIT_DIMRED_PCA_HPP
#define MALKIT_DIMRED_PCA_HPP

#include <string>
#include <vector>

#include "malkit/tensor.hpp"

namespace malkit::dimred {

struct PcaModel {
    std::vector<double> mean;        // D
    Tensor2 components;              // D x d, orthonormal columns
    std::vector<double> explained;   // d variances, non-increasing
};

// Principal axes via SVD of the centered data. Valid when
// 1 <= d <= min(N-1, D); the sign of each component is fixed by making its
// largest-magnitude coordinate positive (lowest index wins ties).
PcaModel pca_fit(const Tensor2& data, std::size_t d);

// (x - mean) * components, N x d.
Tensor2 pca_transform(const PcaModel& model, const Tensor2& data);

// transform followed by the adjoint map back into input space.
Tensor2 pca_reconstruct(const PcaModel& model, const Tensor2& data);

void save_pca_model(const std::string& path, const PcaModel& model);
PcaModel load_pca_model(const std::string& path);

}  // namespace malkit::dimred

#endif  // MALKIT_DIMRED_PCA_HPP
