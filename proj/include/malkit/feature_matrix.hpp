#ifndef MALKIT_FEATURE_MATRIX_HPP
#define MALKIT_FEATURE_MATRIX_HPP

#include <string>
#include <vector>

#include "malkit/tensor.hpp"

namespace malkit {

// N x D table of per-utterance feature vectors plus row ids. Everything
// downstream of feature extraction (reducers, MAL, the SVM) consumes this.
struct FeatureMatrix {
    std::vector<std::string> ids;  // one per row
    Tensor2 values;                // N x D

    FeatureMatrix() = default;
    FeatureMatrix(std::vector<std::string> row_ids, Tensor2 matrix);

    std::size_t size() const { return values.rows; }
    std::size_t dim() const { return values.cols; }

    // Rows selected by index, in the given order.
    FeatureMatrix subset(const std::vector<std::size_t>& rows) const;
};

}  // namespace malkit

#endif  // MALKIT_FEATURE_MATRIX_HPP
