#include "malkit/feature_matrix.hpp"

#include <cstring>
#include <stdexcept>

namespace malkit {

FeatureMatrix::FeatureMatrix(std::vector<std::string> row_ids, Tensor2 matrix)
    : ids(std::move(row_ids)), values(std::move(matrix)) {
    if (ids.size() != values.rows) {
        throw std::invalid_argument("FeatureMatrix: " +
                                    std::to_string(ids.size()) + " ids for " +
                                    std::to_string(values.rows) + " rows");
    }
}

FeatureMatrix FeatureMatrix::subset(const std::vector<std::size_t>& rows) const {
    Tensor2 out(rows.size(), values.cols);
    std::vector<std::string> out_ids;
    out_ids.reserve(rows.size());
    for (std::size_t r = 0; r < rows.size(); ++r) {
        if (rows[r] >= values.rows) {
            throw std::invalid_argument("FeatureMatrix::subset: row " +
                                        std::to_string(rows[r]) +
                                        " out of range");
        }
        std::memcpy(out.row_ptr(r), values.row_ptr(rows[r]),
                    values.cols * sizeof(double));
        out_ids.push_back(ids[rows[r]]);
    }
    return FeatureMatrix(std::move(out_ids), std::move(out));
}

}  // namespace malkit
