#include "malkit/audio/zscore.hpp"

#include <cmath>
#include <stdexcept>

namespace malkit::audio {

ZScoreStats zscore_fit(const Tensor2& data) {
    if (data.rows < 2)
        throw std::invalid_argument("zscore_fit needs at least 2 rows");
    ZScoreStats s;
    s.mean.assign(data.cols, 0.0);
    s.stddev.assign(data.cols, 0.0);
    std::vector<double> lo(data.cols, data.at(0, 0)), hi(data.cols);
    for (std::size_t c = 0; c < data.cols; ++c) lo[c] = hi[c] = data.at(0, c);
    for (std::size_t r = 0; r < data.rows; ++r) {
        for (std::size_t c = 0; c < data.cols; ++c) {
            const double v = data.at(r, c);
            s.mean[c] += v;
            lo[c] = std::min(lo[c], v);
            hi[c] = std::max(hi[c], v);
        }
    }
    for (double& m : s.mean) m /= static_cast<double>(data.rows);
    for (std::size_t r = 0; r < data.rows; ++r) {
        for (std::size_t c = 0; c < data.cols; ++c) {
            const double d = data.at(r, c) - s.mean[c];
            s.stddev[c] += d * d;
        }
    }
    for (std::size_t c = 0; c < data.cols; ++c) {
        // A truly constant column must come out as zero variance even when
        // mean subtraction leaves rounding dust.
        s.stddev[c] = lo[c] == hi[c]
                          ? 0.0
                          : std::sqrt(s.stddev[c] /
                                      static_cast<double>(data.rows - 1));
    }
    return s;
}

Tensor2 zscore_apply(const Tensor2& data, const ZScoreStats& stats) {
    if (data.cols != stats.mean.size())
        throw std::invalid_argument("zscore stats dimension mismatch");
    Tensor2 out = Tensor2::zeros(data.rows, data.cols);
    for (std::size_t r = 0; r < data.rows; ++r) {
        for (std::size_t c = 0; c < data.cols; ++c) {
            out.at(r, c) = stats.stddev[c] > 0.0
                               ? (data.at(r, c) - stats.mean[c]) / stats.stddev[c]
                               : 0.0;
        }
    }
    return out;
}

}  // namespace malkit::audio
