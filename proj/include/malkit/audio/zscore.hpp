#ifndef MALKIT_AUDIO_ZSCORE_HPP
#define MALKIT_AUDIO_ZSCORE_HPP

#include <vector>

#include "malkit/tensor.hpp"

namespace malkit::audio {

struct ZScoreStats {
    std::vector<double> mean;
    std::vector<double> stddev;  // sample standard deviation (N-1)
};

// Column-wise statistics; needs at least 2 rows.
ZScoreStats zscore_fit(const Tensor2& data);

// (x - mean) / std per column; zero-variance columns map to 0.
Tensor2 zscore_apply(const Tensor2& data, const ZScoreStats& stats);

}  // namespace malkit::audio

#endif  // MALKIT_AUDIO_ZSCORE_HPP
