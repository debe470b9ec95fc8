#ifndef MALKIT_AUDIO_FUNCTIONALS_HPP
#define MALKIT_AUDIO_FUNCTIONALS_HPP

#include <vector>

#include "malkit/tensor.hpp"

namespace malkit::audio {

// Utterance-level pooling of frame features. Layout, for B input bands:
//   [0,           7B)  static: per band {mean, var, skew, kurt, min, max, range}
//   [7B,         11B)  first-order deltas: per band {mean, var, skew, kurt}
//   [11B,        15B)  second-order deltas: per band {mean, var, skew, kurt}
// Bands are contiguous within each block (band-major). 40 bands -> 600 dims.
//
// Moments are population moments; kurtosis is non-excess (Gaussian -> 3);
// zero-variance series yield skew = kurt = 0. Deltas are regression deltas
// with window +-2 and edge frames replicated. Requires at least 3 frames.
std::vector<double> functionals(const Tensor2& frames);

// Regression deltas over time for every column: d_t = sum_{n=1..2} n *
// (x_{t+n} - x_{t-n}) / (2 * sum n^2), indices clamped to [0, T-1].
Tensor2 delta_frames(const Tensor2& frames);

}  // namespace malkit::audio

#endif  // MALKIT_AUDIO_FUNCTIONALS_HPP
