#ifndef MALKIT_NN_DROPOUT_HPP
#define MALKIT_NN_DROPOUT_HPP

#include "malkit/rng.hpp"
#include "malkit/tensor.hpp"

namespace malkit::nn {

// Inverted dropout: surviving units are scaled by 1/(1-rate) at train time so
// evaluation is a plain identity. Mask entries are 0 or 1/(1-rate).
struct DropoutMask {
    Tensor2 mask;
    double rate = 0.0;
};

Tensor2 dropout_forward(const Tensor2& input, double rate, Rng& rng,
                        DropoutMask* mask = nullptr);

Tensor2 dropout_backward(const DropoutMask& mask, const Tensor2& d_output);

}  // namespace malkit::nn

#endif  // MALKIT_NN_DROPOUT_HPP
