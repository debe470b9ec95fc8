#include "malkit/nn/dropout.hpp"

#include <stdexcept>

namespace malkit::nn {

Tensor2 dropout_forward(const Tensor2& input, double rate, Rng& rng,
                        DropoutMask* mask) {
    if (rate < 0.0 || rate >= 1.0) {
        throw std::invalid_argument("dropout_forward: rate must be in [0, 1)");
    }
    Tensor2 out = input;
    Tensor2 m(input.rows, input.cols);
    const double keep_scale = 1.0 / (1.0 - rate);
    for (std::size_t i = 0; i < out.data.size(); ++i) {
        const double keep = rng.uniform() >= rate ? keep_scale : 0.0;
        m.data[i] = keep;
        out.data[i] *= keep;
    }
    if (mask != nullptr) {
        mask->mask = std::move(m);
        mask->rate = rate;
    }
    return out;
}

Tensor2 dropout_backward(const DropoutMask& mask, const Tensor2& d_output) {
    if (!d_output.same_shape(mask.mask)) {
        throw std::invalid_argument("dropout_backward: shape mismatch");
    }
    Tensor2 d_input = d_output;
    for (std::size_t i = 0; i < d_input.data.size(); ++i) {
        d_input.data[i] *= mask.mask.data[i];
    }
    return d_input;
}

}  // namespace malkit::nn
