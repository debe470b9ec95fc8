#include "malkit/nn/mse.hpp"

#include <stdexcept>

namespace malkit::nn {

double mse_loss(const Tensor2& prediction, const Tensor2& target) {
    if (!prediction.same_shape(target)) {
        throw std::invalid_argument("mse_loss: shape mismatch");
    }
    double sum = 0.0;
    for (std::size_t i = 0; i < prediction.data.size(); ++i) {
        const double d = prediction.data[i] - target.data[i];
        sum += d * d;
    }
    return sum / static_cast<double>(prediction.data.size());
}

Tensor2 mse_grad(const Tensor2& prediction, const Tensor2& target) {
    if (!prediction.same_shape(target)) {
        throw std::invalid_argument("mse_grad: shape mismatch");
    }
    Tensor2 g(prediction.rows, prediction.cols);
    const double scale = 2.0 / static_cast<double>(prediction.data.size());
    for (std::size_t i = 0; i < g.data.size(); ++i) {
        g.data[i] = scale * (prediction.data[i] - target.data[i]);
    }
    return g;
}

}  // namespace malkit::nn
