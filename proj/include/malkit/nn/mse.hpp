#ifndef MALKIT_NN_MSE_HPP
#define MALKIT_NN_MSE_HPP

#include "malkit/tensor.hpp"

namespace malkit::nn {

// Mean over all entries of (prediction - target)^2.
double mse_loss(const Tensor2& prediction, const Tensor2& target);

// dL/dprediction for mse_loss.
Tensor2 mse_grad(const Tensor2& prediction, const Tensor2& target);

}  // namespace malkit::nn

#endif  // MALKIT_NN_MSE_HPP
