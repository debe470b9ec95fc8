#ifndef MALKIT_NN_DENSE_HPP
#define MALKIT_NN_DENSE_HPP

#include <vector>

#include "malkit/rng.hpp"
#include "malkit/tensor.hpp"

namespace malkit::nn {

enum class Activation { kIdentity, kElu };

// ELU with alpha = 1.
double elu(double x);
double elu_derivative_from_output(double y);

struct DenseLayer {
    Tensor2 weights;           // in x out
    std::vector<double> bias;  // out
    Activation activation = Activation::kIdentity;

    std::size_t in_dim() const { return weights.rows; }
    std::size_t out_dim() const { return weights.cols; }
};

// Glorot-uniform init: +-sqrt(6 / (fan_in + fan_out)).
DenseLayer make_dense(std::size_t in_dim, std::size_t out_dim,
                      Activation activation, Rng& rng);

struct DenseCache {
    Tensor2 input;   // rows x in
    Tensor2 output;  // rows x out, post-activation
};

struct DenseGrads {
    Tensor2 d_weights;
    std::vector<double> d_bias;
};

DenseGrads zero_grads(const DenseLayer& layer);

// Y = act(X W + b). `cache`, when given, captures what backward needs.
Tensor2 dense_forward(const DenseLayer& layer, const Tensor2& input,
                      DenseCache* cache = nullptr);

// Given dL/dY, accumulates dW/db into `grads` and returns dL/dX.
Tensor2 dense_backward(const DenseLayer& layer, const DenseCache& cache,
                       const Tensor2& d_output, DenseGrads& grads);

}  // namespace malkit::nn

#endif  // MALKIT_NN_DENSE_HPP
