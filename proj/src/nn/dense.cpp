#include "malkit/nn/dense.hpp"

#include <cmath>
#include <stdexcept>

namespace malkit::nn {

double elu(double x) { return x > 0.0 ? x : std::expm1(x); }

// ELU is invertible, so the derivative can be recovered from the output:
// y > 0 -> 1, else y = e^x - 1 -> dy/dx = e^x = y + 1.
double elu_derivative_from_output(double y) { return y > 0.0 ? 1.0 : y + 1.0; }

DenseLayer make_dense(std::size_t in_dim, std::size_t out_dim,
                      Activation activation, Rng& rng) {
    DenseLayer layer;
    layer.weights = Tensor2(in_dim, out_dim);
    layer.bias.assign(out_dim, 0.0);
    layer.activation = activation;
    const double limit =
        std::sqrt(6.0 / static_cast<double>(in_dim + out_dim));
    for (double& w : layer.weights.data) w = rng.uniform(-limit, limit);
    return layer;
}

DenseGrads zero_grads(const DenseLayer& layer) {
    DenseGrads g;
    g.d_weights = Tensor2(layer.weights.rows, layer.weights.cols);
    g.d_bias.assign(layer.bias.size(), 0.0);
    return g;
}

Tensor2 dense_forward(const DenseLayer& layer, const Tensor2& input,
                      DenseCache* cache) {
    if (input.cols != layer.in_dim()) {
        throw std::invalid_argument("dense_forward: input dim " +
                                    std::to_string(input.cols) +
                                    " vs layer in dim " +
                                    std::to_string(layer.in_dim()));
    }
    Tensor2 out = matmul(input, layer.weights);
    add_row_inplace(out, layer.bias);
    if (layer.activation == Activation::kElu) {
        for (double& v : out.data) v = elu(v);
    }
    if (cache != nullptr) {
        cache->input = input;
        cache->output = out;
    }
    return out;
}

Tensor2 dense_backward(const DenseLayer& layer, const DenseCache& cache,
                       const Tensor2& d_output, DenseGrads& grads) {
    if (!d_output.same_shape(cache.output)) {
        throw std::invalid_argument("dense_backward: gradient shape mismatch");
    }
    Tensor2 d_pre = d_output;
    if (layer.activation == Activation::kElu) {
        for (std::size_t i = 0; i < d_pre.data.size(); ++i) {
            d_pre.data[i] *= elu_derivative_from_output(cache.output.data[i]);
        }
    }
    matmul_tn_add(cache.input, d_pre, grads.d_weights);
    for (std::size_t r = 0; r < d_pre.rows; ++r) {
        const double* p = d_pre.row_ptr(r);
        for (std::size_t c = 0; c < d_pre.cols; ++c) grads.d_bias[c] += p[c];
    }
    return matmul_nt(d_pre, layer.weights);
}

}  // namespace malkit::nn
