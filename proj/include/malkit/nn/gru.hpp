#ifndef MALKIT_NN_GRU_HPP
#define MALKIT_NN_GRU_HPP

#include <vector>

#include "malkit/rng.hpp"
#include "malkit/tensor.hpp"

namespace malkit::nn {

// Gated recurrent unit, standard reset/update/candidate formulation:
//   z_t = sigmoid(x W_z + h_{t-1} U_z + b_z)
//   r_t = sigmoid(x W_r + h_{t-1} U_r + b_r)
//   g_t = tanh(x W_c + (r_t . h_{t-1}) U_c + b_c)
//   h_t = z_t . h_{t-1} + (1 - z_t) . g_t
// Row-vector convention throughout: states are rows, weights multiply on the
// right.
struct GruCell {
    Tensor2 w_update, w_reset, w_cand;  // in x hidden
    Tensor2 u_update, u_reset, u_cand;  // hidden x hidden
    std::vector<double> b_update, b_reset, b_cand;

    std::size_t input_dim() const { return w_update.rows; }
    std::size_t hidden_dim() const { return w_update.cols; }
};

GruCell make_gru(std::size_t input_dim, std::size_t hidden_dim, Rng& rng);

// One step on a single vector. Throws on dimension mismatch.
std::vector<double> gru_step(const GruCell& cell,
                             const std::vector<double>& input,
                             const std::vector<double>& hidden);

// Batched scan over fixed-length sequences stored time-major: row t*B+b of
// `input` is frame t of sequence b. The initial hidden state is zero.
struct GruScanCache {
    Tensor2 input;                          // (T*B) x in
    Tensor2 update, reset, cand, reset_h;   // (T*B) x H
    Tensor2 h_all;                          // (T+1)*B x H, block 0 = zeros
    std::size_t batch = 0, steps = 0;
};

struct GruGrads {
    Tensor2 w_update, w_reset, w_cand;
    Tensor2 u_update, u_reset, u_cand;
    std::vector<double> b_update, b_reset, b_cand;
};

GruGrads zero_grads(const GruCell& cell);

// Returns hidden states h_1..h_T, time-major (T*B) x H.
Tensor2 gru_scan_forward(const GruCell& cell, const Tensor2& input,
                         std::size_t batch, GruScanCache* cache = nullptr);

// d_hidden holds dL/dh_t for every output row. Accumulates weight gradients
// and returns dL/dinput.
Tensor2 gru_scan_backward(const GruCell& cell, const GruScanCache& cache,
                          const Tensor2& d_hidden, GruGrads& grads);

}  // namespace malkit::nn

#endif  // MALKIT_NN_GRU_HPP
