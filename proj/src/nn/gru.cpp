#include "malkit/nn/gru.hpp"

#include <cmath>
#include <cstring>
#include <stdexcept>

namespace malkit::nn {

namespace {

double sigmoid(double x) { return 1.0 / (1.0 + std::exp(-x)); }

Tensor2 rows_block(const Tensor2& m, std::size_t first_row, std::size_t count) {
    Tensor2 out(count, m.cols);
    std::memcpy(out.data.data(), m.row_ptr(first_row),
                count * m.cols * sizeof(double));
    return out;
}

void store_block(Tensor2& dst, std::size_t first_row, const Tensor2& block) {
    std::memcpy(dst.row_ptr(first_row), block.data.data(),
                block.size() * sizeof(double));
}

}  // namespace

GruCell make_gru(std::size_t input_dim, std::size_t hidden_dim, Rng& rng) {
    GruCell cell;
    const double in_limit =
        std::sqrt(6.0 / static_cast<double>(input_dim + hidden_dim));
    const double rec_limit =
        std::sqrt(6.0 / static_cast<double>(2 * hidden_dim));
    auto init = [&](Tensor2& w, std::size_t r, std::size_t c, double limit) {
        w = Tensor2(r, c);
        for (double& v : w.data) v = rng.uniform(-limit, limit);
    };
    init(cell.w_update, input_dim, hidden_dim, in_limit);
    init(cell.w_reset, input_dim, hidden_dim, in_limit);
    init(cell.w_cand, input_dim, hidden_dim, in_limit);
    init(cell.u_update, hidden_dim, hidden_dim, rec_limit);
    init(cell.u_reset, hidden_dim, hidden_dim, rec_limit);
    init(cell.u_cand, hidden_dim, hidden_dim, rec_limit);
    cell.b_update.assign(hidden_dim, 0.0);
    cell.b_reset.assign(hidden_dim, 0.0);
    cell.b_cand.assign(hidden_dim, 0.0);
    return cell;
}

GruGrads zero_grads(const GruCell& cell) {
    GruGrads g;
    g.w_update = Tensor2(cell.w_update.rows, cell.w_update.cols);
    g.w_reset = Tensor2(cell.w_reset.rows, cell.w_reset.cols);
    g.w_cand = Tensor2(cell.w_cand.rows, cell.w_cand.cols);
    g.u_update = Tensor2(cell.u_update.rows, cell.u_update.cols);
    g.u_reset = Tensor2(cell.u_reset.rows, cell.u_reset.cols);
    g.u_cand = Tensor2(cell.u_cand.rows, cell.u_cand.cols);
    g.b_update.assign(cell.b_update.size(), 0.0);
    g.b_reset.assign(cell.b_reset.size(), 0.0);
    g.b_cand.assign(cell.b_cand.size(), 0.0);
    return g;
}

std::vector<double> gru_step(const GruCell& cell,
                             const std::vector<double>& input,
                             const std::vector<double>& hidden) {
    const std::size_t in = cell.input_dim();
    const std::size_t h = cell.hidden_dim();
    if (input.size() != in || hidden.size() != h) {
        throw std::invalid_argument("gru_step: input " +
                                    std::to_string(input.size()) + "/hidden " +
                                    std::to_string(hidden.size()) +
                                    " vs cell " + std::to_string(in) + "/" +
                                    std::to_string(h));
    }
    std::vector<double> out(h);
    std::vector<double> a_update(cell.b_update), a_reset(cell.b_reset);
    std::vector<double> a_cand(cell.b_cand);
    for (std::size_t i = 0; i < in; ++i) {
        const double x = input[i];
        for (std::size_t j = 0; j < h; ++j) {
            a_update[j] += x * cell.w_update.at(i, j);
            a_reset[j] += x * cell.w_reset.at(i, j);
            a_cand[j] += x * cell.w_cand.at(i, j);
        }
    }
    for (std::size_t i = 0; i < h; ++i) {
        const double hv = hidden[i];
        for (std::size_t j = 0; j < h; ++j) {
            a_update[j] += hv * cell.u_update.at(i, j);
            a_reset[j] += hv * cell.u_reset.at(i, j);
        }
    }
    std::vector<double> update(h), reset(h);
    for (std::size_t j = 0; j < h; ++j) {
        update[j] = sigmoid(a_update[j]);
        reset[j] = sigmoid(a_reset[j]);
    }
    for (std::size_t i = 0; i < h; ++i) {
        const double rh = reset[i] * hidden[i];
        for (std::size_t j = 0; j < h; ++j) {
            a_cand[j] += rh * cell.u_cand.at(i, j);
        }
    }
    for (std::size_t j = 0; j < h; ++j) {
        const double cand = std::tanh(a_cand[j]);
        out[j] = update[j] * hidden[j] + (1.0 - update[j]) * cand;
    }
    return out;
}

Tensor2 gru_scan_forward(const GruCell& cell, const Tensor2& input,
                         std::size_t batch, GruScanCache* cache) {
    const std::size_t in = cell.input_dim();
    const std::size_t h = cell.hidden_dim();
    if (input.cols != in) {
        throw std::invalid_argument("gru_scan_forward: input dim " +
                                    std::to_string(input.cols) + " vs " +
                                    std::to_string(in));
    }
    if (batch == 0 || input.rows % batch != 0) {
        throw std::invalid_argument(
            "gru_scan_forward: rows not a multiple of batch");
    }
    const std::size_t steps = input.rows / batch;

    // Input projections for all steps at once.
    Tensor2 xz = matmul(input, cell.w_update);
    Tensor2 xr = matmul(input, cell.w_reset);
    Tensor2 xc = matmul(input, cell.w_cand);
    add_row_inplace(xz, cell.b_update);
    add_row_inplace(xr, cell.b_reset);
    add_row_inplace(xc, cell.b_cand);

    Tensor2 h_all((steps + 1) * batch, h);
    Tensor2 update(steps * batch, h), reset(steps * batch, h);
    Tensor2 cand(steps * batch, h), reset_h(steps * batch, h);

    for (std::size_t t = 0; t < steps; ++t) {
        const std::size_t row = t * batch;
        Tensor2 h_prev = rows_block(h_all, row, batch);
        Tensor2 az = rows_block(xz, row, batch);
        Tensor2 ar = rows_block(xr, row, batch);
        matmul_add(h_prev, cell.u_update, az);
        matmul_add(h_prev, cell.u_reset, ar);
        for (double& v : az.data) v = sigmoid(v);
        for (double& v : ar.data) v = sigmoid(v);

        Tensor2 rh = ar;
        for (std::size_t i = 0; i < rh.data.size(); ++i) {
            rh.data[i] *= h_prev.data[i];
        }
        Tensor2 ac = rows_block(xc, row, batch);
        matmul_add(rh, cell.u_cand, ac);
        for (double& v : ac.data) v = std::tanh(v);

        Tensor2 h_new(batch, h);
        for (std::size_t i = 0; i < h_new.data.size(); ++i) {
            h_new.data[i] = az.data[i] * h_prev.data[i] +
                            (1.0 - az.data[i]) * ac.data[i];
        }

        store_block(update, row, az);
        store_block(reset, row, ar);
        store_block(cand, row, ac);
        store_block(reset_h, row, rh);
        store_block(h_all, row + batch, h_new);
    }

    Tensor2 out(steps * batch, h);
    std::memcpy(out.data.data(), h_all.row_ptr(batch),
                steps * batch * h * sizeof(double));
    if (cache != nullptr) {
        cache->input = input;
        cache->update = std::move(update);
        cache->reset = std::move(reset);
        cache->cand = std::move(cand);
        cache->reset_h = std::move(reset_h);
        cache->h_all = std::move(h_all);
        cache->batch = batch;
        cache->steps = steps;
    }
    return out;
}

Tensor2 gru_scan_backward(const GruCell& cell, const GruScanCache& cache,
                          const Tensor2& d_hidden, GruGrads& grads) {
    const std::size_t h = cell.hidden_dim();
    const std::size_t batch = cache.batch;
    const std::size_t steps = cache.steps;
    if (d_hidden.rows != steps * batch || d_hidden.cols != h) {
        throw std::invalid_argument("gru_scan_backward: gradient shape");
    }

    Tensor2 da_update(steps * batch, h);
    Tensor2 da_reset(steps * batch, h);
    Tensor2 da_cand(steps * batch, h);
    Tensor2 carry(batch, h);  // dL/dh_t flowing backwards

    for (std::size_t t = steps; t-- > 0;) {
        const std::size_t row = t * batch;
        Tensor2 dh = rows_block(d_hidden, row, batch);
        for (std::size_t i = 0; i < dh.data.size(); ++i) {
            dh.data[i] += carry.data[i];
        }
        const double* z = cache.update.row_ptr(row);
        const double* r = cache.reset.row_ptr(row);
        const double* g = cache.cand.row_ptr(row);
        const double* h_prev = cache.h_all.row_ptr(row);

        Tensor2 da_c(batch, h), da_z(batch, h);
        Tensor2 dh_prev(batch, h);
        for (std::size_t i = 0; i < batch * h; ++i) {
            const double dg = dh.data[i] * (1.0 - z[i]);
            const double dz = dh.data[i] * (h_prev[i] - g[i]);
            da_c.data[i] = dg * (1.0 - g[i] * g[i]);
            da_z.data[i] = dz * z[i] * (1.0 - z[i]);
            dh_prev.data[i] = dh.data[i] * z[i];
        }

        Tensor2 d_rh = matmul_nt(da_c, cell.u_cand);
        Tensor2 da_r(batch, h);
        for (std::size_t i = 0; i < batch * h; ++i) {
            const double dr = d_rh.data[i] * h_prev[i];
            da_r.data[i] = dr * r[i] * (1.0 - r[i]);
            dh_prev.data[i] += d_rh.data[i] * r[i];
        }
        matmul_nt_add(da_z, cell.u_update, dh_prev);
        matmul_nt_add(da_r, cell.u_reset, dh_prev);

        store_block(da_update, row, da_z);
        store_block(da_reset, row, da_r);
        store_block(da_cand, row, da_c);
        carry = std::move(dh_prev);
    }

    // Weight gradients in bulk. h_prev_all is h_all without its last block;
    // the candidate recurrence sees reset_h instead of h_prev.
    Tensor2 h_prev_all(steps * batch, h);
    std::memcpy(h_prev_all.data.data(), cache.h_all.data.data(),
                steps * batch * h * sizeof(double));
    matmul_tn_add(cache.input, da_update, grads.w_update);
    matmul_tn_add(cache.input, da_reset, grads.w_reset);
    matmul_tn_add(cache.input, da_cand, grads.w_cand);
    matmul_tn_add(h_prev_all, da_update, grads.u_update);
    matmul_tn_add(h_prev_all, da_reset, grads.u_reset);
    matmul_tn_add(cache.reset_h, da_cand, grads.u_cand);
    for (std::size_t rr = 0; rr < steps * batch; ++rr) {
        for (std::size_t c = 0; c < h; ++c) {
            grads.b_update[c] += da_update.at(rr, c);
            grads.b_reset[c] += da_reset.at(rr, c);
            grads.b_cand[c] += da_cand.at(rr, c);
        }
    }

    Tensor2 d_input = matmul_nt(da_update, cell.w_update);
    matmul_nt_add(da_reset, cell.w_reset, d_input);
    matmul_nt_add(da_cand, cell.w_cand, d_input);
    return d_input;
}

}  // namespace malkit::nn
