#include "malkit/cpc/infonce.hpp"

#include <cmath>
#include <stdexcept>

#include <Eigen/Dense>

namespace malkit::cpc {

namespace {

using RowMat =
    Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;
using MapMat = Eigen::Map<RowMat>;
using ConstMapMat = Eigen::Map<const RowMat>;

}  // namespace

double infonce_loss(const CpcModel& model, const CpcBatch& batch, Rng* rng,
                    bool training, CpcGrads* grads) {
    const std::size_t B = batch.batch;
    const std::size_t T = batch.steps();
    const std::size_t K = model.config.num_steps;
    const std::size_t H = model.config.hidden_dim;
    if (B < 2) throw std::invalid_argument("need at least 2 utterances for negatives");
    if (T <= K) throw std::invalid_argument("sequence shorter than prediction horizon");
    if (batch.real_frames.size() != B)
        throw std::invalid_argument("real_frames size must equal batch size");

    CpcForwardCache cache;
    CpcForward fwd = cpc_forward(model, batch, training, rng, &cache);

    const std::size_t anchors = T - K;  // anchor times 0..T-K-1, shared by all k

    // Valid anchors per (k, b): positive index t+k must be a real frame.
    std::vector<std::size_t> count_k(K, 0);
    for (std::size_t k = 1; k <= K; ++k) {
        for (std::size_t b = 0; b < B; ++b) {
            const std::size_t real = std::min(batch.real_frames[b], T);
            const std::size_t usable = real > k ? std::min(anchors, real - k) : 0;
            count_k[k - 1] += usable;
        }
    }
    std::size_t steps_used = 0;
    for (std::size_t k = 0; k < K; ++k)
        if (count_k[k] > 0) ++steps_used;
    if (steps_used == 0)
        throw std::invalid_argument("no valid anchors in batch");

    ConstMapMat zmap(fwd.z.data.data(), fwd.z.rows, fwd.z.cols);
    ConstMapMat cmap(fwd.c.data.data(), fwd.c.rows, fwd.c.cols);

    Tensor2 dz, dc;
    if (grads) {
        dz = Tensor2::zeros(fwd.z.rows, H);
        dc = Tensor2::zeros(fwd.c.rows, H);
    }

    double total = 0.0;
    RowMat scores(B, B), g(B, B);
    RowMat cw(T * B, H), zw(T * B, H), r(T * B, H);
    std::vector<double> prob(B);

    for (std::size_t k = 1; k <= K; ++k) {
        if (count_k[k - 1] == 0) continue;
        ConstMapMat wk(model.predictors[k - 1].data.data(), H, H);
        cw.noalias() = cmap * wk.transpose();  // row i: W_k c_i
        if (grads) {
            zw.noalias() = zmap * wk;
            r.setZero();
        }
        const double scale =
            1.0 / (static_cast<double>(steps_used) *
                   static_cast<double>(count_k[k - 1]));

        double loss_k = 0.0;
        for (std::size_t t = 0; t < anchors; ++t) {
            const std::size_t pos_row = (t + k) * B;
            const std::size_t ctx_row = t * B;
            // scores(j, b) = z_{t+k, j} . W_k c_{t, b}
            scores.noalias() = zmap.middleRows(pos_row, B) *
                               cw.middleRows(ctx_row, B).transpose();
            if (grads) g.setZero();
            for (std::size_t b = 0; b < B; ++b) {
                const std::size_t real = std::min(batch.real_frames[b], T);
                if (t + k >= real) continue;
                double mx = scores(0, b);
                for (std::size_t j = 1; j < B; ++j)
                    mx = std::max(mx, scores(j, b));
                double denom = 0.0;
                for (std::size_t j = 0; j < B; ++j) {
                    prob[j] = std::exp(scores(j, b) - mx);
                    denom += prob[j];
                }
                loss_k += std::log(denom) - (scores(b, b) - mx);
                if (grads) {
                    for (std::size_t j = 0; j < B; ++j) {
                        g(j, b) = scale * (prob[j] / denom -
                                           (j == b ? 1.0 : 0.0));
                    }
                }
            }
            if (grads) {
                MapMat dz_block(dz.data.data() + pos_row * H, B, H);
                MapMat dc_block(dc.data.data() + ctx_row * H, B, H);
                MapMat r_block(r.data() + pos_row * H, B, H);
                dz_block.noalias() += g * cw.middleRows(ctx_row, B);
                dc_block.noalias() +=
                    g.transpose() * zw.middleRows(pos_row, B);
                r_block.noalias() += g * cmap.middleRows(ctx_row, B);
            }
        }
        total += loss_k / static_cast<double>(count_k[k - 1]);
        if (grads) {
            MapMat dwk(grads->predictors[k - 1].data.data(), H, H);
            dwk.noalias() += zmap.transpose() * r;
        }
    }
    total /= static_cast<double>(steps_used);

    if (grads) {
        // The GRU consumes the same tensor the scores call z, so both
        // gradient paths meet at the encoder output.
        Tensor2 dh = nn::gru_scan_backward(model.gru, cache.gru, dc, grads->gru);
        for (std::size_t i = 0; i < dh.data.size(); ++i) dh.data[i] += dz.data[i];
        if (training) dh = nn::dropout_backward(cache.d3, dh);
        dh = nn::dense_backward(model.enc3, cache.e3, dh, grads->e3);
        if (training) dh = nn::dropout_backward(cache.d2, dh);
        dh = nn::dense_backward(model.enc2, cache.e2, dh, grads->e2);
        if (training) dh = nn::dropout_backward(cache.d1, dh);
        nn::dense_backward(model.enc1, cache.e1, dh, grads->e1);
    }
    return total;
}

}  // namespace malkit::cpc
