#include "malkit/cpc/trainer.hpp"

#include <algorithm>
#include <limits>
#include <stdexcept>

#include "malkit/audio/logmel.hpp"
#include "malkit/cpc/infonce.hpp"

namespace malkit::cpc {

namespace {

// Crops/pads each chosen utterance to a fixed length and interleaves them
// time-major (row t*B + b).
CpcBatch assemble_batch(const std::vector<Tensor2>& utterances,
                        const std::vector<std::size_t>& chosen,
                        std::size_t segment_frames, Rng& crop_rng) {
    const std::size_t B = chosen.size();
    const std::size_t D = utterances[chosen[0]].cols;
    CpcBatch batch;
    batch.batch = B;
    batch.frames = Tensor2::zeros(segment_frames * B, D);
    batch.real_frames.resize(B);
    for (std::size_t b = 0; b < B; ++b) {
        const Tensor2& utt = utterances[chosen[b]];
        Tensor2 crop = audio::segment_fixed(utt, segment_frames, crop_rng);
        batch.real_frames[b] = std::min(utt.rows, segment_frames);
        for (std::size_t t = 0; t < segment_frames; ++t) {
            std::copy(crop.row_ptr(t), crop.row_ptr(t) + D,
                      batch.frames.row_ptr(t * B + b));
        }
    }
    return batch;
}

}  // namespace

CpcTrainResult train_cpc(const std::vector<Tensor2>& utterances,
                         const CpcConfig& config,
                         const TrainSchedule& schedule, std::uint64_t seed) {
    const std::size_t N = utterances.size();
    if (N < 10)
        throw std::invalid_argument("need at least 10 utterances to train");
    for (const Tensor2& u : utterances) {
        if (u.rows == 0 || u.cols != config.input_dim)
            throw std::invalid_argument("utterance shape mismatch");
    }

    Rng master(seed);
    Rng init_rng = master.fork(0);
    Rng split_rng = master.fork(1);
    Rng order_rng = master.fork(2);
    Rng crop_rng = master.fork(3);
    Rng dropout_rng = master.fork(4);
    Rng val_crop_rng = master.fork(5);

    // 80:20 split by shuffled index.
    std::vector<std::size_t> order(N);
    for (std::size_t i = 0; i < N; ++i) order[i] = i;
    split_rng.shuffle(order);
    const std::size_t n_val = std::max<std::size_t>(2, N / 5);
    std::vector<std::size_t> val_idx(order.begin(),
                                     order.begin() + static_cast<long>(n_val));
    std::vector<std::size_t> train_idx(
        order.begin() + static_cast<long>(n_val), order.end());
    if (train_idx.size() < schedule.batch_size)
        throw std::invalid_argument(
            "training split smaller than one minibatch");

    // Fixed validation batches: deterministic crops, kept for all epochs.
    std::vector<CpcBatch> val_batches;
    for (std::size_t at = 0; at < val_idx.size();) {
        const std::size_t take =
            std::min(schedule.batch_size, val_idx.size() - at);
        if (take < 2) break;
        std::vector<std::size_t> chosen(
            val_idx.begin() + static_cast<long>(at),
            val_idx.begin() + static_cast<long>(at + take));
        val_batches.push_back(assemble_batch(utterances, chosen,
                                             schedule.segment_frames,
                                             val_crop_rng));
        at += take;
    }
    if (val_batches.empty())
        throw std::invalid_argument("validation split cannot form a batch");

    CpcModel model = make_cpc_model(config, init_rng);
    std::vector<nn::ParamRef> params = param_refs(model);
    nn::Adam optimizer(nn::AdamConfig{schedule.initial_lr, 0.9, 0.999, 1e-8});
    double lr = schedule.initial_lr;

    CpcTrainResult result;
    result.model = model;
    double best_val = std::numeric_limits<double>::infinity();
    std::size_t plateau_count = 0, stall_count = 0;

    for (std::size_t epoch = 0; epoch < schedule.max_epochs; ++epoch) {
        order_rng.shuffle(train_idx);
        double train_loss = 0.0;
        std::size_t train_batches = 0;
        for (std::size_t at = 0;
             at + schedule.batch_size <= train_idx.size();
             at += schedule.batch_size) {
            std::vector<std::size_t> chosen(
                train_idx.begin() + static_cast<long>(at),
                train_idx.begin() +
                    static_cast<long>(at + schedule.batch_size));
            CpcBatch batch = assemble_batch(utterances, chosen,
                                            schedule.segment_frames, crop_rng);
            CpcGrads grads = zero_grads(model);
            train_loss +=
                infonce_loss(model, batch, &dropout_rng, true, &grads);
            std::vector<nn::ParamRef> grefs = grad_refs(grads);
            optimizer.step(params, grefs);
            ++train_batches;
        }
        result.train_curve.push_back(train_loss /
                                     static_cast<double>(train_batches));

        double val_loss = 0.0;
        for (const CpcBatch& vb : val_batches)
            val_loss += infonce_loss(model, vb);
        val_loss /= static_cast<double>(val_batches.size());
        result.val_curve.push_back(val_loss);
        result.lr_curve.push_back(lr);

        if (val_loss < best_val) {
            best_val = val_loss;
            result.model = model;
            result.best_epoch = epoch;
            plateau_count = 0;
            stall_count = 0;
        } else {
            ++plateau_count;
            ++stall_count;
            if (stall_count > schedule.early_stop_patience) break;
            if (plateau_count > schedule.plateau_patience) {
                lr *= schedule.plateau_factor;
                optimizer.set_learning_rate(lr);
                plateau_count = 0;
            }
        }
    }
    return result;
}

}  // namespace malkit::cpc
