#ifndef MALKIT_CPC_TRAINER_HPP
#define MALKIT_CPC_TRAINER_HPP

#include <cstdint>
#include <vector>

#include "malkit/cpc/model.hpp"

namespace malkit::cpc {

struct TrainSchedule {
    double initial_lr = 1e-4;
    double plateau_factor = 0.7;       // lr multiplier when validation stalls
    std::size_t plateau_patience = 20;  // epochs without improvement before cut
    std::size_t early_stop_patience = 100;
    std::size_t max_epochs = 500;
    std::size_t batch_size = 8;
    std::size_t segment_frames = 500;  // 5 s at 10 ms shift
};

struct CpcTrainResult {
    CpcModel model;  // parameters from the best validation epoch
    std::vector<double> train_curve;
    std::vector<double> val_curve;
    std::vector<double> lr_curve;
    std::size_t best_epoch = 0;  // index into the curves
};

// Trains on log-mel utterances (each T_i x input_dim). The corpus is split
// 80:20 into train/validation by a seeded shuffle; every epoch revisits the
// training utterances in a fresh shuffled order with fresh random crops,
// while validation uses fixed crops and no dropout. Training minibatches
// that cannot be filled to batch_size are dropped; validation keeps partial
// batches of at least 2. Deterministic given (config, schedule, seed).
CpcTrainResult train_cpc(const std::vector<Tensor2>& utterances,
                         const CpcConfig& config,
                         const TrainSchedule& schedule, std::uint64_t seed);

}  // namespace malkit::cpc

#endif  // MALKIT_CPC_TRAINER_HPP
