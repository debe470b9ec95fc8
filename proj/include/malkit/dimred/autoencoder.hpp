#ifndef MALKIT_DIMRED_AUTOENCODER_HPP
#define MALKIT_DIMRED_AUTOENCODER_HPP

#include <cstdint>
#include <string>
#include <vector>

#include "malkit/nn/dense.hpp"
#include "malkit/tensor.hpp"

namespace malkit::dimred {

struct AeConfig {
    std::size_t input_dim = 0;
    std::size_t hidden_dim = 512;
    std::size_t bottleneck_dim = 32;
    double dropout = 0.1;  // on the hidden (wide) layers only
    double learning_rate = 1e-4;
    std::size_t batch_size = 1024;
    std::size_t early_stop_patience = 300;
    std::size_t max_epochs = 1000;
};

// Six dense layers in -> h -> h -> bottleneck -> h -> h -> in. All ELU
// except the reconstruction layer, which is linear so arbitrary real targets
// are reachable. The encoder is the first three layers.
struct AeModel {
    AeConfig config;
    nn::DenseLayer l1, l2, l3, l4, l5, l6;
};

struct AeTrainResult {
    AeModel model;  // parameters from the best validation epoch
    std::vector<double> train_curve;  // per-epoch training MSE
    std::vector<double> val_curve;    // per-epoch validation MSE
    std::size_t best_epoch = 0;
    std::vector<std::size_t> val_indices;  // rows held out for validation
};

// MSE training with Adam and best-checkpoint early stopping; the data is
// split 80:20 by a seeded shuffle. Deterministic given (config, seed).
AeTrainResult ae_train(const Tensor2& data, const AeConfig& config,
                       std::uint64_t seed);

// Bottleneck codes, dropout off. N x bottleneck_dim.
Tensor2 ae_encode(const AeModel& model, const Tensor2& data);

// Full forward pass, dropout off. N x input_dim.
Tensor2 ae_reconstruct(const AeModel& model, const Tensor2& data);

void save_ae_model(const std::string& path, const AeModel& model);
AeModel load_ae_model(const std::string& path);

}  // namespace malkit::dimred

#endif  // MALKIT_DIMRED_AUTOENCODER_HPP
