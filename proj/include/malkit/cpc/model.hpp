#ifndef MALKIT_CPC_MODEL_HPP
#define MALKIT_CPC_MODEL_HPP

#include <cstdint>
#include <string>
#include <vector>

#include "malkit/nn/adam.hpp"
#include "malkit/nn/dense.hpp"
#include "malkit/nn/dropout.hpp"
#include "malkit/nn/gru.hpp"
#include "malkit/rng.hpp"
#include "malkit/tensor.hpp"

namespace malkit::cpc {

struct CpcConfig {
    std::size_t input_dim = 40;
    std::size_t hidden_dim = 256;  // encoder width = GRU size = feature dim
    std::size_t num_steps = 12;    // prediction horizon K
    double encoder_dropout = 0.2;
};

// Frame encoder (three ELU layers), autoregressive context GRU, and one
// bilinear score matrix per prediction step.
struct CpcModel {
    CpcConfig config;
    nn::DenseLayer enc1, enc2, enc3;
    nn::GruCell gru;
    std::vector<Tensor2> predictors;  // K matrices, hidden x hidden
};

CpcModel make_cpc_model(const CpcConfig& config, Rng& rng);

// Fixed-length minibatch stored time-major: row t*B + b is frame t of
// utterance b. real_frames[b] counts the non-padded leading frames.
struct CpcBatch {
    Tensor2 frames;
    std::size_t batch = 0;
    std::vector<std::size_t> real_frames;

    std::size_t steps() const { return batch == 0 ? 0 : frames.rows / batch; }
};

struct CpcForward {
    Tensor2 z;  // (T*B) x hidden, encoder outputs
    Tensor2 c;  // (T*B) x hidden, GRU context
};

struct CpcForwardCache {
    nn::DenseCache e1, e2, e3;
    nn::DropoutMask d1, d2, d3;
    nn::GruScanCache gru;
    bool training = false;
};

// Runs encoder + context GRU. With training=true, dropout masks are drawn
// from rng and recorded in the cache; otherwise rng may be null.
CpcForward cpc_forward(const CpcModel& model, const CpcBatch& batch,
                       bool training = false, Rng* rng = nullptr,
                       CpcForwardCache* cache = nullptr);

struct CpcGrads {
    nn::DenseGrads e1, e2, e3;
    nn::GruGrads gru;
    std::vector<Tensor2> predictors;
};

CpcGrads zero_grads(const CpcModel& model);

// Flat views over every trainable array, in a fixed order shared between the
// model and its gradients (for the optimizer and for finite differences).
std::vector<nn::ParamRef> param_refs(CpcModel& model);
std::vector<nn::ParamRef> grad_refs(CpcGrads& grads);

// Mean of encoder outputs over the first real_frames rows (dropout off).
// Defaults to all rows; zero real frames (an all-padding utterance) is an
// error.
inline constexpr std::size_t kAllFrames = static_cast<std::size_t>(-1);
std::vector<double> extract_cpc_features(const CpcModel& model,
                                         const Tensor2& frames,
                                         std::size_t real_frames = kAllFrames);

void save_cpc_model(const std::string& path, const CpcModel& model);
CpcModel load_cpc_model(const std::string& path);

}  // namespace malkit::cpc

#endif  // MALKIT_CPC_MODEL_HPP
