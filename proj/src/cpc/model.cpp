#include "malkit/cpc/model.hpp"

#include <stdexcept>

#include <json.hpp>

#include "malkit/nn/checkpoint.hpp"

namespace malkit::cpc {

CpcModel make_cpc_model(const CpcConfig& config, Rng& rng) {
    CpcModel m;
    m.config = config;
    const std::size_t h = config.hidden_dim;
    m.enc1 = nn::make_dense(config.input_dim, h, nn::Activation::kElu, rng);
    m.enc2 = nn::make_dense(h, h, nn::Activation::kElu, rng);
    m.enc3 = nn::make_dense(h, h, nn::Activation::kElu, rng);
    m.gru = nn::make_gru(h, h, rng);
    m.predictors.reserve(config.num_steps);
    const double bound = std::sqrt(6.0 / (h + h));
    for (std::size_t k = 0; k < config.num_steps; ++k) {
        Tensor2 w = Tensor2::zeros(h, h);
        for (auto& v : w.data) v = rng.uniform(-bound, bound);
        m.predictors.push_back(std::move(w));
    }
    return m;
}

CpcForward cpc_forward(const CpcModel& model, const CpcBatch& batch,
                       bool training, Rng* rng, CpcForwardCache* cache) {
    if (batch.batch == 0 || batch.frames.rows % batch.batch != 0)
        throw std::invalid_argument("batch rows must be a multiple of B");
    if (batch.frames.cols != model.config.input_dim)
        throw std::invalid_argument("batch feature dim mismatch");
    if (training && rng == nullptr)
        throw std::invalid_argument("training forward needs an rng");

    CpcForwardCache local;
    CpcForwardCache& c = cache ? *cache : local;
    c.training = training;

    Tensor2 h1 = nn::dense_forward(model.enc1, batch.frames, &c.e1);
    if (training) h1 = nn::dropout_forward(h1, model.config.encoder_dropout, *rng, &c.d1);
    Tensor2 h2 = nn::dense_forward(model.enc2, h1, &c.e2);
    if (training) h2 = nn::dropout_forward(h2, model.config.encoder_dropout, *rng, &c.d2);
    Tensor2 h3 = nn::dense_forward(model.enc3, h2, &c.e3);
    if (training) h3 = nn::dropout_forward(h3, model.config.encoder_dropout, *rng, &c.d3);

    CpcForward out;
    out.c = nn::gru_scan_forward(model.gru, h3, batch.batch, &c.gru);
    out.z = std::move(h3);
    return out;
}

CpcGrads zero_grads(const CpcModel& model) {
    CpcGrads g;
    g.e1 = nn::zero_grads(model.enc1);
    g.e2 = nn::zero_grads(model.enc2);
    g.e3 = nn::zero_grads(model.enc3);
    g.gru = nn::zero_grads(model.gru);
    for (const Tensor2& w : model.predictors)
        g.predictors.push_back(Tensor2::zeros(w.rows, w.cols));
    return g;
}

namespace {

void push_dense(std::vector<nn::ParamRef>& refs, Tensor2& w,
                std::vector<double>& b) {
    refs.push_back({w.data.data(), w.data.size()});
    refs.push_back({b.data(), b.size()});
}

}  // namespace

std::vector<nn::ParamRef> param_refs(CpcModel& m) {
    std::vector<nn::ParamRef> refs;
    push_dense(refs, m.enc1.weights, m.enc1.bias);
    push_dense(refs, m.enc2.weights, m.enc2.bias);
    push_dense(refs, m.enc3.weights, m.enc3.bias);
    for (Tensor2* t : {&m.gru.w_update, &m.gru.w_reset, &m.gru.w_cand,
                       &m.gru.u_update, &m.gru.u_reset, &m.gru.u_cand})
        refs.push_back({t->data.data(), t->data.size()});
    for (std::vector<double>* v : {&m.gru.b_update, &m.gru.b_reset, &m.gru.b_cand})
        refs.push_back({v->data(), v->size()});
    for (Tensor2& w : m.predictors)
        refs.push_back({w.data.data(), w.data.size()});
    return refs;
}

std::vector<nn::ParamRef> grad_refs(CpcGrads& g) {
    std::vector<nn::ParamRef> refs;
    push_dense(refs, g.e1.d_weights, g.e1.d_bias);
    push_dense(refs, g.e2.d_weights, g.e2.d_bias);
    push_dense(refs, g.e3.d_weights, g.e3.d_bias);
    for (Tensor2* t : {&g.gru.w_update, &g.gru.w_reset, &g.gru.w_cand,
                       &g.gru.u_update, &g.gru.u_reset, &g.gru.u_cand})
        refs.push_back({t->data.data(), t->data.size()});
    for (std::vector<double>* v : {&g.gru.b_update, &g.gru.b_reset, &g.gru.b_cand})
        refs.push_back({v->data(), v->size()});
    for (Tensor2& w : g.predictors)
        refs.push_back({w.data.data(), w.data.size()});
    return refs;
}

std::vector<double> extract_cpc_features(const CpcModel& model,
                                         const Tensor2& frames,
                                         std::size_t real_frames) {
    const std::size_t real =
        real_frames == kAllFrames ? frames.rows : real_frames;
    if (real == 0 || real > frames.rows)
        throw std::invalid_argument("no real frames to extract features from");

    // Only the encoder matters here; skip the GRU by running the layers
    // directly.
    Tensor2 h = nn::dense_forward(model.enc1, frames, nullptr);
    h = nn::dense_forward(model.enc2, h, nullptr);
    h = nn::dense_forward(model.enc3, h, nullptr);

    std::vector<double> mean(h.cols, 0.0);
    for (std::size_t t = 0; t < real; ++t)
        for (std::size_t c = 0; c < h.cols; ++c) mean[c] += h.at(t, c);
    for (double& v : mean) v /= static_cast<double>(real);
    return mean;
}

void save_cpc_model(const std::string& path, const CpcModel& m) {
    std::vector<nn::NamedTensor> tensors;
    auto row = [](const std::vector<double>& v) {
        return Tensor2{1, v.size(), v};
    };
    tensors.push_back({"enc1.w", m.enc1.weights});
    tensors.push_back({"enc1.b", row(m.enc1.bias)});
    tensors.push_back({"enc2.w", m.enc2.weights});
    tensors.push_back({"enc2.b", row(m.enc2.bias)});
    tensors.push_back({"enc3.w", m.enc3.weights});
    tensors.push_back({"enc3.b", row(m.enc3.bias)});
    tensors.push_back({"gru.wz", m.gru.w_update});
    tensors.push_back({"gru.wr", m.gru.w_reset});
    tensors.push_back({"gru.wc", m.gru.w_cand});
    tensors.push_back({"gru.uz", m.gru.u_update});
    tensors.push_back({"gru.ur", m.gru.u_reset});
    tensors.push_back({"gru.uc", m.gru.u_cand});
    tensors.push_back({"gru.bz", row(m.gru.b_update)});
    tensors.push_back({"gru.br", row(m.gru.b_reset)});
    tensors.push_back({"gru.bc", row(m.gru.b_cand)});
    for (std::size_t k = 0; k < m.predictors.size(); ++k)
        tensors.push_back({"pred." + std::to_string(k), m.predictors[k]});

    nlohmann::json arch = {
        {"kind", "cpc"},
        {"input_dim", m.config.input_dim},
        {"hidden_dim", m.config.hidden_dim},
        {"num_steps", m.config.num_steps},
        {"encoder_dropout", m.config.encoder_dropout},
    };
    nn::save_checkpoint(path, tensors, arch);
}

CpcModel load_cpc_model(const std::string& path) {
    nlohmann::json arch;
    std::vector<nn::NamedTensor> tensors = nn::load_checkpoint(path, &arch);
    if (arch.value("kind", "") != "cpc")
        throw std::runtime_error("checkpoint is not a cpc model: " + path);

    CpcConfig config;
    config.input_dim = arch.at("input_dim").get<std::size_t>();
    config.hidden_dim = arch.at("hidden_dim").get<std::size_t>();
    config.num_steps = arch.at("num_steps").get<std::size_t>();
    config.encoder_dropout = arch.at("encoder_dropout").get<double>();

    auto find = [&](const std::string& name) -> const Tensor2& {
        for (const auto& t : tensors)
            if (t.name == name) return t.value;
        throw std::runtime_error("checkpoint missing tensor " + name);
    };

    CpcModel m;
    m.config = config;
    m.enc1.weights = find("enc1.w");
    m.enc1.bias = find("enc1.b").data;
    m.enc1.activation = nn::Activation::kElu;
    m.enc2.weights = find("enc2.w");
    m.enc2.bias = find("enc2.b").data;
    m.enc2.activation = nn::Activation::kElu;
    m.enc3.weights = find("enc3.w");
    m.enc3.bias = find("enc3.b").data;
    m.enc3.activation = nn::Activation::kElu;
    m.gru.w_update = find("gru.wz");
    m.gru.w_reset = find("gru.wr");
    m.gru.w_cand = find("gru.wc");
    m.gru.u_update = find("gru.uz");
    m.gru.u_reset = find("gru.ur");
    m.gru.u_cand = find("gru.uc");
    m.gru.b_update = find("gru.bz").data;
    m.gru.b_reset = find("gru.br").data;
    m.gru.b_cand = find("gru.bc").data;
    for (std::size_t k = 0; k < config.num_steps; ++k)
        m.predictors.push_back(find("pred." + std::to_string(k)));
    return m;
}

}  // namespace malkit::cpc
