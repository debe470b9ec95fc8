#include "malkit/dimred/autoencoder.hpp"

#include <algorithm>
#include <limits>
#include <stdexcept>

#include <json.hpp>

#include "malkit/nn/adam.hpp"
#include "malkit/nn/checkpoint.hpp"
#include "malkit/nn/dropout.hpp"
#include "malkit/nn/mse.hpp"
#include "malkit/rng.hpp"

namespace malkit::dimred {

namespace {

AeModel make_ae_model(const AeConfig& config, Rng& rng) {
    AeModel m;
    m.config = config;
    const std::size_t in = config.input_dim, h = config.hidden_dim,
                      z = config.bottleneck_dim;
    m.l1 = nn::make_dense(in, h, nn::Activation::kElu, rng);
    m.l2 = nn::make_dense(h, h, nn::Activation::kElu, rng);
    m.l3 = nn::make_dense(h, z, nn::Activation::kElu, rng);
    m.l4 = nn::make_dense(z, h, nn::Activation::kElu, rng);
    m.l5 = nn::make_dense(h, h, nn::Activation::kElu, rng);
    m.l6 = nn::make_dense(h, in, nn::Activation::kIdentity, rng);
    return m;
}

std::vector<nn::ParamRef> ae_param_refs(AeModel& m) {
    std::vector<nn::ParamRef> refs;
    for (nn::DenseLayer* l : {&m.l1, &m.l2, &m.l3, &m.l4, &m.l5, &m.l6}) {
        refs.push_back({l->weights.data.data(), l->weights.data.size()});
        refs.push_back({l->bias.data(), l->bias.size()});
    }
    return refs;
}

struct AeGrads {
    nn::DenseGrads g1, g2, g3, g4, g5, g6;
};

std::vector<nn::ParamRef> ae_grad_refs(AeGrads& g) {
    std::vector<nn::ParamRef> refs;
    for (nn::DenseGrads* d : {&g.g1, &g.g2, &g.g3, &g.g4, &g.g5, &g.g6}) {
        refs.push_back({d->d_weights.data.data(), d->d_weights.data.size()});
        refs.push_back({d->d_bias.data(), d->d_bias.size()});
    }
    return refs;
}

Tensor2 gather_rows(const Tensor2& data, const std::vector<std::size_t>& rows) {
    Tensor2 out = Tensor2::zeros(rows.size(), data.cols);
    for (std::size_t i = 0; i < rows.size(); ++i)
        std::copy(data.row_ptr(rows[i]), data.row_ptr(rows[i]) + data.cols,
                  out.row_ptr(i));
    return out;
}

// One training step on a batch: forward with dropout, MSE to the input,
// backward, returns the batch loss.
double ae_step(AeModel& m, const Tensor2& batch, Rng& dropout_rng,
               AeGrads& grads) {
    nn::DenseCache c1, c2, c3, c4, c5, c6;
    nn::DropoutMask d1, d2, d4, d5;
    const double p = m.config.dropout;

    Tensor2 h = nn::dense_forward(m.l1, batch, &c1);
    h = nn::dropout_forward(h, p, dropout_rng, &d1);
    h = nn::dense_forward(m.l2, h, &c2);
    h = nn::dropout_forward(h, p, dropout_rng, &d2);
    h = nn::dense_forward(m.l3, h, &c3);
    h = nn::dense_forward(m.l4, h, &c4);
    h = nn::dropout_forward(h, p, dropout_rng, &d4);
    h = nn::dense_forward(m.l5, h, &c5);
    h = nn::dropout_forward(h, p, dropout_rng, &d5);
    h = nn::dense_forward(m.l6, h, &c6);

    const double loss = nn::mse_loss(h, batch);
    Tensor2 d = nn::mse_grad(h, batch);
    d = nn::dense_backward(m.l6, c6, d, grads.g6);
    d = nn::dropout_backward(d5, d);
    d = nn::dense_backward(m.l5, c5, d, grads.g5);
    d = nn::dropout_backward(d4, d);
    d = nn::dense_backward(m.l4, c4, d, grads.g4);
    d = nn::dense_backward(m.l3, c3, d, grads.g3);
    d = nn::dropout_backward(d2, d);
    d = nn::dense_backward(m.l2, c2, d, grads.g2);
    d = nn::dropout_backward(d1, d);
    nn::dense_backward(m.l1, c1, d, grads.g1);
    return loss;
}

}  // namespace

AeTrainResult ae_train(const Tensor2& data, const AeConfig& config,
                       std::uint64_t seed) {
    const std::size_t N = data.rows;
    if (N < 10) throw std::invalid_argument("ae_train needs at least 10 rows");
    if (config.input_dim != data.cols)
        throw std::invalid_argument("ae config input_dim mismatch");

    Rng master(seed);
    Rng init_rng = master.fork(0);
    Rng split_rng = master.fork(1);
    Rng order_rng = master.fork(2);
    Rng dropout_rng = master.fork(3);

    std::vector<std::size_t> order(N);
    for (std::size_t i = 0; i < N; ++i) order[i] = i;
    split_rng.shuffle(order);
    const std::size_t n_val = std::max<std::size_t>(1, N / 5);
    std::vector<std::size_t> val_idx(order.begin(),
                                     order.begin() + static_cast<long>(n_val));
    std::vector<std::size_t> train_idx(
        order.begin() + static_cast<long>(n_val), order.end());

    const Tensor2 val_data = gather_rows(data, val_idx);

    AeModel model = make_ae_model(config, init_rng);
    std::vector<nn::ParamRef> params = ae_param_refs(model);
    nn::Adam optimizer(nn::AdamConfig{config.learning_rate, 0.9, 0.999, 1e-8});

    AeTrainResult result;
    result.model = model;
    result.val_indices = val_idx;
    double best_val = std::numeric_limits<double>::infinity();
    std::size_t stall = 0;

    for (std::size_t epoch = 0; epoch < config.max_epochs; ++epoch) {
        order_rng.shuffle(train_idx);
        double sse = 0.0;
        std::size_t entries = 0;
        for (std::size_t at = 0; at < train_idx.size();
             at += config.batch_size) {
            const std::size_t take =
                std::min(config.batch_size, train_idx.size() - at);
            std::vector<std::size_t> rows(
                train_idx.begin() + static_cast<long>(at),
                train_idx.begin() + static_cast<long>(at + take));
            Tensor2 batch = gather_rows(data, rows);
            AeGrads grads;
            grads.g1 = nn::zero_grads(model.l1);
            grads.g2 = nn::zero_grads(model.l2);
            grads.g3 = nn::zero_grads(model.l3);
            grads.g4 = nn::zero_grads(model.l4);
            grads.g5 = nn::zero_grads(model.l5);
            grads.g6 = nn::zero_grads(model.l6);
            const double batch_mse = ae_step(model, batch, dropout_rng, grads);
            std::vector<nn::ParamRef> grefs = ae_grad_refs(grads);
            optimizer.step(params, grefs);
            sse += batch_mse * static_cast<double>(batch.size());
            entries += batch.size();
        }
        result.train_curve.push_back(sse / static_cast<double>(entries));

        Tensor2 recon = ae_reconstruct(model, val_data);
        const double val_mse = nn::mse_loss(recon, val_data);
        result.val_curve.push_back(val_mse);

        if (val_mse < best_val) {
            best_val = val_mse;
            result.model = model;
            result.best_epoch = epoch;
            stall = 0;
        } else if (++stall > config.early_stop_patience) {
            break;
        }
    }
    return result;
}

Tensor2 ae_encode(const AeModel& m, const Tensor2& data) {
    Tensor2 h = nn::dense_forward(m.l1, data, nullptr);
    h = nn::dense_forward(m.l2, h, nullptr);
    return nn::dense_forward(m.l3, h, nullptr);
}

Tensor2 ae_reconstruct(const AeModel& m, const Tensor2& data) {
    Tensor2 h = ae_encode(m, data);
    h = nn::dense_forward(m.l4, h, nullptr);
    h = nn::dense_forward(m.l5, h, nullptr);
    return nn::dense_forward(m.l6, h, nullptr);
}

void save_ae_model(const std::string& path, const AeModel& m) {
    std::vector<nn::NamedTensor> tensors;
    int i = 1;
    auto row = [](const std::vector<double>& v) {
        return Tensor2{1, v.size(), v};
    };
    for (const nn::DenseLayer* l : {&m.l1, &m.l2, &m.l3, &m.l4, &m.l5, &m.l6}) {
        tensors.push_back({"l" + std::to_string(i) + ".w", l->weights});
        tensors.push_back({"l" + std::to_string(i) + ".b", row(l->bias)});
        ++i;
    }
    nlohmann::json arch = {{"kind", "ae"},
                           {"input_dim", m.config.input_dim},
                           {"hidden_dim", m.config.hidden_dim},
                           {"bottleneck_dim", m.config.bottleneck_dim},
                           {"dropout", m.config.dropout}};
    nn::save_checkpoint(path, tensors, arch);
}

AeModel load_ae_model(const std::string& path) {
    nlohmann::json arch;
    std::vector<nn::NamedTensor> tensors = nn::load_checkpoint(path, &arch);
    if (arch.value("kind", "") != "ae")
        throw std::runtime_error("checkpoint is not an ae model: " + path);
    AeModel m;
    m.config.input_dim = arch.at("input_dim").get<std::size_t>();
    m.config.hidden_dim = arch.at("hidden_dim").get<std::size_t>();
    m.config.bottleneck_dim = arch.at("bottleneck_dim").get<std::size_t>();
    m.config.dropout = arch.at("dropout").get<double>();

    auto find = [&](const std::string& name) -> const Tensor2& {
        for (const auto& t : tensors)
            if (t.name == name) return t.value;
        throw std::runtime_error("ae checkpoint missing tensor " + name);
    };
    nn::DenseLayer* layers[6] = {&m.l1, &m.l2, &m.l3, &m.l4, &m.l5, &m.l6};
    for (int i = 0; i < 6; ++i) {
        layers[i]->weights = find("l" + std::to_string(i + 1) + ".w");
        layers[i]->bias = find("l" + std::to_string(i + 1) + ".b").data;
        layers[i]->activation =
            i == 5 ? nn::Activation::kIdentity : nn::Activation::kElu;
    }
    return m;
}

}  // namespace malkit::dimred
