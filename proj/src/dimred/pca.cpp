#include "malkit/dimred/pca.hpp"

#include <cmath>
#include <stdexcept>

#include <Eigen/Dense>
#include <json.hpp>

#include "malkit/nn/checkpoint.hpp"

namespace malkit::dimred {

namespace {

using RowMat =
    Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;

}  // namespace

PcaModel pca_fit(const Tensor2& data, std::size_t d) {
    const std::size_t n = data.rows, dim = data.cols;
    if (n < 2) throw std::invalid_argument("pca needs at least 2 rows");
    if (d < 1 || d > std::min(n - 1, dim))
        throw std::invalid_argument("pca dimension out of range");

    PcaModel model;
    model.mean.assign(dim, 0.0);
    for (std::size_t r = 0; r < n; ++r)
        for (std::size_t c = 0; c < dim; ++c) model.mean[c] += data.at(r, c);
    for (double& m : model.mean) m /= static_cast<double>(n);

    RowMat centered(n, dim);
    for (std::size_t r = 0; r < n; ++r)
        for (std::size_t c = 0; c < dim; ++c)
            centered(r, c) = data.at(r, c) - model.mean[c];

    Eigen::JacobiSVD<RowMat> svd(centered,
                                 Eigen::ComputeThinU | Eigen::ComputeThinV);
    const auto& v = svd.matrixV();        // dim x rank
    const auto& s = svd.singularValues();

    model.components = Tensor2::zeros(dim, d);
    model.explained.resize(d);
    for (std::size_t j = 0; j < d; ++j) {
        // flip so the dominant coordinate is positive
        std::size_t arg = 0;
        for (std::size_t i = 1; i < dim; ++i)
            if (std::abs(v(i, j)) > std::abs(v(arg, j))) arg = i;
        const double flip = v(arg, j) < 0.0 ? -1.0 : 1.0;
        for (std::size_t i = 0; i < dim; ++i)
            model.components.at(i, j) = flip * v(i, j);
        model.explained[j] =
            s(j) * s(j) / static_cast<double>(n - 1);
    }
    return model;
}

Tensor2 pca_transform(const PcaModel& model, const Tensor2& data) {
    if (data.cols != model.mean.size())
        throw std::invalid_argument("pca transform dimension mismatch");
    Tensor2 centered = data;
    for (std::size_t r = 0; r < data.rows; ++r)
        for (std::size_t c = 0; c < data.cols; ++c)
            centered.at(r, c) -= model.mean[c];
    return matmul(centered, model.components);
}

Tensor2 pca_reconstruct(const PcaModel& model, const Tensor2& data) {
    Tensor2 scores = pca_transform(model, data);
    Tensor2 back = matmul_nt(scores, model.components);
    for (std::size_t r = 0; r < back.rows; ++r)
        for (std::size_t c = 0; c < back.cols; ++c)
            back.at(r, c) += model.mean[c];
    return back;
}

void save_pca_model(const std::string& path, const PcaModel& model) {
    std::vector<nn::NamedTensor> tensors;
    tensors.push_back({"mean", Tensor2{1, model.mean.size(), model.mean}});
    tensors.push_back({"components", model.components});
    tensors.push_back(
        {"explained", Tensor2{1, model.explained.size(), model.explained}});
    nlohmann::json arch = {{"kind", "pca"},
                           {"input_dim", model.components.rows},
                           {"output_dim", model.components.cols}};
    nn::save_checkpoint(path, tensors, arch);
}

PcaModel load_pca_model(const std::string& path) {
    nlohmann::json arch;
    std::vector<nn::NamedTensor> tensors = nn::load_checkpoint(path, &arch);
    if (arch.value("kind", "") != "pca")
        throw std::runtime_error("checkpoint is not a pca model: " + path);
    PcaModel model;
    for (auto& t : tensors) {
        if (t.name == "mean") model.mean = t.value.data;
        else if (t.name == "components") model.components = std::move(t.value);
        else if (t.name == "explained") model.explained = t.value.data;
    }
    if (model.mean.empty() || model.components.data.empty())
        throw std::runtime_error("pca checkpoint incomplete: " + path);
    return model;
}

}  // namespace malkit::dimred
