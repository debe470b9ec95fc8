#include "malkit/eval/svm.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "malkit/rng.hpp"

namespace malkit::eval {

namespace {

constexpr double kTol = 1e-3;        // KKT tolerance
constexpr double kMinStep = 1e-5;    // smallest useful alpha move
constexpr std::size_t kMaxQuietSweeps = 5;
constexpr std::size_t kMaxSweeps = 1000;

Tensor2 kernel_matrix(const Tensor2& x, double gamma) {
    const std::size_t n = x.rows;
    const std::size_t d = x.cols;
    Tensor2 k = Tensor2::zeros(n, n);
    for (std::size_t i = 0; i < n; ++i) {
        k.at(i, i) = 1.0;
        const double* ri = x.row_ptr(i);
        for (std::size_t j = i + 1; j < n; ++j) {
            const double* rj = x.row_ptr(j);
            double sq = 0.0;
            for (std::size_t c = 0; c < d; ++c) {
                const double diff = ri[c] - rj[c];
                sq += diff * diff;
            }
            const double v = std::exp(-gamma * sq);
            k.at(i, j) = v;
            k.at(j, i) = v;
        }
    }
    return k;
}

double dual_objective(const std::vector<double>& alpha,
                      const std::vector<int>& y, const Tensor2& k) {
    double linear = 0.0, quad = 0.0;
    for (std::size_t i = 0; i < alpha.size(); ++i) {
        if (alpha[i] == 0.0) continue;
        linear += alpha[i];
        for (std::size_t j = 0; j < alpha.size(); ++j) {
            if (alpha[j] == 0.0) continue;
            quad += alpha[i] * alpha[j] * y[i] * y[j] * k.at(i, j);
        }
    }
    return linear - 0.5 * quad;
}

}  // namespace

SvmModel svm_train(const Tensor2& x, const std::vector<int>& y, double c_value,
                   double gamma, std::uint64_t seed) {
    const std::size_t n = x.rows;
    if (n == 0) throw std::invalid_argument("svm_train: empty training set");
    if (y.size() != n)
        throw std::invalid_argument("svm_train: label count mismatch");
    if (c_value <= 0.0 || gamma <= 0.0)
        throw std::invalid_argument("svm_train: C and gamma must be positive");

    SvmModel model;
    model.c_value = c_value;
    model.gamma = gamma;

    std::size_t positives = 0;
    for (int label : y) {
        if (label != -1 && label != 1)
            throw std::invalid_argument("svm_train: labels must be -1 or +1");
        positives += label == 1;
    }
    if (positives == 0 || positives == n) {
        model.constant_label = y[0];
        return model;
    }

    const Tensor2 k = kernel_matrix(x, gamma);
    std::vector<double> alpha(n, 0.0);
    double bias = 0.0;

    auto decision = [&](std::size_t i) {
        double s = bias;
        for (std::size_t j = 0; j < n; ++j)
            if (alpha[j] != 0.0) s += alpha[j] * y[j] * k.at(j, i);
        return s;
    };

    Rng rng(seed);
    std::size_t quiet = 0;
    for (std::size_t sweep = 0; sweep < kMaxSweeps && quiet < kMaxQuietSweeps;
         ++sweep) {
        std::size_t changed = 0;
        for (std::size_t i = 0; i < n; ++i) {
            const double ei = decision(i) - y[i];
            const double ri = y[i] * ei;
            if (!((ri < -kTol && alpha[i] < c_value) ||
                  (ri > kTol && alpha[i] > 0.0)))
                continue;

            std::size_t j = rng.index(n - 1);
            if (j >= i) ++j;
            const double ej = decision(j) - y[j];

            const double ai_old = alpha[i];
            const double aj_old = alpha[j];
            double lo, hi;
            if (y[i] != y[j]) {
                lo = std::max(0.0, aj_old - ai_old);
                hi = std::min(c_value, c_value + aj_old - ai_old);
            } else {
                lo = std::max(0.0, ai_old + aj_old - c_value);
                hi = std::min(c_value, ai_old + aj_old);
            }
            if (lo >= hi) continue;

            const double eta = 2.0 * k.at(i, j) - k.at(i, i) - k.at(j, j);
            if (eta >= 0.0) continue;  // pair carries no usable curvature

            double aj = aj_old - y[j] * (ei - ej) / eta;
            aj = std::clamp(aj, lo, hi);
            if (std::fabs(aj - aj_old) < kMinStep) continue;
            const double ai = ai_old + y[i] * y[j] * (aj_old - aj);

            const double b1 = bias - ei - y[i] * (ai - ai_old) * k.at(i, i) -
                              y[j] * (aj - aj_old) * k.at(i, j);
            const double b2 = bias - ej - y[i] * (ai - ai_old) * k.at(i, j) -
                              y[j] * (aj - aj_old) * k.at(j, j);
            if (ai > 0.0 && ai < c_value)
                bias = b1;
            else if (aj > 0.0 && aj < c_value)
                bias = b2;
            else
                bias = 0.5 * (b1 + b2);

            alpha[i] = ai;
            alpha[j] = aj;
            ++changed;
        }
        model.objective_curve.push_back(dual_objective(alpha, y, k));
        quiet = changed == 0 ? quiet + 1 : 0;
    }

    std::vector<std::size_t> support;
    for (std::size_t i = 0; i < n; ++i)
        if (alpha[i] > 1e-12) support.push_back(i);
    if (support.empty()) {
        // no pair ever produced curvature (e.g. all rows identical):
        // degrade to predicting the majority class, +1 on a tie
        model.constant_label = 2 * positives >= n ? 1 : -1;
        return model;
    }

    model.support = Tensor2::zeros(support.size(), x.cols);
    model.coef.resize(support.size());
    model.alpha.resize(support.size());
    model.support_indices = support;
    for (std::size_t s = 0; s < support.size(); ++s) {
        const std::size_t i = support[s];
        std::copy(x.row_ptr(i), x.row_ptr(i) + x.cols, model.support.row_ptr(s));
        model.alpha[s] = alpha[i];
        model.coef[s] = alpha[i] * y[i];
    }
    model.bias = bias;
    return model;
}

std::vector<double> svm_decision(const SvmModel& model, const Tensor2& x) {
    if (model.constant_label != 0)
        return std::vector<double>(x.rows,
                                   static_cast<double>(model.constant_label));
    if (x.cols != model.support.cols)
        throw std::invalid_argument("svm_decision: feature dim mismatch");
    std::vector<double> out(x.rows);
    for (std::size_t r = 0; r < x.rows; ++r) {
        const double* row = x.row_ptr(r);
        double s = model.bias;
        for (std::size_t v = 0; v < model.support.rows; ++v) {
            const double* sv = model.support.row_ptr(v);
            double sq = 0.0;
            for (std::size_t c = 0; c < x.cols; ++c) {
                const double diff = row[c] - sv[c];
                sq += diff * diff;
            }
            s += model.coef[v] * std::exp(-model.gamma * sq);
        }
        out[r] = s;
    }
    return out;
}

std::vector<int> svm_predict(const SvmModel& model, const Tensor2& x) {
    if (model.constant_label != 0)
        return std::vector<int>(x.rows, model.constant_label);
    std::vector<double> scores = svm_decision(model, x);
    std::vector<int> labels(scores.size());
    for (std::size_t i = 0; i < scores.size(); ++i)
        labels[i] = scores[i] < 0.0 ? -1 : 1;
    return labels;
}

}  // namespace malkit::eval
