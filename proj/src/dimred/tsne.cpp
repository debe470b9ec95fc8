#include "malkit/dimred/tsne.hpp"

#include <cmath>
#include <limits>
#include <stdexcept>

#include "malkit/dimred/pca.hpp"
#include "malkit/rng.hpp"

namespace malkit::dimred {

namespace {

constexpr double kProbFloor = 1e-12;

Tensor2 squared_distances(const Tensor2& x) {
    const std::size_t n = x.rows;
    std::vector<double> sq(n, 0.0);
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t c = 0; c < x.cols; ++c)
            sq[i] += x.at(i, c) * x.at(i, c);
    Tensor2 g = matmul_nt(x, x);
    Tensor2 d2 = Tensor2::zeros(n, n);
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j)
            d2.at(i, j) = std::max(0.0, sq[i] + sq[j] - 2.0 * g.at(i, j));
    return d2;
}

// Symmetrized affinities with per-point precision found by bisection so each
// conditional distribution has entropy log(perplexity).
Tensor2 joint_affinities(const Tensor2& d2, double perplexity) {
    const std::size_t n = d2.rows;
    const double target = std::log(perplexity);
    Tensor2 cond = Tensor2::zeros(n, n);
    std::vector<double> row(n);

    for (std::size_t i = 0; i < n; ++i) {
        double beta = 1.0;
        double lo = -std::numeric_limits<double>::infinity();
        double hi = std::numeric_limits<double>::infinity();
        for (int iter = 0; iter < 50; ++iter) {
            double sum = 0.0, weighted = 0.0;
            for (std::size_t j = 0; j < n; ++j) {
                if (j == i) {
                    row[j] = 0.0;
                    continue;
                }
                row[j] = std::exp(-beta * d2.at(i, j));
                sum += row[j];
                weighted += d2.at(i, j) * row[j];
            }
            const double entropy =
                sum > 0.0 ? std::log(sum) + beta * weighted / sum : 0.0;
            const double diff = entropy - target;
            if (std::abs(diff) < 1e-5) break;
            if (diff > 0.0) {
                lo = beta;
                beta = std::isinf(hi) ? beta * 2.0 : (beta + hi) / 2.0;
            } else {
                hi = beta;
                beta = std::isinf(lo) ? beta / 2.0 : (beta + lo) / 2.0;
            }
        }
        double sum = 0.0;
        for (std::size_t j = 0; j < n; ++j) sum += row[j];
        if (sum <= 0.0) sum = 1.0;
        for (std::size_t j = 0; j < n; ++j) cond.at(i, j) = row[j] / sum;
    }

    Tensor2 p = Tensor2::zeros(n, n);
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = 0; j < n; ++j) {
            if (i == j) continue;
            p.at(i, j) = std::max(
                (cond.at(i, j) + cond.at(j, i)) / (2.0 * static_cast<double>(n)),
                kProbFloor);
        }
    }
    return p;
}

Tensor2 initial_embedding(const Tensor2& data, std::uint64_t seed) {
    const std::size_t n = data.rows;
    Tensor2 y;
    bool ok = false;
    if (data.cols >= 2 && n >= 3) {
        PcaModel pca = pca_fit(data, 2);
        y = pca_transform(pca, data);
        double mean = 0.0;
        for (std::size_t i = 0; i < n; ++i) mean += y.at(i, 0);
        mean /= static_cast<double>(n);
        double var = 0.0;
        for (std::size_t i = 0; i < n; ++i)
            var += (y.at(i, 0) - mean) * (y.at(i, 0) - mean);
        const double sd = std::sqrt(var / static_cast<double>(n));
        if (sd > 0.0) {
            const double scale = 1e-4 / sd;
            for (auto& v : y.data) v *= scale;
            ok = true;
        }
    }
    if (!ok) {
        Rng rng(seed);
        y = Tensor2::zeros(n, 2);
        for (auto& v : y.data) v = rng.normal() * 1e-4;
    }
    return y;
}

}  // namespace

TsneResult tsne_embed(const Tensor2& data, const TsneConfig& config) {
    const std::size_t n = data.rows;
    if (n < 10) throw std::invalid_argument("tsne needs at least 10 points");
    if (3.0 * config.perplexity >= static_cast<double>(n))
        throw std::invalid_argument("perplexity too large for dataset size");

    const Tensor2 p = joint_affinities(squared_distances(data),
                                       config.perplexity);

    TsneResult result;
    result.embedding = initial_embedding(data, config.seed);
    Tensor2& y = result.embedding;

    Tensor2 step = Tensor2::zeros(n, 2);
    Tensor2 gains = Tensor2::zeros(n, 2);
    gains.fill(1.0);
    Tensor2 w = Tensor2::zeros(n, n);
    Tensor2 grad = Tensor2::zeros(n, 2);

    for (std::size_t iter = 0; iter < config.max_iters; ++iter) {
        const bool exaggerating = iter < config.exaggeration_iters;
        const double ex = exaggerating ? config.early_exaggeration : 1.0;
        const double momentum = exaggerating ? 0.5 : 0.8;

        double sum_w = 0.0;
        for (std::size_t i = 0; i < n; ++i) {
            w.at(i, i) = 0.0;
            for (std::size_t j = i + 1; j < n; ++j) {
                const double dy0 = y.at(i, 0) - y.at(j, 0);
                const double dy1 = y.at(i, 1) - y.at(j, 1);
                const double v = 1.0 / (1.0 + dy0 * dy0 + dy1 * dy1);
                w.at(i, j) = v;
                w.at(j, i) = v;
                sum_w += 2.0 * v;
            }
        }

        double kl = 0.0;
        grad.fill(0.0);
        for (std::size_t i = 0; i < n; ++i) {
            for (std::size_t j = 0; j < n; ++j) {
                if (i == j) continue;
                const double q = std::max(w.at(i, j) / sum_w, kProbFloor);
                kl += p.at(i, j) * std::log(p.at(i, j) / q);
                const double coeff =
                    4.0 * (ex * p.at(i, j) - q) * w.at(i, j);
                grad.at(i, 0) += coeff * (y.at(i, 0) - y.at(j, 0));
                grad.at(i, 1) += coeff * (y.at(i, 1) - y.at(j, 1));
            }
        }
        result.kl_curve.push_back(kl);

        for (std::size_t i = 0; i < n; ++i) {
            for (std::size_t c = 0; c < 2; ++c) {
                const bool same_dir =
                    (grad.at(i, c) > 0.0) == (step.at(i, c) > 0.0);
                gains.at(i, c) = same_dir ? std::max(gains.at(i, c) * 0.8, 0.01)
                                          : gains.at(i, c) + 0.2;
                step.at(i, c) = momentum * step.at(i, c) -
                                config.learning_rate * gains.at(i, c) *
                                    grad.at(i, c);
                y.at(i, c) += step.at(i, c);
            }
        }
        // keep the embedding centered
        for (std::size_t c = 0; c < 2; ++c) {
            double mean = 0.0;
            for (std::size_t i = 0; i < n; ++i) mean += y.at(i, c);
            mean /= static_cast<double>(n);
            for (std::size_t i = 0; i < n; ++i) y.at(i, c) -= mean;
        }
    }
    return result;
}

}  // namespace malkit::dimred
