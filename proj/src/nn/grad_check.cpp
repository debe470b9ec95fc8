#include "malkit/nn/grad_check.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace malkit::nn {

double grad_check(const std::function<double(std::span<const double>)>& loss,
                  std::span<double> params, std::span<const double> analytic,
                  double epsilon) {
    if (params.size() != analytic.size()) {
        throw std::invalid_argument("grad_check: gradient length mismatch");
    }
    if (epsilon <= 0.0) {
        throw std::invalid_argument("grad_check: epsilon must be positive");
    }
    double worst = 0.0;
    for (std::size_t i = 0; i < params.size(); ++i) {
        const double saved = params[i];
        params[i] = saved + epsilon;
        const double up = loss(params);
        params[i] = saved - epsilon;
        const double down = loss(params);
        params[i] = saved;
        if (!std::isfinite(up) || !std::isfinite(down)) {
            throw std::runtime_error("grad_check: non-finite loss");
        }
        const double numeric = (up - down) / (2.0 * epsilon);
        const double denom =
            std::max(std::abs(analytic[i]) + std::abs(numeric), 1e-6);
        worst = std::max(worst, std::abs(analytic[i] - numeric) / denom);
    }
    return worst;
}

}  // namespace malkit::nn
