#include "malkit/nn/adam.hpp"

#include <cmath>
#include <stdexcept>

namespace malkit::nn {

void Adam::step(const std::vector<ParamRef>& params,
                const std::vector<ParamRef>& grads) {
    if (params.size() != grads.size()) {
        throw std::invalid_argument("Adam::step: param/grad block counts");
    }
    if (first_moment_.empty()) {
        first_moment_.resize(params.size());
        second_moment_.resize(params.size());
        for (std::size_t b = 0; b < params.size(); ++b) {
            first_moment_[b].assign(params[b].size, 0.0);
            second_moment_[b].assign(params[b].size, 0.0);
        }
    }
    if (first_moment_.size() != params.size()) {
        throw std::invalid_argument("Adam::step: block count changed");
    }
    ++step_count_;
    const double t = static_cast<double>(step_count_);
    const double corr1 = 1.0 - std::pow(config_.beta1, t);
    const double corr2 = 1.0 - std::pow(config_.beta2, t);
    for (std::size_t b = 0; b < params.size(); ++b) {
        if (params[b].size != grads[b].size ||
            params[b].size != first_moment_[b].size()) {
            throw std::invalid_argument("Adam::step: block " +
                                        std::to_string(b) + " shape mismatch");
        }
        double* p = params[b].data;
        const double* g = grads[b].data;
        auto& m = first_moment_[b];
        auto& v = second_moment_[b];
        for (std::size_t i = 0; i < params[b].size; ++i) {
            m[i] = config_.beta1 * m[i] + (1.0 - config_.beta1) * g[i];
            v[i] = config_.beta2 * v[i] + (1.0 - config_.beta2) * g[i] * g[i];
            const double m_hat = m[i] / corr1;
            const double v_hat = v[i] / corr2;
            p[i] -= config_.learning_rate * m_hat /
                    (std::sqrt(v_hat) + config_.epsilon);
        }
    }
}

}  // namespace malkit::nn
