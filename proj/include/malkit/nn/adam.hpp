#ifndef MALKIT_NN_ADAM_HPP
#define MALKIT_NN_ADAM_HPP

#include <cstdint>
#include <span>
#include <vector>

namespace malkit::nn {

struct AdamConfig {
    double learning_rate = 1e-4;
    double beta1 = 0.9;
    double beta2 = 0.999;
    double epsilon = 1e-8;
};

// A flat (pointer, size) view of one parameter block; models expose their
// tensors through lists of these so the optimizer stays shape-agnostic.
struct ParamRef {
    double* data = nullptr;
    std::size_t size = 0;
};

// Bias-corrected Adam. Moment buffers are laid out on the first step and must
// see the same block shapes on every subsequent call.
class Adam {
  public:
    explicit Adam(AdamConfig config) : config_(config) {}

    void step(const std::vector<ParamRef>& params,
              const std::vector<ParamRef>& grads);

    void set_learning_rate(double lr) { config_.learning_rate = lr; }
    double learning_rate() const { return config_.learning_rate; }
    std::uint64_t step_count() const { return step_count_; }

  private:
    AdamConfig config_;
    std::uint64_t step_count_ = 0;
    std::vector<std::vector<double>> first_moment_;
    std::vector<std::vector<double>> second_moment_;
};

}  // namespace malkit::nn

#endif  // MALKIT_NN_ADAM_HPP
