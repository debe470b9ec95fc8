#ifndef MALKIT_NN_GRAD_CHECK_HPP
#define MALKIT_NN_GRAD_CHECK_HPP

#include <functional>
#include <span>

namespace malkit::nn {

// Compares an analytic gradient against central finite differences of `loss`
// and returns the worst relative error max |a-n| / max(|a|+|n|, 1e-6).
// `loss` is re-evaluated with perturbed parameters; it must be deterministic
// (fix dropout masks and data before calling). Throws on non-finite loss.
double grad_check(const std::function<double(std::span<const double>)>& loss,
                  std::span<double> params, std::span<const double> analytic,
                  double epsilon = 1e-5);

}  // namespace malkit::nn

#endif  // MALKIT_NN_GRAD_CHECK_HPP
