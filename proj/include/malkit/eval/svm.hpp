#ifndef MALKIT_EVAL_SVM_HPP
#define MALKIT_EVAL_SVM_HPP

#include <cstdint>
#include <vector>

#include "malkit/tensor.hpp"

namespace malkit::eval {

// Soft-margin RBF-kernel classifier, k(a,b) = exp(-gamma * ||a-b||^2).
// Only the support rows of the training set are retained.
struct SvmModel {
    Tensor2 support;                          // S x D
    std::vector<double> coef;                 // alpha_i * y_i per support row
    std::vector<double> alpha;                // alpha_i, in (0, C]
    std::vector<std::size_t> support_indices; // rows of the training matrix
    double bias = 0.0;
    double c_value = 1.0;
    double gamma = 1.0;
    // Nonzero marks a degenerate constant predictor: single-class training
    // data, or no usable kernel geometry (all points identical).
    int constant_label = 0;
    // Dual objective after every optimizer sweep; non-decreasing.
    std::vector<double> objective_curve;
};

// Sequential minimal optimization on the dual, KKT tolerance 1e-3. The seed
// drives the random pair partner choice. Labels must be -1/+1; a
// single-class set yields a constant predictor instead of an error.
SvmModel svm_train(const Tensor2& x, const std::vector<int>& y, double c_value,
                   double gamma, std::uint64_t seed);

// Signed distance-like score per row: sum_s coef_s k(s, x) + bias.
std::vector<double> svm_decision(const SvmModel& model, const Tensor2& x);

// Sign of the decision value; an exact zero maps to +1.
std::vector<int> svm_predict(const SvmModel& model, const Tensor2& x);

}  // namespace malkit::eval

#endif  // MALKIT_EVAL_SVM_HPP
