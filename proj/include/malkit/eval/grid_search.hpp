#ifndef MALKIT_EVAL_GRID_SEARCH_HPP
#define MALKIT_EVAL_GRID_SEARCH_HPP

#include <cstdint>
#include <vector>

#include "malkit/tensor.hpp"

namespace malkit::eval {

struct GridSpec {
    std::vector<double> c_values{0.1, 1.0, 10.0, 100.0};
    std::vector<double> gamma_values{0.1, 1.0, 10.0};
    std::size_t folds = 5;
};

// Grid centered on gamma = 1 / (D * var), one decade either side, where var
// is the variance of all matrix entries pooled.
GridSpec default_grid(const Tensor2& features);

struct GridChoice {
    double c_value = 0.0;
    double gamma = 0.0;
    double mean_mcc = 0.0;
    bool fallback = false;  // too few samples or single class
};

// Cross-validated grid search maximizing mean per-fold MCC. Ties go to the
// smaller C, then the smaller gamma. Fewer than 10 samples or a single
// class skips the search and returns the grid midpoint.
GridChoice grid_search(const Tensor2& x, const std::vector<int>& y,
                       const GridSpec& grid, std::uint64_t seed);

}  // namespace malkit::eval

#endif  // MALKIT_EVAL_GRID_SEARCH_HPP
