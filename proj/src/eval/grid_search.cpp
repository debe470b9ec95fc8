#include "malkit/eval/grid_search.hpp"

#include <stdexcept>

#include "malkit/eval/folds.hpp"
#include "malkit/eval/mcc.hpp"
#include "malkit/eval/svm.hpp"

namespace malkit::eval {

GridSpec default_grid(const Tensor2& features) {
    GridSpec grid;
    double mean = 0.0;
    for (double v : features.data) mean += v;
    mean /= static_cast<double>(features.data.size());
    double var = 0.0;
    for (double v : features.data) var += (v - mean) * (v - mean);
    var /= static_cast<double>(features.data.size());
    const double denom = static_cast<double>(features.cols) * var;
    const double center = denom > 0.0 ? 1.0 / denom : 1.0;
    grid.gamma_values = {center / 10.0, center, center * 10.0};
    return grid;
}

GridChoice grid_search(const Tensor2& x, const std::vector<int>& y,
                       const GridSpec& grid, std::uint64_t seed) {
    if (grid.c_values.empty() || grid.gamma_values.empty())
        throw std::invalid_argument("grid_search: empty grid axis");
    for (double v : grid.c_values)
        if (v <= 0.0) throw std::invalid_argument("grid_search: C must be positive");
    for (double v : grid.gamma_values)
        if (v <= 0.0)
            throw std::invalid_argument("grid_search: gamma must be positive");
    const std::size_t n = x.rows;
    if (y.size() != n)
        throw std::invalid_argument("grid_search: label count mismatch");

    std::size_t positives = 0;
    for (int label : y) positives += label == 1;
    if (n < 10 || positives == 0 || positives == n) {
        GridChoice mid;
        mid.c_value = grid.c_values[(grid.c_values.size() - 1) / 2];
        mid.gamma = grid.gamma_values[(grid.gamma_values.size() - 1) / 2];
        mid.fallback = true;
        return mid;
    }

    const std::vector<std::size_t> fold_of = make_folds(n, grid.folds, seed);

    GridChoice best;
    bool have_best = false;
    std::uint64_t cell = 0;
    for (double c_value : grid.c_values) {
        for (double gamma : grid.gamma_values) {
            double mcc_sum = 0.0;
            for (std::size_t f = 0; f < grid.folds; ++f) {
                std::vector<std::size_t> train_rows, test_rows;
                for (std::size_t i = 0; i < n; ++i)
                    (fold_of[i] == f ? test_rows : train_rows).push_back(i);

                Tensor2 train_x = Tensor2::zeros(train_rows.size(), x.cols);
                std::vector<int> train_y(train_rows.size());
                for (std::size_t i = 0; i < train_rows.size(); ++i) {
                    std::copy(x.row_ptr(train_rows[i]),
                              x.row_ptr(train_rows[i]) + x.cols,
                              train_x.row_ptr(i));
                    train_y[i] = y[train_rows[i]];
                }
                Tensor2 test_x = Tensor2::zeros(test_rows.size(), x.cols);
                std::vector<int> test_y(test_rows.size());
                for (std::size_t i = 0; i < test_rows.size(); ++i) {
                    std::copy(x.row_ptr(test_rows[i]),
                              x.row_ptr(test_rows[i]) + x.cols,
                              test_x.row_ptr(i));
                    test_y[i] = y[test_rows[i]];
                }

                SvmModel model = svm_train(train_x, train_y, c_value, gamma,
                                           seed * 7919 + cell * 131 + f);
                mcc_sum += mcc(confusion(test_y, svm_predict(model, test_x)));
            }
            const double mean = mcc_sum / static_cast<double>(grid.folds);
            const bool wins =
                !have_best || mean > best.mean_mcc ||
                (mean == best.mean_mcc &&
                 (c_value < best.c_value ||
                  (c_value == best.c_value && gamma < best.gamma)));
            if (wins) {
                best.c_value = c_value;
                best.gamma = gamma;
                best.mean_mcc = mean;
                have_best = true;
            }
            ++cell;
        }
    }
    return best;
}

}  // namespace malkit::eval
