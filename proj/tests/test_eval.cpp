#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <map>
#include <set>
#include <vector>

#include "malkit/eval/folds.hpp"
#include "malkit/eval/grid_search.hpp"
#include "malkit/eval/mcc.hpp"
#include "malkit/eval/svm.hpp"
#include "malkit/rng.hpp"
#include "oracles.hpp"

using namespace malkit;
using namespace malkit::eval;

namespace {

// Two gaussian blobs, labels -1/+1, centers +/- `sep` along every axis.
void make_blobs(std::size_t per_class, std::size_t dim, double sep,
                double spread, Rng& rng, Tensor2& x, std::vector<int>& y) {
    const std::size_t n = 2 * per_class;
    x = Tensor2::zeros(n, dim);
    y.resize(n);
    for (std::size_t i = 0; i < n; ++i) {
        const int label = i < per_class ? 1 : -1;
        y[i] = label;
        for (std::size_t c = 0; c < dim; ++c)
            x.at(i, c) = label * sep + spread * rng.normal();
    }
}

double train_accuracy(const SvmModel& model, const Tensor2& x,
                      const std::vector<int>& y) {
    std::vector<int> pred = svm_predict(model, x);
    std::size_t hits = 0;
    for (std::size_t i = 0; i < y.size(); ++i) hits += pred[i] == y[i];
    return static_cast<double>(hits) / static_cast<double>(y.size());
}

}  // namespace

TEST_CASE("mcc of a perfect classifier is one") {
    CHECK(mcc({10, 15, 0, 0}) == doctest::Approx(1.0));
    CHECK(mcc({1, 1, 0, 0}) == doctest::Approx(1.0));
}

TEST_CASE("mcc at chance level is zero") {
    CHECK(mcc({25, 25, 25, 25}) == doctest::Approx(0.0));
}

TEST_CASE("mcc matches the direct formula") {
    // TP=6 TN=3 FP=1 FN=2: (6*3 - 1*2) / sqrt(7*8*4*5)
    const double expected = 16.0 / std::sqrt(1120.0);
    CHECK(mcc({6, 3, 1, 2}) == doctest::Approx(expected).epsilon(1e-12));
    CHECK(mcc({6, 3, 1, 2}) == doctest::Approx(0.4781).epsilon(1e-4));
}

TEST_CASE("mcc zero-denominator convention and input validation") {
    CHECK(mcc({5, 0, 0, 3}) == 0.0);   // TN+FP = 0
    CHECK(mcc({0, 5, 3, 0}) == 0.0);   // TP+FN = 0
    CHECK_THROWS_AS(mcc({0, 0, 0, 0}), std::invalid_argument);
}

TEST_CASE("mcc is symmetric under simultaneous label swap") {
    Rng rng(61);
    for (int trial = 0; trial < 50; ++trial) {
        ConfusionCounts c{rng.index(20), rng.index(20), rng.index(20),
                          rng.index(20)};
        if (c.total() == 0) continue;
        ConfusionCounts swapped{c.tn, c.tp, c.fn, c.fp};
        CHECK(mcc(c) == doctest::Approx(mcc(swapped)).epsilon(1e-12));
    }
}

TEST_CASE("inverting predictions negates mcc") {
    Rng rng(62);
    std::vector<int> truth, pred;
    for (int i = 0; i < 60; ++i) {
        truth.push_back(rng.uniform() < 0.5 ? 1 : -1);
        pred.push_back(rng.uniform() < 0.5 ? 1 : -1);
    }
    std::vector<int> inverted(pred.size());
    std::transform(pred.begin(), pred.end(), inverted.begin(),
                   [](int v) { return -v; });
    const double a = mcc(confusion(truth, pred));
    const double b = mcc(confusion(truth, inverted));
    CHECK(std::fabs(a + b) < 1e-12);
}

TEST_CASE("confusion tallies and rejects bad labels") {
    ConfusionCounts c = confusion({1, 1, -1, -1, 1}, {1, -1, -1, 1, 1});
    CHECK(c.tp == 2);
    CHECK(c.fn == 1);
    CHECK(c.tn == 1);
    CHECK(c.fp == 1);
    CHECK(c.total() == 5);
    CHECK_THROWS_AS(confusion({1, 0}, {1, 1}), std::invalid_argument);
    CHECK_THROWS_AS(confusion({1, 1}, {1}), std::invalid_argument);
}

TEST_CASE("make_folds deals near-equal sizes") {
    std::vector<std::size_t> ten = make_folds(10, 5, 3);
    std::map<std::size_t, std::size_t> sizes;
    for (std::size_t f : ten) ++sizes[f];
    REQUIRE(sizes.size() == 5);
    for (const auto& [f, s] : sizes) CHECK(s == 2);

    std::vector<std::size_t> eleven = make_folds(11, 5, 3);
    std::vector<std::size_t> counts(5, 0);
    for (std::size_t f : eleven) ++counts[f];
    std::sort(counts.begin(), counts.end());
    CHECK(counts == std::vector<std::size_t>{2, 2, 2, 2, 3});
}

TEST_CASE("make_folds is deterministic and validates input") {
    CHECK(make_folds(23, 5, 9) == make_folds(23, 5, 9));
    bool differs = false;
    std::vector<std::size_t> a = make_folds(23, 5, 9);
    std::vector<std::size_t> b = make_folds(23, 5, 10);
    for (std::size_t i = 0; i < a.size(); ++i) differs = differs || a[i] != b[i];
    CHECK(differs);
    CHECK_THROWS_AS(make_folds(4, 5, 0), std::invalid_argument);
    CHECK_THROWS_AS(make_folds(10, 0, 0), std::invalid_argument);
}

TEST_CASE("svm with one point per class splits the midpoint") {
    Tensor2 x = Tensor2::zeros(2, 2);
    x.at(0, 0) = 1.0;
    x.at(1, 0) = -1.0;
    std::vector<int> y{1, -1};
    SvmModel model = svm_train(x, y, 1.0, 0.5, 0);
    CHECK(model.support.rows == 2);  // both points end up supporting

    Tensor2 mid = Tensor2::zeros(1, 2);  // equidistant from both
    const double at_mid = svm_decision(model, mid)[0];
    CHECK(std::fabs(at_mid) < 1e-10);
    CHECK(svm_predict(model, mid)[0] == 1);  // exact tie -> +1

    CHECK(svm_predict(model, x)[0] == 1);
    CHECK(svm_predict(model, x)[1] == -1);
}

TEST_CASE("svm separates linear blobs with a large box constraint") {
    Rng rng(63);
    Tensor2 x;
    std::vector<int> y;
    make_blobs(20, 3, 2.0, 0.4, rng, x, y);
    SvmModel model = svm_train(x, y, 100.0, 0.5, 1);
    CHECK(train_accuracy(model, x, y) == doctest::Approx(1.0));

    // support vectors of a hard-margin fit predict their own labels
    for (std::size_t s = 0; s < model.support_indices.size(); ++s) {
        Tensor2 one = Tensor2::zeros(1, 3);
        std::copy(model.support.row_ptr(s), model.support.row_ptr(s) + 3,
                  one.row_ptr(0));
        CHECK(svm_predict(model, one)[0] == y[model.support_indices[s]]);
    }
}

TEST_CASE("svm solves xor and matches the symmetric dual optimum") {
    // (+1,+1) and (-1,-1) labeled +1; (+1,-1) and (-1,+1) labeled -1.
    Tensor2 x = Tensor2::zeros(4, 2);
    x.at(0, 0) = 1.0;  x.at(0, 1) = 1.0;
    x.at(1, 0) = -1.0; x.at(1, 1) = -1.0;
    x.at(2, 0) = 1.0;  x.at(2, 1) = -1.0;
    x.at(3, 0) = -1.0; x.at(3, 1) = 1.0;
    std::vector<int> y{1, 1, -1, -1};
    const double gamma = 1.0;
    SvmModel model = svm_train(x, y, 10.0, gamma, 2);
    CHECK(train_accuracy(model, x, y) == doctest::Approx(1.0));

    // The dual here is strictly concave and the problem is symmetric under
    // the dihedral symmetries of the square, so the optimum has all four
    // alphas equal: maximize 4a - a^2/2 * sum_ij y_i y_j k_ij, giving
    // a* = 4 / (4 + 4 e^-8 - 8 e^-4), interior to the box at C=10.
    const double s = 4.0 + 4.0 * std::exp(-8.0) - 8.0 * std::exp(-4.0);
    const double a_star = 4.0 / s;
    REQUIRE(model.alpha.size() == 4);
    for (double a : model.alpha)
        CHECK(a == doctest::Approx(a_star).epsilon(0.02));
    CHECK(std::fabs(model.bias) < 0.02);

    // interior alphas mean every point sits on its margin
    std::vector<double> dec = svm_decision(model, x);
    for (std::size_t i = 0; i < 4; ++i)
        CHECK(y[i] * dec[i] == doctest::Approx(1.0).epsilon(0.02));
}

TEST_CASE("svm decision values match the kernel-sum oracle") {
    Rng rng(64);
    Tensor2 x;
    std::vector<int> y;
    make_blobs(15, 4, 1.0, 0.8, rng, x, y);
    SvmModel model = svm_train(x, y, 10.0, 0.3, 3);
    REQUIRE(model.constant_label == 0);

    Tensor2 probe = Tensor2::zeros(8, 4);
    for (auto& v : probe.data) v = rng.normal();
    std::vector<double> fast = svm_decision(model, probe);
    for (std::size_t r = 0; r < probe.rows; ++r) {
        double slow = model.bias;
        for (std::size_t v = 0; v < model.support.rows; ++v) {
            const double d =
                oracles::euclidean(probe.row_ptr(r), model.support.row_ptr(v), 4);
            slow += model.coef[v] * std::exp(-model.gamma * d * d);
        }
        CHECK(std::fabs(fast[r] - slow) < 1e-10);
    }
}

TEST_CASE("svm dual objective never decreases and kkt holds at convergence") {
    Rng rng(65);
    Tensor2 x;
    std::vector<int> y;
    make_blobs(12, 3, 0.8, 1.0, rng, x, y);  // overlapping: some bound alphas
    const double c_value = 2.0;
    SvmModel model = svm_train(x, y, c_value, 0.5, 4);
    REQUIRE(model.objective_curve.size() >= 2);
    for (std::size_t i = 1; i < model.objective_curve.size(); ++i)
        CHECK(model.objective_curve[i] >= model.objective_curve[i - 1] - 1e-9);

    // reconstruct full alphas (zero off-support) and check KKT residuals
    std::vector<double> alpha(x.rows, 0.0);
    for (std::size_t s = 0; s < model.support_indices.size(); ++s)
        alpha[model.support_indices[s]] = model.alpha[s];
    std::vector<double> dec = svm_decision(model, x);
    const double tol = 1e-3 + 1e-9;
    for (std::size_t i = 0; i < x.rows; ++i) {
        const double margin = y[i] * dec[i];
        if (alpha[i] < 1e-9)
            CHECK(margin >= 1.0 - tol);
        else if (alpha[i] > c_value - 1e-9)
            CHECK(margin <= 1.0 + tol);
        else
            CHECK(margin == doctest::Approx(1.0).epsilon(2e-3));
        CHECK(alpha[i] >= 0.0);
        CHECK(alpha[i] <= c_value + 1e-12);
    }
}

TEST_CASE("svm degenerate single-class input gives a constant predictor") {
    Tensor2 x = Tensor2::zeros(5, 2);
    for (auto& v : x.data) v = 0.5;
    std::vector<int> y{-1, -1, -1, -1, -1};
    SvmModel model = svm_train(x, y, 1.0, 1.0, 0);
    CHECK(model.constant_label == -1);
    Tensor2 probe = Tensor2::zeros(3, 2);
    for (int v : svm_predict(model, probe)) CHECK(v == -1);
    for (double v : svm_decision(model, probe)) CHECK(v == -1.0);
}

TEST_CASE("svm input validation") {
    Tensor2 x = Tensor2::zeros(4, 2);
    std::vector<int> y{1, -1, 1, -1};
    CHECK_THROWS_AS(svm_train(x, {1, -1}, 1.0, 1.0, 0), std::invalid_argument);
    CHECK_THROWS_AS(svm_train(x, y, 0.0, 1.0, 0), std::invalid_argument);
    CHECK_THROWS_AS(svm_train(x, y, 1.0, -1.0, 0), std::invalid_argument);
    CHECK_THROWS_AS(svm_train(x, {1, -1, 2, -1}, 1.0, 1.0, 0),
                    std::invalid_argument);
    Rng rng(66);
    Tensor2 xx;
    std::vector<int> yy;
    make_blobs(10, 3, 2.0, 0.3, rng, xx, yy);
    SvmModel model = svm_train(xx, yy, 10.0, 0.5, 0);
    Tensor2 wrong = Tensor2::zeros(2, 5);
    CHECK_THROWS_AS(svm_decision(model, wrong), std::invalid_argument);
}

TEST_CASE("grid_search returns the only cell of a one-cell grid") {
    Rng rng(67);
    Tensor2 x;
    std::vector<int> y;
    make_blobs(10, 2, 1.5, 0.5, rng, x, y);
    GridSpec grid;
    grid.c_values = {3.0};
    grid.gamma_values = {0.7};
    GridChoice choice = grid_search(x, y, grid, 1);
    CHECK(choice.c_value == 3.0);
    CHECK(choice.gamma == 0.7);
    CHECK_FALSE(choice.fallback);
}

TEST_CASE("grid_search prefers the gamma matching the data scale") {
    GridSpec grid;
    grid.c_values = {1.0, 10.0};
    grid.gamma_values = {1e-4, 1.0, 1e4};
    int hits = 0;
    const int num_seeds = 10;
    for (int seed = 0; seed < num_seeds; ++seed) {
        Rng rng(700 + seed);
        Tensor2 x;
        std::vector<int> y;
        make_blobs(25, 2, 1.0, 0.6, rng, x, y);  // structure at unit scale
        GridChoice choice = grid_search(x, y, grid, seed);
        hits += choice.gamma == 1.0;
    }
    CHECK(hits >= 9);
}

TEST_CASE("grid_search ties resolve to the smallest C then gamma") {
    Rng rng(68);
    Tensor2 x;
    std::vector<int> y;
    make_blobs(20, 2, 50.0, 0.5, rng, x, y);  // trivially separable everywhere
    GridSpec grid;
    grid.c_values = {10.0, 1.0};      // deliberately unsorted
    grid.gamma_values = {1.0, 0.5};
    GridChoice choice = grid_search(x, y, grid, 2);
    CHECK(choice.mean_mcc == doctest::Approx(1.0));
    CHECK(choice.c_value == 1.0);
    CHECK(choice.gamma == 0.5);
}

TEST_CASE("grid_search falls back to the grid midpoint on degenerate input") {
    GridSpec grid;
    grid.c_values = {0.1, 1.0, 10.0, 100.0};
    grid.gamma_values = {0.01, 0.1, 1.0};

    Tensor2 nine = Tensor2::zeros(9, 2);
    std::vector<int> y{1, -1, 1, -1, 1, -1, 1, -1, 1};
    GridChoice small = grid_search(nine, y, grid, 0);
    CHECK(small.fallback);
    CHECK(small.c_value == 1.0);   // lower-middle of four candidates
    CHECK(small.gamma == 0.1);

    Tensor2 ten = Tensor2::zeros(10, 2);
    std::vector<int> same(10, 1);
    GridChoice single = grid_search(ten, same, grid, 0);
    CHECK(single.fallback);
    CHECK(single.c_value == 1.0);
    CHECK(single.gamma == 0.1);
}

TEST_CASE("grid_search never leaves the grid") {
    Rng rng(69);
    GridSpec grid;
    grid.c_values = {0.2, 2.0, 20.0};
    grid.gamma_values = {0.05, 0.5};
    for (int trial = 0; trial < 4; ++trial) {
        Tensor2 x;
        std::vector<int> y;
        make_blobs(12, 3, 0.3, 1.0, rng, x, y);  // heavy overlap, noisy scores
        GridChoice choice = grid_search(x, y, grid, trial);
        CHECK(std::count(grid.c_values.begin(), grid.c_values.end(),
                         choice.c_value) == 1);
        CHECK(std::count(grid.gamma_values.begin(), grid.gamma_values.end(),
                         choice.gamma) == 1);
        CHECK(choice.mean_mcc >= -1.0);
        CHECK(choice.mean_mcc <= 1.0);
    }
}

TEST_CASE("default_grid centers gamma on the pooled feature variance") {
    Tensor2 x = Tensor2::zeros(30, 5);
    Rng rng(70);
    for (auto& v : x.data) v = 2.0 * rng.normal();  // variance about 4
    GridSpec grid = default_grid(x);
    REQUIRE(grid.gamma_values.size() == 3);
    const double center = grid.gamma_values[1];
    CHECK(center == doctest::Approx(1.0 / (5.0 * 4.0)).epsilon(0.15));
    CHECK(grid.gamma_values[0] == doctest::Approx(center / 10.0));
    CHECK(grid.gamma_values[2] == doctest::Approx(center * 10.0));
    CHECK(grid.c_values == std::vector<double>{0.1, 1.0, 10.0, 100.0});
    CHECK(grid.folds == 5);
}
