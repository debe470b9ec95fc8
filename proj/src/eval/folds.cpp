#include "malkit/eval/folds.hpp"

#include <numeric>
#include <stdexcept>

#include "malkit/rng.hpp"

namespace malkit::eval {

std::vector<std::size_t> make_folds(std::size_t n, std::size_t folds,
                                    std::uint64_t seed) {
    if (folds == 0) throw std::invalid_argument("make_folds: zero folds");
    if (n < folds)
        throw std::invalid_argument("make_folds: need at least one sample per fold");
    std::vector<std::size_t> perm(n);
    std::iota(perm.begin(), perm.end(), std::size_t{0});
    Rng rng(seed);
    rng.shuffle(perm);

    std::vector<std::size_t> assignment(n);
    const std::size_t base = n / folds;
    const std::size_t extra = n % folds;  // first `extra` folds get one more
    std::size_t pos = 0;
    for (std::size_t f = 0; f < folds; ++f) {
        const std::size_t size = base + (f < extra ? 1 : 0);
        for (std::size_t i = 0; i < size; ++i) assignment[perm[pos++]] = f;
    }
    return assignment;
}

}  // namespace malkit::eval
