#ifndef MALKIT_EVAL_FOLDS_HPP
#define MALKIT_EVAL_FOLDS_HPP

#include <cstddef>
#include <cstdint>
#include <vector>

namespace malkit::eval {

// Random fold assignment for cross-validation: a seeded permutation dealt
// into `folds` near-equal parts (sizes differ by at most one). Returns one
// fold id per sample. N < folds is an error.
std::vector<std::size_t> make_folds(std::size_t n, std::size_t folds,
                                    std::uint64_t seed);

}  // namespace malkit::eval

#endif  // MALKIT_EVAL_FOLDS_HPP
