#ifndef MALKIT_EVAL_MCC_HPP
#define MALKIT_EVAL_MCC_HPP

#include <cstddef>
#include <vector>

namespace malkit::eval {

struct ConfusionCounts {
    std::size_t tp = 0;
    std::size_t tn = 0;
    std::size_t fp = 0;
    std::size_t fn = 0;

    std::size_t total() const { return tp + tn + fp + fn; }
};

// Tallies binary outcomes; labels must be -1 or +1.
ConfusionCounts confusion(const std::vector<int>& truth,
                          const std::vector<int>& predicted);

// Matthews correlation: (TP*TN - FP*FN) / sqrt((TP+FP)(TP+FN)(TN+FP)(TN+FN)).
// Any zero factor in the denominator yields 0. Empty counts are an error.
double mcc(const ConfusionCounts& counts);

}  // namespace malkit::eval

#endif  // MALKIT_EVAL_MCC_HPP
