#include "malkit/eval/mcc.hpp"

#include <cmath>
#include <stdexcept>

namespace malkit::eval {

ConfusionCounts confusion(const std::vector<int>& truth,
                          const std::vector<int>& predicted) {
    if (truth.size() != predicted.size())
        throw std::invalid_argument("confusion: label vectors differ in length");
    ConfusionCounts c;
    for (std::size_t i = 0; i < truth.size(); ++i) {
        const int t = truth[i];
        const int p = predicted[i];
        if ((t != -1 && t != 1) || (p != -1 && p != 1))
            throw std::invalid_argument("confusion: labels must be -1 or +1");
        if (t == 1)
            p == 1 ? ++c.tp : ++c.fn;
        else
            p == 1 ? ++c.fp : ++c.tn;
    }
    return c;
}

double mcc(const ConfusionCounts& c) {
    if (c.total() == 0) throw std::invalid_argument("mcc of empty counts");
    const double tp = static_cast<double>(c.tp);
    const double tn = static_cast<double>(c.tn);
    const double fp = static_cast<double>(c.fp);
    const double fn = static_cast<double>(c.fn);
    const double denom = (tp + fp) * (tp + fn) * (tn + fp) * (tn + fn);
    if (denom == 0.0) return 0.0;
    return (tp * tn - fp * fn) / std::sqrt(denom);
}

}  // namespace malkit::eval
