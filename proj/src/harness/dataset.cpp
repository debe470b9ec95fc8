#include "malkit/harness/dataset.hpp"

#include <cmath>
#include <stdexcept>

namespace malkit::harness {

void validate_dataset(const Dataset& ds) {
    const std::size_t n = ds.features.size();
    if (ds.features.ids.size() != n)
        throw std::invalid_argument("dataset: id count does not match rows");
    if (ds.valence.size() != n || ds.arousal.size() != n)
        throw std::invalid_argument("dataset: every utterance needs both labels");
    for (std::size_t i = 0; i < n; ++i) {
        if ((ds.valence[i] != -1 && ds.valence[i] != 1) ||
            (ds.arousal[i] != -1 && ds.arousal[i] != 1))
            throw std::invalid_argument("dataset: labels must be -1 or +1 (row " +
                                        std::to_string(i) + ")");
    }
    if (!ds.blob.empty() && ds.blob.size() != n)
        throw std::invalid_argument("dataset: blob annotation length mismatch");
    if (!ds.sequences.empty() && ds.sequences.size() != n)
        throw std::invalid_argument("dataset: sequence count does not match rows");
}

std::size_t budget_to_count(std::size_t n_train, double budget_percent) {
    if (budget_percent <= 0.0 || budget_percent > 100.0)
        throw std::invalid_argument("budget must be in (0, 100]");
    const auto count = static_cast<std::size_t>(
        std::llround(static_cast<double>(n_train) * budget_percent / 100.0));
    return count < 1 ? 1 : count;
}

}  // namespace malkit::harness
