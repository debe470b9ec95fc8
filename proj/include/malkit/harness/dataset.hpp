#ifndef MALKIT_HARNESS_DATASET_HPP
#define MALKIT_HARNESS_DATASET_HPP

#include <string>
#include <vector>

#include "malkit/feature_matrix.hpp"

namespace malkit::harness {

// One corpus ready for experiments. Binary tasks use +1/-1:
// valence pos/neg, arousal high/low. `blob` keeps the generating cluster
// for synthetic data (-1 when unknown) so purity checks have ground truth.
// `sequences` carries per-utterance frame matrices when a sequence-level
// feature learner is part of the pipeline; it may be empty.
struct Dataset {
    std::string id;
    FeatureMatrix features;
    std::vector<int> valence;
    std::vector<int> arousal;
    std::vector<int> blob;
    std::vector<Tensor2> sequences;
    std::string notes;

    std::size_t size() const { return features.size(); }
};

// Structural checks: labels present and in {-1,+1} for every row, id list
// consistent, sequences (if any) one per row. Throws on violation.
void validate_dataset(const Dataset& ds);

// Budget percentage -> number of queries: round(N * budget / 100),
// never below one.
std::size_t budget_to_count(std::size_t n_train, double budget_percent);

}  // namespace malkit::harness

#endif  // MALKIT_HARNESS_DATASET_HPP
