#ifndef MALKIT_MAL_QUERY_PLAN_HPP
#define MALKIT_MAL_QUERY_PLAN_HPP

#include <cstdint>
#include <string>
#include <unordered_map>
#include <vector>

#include "malkit/mal/kmedoids.hpp"

namespace malkit::mal {

// medoid_labels: only the queried samples end up labeled.
// cluster_labels: a queried medoid's label is copied to its whole cluster.
enum class LabelPolicy { medoid_labels, cluster_labels };

LabelPolicy policy_from_string(const std::string& name);
std::string policy_to_string(LabelPolicy policy);

struct QueryPlan {
    std::vector<std::size_t> indices;  // unique, length min(budget, N)
    LabelPolicy policy = LabelPolicy::medoid_labels;
    std::size_t budget = 0;
};

// Medoids first, in descending cluster-size order (ties to the lower cluster
// id). A budget beyond k is spent on seeded uniform-random picks among the
// samples not yet in the plan.
QueryPlan query_plan(const ClusteringResult& clusters, std::size_t budget,
                     LabelPolicy policy, std::uint64_t seed);

// The labeled training set: sample indices in ascending order with their
// labels alongside. Kept sparse (no in-band "unlabeled" marker) so any int
// is a legal label.
struct LabeledSet {
    std::vector<std::size_t> indices;
    std::vector<int> labels;  // parallel to indices

    std::size_t size() const { return indices.size(); }
};

// Turns oracle answers for the planned queries into a labeled set. Under
// cluster_labels each queried medoid's label is propagated to its cluster;
// individually queried samples always keep their own answer. Throws if the
// oracle is missing a planned index.
LabeledSet assign_labels(const QueryPlan& plan,
                         const ClusteringResult& clusters,
                         const std::unordered_map<std::size_t, int>& oracle);

}  // namespace malkit::mal

#endif  // MALKIT_MAL_QUERY_PLAN_HPP
