#include "malkit/mal/query_plan.hpp"

#include <algorithm>
#include <numeric>
#include <stdexcept>

#include "malkit/rng.hpp"

namespace malkit::mal {

LabelPolicy policy_from_string(const std::string& name) {
    if (name == "medoid_labels") return LabelPolicy::medoid_labels;
    if (name == "cluster_labels") return LabelPolicy::cluster_labels;
    throw std::invalid_argument("unknown label policy: " + name);
}

std::string policy_to_string(LabelPolicy policy) {
    return policy == LabelPolicy::medoid_labels ? "medoid_labels"
                                                : "cluster_labels";
}

QueryPlan query_plan(const ClusteringResult& clusters, std::size_t budget,
                     LabelPolicy policy, std::uint64_t seed) {
    if (budget < 1) throw std::invalid_argument("query budget must be >= 1");
    const std::size_t n = clusters.assignment.size();
    const std::size_t k = clusters.num_clusters();
    const std::size_t plan_len = std::min(budget, n);

    std::vector<std::size_t> order(k);
    std::iota(order.begin(), order.end(), std::size_t{0});
    std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
        if (clusters.sizes[a] != clusters.sizes[b])
            return clusters.sizes[a] > clusters.sizes[b];
        return a < b;
    });

    QueryPlan plan;
    plan.policy = policy;
    plan.budget = budget;
    for (std::size_t c : order) {
        if (plan.indices.size() == plan_len) break;
        plan.indices.push_back(clusters.medoids[c]);
    }

    if (plan.indices.size() < plan_len) {
        std::vector<char> queried(n, 0);
        for (std::size_t i : plan.indices) queried[i] = 1;
        std::vector<std::size_t> rest;
        rest.reserve(n - plan.indices.size());
        for (std::size_t i = 0; i < n; ++i)
            if (!queried[i]) rest.push_back(i);
        Rng rng(seed);
        rng.shuffle(rest);
        for (std::size_t i = 0; plan.indices.size() < plan_len; ++i)
            plan.indices.push_back(rest[i]);
    }
    return plan;
}

LabeledSet assign_labels(const QueryPlan& plan,
                         const ClusteringResult& clusters,
                         const std::unordered_map<std::size_t, int>& oracle) {
    const std::size_t n = clusters.assignment.size();
    std::vector<char> has_label(n, 0);
    std::vector<int> value(n, 0);

    auto answer = [&](std::size_t idx) {
        auto it = oracle.find(idx);
        if (it == oracle.end())
            throw std::invalid_argument("no oracle label for queried sample " +
                                        std::to_string(idx));
        return it->second;
    };

    if (plan.policy == LabelPolicy::cluster_labels) {
        for (std::size_t idx : plan.indices) {
            for (std::size_t c = 0; c < clusters.num_clusters(); ++c) {
                if (clusters.medoids[c] != idx) continue;
                const int lab = answer(idx);
                for (std::size_t i = 0; i < n; ++i)
                    if (clusters.assignment[i] == c) {
                        has_label[i] = 1;
                        value[i] = lab;
                    }
                break;
            }
        }
    }
    // individual answers last, so a queried sample keeps its own label even
    // if a propagated medoid label disagrees
    for (std::size_t idx : plan.indices) {
        has_label[idx] = 1;
        value[idx] = answer(idx);
    }

    LabeledSet out;
    for (std::size_t i = 0; i < n; ++i)
        if (has_label[i]) {
            out.indices.push_back(i);
            out.labels.push_back(value[i]);
        }
    return out;
}

}  // namespace malkit::mal
