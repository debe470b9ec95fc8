#include "malkit/mal/kmedoids.hpp"

#include <cassert>
#include <cmath>
#include <limits>
#include <stdexcept>

#include "malkit/rng.hpp"

namespace malkit::mal {

namespace {

constexpr std::size_t kNone = std::numeric_limits<std::size_t>::max();
constexpr std::size_t kMaxRounds = 100;

std::vector<std::size_t> assign_step(const AffinityMatrix& a,
                                     const std::vector<std::size_t>& medoids) {
    const std::size_t n = a.size();
    const std::size_t k = medoids.size();
    std::vector<std::size_t> cluster_of(n, kNone);
    for (std::size_t c = 0; c < k; ++c) cluster_of[medoids[c]] = c;
    for (std::size_t i = 0; i < n; ++i) {
        if (cluster_of[i] != kNone) continue;  // medoids keep their own cluster
        std::size_t best = 0;
        double best_d = a.at(i, medoids[0]);
        for (std::size_t c = 1; c < k; ++c) {
            const double d = a.at(i, medoids[c]);
            if (d < best_d || (d == best_d && medoids[c] < medoids[best])) {
                best_d = d;
                best = c;
            }
        }
        cluster_of[i] = best;
    }
    return cluster_of;
}

void update_medoids(const AffinityMatrix& a,
                    const std::vector<std::size_t>& assignment,
                    std::vector<std::size_t>& medoids) {
    const std::size_t k = medoids.size();
    std::vector<std::vector<std::size_t>> members(k);
    for (std::size_t i = 0; i < assignment.size(); ++i)
        members[assignment[i]].push_back(i);  // ascending by construction
    for (std::size_t c = 0; c < k; ++c) {
        assert(!members[c].empty());
        double best_sum = std::numeric_limits<double>::infinity();
        std::size_t best = medoids[c];
        for (std::size_t m : members[c]) {
            double sum = 0.0;
            for (std::size_t o : members[c]) sum += a.at(m, o);
            if (sum < best_sum) {
                best_sum = sum;
                best = m;
            }
        }
        medoids[c] = best;
    }
}

double assignment_cost(const AffinityMatrix& a,
                       const std::vector<std::size_t>& medoids,
                       const std::vector<std::size_t>& assignment) {
    double cost = 0.0;
    for (std::size_t i = 0; i < assignment.size(); ++i)
        cost += a.at(i, medoids[assignment[i]]);
    return cost;
}

}  // namespace

std::vector<std::size_t> farthest_first(const AffinityMatrix& a,
                                        std::size_t k, std::uint64_t seed) {
    const std::size_t n = a.size();
    if (k < 1 || k > n)
        throw std::invalid_argument("farthest_first: k must be in [1, N]");
    Rng rng(seed);
    std::vector<std::size_t> picks;
    picks.reserve(k);
    std::vector<char> picked(n, 0);
    const std::size_t first = rng.index(n);
    picks.push_back(first);
    picked[first] = 1;
    std::vector<double> min_dist(n);
    for (std::size_t i = 0; i < n; ++i) min_dist[i] = a.at(i, first);
    while (picks.size() < k) {
        std::size_t best = kNone;
        double best_d = -1.0;
        for (std::size_t i = 0; i < n; ++i) {
            if (picked[i]) continue;
            if (min_dist[i] > best_d) {  // strict: ties resolve to lowest index
                best_d = min_dist[i];
                best = i;
            }
        }
        picks.push_back(best);
        picked[best] = 1;
        for (std::size_t i = 0; i < n; ++i)
            min_dist[i] = std::min(min_dist[i], a.at(i, best));
    }
    return picks;
}

ClusteringResult k_medoids(const AffinityMatrix& a, std::size_t k,
                           std::uint64_t seed) {
    const std::size_t n = a.size();
    if (k < 1 || k > n)
        throw std::invalid_argument("k_medoids: k must be in [1, N]");

    ClusteringResult result;
    result.medoids = farthest_first(a, k, seed);
    result.assignment = assign_step(a, result.medoids);
    result.cost_curve.push_back(
        assignment_cost(a, result.medoids, result.assignment));
    result.iterations = 0;
    while (result.iterations < kMaxRounds) {
        ++result.iterations;
        update_medoids(a, result.assignment, result.medoids);
        std::vector<std::size_t> next = assign_step(a, result.medoids);
        result.cost_curve.push_back(assignment_cost(a, result.medoids, next));
        if (next == result.assignment) break;
        result.assignment = std::move(next);
    }

    result.sizes.assign(k, 0);
    for (std::size_t c : result.assignment) ++result.sizes[c];
    result.cost = assignment_cost(a, result.medoids, result.assignment);
    return result;
}

std::size_t default_k(std::size_t n) {
    if (n < 3) throw std::invalid_argument("default_k needs at least 3 samples");
    const auto k = static_cast<std::size_t>(
        std::llround(static_cast<double>(n) / 3.0));
    return k < 1 ? 1 : k;
}

}  // namespace malkit::mal
