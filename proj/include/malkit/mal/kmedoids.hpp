#ifndef MALKIT_MAL_KMEDOIDS_HPP
#define MALKIT_MAL_KMEDOIDS_HPP

#include <cstdint>
#include <vector>

#include "malkit/mal/affinity.hpp"

namespace malkit::mal {

// Greedy max-min coverage over the distance table. The first pick is
// uniform-random from the seed; every later pick maximizes the distance to
// its nearest already-picked point, ties broken by lowest index.
std::vector<std::size_t> farthest_first(const AffinityMatrix& a,
                                        std::size_t k, std::uint64_t seed);

struct ClusteringResult {
    std::vector<std::size_t> medoids;     // k sample indices
    std::vector<std::size_t> assignment;  // N -> position in medoids
    std::vector<std::size_t> sizes;       // per cluster
    double cost = 0.0;                    // sum of distances to assigned medoids
    std::size_t iterations = 0;
    std::vector<double> cost_curve;       // initial assignment, then one per round

    std::size_t num_clusters() const { return medoids.size(); }
};

// Alternating k-medoids seeded by farthest_first. Assignment ties go to the
// medoid with the lowest sample index (medoids always claim themselves);
// medoid updates pick the member with the smallest within-cluster distance
// sum, ties by lowest index. Stops when assignments stabilize or after 100
// rounds. Cost never increases between rounds.
ClusteringResult k_medoids(const AffinityMatrix& a, std::size_t k,
                           std::uint64_t seed);

// Cluster-count rule used throughout: one cluster per three samples,
// rounded to nearest, never below 1.
std::size_t default_k(std::size_t n);

}  // namespace malkit::mal

#endif  // MALKIT_MAL_KMEDOIDS_HPP
