#ifndef MALKIT_HARNESS_SELFCHECK_HPP
#define MALKIT_HARNESS_SELFCHECK_HPP

#include <ostream>

namespace malkit::harness {

// Re-derives a handful of core results with plain-loop oracles written here,
// independently of the library code paths they check: MCC against the raw
// formula, k-medoids against exhaustive enumeration, InfoNCE against a
// materialized softmax, farthest-first against a replay, PCA orthonormality.
// Prints one pass/fail line per check, returns the number of failures.
// Budgeted to finish well under a minute.
int selfcheck(std::ostream& out);

}  // namespace malkit::harness

#endif  // MALKIT_HARNESS_SELFCHECK_HPP
