#ifndef MALKIT_HARNESS_AGGREGATE_HPP
#define MALKIT_HARNESS_AGGREGATE_HPP

#include <cstddef>
#include <ostream>
#include <string>
#include <vector>

#include "malkit/harness/csv_io.hpp"

namespace malkit::harness {

// Value of a named report column, rendered as text. Numeric columns compare
// numerically when rows are sorted. "mcc" is a measurement, not a key.
std::string record_field(const ResultRecord& record, const std::string& key);

struct GroupSummary {
    std::vector<std::string> key_values;  // parallel to GroupedSummary::keys
    std::size_t count = 0;
    double mean_mcc = 0.0;
    double std_error = 0.0;  // sample std / sqrt(count); 0 for count == 1
};

struct GroupedSummary {
    std::vector<std::string> keys;
    std::vector<GroupSummary> rows;  // sorted by key tuple
};

GroupedSummary group_means(const std::vector<ResultRecord>& records,
                           const std::vector<std::string>& keys);

// Paired MAL-vs-random contrast. Records are paired on every identifying
// coordinate except strategy; a coordinate with anything other than exactly
// one record per strategy is a pairing error. Differences (mal - random) are
// then grouped by `keys` and each group gets a paired t-test.
struct PairedContrast {
    std::vector<std::string> key_values;
    std::size_t pairs = 0;
    double mean_diff = 0.0;
    double t_stat = 0.0;
    double p_value = 1.0;  // two-sided
};

struct ContrastTable {
    std::vector<std::string> keys;
    std::vector<PairedContrast> rows;
};

ContrastTable strategy_contrast(const std::vector<ResultRecord>& records,
                                const std::vector<std::string>& keys);

void write_group_csv(std::ostream& out, const GroupedSummary& summary);
void write_group_csv(const std::string& path, const GroupedSummary& summary);
void write_contrast_csv(std::ostream& out, const ContrastTable& table);
void write_contrast_csv(const std::string& path, const ContrastTable& table);

}  // namespace malkit::harness

#endif  // MALKIT_HARNESS_AGGREGATE_HPP
