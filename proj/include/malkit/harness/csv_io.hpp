#ifndef MALKIT_HARNESS_CSV_IO_HPP
#define MALKIT_HARNESS_CSV_IO_HPP

#include <cstdint>
#include <string>
#include <utility>
#include <vector>

#include "malkit/feature_matrix.hpp"
#include "malkit/harness/dataset.hpp"

namespace malkit::harness {

// features.csv: header `id,f0,...,f{D-1}`, one row per utterance,
// '.' decimal, values written with full round-trip precision.
FeatureMatrix read_features_csv(const std::string& path);
void write_features_csv(const std::string& path, const FeatureMatrix& fm);

// labels.csv: header `id,emotion`.
std::vector<std::pair<std::string, std::string>> read_labels_csv(
    const std::string& path);
void write_labels_csv(
    const std::string& path,
    const std::vector<std::pair<std::string, std::string>>& rows);

// Joins features.csv and labels.csv through a labelmap (JSON path, or the
// built-in table when the path is empty). Errors name the offending id or
// emotion: unmapped emotion, missing label, duplicate id, row mismatch.
Dataset load_csv_dataset(const std::string& features_path,
                         const std::string& labels_path,
                         const std::string& labelmap_path = "");

// One line of report.csv.
struct ResultRecord {
    std::string task;      // valence | arousal
    std::string feature;   // raw | cpc
    std::string reducer;
    std::string metric;    // euclidean | cosine
    double budget = 0.0;   // percent
    std::size_t fold = 0;
    std::size_t repeat = 0;
    std::string strategy;  // mal | random
    std::string policy;
    double mcc = 0.0;
    std::size_t n_labeled = 0;
    std::uint64_t seed = 0;
    std::string config_hash;
};

extern const char* kReportHeader;

std::string format_record(const ResultRecord& r);
// Tolerates a truncated final line (crash mid-append) by ignoring it.
std::vector<ResultRecord> read_report_csv(const std::string& path);

}  // namespace malkit::harness

#endif  // MALKIT_HARNESS_CSV_IO_HPP
