#include "malkit/harness/aggregate.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <limits>
#include <map>
#include <stdexcept>

#include <boost/math/distributions/students_t.hpp>

namespace malkit::harness {
namespace {

std::string fmt_double(double v) {
    char buf[48];
    std::snprintf(buf, sizeof buf, "%g", v);
    return buf;
}

bool numeric_key(const std::string& key) {
    return key == "budget" || key == "fold" || key == "repeat" ||
           key == "n_labeled" || key == "seed";
}

// Lexicographic over the key tuple, numeric columns compared as numbers so
// budget 5 sorts before budget 10.
bool tuple_less(const std::vector<std::string>& keys,
                const std::vector<std::string>& a,
                const std::vector<std::string>& b) {
    for (std::size_t i = 0; i < keys.size(); ++i) {
        if (a[i] == b[i]) continue;
        if (numeric_key(keys[i])) return std::stod(a[i]) < std::stod(b[i]);
        return a[i] < b[i];
    }
    return false;
}

std::vector<std::string> key_tuple(const ResultRecord& r,
                                   const std::vector<std::string>& keys) {
    std::vector<std::string> out;
    out.reserve(keys.size());
    for (const auto& k : keys) out.push_back(record_field(r, k));
    return out;
}

struct MeanVar {
    std::size_t n = 0;
    double mean = 0.0;
    double m2 = 0.0;  // Welford

    void add(double x) {
        ++n;
        double d = x - mean;
        mean += d / n;
        m2 += d * (x - mean);
    }
    double sample_var() const { return n < 2 ? 0.0 : m2 / (n - 1); }
};

// Paired t with the zero-variance corner pinned down: all-equal differences
// mean either "no effect" (t = 0, p = 1) or "constant effect" (infinite
// evidence, p = 0).
void paired_t(const std::vector<double>& diffs, double& t_stat,
              double& p_value) {
    MeanVar mv;
    for (double d : diffs) mv.add(d);
    double sd = std::sqrt(mv.sample_var());
    if (sd == 0.0 || mv.n < 2) {
        if (mv.mean == 0.0) {
            t_stat = 0.0;
            p_value = 1.0;
        } else {
            t_stat = mv.mean > 0 ? std::numeric_limits<double>::infinity()
                                 : -std::numeric_limits<double>::infinity();
            p_value = 0.0;
        }
        return;
    }
    t_stat = mv.mean / (sd / std::sqrt(static_cast<double>(mv.n)));
    boost::math::students_t_distribution<double> dist(
        static_cast<double>(mv.n - 1));
    p_value = 2.0 * boost::math::cdf(boost::math::complement(
                        dist, std::fabs(t_stat)));
}

void validate_keys(const std::vector<std::string>& keys) {
    if (keys.empty())
        throw std::invalid_argument("aggregate needs at least one group key");
    for (const auto& k : keys) {
        if (k == "mcc")
            throw std::invalid_argument("cannot group by the measurement");
        ResultRecord probe;  // throws for unknown names
        record_field(probe, k);
    }
}

}  // namespace

std::string record_field(const ResultRecord& r, const std::string& key) {
    if (key == "task") return r.task;
    if (key == "feature") return r.feature;
    if (key == "reducer") return r.reducer;
    if (key == "metric") return r.metric;
    if (key == "budget") return fmt_double(r.budget);
    if (key == "fold") return std::to_string(r.fold);
    if (key == "repeat") return std::to_string(r.repeat);
    if (key == "strategy") return r.strategy;
    if (key == "policy") return r.policy;
    if (key == "n_labeled") return std::to_string(r.n_labeled);
    if (key == "seed") return std::to_string(r.seed);
    if (key == "config_hash") return r.config_hash;
    throw std::invalid_argument("unknown report column '" + key + "'");
}

GroupedSummary group_means(const std::vector<ResultRecord>& records,
                           const std::vector<std::string>& keys) {
    if (records.empty())
        throw std::invalid_argument("aggregate needs a non-empty report");
    validate_keys(keys);

    auto cmp = [&keys](const std::vector<std::string>& a,
                       const std::vector<std::string>& b) {
        return tuple_less(keys, a, b);
    };
    std::map<std::vector<std::string>, MeanVar, decltype(cmp)> groups(cmp);
    for (const auto& r : records) groups[key_tuple(r, keys)].add(r.mcc);

    GroupedSummary out;
    out.keys = keys;
    for (const auto& [tuple, mv] : groups) {
        GroupSummary row;
        row.key_values = tuple;
        row.count = mv.n;
        row.mean_mcc = mv.mean;
        row.std_error =
            mv.n < 2 ? 0.0
                     : std::sqrt(mv.sample_var() / static_cast<double>(mv.n));
        out.rows.push_back(std::move(row));
    }
    return out;
}

ContrastTable strategy_contrast(const std::vector<ResultRecord>& records,
                                const std::vector<std::string>& keys) {
    if (records.empty())
        throw std::invalid_argument("aggregate needs a non-empty report");
    validate_keys(keys);
    for (const auto& k : keys)
        if (k == "strategy")
            throw std::invalid_argument(
                "cannot group the strategy contrast by 'strategy'");

    // Everything that identifies a cell except the strategy itself.
    const std::vector<std::string> pair_keys = {
        "task", "feature", "reducer", "metric",
        "budget", "fold",  "repeat",  "policy"};
    std::map<std::vector<std::string>, std::pair<std::vector<double>,
                                                 std::vector<double>>>
        cells;  // coordinate -> (mal scores, random scores)
    for (const auto& r : records) {
        auto& cell = cells[key_tuple(r, pair_keys)];
        if (r.strategy == "mal")
            cell.first.push_back(r.mcc);
        else if (r.strategy == "random")
            cell.second.push_back(r.mcc);
        else
            throw std::invalid_argument("unknown strategy '" + r.strategy +
                                        "' in report");
    }

    auto cmp = [&keys](const std::vector<std::string>& a,
                       const std::vector<std::string>& b) {
        return tuple_less(keys, a, b);
    };
    std::map<std::vector<std::string>, std::vector<double>, decltype(cmp)>
        groups(cmp);
    for (const auto& [coord, cell] : cells) {
        if (cell.first.size() != 1 || cell.second.size() != 1) {
            std::string name;
            for (std::size_t i = 0; i < pair_keys.size(); ++i)
                name += (i ? " " : "") + pair_keys[i] + "=" + coord[i];
            throw std::invalid_argument(
                "mismatched pairing: expected exactly one mal and one random "
                "record at " + name);
        }
        // Rebuild the requested grouping from the pairing coordinate.
        std::vector<std::string> tuple;
        for (const auto& k : keys) {
            auto it = std::find(pair_keys.begin(), pair_keys.end(), k);
            if (it == pair_keys.end())
                throw std::invalid_argument(
                    "contrast group key '" + k +
                    "' is not a pairing coordinate");
            tuple.push_back(coord[static_cast<std::size_t>(
                it - pair_keys.begin())]);
        }
        groups[tuple].push_back(cell.first[0] - cell.second[0]);
    }

    ContrastTable out;
    out.keys = keys;
    for (const auto& [tuple, diffs] : groups) {
        PairedContrast row;
        row.key_values = tuple;
        row.pairs = diffs.size();
        for (double d : diffs) row.mean_diff += d;
        row.mean_diff /= static_cast<double>(diffs.size());
        paired_t(diffs, row.t_stat, row.p_value);
        out.rows.push_back(std::move(row));
    }
    return out;
}

void write_group_csv(std::ostream& out, const GroupedSummary& summary) {
    for (const auto& k : summary.keys) out << k << ",";
    out << "count,mean_mcc,std_error\n";
    char buf[64];
    for (const auto& row : summary.rows) {
        for (const auto& v : row.key_values) out << v << ",";
        std::snprintf(buf, sizeof buf, "%zu,%.17g,%.17g", row.count,
                      row.mean_mcc, row.std_error);
        out << buf << "\n";
    }
}

void write_group_csv(const std::string& path, const GroupedSummary& summary) {
    std::ofstream out(path, std::ios::trunc);
    if (!out) throw std::runtime_error("cannot write " + path);
    write_group_csv(out, summary);
    if (!out) throw std::runtime_error("write to " + path + " failed");
}

void write_contrast_csv(std::ostream& out, const ContrastTable& table) {
    for (const auto& k : table.keys) out << k << ",";
    out << "pairs,mean_diff,t_stat,p_value\n";
    char buf[96];
    for (const auto& row : table.rows) {
        for (const auto& v : row.key_values) out << v << ",";
        std::snprintf(buf, sizeof buf, "%zu,%.17g,%.17g,%.17g", row.pairs,
                      row.mean_diff, row.t_stat, row.p_value);
        out << buf << "\n";
    }
}

void write_contrast_csv(const std::string& path, const ContrastTable& table) {
    std::ofstream out(path, std::ios::trunc);
    if (!out) throw std::runtime_error("cannot write " + path);
    write_contrast_csv(out, table);
    if (!out) throw std::runtime_error("write to " + path + " failed");
}

}  // namespace malkit::harness
