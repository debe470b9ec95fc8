#include "malkit/harness/csv_io.hpp"

#include <charconv>
#include <cstdio>
#include <fstream>
#include <set>
#include <sstream>
#include <stdexcept>
#include <unordered_map>

#include "malkit/harness/labelmap.hpp"

namespace malkit::harness {

namespace {

std::vector<std::string> split_line(const std::string& line) {
    std::vector<std::string> fields;
    std::size_t start = 0;
    while (true) {
        const std::size_t comma = line.find(',', start);
        if (comma == std::string::npos) {
            fields.push_back(line.substr(start));
            break;
        }
        fields.push_back(line.substr(start, comma - start));
        start = comma + 1;
    }
    if (!fields.empty() && !fields.back().empty() &&
        fields.back().back() == '\r')
        fields.back().pop_back();
    return fields;
}

double parse_double(const std::string& s, const std::string& context) {
    double value = 0.0;
    const char* begin = s.data();
    const char* end = s.data() + s.size();
    auto [ptr, ec] = std::from_chars(begin, end, value);
    if (ec != std::errc() || ptr != end)
        throw std::invalid_argument(context + ": bad number '" + s + "'");
    return value;
}

std::size_t parse_size(const std::string& s, const std::string& context) {
    std::size_t value = 0;
    auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), value);
    if (ec != std::errc() || ptr != s.data() + s.size())
        throw std::invalid_argument(context + ": bad count '" + s + "'");
    return value;
}

void check_plain_field(const std::string& s) {
    if (s.find(',') != std::string::npos || s.find('"') != std::string::npos ||
        s.find('\n') != std::string::npos)
        throw std::invalid_argument("csv fields may not contain commas, quotes "
                                    "or newlines: '" + s + "'");
}

std::string format_g17(double v) {
    char buf[32];
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    return buf;
}

}  // namespace

FeatureMatrix read_features_csv(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::invalid_argument("cannot open features csv: " + path);
    std::string line;
    if (!std::getline(in, line))
        throw std::invalid_argument("features csv is empty: " + path);
    std::vector<std::string> header = split_line(line);
    if (header.size() < 2 || header[0] != "id")
        throw std::invalid_argument(
            "features csv must start with header id,f0,...: " + path);
    const std::size_t dim = header.size() - 1;
    for (std::size_t c = 0; c < dim; ++c) {
        if (header[c + 1] != "f" + std::to_string(c))
            throw std::invalid_argument("features csv header column " +
                                        std::to_string(c + 1) +
                                        " should be f" + std::to_string(c));
    }

    std::vector<std::string> ids;
    std::vector<double> values;
    std::set<std::string> seen;
    while (std::getline(in, line)) {
        if (line.empty()) continue;
        std::vector<std::string> fields = split_line(line);
        if (fields.size() != dim + 1)
            throw std::invalid_argument(
                path + ": row " + std::to_string(ids.size() + 1) + " has " +
                std::to_string(fields.size()) + " fields, expected " +
                std::to_string(dim + 1));
        if (!seen.insert(fields[0]).second)
            throw std::invalid_argument(path + ": duplicate id '" + fields[0] +
                                        "'");
        ids.push_back(fields[0]);
        for (std::size_t c = 0; c < dim; ++c)
            values.push_back(parse_double(fields[c + 1], path));
    }
    if (ids.empty())
        throw std::invalid_argument("features csv has no data rows: " + path);

    Tensor2 matrix = Tensor2::zeros(ids.size(), dim);
    matrix.data = std::move(values);
    return FeatureMatrix(std::move(ids), std::move(matrix));
}

void write_features_csv(const std::string& path, const FeatureMatrix& fm) {
    std::ofstream out(path);
    if (!out) throw std::runtime_error("cannot write features csv: " + path);
    out << "id";
    for (std::size_t c = 0; c < fm.dim(); ++c) out << ",f" << c;
    out << "\n";
    for (std::size_t i = 0; i < fm.size(); ++i) {
        check_plain_field(fm.ids[i]);
        out << fm.ids[i];
        for (std::size_t c = 0; c < fm.dim(); ++c)
            out << ',' << format_g17(fm.values.at(i, c));
        out << "\n";
    }
    if (!out) throw std::runtime_error("short write to " + path);
}

std::vector<std::pair<std::string, std::string>> read_labels_csv(
    const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::invalid_argument("cannot open labels csv: " + path);
    std::string line;
    if (!std::getline(in, line))
        throw std::invalid_argument("labels csv is empty: " + path);
    std::vector<std::string> header = split_line(line);
    if (header.size() != 2 || header[0] != "id" || header[1] != "emotion")
        throw std::invalid_argument("labels csv needs header id,emotion: " +
                                    path);
    std::vector<std::pair<std::string, std::string>> rows;
    while (std::getline(in, line)) {
        if (line.empty()) continue;
        std::vector<std::string> fields = split_line(line);
        if (fields.size() != 2)
            throw std::invalid_argument(path + ": malformed label row '" +
                                        line + "'");
        rows.emplace_back(fields[0], fields[1]);
    }
    return rows;
}

void write_labels_csv(
    const std::string& path,
    const std::vector<std::pair<std::string, std::string>>& rows) {
    std::ofstream out(path);
    if (!out) throw std::runtime_error("cannot write labels csv: " + path);
    out << "id,emotion\n";
    for (const auto& [id, emotion] : rows) {
        check_plain_field(id);
        check_plain_field(emotion);
        out << id << ',' << emotion << "\n";
    }
    if (!out) throw std::runtime_error("short write to " + path);
}

Dataset load_csv_dataset(const std::string& features_path,
                         const std::string& labels_path,
                         const std::string& labelmap_path) {
    FeatureMatrix fm = read_features_csv(features_path);
    std::vector<std::pair<std::string, std::string>> labels =
        read_labels_csv(labels_path);
    const LabelMap map = labelmap_path.empty() ? default_labelmap()
                                               : load_labelmap(labelmap_path);

    if (labels.size() != fm.size())
        throw std::invalid_argument(
            "row-count mismatch: " + std::to_string(fm.size()) +
            " feature rows vs " + std::to_string(labels.size()) + " labels");

    std::unordered_map<std::string, std::string> emotion_of;
    for (const auto& [id, emotion] : labels) {
        if (!emotion_of.emplace(id, emotion).second)
            throw std::invalid_argument("duplicate id in labels: '" + id + "'");
    }

    Dataset ds;
    ds.id = features_path;
    ds.features = std::move(fm);
    for (const std::string& id : ds.features.ids) {
        auto it = emotion_of.find(id);
        if (it == emotion_of.end())
            throw std::invalid_argument("no label for utterance id '" + id +
                                        "'");
        const LabelMap::Quadrant q = map.resolve(it->second);
        ds.valence.push_back(q.valence);
        ds.arousal.push_back(q.arousal);
    }
    validate_dataset(ds);
    return ds;
}

const char* kReportHeader =
    "task,feature,reducer,metric,budget,fold,repeat,strategy,policy,mcc,"
    "n_labeled,seed,config_hash";

std::string format_record(const ResultRecord& r) {
    std::ostringstream out;
    char budget[32];
    std::snprintf(budget, sizeof(budget), "%g", r.budget);
    out << r.task << ',' << r.feature << ',' << r.reducer << ',' << r.metric
        << ',' << budget << ',' << r.fold << ',' << r.repeat << ','
        << r.strategy << ',' << r.policy << ',' << format_g17(r.mcc) << ','
        << r.n_labeled << ',' << r.seed << ',' << r.config_hash;
    return out.str();
}

std::vector<ResultRecord> read_report_csv(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::invalid_argument("cannot open report csv: " + path);
    std::string line;
    if (!std::getline(in, line))
        throw std::invalid_argument("report csv is empty: " + path);
    {
        std::vector<std::string> header = split_line(line);
        std::vector<std::string> expected = split_line(kReportHeader);
        if (header != expected)
            throw std::invalid_argument("unexpected report header in " + path);
    }

    std::vector<std::string> lines;
    while (std::getline(in, line))
        if (!line.empty()) lines.push_back(line);

    std::vector<ResultRecord> records;
    for (std::size_t li = 0; li < lines.size(); ++li) {
        std::vector<std::string> f = split_line(lines[li]);
        if (f.size() != 13) {
            if (li + 1 == lines.size()) break;  // torn final append; redo cell
            throw std::invalid_argument(path + ": malformed record line " +
                                        std::to_string(li + 2));
        }
        try {
            ResultRecord r;
            r.task = f[0];
            r.feature = f[1];
            r.reducer = f[2];
            r.metric = f[3];
            r.budget = parse_double(f[4], path);
            r.fold = parse_size(f[5], path);
            r.repeat = parse_size(f[6], path);
            r.strategy = f[7];
            r.policy = f[8];
            r.mcc = parse_double(f[9], path);
            r.n_labeled = parse_size(f[10], path);
            r.seed = parse_size(f[11], path);
            r.config_hash = f[12];
            records.push_back(std::move(r));
        } catch (const std::invalid_argument&) {
            if (li + 1 == lines.size()) break;
            throw;
        }
    }
    return records;
}

}  // namespace malkit::harness
