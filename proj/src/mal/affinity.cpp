#include "malkit/mal/affinity.hpp"

#include <cmath>
#include <cstdint>
#include <cstring>
#include <fstream>
#include <stdexcept>
#include <vector>

namespace malkit::mal {

namespace {

constexpr char kMagic[8] = {'M', 'A', 'L', 'A', 'F', 'F', '0', '1'};

}  // namespace

Metric metric_from_string(const std::string& name) {
    if (name == "euclidean") return Metric::euclidean;
    if (name == "cosine") return Metric::cosine;
    throw std::invalid_argument("unknown metric: " + name);
}

std::string metric_to_string(Metric metric) {
    return metric == Metric::euclidean ? "euclidean" : "cosine";
}

AffinityMatrix affinity(const Tensor2& data, Metric metric) {
    const std::size_t n = data.rows;
    const std::size_t d = data.cols;
    if (n < 2) throw std::invalid_argument("affinity needs at least 2 rows");

    std::vector<double> norms;
    if (metric == Metric::cosine) {
        norms.resize(n);
        for (std::size_t i = 0; i < n; ++i) {
            double s = 0.0;
            const double* row = data.row_ptr(i);
            for (std::size_t c = 0; c < d; ++c) s += row[c] * row[c];
            norms[i] = std::sqrt(s);
            if (norms[i] == 0.0)
                throw std::invalid_argument(
                    "cosine distance undefined for zero-norm row " +
                    std::to_string(i));
        }
    }

    AffinityMatrix a;
    a.metric = metric;
    a.dist = Tensor2::zeros(n, n);
    for (std::size_t i = 0; i < n; ++i) {
        const double* ri = data.row_ptr(i);
        for (std::size_t j = i + 1; j < n; ++j) {
            const double* rj = data.row_ptr(j);
            double val = 0.0;
            if (metric == Metric::euclidean) {
                double s = 0.0;
                for (std::size_t c = 0; c < d; ++c) {
                    const double diff = ri[c] - rj[c];
                    s += diff * diff;
                }
                val = std::sqrt(s);
            } else {
                double dot = 0.0;
                for (std::size_t c = 0; c < d; ++c) dot += ri[c] * rj[c];
                val = 1.0 - dot / (norms[i] * norms[j]);
                if (val < 0.0) val = 0.0;  // guard fp overshoot on near-parallel rows
            }
            a.dist.at(i, j) = val;
            a.dist.at(j, i) = val;  // mirror, so symmetry is exact
        }
    }
    return a;
}

void save_affinity(const std::string& path, const AffinityMatrix& a) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw std::runtime_error("cannot write affinity cache: " + path);
    out.write(kMagic, sizeof(kMagic));
    const std::uint64_t n = a.dist.rows;
    const std::uint32_t metric_tag = a.metric == Metric::euclidean ? 0 : 1;
    out.write(reinterpret_cast<const char*>(&n), sizeof(n));
    out.write(reinterpret_cast<const char*>(&metric_tag), sizeof(metric_tag));
    out.write(reinterpret_cast<const char*>(a.dist.data.data()),
              static_cast<std::streamsize>(a.dist.data.size() * sizeof(double)));
    if (!out) throw std::runtime_error("short write to affinity cache: " + path);
}

AffinityMatrix load_affinity(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw std::runtime_error("cannot read affinity cache: " + path);
    char magic[8];
    in.read(magic, sizeof(magic));
    if (!in || std::memcmp(magic, kMagic, sizeof(magic)) != 0)
        throw std::runtime_error("not an affinity cache: " + path);
    std::uint64_t n = 0;
    std::uint32_t metric_tag = 0;
    in.read(reinterpret_cast<char*>(&n), sizeof(n));
    in.read(reinterpret_cast<char*>(&metric_tag), sizeof(metric_tag));
    if (!in || metric_tag > 1)
        throw std::runtime_error("corrupt affinity cache header: " + path);
    AffinityMatrix a;
    a.metric = metric_tag == 0 ? Metric::euclidean : Metric::cosine;
    a.dist = Tensor2::zeros(n, n);
    in.read(reinterpret_cast<char*>(a.dist.data.data()),
            static_cast<std::streamsize>(a.dist.data.size() * sizeof(double)));
    if (!in) throw std::runtime_error("truncated affinity cache: " + path);
    return a;
}

}  // namespace malkit::mal
