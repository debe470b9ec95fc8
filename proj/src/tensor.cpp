#include "malkit/tensor.hpp"

#include <Eigen/Core>

#include <cmath>
#include <stdexcept>

namespace malkit {

namespace {

using EigenRowMajor =
    Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;
using Map = Eigen::Map<EigenRowMajor>;
using ConstMap = Eigen::Map<const EigenRowMajor>;

ConstMap view(const Tensor2& t) {
    return ConstMap(t.data.data(), static_cast<Eigen::Index>(t.rows),
                    static_cast<Eigen::Index>(t.cols));
}

Map view(Tensor2& t) {
    return Map(t.data.data(), static_cast<Eigen::Index>(t.rows),
               static_cast<Eigen::Index>(t.cols));
}

}  // namespace

Tensor2::Tensor2(std::size_t r, std::size_t c, std::vector<double> values)
    : rows(r), cols(c), data(std::move(values)) {
    if (data.size() != rows * cols) {
        throw std::invalid_argument("Tensor2: data length " +
                                    std::to_string(data.size()) +
                                    " does not match " + std::to_string(rows) +
                                    "x" + std::to_string(cols));
    }
}

Tensor2 Tensor2::identity(std::size_t n) {
    Tensor2 t(n, n);
    for (std::size_t i = 0; i < n; ++i) t.at(i, i) = 1.0;
    return t;
}

void Tensor2::fill(double value) {
    std::fill(data.begin(), data.end(), value);
}

bool Tensor2::all_finite() const {
    for (double v : data) {
        if (!std::isfinite(v)) return false;
    }
    return true;
}

void require_shape(const Tensor2& m, std::size_t rows, std::size_t cols,
                   const std::string& what) {
    if (m.rows != rows || m.cols != cols) {
        throw std::invalid_argument(
            what + ": expected " + std::to_string(rows) + "x" +
            std::to_string(cols) + ", got " + std::to_string(m.rows) + "x" +
            std::to_string(m.cols));
    }
}

Tensor2 matmul(const Tensor2& a, const Tensor2& b) {
    if (a.cols != b.rows) {
        throw std::invalid_argument("matmul: inner dims " +
                                    std::to_string(a.cols) + " vs " +
                                    std::to_string(b.rows));
    }
    Tensor2 out(a.rows, b.cols);
    view(out).noalias() = view(a) * view(b);
    return out;
}

Tensor2 matmul_tn(const Tensor2& a, const Tensor2& b) {
    if (a.rows != b.rows) {
        throw std::invalid_argument("matmul_tn: leading dims " +
                                    std::to_string(a.rows) + " vs " +
                                    std::to_string(b.rows));
    }
    Tensor2 out(a.cols, b.cols);
    view(out).noalias() = view(a).transpose() * view(b);
    return out;
}

Tensor2 matmul_nt(const Tensor2& a, const Tensor2& b) {
    if (a.cols != b.cols) {
        throw std::invalid_argument("matmul_nt: trailing dims " +
                                    std::to_string(a.cols) + " vs " +
                                    std::to_string(b.cols));
    }
    Tensor2 out(a.rows, b.rows);
    view(out).noalias() = view(a) * view(b).transpose();
    return out;
}

void matmul_add(const Tensor2& a, const Tensor2& b, Tensor2& out) {
    if (a.cols != b.rows || out.rows != a.rows || out.cols != b.cols) {
        throw std::invalid_argument("matmul_add: shape mismatch");
    }
    view(out).noalias() += view(a) * view(b);
}

void matmul_tn_add(const Tensor2& a, const Tensor2& b, Tensor2& out) {
    if (a.rows != b.rows || out.rows != a.cols || out.cols != b.cols) {
        throw std::invalid_argument("matmul_tn_add: shape mismatch");
    }
    view(out).noalias() += view(a).transpose() * view(b);
}

void matmul_nt_add(const Tensor2& a, const Tensor2& b, Tensor2& out) {
    if (a.cols != b.cols || out.rows != a.rows || out.cols != b.rows) {
        throw std::invalid_argument("matmul_nt_add: shape mismatch");
    }
    view(out).noalias() += view(a) * view(b).transpose();
}

void add_row_inplace(Tensor2& m, const std::vector<double>& row) {
    if (row.size() != m.cols) {
        throw std::invalid_argument("add_row_inplace: row length " +
                                    std::to_string(row.size()) + " vs cols " +
                                    std::to_string(m.cols));
    }
    for (std::size_t r = 0; r < m.rows; ++r) {
        double* p = m.row_ptr(r);
        for (std::size_t c = 0; c < m.cols; ++c) p[c] += row[c];
    }
}

}  // namespace malkit
