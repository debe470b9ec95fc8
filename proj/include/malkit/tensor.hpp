#ifndef MALKIT_TENSOR_HPP
#define MALKIT_TENSOR_HPP

#include <cstddef>
#include <string>
#include <vector>

namespace malkit {

// Dense row-major matrix of doubles. The one data container shared by all
// modules; vectors are represented as 1xN where a matrix API is expected.
struct Tensor2 {
    std::size_t rows = 0;
    std::size_t cols = 0;
    std::vector<double> data;  // rows * cols, row-major

    Tensor2() = default;
    Tensor2(std::size_t r, std::size_t c) : rows(r), cols(c), data(r * c, 0.0) {}
    Tensor2(std::size_t r, std::size_t c, std::vector<double> values);

    static Tensor2 zeros(std::size_t r, std::size_t c) { return Tensor2(r, c); }
    static Tensor2 identity(std::size_t n);

    double& at(std::size_t r, std::size_t c) { return data[r * cols + c]; }
    double at(std::size_t r, std::size_t c) const { return data[r * cols + c]; }

    double* row_ptr(std::size_t r) { return data.data() + r * cols; }
    const double* row_ptr(std::size_t r) const { return data.data() + r * cols; }

    std::size_t size() const { return rows * cols; }
    bool same_shape(const Tensor2& other) const {
        return rows == other.rows && cols == other.cols;
    }

    void fill(double value);
    bool all_finite() const;
};

// C = A * B
Tensor2 matmul(const Tensor2& a, const Tensor2& b);
// C = A^T * B (a is m x n, b is m x p, result n x p)
Tensor2 matmul_tn(const Tensor2& a, const Tensor2& b);
// C = A * B^T (a is m x n, b is p x n, result m x p)
Tensor2 matmul_nt(const Tensor2& a, const Tensor2& b);
// C += A * B into an existing accumulator
void matmul_add(const Tensor2& a, const Tensor2& b, Tensor2& out);
void matmul_tn_add(const Tensor2& a, const Tensor2& b, Tensor2& out);
void matmul_nt_add(const Tensor2& a, const Tensor2& b, Tensor2& out);

void add_row_inplace(Tensor2& m, const std::vector<double>& row);

// Throws std::invalid_argument with `what` when the shapes disagree.
void require_shape(const Tensor2& m, std::size_t rows, std::size_t cols,
                   const std::string& what);

}  // namespace malkit

#endif  // MALKIT_TENSOR_HPP
