#pragma once

#include <cstddef>
#include <initializer_list>
#include <vector>

namespace beamlu {

/// Dense real matrix, row-major, double precision. Operations treat
/// matrices as values and return fresh storage; nothing aliases.
class Matrix {
public:
    Matrix() = default;
    Matrix(std::size_t rows, std::size_t cols, double fill = 0.0)
        : rows_(rows), cols_(cols), data_(rows * cols, fill) {}

    static Matrix identity(std::size_t n);
    static Matrix from_rows(std::initializer_list<std::initializer_list<double>> rows);
    static Matrix diagonal(const std::vector<double>& d);
    static Matrix column(const std::vector<double>& v);

    std::size_t rows() const { return rows_; }
    std::size_t cols() const { return cols_; }
    std::size_t size() const { return data_.size(); }
    bool empty() const { return data_.empty(); }
    bool is_square() const { return rows_ == cols_; }

    double& operator()(std::size_t i, std::size_t j) { return data_[i * cols_ + j]; }
    const double& operator()(std::size_t i, std::size_t j) const { return data_[i * cols_ + j]; }

    double* data() { return data_.data(); }
    const double* data() const { return data_.data(); }
    const std::vector<double>& values() const { return data_; }

    bool all_finite() const;

    friend bool operator==(const Matrix& a, const Matrix& b) {
        return a.rows_ == b.rows_ && a.cols_ == b.cols_ && a.data_ == b.data_;
    }

private:
    std::size_t rows_ = 0;
    std::size_t cols_ = 0;
    std::vector<double> data_;
};

Matrix matmul(const Matrix& a, const Matrix& b);
Matrix matadd(const Matrix& a, const Matrix& b);
Matrix matsub(const Matrix& a, const Matrix& b);
Matrix transpose(const Matrix& a);
Matrix scale(const Matrix& a, double s);

/// Copy of the rectangle [r0, r1) x [c0, c1).
Matrix submatrix(const Matrix& a, std::size_t r0, std::size_t r1, std::size_t c0, std::size_t c1);

/// Write `block` into `dst` at (r0, c0); the one sanctioned mutation helper,
/// used when assembling factors.
void place(Matrix& dst, std::size_t r0, std::size_t c0, const Matrix& block);

std::vector<double> matvec(const Matrix& a, const std::vector<double>& x);
std::vector<double> vecsub(const std::vector<double>& a, const std::vector<double>& b);
std::vector<double> vecadd(const std::vector<double>& a, const std::vector<double>& b);
double vec_norm2(const std::vector<double>& v);

} // namespace beamlu
