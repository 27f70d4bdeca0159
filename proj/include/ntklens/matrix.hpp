#pragma once

#include <cstddef>
#include <span>
#include <vector>

namespace ntklens {

// Dense row-major matrix of doubles. Sized for desk-scale experiments:
// everything lives in one contiguous buffer, no views, no expression
// templates. Shape mismatches throw std::invalid_argument.
class Matrix {
public:
    Matrix() = default;
    Matrix(std::size_t rows, std::size_t cols, double fill = 0.0);

    std::size_t rows() const { return rows_; }
    std::size_t cols() const { return cols_; }
    std::size_t size() const { return data_.size(); }
    bool empty() const { return data_.empty(); }

    double &operator()(std::size_t r, std::size_t c) { return data_[r * cols_ + c]; }
    double operator()(std::size_t r, std::size_t c) const { return data_[r * cols_ + c]; }

    double *row_ptr(std::size_t r) { return data_.data() + r * cols_; }
    const double *row_ptr(std::size_t r) const { return data_.data() + r * cols_; }
    std::span<double> row(std::size_t r) { return {row_ptr(r), cols_}; }
    std::span<const double> row(std::size_t r) const { return {row_ptr(r), cols_}; }

    std::span<double> flat() { return {data_.data(), data_.size()}; }
    std::span<const double> flat() const { return {data_.data(), data_.size()}; }

    void fill(double v);
    std::vector<double> col_copy(std::size_t c) const;

    // this += scale * (a b^T); a has rows() entries, b has cols() entries.
    void add_outer(std::span<const double> a, std::span<const double> b, double scale);
    // column c += scale * a
    void add_to_col(std::size_t c, std::span<const double> a, double scale);
    void add_scaled(const Matrix &other, double scale);

    double dot(const Matrix &other) const;
    double frobenius_norm() const;
    double max_abs() const;
    bool all_finite() const;

    bool same_shape(const Matrix &other) const {
        return rows_ == other.rows_ && cols_ == other.cols_;
    }

private:
    std::size_t rows_ = 0;
    std::size_t cols_ = 0;
    std::vector<double> data_;
};

// y = M x
std::vector<double> matvec(const Matrix &m, std::span<const double> x);
// y = M^T x
std::vector<double> matvec_t(const Matrix &m, std::span<const double> x);

double dot(std::span<const double> a, std::span<const double> b);
void axpy(std::span<double> y, std::span<const double> x, double scale);
void scale_inplace(std::span<double> x, double s);
std::vector<double> hadamard(std::span<const double> a, std::span<const double> b);
double norm2(std::span<const double> x);
bool all_finite(std::span<const double> x);

} // namespace ntklens
