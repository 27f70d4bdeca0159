#include "ntklens/matrix.hpp"

#include <cmath>
#include <stdexcept>

namespace ntklens {

Matrix::Matrix(std::size_t rows, std::size_t cols, double fill)
    : rows_(rows), cols_(cols), data_(rows * cols, fill) {}

void Matrix::fill(double v) {
    for (auto &x : data_) x = v;
}

std::vector<double> Matrix::col_copy(std::size_t c) const {
    if (c >= cols_) throw std::invalid_argument("Matrix::col_copy: column out of range");
    std::vector<double> out(rows_);
    for (std::size_t r = 0; r < rows_; ++r) out[r] = data_[r * cols_ + c];
    return out;
}

void Matrix::add_outer(std::span<const double> a, std::span<const double> b, double scale) {
    if (a.size() != rows_ || b.size() != cols_)
        throw std::invalid_argument("Matrix::add_outer: shape mismatch");
    for (std::size_t r = 0; r < rows_; ++r) {
        const double ar = scale * a[r];
        if (ar == 0.0) continue;
        double *row = row_ptr(r);
        for (std::size_t c = 0; c < cols_; ++c) row[c] += ar * b[c];
    }
}

void Matrix::add_to_col(std::size_t c, std::span<const double> a, double scale) {
    if (a.size() != rows_ || c >= cols_)
        throw std::invalid_argument("Matrix::add_to_col: shape mismatch");
    for (std::size_t r = 0; r < rows_; ++r) data_[r * cols_ + c] += scale * a[r];
}

void Matrix::add_scaled(const Matrix &other, double scale) {
    if (!same_shape(other)) throw std::invalid_argument("Matrix::add_scaled: shape mismatch");
    for (std::size_t i = 0; i < data_.size(); ++i) data_[i] += scale * other.data_[i];
}

double Matrix::dot(const Matrix &other) const {
    if (!same_shape(other)) throw std::invalid_argument("Matrix::dot: shape mismatch");
    double acc = 0.0;
    for (std::size_t i = 0; i < data_.size(); ++i) acc += data_[i] * other.data_[i];
    return acc;
}

double Matrix::frobenius_norm() const { return std::sqrt(dot(*this)); }

double Matrix::max_abs() const {
    double m = 0.0;
    for (double x : data_) m = std::max(m, std::fabs(x));
    return m;
}

bool Matrix::all_finite() const {
    for (double x : data_)
        if (!std::isfinite(x)) return false;
    return true;
}

std::vector<double> matvec(const Matrix &m, std::span<const double> x) {
    if (x.size() != m.cols()) throw std::invalid_argument("matvec: shape mismatch");
    std::vector<double> y(m.rows(), 0.0);
    for (std::size_t r = 0; r < m.rows(); ++r) {
        const double *row = m.row_ptr(r);
        double acc = 0.0;
        for (std::size_t c = 0; c < m.cols(); ++c) acc += row[c] * x[c];
        y[r] = acc;
    }
    return y;
}

std::vector<double> matvec_t(const Matrix &m, std::span<const double> x) {
    if (x.size() != m.rows()) throw std::invalid_argument("matvec_t: shape mismatch");
    std::vector<double> y(m.cols(), 0.0);
    for (std::size_t r = 0; r < m.rows(); ++r) {
        const double xr = x[r];
        if (xr == 0.0) continue;
        const double *row = m.row_ptr(r);
        for (std::size_t c = 0; c < m.cols(); ++c) y[c] += xr * row[c];
    }
    return y;
}

double dot(std::span<const double> a, std::span<const double> b) {
    if (a.size() != b.size()) throw std::invalid_argument("dot: size mismatch");
    double acc = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) acc += a[i] * b[i];
    return acc;
}

void axpy(std::span<double> y, std::span<const double> x, double scale) {
    if (y.size() != x.size()) throw std::invalid_argument("axpy: size mismatch");
    for (std::size_t i = 0; i < y.size(); ++i) y[i] += scale * x[i];
}

void scale_inplace(std::span<double> x, double s) {
    for (auto &v : x) v *= s;
}

std::vector<double> hadamard(std::span<const double> a, std::span<const double> b) {
    if (a.size() != b.size()) throw std::invalid_argument("hadamard: size mismatch");
    std::vector<double> out(a.size());
    for (std::size_t i = 0; i < a.size(); ++i) out[i] = a[i] * b[i];
    return out;
}

double norm2(std::span<const double> x) { return std::sqrt(dot(x, x)); }

bool all_finite(std::span<const double> x) {
    for (double v : x)
        if (!std::isfinite(v)) return false;
    return true;
}

} // namespace ntklens
