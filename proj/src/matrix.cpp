#include "wta/matrix.hpp"

#include "wta/error.hpp"

#include <cmath>

namespace wta {

SquareMatrix::SquareMatrix(std::size_t n, std::vector<double> row_major)
    : n_(n), values_(std::move(row_major)) {
    if (values_.size() != n * n)
        throw Error(ErrorCode::DimensionMismatch, "matrix data has " + std::to_string(values_.size()) +
                                                      " entries, expected " + std::to_string(n * n));
}

std::vector<double> SquareMatrix::multiply(std::span<const double> v) const {
    if (v.size() != n_)
        throw Error(ErrorCode::DimensionMismatch, "vector length does not match matrix size");
    std::vector<double> out(n_, 0.0);
    for (std::size_t i = 0; i < n_; ++i) {
        double acc = 0.0;
        for (std::size_t j = 0; j < n_; ++j)
            acc += values_[i * n_ + j] * v[j];
        out[i] = acc;
    }
    return out;
}

double SquareMatrix::frobenius_norm() const {
    double s = 0.0;
    for (double v : values_)
        s += v * v;
    return std::sqrt(s);
}

double SquareMatrix::trace() const {
    double t = 0.0;
    for (std::size_t i = 0; i < n_; ++i)
        t += values_[i * n_ + i];
    return t;
}

} // namespace wta
