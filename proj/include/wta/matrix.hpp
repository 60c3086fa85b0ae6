#pragma once

#include <cstddef>
#include <span>
#include <vector>

namespace wta {

/// Dense row-major n x n matrix of doubles.
class SquareMatrix {
public:
    SquareMatrix() = default;
    explicit SquareMatrix(std::size_t n) : n_(n), values_(n * n, 0.0) {}
    SquareMatrix(std::size_t n, std::vector<double> row_major);

    std::size_t size() const noexcept { return n_; }

    double& operator()(std::size_t i, std::size_t j) { return values_[i * n_ + j]; }
    double operator()(std::size_t i, std::size_t j) const { return values_[i * n_ + j]; }

    std::span<const double> row(std::size_t i) const { return {values_.data() + i * n_, n_}; }
    std::span<const double> values() const noexcept { return values_; }

    std::vector<double> multiply(std::span<const double> v) const;
    double frobenius_norm() const;
    double trace() const;

    bool operator==(const SquareMatrix&) const = default;

private:
    std::size_t n_ = 0;
    std::vector<double> values_;
};

} // namespace wta
