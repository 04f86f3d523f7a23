#pragma once

#include <Eigen/Core>

#include <span>
#include <stdexcept>

namespace kinecoach {

// Fills invalid rows of `values` in place. Interior gaps are linearly
// interpolated against `abscissa` between the nearest valid rows; leading and
// trailing gaps hold the nearest valid row. Returns the number of valid rows;
// when it is zero nothing is written.
template <typename Derived>
Eigen::Index fill_gaps(Eigen::MatrixBase<Derived>& values, std::span<const bool> valid,
                       std::span<const double> abscissa) {
    const Eigen::Index n = values.rows();
    if (static_cast<Eigen::Index>(valid.size()) != n || static_cast<Eigen::Index>(abscissa.size()) != n) {
        throw std::invalid_argument("fill_gaps: size mismatch");
    }
    Eigen::Index valid_count = 0;
    Eigen::Index prev = -1;
    for (Eigen::Index i = 0; i < n; ++i) {
        if (!valid[static_cast<std::size_t>(i)]) continue;
        ++valid_count;
        if (prev < 0) {
            for (Eigen::Index k = 0; k < i; ++k) values.row(k) = values.row(i);
        } else if (i - prev > 1) {
            const double x0 = abscissa[static_cast<std::size_t>(prev)];
            const double x1 = abscissa[static_cast<std::size_t>(i)];
            for (Eigen::Index k = prev + 1; k < i; ++k) {
                const double w = (abscissa[static_cast<std::size_t>(k)] - x0) / (x1 - x0);
                values.row(k) = (1.0 - w) * values.row(prev) + w * values.row(i);
            }
        }
        prev = i;
    }
    if (prev >= 0) {
        for (Eigen::Index k = prev + 1; k < n; ++k) values.row(k) = values.row(prev);
    }
    return valid_count;
}

}  // namespace kinecoach
