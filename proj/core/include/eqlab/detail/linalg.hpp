#pragma once

#include <cmath>
#include <span>
#include <vector>

#include "eqlab/errors.hpp"

namespace eqlab::detail {

using Matrix = std::vector<std::vector<double>>;

inline Matrix zeros(std::size_t d) { return Matrix(d, std::vector<double>(d, 0.0)); }

// A = L L^T for symmetric positive-definite A.
inline Matrix cholesky(const Matrix& a) {
    const std::size_t d = a.size();
    Matrix l = zeros(d);
    for (std::size_t i = 0; i < d; ++i) {
        for (std::size_t j = 0; j <= i; ++j) {
            double s = a[i][j];
            for (std::size_t m = 0; m < j; ++m) s -= l[i][m] * l[j][m];
            if (i == j) {
                if (s <= 0.0) throw InvalidArgumentError("cholesky: not positive definite");
                l[i][i] = std::sqrt(s);
            } else {
                l[i][j] = s / l[j][j];
            }
        }
    }
    return l;
}

// v^T (L L^T)^{-1} v via one forward substitution.
inline double quad_form(const Matrix& l, std::span<const double> v) {
    const std::size_t d = l.size();
    std::vector<double> w(d);
    double q = 0.0;
    for (std::size_t i = 0; i < d; ++i) {
        double s = v[i];
        for (std::size_t m = 0; m < i; ++m) s -= l[i][m] * w[m];
        w[i] = s / l[i][i];
        q += w[i] * w[i];
    }
    return q;
}

inline double log_det_from_cholesky(const Matrix& l) {
    double s = 0.0;
    for (std::size_t i = 0; i < l.size(); ++i) s += std::log(l[i][i]);
    return 2.0 * s;
}

}  // namespace eqlab::detail
