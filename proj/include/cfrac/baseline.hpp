#pragma once

// Error bound of the balanced-truncation comparison method for the lattice,
// built from the spectral radius of a tridiagonal matrix.

#include <cstddef>
#include <vector>

namespace cfrac::baseline {

/// Dense row-major square matrix.
struct Matrix {
    std::size_t n = 0;
    std::vector<double> data;

    [[nodiscard]] double operator()(std::size_t i, std::size_t j) const { return data[i * n + j]; }
    double& operator()(std::size_t i, std::size_t j) { return data[i * n + j]; }
};

/// Rows 0..n-2 are (1, -2, 1) around the diagonal; the last row is zero.
[[nodiscard]] Matrix tridiag_matrix(int n);

/// Spectral radius of tridiag_matrix(n), closed form 2 + 2 cos(pi / n).
[[nodiscard]] double spectral_quantity(int n);

/// Largest-magnitude eigenvalue estimate by power iteration with a
/// Rayleigh quotient, stopping when it changes by less than tol.
[[nodiscard]] double power_iteration(const Matrix& m, double tol = 1e-13, int max_iter = 200000);

struct BaselineBound {
    int n = 0;
    int r = 0;
    double lambda = 0.0;
    double l = 0.0;
    double gamma = 0.0;
    double bound = 0.0;
    bool infinite = false;  ///< gamma == 1
};

[[nodiscard]] BaselineBound besselink_bound(int n, int r, double lambda);

}  // namespace cfrac::baseline
