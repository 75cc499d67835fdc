#include "cfrac/baseline.hpp"

#include "cfrac/error.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <string>

namespace cfrac::baseline {

Matrix tridiag_matrix(int n) {
    if (n < 2) throw Error(ErrorKind::InvalidArgument, "tridiag_matrix: n must be >= 2, got " + std::to_string(n));
    const auto m = static_cast<std::size_t>(n);
    Matrix a{m, std::vector<double>(m * m, 0.0)};
    for (std::size_t i = 0; i + 1 < m; ++i) {
        a(i, i) = -2.0;
        if (i > 0) a(i, i - 1) = 1.0;
        a(i, i + 1) = 1.0;
    }
    return a;
}

double spectral_quantity(int n) {
    if (n < 2) throw Error(ErrorKind::InvalidArgument, "spectral_quantity: n must be >= 2, got " + std::to_string(n));
    // Block-triangular: the zero last row contributes eigenvalue 0, the
    // leading (n-1)x(n-1) block has eigenvalues -2 + 2 cos(k pi / n).
    return 2.0 + 2.0 * std::cos(std::numbers::pi / static_cast<double>(n));
}

double power_iteration(const Matrix& m, double tol, int max_iter) {
    const std::size_t n = m.n;
    if (n == 0) throw Error(ErrorKind::InvalidArgument, "power_iteration: empty matrix");
    struct Entry {
        std::size_t row, col;
        double value;
    };
    std::vector<Entry> nz;
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = 0; j < n; ++j) {
            if (m(i, j) != 0.0) nz.push_back({i, j, m(i, j)});
        }
    }
    std::vector<double> v(n), w(n);
    for (std::size_t i = 0; i < n; ++i) v[i] = 1.0 + 0.5 * std::sin(1.3 * static_cast<double>(i + 1));
    auto normalize = [](std::vector<double>& x) {
        double s = 0.0;
        for (double c : x) s += c * c;
        s = std::sqrt(s);
        if (s == 0.0) return false;
        for (double& c : x) c /= s;
        return true;
    };
    normalize(v);
    double theta = 0.0;
    for (int it = 0; it < max_iter; ++it) {
        std::fill(w.begin(), w.end(), 0.0);
        for (const auto& e : nz) w[e.row] += e.value * v[e.col];
        double rq = 0.0;
        for (std::size_t i = 0; i < n; ++i) rq += v[i] * w[i];
        if (!normalize(w)) return 0.0;
        v.swap(w);
        if (it > 0 && std::abs(rq - theta) < tol) return std::abs(rq);
        theta = rq;
    }
    return std::abs(theta);
}

BaselineBound besselink_bound(int n, int r, double lambda) {
    if (r < 0 || n <= r) {
        throw Error(ErrorKind::InvalidArgument,
                    "besselink_bound: need n > r >= 0 (n=" + std::to_string(n) + ", r=" + std::to_string(r) + ")");
    }
    BaselineBound b;
    b.n = n;
    b.r = r;
    b.lambda = lambda;
    b.l = spectral_quantity(n);
    b.gamma = b.l * lambda;
    const double d = 1.0 - b.gamma;
    if (d == 0.0) {
        b.infinite = true;
        b.bound = std::numeric_limits<double>::infinity();
    } else {
        b.bound = static_cast<double>(n - r) / (d * d);
    }
    return b;
}

}  // namespace cfrac::baseline
