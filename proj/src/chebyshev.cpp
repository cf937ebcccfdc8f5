// chebyshev.cpp

#include "hydroblow/chebyshev.hpp"

#include <cmath>
#include <numbers>
#include <string>

#include "hydroblow/errors.hpp"

namespace hydroblow {
namespace {
constexpr double kPi = std::numbers::pi;

// cos(pi * m / n) with the index reduced mod 2n first
double cospi_ratio(long m, int n) {
    const long r = m % (2L * n);
    return std::cos(kPi * static_cast<double>(r) / n);
}
}  // namespace

Eigen::VectorXd chebyshev_nodes(int n, double height) {
    Eigen::VectorXd z(n + 1);
    for (int j = 0; j <= n; ++j) {
        const double s = std::sin(kPi * j / (2.0 * n));
        z(j) = height * s * s;
    }
    z(0) = 0.0;
    z(n) = height;
    return z;
}

ChebyshevGrid::ChebyshevGrid(int n, double height) : n_(n), height_(height) {
    if (n < 2) throw DomainError("ChebyshevGrid: need at least 2 intervals, got " + std::to_string(n));
    if (!(height > 0.0)) throw DomainError("ChebyshevGrid: height must be positive");
    z_ = chebyshev_nodes(n, height);

    // Differentiation in x = cos(theta), then d/dz = -(2/H) d/dx.
    d_.setZero(n + 1, n + 1);
    auto c = [n](int i) { return (i == 0 || i == n) ? 2.0 : 1.0; };
    for (int i = 0; i <= n; ++i) {
        double rowsum = 0.0;
        for (int j = 0; j <= n; ++j) {
            if (i == j) continue;
            const double ti = kPi * i / n;
            const double tj = kPi * j / n;
            const double dx = -2.0 * std::sin(0.5 * (ti + tj)) * std::sin(0.5 * (ti - tj));
            const double sign = ((i + j) % 2 == 0) ? 1.0 : -1.0;
            d_(i, j) = (c(i) / c(j)) * sign / dx;
            rowsum += d_(i, j);
        }
        d_(i, i) = -rowsum;
    }
    d_ *= -2.0 / height;

    // values -> Chebyshev coefficients a_k
    Eigen::MatrixXd coef(n + 1, n + 1);
    for (int k = 0; k <= n; ++k) {
        const double gk = (k == 0 || k == n) ? 1.0 : 2.0;
        for (int j = 0; j <= n; ++j) {
            const double gj = (j == 0 || j == n) ? 0.5 : 1.0;
            coef(k, j) = gk / n * gj * cospi_ratio(static_cast<long>(j) * k, n);
        }
    }
    // coefficients of f -> coefficients of an antiderivative (degree n + 1)
    Eigen::MatrixXd anti = Eigen::MatrixXd::Zero(n + 2, n + 1);
    anti(1, 0) = 1.0;
    anti(2, 1) = 0.25;
    for (int k = 2; k <= n; ++k) {
        anti(k + 1, k) += 1.0 / (2.0 * (k + 1));
        anti(k - 1, k) -= 1.0 / (2.0 * (k - 1));
    }
    // F(1) - F(x_j), written as (1 - T_k(x_j)) so row 0 vanishes exactly
    Eigen::MatrixXd diff(n + 1, n + 2);
    for (int j = 0; j <= n; ++j)
        for (int k = 0; k <= n + 1; ++k)
            diff(j, k) = 1.0 - cospi_ratio(static_cast<long>(j) * k, n);
    q_ = (0.5 * height) * (diff * (anti * coef));
    q_.row(0).setZero();
    w_ = q_.row(n);
}

}  // namespace hydroblow
