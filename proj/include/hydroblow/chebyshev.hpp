// chebyshev.hpp
// Chebyshev-Gauss-Lobatto collocation on [0, H]: nodes, differentiation,
// cumulative integration from z = 0, and Clenshaw-Curtis weights.
#pragma once

#include <Eigen/Dense>

namespace hydroblow {

/// Nodes z_j = H sin^2(pi j / 2N), j = 0..N, increasing from 0 to H.
///
/// The cumulative integration matrix is exact for polynomials of degree N and
/// its last row equals the Clenshaw-Curtis weights, so
/// `integral(f) == (cumulative() * f)(N)` holds to rounding.
class ChebyshevGrid {
public:
    ChebyshevGrid(int n, double height);

    int n() const noexcept { return n_; }
    double height() const noexcept { return height_; }
    const Eigen::VectorXd& nodes() const noexcept { return z_; }
    const Eigen::MatrixXd& derivative() const noexcept { return d_; }
    /// (Q f)_j = integral of f from 0 to z_j
    const Eigen::MatrixXd& cumulative() const noexcept { return q_; }
    const Eigen::RowVectorXd& weights() const noexcept { return w_; }

    double integral(const Eigen::Ref<const Eigen::VectorXd>& f) const { return w_.dot(f); }

private:
    int n_;
    double height_;
    Eigen::VectorXd z_;
    Eigen::MatrixXd d_;
    Eigen::MatrixXd q_;
    Eigen::RowVectorXd w_;
};

/// Nodes of the Chebyshev grid without building the operators.
Eigen::VectorXd chebyshev_nodes(int n, double height);

}  // namespace hydroblow
