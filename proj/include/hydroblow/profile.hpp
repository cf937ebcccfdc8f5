// profile.hpp
// Self-similar blowup profiles phi(z) of the reduced nonlocal equation.
//
// For m > 0 the profile solves
//     phi' - (phi')^2 + phi phi'' + m^2 = 0,   phi(0) = phi(H) = 0,
// and therefore also the nonlocal problem with m^2 replaced by
// (2/H) int_0^H (phi')^2 dz. It is evaluated in closed form through the
// phase variable psi = phi':
//     z / H = I_tau(p, q),   tau = (psi_plus - psi) / delta,
//     phi   = C |psi - psi_plus|^p |psi - psi_minus|^q = C delta tau^p (1 - tau)^q.
#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace hydroblow::profile {

/// One member of the blowup family.
struct ProfileParams {
    double m = 0.0;          ///< nonlocal parameter, (2/H) int (phi')^2 = m^2
    double H = 0.0;          ///< interval length
    double psi_plus = 0.0;   ///< phi'(0), root of psi^2 - psi - m^2
    double psi_minus = 0.0;  ///< phi'(H), the negative root
    double delta = 0.0;      ///< psi_plus - psi_minus
    double eps = 0.0;        ///< 1 / (2 delta)
    double p = 0.0;          ///< psi_plus / delta = 1/2 + eps
    double q = 0.0;          ///< -psi_minus / delta = 1/2 - eps
    double C = 0.0;          ///< integral-curve constant, H = C B(p, q)
};

/// Tolerances for parameter consistency and profile certification.
struct Tolerances {
    double identity = 1e-12;         ///< family identities (root sum/product, delta^2 p q = m^2)
    double constant_routes = 1e-11;  ///< Beta-route vs closed-form C, relative
    double length = 1e-10;           ///< H = C B(p, q), relative
    double residual = 1e-8;          ///< sup residual of the local ODE
    double boundary = 1e-8;          ///< endpoint slopes and curvature
    double nonlocal_chebyshev = 1e-8;  ///< relative error of (2/H) int (phi')^2 vs m^2
    double nonlocal_uniform = 1e-3;    ///< same on uniform grids (trapezoid, algebraic rate)
};

enum class GridKind { chebyshev, uniform };

/// Sampled profile together with its certification data.
struct Profile {
    ProfileParams params;       ///< parameters of one arch (length H / segments)
    double length = 0.0;        ///< full interval length
    int segments = 1;           ///< 1 = positive profile, s >= 2 = s alternating arches
    GridKind grid = GridKind::chebyshev;
    std::vector<double> z;      ///< nodes, z.front() = 0, z.back() = length
    std::vector<double> weights;  ///< quadrature weights on z
    std::vector<double> phi, dphi, ddphi;
    double nonlocal = 0.0;      ///< (2/length) int (phi')^2 dz by the profile quadrature
    double residual_local = 0.0;  ///< sup |phi' - phi'^2 + phi phi'' + m^2| over interior nodes
    double residual = 0.0;      ///< sup residual of the nonlocal equation (quadrature integral)
    double tolerance = 0.0;     ///< declared construction tolerance the residual was certified against

    std::size_t size() const noexcept { return z.size(); }
};

/// Value, slope and curvature at one point.
struct PointValue {
    double phi;
    double dphi;
    double ddphi;
};

/// Derives the family parameters for given m and H. C is computed from the
/// Beta function and from the reflection-formula closed form
/// (H / pi) sin(pi q) = (H / pi) cos(pi / (4 sqrt(m^2 + 1/4))); both must agree.
ProfileParams params_from_m(double m, double H, const Tolerances& tol = {});

/// Checks every ProfileParams invariant; throws CertificationError naming the first violation.
void validate(const ProfileParams& params, const Tolerances& tol = {});

/// psi(z) = psi_plus - delta * I^{-1}_{z/H}(p, q), strictly decreasing.
double psi_of_z(const ProfileParams& params, double z);

/// phi as a function of the phase variable; exactly 0 at psi = psi_plus and psi = psi_minus.
double phi_of_psi(const ProfileParams& params, double psi);

/// phi, phi', phi'' at a point of [0, H] for a single arch. phi'' comes from the
/// derivative of the inverse Beta map, not from the ODE, so it can certify it.
PointValue evaluate(const ProfileParams& params, double z);

/// Same, for any profile (single or glued) at a point of [0, length].
PointValue evaluate(const Profile& profile, double z);

/// Samples and certifies a single positive arch on N + 1 nodes.
/// Throws CertificationError when any invariant fails.
Profile build_profile(const ProfileParams& params, int N, GridKind grid = GridKind::chebyshev,
                      const Tolerances& tol = {});

/// s alternating arches of length H / s built from params_from_m(m_half, H / s), joined by
/// odd reflection. Each arch carries its own Chebyshev grid of n_per_segment intervals.
Profile glue_sign_changing(double m_half, double H, int s, int n_per_segment,
                           const Tolerances& tol = {});

/// sup over interior nodes of |phi' - phi'^2 + phi phi'' + (2/H) int (phi')^2|.
double residual_fy(const Profile& profile);

/// True when every sample of phi is zero (the trivial solution, residual 0 for any quadrature).
bool is_trivial(const Profile& profile);

/// (2/length) int (phi')^2 with the profile quadrature.
double nonlocal_constant(const Profile& profile);

/// Number of sign changes between consecutive interior samples.
int sign_changes(const Profile& profile);

/// Largest phi over the samples.
double phi_max(const Profile& profile);

/// z grids used by build_profile.
std::vector<double> make_grid(int N, double H, GridKind grid);

/// Quadrature weights matching make_grid: Clenshaw-Curtis or trapezoid.
std::vector<double> grid_weights(int N, double H, GridKind grid);

const char* to_string(GridKind g);
GridKind grid_from_string(const std::string& s);

/// CSV with header z,phi,dphi,ddphi and 17 significant digits.
void write_csv(std::ostream& os, const Profile& profile);

/// Flat key=value document of the parameters.
void write_params(std::ostream& os, const ProfileParams& params);

}  // namespace hydroblow::profile
