// profile.cpp

#include "hydroblow/profile.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <ostream>
#include <string>

#include "hydroblow/chebyshev.hpp"
#include "hydroblow/errors.hpp"
#include "hydroblow/io.hpp"
#include "hydroblow/specfun.hpp"

namespace hydroblow::profile {
namespace {

constexpr double kPi = std::numbers::pi;

double rel_diff(double a, double b) { return std::fabs(a - b) / std::max(std::fabs(b), 1e-300); }

void require(bool ok, const char* invariant, const std::string& what) {
    if (!ok) throw CertificationError(invariant, what);
}

std::string num(double v) { return io::format_double(v); }

// Phase variable at z: tau = (psi_plus - psi)/delta, sigma = 1 - tau, with
// logs. The smaller of the two is always solved for directly, so both keep
// full relative accuracy; for small m, sigma underflows long before phi
// does, hence everything downstream works from the logs.
struct Phase {
    double tau, sigma, ln_tau, ln_sigma;
};

Phase phase_at(const ProfileParams& P, double z) {
    if (!(z >= 0.0 && z <= P.H))
        throw DomainError("profile: z = " + num(z) + " outside [0, " + num(P.H) + "]");
    constexpr double ninf = -std::numeric_limits<double>::infinity();
    if (z == 0.0) return {0.0, 1.0, ninf, 0.0};
    if (z == P.H) return {1.0, 0.0, 0.0, ninf};
    const double x = z / P.H;
    const double split = specfun::reg_inc_beta(0.5, P.p, P.q);
    Phase ph{};
    if (x <= split) {
        ph.ln_tau = specfun::inv_reg_inc_beta_log(x, P.p, P.q);
        ph.tau = std::exp(ph.ln_tau);
        ph.sigma = -std::expm1(ph.ln_tau);
        ph.ln_sigma = std::log1p(-ph.tau);
    } else {
        const double xc = (P.H - z) / P.H;
        ph.ln_sigma = specfun::inv_reg_inc_beta_log(xc, P.q, P.p);
        ph.sigma = std::exp(ph.ln_sigma);
        ph.tau = -std::expm1(ph.ln_sigma);
        ph.ln_tau = std::log1p(-ph.sigma);
    }
    return ph;
}

PointValue value_at(const ProfileParams& P, double ln_beta_pq, double z) {
    const Phase ph = phase_at(P, z);
    // sigma itself may underflow in the interior; only the logs mark the endpoints
    if (std::isinf(ph.ln_tau)) return {0.0, P.psi_plus, 0.0};
    if (std::isinf(ph.ln_sigma)) return {0.0, P.psi_minus, 0.0};
    PointValue v{};
    v.dphi = ph.tau <= ph.sigma ? P.psi_plus - P.delta * ph.tau : P.psi_minus + P.delta * ph.sigma;
    v.phi = P.C * P.delta * std::exp(P.p * ph.ln_tau + P.q * ph.ln_sigma);
    // d psi / dz = -(delta B(p,q) / H) tau^q sigma^p, from dz/dtau = H tau^(p-1) sigma^(q-1) / B
    v.ddphi = -(P.delta / P.H) * std::exp(ln_beta_pq + P.q * ph.ln_tau + P.p * ph.ln_sigma);
    return v;
}

double local_residual(double phi, double dphi, double ddphi, double c) {
    return std::fabs(dphi - dphi * dphi + phi * ddphi + c);
}

double sup_residual(const Profile& pr, double c) {
    double r = 0.0;
    for (std::size_t i = 1; i + 1 < pr.size(); ++i)
        r = std::max(r, local_residual(pr.phi[i], pr.dphi[i], pr.ddphi[i], c));
    return r;
}

// Fills nonlocal/residual fields and checks every invariant shared by single and glued profiles.
void certify(Profile& pr, double nonlocal_tol, const Tolerances& tol) {
    const auto n = pr.size();
    const double m2 = pr.params.m * pr.params.m;
    require(pr.phi.front() == 0.0 && pr.phi.back() == 0.0, "endpoint_zero",
            "phi(0) and phi(H) must vanish exactly");
    require(std::fabs(pr.ddphi.front()) <= tol.boundary && std::fabs(pr.ddphi.back()) <= tol.boundary,
            "endpoint_curvature", "phi'' at the endpoints exceeds " + num(tol.boundary));
    for (std::size_t i = 0; i < n; ++i) {
        if (!std::isfinite(pr.phi[i]) || !std::isfinite(pr.dphi[i]) || !std::isfinite(pr.ddphi[i]))
            throw CertificationError("finite", "non-finite sample at z = " + num(pr.z[i]));
    }
    pr.nonlocal = nonlocal_constant(pr);
    require(rel_diff(pr.nonlocal, m2) <= nonlocal_tol, "nonlocal_identity",
            "(2/H) int phi'^2 = " + num(pr.nonlocal) + " vs m^2 = " + num(m2));
    pr.residual_local = sup_residual(pr, m2);
    require(pr.residual_local <= tol.residual, "residual_local",
            "sup residual " + num(pr.residual_local) + " above " + num(tol.residual));
    pr.tolerance = tol.residual + nonlocal_tol * m2;
    pr.residual = residual_fy(pr);
    require(pr.residual <= pr.tolerance, "residual",
            "sup nonlocal residual " + num(pr.residual) + " above " + num(pr.tolerance));
}

}  // namespace

ProfileParams params_from_m(double m, double H, const Tolerances& tol) {
    if (!(m > 0.0) || !std::isfinite(m)) throw DomainError("m must be positive, got " + num(m));
    if (!(H > 0.0) || !std::isfinite(H)) throw DomainError("H must be positive, got " + num(H));
    ProfileParams P;
    P.m = m;
    P.H = H;
    const double r = std::hypot(m, 0.5);
    P.psi_plus = 0.5 + r;
    P.psi_minus = -(m * m) / P.psi_plus;  // = 1/2 - r without cancellation
    P.delta = 2.0 * r;
    P.eps = 1.0 / (2.0 * P.delta);
    P.p = P.psi_plus / P.delta;
    P.q = (m * m) / (P.psi_plus * P.delta);
    P.C = H / specfun::beta(P.p, P.q);
    const double closed = H * std::sin(kPi * P.q) / kPi;
    require(rel_diff(P.C, closed) <= tol.constant_routes, "constant_routes",
            "C from Beta " + num(P.C) + " vs closed form " + num(closed));
    validate(P, tol);
    return P;
}

void validate(const ProfileParams& P, const Tolerances& tol) {
    const double m2 = P.m * P.m;
    const double scale = std::max(1.0, m2);
    require(P.m > 0.0 && P.H > 0.0, "positive", "m and H must be positive");
    require(std::fabs(P.psi_plus + P.psi_minus - 1.0) <= tol.identity, "root_sum",
            "psi_plus + psi_minus = " + num(P.psi_plus + P.psi_minus));
    require(std::fabs(P.psi_plus * P.psi_minus + m2) <= tol.identity * scale, "root_product",
            "psi_plus psi_minus = " + num(P.psi_plus * P.psi_minus));
    require(std::fabs(P.p + P.q - 1.0) <= tol.identity, "exponent_sum", "p + q = " + num(P.p + P.q));
    require(std::fabs(P.p - 0.5 - P.eps) <= tol.identity && std::fabs(P.q - 0.5 + P.eps) <= tol.identity,
            "exponent_eps", "p, q inconsistent with eps");
    require(P.eps > 0.0 && P.eps < 0.5, "eps_range", "eps = " + num(P.eps));
    require(std::fabs(P.psi_plus - P.delta * P.p) <= tol.identity * scale, "psi_plus_delta_p",
            "psi_plus - delta p = " + num(P.psi_plus - P.delta * P.p));
    require(std::fabs(P.delta * P.delta * P.p * P.q - m2) <= tol.identity * scale, "delta2pq",
            "delta^2 p q = " + num(P.delta * P.delta * P.p * P.q) + " vs m^2 = " + num(m2));
    require(P.C > 0.0, "C_positive", "C = " + num(P.C));
    require(rel_diff(P.C * specfun::beta(P.p, P.q), P.H) <= tol.length, "length",
            "C B(p,q) = " + num(P.C * specfun::beta(P.p, P.q)) + " vs H = " + num(P.H));
}

double psi_of_z(const ProfileParams& P, double z) {
    const Phase ph = phase_at(P, z);
    return ph.tau <= ph.sigma ? P.psi_plus - P.delta * ph.tau : P.psi_minus + P.delta * ph.sigma;
}

double phi_of_psi(const ProfileParams& P, double psi) {
    if (!(psi >= P.psi_minus && psi <= P.psi_plus))
        throw DomainError("phi_of_psi: psi = " + num(psi) + " outside [psi_minus, psi_plus]");
    if (psi == P.psi_plus || psi == P.psi_minus) return 0.0;
    return P.C * std::pow(P.psi_plus - psi, P.p) * std::pow(psi - P.psi_minus, P.q);
}

PointValue evaluate(const ProfileParams& P, double z) {
    return value_at(P, specfun::ln_beta(P.p, P.q), z);
}

PointValue evaluate(const Profile& pr, double z) {
    if (pr.segments <= 1) return evaluate(pr.params, z);
    if (!(z >= 0.0 && z <= pr.length))
        throw DomainError("profile: z = " + num(z) + " outside [0, " + num(pr.length) + "]");
    const double h = pr.params.H;
    const int j = std::min(static_cast<int>(z / h), pr.segments - 1);
    if (j % 2 == 0) return evaluate(pr.params, std::clamp(z - j * h, 0.0, h));
    const PointValue v = evaluate(pr.params, std::clamp((j + 1) * h - z, 0.0, h));
    return {-v.phi, v.dphi, -v.ddphi};
}

std::vector<double> make_grid(int N, double H, GridKind grid) {
    if (N < 1) throw DomainError("grid needs N >= 1");
    if (grid == GridKind::chebyshev) {
        const Eigen::VectorXd z = chebyshev_nodes(N, H);
        return {z.data(), z.data() + z.size()};
    }
    std::vector<double> z(N + 1);
    for (int i = 0; i <= N; ++i) z[i] = H * static_cast<double>(i) / N;
    z[N] = H;
    return z;
}

std::vector<double> grid_weights(int N, double H, GridKind grid) {
    if (grid == GridKind::chebyshev) {
        const ChebyshevGrid g(N, H);
        return {g.weights().data(), g.weights().data() + g.weights().size()};
    }
    std::vector<double> w(N + 1, H / N);
    w.front() *= 0.5;
    w.back() *= 0.5;
    return w;
}

Profile build_profile(const ProfileParams& params, int N, GridKind grid, const Tolerances& tol) {
    if (N < 16) throw DomainError("build_profile needs N >= 16, got " + std::to_string(N));
    validate(params, tol);
    Profile pr;
    pr.params = params;
    pr.length = params.H;
    pr.segments = 1;
    pr.grid = grid;
    pr.z = make_grid(N, params.H, grid);
    pr.weights = grid_weights(N, params.H, grid);
    const double lnb = specfun::ln_beta(params.p, params.q);
    pr.phi.resize(N + 1);
    pr.dphi.resize(N + 1);
    pr.ddphi.resize(N + 1);
    for (int i = 0; i <= N; ++i) {
        const PointValue v = value_at(params, lnb, pr.z[i]);
        pr.phi[i] = v.phi;
        pr.dphi[i] = v.dphi;
        pr.ddphi[i] = v.ddphi;
    }
    for (int i = 1; i < N; ++i)
        require(pr.phi[i] > 0.0, "positive_interior", "phi <= 0 at z = " + num(pr.z[i]));
    require(std::fabs(pr.dphi.front() - params.psi_plus) <= tol.boundary &&
                std::fabs(pr.dphi.back() - params.psi_minus) <= tol.boundary,
            "endpoint_slopes", "phi'(0), phi'(H) differ from psi_plus, psi_minus");
    certify(pr, grid == GridKind::chebyshev ? tol.nonlocal_chebyshev : tol.nonlocal_uniform, tol);
    return pr;
}

Profile glue_sign_changing(double m_half, double H, int s, int n_per_segment, const Tolerances& tol) {
    if (s < 2) throw DomainError("glue_sign_changing needs s >= 2, got " + std::to_string(s));
    if (n_per_segment < 16)
        throw DomainError("glue_sign_changing needs n_per_segment >= 16");
    const double h = H / s;
    const Profile arch = build_profile(params_from_m(m_half, h, tol), n_per_segment,
                                       GridKind::chebyshev, tol);
    const int n = n_per_segment;
    Profile pr;
    pr.params = arch.params;
    pr.length = H;
    pr.segments = s;
    pr.grid = GridKind::chebyshev;
    const std::size_t total = static_cast<std::size_t>(s) * n + 1;
    pr.z.assign(total, 0.0);
    pr.weights.assign(total, 0.0);
    pr.phi.assign(total, 0.0);
    pr.dphi.assign(total, 0.0);
    pr.ddphi.assign(total, 0.0);
    for (int j = 0; j < s; ++j) {
        const double left = j * h;
        for (int i = 0; i <= n; ++i) {
            const std::size_t g = static_cast<std::size_t>(j) * n + i;
            // odd arches are the mirror image of the even one, node for node
            const int src = j % 2 == 0 ? i : n - i;
            const double sign = j % 2 == 0 ? 1.0 : -1.0;
            pr.weights[g] += arch.weights[src];
            if (i == 0 && j > 0) continue;  // joint already written by the arch on its left
            pr.z[g] = j % 2 == 0 ? left + arch.z[src] : (left + h) - arch.z[src];
            pr.phi[g] = sign * arch.phi[src];
            pr.dphi[g] = arch.dphi[src];
            pr.ddphi[g] = sign * arch.ddphi[src];
        }
    }
    pr.z.front() = 0.0;
    pr.z.back() = H;
    require(sign_changes(pr) == s - 1, "sign_changes",
            "expected " + std::to_string(s - 1) + " sign changes, found " +
                std::to_string(sign_changes(pr)));
    certify(pr, tol.nonlocal_chebyshev, tol);
    return pr;
}

double nonlocal_constant(const Profile& pr) {
    double s = 0.0;
    for (std::size_t i = 0; i < pr.size(); ++i) s += pr.weights[i] * pr.dphi[i] * pr.dphi[i];
    return 2.0 * s / pr.length;
}

bool is_trivial(const Profile& pr) {
    return std::all_of(pr.phi.begin(), pr.phi.end(), [](double v) { return v == 0.0; });
}

double residual_fy(const Profile& pr) { return sup_residual(pr, nonlocal_constant(pr)); }

int sign_changes(const Profile& pr) {
    int count = 0;
    double last = 0.0;
    for (std::size_t i = 1; i + 1 < pr.size(); ++i) {
        const double v = pr.phi[i];
        if (v == 0.0) continue;
        if (last != 0.0 && (v > 0.0) != (last > 0.0)) ++count;
        last = v;
    }
    return count;
}

double phi_max(const Profile& pr) {
    return pr.phi.empty() ? 0.0 : *std::max_element(pr.phi.begin(), pr.phi.end());
}

const char* to_string(GridKind g) { return g == GridKind::chebyshev ? "chebyshev" : "uniform"; }

GridKind grid_from_string(const std::string& s) {
    if (s == "chebyshev") return GridKind::chebyshev;
    if (s == "uniform") return GridKind::uniform;
    throw DomainError("unknown grid kind: " + s);
}

void write_csv(std::ostream& os, const Profile& pr) {
    io::write_header(os, {"z", "phi", "dphi", "ddphi"});
    for (std::size_t i = 0; i < pr.size(); ++i)
        io::write_row(os, {pr.z[i], pr.phi[i], pr.dphi[i], pr.ddphi[i]});
}

void write_params(std::ostream& os, const ProfileParams& P) {
    io::KeyValueDoc doc;
    doc.set("m", P.m);
    doc.set("H", P.H);
    doc.set("psi_plus", P.psi_plus);
    doc.set("psi_minus", P.psi_minus);
    doc.set("delta", P.delta);
    doc.set("eps", P.eps);
    doc.set("p", P.p);
    doc.set("q", P.q);
    doc.set("C", P.C);
    doc.write(os);
}

}  // namespace hydroblow::profile
