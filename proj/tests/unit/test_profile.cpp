#include <doctest.h>

#include <boost/math/quadrature/tanh_sinh.hpp>
#include <boost/math/special_functions/beta.hpp>
#include <boost/numeric/odeint.hpp>

#include <algorithm>
#include <array>
#include <cmath>
#include <future>
#include <numbers>
#include <sstream>
#include <vector>

#include "helpers.hpp"
#include "hydroblow/errors.hpp"
#include "hydroblow/io.hpp"
#include "hydroblow/profile.hpp"

using namespace hydroblow;
using testing_util::rel_err;
using testing_util::uniform;

namespace {

const double kM = std::sqrt(3.0) / 2.0;

// Independent parametrization straight from the root formula.
struct Ref {
    double psi_plus, psi_minus, delta, p, q, C;
};

Ref reference(double m, double H) {
    Ref r;
    const double s = std::sqrt(m * m + 0.25);
    r.psi_plus = 0.5 + s;
    r.psi_minus = 0.5 - s;
    r.delta = 2.0 * s;
    r.p = r.psi_plus / r.delta;
    r.q = -r.psi_minus / r.delta;
    r.C = H / boost::math::beta(r.p, r.q);
    return r;
}

double phi_ref(const Ref& r, double psi) {
    return r.C * std::pow(std::fabs(psi - r.psi_plus), r.p) * std::pow(std::fabs(psi - r.psi_minus), r.q);
}

// Replaces the samples of `pr` by g, g', g'' of an analytic function.
template <class G>
profile::Profile with_samples(profile::Profile pr, G&& g) {
    for (std::size_t i = 0; i < pr.size(); ++i) {
        const auto v = g(pr.z[i]);
        pr.phi[i] = v[0];
        pr.dphi[i] = v[1];
        pr.ddphi[i] = v[2];
    }
    return pr;
}

}  // namespace

TEST_SUITE("profile") {

TEST_CASE("params for m = sqrt(3)/2") {
    const auto P = profile::params_from_m(kM, 1.0);
    CHECK(std::fabs(P.psi_plus - 1.5) < 1e-15);
    CHECK(std::fabs(P.psi_minus + 0.5) < 1e-15);
    CHECK(std::fabs(P.p - 0.75) < 1e-15);
    CHECK(std::fabs(P.q - 0.25) < 1e-15);
    CHECK(std::fabs(P.delta - 2.0) < 1e-15);
    // H = C B(p, q) with B(3/4, 1/4) = pi sqrt 2
    CHECK(rel_err(P.C, std::sqrt(2.0) / (2.0 * std::numbers::pi)) < 1e-13);
    CHECK(rel_err(P.C, reference(kM, 1.0).C) < 1e-13);
}

TEST_CASE("closed form of the constant") {
    for (double m : {0.5, kM, 2.0, 10.0}) {
        const auto P = profile::params_from_m(m, 1.0);
        const double s = std::sqrt(m * m + 0.25);
        // delta C = (2 H s / pi) cos(pi / (4 s))
        const double closed = 2.0 * s / std::numbers::pi * std::cos(std::numbers::pi / (4.0 * s));
        CHECK(rel_err(P.delta * P.C, closed) <= 1e-10);
    }
}

TEST_CASE("small m limit and domain errors") {
    const auto P = profile::params_from_m(1e-6, 1.0);
    CHECK(std::fabs(P.psi_plus - 1.0) < 1e-6);
    CHECK(std::fabs(P.psi_minus) < 1e-6);
    CHECK_THROWS_AS(profile::params_from_m(0.0, 1.0), DomainError);
    CHECK_THROWS_AS(profile::params_from_m(-1.0, 1.0), DomainError);
    CHECK_THROWS_AS(profile::params_from_m(1.0, 0.0), DomainError);
}

TEST_CASE("family identities for random m") {
    for (int i = 0; i < 200; ++i) {
        const double m = uniform(0.1, 10.0), H = uniform(0.2, 5.0);
        const auto P = profile::params_from_m(m, H);
        const Ref r = reference(m, H);
        CHECK(std::fabs(P.psi_plus + P.psi_minus - 1.0) <= 1e-11);
        CHECK(std::fabs(P.psi_plus * P.psi_minus + m * m) <= 1e-11 * std::max(1.0, m * m));
        CHECK(std::fabs(P.delta * P.delta * P.p * P.q - m * m) <= 1e-11 * std::max(1.0, m * m));
        CHECK(std::fabs(P.p + P.q - 1.0) <= 1e-15);
        CHECK(rel_err(P.C, r.C) <= 1e-11);
        CHECK(rel_err(P.eps, 1.0 / (4.0 * std::sqrt(m * m + 0.25))) <= 1e-14);
    }
}

TEST_CASE("validate rejects inconsistent parameters") {
    auto P = profile::params_from_m(kM, 1.0);
    CHECK_NOTHROW(profile::validate(P));
    P.C *= 1.001;
    CHECK_THROWS_AS(profile::validate(P), CertificationError);
}

TEST_CASE("psi_of_z") {
    const auto P = profile::params_from_m(kM, 1.0);
    CHECK(std::fabs(profile::psi_of_z(P, 0.0) - P.psi_plus) < 1e-14);
    CHECK(std::fabs(profile::psi_of_z(P, 1.0) - P.psi_minus) < 1e-14);
    CHECK(profile::psi_of_z(P, 0.25) > profile::psi_of_z(P, 0.5));
    CHECK(profile::psi_of_z(P, 0.5) > profile::psi_of_z(P, 0.75));
    CHECK_THROWS_AS(profile::psi_of_z(P, 1.5), DomainError);

    // z0 with psi(z0) = 0: z0 / H = I_p(p, q), integral by tanh-sinh
    const Ref r = reference(kM, 1.0);
    boost::math::quadrature::tanh_sinh<double> ts;
    const double z0 = ts.integrate([&](double t) { return std::pow(t, r.p - 1) * std::pow(1 - t, r.q - 1); },
                                   0.0, r.p) /
                      boost::math::beta(r.p, r.q);
    CHECK(std::fabs(profile::psi_of_z(P, z0)) < 1e-9);

    // strictly decreasing on a fine grid
    double prev = profile::psi_of_z(P, 0.0);
    bool decreasing = true;
    for (int i = 1; i <= 2000; ++i) {
        const double v = profile::psi_of_z(P, i / 2000.0);
        if (!(v < prev)) decreasing = false;
        prev = v;
    }
    CHECK(decreasing);
}

TEST_CASE("psi(z) round trip") {
    // Measured in psi: dz/dpsi = 1/phi'' diverges at z = H, so z itself is
    // ill-conditioned there while psi is not.
    for (double m : {0.5, kM, 2.0, 10.0}) {
        const auto P = profile::params_from_m(m, 1.0);
        const Ref r = reference(m, 1.0);
        double worst = 0.0, worst_z = 0.0;
        for (int i = 0; i < 100; ++i) {
            const double z = uniform(0.0, 1.0);
            const double psi = profile::psi_of_z(P, z);
            const double tau = std::clamp((r.psi_plus - psi) / r.delta, 0.0, 1.0);
            const double z_back = boost::math::ibeta(r.p, r.q, tau);
            worst = std::max(worst, std::fabs(profile::psi_of_z(P, z_back) - psi));
            if (z <= 0.5) worst_z = std::max(worst_z, std::fabs(z_back - z));
        }
        CHECK(worst <= 1e-9);
        CHECK(worst_z <= 1e-9);
    }
}

TEST_CASE("phi_of_psi") {
    auto P = profile::params_from_m(kM, 1.0);
    const Ref r = reference(kM, 1.0);
    CHECK(profile::phi_of_psi(P, P.psi_plus) == 0.0);
    CHECK(profile::phi_of_psi(P, P.psi_minus) == 0.0);
    CHECK_THROWS_AS(profile::phi_of_psi(P, 2.0), DomainError);

    const double at0 = r.C * std::pow(1.5, 0.75) * std::pow(0.5, 0.25);
    CHECK(rel_err(profile::phi_of_psi(P, 0.0), at0) < 1e-13);
    // maximum over a fine psi grid sits at psi = 0
    double best = 0.0, best_psi = 0.0;
    for (int i = 0; i <= 200000; ++i) {
        const double psi = r.psi_minus + (r.psi_plus - r.psi_minus) * i / 200000.0;
        if (phi_ref(r, psi) > best) best = phi_ref(r, psi), best_psi = psi;
    }
    CHECK(std::fabs(best_psi) < 1e-4);
    CHECK(rel_err(profile::phi_of_psi(P, 0.0), best) < 1e-9);

    const double v = profile::phi_of_psi(P, 0.3);
    P.C *= 2.0;
    CHECK(profile::phi_of_psi(P, 0.3) == 2.0 * v);
}

TEST_CASE("evaluate agrees with the second-order ODE") {
    // Shoot from the maximum (phi' = 0) with phi'' = (phi'^2 - phi' - m^2) / phi.
    for (double m : {0.5, kM, 2.0}) {
        const auto P = profile::params_from_m(m, 1.0);
        const Ref r = reference(m, 1.0);
        const double z_star = boost::math::ibeta(r.p, r.q, r.p);
        std::array<double, 2> y{phi_ref(r, 0.0), 0.0};
        using namespace boost::numeric::odeint;
        auto rhs = [m](const std::array<double, 2>& s, std::array<double, 2>& d, double) {
            d[0] = s[1];
            d[1] = (s[1] * s[1] - s[1] - m * m) / s[0];
        };
        auto stepper = make_controlled(1e-13, 1e-13, runge_kutta_dopri5<std::array<double, 2>>());
        const double z_end = z_star + 0.3 * (1.0 - z_star);
        integrate_adaptive(stepper, rhs, y, z_star, z_end, 1e-4);
        const auto v = profile::evaluate(P, z_end);
        CHECK(std::fabs(v.phi - y[0]) < 1e-9);
        CHECK(std::fabs(v.dphi - y[1]) < 1e-9);
        CHECK(std::fabs(v.ddphi - (v.dphi * v.dphi - v.dphi - m * m) / v.phi) < 1e-9);

        std::array<double, 2> yl{phi_ref(r, 0.0), 0.0};
        const double z_left = 0.6 * z_star;
        integrate_adaptive(stepper, rhs, yl, z_star, z_left, -1e-4);
        const auto vl = profile::evaluate(P, z_left);
        CHECK(std::fabs(vl.phi - yl[0]) < 1e-9);
        CHECK(std::fabs(vl.dphi - yl[1]) < 1e-9);
    }
}

TEST_CASE("build_profile m = sqrt(3)/2, N = 128") {
    const auto P = profile::params_from_m(kM, 1.0);
    const auto pr = profile::build_profile(P, 128);
    const std::size_t N = 128;
    REQUIRE(pr.size() == N + 1);
    CHECK(pr.phi[0] == 0.0);
    CHECK(pr.phi[N] == 0.0);
    CHECK(std::fabs(pr.ddphi[0]) <= 1e-8);
    CHECK(std::fabs(pr.ddphi[N]) <= 1e-8);
    CHECK(std::fabs(pr.dphi[0] - 1.5) <= 1e-8);
    CHECK(std::fabs(pr.dphi[N] + 0.5) <= 1e-8);
    bool positive = true;
    for (std::size_t i = 1; i < N; ++i) positive = positive && pr.phi[i] > 0.0;
    CHECK(positive);

    double local = 0.0;
    for (std::size_t i = 1; i < N; ++i)
        local = std::max(local, std::fabs(pr.dphi[i] - pr.dphi[i] * pr.dphi[i] + pr.phi[i] * pr.ddphi[i] + kM * kM));
    CHECK(local <= 1e-8);
    CHECK(rel_err(pr.nonlocal, kM * kM) <= 1e-8);
    CHECK(pr.residual <= pr.tolerance);
    CHECK(profile::residual_fy(pr) <= pr.residual);
    CHECK_FALSE(profile::is_trivial(pr));
    CHECK(profile::sign_changes(pr) == 0);

    // samples at 2N coincide on the shared nodes
    const auto fine = profile::build_profile(P, 256);
    double diff = 0.0;
    for (std::size_t i = 0; i <= N; ++i) {
        CHECK(std::fabs(fine.z[2 * i] - pr.z[i]) < 1e-15);
        diff = std::max(diff, std::fabs(fine.phi[2 * i] - pr.phi[i]));
    }
    CHECK(diff < 1e-13);

    CHECK_THROWS_AS(profile::build_profile(P, 8), DomainError);
}

TEST_CASE("maximum of phi is where psi vanishes") {
    const auto P = profile::params_from_m(kM, 1.0);
    const auto pr = profile::build_profile(P, 256);
    const auto it = std::max_element(pr.phi.begin(), pr.phi.end());
    const std::size_t i = static_cast<std::size_t>(it - pr.phi.begin());
    CHECK(pr.dphi[i - 1] > 0.0);
    CHECK(pr.dphi[i + 1] < 0.0);
    CHECK(rel_err(profile::phi_max(pr), *it) == 0.0);
}

TEST_CASE("other members of the family certify") {
    for (double m : {0.5, 2.0, 10.0}) {
        const auto pr = profile::build_profile(profile::params_from_m(m, 1.0), 128);
        CHECK(pr.residual <= 1e-8);
        CHECK(rel_err(pr.nonlocal, m * m) <= 1e-8);
    }
    const auto pr = profile::build_profile(profile::params_from_m(kM, 2.5), 128);
    CHECK(pr.z.back() == 2.5);
    const auto uni = profile::build_profile(profile::params_from_m(kM, 1.0), 128, profile::GridKind::uniform);
    CHECK(rel_err(uni.nonlocal, kM * kM) <= 1e-3);
}

TEST_CASE("residual decreases under refinement") {
    profile::Tolerances loose;
    loose.residual = 1.0;
    loose.nonlocal_chebyshev = 1.0;
    const auto P = profile::params_from_m(kM, 1.0);
    double prev = 1e300;
    for (int N : {16, 32, 64, 128}) {
        const double r = profile::residual_fy(profile::build_profile(P, N, profile::GridKind::chebyshev, loose));
        CHECK(r <= prev);
        prev = r;
    }
}

TEST_CASE("negative counterpart -phi(H - z)") {
    const auto pr = profile::build_profile(profile::params_from_m(kM, 1.0), 128);
    const std::size_t N = pr.size() - 1;
    auto neg = pr;
    for (std::size_t i = 0; i <= N; ++i) {
        neg.phi[i] = -pr.phi[N - i];
        neg.dphi[i] = pr.dphi[N - i];
        neg.ddphi[i] = -pr.ddphi[N - i];
    }
    CHECK(profile::residual_fy(neg) <= 1e-8);
}

TEST_CASE("residual_fy of degenerate and perturbed samples") {
    const auto pr = profile::build_profile(profile::params_from_m(kM, 1.0), 128);
    const auto zero = with_samples(pr, [](double) { return std::array<double, 3>{0.0, 0.0, 0.0}; });
    CHECK(profile::residual_fy(zero) == 0.0);
    CHECK(profile::is_trivial(zero));

    const double pi = std::numbers::pi;
    const auto P = pr.params;
    const auto bumped = with_samples(pr, [&](double z) {
        const auto v = profile::evaluate(P, z);
        return std::array<double, 3>{v.phi + 0.01 * std::sin(pi * z), v.dphi + 0.01 * pi * std::cos(pi * z),
                                     v.ddphi - 0.01 * pi * pi * std::sin(pi * z)};
    });
    CHECK(profile::residual_fy(bumped) > 1e-3);
}

TEST_CASE("glued sign-changing profiles") {
    const auto pr = profile::glue_sign_changing(kM, 1.0, 2, 64);
    const std::size_t N = pr.size() - 1;
    CHECK(pr.segments == 2);
    CHECK(pr.length == 1.0);
    bool odd = true;
    for (std::size_t i = 0; i <= N; ++i) {
        odd = odd && pr.phi[i] == -pr.phi[N - i] && std::fabs(pr.z[i] + pr.z[N - i] - 1.0) < 1e-15;
    }
    CHECK(odd);
    CHECK(profile::sign_changes(pr) == 1);
    CHECK(profile::residual_fy(pr) <= 1e-7);
    CHECK(rel_err(pr.nonlocal, kM * kM) <= 1e-8);

    // C2 joint: the node at H/2 appears once with phi = 0, phi'' = 0
    const auto it = std::find_if(pr.z.begin(), pr.z.end(), [](double z) { return std::fabs(z - 0.5) < 1e-15; });
    REQUIRE(it != pr.z.end());
    const std::size_t j = static_cast<std::size_t>(it - pr.z.begin());
    CHECK(pr.phi[j] == 0.0);
    CHECK(std::fabs(pr.ddphi[j]) <= 1e-8);
    const auto half = profile::params_from_m(kM, 0.5);
    CHECK(std::fabs(pr.dphi[j] - half.psi_minus) <= 1e-8);
    // one-sided difference quotients agree with the joint slope
    const double h = 1e-6;
    const double left = (profile::evaluate(pr, 0.5).phi - profile::evaluate(pr, 0.5 - h).phi) / h;
    const double right = (profile::evaluate(pr, 0.5 + h).phi - profile::evaluate(pr, 0.5).phi) / h;
    CHECK(std::fabs(left - right) < 1e-5);

    const auto three = profile::glue_sign_changing(kM, 1.0, 3, 64);
    CHECK(profile::sign_changes(three) == 2);
    CHECK(profile::residual_fy(three) <= 1e-7);
    CHECK_THROWS_AS(profile::glue_sign_changing(kM, 1.0, 1, 64), DomainError);
}

TEST_CASE("serialization") {
    const auto pr = profile::build_profile(profile::params_from_m(kM, 1.0), 64);
    std::ostringstream csv;
    profile::write_csv(csv, pr);
    const std::string s = csv.str();
    CHECK(s.rfind("z,phi,dphi,ddphi\n", 0) == 0);
    CHECK(std::count(s.begin(), s.end(), '\n') == 66);

    std::ostringstream params;
    profile::write_params(params, pr.params);
    std::istringstream is(params.str());
    const auto doc = io::KeyValueDoc::parse(is);
    CHECK(std::fabs(doc.get_double("psi_plus") - 1.5) < 1e-15);
    CHECK(std::fabs(doc.get_double("psi_minus") + 0.5) < 1e-15);

    CHECK(profile::grid_from_string("uniform") == profile::GridKind::uniform);
    CHECK_THROWS_AS(profile::grid_from_string("spline"), DomainError);
}

TEST_CASE("concurrent construction matches sequential") {
    const std::vector<double> ms{0.3, 0.5, kM, 1.7, 4.0, 9.0};
    std::vector<std::future<profile::Profile>> fut;
    for (double m : ms)
        fut.push_back(std::async(std::launch::async,
                                 [m] { return profile::build_profile(profile::params_from_m(m, 1.0), 128); }));
    for (std::size_t i = 0; i < ms.size(); ++i) {
        const auto a = fut[i].get();
        const auto b = profile::build_profile(profile::params_from_m(ms[i], 1.0), 128);
        CHECK(a.phi == b.phi);
        CHECK(a.residual == b.residual);
    }
}

}  // TEST_SUITE
