#include <doctest.h>

#include <cmath>
#include <numbers>
#include <sstream>

#include "helpers.hpp"
#include "hydroblow/chebyshev.hpp"
#include "hydroblow/errors.hpp"
#include "hydroblow/hydro2d.hpp"
#include "hydroblow/profile.hpp"
#include "hydroblow/reduced1d.hpp"

using namespace hydroblow;
using testing_util::uniform;

namespace {

const double kM = std::sqrt(3.0) / 2.0;
const double kPi = std::numbers::pi;

const profile::Profile& phi_profile() {
    static const profile::Profile pr = profile::build_profile(profile::params_from_m(kM, 1.0), 128);
    return pr;
}

hydro2d::Field2D random_field(const hydro2d::Solver2D& s) {
    auto f = s.zero_field();
    for (int k = 0; k < s.K(); ++k)
        for (int j = 0; j <= s.Nz(); ++j) f.amp(j, k) = uniform(-1.0, 1.0) / (1.0 + k * k);
    s.project(f);
    return f;
}

}  // namespace

TEST_SUITE("hydro2d") {

TEST_CASE("grid sizes") {
    const hydro2d::Solver2D s(2 * kPi, 1.0, 64, 96);
    CHECK(s.K() == 42);
    CHECK(s.M() > 3 * s.K());
    CHECK(s.M() >= 2 * s.k_max());
    CHECK(s.z().size() == 97);
    CHECK(std::fabs(s.alpha() - 1.0) < 1e-15);
    CHECK_THROWS_AS(hydro2d::Solver2D(2 * kPi, 1.0, 2, 96), DomainError);
    CHECK_THROWS_AS(hydro2d::Solver2D(2 * kPi, 1.0, 64, 4), DomainError);
    CHECK_THROWS_AS(hydro2d::Solver2D(-1.0, 1.0, 64, 96), DomainError);
}

TEST_CASE("zero field") {
    const hydro2d::Solver2D s(2 * kPi, 1.0, 16, 16);
    const auto f = s.zero_field();
    CHECK(s.rhs2d(f).cwiseAbs().maxCoeff() == 0.0);
    CHECK(s.diagnose_w(f).cwiseAbs().maxCoeff() == 0.0);
    CHECK(s.pressure_gradient(f).cwiseAbs().maxCoeff() == 0.0);
    CHECK(s.energy(f) == 0.0);
    const auto traj = hydro2d::integrate2d(s, f, 0.5);
    CHECK(traj.reason == hydro2d::Termination2D::t_end);
    CHECK(traj.final_field.amp.cwiseAbs().maxCoeff() == 0.0);
}

TEST_CASE("initial data from the profile") {
    for (int k : {1, 2}) {
        const hydro2d::Solver2D s(2 * kPi, 1.0, 32, 128);
        const auto f = s.init_from_theorem(phi_profile(), k);
        // one active mode
        for (int kk = 1; kk <= s.K(); ++kk)
            if (kk != k) CHECK(f.amp.col(kk - 1).cwiseAbs().maxCoeff() == 0.0);
        CHECK(f.u_hat(k, 10).real() == 0.0);
        CHECK(f.u_hat(s.k_max(), 10) == std::complex<double>{});

        const Eigen::MatrixXd w = s.diagnose_w(f);
        const Eigen::VectorXd x = s.x();
        double err = 0.0;
        for (int j = 0; j <= s.Nz(); ++j) {
            const double phi = profile::evaluate(phi_profile(), s.z()(j)).phi;
            for (int i = 0; i < s.M(); ++i) err = std::max(err, std::fabs(w(j, i) - std::cos(k * x(i)) * phi));
        }
        CHECK(err <= 1e-8);
        CHECK(s.compatibility_defect(f) <= 1e-12);

        // u odd and w even in x
        const Eigen::MatrixXd u = s.velocity(f);
        double odd = 0.0, even = 0.0;
        for (int i = 1; i < s.M(); ++i) {
            odd = std::max(odd, (u.col(i) + u.col(s.M() - i)).cwiseAbs().maxCoeff());
            even = std::max(even, (w.col(i) - w.col(s.M() - i)).cwiseAbs().maxCoeff());
        }
        CHECK(odd <= 1e-13);
        CHECK(even <= 1e-13);
        CHECK(u.col(0).cwiseAbs().maxCoeff() <= 1e-13);
    }
    const hydro2d::Solver2D s(2 * kPi, 1.0, 16, 32);
    CHECK_THROWS_AS(s.init_from_theorem(phi_profile(), s.K() + 1), DomainError);
}

TEST_CASE("w vanishes at both walls for projected fields") {
    const hydro2d::Solver2D s(3.0, 1.3, 24, 40);
    for (int trial = 0; trial < 5; ++trial) {
        const auto f = random_field(s);
        const Eigen::MatrixXd w = s.diagnose_w(f);
        CHECK(w.row(0).cwiseAbs().maxCoeff() == 0.0);
        CHECK(w.row(s.Nz()).cwiseAbs().maxCoeff() <= 1e-10);
        CHECK(s.compatibility_defect(f) <= 1e-12);
    }
}

TEST_CASE("pressure gradient of the initial data") {
    const hydro2d::Solver2D s(2 * kPi, 1.0, 64, 96);
    const auto f = s.init_from_theorem(phi_profile(), 1);
    const Eigen::VectorXd px = s.pressure_gradient(f);
    const Eigen::VectorXd x = s.x();
    CHECK(std::fabs(px(0)) <= 1e-14);

    // oracle: -2 avg_z(u u_x) with u = -sin x phi'(z), by Clenshaw-Curtis on a finer grid
    const ChebyshevGrid g(200, 1.0);
    Eigen::VectorXd dphi2(201);
    for (int j = 0; j <= 200; ++j) {
        const double d = profile::evaluate(phi_profile(), g.nodes()(j)).dphi;
        dphi2(j) = d * d;
    }
    const double avg = g.integral(dphi2);
    CHECK(std::fabs(avg - kM * kM / 2.0) < 1e-9);
    double err = 0.0, err_closed = 0.0;
    for (int i = 0; i < s.M(); ++i) {
        err = std::max(err, std::fabs(px(i) + 2.0 * avg * std::sin(x(i)) * std::cos(x(i))));
        err_closed = std::max(err_closed, std::fabs(px(i) + 0.375 * std::sin(2 * x(i))));
    }
    CHECK(err <= 1e-8);
    CHECK(err_closed <= 1e-8);
}

TEST_CASE("rhs2d homogeneity, symmetry and harmonic generation") {
    const hydro2d::Solver2D s(2 * kPi, 1.0, 32, 48);
    const auto f = s.init_from_theorem(phi_profile(), 1);
    double sym = -1.0;
    const Eigen::MatrixXd r = s.rhs2d(f, &sym);
    CHECK(sym >= 0.0);
    CHECK(sym <= 1e-10);
    CHECK(r.col(1).cwiseAbs().maxCoeff() > 1e-3);  // mode 2 appears at once

    auto g = f;
    g.amp *= 3.0;
    const Eigen::MatrixXd r3 = s.rhs2d(g);
    CHECK((r3 - 9.0 * r).cwiseAbs().maxCoeff() <= 1e-12 * 9.0 * r.cwiseAbs().maxCoeff());

    const auto rf = random_field(s);
    const Eigen::MatrixXd rr = s.rhs2d(rf, &sym);
    CHECK(sym <= 1e-10);
    auto rg = rf;
    rg.amp *= -0.5;
    CHECK((s.rhs2d(rg) - 0.25 * rr).cwiseAbs().maxCoeff() <= 1e-12 * rr.cwiseAbs().maxCoeff());

    auto bad = f;
    bad.amp(3, 0) = NAN;
    CHECK_THROWS_AS(s.rhs2d(bad), NonFiniteState);
}

TEST_CASE("trace of rhs2d equals the reduced right-hand side") {
    // w_t(0, z) = -sum_k k alpha int_0^z (u_t)_k must equal W_t of the reduced equation
    const int Nz = 96;
    const hydro2d::Solver2D s(2 * kPi, 1.0, 64, Nz);
    const auto f = s.init_from_theorem(phi_profile(), 1);
    const Eigen::MatrixXd r = s.rhs2d(f);
    auto rate = s.zero_field();
    rate.amp = r;
    const Eigen::VectorXd wt = s.trace_w(rate);

    const reduced1d::Operator op(Nz, 1.0);
    const Eigen::VectorXd ref = op.rhs(op.from_profile(phi_profile()).W);
    CHECK((wt - ref).cwiseAbs().maxCoeff() / ref.cwiseAbs().maxCoeff() <= 1e-6);
}

TEST_CASE("energy and filter") {
    const hydro2d::Solver2D s(2 * kPi, 1.0, 64, 96);
    const auto f = s.init_from_theorem(phi_profile(), 1);
    // (1/2) int int sin^2 x phi'^2 = (L/4) (m^2 H / 2)
    CHECK(std::fabs(s.energy(f) - 2 * kPi / 4.0 * kM * kM / 2.0) <= 1e-9);
    CHECK(s.top_mode_fraction(f) == 0.0);

    Eigen::MatrixXd a = Eigen::MatrixXd::Ones(s.Nz() + 1, s.K());
    s.apply_filter(a, 36.0, 8.0);
    CHECK(std::fabs(a(0, s.K() - 1) - std::exp(-36.0)) < 1e-20);
    CHECK(std::fabs(a(0, 0) - std::exp(-36.0 * std::pow(1.0 / s.K(), 8.0))) < 1e-15);
}

TEST_CASE("short inviscid run tracks the self-similar trace") {
    for (int k : {1, 2}) {
        const hydro2d::Solver2D s(2 * kPi, 1.0, 48, 64);
        const auto f = s.init_from_theorem(phi_profile(), k);
        hydro2d::Controls2D ctl;
        ctl.snapshot_times = {0.05, 0.1};
        const auto traj = hydro2d::integrate2d(s, f, 0.1, ctl, &phi_profile());
        CHECK(traj.reason == hydro2d::Termination2D::t_end);
        REQUIRE(traj.snapshots.size() == 3);
        for (const auto& snap : traj.snapshots) CHECK(snap.rel_error <= 1e-5);
        CHECK(traj.max_energy_drift <= 1e-8);
        CHECK(traj.max_symmetry_residual <= 1e-10);

        std::ostringstream trace, energy;
        hydro2d::write_trace_csv(trace, traj, s.z());
        hydro2d::write_energy_csv(energy, traj);
        CHECK(trace.str().rfind("t,z,w_trace,self_similar_ref,rel_err\n", 0) == 0);
        CHECK(energy.str().rfind("t,energy,rel_drift\n", 0) == 0);
    }
}

TEST_CASE("viscosity only damps") {
    const hydro2d::Solver2D s(2 * kPi, 1.0, 32, 48);
    const auto f = s.init_from_theorem(phi_profile(), 1, 1e-2);
    hydro2d::Controls2D ctl;
    const auto traj = hydro2d::integrate2d(s, f, 0.05, ctl);
    CHECK(traj.energy_series.back().second < traj.energy_series.front().second);
}

}  // TEST_SUITE
