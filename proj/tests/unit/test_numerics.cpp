// Chebyshev collocation, the Dormand-Prince integrator and the io helpers.
#include <doctest.h>

#include <boost/numeric/odeint.hpp>

#include <cmath>
#include <cstdlib>
#include <limits>
#include <numbers>
#include <sstream>
#include <vector>

#include "helpers.hpp"
#include "hydroblow/chebyshev.hpp"
#include "hydroblow/errors.hpp"
#include "hydroblow/io.hpp"
#include "hydroblow/ode.hpp"

using namespace hydroblow;

TEST_SUITE("chebyshev") {

TEST_CASE("nodes") {
    const ChebyshevGrid g(16, 2.0);
    const auto& z = g.nodes();
    REQUIRE(z.size() == 17);
    CHECK(z(0) == 0.0);
    CHECK(z(16) == 2.0);
    for (int j = 0; j <= 16; ++j) {
        const double s = std::sin(std::numbers::pi * j / 32.0);
        CHECK(std::fabs(z(j) - 2.0 * s * s) < 1e-15);
    }
    CHECK((chebyshev_nodes(16, 2.0) - z).cwiseAbs().maxCoeff() == 0.0);
    CHECK_THROWS_AS(ChebyshevGrid(1, 1.0), DomainError);
    CHECK_THROWS_AS(ChebyshevGrid(8, 0.0), DomainError);
}

TEST_CASE("differentiation and integration are exact for polynomials") {
    const int n = 12;
    const double H = 1.5;
    const ChebyshevGrid g(n, H);
    const Eigen::VectorXd z = g.nodes();
    Eigen::VectorXd f(n + 1), df(n + 1), F(n + 1);
    for (int j = 0; j <= n; ++j) {
        const double x = z(j);
        f(j) = 3 * std::pow(x, 7) - 2 * x * x + 1;
        df(j) = 21 * std::pow(x, 6) - 4 * x;
        F(j) = 3 * std::pow(x, 8) / 8 - 2 * x * x * x / 3 + x;
    }
    CHECK((g.derivative() * f - df).cwiseAbs().maxCoeff() < 1e-10);
    CHECK((g.cumulative() * f - F).cwiseAbs().maxCoeff() < 1e-12);
    CHECK(std::fabs(g.integral(f) - F(n)) < 1e-12);
    CHECK(std::fabs(g.integral(f) - (g.cumulative() * f)(n)) < 1e-13);
    CHECK(std::fabs(g.weights().sum() - H) < 1e-14);
}

TEST_CASE("spectral convergence on a smooth function") {
    const ChebyshevGrid g(40, 1.0);
    const Eigen::VectorXd z = g.nodes();
    const Eigen::VectorXd f = (3.0 * z).array().exp() * (5.0 * z).array().sin();
    const Eigen::VectorXd df =
        (3.0 * z).array().exp() * (3.0 * (5.0 * z).array().sin() + 5.0 * (5.0 * z).array().cos());
    CHECK((g.derivative() * f - df).cwiseAbs().maxCoeff() < 1e-9);
}

}  // TEST_SUITE

TEST_SUITE("ode") {

TEST_CASE("oscillator matches odeint's Dormand-Prince") {
    ode::StepControls ctl;
    ctl.rel_tol = 1e-11;
    ctl.abs_tol = 1e-13;
    Eigen::VectorXd y(2);
    y << 1.0, 0.0;
    auto f = [](double, const Eigen::VectorXd& s, Eigen::VectorXd& d) {
        d(0) = s(1);
        d(1) = -4.0 * s(0) - 0.1 * s(1) * s(1) * s(1);
    };
    const auto res = ode::integrate(f, 0.0, y, 5.0, ctl,
                                    [](const ode::StepInfo&, Eigen::VectorXd&) { return ode::Action::proceed; });
    CHECK(res.reason == ode::StopReason::reached_end);
    CHECK(res.t == 5.0);

    using namespace boost::numeric::odeint;
    std::vector<double> x{1.0, 0.0};
    integrate_adaptive(make_controlled(1e-13, 1e-13, runge_kutta_dopri5<std::vector<double>>()),
                       [](const std::vector<double>& s, std::vector<double>& d, double) {
                           d[0] = s[1];
                           d[1] = -4.0 * s[0] - 0.1 * s[1] * s[1] * s[1];
                       },
                       x, 0.0, 5.0, 1e-3);
    CHECK(std::fabs(y(0) - x[0]) < 1e-8);
    CHECK(std::fabs(y(1) - x[1]) < 1e-8);
}

TEST_CASE("stop times are hit exactly and the observer can stop") {
    Eigen::VectorXd y(1);
    y << 1.0;
    auto f = [](double, const Eigen::VectorXd& s, Eigen::VectorXd& d) { d = -s; };
    const std::vector<double> stops{0.25, 0.5, 0.75};
    std::vector<double> hit;
    ode::StepControls ctl;
    const auto res = ode::integrate(f, 0.0, y, 1.0, ctl,
                                    [&](const ode::StepInfo& s, Eigen::VectorXd&) {
                                        if (s.at_stop_time) hit.push_back(s.t);
                                        return s.t >= 0.5 ? ode::Action::stop : ode::Action::proceed;
                                    },
                                    stops);
    CHECK(res.reason == ode::StopReason::observer);
    REQUIRE(hit.size() == 2);
    CHECK(hit[0] == 0.25);
    CHECK(hit[1] == 0.5);
    CHECK(std::fabs(y(0) - std::exp(-0.5)) < 1e-9);
}

TEST_CASE("finite-time singularity ends in step underflow") {
    Eigen::VectorXd y(1);
    y << 1.0;
    auto f = [](double, const Eigen::VectorXd& s, Eigen::VectorXd& d) { d = s.cwiseProduct(s); };
    const auto res = ode::integrate(f, 0.0, y, 2.0, ode::StepControls{},
                                    [](const ode::StepInfo&, Eigen::VectorXd&) { return ode::Action::proceed; });
    CHECK(res.reason == ode::StopReason::step_underflow);
    CHECK(res.t < 1.0);
    CHECK(res.t > 0.999);
}

}  // TEST_SUITE

TEST_SUITE("io") {

TEST_CASE("format_double round trips") {
    for (int i = 0; i < 1000; ++i) {
        const double v = testing_util::uniform(-1.0, 1.0) * std::pow(10.0, testing_util::uniform(-300, 300));
        CHECK(std::strtod(io::format_double(v).c_str(), nullptr) == v);
    }
    CHECK(io::format_double(0.1) == "0.10000000000000001");
    CHECK(io::format_double(std::numeric_limits<double>::quiet_NaN()) == "nan");
    CHECK(io::format_double(std::numeric_limits<double>::infinity()) == "inf");
    CHECK(io::format_double(-std::numeric_limits<double>::infinity()) == "-inf");
}

TEST_CASE("csv rows") {
    std::ostringstream os;
    io::write_header(os, {"a", "b"});
    io::write_row(os, {1.0, 0.5});
    CHECK(os.str() == "a,b\n1,0.5\n");
}

TEST_CASE("key-value documents") {
    io::KeyValueDoc d;
    d.set("name", std::string("x"));
    d.set("pi", std::numbers::pi);
    d.set("n", 42);
    d.set("flag", true);
    std::ostringstream os;
    d.write(os);
    std::istringstream is("# comment\n\n" + os.str());
    const auto back = io::KeyValueDoc::parse(is);
    CHECK(back.entries() == d.entries());
    CHECK(back.get("name") == "x");
    CHECK(back.get_double("pi") == std::numbers::pi);
    CHECK(back.contains("flag"));
    CHECK_FALSE(back.contains("missing"));
}

}  // TEST_SUITE
