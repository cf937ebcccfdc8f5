// ode.hpp
// Embedded Dormand-Prince 5(4) integrator with error-controlled step size.
// Shared by the 1D and 2D solvers so that both run with identical stepping.
#pragma once

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>
#include <cstddef>
#include <limits>
#include <span>

namespace hydroblow::ode {

struct StepControls {
    double rel_tol = 1e-9;
    double abs_tol = 1e-11;
    double initial_step = 0.0;   ///< 0 selects the step automatically
    double max_step = std::numeric_limits<double>::infinity();
    double min_step_rel = 1e-14; ///< underflow when h < min_step_rel * max(1, |t|)
    std::size_t max_steps = 2'000'000;
};

enum class StopReason {
    reached_end,
    observer,       ///< the observer asked to stop
    step_underflow,
    max_steps,
};

/// What the observer wants after an accepted step.
enum class Action {
    proceed,
    stop,
    state_modified,  ///< the observer changed y in place (filtering, projection)
};

struct StepInfo {
    double t;
    double h;
    bool at_stop_time;  ///< t landed exactly on one of the requested stop times
};

struct Result {
    double t = 0.0;
    StopReason reason = StopReason::reached_end;
    std::size_t accepted = 0;
    std::size_t rejected = 0;
    std::size_t rhs_evals = 0;
};

namespace detail {

struct Tableau {
    static constexpr double c2 = 1.0 / 5, c3 = 3.0 / 10, c4 = 4.0 / 5, c5 = 8.0 / 9;
    static constexpr double a21 = 1.0 / 5;
    static constexpr double a31 = 3.0 / 40, a32 = 9.0 / 40;
    static constexpr double a41 = 44.0 / 45, a42 = -56.0 / 15, a43 = 32.0 / 9;
    static constexpr double a51 = 19372.0 / 6561, a52 = -25360.0 / 2187, a53 = 64448.0 / 6561,
                            a54 = -212.0 / 729;
    static constexpr double a61 = 9017.0 / 3168, a62 = -355.0 / 33, a63 = 46732.0 / 5247,
                            a64 = 49.0 / 176, a65 = -5103.0 / 18656;
    static constexpr double b1 = 35.0 / 384, b3 = 500.0 / 1113, b4 = 125.0 / 192,
                            b5 = -2187.0 / 6784, b6 = 11.0 / 84;
    // b - b_hat
    static constexpr double e1 = 71.0 / 57600, e3 = -71.0 / 16695, e4 = 71.0 / 1920,
                            e5 = -17253.0 / 339200, e6 = 22.0 / 525, e7 = -1.0 / 40;
};

inline double error_norm(const Eigen::VectorXd& err, const Eigen::VectorXd& y0,
                         const Eigen::VectorXd& y1, const StepControls& c) {
    double acc = 0.0;
    for (Eigen::Index i = 0; i < err.size(); ++i) {
        const double sc = c.abs_tol + c.rel_tol * std::max(std::fabs(y0(i)), std::fabs(y1(i)));
        const double r = err(i) / sc;
        acc += r * r;
    }
    const double n = std::sqrt(acc / static_cast<double>(std::max<Eigen::Index>(1, err.size())));
    return std::isfinite(n) ? n : std::numeric_limits<double>::infinity();
}

}  // namespace detail

/// Integrate y' = f(t, y) from t0 towards t_end. `stops` are sorted times at
/// which a step is forced to end exactly (snapshots). The observer is called
/// as obs(const StepInfo&, Eigen::VectorXd& y) after every accepted step.
/// f is called as f(t, y, dydt).
template <class Rhs, class Observer>
Result integrate(Rhs&& f, double t0, Eigen::VectorXd& y, double t_end, const StepControls& ctl,
                 Observer&& obs, std::span<const double> stops = {}) {
    using T = detail::Tableau;
    Result res;
    double t = t0;
    const Eigen::Index n = y.size();
    Eigen::VectorXd k1(n), k2(n), k3(n), k4(n), k5(n), k6(n), k7(n), ytmp(n), ynew(n), err(n);

    f(t, y, k1);
    ++res.rhs_evals;

    double h = ctl.initial_step;
    if (!(h > 0.0)) {
        // Hairer-Norsett-Wanner starting step
        const double d0 = detail::error_norm(y, y, y, ctl);
        const double d1 = detail::error_norm(k1, y, y, ctl);
        double h0 = (d0 < 1e-5 || d1 < 1e-5) ? 1e-6 : 0.01 * d0 / d1;
        h0 = std::min(h0, std::fabs(t_end - t));
        ytmp = y + h0 * k1;
        f(t + h0, ytmp, k2);
        ++res.rhs_evals;
        const double d2 = detail::error_norm(k2 - k1, y, y, ctl) / h0;
        const double h1 = std::max(d1, d2) <= 1e-15 ? std::max(1e-6, h0 * 1e-3)
                                                    : std::pow(0.01 / std::max(d1, d2), 0.2);
        h = std::min(100.0 * h0, h1);
    }
    h = std::min(h, ctl.max_step);

    std::size_t next_stop = 0;
    while (next_stop < stops.size() && stops[next_stop] <= t) ++next_stop;

    constexpr double safety = 0.9, fac_min = 0.2, fac_max = 5.0;
    bool last_rejected = false;

    while (t < t_end) {
        if (res.accepted >= ctl.max_steps) {
            res.reason = StopReason::max_steps;
            res.t = t;
            return res;
        }
        double target = t_end;
        bool hits_stop = false;
        if (next_stop < stops.size() && stops[next_stop] < t_end) target = stops[next_stop];
        if (t + h >= target) {
            h = target - t;
            hits_stop = target != t_end || (next_stop < stops.size() && stops[next_stop] == t_end);
        }
        if (h < ctl.min_step_rel * std::max(1.0, std::fabs(t))) {
            res.reason = StopReason::step_underflow;
            res.t = t;
            return res;
        }

        ytmp = y + h * (T::a21 * k1);
        f(t + T::c2 * h, ytmp, k2);
        ytmp = y + h * (T::a31 * k1 + T::a32 * k2);
        f(t + T::c3 * h, ytmp, k3);
        ytmp = y + h * (T::a41 * k1 + T::a42 * k2 + T::a43 * k3);
        f(t + T::c4 * h, ytmp, k4);
        ytmp = y + h * (T::a51 * k1 + T::a52 * k2 + T::a53 * k3 + T::a54 * k4);
        f(t + T::c5 * h, ytmp, k5);
        ytmp = y + h * (T::a61 * k1 + T::a62 * k2 + T::a63 * k3 + T::a64 * k4 + T::a65 * k5);
        f(t + h, ytmp, k6);
        ynew = y + h * (T::b1 * k1 + T::b3 * k3 + T::b4 * k4 + T::b5 * k5 + T::b6 * k6);
        f(t + h, ynew, k7);
        res.rhs_evals += 6;
        err = h * (T::e1 * k1 + T::e3 * k3 + T::e4 * k4 + T::e5 * k5 + T::e6 * k6 + T::e7 * k7);
        const double en = detail::error_norm(err, y, ynew, ctl);

        if (en <= 1.0) {
            t = hits_stop ? target : t + h;
            y.swap(ynew);
            k1.swap(k7);
            ++res.accepted;
            if (hits_stop) ++next_stop;
            const Action act = obs(StepInfo{t, h, hits_stop}, y);
            if (act == Action::stop) {
                res.reason = StopReason::observer;
                res.t = t;
                return res;
            }
            if (act == Action::state_modified) {
                f(t, y, k1);
                ++res.rhs_evals;
            }
            double fac = en == 0.0 ? fac_max : safety * std::pow(en, -0.2);
            fac = std::clamp(fac, fac_min, last_rejected ? 1.0 : fac_max);
            h = std::min(h * fac, ctl.max_step);
            last_rejected = false;
        } else {
            ++res.rejected;
            const double fac = std::isfinite(en) ? std::max(fac_min, safety * std::pow(en, -0.2))
                                                 : fac_min;
            h *= fac;
            last_rejected = true;
        }
    }
    res.t = t;
    res.reason = StopReason::reached_end;
    return res;
}

}  // namespace hydroblow::ode
