// reduced1d.cpp

#include "hydroblow/reduced1d.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <ostream>

#include "fftw_plan.hpp"
#include "hydroblow/chebyshev.hpp"
#include "hydroblow/errors.hpp"
#include "hydroblow/io.hpp"

namespace hydroblow::reduced1d {
namespace {

constexpr double kPi = std::numbers::pi;

bool all_finite(const Eigen::VectorXd& v) { return v.allFinite(); }

double relative_compatibility(const Operator& op, const Eigen::VectorXd& W) {
    Eigen::VectorXd out;
    op.rhs_raw(W, out);
    const double scale = out.cwiseAbs().maxCoeff();
    return scale > 0.0 ? std::fabs(out(op.N())) / scale : 0.0;
}

}  // namespace

const char* to_string(Discretization d) {
    switch (d) {
        case Discretization::chebyshev: return "chebyshev";
        case Discretization::sine: return "sine";
        case Discretization::fd4: return "fd4";
    }
    return "?";
}

Discretization discretization_from_string(const std::string& s) {
    if (s == "chebyshev") return Discretization::chebyshev;
    if (s == "sine") return Discretization::sine;
    if (s == "fd4") return Discretization::fd4;
    throw DomainError("unknown discretization: " + s);
}

const char* to_string(Termination r) {
    switch (r) {
        case Termination::t_end: return "t_end";
        case Termination::blowup: return "blowup";
        case Termination::step_underflow: return "step_underflow";
        case Termination::max_steps: return "max_steps";
    }
    return "?";
}

struct Operator::Impl {
    std::unique_ptr<ChebyshevGrid> cheb;
    std::unique_ptr<detail::R2RPlan> dst;  // RODFT00 on the N - 1 interior values
    std::unique_ptr<detail::R2RPlan> dct;  // REDFT00 on all N + 1 values
};

Operator::Operator(int N, double H, Discretization d)
    : n_(N), h_(H), disc_(d), impl_(std::make_unique<Impl>()) {
    if (N < 8) throw DomainError("reduced1d: N must be >= 8, got " + std::to_string(N));
    if (!(H > 0.0) || !std::isfinite(H)) throw DomainError("reduced1d: H must be positive");
    if (d == Discretization::chebyshev) {
        impl_->cheb = std::make_unique<ChebyshevGrid>(N, H);
        z_ = impl_->cheb->nodes();
    } else {
        z_.resize(N + 1);
        for (int i = 0; i <= N; ++i) z_(i) = H * static_cast<double>(i) / N;
        z_(N) = H;
        if (d == Discretization::sine) {
            impl_->dst = std::make_unique<detail::R2RPlan>(N - 1, FFTW_RODFT00);
            impl_->dct = std::make_unique<detail::R2RPlan>(N + 1, FFTW_REDFT00);
        }
    }
}

Operator::~Operator() = default;

Eigen::VectorXd Operator::derivative(const Eigen::VectorXd& W) const {
    const int N = n_;
    Eigen::VectorXd Wz(N + 1);
    switch (disc_) {
        case Discretization::chebyshev:
            Wz.noalias() = impl_->cheb->derivative() * W;
            break;
        case Discretization::sine: {
            // sine coefficients b_k = DST(W)_k / N, then sum_k b_k (k pi / H) cos(k pi z / H)
            std::vector<double> in(W.data() + 1, W.data() + N), b(N - 1);
            impl_->dst->execute(in.data(), b.data());
            std::vector<double> x(N + 1, 0.0);
            for (int k = 1; k < N; ++k) x[k] = 0.5 * b[k - 1] / N * (k * kPi / h_);
            impl_->dct->execute(x.data(), Wz.data());
            break;
        }
        case Discretization::fd4: {
            const double dz = h_ / N;
            auto at = [&](int j) {
                if (j < 0) return -W(-j);
                if (j > N) return -W(2 * N - j);
                return W(j);
            };
            for (int j = 0; j <= N; ++j)
                Wz(j) = (at(j - 2) - 8.0 * at(j - 1) + 8.0 * at(j + 1) - at(j + 2)) / (12.0 * dz);
            break;
        }
    }
    return Wz;
}

double Operator::nonlocal(const Eigen::VectorXd& W) const {
    const Eigen::VectorXd f = derivative(W).array().square();
    double total = 0.0;
    if (disc_ == Discretization::chebyshev) {
        total = impl_->cheb->integral(f);
    } else {
        const double dz = h_ / n_;
        total = dz * (f.sum() - 0.5 * (f(0) + f(n_)));
    }
    return 2.0 * total / h_;
}

void Operator::rhs_raw(const Eigen::VectorXd& W, Eigen::VectorXd& out) const {
    const int N = n_;
    const Eigen::VectorXd Wz = derivative(W);
    const Eigen::VectorXd f = Wz.array().square();
    out.resize(N + 1);
    switch (disc_) {
        case Discretization::chebyshev: {
            const double total = impl_->cheb->integral(f);
            out.noalias() = 2.0 * (impl_->cheb->cumulative() * f);
            out.array() -= W.array() * Wz.array() + (2.0 * total / h_) * z_.array();
            break;
        }
        case Discretization::sine: {
            // cosine interpolant f = a_0/2 + sum a_k cos(k pi z/H) + a_N/2 cos(N pi z/H), a = DCT(f)/N
            std::vector<double> fin(f.data(), f.data() + N + 1), a(N + 1);
            impl_->dct->execute(fin.data(), a.data());
            for (double& v : a) v /= N;
            const double total = 0.5 * a[0] * h_;
            // running integral minus the linear part: sum_k a_k H/(k pi) sin(k pi z/H)
            std::vector<double> d(N - 1), s(N - 1);
            for (int k = 1; k < N; ++k) d[k - 1] = 0.5 * a[k] * h_ / (k * kPi);
            impl_->dst->execute(d.data(), s.data());
            for (int j = 0; j <= N; ++j) {
                const double running = 0.5 * a[0] * z_(j) + (j == 0 || j == N ? 0.0 : s[j - 1]);
                out(j) = 2.0 * running - W(j) * Wz(j) - 2.0 * z_(j) / h_ * total;
            }
            break;
        }
        case Discretization::fd4: {
            const double dz = h_ / N;
            std::vector<double> cum(N + 1, 0.0);
            for (int j = 1; j <= N; ++j) cum[j] = cum[j - 1] + 0.5 * dz * (f(j - 1) + f(j));
            const double total = cum[N];
            for (int j = 0; j <= N; ++j)
                out(j) = 2.0 * cum[j] - W(j) * Wz(j) - 2.0 * z_(j) / h_ * total;
            break;
        }
    }
}

Eigen::VectorXd Operator::rhs(const Eigen::VectorXd& W) const {
    if (W.size() != n_ + 1) throw GridMismatch("reduced1d: state size does not match the grid");
    if (!all_finite(W)) throw NonFiniteState("reduced1d: non-finite state");
    Eigen::VectorXd out;
    rhs_raw(W, out);
    if (!all_finite(out)) throw NonFiniteState("reduced1d: non-finite right-hand side");
    out(0) = 0.0;
    out(n_) = 0.0;
    return out;
}

double Operator::compatibility(const Eigen::VectorXd& W) const {
    Eigen::VectorXd out;
    rhs_raw(W, out);
    return std::fabs(out(n_));
}

State1D Operator::make_state(Eigen::VectorXd W, double t) const {
    if (W.size() != n_ + 1) throw GridMismatch("reduced1d: state size does not match the grid");
    if (!all_finite(W)) throw NonFiniteState("reduced1d: non-finite initial data");
    const double scale = 1.0 + W.cwiseAbs().maxCoeff();
    if (std::fabs(W(0)) > 1e-12 * scale || std::fabs(W(n_)) > 1e-12 * scale)
        throw DomainError("reduced1d: W must vanish at z = 0 and z = H");
    W(0) = 0.0;
    W(n_) = 0.0;
    return State1D{t, h_, z_, std::move(W)};
}

State1D Operator::from_profile(const profile::Profile& pr, double scale) const {
    if (std::fabs(pr.length - h_) > 1e-12 * h_)
        throw GridMismatch("reduced1d: profile length differs from H");
    Eigen::VectorXd W(n_ + 1);
    for (int i = 0; i <= n_; ++i) W(i) = scale * profile::evaluate(pr, std::min(z_(i), pr.length)).phi;
    return make_state(std::move(W));
}

Trajectory integrate(const Operator& op, const State1D& initial, double t_end,
                     const Controls& ctl) {
    const int N = op.N();
    if (initial.W.size() != N + 1) throw GridMismatch("reduced1d: initial state does not match grid");
    if (!all_finite(initial.W)) throw NonFiniteState("reduced1d: non-finite initial data");
    if (initial.W(0) != 0.0 || initial.W(N) != 0.0)
        throw DomainError("reduced1d: initial W must vanish at both walls");
    if (!(t_end > initial.t)) throw DomainError("reduced1d: t_end must exceed the initial time");
    if (!(ctl.level_ratio > 1.0)) throw DomainError("reduced1d: level_ratio must exceed 1");

    Trajectory traj;
    auto make_record = [&](double t, const Eigen::VectorXd& W, bool level) {
        Record r;
        r.state = State1D{t, op.H(), op.z(), W};
        r.max_abs_W = W.cwiseAbs().maxCoeff();
        r.max_abs_Wz = op.derivative(W).cwiseAbs().maxCoeff();
        r.level_sample = level;
        return r;
    };

    traj.records.push_back(make_record(initial.t, initial.W, true));
    const double y_ref = traj.records.front().max_abs_Wz;
    const double log_ratio = std::log(ctl.level_ratio);
    double next_level = y_ref * ctl.level_ratio;
    traj.max_compatibility = relative_compatibility(op, initial.W);

    std::vector<double> stops;
    for (double s : ctl.snapshot_times)
        if (s > initial.t && s <= t_end) stops.push_back(s);
    std::sort(stops.begin(), stops.end());
    stops.erase(std::unique(stops.begin(), stops.end()), stops.end());

    auto f = [&op, N](double, const Eigen::VectorXd& y, Eigen::VectorXd& dy) {
        op.rhs_raw(y, dy);
        dy(0) = 0.0;
        dy(N) = 0.0;
    };

    bool blew_up = false;
    auto obs = [&](const ode::StepInfo& info, Eigen::VectorXd& y) {
        traj.max_compatibility = std::max(traj.max_compatibility, relative_compatibility(op, y));
        y(0) = 0.0;
        y(N) = 0.0;
        Record r = make_record(info.t, y, false);
        if (r.max_abs_W > ctl.blowup_threshold) {
            blew_up = true;
            traj.records.push_back(std::move(r));
            return ode::Action::stop;
        }
        if (y_ref > 0.0 && r.max_abs_Wz >= next_level) {
            r.level_sample = true;
            const double k = std::floor(std::log(r.max_abs_Wz / y_ref) / log_ratio) + 1.0;
            next_level = y_ref * std::exp(k * log_ratio);
        }
        const bool snapshot =
            info.at_stop_time && std::binary_search(stops.begin(), stops.end(), info.t);
        if (r.level_sample || snapshot) traj.records.push_back(std::move(r));
        return ode::Action::proceed;
    };

    Eigen::VectorXd y = initial.W;
    const ode::Result res = ode::integrate(f, initial.t, y, t_end, ctl.step, obs, stops);
    traj.accepted = res.accepted;
    traj.rejected = res.rejected;
    traj.rhs_evals = res.rhs_evals;
    traj.t_final = res.t;
    switch (res.reason) {
        case ode::StopReason::reached_end: traj.reason = Termination::t_end; break;
        case ode::StopReason::observer:
            traj.reason = blew_up ? Termination::blowup : Termination::t_end;
            break;
        case ode::StopReason::step_underflow: traj.reason = Termination::step_underflow; break;
        case ode::StopReason::max_steps: traj.reason = Termination::max_steps; break;
    }
    if (traj.records.back().state.t != res.t) traj.records.push_back(make_record(res.t, y, false));
    return traj;
}

BlowupFit estimate_blowup_time(const std::vector<Sample>& samples) {
    if (samples.size() < 4) throw DomainError("estimate_blowup_time: need at least 4 samples");
    for (std::size_t i = 1; i < samples.size(); ++i)
        if (!(samples[i].t > samples[i - 1].t))
            throw DomainError("estimate_blowup_time: sample times must increase");
    for (const auto& s : samples)
        if (!(s.y > 0.0) || !std::isfinite(s.y))
            throw NoBlowupDetected("blowup functional must be positive and finite");

    const double n = static_cast<double>(samples.size());
    double tm = 0.0, vm = 0.0;
    for (const auto& s : samples) {
        tm += s.t;
        vm += 1.0 / s.y;
    }
    tm /= n;
    vm /= n;
    double stt = 0.0, stv = 0.0, svv = 0.0;
    for (const auto& s : samples) {
        const double dt = s.t - tm, dv = 1.0 / s.y - vm;
        stt += dt * dt;
        stv += dt * dv;
        svv += dv * dv;
    }
    BlowupFit fit;
    fit.samples = samples;
    fit.slope = stv / stt;
    fit.intercept = vm - fit.slope * tm;
    double ss_res = 0.0;
    for (const auto& s : samples) {
        const double r = 1.0 / s.y - (fit.intercept + fit.slope * s.t);
        ss_res += r * r;
    }
    fit.r2 = svv > 0.0 ? std::clamp(1.0 - ss_res / svv, 0.0, 1.0) : 0.0;
    if (!(fit.slope < 0.0))
        throw NoBlowupDetected("no blowup detected: slope of 1/y is " + io::format_double(fit.slope));
    if (fit.r2 < kMinR2)
        throw NoBlowupDetected("no blowup detected: r2 = " + io::format_double(fit.r2));
    fit.T_est = -fit.intercept / fit.slope;
    return fit;
}

std::vector<Sample> select_fit_window(const Trajectory& traj, double threshold, std::size_t count,
                                      double min_span) {
    std::vector<Sample> all;
    for (const auto& r : traj.records)
        if (r.level_sample && r.max_abs_W < threshold && r.max_abs_Wz > 0.0)
            all.push_back({r.state.t, r.max_abs_Wz});
    if (all.size() < 4) throw NoBlowupDetected("no blowup detected: fewer than 4 level samples");
    const std::size_t first = all.size() > count ? all.size() - count : 0;
    std::vector<Sample> window(all.begin() + static_cast<std::ptrdiff_t>(first), all.end());
    if (window.back().y < min_span * window.front().y)
        throw NoBlowupDetected("no blowup detected: fit window spans less than a factor " +
                               io::format_double(min_span));
    return window;
}

std::vector<ComparisonRow> compare_self_similar(const Trajectory& traj,
                                                const profile::Profile& pr, double scale) {
    std::vector<ComparisonRow> rows;
    if (traj.records.empty()) return rows;
    const State1D& s0 = traj.records.front().state;
    if (std::fabs(pr.length - s0.H) > 1e-12 * s0.H)
        throw GridMismatch("compare_self_similar: profile length differs from H");
    Eigen::VectorXd phi(s0.z.size());
    for (Eigen::Index i = 0; i < phi.size(); ++i)
        phi(i) = profile::evaluate(pr, std::min(s0.z(i), pr.length)).phi;
    const double phi_norm = phi.cwiseAbs().maxCoeff();
    for (const auto& r : traj.records) {
        if (r.state.z.size() != phi.size()) throw GridMismatch("compare_self_similar: grid changed");
        const double amp = scale / (1.0 - scale * r.state.t);
        double err = std::numeric_limits<double>::quiet_NaN();
        if (amp > 0.0 && phi_norm > 0.0)
            err = (r.state.W - amp * phi).cwiseAbs().maxCoeff() / (amp * phi_norm);
        rows.push_back({r.state.t, err});
    }
    return rows;
}

double nested_sup_difference(const State1D& a, const State1D& b) {
    const State1D& coarse = a.z.size() <= b.z.size() ? a : b;
    const State1D& fine = a.z.size() <= b.z.size() ? b : a;
    const Eigen::Index nc = coarse.z.size() - 1, nf = fine.z.size() - 1;
    Eigen::Index stride = 0;
    if (nf == nc)
        stride = 1;
    else if (nf == 2 * nc)
        stride = 2;
    else
        throw GridMismatch("nested_sup_difference: grids are not nested");
    const double H = coarse.H;
    double d = 0.0;
    for (Eigen::Index i = 0; i <= nc; ++i) {
        if (std::fabs(coarse.z(i) - fine.z(stride * i)) > 1e-12 * H)
            throw GridMismatch("nested_sup_difference: nodes do not coincide");
        d = std::max(d, std::fabs(coarse.W(i) - fine.W(stride * i)));
    }
    return d;
}

double odd_symmetry_defect(const State1D& s) {
    const Eigen::Index N = s.z.size() - 1;
    double d = 0.0;
    for (Eigen::Index i = 0; i <= N; ++i) {
        if (std::fabs(s.z(i) + s.z(N - i) - s.H) > 1e-12 * s.H)
            throw GridMismatch("odd_symmetry_defect: grid is not symmetric");
        d = std::max(d, std::fabs(s.W(i) + s.W(N - i)));
    }
    return d;
}

void write_trajectory_csv(std::ostream& os, const Trajectory& traj, const profile::Profile* pr,
                          double scale) {
    std::vector<ComparisonRow> cmp;
    if (pr) cmp = compare_self_similar(traj, *pr, scale);
    io::write_header(os, {"t", "max_abs_W", "max_abs_Wz", "inv_max_abs_Wz", "sup_error_self_similar"});
    for (std::size_t i = 0; i < traj.records.size(); ++i) {
        const Record& r = traj.records[i];
        const double inv = r.max_abs_Wz > 0.0 ? 1.0 / r.max_abs_Wz
                                              : std::numeric_limits<double>::infinity();
        const double err = pr ? cmp[i].rel_error : std::numeric_limits<double>::quiet_NaN();
        io::write_row(os, {r.state.t, r.max_abs_W, r.max_abs_Wz, inv, err});
    }
}

void write_fit(std::ostream& os, const BlowupFit& fit) {
    io::KeyValueDoc doc;
    doc.set("T_est", fit.T_est);
    doc.set("slope", fit.slope);
    doc.set("intercept", fit.intercept);
    doc.set("r2", fit.r2);
    doc.set("n_samples", static_cast<long long>(fit.samples.size()));
    if (!fit.samples.empty()) {
        doc.set("t_first", fit.samples.front().t);
        doc.set("t_last", fit.samples.back().t);
        doc.set("y_first", fit.samples.front().y);
        doc.set("y_last", fit.samples.back().y);
    }
    doc.write(os);
}

}  // namespace hydroblow::reduced1d
