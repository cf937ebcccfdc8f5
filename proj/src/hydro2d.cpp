// hydro2d.cpp

#include "hydroblow/hydro2d.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <ostream>

#include "fftw_plan.hpp"
#include "hydroblow/chebyshev.hpp"
#include "hydroblow/errors.hpp"
#include "hydroblow/io.hpp"

namespace hydroblow::hydro2d {
namespace {

constexpr double kPi = std::numbers::pi;
using cplx = std::complex<double>;

}  // namespace

cplx Field2D::u_hat(int k, int j) const {
    if (k < 1 || k > k_max) throw DomainError("u_hat: wavenumber index out of range");
    if (k > retained()) return {0.0, 0.0};
    return {0.0, -0.5 * amp(j, k - 1)};
}

const char* to_string(Termination2D r) {
    switch (r) {
        case Termination2D::t_end: return "t_end";
        case Termination2D::resolution_exhausted: return "resolution_exhausted";
        case Termination2D::step_underflow: return "step_underflow";
        case Termination2D::max_steps: return "max_steps";
    }
    return "?";
}

struct Solver2D::Impl {
    Impl(int nz, double H, int M) : cheb(nz, H), fft(M) {}
    ChebyshevGrid cheb;
    detail::RealFFT fft;
    Eigen::RowVectorXd mean_row;  // Clenshaw-Curtis weights / H
    Eigen::VectorXd kalpha;       // k alpha, k = 1..K
};

Solver2D::Solver2D(double L, double H, int k_max, int Nz) : L_(L), H_(H), k_max_(k_max), nz_(Nz) {
    if (!(L > 0.0) || !std::isfinite(L)) throw DomainError("hydro2d: L must be positive");
    if (!(H > 0.0) || !std::isfinite(H)) throw DomainError("hydro2d: H must be positive");
    if (k_max < 3) throw DomainError("hydro2d: k_max must be >= 3");
    if (Nz < 8) throw DomainError("hydro2d: Nz must be >= 8");
    K_ = (2 * k_max) / 3;
    // quadratic products reach 2K; M > 3K keeps their aliases above K
    M_ = 2 * k_max;
    while (M_ <= 3 * K_) M_ += 2;
    impl_ = std::make_unique<Impl>(Nz, H, M_);
    impl_->mean_row = impl_->cheb.weights() / H;
    impl_->kalpha.resize(K_);
    for (int k = 1; k <= K_; ++k) impl_->kalpha(k - 1) = k * alpha();
}

Solver2D::~Solver2D() = default;

double Solver2D::alpha() const noexcept { return 2.0 * kPi / L_; }

const Eigen::VectorXd& Solver2D::z() const noexcept { return impl_->cheb.nodes(); }

Eigen::VectorXd Solver2D::x() const {
    Eigen::VectorXd x(M_);
    for (int i = 0; i < M_; ++i) x(i) = L_ * i / M_;
    return x;
}

Field2D Solver2D::zero_field(double nu) const {
    if (!(nu >= 0.0)) throw DomainError("hydro2d: nu must be >= 0");
    Field2D f;
    f.L = L_;
    f.H = H_;
    f.k_max = k_max_;
    f.Nz = nz_;
    f.nu = nu;
    f.amp = Eigen::MatrixXd::Zero(nz_ + 1, K_);
    return f;
}

Field2D Solver2D::init_from_theorem(const profile::Profile& pr, int k, double nu) const {
    if (k < 1 || k > K_)
        throw DomainError("hydro2d: k = " + std::to_string(k) + " outside the retained modes 1.." +
                          std::to_string(K_));
    if (std::fabs(pr.length - H_) > 1e-12 * H_)
        throw GridMismatch("hydro2d: profile length differs from H");
    Field2D f = zero_field(nu);
    const double ka = k * alpha();
    const Eigen::VectorXd& zz = z();
    for (int j = 0; j <= nz_; ++j)
        f.amp(j, k - 1) = -profile::evaluate(pr, std::min(zz(j), pr.length)).dphi / ka;
    project(f);
    return f;
}

void Solver2D::project(Eigen::MatrixXd& amp) const {
    const Eigen::RowVectorXd means = impl_->mean_row * amp;
    amp.rowwise() -= means;
}

double Solver2D::compatibility_defect(const Field2D& f) const {
    const Eigen::RowVectorXd means = impl_->mean_row * f.amp;
    return (means.transpose().array() * impl_->kalpha.array()).abs().maxCoeff();
}

Eigen::MatrixXd Solver2D::w_modes(const Field2D& f) const {
    return -(impl_->cheb.cumulative() * (f.amp * impl_->kalpha.asDiagonal()));
}

namespace {

// Real values on M points of sum_k c_k e^{i k alpha x} + c.c., i.e. c2r of c.
void synthesize(const detail::RealFFT& fft, std::vector<cplx>& spec, double* out) {
    fft.backward(spec.data(), out);
}

}  // namespace

Eigen::MatrixXd Solver2D::velocity(const Field2D& f) const {
    Eigen::MatrixXd u(nz_ + 1, M_);
    std::vector<cplx> spec(M_ / 2 + 1);
    std::vector<double> row(M_);
    for (int j = 0; j <= nz_; ++j) {
        std::fill(spec.begin(), spec.end(), cplx{});
        for (int k = 1; k <= K_; ++k) spec[k] = cplx(0.0, -0.5 * f.amp(j, k - 1));
        synthesize(impl_->fft, spec, row.data());
        for (int i = 0; i < M_; ++i) u(j, i) = row[i];
    }
    return u;
}

Eigen::MatrixXd Solver2D::diagnose_w(const Field2D& f) const {
    const Eigen::MatrixXd wk = w_modes(f);
    Eigen::MatrixXd w(nz_ + 1, M_);
    std::vector<cplx> spec(M_ / 2 + 1);
    std::vector<double> row(M_);
    for (int j = 0; j <= nz_; ++j) {
        std::fill(spec.begin(), spec.end(), cplx{});
        for (int k = 1; k <= K_; ++k) spec[k] = cplx(0.5 * wk(j, k - 1), 0.0);
        synthesize(impl_->fft, spec, row.data());
        for (int i = 0; i < M_; ++i) w(j, i) = row[i];
    }
    w.row(0).setZero();
    return w;
}

Eigen::VectorXd Solver2D::trace_w(const Field2D& f) const { return w_modes(f).rowwise().sum(); }

Eigen::VectorXd Solver2D::pressure_gradient(const Field2D& f) const {
    Eigen::MatrixXd uux(nz_ + 1, M_);
    std::vector<cplx> spec(M_ / 2 + 1);
    std::vector<double> u(M_), ux(M_);
    for (int j = 0; j <= nz_; ++j) {
        std::fill(spec.begin(), spec.end(), cplx{});
        for (int k = 1; k <= K_; ++k) spec[k] = cplx(0.0, -0.5 * f.amp(j, k - 1));
        synthesize(impl_->fft, spec, u.data());
        std::fill(spec.begin(), spec.end(), cplx{});
        for (int k = 1; k <= K_; ++k) spec[k] = cplx(0.5 * impl_->kalpha(k - 1) * f.amp(j, k - 1), 0.0);
        synthesize(impl_->fft, spec, ux.data());
        for (int i = 0; i < M_; ++i) uux(j, i) = u[i] * ux[i];
    }
    return -2.0 * (impl_->mean_row * uux).transpose();
}

void Solver2D::rhs_unchecked(const Eigen::MatrixXd& amp, double nu, Eigen::MatrixXd& out,
                        double& sym) const {
    const int nz1 = nz_ + 1;
    const Eigen::MatrixXd& D = impl_->cheb.derivative();
    const Eigen::MatrixXd uz_modes = D * amp;
    const Eigen::MatrixXd w_k = -(impl_->cheb.cumulative() * (amp * impl_->kalpha.asDiagonal()));

    Eigen::MatrixXd adv(nz1, K_);   // sine coefficients of u u_x + w u_z
    Eigen::MatrixXd uux_k(nz1, K_); // sine coefficients of u u_x
    const int nh = M_ / 2 + 1;
    std::vector<cplx> spec(nh), out_spec(nh);
    std::vector<double> u(M_), ux(M_), w(M_), uz(M_), prod(M_);
    double odd_max = 0.0, even_max = 0.0;
    const double norm = 2.0 / M_;

    for (int j = 0; j < nz1; ++j) {
        auto fill = [&](auto coeff) {
            std::fill(spec.begin(), spec.end(), cplx{});
            for (int k = 1; k <= K_; ++k) spec[k] = coeff(k);
        };
        fill([&](int k) { return cplx(0.0, -0.5 * amp(j, k - 1)); });
        synthesize(impl_->fft, spec, u.data());
        fill([&](int k) { return cplx(0.5 * impl_->kalpha(k - 1) * amp(j, k - 1), 0.0); });
        synthesize(impl_->fft, spec, ux.data());
        fill([&](int k) { return cplx(0.5 * w_k(j, k - 1), 0.0); });
        synthesize(impl_->fft, spec, w.data());
        fill([&](int k) { return cplx(0.0, -0.5 * uz_modes(j, k - 1)); });
        synthesize(impl_->fft, spec, uz.data());

        for (int i = 0; i < M_; ++i) prod[i] = u[i] * ux[i];
        impl_->fft.forward(prod.data(), out_spec.data());
        for (int k = 1; k <= K_; ++k) uux_k(j, k - 1) = -norm * out_spec[k].imag();

        for (int i = 0; i < M_; ++i) prod[i] += w[i] * uz[i];
        impl_->fft.forward(prod.data(), out_spec.data());
        for (int k = 1; k <= K_; ++k) adv(j, k - 1) = -norm * out_spec[k].imag();
        // an odd product has no cosine part; whatever shows up is the symmetry defect
        for (int k = 0; k < nh; ++k) {
            even_max = std::max(even_max, norm * std::fabs(out_spec[k].real()));
            odd_max = std::max(odd_max, norm * std::fabs(out_spec[k].imag()));
        }
    }

    const Eigen::RowVectorXd px = -2.0 * (impl_->mean_row * uux_k);
    out = -adv;
    out.rowwise() -= px;
    if (nu > 0.0) {
        Eigen::MatrixXd g = uz_modes;
        g.row(0).setZero();  // u_z = 0 at both walls
        g.row(nz_).setZero();
        out += nu * (D * g - amp * impl_->kalpha.array().square().matrix().asDiagonal());
    }
    project(out);
    sym = odd_max > 0.0 ? even_max / odd_max : even_max;
}

Eigen::MatrixXd Solver2D::rhs2d(const Field2D& f, double* symmetry_residual) const {
    if (f.amp.rows() != nz_ + 1 || f.amp.cols() != K_)
        throw GridMismatch("hydro2d: field does not match the solver grid");
    if (!f.amp.allFinite()) throw NonFiniteState("hydro2d: non-finite field");
    Eigen::MatrixXd out;
    double sym = 0.0;
    rhs_unchecked(f.amp, f.nu, out, sym);
    if (!out.allFinite()) throw NonFiniteState("hydro2d: non-finite right-hand side");
    if (symmetry_residual) *symmetry_residual = sym;
    return out;
}

double Solver2D::energy(const Field2D& f) const {
    const Eigen::RowVectorXd col = impl_->cheb.weights() * f.amp.array().square().matrix();
    return 0.25 * L_ * col.sum();
}

double Solver2D::top_mode_fraction(const Field2D& f) const {
    const Eigen::RowVectorXd col = impl_->cheb.weights() * f.amp.array().square().matrix();
    const double total = col.sum();
    if (!(total > 0.0)) return 0.0;
    const int top = std::max(1, (K_ + 9) / 10);
    return col.tail(top).sum() / total;
}

void Solver2D::apply_filter(Eigen::MatrixXd& amp, double strength, double order) const {
    for (int k = 1; k <= K_; ++k)
        amp.col(k - 1) *= std::exp(-strength * std::pow(static_cast<double>(k) / K_, order));
}

Trajectory2D integrate2d(const Solver2D& solver, const Field2D& initial, double t_end,
                         const Controls2D& ctl, const profile::Profile* reference, double scale) {
    const int nz1 = solver.Nz() + 1, K = solver.K();
    if (initial.amp.rows() != nz1 || initial.amp.cols() != K)
        throw GridMismatch("hydro2d: initial field does not match the solver grid");
    if (!initial.amp.allFinite()) throw NonFiniteState("hydro2d: non-finite initial field");
    if (!(t_end > initial.t)) throw DomainError("hydro2d: t_end must exceed the initial time");
    if (!(ctl.filter_strength >= 0.0)) throw DomainError("hydro2d: filter strength must be >= 0");

    Eigen::VectorXd phi;
    double phi_norm = 0.0;
    if (reference) {
        if (std::fabs(reference->length - solver.H()) > 1e-12 * solver.H())
            throw GridMismatch("hydro2d: reference profile length differs from H");
        phi.resize(nz1);
        for (int j = 0; j < nz1; ++j)
            phi(j) = profile::evaluate(*reference, std::min(solver.z()(j), reference->length)).phi;
        phi_norm = phi.cwiseAbs().maxCoeff();
    }

    Trajectory2D traj;
    Field2D field = initial;
    const double nu = initial.nu;
    const double e0 = solver.energy(initial);

    auto snapshot = [&](double t, const Field2D& f) {
        Snapshot2D s;
        s.t = t;
        s.energy = solver.energy(f);
        s.trace = solver.trace_w(f);
        s.rel_error = std::numeric_limits<double>::quiet_NaN();
        if (reference) {
            const double amp = scale / (1.0 - scale * t);
            s.reference = amp * phi;
            if (amp > 0.0 && phi_norm > 0.0)
                s.rel_error = (s.trace - s.reference).cwiseAbs().maxCoeff() / (amp * phi_norm);
        }
        return s;
    };
    traj.snapshots.push_back(snapshot(initial.t, field));
    traj.energy_series.emplace_back(initial.t, e0);

    std::vector<double> stops;
    for (double s : ctl.snapshot_times)
        if (s > initial.t && s <= t_end) stops.push_back(s);
    std::sort(stops.begin(), stops.end());
    stops.erase(std::unique(stops.begin(), stops.end()), stops.end());

    Eigen::MatrixXd work(nz1, K), out(nz1, K);
    auto f = [&](double, const Eigen::VectorXd& y, Eigen::VectorXd& dy) {
        work = Eigen::Map<const Eigen::MatrixXd>(y.data(), nz1, K);
        double sym = 0.0;
        solver.rhs_unchecked(work, nu, out, sym);
        traj.max_symmetry_residual = std::max(traj.max_symmetry_residual, sym);
        dy = Eigen::Map<const Eigen::VectorXd>(out.data(), out.size());
    };

    bool exhausted = false;
    auto obs = [&](const ode::StepInfo& info, Eigen::VectorXd& y) {
        Eigen::Map<Eigen::MatrixXd> amp(y.data(), nz1, K);
        ode::Action act = ode::Action::proceed;
        if (ctl.filter_strength > 0.0) {
            Eigen::MatrixXd a = amp;
            solver.apply_filter(a, ctl.filter_strength, ctl.filter_order);
            amp = a;
            act = ode::Action::state_modified;
        }
        field.amp = amp;
        field.t = info.t;
        const double e = solver.energy(field);
        traj.energy_series.emplace_back(info.t, e);
        if (solver.top_mode_fraction(field) > ctl.exhaustion_fraction) {
            exhausted = true;
            traj.exhaustion_time = info.t;
            return ode::Action::stop;
        }
        if (e0 > 0.0) traj.max_energy_drift = std::max(traj.max_energy_drift, std::fabs(e - e0) / e0);
        if (info.at_stop_time && std::binary_search(stops.begin(), stops.end(), info.t))
            traj.snapshots.push_back(snapshot(info.t, field));
        return act;
    };

    Eigen::VectorXd y = Eigen::Map<const Eigen::VectorXd>(initial.amp.data(), initial.amp.size());
    const ode::Result res = ode::integrate(f, initial.t, y, t_end, ctl.step, obs, stops);
    traj.accepted = res.accepted;
    traj.rejected = res.rejected;
    traj.rhs_evals = res.rhs_evals;
    traj.t_final = res.t;
    switch (res.reason) {
        case ode::StopReason::reached_end: traj.reason = Termination2D::t_end; break;
        case ode::StopReason::observer:
            traj.reason = exhausted ? Termination2D::resolution_exhausted : Termination2D::t_end;
            break;
        case ode::StopReason::step_underflow: traj.reason = Termination2D::step_underflow; break;
        case ode::StopReason::max_steps: traj.reason = Termination2D::max_steps; break;
    }
    field.amp = Eigen::Map<const Eigen::MatrixXd>(y.data(), nz1, K);
    field.t = res.t;
    traj.final_field = std::move(field);
    return traj;
}

void write_trace_csv(std::ostream& os, const Trajectory2D& traj, const Eigen::VectorXd& z) {
    io::write_header(os, {"t", "z", "w_trace", "self_similar_ref", "rel_err"});
    const double nan = std::numeric_limits<double>::quiet_NaN();
    for (const auto& s : traj.snapshots) {
        for (Eigen::Index j = 0; j < z.size(); ++j) {
            const double ref = s.reference.size() ? s.reference(j) : nan;
            io::write_row(os, {s.t, z(j), s.trace(j), ref, s.rel_error});
        }
    }
}

void write_energy_csv(std::ostream& os, const Trajectory2D& traj) {
    io::write_header(os, {"t", "energy", "rel_drift"});
    const double e0 = traj.energy_series.empty() ? 0.0 : traj.energy_series.front().second;
    for (const auto& [t, e] : traj.energy_series) {
        const double drift = e0 > 0.0 ? (e - e0) / e0 : 0.0;
        io::write_row(os, {t, e, drift});
    }
}

}  // namespace hydroblow::hydro2d
