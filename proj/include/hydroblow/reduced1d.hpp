// reduced1d.hpp
// Method-of-lines solver for the reduced nonlocal equation
//     W_t = int_0^z [(W_z)^2 - W W_zz] dz' - (2z/H) int_0^H (W_z)^2 dz',
//     W(0, t) = W(H, t) = 0,
// with blowup detection and comparison against phi(z) / (1 - t).
#pragma once

#include <Eigen/Dense>
#include <iosfwd>
#include <memory>
#include <string>
#include <vector>

#include "hydroblow/ode.hpp"
#include "hydroblow/profile.hpp"

namespace hydroblow::reduced1d {

/// chebyshev: collocation on Chebyshev-Lobatto nodes (default).
/// sine: odd-extension sine series on a uniform grid.
/// fd4: fourth-order central differences with odd ghost values, uniform grid.
enum class Discretization { chebyshev, sine, fd4 };

const char* to_string(Discretization d);
Discretization discretization_from_string(const std::string& s);

struct State1D {
    double t = 0.0;
    double H = 0.0;
    Eigen::VectorXd z;
    Eigen::VectorXd W;
};

/// Spatial operator on a fixed grid. The right-hand side is evaluated in the
/// integrated-by-parts form
///     W_t = 2 int_0^z (W_z)^2 - W W_z - (2z/H) int_0^H (W_z)^2,
/// with the same quadrature for the running and the total integral, so the
/// value at z = H cancels to rounding. Thread-safe: all methods are const.
class Operator {
public:
    Operator(int N, double H, Discretization d = Discretization::chebyshev);
    ~Operator();
    Operator(const Operator&) = delete;
    Operator& operator=(const Operator&) = delete;

    int N() const noexcept { return n_; }
    double H() const noexcept { return h_; }
    Discretization discretization() const noexcept { return disc_; }
    const Eigen::VectorXd& z() const noexcept { return z_; }

    Eigen::VectorXd derivative(const Eigen::VectorXd& W) const;
    /// (2/H) int_0^H (W_z)^2 with the operator's quadrature.
    double nonlocal(const Eigen::VectorXd& W) const;

    /// Right-hand side before the boundary values are overwritten. Never throws.
    void rhs_raw(const Eigen::VectorXd& W, Eigen::VectorXd& out) const;
    /// rhs_raw with out(0) = out(N) = 0. Throws NonFiniteState on non-finite input or output.
    Eigen::VectorXd rhs(const Eigen::VectorXd& W) const;
    /// |rhs_raw(W)(N)|: what the nonlocal term leaves at the top boundary.
    double compatibility(const Eigen::VectorXd& W) const;

    /// State at time t with W sampled from `values` (checked for the boundary condition).
    State1D make_state(Eigen::VectorXd W, double t = 0.0) const;
    /// scale * phi on this grid; the profile length must equal H.
    State1D from_profile(const profile::Profile& profile, double scale = 1.0) const;

private:
    struct Impl;
    int n_;
    double h_;
    Discretization disc_;
    Eigen::VectorXd z_;
    std::unique_ptr<Impl> impl_;
};

struct Controls {
    ode::StepControls step;            ///< rel_tol 1e-9, abs_tol 1e-11 by default
    double blowup_threshold = 1e6;     ///< on max |W|
    double level_ratio = 1.333521432163324;  ///< 10^(1/8): spacing of the max|W_z| samples
    std::vector<double> snapshot_times;
};

enum class Termination { t_end, blowup, step_underflow, max_steps };
const char* to_string(Termination r);

/// One stored state. Level samples are taken whenever max|W_z| first exceeds
/// the next geometric level; snapshots at the requested times.
struct Record {
    State1D state;
    double max_abs_W = 0.0;
    double max_abs_Wz = 0.0;
    bool level_sample = false;
};

struct Trajectory {
    std::vector<Record> records;  ///< increasing t; first is the initial state
    Termination reason = Termination::t_end;
    double t_final = 0.0;
    double max_compatibility = 0.0;  ///< largest |W_t(H)| / ||W_t||_inf before enforcement, over accepted steps
    std::size_t accepted = 0, rejected = 0, rhs_evals = 0;

    const Record& final() const { return records.back(); }
};

/// Adaptive Dormand-Prince integration from `initial` to t_end or blowup.
Trajectory integrate(const Operator& op, const State1D& initial, double t_end,
                     const Controls& controls = {});

struct Sample {
    double t;
    double y;
};

struct BlowupFit {
    std::vector<Sample> samples;  ///< the fitted window
    double slope = 0.0;
    double intercept = 0.0;
    double T_est = 0.0;
    double r2 = 0.0;
};

/// Minimum r^2 for a blowup verdict.
inline constexpr double kMinR2 = 0.99;

/// Least squares of 1/y against t; T_est = -intercept / slope. Needs at least
/// four samples with increasing t. Throws NoBlowupDetected when slope >= 0 or
/// r^2 < kMinR2.
BlowupFit estimate_blowup_time(const std::vector<Sample>& samples);

/// Last `count` level samples with max|W| below `threshold`, requiring the
/// window to span at least a factor `min_span` in y. Throws NoBlowupDetected otherwise.
std::vector<Sample> select_fit_window(const Trajectory& traj, double threshold,
                                      std::size_t count = 10, double min_span = 10.0);

struct ComparisonRow {
    double t;
    double rel_error;
};

/// ||W - s phi / (1 - s t)||_inf / ||s phi / (1 - s t)||_inf for every record,
/// where s = scale. Throws GridMismatch if the profile length differs from H.
std::vector<ComparisonRow> compare_self_similar(const Trajectory& traj,
                                                const profile::Profile& profile,
                                                double scale = 1.0);

/// sup |a - b| on the nodes of the coarser state; the finer grid must be the
/// same or have twice as many intervals (nested nodes). Throws GridMismatch otherwise.
double nested_sup_difference(const State1D& a, const State1D& b);

/// Sup norm of W(z) + W(H - z) on a grid symmetric about H/2.
double odd_symmetry_defect(const State1D& s);

/// CSV: t,max_abs_W,max_abs_Wz,inv_max_abs_Wz,sup_error_self_similar. The last
/// column is nan when no profile is given.
void write_trajectory_csv(std::ostream& os, const Trajectory& traj,
                          const profile::Profile* profile = nullptr, double scale = 1.0);

void write_fit(std::ostream& os, const BlowupFit& fit);

}  // namespace hydroblow::reduced1d
