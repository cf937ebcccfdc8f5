// hydro2d.hpp
// Pseudo-spectral solver for the inviscid hydrostatic channel system
//     u_t + u u_x + w u_z + p_x = nu (u_xx + u_zz),   u_x + w_z = 0,   p_z = 0,
// periodic in x with period L, w = 0 at z = 0 and z = H, restricted to
// velocity fields odd in x. The pressure follows from the vertical average,
// p_x = -2 avg_z(u u_x).
//
// u = sum_{k=1..K} s_k(z) sin(k alpha x), alpha = 2 pi / L, with s_k sampled on
// Chebyshev-Lobatto nodes. Products are formed on M >= 2 k_max equispaced x
// points and truncated back to K = floor(2 k_max / 3) modes.
#pragma once

#include <Eigen/Dense>
#include <complex>
#include <iosfwd>
#include <memory>
#include <vector>

#include "hydroblow/ode.hpp"
#include "hydroblow/profile.hpp"

namespace hydroblow::hydro2d {

struct Field2D {
    double t = 0.0;
    double L = 0.0;
    double H = 0.0;
    int k_max = 0;
    int Nz = 0;           ///< Chebyshev intervals; Nz + 1 nodes
    double nu = 0.0;      ///< artificial viscosity
    Eigen::MatrixXd amp;  ///< (Nz + 1) x K, column k - 1 holds s_k(z)

    int retained() const noexcept { return static_cast<int>(amp.cols()); }
    /// Complex x-Fourier coefficient of u for wavenumber index k at z-node j:
    /// -i s_k / 2 for 1 <= k <= K, zero for the dealiased modes up to k_max.
    std::complex<double> u_hat(int k, int j) const;
};

class Solver2D {
public:
    Solver2D(double L, double H, int k_max, int Nz);
    ~Solver2D();
    Solver2D(const Solver2D&) = delete;
    Solver2D& operator=(const Solver2D&) = delete;

    double L() const noexcept { return L_; }
    double H() const noexcept { return H_; }
    double alpha() const noexcept;
    int k_max() const noexcept { return k_max_; }
    int Nz() const noexcept { return nz_; }
    int K() const noexcept { return K_; }  ///< retained modes
    int M() const noexcept { return M_; }  ///< physical x points
    const Eigen::VectorXd& z() const noexcept;
    Eigen::VectorXd x() const;

    Field2D zero_field(double nu = 0.0) const;
    /// u0 = -(L / 2 pi k) sin(2 pi k x / L) phi'(z), whose w is cos(2 pi k x / L) phi(z).
    Field2D init_from_theorem(const profile::Profile& profile, int k, double nu = 0.0) const;

    /// Removes the z-mean of every mode, which is what makes w vanish at z = H.
    void project(Eigen::MatrixXd& amp) const;
    void project(Field2D& f) const { project(f.amp); }

    /// max_k |k alpha avg_z s_k|: the z-average of u_x per mode.
    double compatibility_defect(const Field2D& f) const;

    /// Cosine coefficients w_k(z) = -int_0^z k alpha s_k, (Nz + 1) x K.
    Eigen::MatrixXd w_modes(const Field2D& f) const;
    /// u on the (z, x) grid, (Nz + 1) x M.
    Eigen::MatrixXd velocity(const Field2D& f) const;
    /// w on the (z, x) grid, (Nz + 1) x M.
    Eigen::MatrixXd diagnose_w(const Field2D& f) const;
    /// w(0, z).
    Eigen::VectorXd trace_w(const Field2D& f) const;
    /// -2 avg_z(u u_x) at the M x-nodes.
    Eigen::VectorXd pressure_gradient(const Field2D& f) const;

    /// Time derivative of the mode amplitudes, dealiased and projected.
    /// `symmetry_residual`, when given, receives the largest even-in-x
    /// coefficient of the nonlinear term relative to its largest odd one.
    /// Throws NonFiniteState.
    Eigen::MatrixXd rhs2d(const Field2D& f, double* symmetry_residual = nullptr) const;

    /// (1/2) int int u^2 dx dz.
    double energy(const Field2D& f) const;
    /// Energy fraction held by the top 10% of the retained modes.
    double top_mode_fraction(const Field2D& f) const;
    /// Multiplies mode k by exp(-strength (k / K)^order).
    void apply_filter(Eigen::MatrixXd& amp, double strength, double order) const;

    /// rhs2d on a bare amplitude matrix, without shape or finiteness checks.
    void rhs_unchecked(const Eigen::MatrixXd& amp, double nu, Eigen::MatrixXd& out,
                       double& symmetry_residual) const;

private:

    struct Impl;
    double L_, H_;
    int k_max_, nz_, K_, M_;
    std::unique_ptr<Impl> impl_;
};

struct Controls2D {
    ode::StepControls step;
    double filter_strength = 0.0;  ///< 0 disables the filter
    double filter_order = 36.0;
    double exhaustion_fraction = 1e-6;
    std::vector<double> snapshot_times;
};

enum class Termination2D { t_end, resolution_exhausted, step_underflow, max_steps };
const char* to_string(Termination2D r);

struct Snapshot2D {
    double t = 0.0;
    double energy = 0.0;
    Eigen::VectorXd trace;      ///< w(0, z)
    Eigen::VectorXd reference;  ///< scale phi / (1 - scale t), empty without a profile
    double rel_error = 0.0;     ///< sup |trace - reference| / sup |reference|, nan without a profile
};

struct Trajectory2D {
    std::vector<Snapshot2D> snapshots;  ///< initial state, then the requested times reached
    std::vector<std::pair<double, double>> energy_series;  ///< (t, E) after every accepted step
    Termination2D reason = Termination2D::t_end;
    double t_final = 0.0;
    double exhaustion_time = -1.0;       ///< first time the top-mode fraction exceeded the limit, or -1
    double max_symmetry_residual = 0.0;  ///< over every rhs evaluation
    double max_energy_drift = 0.0;       ///< max |E - E0| / E0 before exhaustion
    std::size_t accepted = 0, rejected = 0, rhs_evals = 0;
    Field2D final_field;
};

/// Adaptive integration; stops at t_end or as soon as resolution is exhausted.
/// With a profile, snapshots carry the self-similar reference for the trace.
Trajectory2D integrate2d(const Solver2D& solver, const Field2D& initial, double t_end,
                         const Controls2D& controls = {},
                         const profile::Profile* reference = nullptr, double scale = 1.0);

/// CSV t,z,w_trace,self_similar_ref,rel_err, one row per snapshot and node.
void write_trace_csv(std::ostream& os, const Trajectory2D& traj, const Eigen::VectorXd& z);
/// CSV t,energy,rel_drift.
void write_energy_csv(std::ostream& os, const Trajectory2D& traj);

}  // namespace hydroblow::hydro2d
