// cli.hpp
// Command-line front end: profile, simulate1d, simulate2d and sweep.
#pragma once

#include <iosfwd>
#include <numbers>
#include <string>
#include <vector>

#include "hydroblow/io.hpp"

namespace hydroblow::cli {

enum ExitCode : int {
    kOk = 0,
    kUsage = 1,
    kDomain = 2,
    kCertification = 3,  ///< failed invariant, or 2D trace outside tolerance
    kNoBlowup = 4,
    kResolutionExhausted = 5,
    kStepUnderflow = 6,
};

inline constexpr double kDefaultM = 0.86602540378443860;  // sqrt(3)/2

struct ProfileConfig {
    double m = kDefaultM;
    double H = 1.0;
    int N = 128;  ///< intervals (per arch when segments > 1)
    std::string grid = "chebyshev";
    int segments = 1;
    double residual_tol = 1e-8;
    std::string out = "hydroblow_out";
    bool operator==(const ProfileConfig&) const = default;
};

struct Simulate1DConfig {
    double m = kDefaultM;
    double H = 1.0;
    int N = 256;
    std::string discretization = "chebyshev";
    int segments = 1;
    double scale = 1.0;  ///< initial data scale * phi
    bool zero = false;   ///< start from W = 0 instead
    std::string expect = "auto";  ///< auto | blowup | none
    double t_end = 2.0;
    double rel_tol = 1e-9;
    double abs_tol = 1e-11;
    double threshold = 1e6;
    std::vector<double> snapshots{0.25, 0.5, 0.75, 0.9};
    std::string out = "hydroblow_out";
    bool operator==(const Simulate1DConfig&) const = default;
};

struct Simulate2DConfig {
    double m = kDefaultM;
    double H = 1.0;
    double L = 2.0 * std::numbers::pi;
    int k = 1;
    int k_max = 64;
    int Nz = 96;
    double nu = 0.0;
    double filter = 0.0;
    double filter_order = 36.0;
    double t_end = 0.3;
    double snapshot_dt = 0.01;
    double trace_tol = 0.02;
    double exhaustion = 1e-6;
    double rel_tol = 1e-9;
    double abs_tol = 1e-11;
    bool zero = false;
    std::string out = "hydroblow_out";
    bool operator==(const Simulate2DConfig&) const = default;
};

struct SweepConfig {
    std::vector<double> m_list;
    double H = 1.0;
    int N = 128;     ///< profile intervals
    int N1d = 256;   ///< 1D solver intervals
    double T_tol = 1e-2;
    double t_short = 0.5;  ///< 1D runs stop here; T_est extrapolates 1/max|W_z| over [0, t_short]
    double rel_tol = 1e-9;
    double abs_tol = 1e-11;
    std::string out = "hydroblow_out";
    bool operator==(const SweepConfig&) const = default;
};

struct RunConfig {
    std::string command;
    ProfileConfig profile;
    Simulate1DConfig simulate1d;
    Simulate2DConfig simulate2d;
    SweepConfig sweep;
    bool operator==(const RunConfig&) const = default;
};

/// Parses arguments (without the program name) into a RunConfig. Throws
/// CLI::ParseError subclasses on bad input; --config FILE reads a TOML/INI
/// document with one [command] section per subcommand.
RunConfig parse_args(const std::vector<std::string>& args);

/// Flat document of the active command's settings (keys = option names, plus "command").
io::KeyValueDoc to_doc(const RunConfig& cfg);

/// Inverse of to_doc; keys starting with "result." are ignored, unknown keys are rejected.
RunConfig from_doc(const io::KeyValueDoc& doc);

/// Runs one command and returns its exit status.
int execute(const RunConfig& cfg, std::ostream& out, std::ostream& err);

/// parse_args + execute, mapping parse failures to kUsage.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace hydroblow::cli
