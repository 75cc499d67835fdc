#pragma once

// Experiment drivers behind the command-line tool. Each command takes a
// parsed chain and writes to caller-supplied streams so it can be tested
// without touching the filesystem.

#include "cfrac/elements.hpp"
#include "cfrac/sim.hpp"
#include "cfrac/srg.hpp"

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

namespace cfrac::cli {

enum ExitCode : int {
    kExitOk = 0,
    kExitUsage = 1,
    kExitParse = 2,
    kExitNumeric = 3,
    kExitCheckViolation = 4,
};

[[nodiscard]] int exit_code_for(const Error& e);

/// CFRAC_SEED when set and numeric, otherwise 42.
[[nodiscard]] std::uint64_t default_seed();

struct Reduction {
    enum class Kind { None, Units, Capacitors };
    Kind kind = Kind::None;
    int r = 0;
};

/// "none", "units:<r>" or "capacitors:<r>".
[[nodiscard]] Reduction parse_reduction(const std::string& text);

struct LumpingOptions {
    int pwl_points = 64;
    double range_max = 5.0;
};

[[nodiscard]] CircuitChain apply_reduction(const CircuitChain& chain, const Reduction& red, const LumpingOptions& lump,
                                           Diagnostics* diag = nullptr);

/// Number of units and the series impedance bound lambda when the chain is
/// a port ShuntRC(1,1) followed by identical (series, ShuntRC(1,1)) units.
struct LatticeShape {
    int units = 0;
    double lambda = 0.0;
};
[[nodiscard]] std::optional<LatticeShape> lattice_shape(const CircuitChain& chain);

// --- bounds ----------------------------------------------------------------

struct BoundsOptions {
    double lambda = 2.0;
    int r = 3;
    int n_min = 10;
    int n_max = 800;
};

/// CSV `n,s,b`: s = lambda_n, b = baseline bound for truncation to r units.
void cmd_bounds(const BoundsOptions& opts, std::ostream& out);

// --- simulate --------------------------------------------------------------

struct SimulateOptions {
    std::string input = "sin";  ///< sin | step | multisine
    double amplitude = 1.0;
    double omega = 1.0;
    double t_final = 25.0;
    double dt = 1e-3;
    double ic = 0.0;
    Reduction reduce;
    bool compare = false;
    std::uint64_t seed = 42;
    LumpingOptions lumping;
};

[[nodiscard]] sim::InputFn make_input(const SimulateOptions& opts);

/// `t,v` for a single run (the reduced model when --reduce is given);
/// `t,v_full,v_red_srg,v_red_bt,err_srg,err_bt` with --compare, where the
/// srg column is the capacitor truncation and bt the pure unit truncation
/// to the same r.
void cmd_simulate(const CircuitChain& chain, const SimulateOptions& opts, std::ostream& out,
                  Diagnostics* diag = nullptr);

// --- srg -------------------------------------------------------------------

struct SrgOptions {
    int samples = 200;
    double im_max = 2.0;
    Reduction reduce;
    LumpingOptions lumping;
};

struct SrgSummary {
    srg::ChainSrg full;
    double gain_bound = 0.0;                 ///< max modulus of the impedance bound
    std::optional<double> secant_gain;       ///< output-strict parameter of the impedance bound
    std::optional<LatticeShape> lattice;
    std::optional<double> lambda_n;
    std::optional<srg::ChainSrg> reduced;    ///< with --reduce
    region::Region error;                    ///< bound on the SRG of full minus reduced (or itself)
    double error_radius = 0.0;
    std::optional<srg::SecantError> secant_error;
};

[[nodiscard]] SrgSummary srg_summary(const CircuitChain& chain, const SrgOptions& opts, Diagnostics* diag = nullptr);

/// Boundary CSVs of the impedance and admittance bounds plus a text report.
void cmd_srg(const CircuitChain& chain, const SrgOptions& opts, std::ostream& impedance_csv,
             std::ostream& admittance_csv, std::ostream& report, Diagnostics* diag = nullptr);

// --- check ------------------------------------------------------------------

struct CheckOptions {
    int pairs = 200;
    std::uint64_t seed = 42;
    double tol = 5e-3;
    double dt = 1e-3;
    double t_final = 25.0;
    unsigned threads = 1;
    sim::MultisineOptions excitation;
};

struct CheckResult {
    srg::ChainSrg certified;
    PortProperties certified_tags;
    srg::EmpiricalSrg empirical;
    srg::ContainmentReport containment;
    sim::PropertyEstimate estimate;
    double gain_bound = 0.0;
    double gain_from_zero = 0.0;  ///< max |v0| / |i0| over all runs
    std::vector<std::string> failures;

    [[nodiscard]] bool passed() const noexcept { return failures.empty(); }
};

/// Empirical SRG of the impedance from seeded multisine pairs with zero
/// initial state, checked against the certified bound and tags.
[[nodiscard]] CheckResult run_check(const CircuitChain& chain, const CheckOptions& opts);
void print_check(const CheckResult& result, std::ostream& report);

// --- truncate ----------------------------------------------------------------

/// Reduced chain written as a circuit file plus PWL side files.
void cmd_truncate(const CircuitChain& chain, const Reduction& red, const LumpingOptions& lump,
                  const std::string& out_path, Diagnostics* diag = nullptr);

}  // namespace cfrac::cli
