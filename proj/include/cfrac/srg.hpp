#pragma once

// SRG bounds of chains, the lambda_n recursion, error regions and empirical
// SRG samples from simulated trajectories.

#include "cfrac/elements.hpp"
#include "cfrac/region.hpp"
#include "cfrac/sim.hpp"

#include <functional>
#include <iosfwd>
#include <span>
#include <string>
#include <utility>
#include <vector>

namespace cfrac::srg {

struct BoundSeries {
    double lambda = 0.0;
    std::vector<double> values;  ///< lambda_1 .. lambda_N
    double fixed_point = 0.0;
};

/// lambda_1 = 1/(1 + 1/(lambda + 1)), lambda_n = 1/(1 + 1/(lambda + lambda_{n-1})).
[[nodiscard]] BoundSeries lambda_chain(double lambda, int n);
/// Positive root of x^2 + lambda x - lambda = 0.
[[nodiscard]] double lambda_fixed_point(double lambda);

struct ChainSrg {
    region::Region impedance;
    region::Region admittance;
};

/// Fold of the position regions from the far end; the admittance is the
/// inverse of the port impedance bound.
[[nodiscard]] ChainSrg chain_srg(const CircuitChain& chain);

/// Bound on the SRG of A - B.
[[nodiscard]] region::Region error_region(const region::Region& a, const region::Region& b);

struct SecantError {
    double value = 0.0;
    bool enlarged = false;  ///< gamma_hat > gamma: the reduced model certifies a larger secant gain
};

[[nodiscard]] SecantError secant_error(double gamma, double gamma_hat, Diagnostics* diag = nullptr);

/// Executable port map with zero initial state.
using PortMap = std::function<sim::Signal(const sim::Signal&)>;

struct EmpiricalSrg {
    std::vector<region::SrgPoint> points;   ///< in pair order, skipped pairs omitted
    std::vector<std::size_t> pair_index;    ///< source pair of each point
    std::vector<std::string> skipped;       ///< one report entry per skipped pair
};

/// Points (|dy|/|du|, angle(du, dy)) for every input pair. Pairs are
/// evaluated on up to `threads` worker threads; results keep pair order.
[[nodiscard]] EmpiricalSrg empirical_srg(const PortMap& map, std::span<const std::pair<sim::Signal, sim::Signal>> pairs,
                                         unsigned threads = 1);

/// As above, with both outputs already computed: (du, dy) per pair.
[[nodiscard]] EmpiricalSrg empirical_srg_from_increments(std::span<const sim::Signal> du,
                                                         std::span<const sim::Signal> dy);

struct ContainmentReport {
    std::size_t checked = 0;
    std::size_t violations = 0;
    double worst_excess = 0.0;  ///< max excess over all points; <= 0 when every point is inside
    bool passed = true;
    std::vector<std::string> warnings;
};

[[nodiscard]] ContainmentReport check_containment(std::span<const region::SrgPoint> points, const region::Region& a,
                                                  double tol);

/// CSV with header `modulus,angle,re,im`.
void write_srg_points_csv(std::ostream& os, std::span<const region::SrgPoint> points);

}  // namespace cfrac::srg
