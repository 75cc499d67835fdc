#include "cfrac/srg.hpp"

#include "cfrac/format.hpp"

#include <algorithm>
#include <cmath>
#include <exception>
#include <limits>
#include <numbers>
#include <ostream>
#include <thread>

namespace cfrac::srg {

using region::Region;
using region::SrgPoint;

BoundSeries lambda_chain(double lambda, int n) {
    if (!(lambda > 0.0) || !std::isfinite(lambda)) throw Error(ErrorKind::InvalidArgument, "lambda_chain: lambda must be > 0");
    if (n < 1) throw Error(ErrorKind::InvalidArgument, "lambda_chain: N must be >= 1");
    BoundSeries out;
    out.lambda = lambda;
    out.values.reserve(static_cast<std::size_t>(n));
    double prev = 1.0;
    for (int k = 0; k < n; ++k) {
        prev = 1.0 / (1.0 + 1.0 / (lambda + prev));
        out.values.push_back(prev);
    }
    out.fixed_point = lambda_fixed_point(lambda);
    return out;
}

double lambda_fixed_point(double lambda) { return (-lambda + std::sqrt(lambda * lambda + 4.0 * lambda)) / 2.0; }

ChainSrg chain_srg(const CircuitChain& chain) {
    if (chain.size() == 0) throw Error(ErrorKind::InvalidArgument, "chain_srg: empty chain");
    std::vector<Region> regions;
    regions.reserve(chain.size());
    for (std::size_t k = 0; k < chain.size(); ++k) {
        regions.push_back(position_region(chain[k], CircuitChain::position_orientation(k)));
    }
    Region z = region::fold_continued_fraction(regions);
    Region y = region::invert(z);
    return {std::move(z), std::move(y)};
}

Region error_region(const Region& a, const Region& b) { return region::minkowski_sum(a, region::negate(b)); }

SecantError secant_error(double gamma, double gamma_hat, Diagnostics* diag) {
    if (!(gamma_hat > 0.0)) throw Error(ErrorKind::InvalidArgument, "secant_error: gamma_hat must be > 0");
    SecantError out{gamma - gamma_hat, gamma < gamma_hat};
    if (out.enlarged && diag) {
        diag->warn("reduced model certifies a larger secant gain (" + format_number(gamma_hat) + " > " +
                   format_number(gamma) + ")");
    }
    return out;
}

namespace {

constexpr double kDegenerate = 1e-12;

// Returns false when the pair must be skipped.
bool srg_point(const sim::Signal& du, const sim::Signal& dy, SrgPoint& out) {
    const double nu = sim::norm(du);
    if (nu < kDegenerate) return false;
    const double ny = sim::norm(dy);
    if (ny == 0.0) {
        out = {0.0, 0.0, false};
        return true;
    }
    out = {ny / nu, sim::angle(du, dy), false};
    return true;
}

}  // namespace

EmpiricalSrg empirical_srg_from_increments(std::span<const sim::Signal> du, std::span<const sim::Signal> dy) {
    if (du.size() != dy.size()) throw Error(ErrorKind::InvalidArgument, "empirical_srg: increment count mismatch");
    EmpiricalSrg out;
    for (std::size_t k = 0; k < du.size(); ++k) {
        SrgPoint p;
        if (srg_point(du[k], dy[k], p)) {
            out.points.push_back(p);
            out.pair_index.push_back(k);
        } else {
            out.skipped.push_back("pair " + std::to_string(k) + ": input increment norm below 1e-12");
        }
    }
    return out;
}

EmpiricalSrg empirical_srg(const PortMap& map, std::span<const std::pair<sim::Signal, sim::Signal>> pairs,
                           unsigned threads) {
    const std::size_t n = pairs.size();
    std::vector<sim::Signal> du(n), dy(n);
    std::vector<std::exception_ptr> errors(n);
    auto work = [&](std::size_t begin, std::size_t stride) {
        for (std::size_t k = begin; k < n; k += stride) {
            try {
                du[k] = pairs[k].first - pairs[k].second;
                if (sim::norm(du[k]) < kDegenerate) {
                    dy[k] = du[k];
                    continue;
                }
                dy[k] = map(pairs[k].first) - map(pairs[k].second);
            } catch (...) {
                errors[k] = std::current_exception();
            }
        }
    };
    const std::size_t workers = std::clamp<std::size_t>(threads, 1, std::max<std::size_t>(n, 1));
    if (workers == 1) {
        work(0, 1);
    } else {
        std::vector<std::thread> pool;
        pool.reserve(workers);
        for (std::size_t w = 0; w < workers; ++w) pool.emplace_back(work, w, workers);
        for (auto& t : pool) t.join();
    }
    for (auto& e : errors) {
        if (e) std::rethrow_exception(e);
    }
    return empirical_srg_from_increments(du, dy);
}

ContainmentReport check_containment(std::span<const SrgPoint> points, const Region& a, double tol) {
    ContainmentReport rep;
    rep.checked = points.size();
    if (points.empty()) {
        rep.warnings.push_back("no points to check; containment holds vacuously");
        return rep;
    }
    rep.worst_excess = -std::numeric_limits<double>::infinity();
    for (const auto& p : points) {
        const double ex = region::excess(a, p);
        rep.worst_excess = std::max(rep.worst_excess, ex);
        if (!(ex <= tol)) ++rep.violations;
    }
    rep.passed = rep.violations == 0;
    return rep;
}

void write_srg_points_csv(std::ostream& os, std::span<const SrgPoint> points) {
    os << "modulus,angle,re,im\n";
    for (const auto& p : points) {
        if (p.infinite) {
            os << "inf,nan,nan,nan\n";
            continue;
        }
        const auto z = p.z();
        os << format_number(p.modulus) << ',' << format_number(p.angle) << ',' << format_number(z.real()) << ','
           << format_number(z.imag()) << '\n';
    }
}

}  // namespace cfrac::srg
