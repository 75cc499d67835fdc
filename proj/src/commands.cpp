#include "cfrac/commands.hpp"

#include "cfrac/baseline.hpp"
#include "cfrac/circuit_file.hpp"
#include "cfrac/format.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <cstdlib>
#include <exception>
#include <ostream>
#include <thread>

namespace cfrac::cli {

int exit_code_for(const Error& e) {
    switch (e.kind()) {
        case ErrorKind::InvalidArgument: return kExitUsage;
        case ErrorKind::Parse:
        case ErrorKind::Io: return kExitParse;
        default: return kExitNumeric;
    }
}

std::uint64_t default_seed() {
    if (const char* env = std::getenv("CFRAC_SEED")) {
        std::uint64_t v = 0;
        const char* end = env + std::char_traits<char>::length(env);
        auto [ptr, ec] = std::from_chars(env, end, v);
        if (ec == std::errc{} && ptr == end && ptr != env) return v;
    }
    return 42;
}

Reduction parse_reduction(const std::string& text) {
    if (text == "none") return {};
    const auto colon = text.find(':');
    if (colon != std::string::npos) {
        const std::string kind = text.substr(0, colon);
        const std::string num = text.substr(colon + 1);
        int r = -1;
        auto [ptr, ec] = std::from_chars(num.data(), num.data() + num.size(), r);
        if (ec == std::errc{} && ptr == num.data() + num.size() && !num.empty() && r >= 0) {
            if (kind == "units") return {Reduction::Kind::Units, r};
            if (kind == "capacitors") return {Reduction::Kind::Capacitors, r};
        }
    }
    throw Error(ErrorKind::InvalidArgument, "--reduce expects none, units:<r> or capacitors:<r>, got '" + text + "'");
}

CircuitChain apply_reduction(const CircuitChain& chain, const Reduction& red, const LumpingOptions& lump,
                             Diagnostics* diag) {
    switch (red.kind) {
        case Reduction::Kind::None: return chain;
        case Reduction::Kind::Units: return truncate_chain(chain, red.r, diag);
        case Reduction::Kind::Capacitors:
            return truncate_capacitors(chain, red.r, lump.pwl_points, lump.range_max, diag);
    }
    return chain;
}

std::optional<LatticeShape> lattice_shape(const CircuitChain& chain) {
    const auto& els = chain.elements();
    if (els.size() < 4 || els.size() % 2 != 0) return std::nullopt;
    const ShuntRC unit_shunt{1.0, 1.0};
    if (!std::holds_alternative<Short>(els[0])) return std::nullopt;
    if (const auto* p = std::get_if<ShuntRC>(&els[1]); !p || !(*p == unit_shunt)) return std::nullopt;
    const Element& series = els[2];
    for (std::size_t k = 2; k < els.size(); k += 2) {
        if (!(els[k] == series)) return std::nullopt;
        const auto* rc = std::get_if<ShuntRC>(&els[k + 1]);
        if (!rc || !(*rc == unit_shunt)) return std::nullopt;
    }
    const region::Region z = position_region(series, Orientation::Impedance);
    const auto* d = z.as<region::Disc>();
    if (!d || d->lower() < 0.0 || !(d->upper() > 0.0)) return std::nullopt;
    return LatticeShape{static_cast<int>(els.size() / 2 - 1), d->upper()};
}

// --- bounds ----------------------------------------------------------------

void cmd_bounds(const BoundsOptions& opts, std::ostream& out) {
    if (opts.n_min > opts.n_max) throw Error(ErrorKind::InvalidArgument, "--n-min must not exceed --n-max");
    if (opts.n_min < 1) throw Error(ErrorKind::InvalidArgument, "--n-min must be >= 1");
    if (opts.r < 0 || opts.n_min <= opts.r) throw Error(ErrorKind::InvalidArgument, "need n-min > r >= 0");
    const srg::BoundSeries s = srg::lambda_chain(opts.lambda, opts.n_max);
    out << "n,s,b\n";
    for (int n = opts.n_min; n <= opts.n_max; ++n) {
        const baseline::BaselineBound b = baseline::besselink_bound(std::max(n, 2), opts.r, opts.lambda);
        out << n << ',' << format_number(s.values[static_cast<std::size_t>(n - 1)]) << ',' << format_number(b.bound)
            << '\n';
    }
}

// --- simulate --------------------------------------------------------------

sim::InputFn make_input(const SimulateOptions& opts) {
    if (opts.input == "sin") return sim::sine(opts.amplitude, opts.omega);
    if (opts.input == "step") return sim::step(opts.amplitude);
    if (opts.input == "multisine") {
        sim::Rng rng(opts.seed);
        sim::Multisine m = sim::random_multisine(rng);
        for (auto& c : m.components) c.amplitude *= opts.amplitude;
        return m;
    }
    throw Error(ErrorKind::InvalidArgument, "--input expects sin, step or multisine, got '" + opts.input + "'");
}

void cmd_simulate(const CircuitChain& chain, const SimulateOptions& opts, std::ostream& out, Diagnostics* diag) {
    const sim::InputFn input = make_input(opts);
    if (!opts.compare) {
        const CircuitChain model = apply_reduction(chain, opts.reduce, opts.lumping, diag);
        const sim::Signal v = sim::simulate(model, input, opts.ic, opts.dt, opts.t_final);
        out << "t,v\n";
        for (std::size_t k = 0; k < v.size(); ++k) out << format_number(v.time(k)) << ',' << format_number(v[k]) << '\n';
        return;
    }
    if (opts.reduce.kind == Reduction::Kind::None) {
        throw Error(ErrorKind::InvalidArgument, "--compare needs --reduce units:<r> or capacitors:<r>");
    }
    const int r = opts.reduce.r;
    const CircuitChain red_srg = truncate_capacitors(chain, r, opts.lumping.pwl_points, opts.lumping.range_max, diag);
    const CircuitChain red_bt = truncate_chain(chain, r, diag);
    const sim::Signal full = sim::simulate(chain, input, opts.ic, opts.dt, opts.t_final);
    const sim::Signal a = sim::simulate(red_srg, input, opts.ic, opts.dt, opts.t_final);
    const sim::Signal b = sim::simulate(red_bt, input, opts.ic, opts.dt, opts.t_final);
    out << "t,v_full,v_red_srg,v_red_bt,err_srg,err_bt\n";
    for (std::size_t k = 0; k < full.size(); ++k) {
        out << format_number(full.time(k)) << ',' << format_number(full[k]) << ',' << format_number(a[k]) << ','
            << format_number(b[k]) << ',' << format_number(std::abs(full[k] - a[k])) << ','
            << format_number(std::abs(full[k] - b[k])) << '\n';
    }
}

// --- srg -------------------------------------------------------------------

SrgSummary srg_summary(const CircuitChain& chain, const SrgOptions& opts, Diagnostics* diag) {
    SrgSummary s;
    s.full = srg::chain_srg(chain);
    s.gain_bound = region::max_modulus(s.full.impedance);
    s.secant_gain = find_property(region::classify(s.full.impedance), PropertyKind::OutputStrict);
    s.lattice = lattice_shape(chain);
    if (s.lattice) s.lambda_n = srg::lambda_chain(s.lattice->lambda, s.lattice->units).values.back();
    if (opts.reduce.kind != Reduction::Kind::None) {
        const CircuitChain red = apply_reduction(chain, opts.reduce, opts.lumping, diag);
        s.reduced = srg::chain_srg(red);
        s.error = srg::error_region(s.full.impedance, s.reduced->impedance);
        const auto gamma_hat = find_property(region::classify(s.reduced->impedance), PropertyKind::OutputStrict);
        if (s.secant_gain && gamma_hat && *gamma_hat > 0.0) s.secant_error = srg::secant_error(*s.secant_gain, *gamma_hat, diag);
    } else {
        s.error = srg::error_region(s.full.impedance, s.full.impedance);
    }
    s.error_radius = region::max_modulus(s.error);
    return s;
}

void cmd_srg(const CircuitChain& chain, const SrgOptions& opts, std::ostream& impedance_csv,
             std::ostream& admittance_csv, std::ostream& report, Diagnostics* diag) {
    const SrgSummary s = srg_summary(chain, opts, diag);
    region::write_boundary_csv(impedance_csv, region::sample_boundary(s.full.impedance, opts.samples, opts.im_max));
    region::write_boundary_csv(admittance_csv, region::sample_boundary(s.full.admittance, opts.samples, opts.im_max));
    report << "impedance bound: " << region::to_string(s.full.impedance) << '\n';
    report << "admittance bound: " << region::to_string(s.full.admittance) << '\n';
    report << "gain bound: " << format_number(s.gain_bound) << '\n';
    report << "secant gain: " << (s.secant_gain ? format_number(*s.secant_gain) : std::string("none")) << '\n';
    if (s.lambda_n) {
        report << "lambda_n (n=" << s.lattice->units << ", lambda=" << format_number(s.lattice->lambda)
               << "): " << format_number(*s.lambda_n) << '\n';
    }
    if (s.reduced) report << "reduced impedance bound: " << region::to_string(s.reduced->impedance) << '\n';
    report << "error region: " << region::to_string(s.error) << '\n';
    report << "error disc radius: " << format_number(s.error_radius) << '\n';
    if (s.secant_error) {
        report << "secant error: " << format_number(s.secant_error->value)
               << (s.secant_error->enlarged ? " (reduced model certifies a larger secant gain)" : "") << '\n';
    }
}

// --- check ------------------------------------------------------------------

CheckResult run_check(const CircuitChain& chain, const CheckOptions& opts) {
    if (opts.pairs < 1) throw Error(ErrorKind::InvalidArgument, "--pairs must be >= 1");
    CheckResult res;
    res.certified = srg::chain_srg(chain);
    res.certified_tags = propagate_properties(chain);
    res.gain_bound = region::max_modulus(res.certified.impedance);

    sim::Rng rng(opts.seed);
    const std::size_t runs = 2 * static_cast<std::size_t>(opts.pairs);
    std::vector<sim::Multisine> inputs;
    inputs.reserve(runs);
    for (std::size_t k = 0; k < runs; ++k) inputs.push_back(sim::random_multisine(rng, opts.excitation));

    std::vector<sim::Trajectory> traj(runs);
    std::vector<std::exception_ptr> errors(runs);
    auto work = [&](std::size_t begin, std::size_t stride) {
        for (std::size_t k = begin; k < runs; k += stride) {
            try {
                traj[k].first = sim::sample(inputs[k], opts.dt, opts.t_final);
                traj[k].second = sim::simulate(chain, inputs[k], 0.0, opts.dt, opts.t_final);
            } catch (...) {
                errors[k] = std::current_exception();
            }
        }
    };
    const std::size_t workers = std::clamp<std::size_t>(opts.threads, 1, runs);
    if (workers == 1) {
        work(0, 1);
    } else {
        std::vector<std::thread> pool;
        for (std::size_t w = 0; w < workers; ++w) pool.emplace_back(work, w, workers);
        for (auto& t : pool) t.join();
    }
    for (auto& e : errors) {
        if (e) std::rethrow_exception(e);
    }

    std::vector<sim::Signal> du, dy;
    du.reserve(runs / 2);
    dy.reserve(runs / 2);
    for (std::size_t p = 0; p < runs / 2; ++p) {
        const auto& a = traj[2 * p];
        const auto& b = traj[2 * p + 1];
        du.push_back(a.first - b.first);
        dy.push_back(a.second - b.second);
        const sim::Trajectory pair[2] = {a, b};
        res.estimate = sim::merge(res.estimate, sim::estimate_properties(pair));
    }
    for (const auto& t : traj) {
        const double nu = sim::norm(t.first);
        if (nu > 0.0) res.gain_from_zero = std::max(res.gain_from_zero, sim::norm(t.second) / nu);
    }
    res.empirical = srg::empirical_srg_from_increments(du, dy);
    res.containment = srg::check_containment(res.empirical.points, res.certified.impedance, opts.tol);

    if (!res.containment.passed) {
        res.failures.push_back(std::to_string(res.containment.violations) +
                               " empirical SRG points outside the impedance bound (worst excess " +
                               format_number(res.containment.worst_excess) + ")");
    }
    const PropertySet& tags = res.certified_tags.impedance;
    if (res.estimate.pairs_used > 0) {
        if (res.estimate.lambda > res.gain_bound + opts.tol) {
            res.failures.push_back("incremental gain " + format_number(res.estimate.lambda) + " exceeds bound " +
                                   format_number(res.gain_bound));
        }
        if (has_property(tags, PropertyKind::Positive) && res.estimate.mu < -1e-6) {
            res.failures.push_back("incremental positivity violated (mu estimate " + format_number(res.estimate.mu) + ")");
        }
        if (auto mu = find_property(tags, PropertyKind::InputStrict); mu && res.estimate.mu < *mu - opts.tol) {
            res.failures.push_back("input-strict parameter " + format_number(*mu) + " not observed (estimate " +
                                   format_number(res.estimate.mu) + ")");
        }
        if (auto g = find_property(tags, PropertyKind::OutputStrict); g && res.estimate.gamma > *g + opts.tol) {
            res.failures.push_back("secant gain " + format_number(*g) + " exceeded (estimate " +
                                   format_number(res.estimate.gamma) + ")");
        }
    }
    // Zero input gives zero output here, so the incremental bound also
    // bounds the gain from zero.
    if (res.gain_from_zero > res.gain_bound + opts.tol) {
        res.failures.push_back("gain from zero " + format_number(res.gain_from_zero) + " exceeds bound " +
                               format_number(res.gain_bound));
    }
    return res;
}

void print_check(const CheckResult& r, std::ostream& os) {
    os << "impedance bound: " << region::to_string(r.certified.impedance) << '\n';
    os << "certified impedance tags: " << to_string(r.certified_tags.impedance) << '\n';
    os << "certified admittance tags: " << to_string(r.certified_tags.admittance) << '\n';
    os << "pairs used: " << r.estimate.pairs_used << ", skipped: " << r.estimate.pairs_skipped << '\n';
    for (const auto& s : r.empirical.skipped) os << "skipped " << s << '\n';
    for (const auto& w : r.containment.warnings) os << "warning: " << w << '\n';
    os << "containment: " << (r.containment.passed ? "pass" : "FAIL") << " (" << r.containment.violations << " of "
       << r.containment.checked << " outside, worst excess " << format_number(r.containment.worst_excess) << ")\n";
    os << "estimated mu: " << format_number(r.estimate.mu) << '\n';
    os << "estimated secant gain: " << format_number(r.estimate.gamma) << '\n';
    os << "incremental gain: " << format_number(r.estimate.lambda) << " (bound " << format_number(r.gain_bound) << ")\n";
    os << "gain from zero: " << format_number(r.gain_from_zero) << " (bound " << format_number(r.gain_bound) << ")\n";
    for (const auto& f : r.failures) os << "violation: " << f << '\n';
    os << (r.passed() ? "check passed" : "check FAILED") << '\n';
}

// --- truncate ----------------------------------------------------------------

void cmd_truncate(const CircuitChain& chain, const Reduction& red, const LumpingOptions& lump,
                  const std::string& out_path, Diagnostics* diag) {
    write_circuit_file(out_path, apply_reduction(chain, red, lump, diag));
}

}  // namespace cfrac::cli
