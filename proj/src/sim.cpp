#include "cfrac/sim.hpp"

#include "cfrac/format.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>

namespace cfrac::sim {

namespace {

void require_compatible(const Signal& a, const Signal& b) {
    if (a.size() != b.size() || a.dt() != b.dt()) {
        throw Error(ErrorKind::IncompatibleSignals, "signals live on different grids (" + std::to_string(a.size()) +
                                                        " vs " + std::to_string(b.size()) + " samples)");
    }
}

// Admittance-oriented current of a series element as a function of the
// voltage across it.
std::function<double(double)> series_current(const Element& e, std::size_t pos) {
    return std::visit(
        [pos](const auto& x) -> std::function<double(double)> {
            using T = std::decay_t<decltype(x)>;
            if constexpr (std::is_same_v<T, StaticNL>) {
                if (x.orientation == Orientation::Admittance) {
                    return [x](double v) { return eval_static(x, v).value; };
                }
                if (x.kind == StaticKind::Pwl) {
                    try {
                        PwlTable inv = x.table.inverse();
                        return [inv = std::move(inv)](double v) { return inv.eval(v).value; };
                    } catch (const Error& err) {
                        throw Error(ErrorKind::Assembly, "position " + std::to_string(pos) + ": " + err.what());
                    }
                }
                if (!(x.sector.mu > 0.0)) {
                    throw Error(ErrorKind::Assembly, "position " + std::to_string(pos) + ": impedance " + describe(x) +
                                                         " has no single-valued admittance map");
                }
                return [x](double v) { return invert_static(x, v, 1e-13); };
            } else if constexpr (std::is_same_v<T, LinearResistor>) {
                const double g = 1.0 / x.resistance;
                return [g](double v) { return g * v; };
            } else {
                throw Error(ErrorKind::Assembly,
                            "position " + std::to_string(pos) + ": " + describe(x) + " cannot be a series element");
            }
        },
        e);
}

std::function<double(double)> port_drop(const Element& e) {
    return std::visit(
        [](const auto& x) -> std::function<double(double)> {
            using T = std::decay_t<decltype(x)>;
            if constexpr (std::is_same_v<T, Short>) {
                return [](double) { return 0.0; };
            } else if constexpr (std::is_same_v<T, LinearResistor>) {
                const double r = x.resistance;
                return [r](double i) { return r * i; };
            } else if constexpr (std::is_same_v<T, StaticNL>) {
                if (x.orientation == Orientation::Impedance) return [x](double i) { return eval_static(x, i).value; };
                if (!(x.sector.mu > 0.0)) {
                    throw Error(ErrorKind::Assembly, "port element " + describe(x) + " has no impedance map");
                }
                return [x](double i) { return invert_static(x, i, 1e-13); };
            } else {
                throw Error(ErrorKind::Assembly, "port element " + describe(x) + " is not a series impedance");
            }
        },
        e);
}

}  // namespace

// --- Signal ----------------------------------------------------------------

Signal::Signal(double dt, std::vector<double> samples) : dt_(dt), samples_(std::move(samples)) {
    if (!(dt_ > 0.0) || !std::isfinite(dt_)) throw Error(ErrorKind::InvalidArgument, "signal dt must be positive");
    if (samples_.empty()) throw Error(ErrorKind::InvalidArgument, "signal must have at least one sample");
    for (double v : samples_) {
        if (!std::isfinite(v)) throw Error(ErrorKind::InvalidArgument, "signal samples must be finite");
    }
}

Signal operator-(const Signal& a, const Signal& b) {
    require_compatible(a, b);
    std::vector<double> out(a.size());
    for (std::size_t k = 0; k < out.size(); ++k) out[k] = a[k] - b[k];
    return Signal(a.dt(), std::move(out));
}

Signal operator+(const Signal& a, const Signal& b) {
    require_compatible(a, b);
    std::vector<double> out(a.size());
    for (std::size_t k = 0; k < out.size(); ++k) out[k] = a[k] + b[k];
    return Signal(a.dt(), std::move(out));
}

Signal operator*(double c, const Signal& a) {
    std::vector<double> out(a.samples());
    for (double& v : out) v *= c;
    return Signal(a.dt(), std::move(out));
}

double inner(const Signal& u, const Signal& y) {
    require_compatible(u, y);
    double acc = 0.0;
    for (std::size_t k = 0; k < u.size(); ++k) acc += u[k] * y[k];
    return u.dt() * acc;
}

double norm(const Signal& u) { return std::sqrt(inner(u, u)); }

double angle(const Signal& u, const Signal& y) {
    const double nu = norm(u);
    const double ny = norm(y);
    if (!(nu * ny > 0.0)) throw Error(ErrorKind::UndefinedAngle, "angle: zero-norm operand");
    return std::acos(std::clamp(inner(u, y) / (nu * ny), -1.0, 1.0));
}

std::size_t grid_steps(double dt, double t_final) {
    if (!(dt > 0.0) || !(t_final >= 0.0)) throw Error(ErrorKind::InvalidArgument, "need dt > 0 and T >= 0");
    const double ratio = t_final / dt;
    const double steps = std::round(ratio);
    if (std::abs(ratio - steps) > 1e-6 * std::max(1.0, ratio)) {
        throw Error(ErrorKind::InvalidArgument, "dt = " + format_number(dt) + " does not divide T = " + format_number(t_final));
    }
    return static_cast<std::size_t>(steps);
}

Signal sample(const InputFn& f, double dt, double t_final) {
    const std::size_t n = grid_steps(dt, t_final);
    std::vector<double> out(n + 1);
    for (std::size_t k = 0; k <= n; ++k) out[k] = f(dt * static_cast<double>(k));
    return Signal(dt, std::move(out));
}

// --- input library ---------------------------------------------------------

InputFn sine(double amplitude, double omega, double phase) {
    return [=](double t) { return amplitude * std::sin(omega * t + phase); };
}

InputFn step(double amplitude, double t0) {
    return [=](double t) { return t >= t0 ? amplitude : 0.0; };
}

double Multisine::operator()(double t) const {
    double acc = 0.0;
    for (const auto& c : components) acc += c.amplitude * std::sin(c.omega * t + c.phase);
    return acc;
}

Rng::Rng(std::uint64_t seed) : engine_(seed) {}

double Rng::uniform(double lo, double hi) {
    const double u = static_cast<double>(engine_() >> 11) * 0x1.0p-53;
    return lo + (hi - lo) * u;
}

double Rng::log_uniform(double lo, double hi) { return std::exp(uniform(std::log(lo), std::log(hi))); }

Multisine random_multisine(Rng& rng, const MultisineOptions& opts) {
    Multisine m;
    m.components.reserve(static_cast<std::size_t>(opts.components));
    for (int k = 0; k < opts.components; ++k) {
        SineComponent c;
        c.omega = rng.log_uniform(opts.omega_min, opts.omega_max);
        c.amplitude = rng.uniform(opts.amplitude_min, opts.amplitude_max);
        c.phase = rng.uniform(0.0, 2.0 * std::numbers::pi);
        m.components.push_back(c);
    }
    return m;
}

// --- ODE assembly ----------------------------------------------------------

ChainOde assemble_ode(const CircuitChain& chain) {
    std::vector<Element> els = chain.elements();
    // Trailing open admittances isolate the impedance in front of them.
    while (els.size() >= 2 && els.size() % 2 == 0 && std::holds_alternative<Open>(els.back())) {
        els.pop_back();
        els.pop_back();
    }
    if (els.empty()) throw Error(ErrorKind::Assembly, "port is an open circuit");

    ChainOde ode;
    ode.port_drop_ = port_drop(els[0]);

    // Series elements waiting for the node on their far side.
    std::vector<std::pair<std::size_t, std::function<double(double)>>> pending;
    std::ptrdiff_t current_node = -1;
    for (std::size_t k = 1; k < els.size(); ++k) {
        const Element& e = els[k];
        if (CircuitChain::position_orientation(k) == Orientation::Admittance) {
            const bool merge = current_node >= 0 && k >= 2 && std::holds_alternative<Short>(els[k - 1]);
            if (!merge) {
                ode.nodes_.push_back({});
                const auto node = static_cast<std::ptrdiff_t>(ode.nodes_.size() - 1);
                for (auto& [from, fn] : pending) ode.links_.push_back({from, node, std::move(fn)});
                pending.clear();
                current_node = node;
            }
            auto& node = ode.nodes_[static_cast<std::size_t>(current_node)];
            if (const auto* rc = std::get_if<ShuntRC>(&e)) {
                node.conductance += rc->conductance;
                node.capacitance += rc->capacitance;
            } else if (!std::holds_alternative<Open>(e)) {
                throw Error(ErrorKind::Assembly, "position " + std::to_string(k) + ": shunt " + describe(e) +
                                                     " is not a ShuntRC");
            }
        } else {
            if (std::holds_alternative<Open>(e)) continue;
            if (std::holds_alternative<Short>(e)) {
                if (k + 1 < els.size()) continue;  // merged with the next shunt
                throw Error(ErrorKind::Assembly, "a short circuit at the far end shorts the network");
            }
            if (current_node < 0) {
                throw Error(ErrorKind::Assembly, "position " + std::to_string(k) + ": series element before the first node");
            }
            pending.emplace_back(static_cast<std::size_t>(current_node), series_current(e, k));
        }
    }
    // The innermost impedance closes to ground.
    for (auto& [from, fn] : pending) ode.links_.push_back({from, -1, std::move(fn)});

    for (std::size_t j = 0; j < ode.nodes_.size(); ++j) {
        if (!(ode.nodes_[j].capacitance > 0.0)) {
            throw Error(ErrorKind::Assembly, "node " + std::to_string(j) + " has no capacitor (algebraic node)");
        }
    }
    return ode;
}

void ChainOde::derivative(std::span<const double> x, double i0, std::span<double> dx) const {
    for (std::size_t j = 0; j < nodes_.size(); ++j) dx[j] = -nodes_[j].conductance * x[j];
    if (!nodes_.empty()) dx[0] += i0;
    for (const auto& link : links_) {
        const double v_to = link.to < 0 ? 0.0 : x[static_cast<std::size_t>(link.to)];
        const double i = link.current(x[link.from] - v_to);
        dx[link.from] -= i;
        if (link.to >= 0) dx[static_cast<std::size_t>(link.to)] += i;
    }
    for (std::size_t j = 0; j < nodes_.size(); ++j) dx[j] /= nodes_[j].capacitance;
}

double ChainOde::output(std::span<const double> x, double i0) const {
    return port_drop_(i0) + (nodes_.empty() ? 0.0 : x[0]);
}

SimState ChainOde::initial_state(const InitialCondition& ic) const {
    if (const auto* fill = std::get_if<double>(&ic)) {
        return {std::vector<double>(nodes_.size(), *fill)};
    }
    const auto& s = std::get<SimState>(ic);
    if (s.capacitor_voltages.size() != nodes_.size()) {
        throw Error(ErrorKind::InvalidArgument, "initial state has " + std::to_string(s.capacitor_voltages.size()) +
                                                    " entries, model has " + std::to_string(nodes_.size()));
    }
    return s;
}

// --- simulation ------------------------------------------------------------

namespace {

template <class InputAt, class InputHalf>
Signal integrate(const ChainOde& ode, std::size_t steps, double dt, const InitialCondition& ic, InputAt&& input_at,
                 InputHalf&& input_half) {
    const std::size_t n = ode.dimension();
    std::vector<double> x = ode.initial_state(ic).capacitor_voltages;
    std::vector<double> k1(n), k2(n), k3(n), k4(n), tmp(n);
    std::vector<double> out(steps + 1);
    out[0] = ode.output(x, input_at(0));
    for (std::size_t s = 0; s < steps; ++s) {
        const double u0 = input_at(s);
        const double uh = input_half(s);
        const double u1 = input_at(s + 1);
        ode.derivative(x, u0, k1);
        for (std::size_t j = 0; j < n; ++j) tmp[j] = x[j] + 0.5 * dt * k1[j];
        ode.derivative(tmp, uh, k2);
        for (std::size_t j = 0; j < n; ++j) tmp[j] = x[j] + 0.5 * dt * k2[j];
        ode.derivative(tmp, uh, k3);
        for (std::size_t j = 0; j < n; ++j) tmp[j] = x[j] + dt * k3[j];
        ode.derivative(tmp, u1, k4);
        for (std::size_t j = 0; j < n; ++j) {
            x[j] += dt / 6.0 * (k1[j] + 2.0 * k2[j] + 2.0 * k3[j] + k4[j]);
            if (!std::isfinite(x[j])) {
                throw Error(ErrorKind::Divergence,
                            "simulation diverged at t = " + format_number(dt * static_cast<double>(s + 1)));
            }
        }
        out[s + 1] = ode.output(x, u1);
        if (!std::isfinite(out[s + 1])) {
            throw Error(ErrorKind::Divergence, "simulation diverged at t = " + format_number(dt * static_cast<double>(s + 1)));
        }
    }
    return Signal(dt, std::move(out));
}

}  // namespace

Signal simulate(const CircuitChain& chain, const InputFn& input, const InitialCondition& ic, double dt, double t_final) {
    const std::size_t steps = grid_steps(dt, t_final);
    const ChainOde ode = assemble_ode(chain);
    return integrate(
        ode, steps, dt, ic, [&](std::size_t k) { return input(dt * static_cast<double>(k)); },
        [&](std::size_t k) { return input(dt * (static_cast<double>(k) + 0.5)); });
}

Signal simulate(const CircuitChain& chain, const Signal& input, const InitialCondition& ic) {
    const std::size_t steps = input.size() - 1;
    const ChainOde ode = assemble_ode(chain);
    const auto& u = input.samples();
    // Cubic Lagrange interpolation at k + 1/2 keeps the forcing error at
    // fourth order; shorter signals fall back to the linear midpoint.
    auto half = [&](std::size_t k) {
        const std::size_t n = u.size();
        if (n < 4) return 0.5 * (u[k] + u[k + 1]);
        if (k == 0) return 0.3125 * u[0] + 0.9375 * u[1] - 0.3125 * u[2] + 0.0625 * u[3];
        if (k + 2 >= n) return 0.0625 * u[n - 4] - 0.3125 * u[n - 3] + 0.9375 * u[n - 2] + 0.3125 * u[n - 1];
        return (-u[k - 1] + 9.0 * u[k] + 9.0 * u[k + 1] - u[k + 2]) / 16.0;
    };
    return integrate(ode, steps, input.dt(), ic, [&](std::size_t k) { return u[k]; }, half);
}

// --- empirical properties -------------------------------------------------

PropertyEstimate estimate_properties(std::span<const Trajectory> trajectories) {
    if (trajectories.size() < 2) throw Error(ErrorKind::InvalidArgument, "estimate_properties needs >= 2 trajectories");
    PropertyEstimate est;
    est.mu = std::numeric_limits<double>::infinity();
    for (std::size_t a = 0; a < trajectories.size(); ++a) {
        for (std::size_t b = a + 1; b < trajectories.size(); ++b) {
            const Signal du = trajectories[a].first - trajectories[b].first;
            const Signal dy = trajectories[a].second - trajectories[b].second;
            const double nu2 = inner(du, du);
            if (std::sqrt(nu2) < 1e-12) {
                ++est.pairs_skipped;
                continue;
            }
            const double ip = inner(du, dy);
            const double ny2 = inner(dy, dy);
            est.mu = std::min(est.mu, ip / nu2);
            est.lambda = std::max(est.lambda, std::sqrt(ny2 / nu2));
            if (ny2 > 0.0) {
                est.gamma = ip > 0.0 ? std::max(est.gamma, ny2 / ip) : std::numeric_limits<double>::infinity();
            }
            ++est.pairs_used;
        }
    }
    return est;
}

PropertyEstimate merge(const PropertyEstimate& a, const PropertyEstimate& b) {
    if (a.pairs_used == 0) return {b.mu, b.gamma, b.lambda, b.pairs_used, a.pairs_skipped + b.pairs_skipped};
    if (b.pairs_used == 0) return {a.mu, a.gamma, a.lambda, a.pairs_used, a.pairs_skipped + b.pairs_skipped};
    return {std::min(a.mu, b.mu), std::max(a.gamma, b.gamma), std::max(a.lambda, b.lambda),
            a.pairs_used + b.pairs_used, a.pairs_skipped + b.pairs_skipped};
}

}  // namespace cfrac::sim
