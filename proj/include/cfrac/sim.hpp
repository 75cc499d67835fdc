#pragma once

// Finite-horizon signals standing in for L2, and fixed-step RK4 simulation
// of chain circuits assembled as node-voltage ODEs.

#include "cfrac/elements.hpp"

#include <cstdint>
#include <functional>
#include <random>
#include <span>
#include <utility>
#include <variant>
#include <vector>

namespace cfrac::sim {

/// Uniformly sampled real signal on t_k = k * dt, k = 0 .. size()-1.
class Signal {
public:
    Signal() = default;
    Signal(double dt, std::vector<double> samples);

    [[nodiscard]] double dt() const noexcept { return dt_; }
    [[nodiscard]] std::size_t size() const noexcept { return samples_.size(); }
    [[nodiscard]] double operator[](std::size_t k) const { return samples_[k]; }
    [[nodiscard]] const std::vector<double>& samples() const noexcept { return samples_; }
    [[nodiscard]] double time(std::size_t k) const noexcept { return dt_ * static_cast<double>(k); }

    friend Signal operator-(const Signal& a, const Signal& b);
    friend Signal operator+(const Signal& a, const Signal& b);
    friend Signal operator*(double c, const Signal& a);

private:
    double dt_ = 1.0;
    std::vector<double> samples_;
};

/// Left-Riemann inner product dt * sum u_k y_k.
[[nodiscard]] double inner(const Signal& u, const Signal& y);
[[nodiscard]] double norm(const Signal& u);
/// acos(<u|y> / (|u| |y|)) with the cosine clamped to [-1, 1].
[[nodiscard]] double angle(const Signal& u, const Signal& y);

/// Samples at t_k = k dt for k = 0 .. round(T/dt).
using InputFn = std::function<double(double)>;
[[nodiscard]] std::size_t grid_steps(double dt, double t_final);
[[nodiscard]] Signal sample(const InputFn& f, double dt, double t_final);

// --- input library ---------------------------------------------------------

[[nodiscard]] InputFn sine(double amplitude, double omega, double phase = 0.0);
[[nodiscard]] InputFn step(double amplitude, double t0 = 0.0);

struct SineComponent {
    double amplitude = 0.0;
    double omega = 0.0;
    double phase = 0.0;
};

struct Multisine {
    std::vector<SineComponent> components;
    [[nodiscard]] double operator()(double t) const;
};

/// Reproducible generator: mt19937_64 mapped to doubles with a fixed
/// 53-bit conversion, so sequences do not depend on the standard library.
class Rng {
public:
    explicit Rng(std::uint64_t seed);
    [[nodiscard]] double uniform(double lo, double hi);
    [[nodiscard]] double log_uniform(double lo, double hi);

private:
    std::mt19937_64 engine_;
};

struct MultisineOptions {
    int components = 5;
    double omega_min = 0.05;
    double omega_max = 5.0;
    double amplitude_min = 0.1;
    double amplitude_max = 1.0;
};

[[nodiscard]] Multisine random_multisine(Rng& rng, const MultisineOptions& opts = {});

// --- simulation ------------------------------------------------------------

/// Capacitor voltages, one per capacitive node, port first.
struct SimState {
    std::vector<double> capacitor_voltages;
};

/// Either an explicit state or a scalar copied into every capacitor.
using InitialCondition = std::variant<double, SimState>;

/// Node-voltage model of a chain. Node k sits at the k-th shunt; the series
/// element between nodes carries g(v_{k-1} - v_k) with g its
/// admittance-oriented map, and the port current is injected at node 0.
class ChainOde {
public:
    [[nodiscard]] std::size_t dimension() const noexcept { return nodes_.size(); }

    /// dx/dt for state x under port current i0.
    void derivative(std::span<const double> x, double i0, std::span<double> dx) const;
    /// Port voltage R0(i0) + v_0.
    [[nodiscard]] double output(std::span<const double> x, double i0) const;

    [[nodiscard]] SimState initial_state(const InitialCondition& ic) const;

private:
    friend ChainOde assemble_ode(const CircuitChain& chain);

    struct Node {
        double conductance = 0.0;
        double capacitance = 0.0;
    };
    struct Link {
        std::size_t from = 0;
        std::ptrdiff_t to = -1;  ///< -1 is ground
        std::function<double(double)> current;
    };

    std::vector<Node> nodes_;
    std::vector<Link> links_;
    std::function<double(double)> port_drop_;
};

[[nodiscard]] ChainOde assemble_ode(const CircuitChain& chain);

/// Classical RK4 with fixed step; returns the port voltage on t_k = k dt.
[[nodiscard]] Signal simulate(const CircuitChain& chain, const InputFn& input, const InitialCondition& ic, double dt,
                              double t_final);
/// Grid input; half-step values come from cubic interpolation of the samples.
[[nodiscard]] Signal simulate(const CircuitChain& chain, const Signal& input, const InitialCondition& ic);

// --- empirical properties -------------------------------------------------

/// (input, output) trajectory.
using Trajectory = std::pair<Signal, Signal>;

struct PropertyEstimate {
    double mu = 0.0;      ///< min <du|dy> / |du|^2
    double gamma = 0.0;   ///< max |dy|^2 / <du|dy>; +inf when some <du|dy> <= 0 with dy != 0
    double lambda = 0.0;  ///< max |dy| / |du|
    std::size_t pairs_used = 0;
    std::size_t pairs_skipped = 0;
};

/// Estimates over every pair of trajectories; pairs with |du| < 1e-12 are skipped.
[[nodiscard]] PropertyEstimate estimate_properties(std::span<const Trajectory> trajectories);
[[nodiscard]] PropertyEstimate merge(const PropertyEstimate& a, const PropertyEstimate& b);

}  // namespace cfrac::sim
