#pragma once

// One-port primitives and the alternating series/parallel chain
//
//   v0 = (R0 + (G0 + (R1 + (G1 + ...)^-1)^-1)^-1)(i0)
//
// Position 2k of a chain holds the impedance R_k, position 2k+1 the
// admittance G_k. An element whose stored orientation differs from its
// position is used through its relational inverse.

#include "cfrac/error.hpp"
#include "cfrac/property.hpp"
#include "cfrac/region.hpp"

#include <complex>
#include <iosfwd>
#include <optional>
#include <span>
#include <string>
#include <variant>
#include <vector>

namespace cfrac {

enum class Orientation {
    Impedance,   ///< current -> voltage
    Admittance,  ///< voltage -> current
};

[[nodiscard]] constexpr Orientation flip(Orientation o) noexcept {
    return o == Orientation::Impedance ? Orientation::Admittance : Orientation::Impedance;
}

/// Incremental sector mu * dx^2 <= dx * dy <= lambda * dx^2.
struct SectorBound {
    double mu = 0.0;
    double lambda = 0.0;

    /// Validates 0 <= mu <= lambda.
    static SectorBound make(double mu, double lambda);

    /// Sector of the inverse map; defined only for mu > 0 (1/0 maps to +inf).
    [[nodiscard]] SectorBound inverted() const;

    friend bool operator==(const SectorBound&, const SectorBound&) = default;
};

struct StaticEval {
    double value = 0.0;
    bool extrapolated = false;
};

/// Monotone piecewise-linear map with end-slope extrapolation.
class PwlTable {
public:
    PwlTable() = default;
    /// Requires >= 2 points, strictly increasing x and non-decreasing y.
    PwlTable(std::vector<double> xs, std::vector<double> ys);

    [[nodiscard]] StaticEval eval(double x) const;
    /// Table of the inverse map (x and y swapped); needs strictly increasing y.
    [[nodiscard]] PwlTable inverse() const;

    [[nodiscard]] double min_slope() const;
    [[nodiscard]] double max_slope() const;

    [[nodiscard]] const std::vector<double>& xs() const noexcept { return xs_; }
    [[nodiscard]] const std::vector<double>& ys() const noexcept { return ys_; }
    [[nodiscard]] std::size_t size() const noexcept { return xs_.size(); }

    friend bool operator==(const PwlTable&, const PwlTable&) = default;

private:
    std::vector<double> xs_;
    std::vector<double> ys_;
};

/// `x y` per line, `#` comments and blank lines ignored.
[[nodiscard]] PwlTable read_pwl_table(std::istream& is);
void write_pwl_table(std::ostream& os, const PwlTable& table);

enum class StaticKind {
    TanhPlusId,  ///< i = tanh(v) + v, admittance orientation
    Saturation,  ///< v = clamp(i, -limit, limit), impedance orientation
    Pwl,
};

/// Static nonlinearity y = f(x) in its stored orientation.
struct StaticNL {
    StaticKind kind = StaticKind::TanhPlusId;
    Orientation orientation = Orientation::Admittance;
    SectorBound sector{1.0, 2.0};
    double limit = 1.0;  ///< Saturation only
    PwlTable table;      ///< Pwl only
    std::string source;  ///< file the table was read from, if any; not part of equality

    static StaticNL tanh_plus_id();
    static StaticNL saturation(double limit);
    /// Sector defaults to the table's slope range.
    static StaticNL pwl(PwlTable table, Orientation orientation, std::optional<SectorBound> sector = {});

    /// Natural sector of the map (slope range) in the stored orientation.
    [[nodiscard]] SectorBound intrinsic_sector() const;

    friend bool operator==(const StaticNL& a, const StaticNL& b) {
        return a.kind == b.kind && a.orientation == b.orientation && a.sector == b.sector && a.limit == b.limit &&
               a.table == b.table;
    }
};

struct LinearResistor {
    double resistance = 1.0;  ///< ohms
    friend bool operator==(const LinearResistor&, const LinearResistor&) = default;
};

/// Shunt admittance G + C d/dt.
struct ShuntRC {
    double conductance = 1.0;  ///< siemens
    double capacitance = 1.0;  ///< farads
    friend bool operator==(const ShuntRC&, const ShuntRC&) = default;
};

/// Impedance {(i, 0)}.
struct Short {
    friend bool operator==(const Short&, const Short&) = default;
};

/// Admittance {(v, 0)}.
struct Open {
    friend bool operator==(const Open&, const Open&) = default;
};

using Element = std::variant<StaticNL, LinearResistor, ShuntRC, Short, Open>;

[[nodiscard]] Orientation stored_orientation(const Element& e);
[[nodiscard]] bool is_static(const Element& e);
[[nodiscard]] std::string describe(const Element& e);

// --- static maps -----------------------------------------------------------

[[nodiscard]] StaticEval eval_static(const StaticNL& e, double x);

/// x with |f(x) - y| <= tol, by bisection on a bracket doubled out from
/// [0, sign(y)]. Throws NotInvertible when the sector has mu == 0.
[[nodiscard]] double invert_static(const StaticNL& e, double y, double tol = 1e-10);

/// Evaluate a static element in the requested orientation, inverting
/// through bisection when the stored orientation differs.
[[nodiscard]] double eval_oriented(const Element& e, Orientation want, double x, double tol = 1e-10);

// --- chains ----------------------------------------------------------------

class CircuitChain {
public:
    CircuitChain() = default;
    /// `units` defaults to the nesting depth of the element list.
    explicit CircuitChain(std::vector<Element> elements, std::optional<int> units = {},
                          std::optional<int> truncation = {});

    [[nodiscard]] const std::vector<Element>& elements() const noexcept { return elements_; }
    [[nodiscard]] std::size_t size() const noexcept { return elements_.size(); }
    [[nodiscard]] const Element& operator[](std::size_t i) const { return elements_[i]; }

    [[nodiscard]] static constexpr Orientation position_orientation(std::size_t i) noexcept {
        return i % 2 == 0 ? Orientation::Impedance : Orientation::Admittance;
    }

    /// Index k of the deepest (R_k, G_k) pair present.
    [[nodiscard]] int depth() const noexcept { return static_cast<int>((elements_.size() + 1) / 2) - 1; }
    [[nodiscard]] int units() const noexcept { return units_; }
    [[nodiscard]] std::optional<int> truncation() const noexcept { return truncation_; }

    /// Which port relation the chain denotes: i0 -> v0 or its inverse.
    [[nodiscard]] Orientation port_orientation() const noexcept { return port_; }
    [[nodiscard]] CircuitChain flipped() const;

    friend bool operator==(const CircuitChain&, const CircuitChain&) = default;

private:
    std::vector<Element> elements_;
    int units_ = 0;
    std::optional<int> truncation_;
    Orientation port_ = Orientation::Impedance;
};

/// Port shunt followed by n units of (series nonlinearity, shunt RC).
[[nodiscard]] CircuitChain make_lattice(int n, const Element& series = StaticNL::tanh_plus_id(),
                                        ShuntRC shunt = {1.0, 1.0}, ShuntRC port = {1.0, 1.0});

/// Keep every element at nesting depth <= r: R_0, G_0, ..., R_r, G_r.
/// r >= depth() returns the chain unchanged and records a warning.
[[nodiscard]] CircuitChain truncate_chain(const CircuitChain& chain, int r, Diagnostics* diag = nullptr);

struct LumpedTail {
    StaticNL element;            ///< impedance-oriented PWL through the samples
    double worst_residual = 0.0; ///< max far-end mismatch over the samples (A, or V if the tail ends in an impedance)
};

/// Reduce a purely static chain fragment (position 0 is an impedance) to a
/// single impedance v = Z(i) tabulated at `samples` currents.
[[nodiscard]] LumpedTail lump_resistive_tail(std::span<const Element> tail, std::span<const double> samples,
                                             double tol = 1e-10);

/// Symmetric grid over [-range_max, range_max]: zero plus geometrically
/// spaced magnitudes from range_max down to range_max * 1e-3. The point
/// count is rounded up to the next odd number.
[[nodiscard]] std::vector<double> lumping_grid(int points, double range_max);

/// Drop the capacitors beyond depth r and lump the remaining static tail
/// into one impedance appended at position 2r+2.
[[nodiscard]] CircuitChain truncate_capacitors(const CircuitChain& chain, int r, int pwl_points = 64,
                                               double range_max = 5.0, Diagnostics* diag = nullptr);

// --- SRG and properties of elements ---------------------------------------------

/// SRG outer bound in the element's stored orientation.
[[nodiscard]] region::Region element_region(const Element& e);
/// SRG outer bound when the element sits at a position of orientation `pos`.
[[nodiscard]] region::Region position_region(const Element& e, Orientation pos);

struct PortProperties {
    PropertySet impedance;   ///< i0 -> v0
    PropertySet admittance;  ///< v0 -> i0
};

/// Fold the sum and inversion closure rules through the chain, starting
/// from classify(position_region(e)) for every element.
[[nodiscard]] PortProperties propagate_properties(const CircuitChain& chain);

/// Continued-fraction transfer function of an all-linear chain at s;
/// nullopt when s is a pole of the port impedance.
[[nodiscard]] std::optional<std::complex<double>> lti_port_transfer(const CircuitChain& chain,
                                                                      std::complex<double> s);

}  // namespace cfrac
