#include "cfrac/elements.hpp"

#include "cfrac/format.hpp"

#include <algorithm>
#include <cmath>
#include <istream>
#include <limits>
#include <ostream>
#include <sstream>

namespace cfrac {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

// Relative slack when checking a declared sector against table slopes.
constexpr double kSectorSlack = 1e-6;

template <class F>
double bisect_monotone(F&& f, double target, double tol, const char* what) {
    // f is non-decreasing; grow a bracket from 0 by doubling, then bisect.
    double lo = 0.0;
    double flo = f(lo);
    if (std::abs(flo - target) <= tol) return lo;
    const double dir = target > flo ? 1.0 : -1.0;
    double hi = dir;
    double fhi = f(hi);
    int grow = 0;
    while ((fhi - target) * dir < 0.0) {
        lo = hi;
        flo = fhi;
        hi *= 2.0;
        fhi = f(hi);
        if (++grow > 1000 || !std::isfinite(hi) || !std::isfinite(fhi)) {
            throw Error(ErrorKind::SingularNetwork, std::string(what) + ": bracket growth failed");
        }
    }
    if (std::abs(fhi - target) <= tol) return hi;
    // Invariant: target lies between f(lo) and f(hi).
    for (int it = 0; it < 400; ++it) {
        const double mid = 0.5 * (lo + hi);
        if (mid == lo || mid == hi) break;
        const double fm = f(mid);
        if (std::abs(fm - target) <= tol) return mid;
        if ((fm - target) * dir < 0.0) {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    return 0.5 * (lo + hi);
}

void validate_element(const Element& e) {
    std::visit(
        [](const auto& x) {
            using T = std::decay_t<decltype(x)>;
            if constexpr (std::is_same_v<T, LinearResistor>) {
                if (!(x.resistance > 0.0) || !std::isfinite(x.resistance)) {
                    throw Error(ErrorKind::InvalidArgument, "linear resistor needs 0 < R < inf");
                }
            } else if constexpr (std::is_same_v<T, ShuntRC>) {
                if (!(x.conductance >= 0.0) || !(x.capacitance >= 0.0) || !std::isfinite(x.conductance) ||
                    !std::isfinite(x.capacitance) || (x.conductance == 0.0 && x.capacitance == 0.0)) {
                    throw Error(ErrorKind::InvalidArgument, "shunt RC needs G >= 0, C >= 0, not both zero");
                }
            } else if constexpr (std::is_same_v<T, StaticNL>) {
                (void)SectorBound::make(x.sector.mu, x.sector.lambda);
                if (x.kind == StaticKind::Saturation && !(x.limit > 0.0)) {
                    throw Error(ErrorKind::InvalidArgument, "saturation limit must be positive");
                }
                if (x.kind == StaticKind::Pwl && x.table.size() < 2) {
                    throw Error(ErrorKind::InvalidArgument, "PWL element needs a table");
                }
            }
        },
        e);
}

// Extended complex number for the continued-fraction evaluation.
struct ExtComplex {
    std::complex<double> value;
    bool infinite = false;
};

ExtComplex reciprocal(ExtComplex z) {
    if (z.infinite) return {0.0, false};
    if (z.value == 0.0) return {0.0, true};
    return {1.0 / z.value, false};
}

ExtComplex add(ExtComplex a, ExtComplex b) {
    if (a.infinite || b.infinite) return {0.0, true};
    return {a.value + b.value, false};
}

// Property state carried through the closure rules. A missing optional
// means "not certified"; mu may be +inf (inverse of a short).
struct PropState {
    bool positive = false;
    std::optional<double> mu;
    std::optional<double> gamma;
    std::optional<double> lambda;

    static PropState from_tags(const PropertySet& tags) {
        PropState s;
        s.positive = has_property(tags, PropertyKind::Positive);
        s.mu = find_property(tags, PropertyKind::InputStrict);
        s.gamma = find_property(tags, PropertyKind::OutputStrict);
        s.lambda = find_property(tags, PropertyKind::Gain);
        return s;
    }

    [[nodiscard]] std::optional<double> gain() const {
        if (lambda && gamma) return std::min(*lambda, *gamma);
        return lambda ? lambda : gamma;
    }

    [[nodiscard]] PropertySet to_tags() const {
        PropertySet out;
        if (positive) out.push_back(PropertyTag::positive());
        if (mu && std::isfinite(*mu) && *mu > 0.0) out.push_back(PropertyTag::input_strict(*mu));
        if (gamma && std::isfinite(*gamma)) out.push_back(PropertyTag::output_strict(*gamma));
        if (auto g = gain(); g && std::isfinite(*g)) out.push_back(PropertyTag::gain(*g));
        return out;
    }
};

// Rules 1 and 2 plus additivity of gains.
PropState sum(const PropState& a, const PropState& b) {
    PropState s;
    s.positive = a.positive && b.positive;
    if (s.positive && (a.mu || b.mu)) s.mu = a.mu.value_or(0.0) + b.mu.value_or(0.0);
    if (a.gamma && b.gamma) s.gamma = *a.gamma + *b.gamma;
    if (auto ga = a.gain(), gb = b.gain(); ga && gb) s.lambda = *ga + *gb;
    return s;
}

// Rules 3 and 4: inversion swaps input- and output-strictness.
PropState inverse(const PropState& a) {
    PropState s;
    s.positive = a.positive;
    if (a.gamma) s.mu = *a.gamma == 0.0 ? kInf : 1.0 / *a.gamma;
    if (a.mu) {
        s.gamma = std::isinf(*a.mu) ? 0.0 : 1.0 / *a.mu;
        s.lambda = s.gamma;
    }
    return s;
}

}  // namespace

// --- SectorBound -----------------------------------------------------------

SectorBound SectorBound::make(double mu, double lambda) {
    if (!(mu >= 0.0) || !(lambda >= mu) || std::isnan(lambda)) {
        throw Error(ErrorKind::InvalidArgument,
                    "sector bound needs 0 <= mu <= lambda (got " + format_number(mu) + ", " + format_number(lambda) + ")");
    }
    return {mu, lambda};
}

SectorBound SectorBound::inverted() const {
    return {lambda == 0.0 ? kInf : 1.0 / lambda, mu == 0.0 ? kInf : 1.0 / mu};
}

// --- PwlTable --------------------------------------------------------------

PwlTable::PwlTable(std::vector<double> xs, std::vector<double> ys) : xs_(std::move(xs)), ys_(std::move(ys)) {
    if (xs_.size() != ys_.size() || xs_.size() < 2) {
        throw Error(ErrorKind::InvalidArgument, "PWL table needs at least two (x, y) points");
    }
    for (std::size_t k = 0; k < xs_.size(); ++k) {
        if (!std::isfinite(xs_[k]) || !std::isfinite(ys_[k])) {
            throw Error(ErrorKind::InvalidArgument, "PWL table entries must be finite");
        }
        if (k > 0 && !(xs_[k] > xs_[k - 1])) {
            throw Error(ErrorKind::InvalidArgument, "PWL table x values must be strictly increasing");
        }
        if (k > 0 && ys_[k] < ys_[k - 1]) {
            throw Error(ErrorKind::InvalidArgument, "PWL table must be monotone (non-decreasing y)");
        }
    }
}

StaticEval PwlTable::eval(double x) const {
    const std::size_t n = xs_.size();
    std::size_t seg;
    bool extrapolated = false;
    if (x <= xs_.front()) {
        seg = 0;
        extrapolated = x < xs_.front();
    } else if (x >= xs_.back()) {
        seg = n - 2;
        extrapolated = x > xs_.back();
    } else {
        seg = static_cast<std::size_t>(std::upper_bound(xs_.begin(), xs_.end(), x) - xs_.begin()) - 1;
    }
    const double slope = (ys_[seg + 1] - ys_[seg]) / (xs_[seg + 1] - xs_[seg]);
    return {ys_[seg] + slope * (x - xs_[seg]), extrapolated};
}

PwlTable PwlTable::inverse() const {
    for (std::size_t k = 1; k < ys_.size(); ++k) {
        if (!(ys_[k] > ys_[k - 1])) {
            throw Error(ErrorKind::NotInvertible, "PWL table is not strictly increasing; no functional inverse");
        }
    }
    return PwlTable(ys_, xs_);
}

double PwlTable::min_slope() const {
    double m = kInf;
    for (std::size_t k = 1; k < xs_.size(); ++k) m = std::min(m, (ys_[k] - ys_[k - 1]) / (xs_[k] - xs_[k - 1]));
    return m;
}

double PwlTable::max_slope() const {
    double m = 0.0;
    for (std::size_t k = 1; k < xs_.size(); ++k) m = std::max(m, (ys_[k] - ys_[k - 1]) / (xs_[k] - xs_[k - 1]));
    return m;
}

PwlTable read_pwl_table(std::istream& is) {
    std::vector<double> xs, ys;
    std::string line;
    int lineno = 0;
    while (std::getline(is, line)) {
        ++lineno;
        if (auto hash = line.find('#'); hash != std::string::npos) line.erase(hash);
        std::istringstream ls(line);
        ls.imbue(std::locale::classic());
        double x, y;
        if (!(ls >> x)) {
            if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
            throw Error(ErrorKind::Parse, "PWL table line " + std::to_string(lineno) + ": malformed number");
        }
        if (!(ls >> y)) throw Error(ErrorKind::Parse, "PWL table line " + std::to_string(lineno) + ": expected `x y`");
        std::string rest;
        if (ls >> rest) throw Error(ErrorKind::Parse, "PWL table line " + std::to_string(lineno) + ": trailing text");
        xs.push_back(x);
        ys.push_back(y);
    }
    try {
        return PwlTable(std::move(xs), std::move(ys));
    } catch (const Error& e) {
        throw Error(ErrorKind::Parse, std::string("PWL table: ") + e.what());
    }
}

void write_pwl_table(std::ostream& os, const PwlTable& table) {
    os << "# x y\n";
    for (std::size_t k = 0; k < table.size(); ++k) {
        // Shortest exact form so a written table reads back bit-identical.
        os << format_roundtrip(table.xs()[k]) << ' ' << format_roundtrip(table.ys()[k]) << '\n';
    }
}

// --- StaticNL --------------------------------------------------------------

StaticNL StaticNL::tanh_plus_id() {
    return StaticNL{StaticKind::TanhPlusId, Orientation::Admittance, {1.0, 2.0}, 1.0, {}, {}};
}

StaticNL StaticNL::saturation(double limit) {
    if (!(limit > 0.0)) throw Error(ErrorKind::InvalidArgument, "saturation limit must be positive");
    return StaticNL{StaticKind::Saturation, Orientation::Impedance, {0.0, 1.0}, limit, {}, {}};
}

StaticNL StaticNL::pwl(PwlTable table, Orientation orientation, std::optional<SectorBound> sector) {
    StaticNL e{StaticKind::Pwl, orientation, {}, 1.0, std::move(table), {}};
    const SectorBound natural = e.intrinsic_sector();
    if (sector) {
        const double slack = kSectorSlack * std::max(1.0, natural.lambda);
        if (sector->mu > natural.mu + slack || sector->lambda < natural.lambda - slack) {
            throw Error(ErrorKind::InvalidArgument, "declared sector [" + format_number(sector->mu) + ", " +
                                                        format_number(sector->lambda) +
                                                        "] does not contain the table slopes [" +
                                                        format_number(natural.mu) + ", " +
                                                        format_number(natural.lambda) + "]");
        }
        e.sector = SectorBound::make(sector->mu, sector->lambda);
    } else {
        e.sector = natural;
    }
    return e;
}

SectorBound StaticNL::intrinsic_sector() const {
    switch (kind) {
        case StaticKind::TanhPlusId: return {1.0, 2.0};
        case StaticKind::Saturation: return {0.0, 1.0};
        case StaticKind::Pwl: return {std::max(0.0, table.min_slope()), table.max_slope()};
    }
    return {};
}

Orientation stored_orientation(const Element& e) {
    return std::visit(
        [](const auto& x) {
            using T = std::decay_t<decltype(x)>;
            if constexpr (std::is_same_v<T, StaticNL>) return x.orientation;
            if constexpr (std::is_same_v<T, LinearResistor> || std::is_same_v<T, Short>) return Orientation::Impedance;
            return Orientation::Admittance;
        },
        e);
}

bool is_static(const Element& e) {
    if (const auto* rc = std::get_if<ShuntRC>(&e)) return rc->capacitance == 0.0;
    return true;
}

std::string describe(const Element& e) {
    return std::visit(
        [](const auto& x) -> std::string {
            using T = std::decay_t<decltype(x)>;
            if constexpr (std::is_same_v<T, StaticNL>) {
                const char* kind = x.kind == StaticKind::TanhPlusId ? "TANH_PLUS_ID"
                                   : x.kind == StaticKind::Saturation ? "SATURATION"
                                                                      : "PWL";
                return std::string("StaticNL(") + kind + ", " +
                       (x.orientation == Orientation::Impedance ? "impedance" : "admittance") + ", sector [" +
                       format_number(x.sector.mu) + ", " + format_number(x.sector.lambda) + "])";
            } else if constexpr (std::is_same_v<T, LinearResistor>) {
                return "LinearResistor(" + format_number(x.resistance) + ")";
            } else if constexpr (std::is_same_v<T, ShuntRC>) {
                return "ShuntRC(G=" + format_number(x.conductance) + ", C=" + format_number(x.capacitance) + ")";
            } else if constexpr (std::is_same_v<T, Short>) {
                return "Short";
            } else {
                return "Open";
            }
        },
        e);
}

// --- static maps -----------------------------------------------------------

StaticEval eval_static(const StaticNL& e, double x) {
    switch (e.kind) {
        case StaticKind::TanhPlusId: return {std::tanh(x) + x, false};
        case StaticKind::Saturation: return {std::clamp(x, -e.limit, e.limit), false};
        case StaticKind::Pwl: return e.table.eval(x);
    }
    return {};
}

double invert_static(const StaticNL& e, double y, double tol) {
    if (!(e.sector.mu > 0.0)) {
        throw Error(ErrorKind::NotInvertible, "invert_static: map is not strictly increasing (mu = 0)");
    }
    return bisect_monotone([&](double x) { return eval_static(e, x).value; }, y, tol, "invert_static");
}

double eval_oriented(const Element& e, Orientation want, double x, double tol) {
    return std::visit(
        [&](const auto& el) -> double {
            using T = std::decay_t<decltype(el)>;
            if constexpr (std::is_same_v<T, StaticNL>) {
                return want == el.orientation ? eval_static(el, x).value : invert_static(el, x, tol);
            } else if constexpr (std::is_same_v<T, LinearResistor>) {
                return want == Orientation::Impedance ? el.resistance * x : x / el.resistance;
            } else if constexpr (std::is_same_v<T, ShuntRC>) {
                if (el.capacitance != 0.0) {
                    throw Error(ErrorKind::UnsupportedLumping, "shunt RC with a capacitor is not a static map");
                }
                if (want == Orientation::Admittance) return el.conductance * x;
                return x / el.conductance;
            } else if constexpr (std::is_same_v<T, Short>) {
                if (want == Orientation::Impedance) return 0.0;
                throw Error(ErrorKind::SingularNetwork, "short circuit has no admittance map");
            } else {
                if (want == Orientation::Admittance) return 0.0;
                throw Error(ErrorKind::SingularNetwork, "open circuit has no impedance map");
            }
        },
        e);
}

// --- chains ----------------------------------------------------------------

CircuitChain::CircuitChain(std::vector<Element> elements, std::optional<int> units, std::optional<int> truncation)
    : elements_(std::move(elements)), truncation_(truncation) {
    if (elements_.empty()) throw Error(ErrorKind::InvalidArgument, "circuit chain needs at least one element");
    for (const auto& e : elements_) validate_element(e);
    units_ = units.value_or(depth());
}

CircuitChain CircuitChain::flipped() const {
    CircuitChain out = *this;
    out.port_ = flip(port_);
    return out;
}

CircuitChain make_lattice(int n, const Element& series, ShuntRC shunt, ShuntRC port) {
    if (n < 0) throw Error(ErrorKind::InvalidArgument, "lattice length must be >= 0");
    std::vector<Element> els;
    els.reserve(2 * static_cast<std::size_t>(n) + 2);
    els.emplace_back(Short{});
    els.emplace_back(port);
    for (int k = 0; k < n; ++k) {
        els.push_back(series);
        els.emplace_back(shunt);
    }
    return CircuitChain(std::move(els), n);
}

CircuitChain truncate_chain(const CircuitChain& chain, int r, Diagnostics* diag) {
    if (r < 0) throw Error(ErrorKind::InvalidArgument, "truncation depth must be >= 0");
    if (r >= chain.depth()) {
        if (diag) diag->warn("truncate_chain: r = " + std::to_string(r) + " >= depth " + std::to_string(chain.depth()) +
                             "; chain returned unchanged");
        return chain;
    }
    std::vector<Element> kept(chain.elements().begin(), chain.elements().begin() + 2 * r + 2);
    CircuitChain out(std::move(kept), chain.units(), r);
    return chain.port_orientation() == Orientation::Impedance ? out : out.flipped();
}

std::vector<double> lumping_grid(int points, double range_max) {
    if (points < 3) throw Error(ErrorKind::InvalidArgument, "lumping grid needs at least 3 points");
    if (!(range_max > 0.0)) throw Error(ErrorKind::InvalidArgument, "lumping range must be positive");
    const int half = points / 2;
    std::vector<double> mags;
    mags.reserve(static_cast<std::size_t>(half));
    for (int k = 0; k < half; ++k) {
        const double frac = half == 1 ? 0.0 : static_cast<double>(k) / (half - 1);
        mags.push_back(range_max * std::pow(1e-3, frac));
    }
    std::vector<double> grid;
    grid.reserve(2 * mags.size() + 1);
    for (double m : mags) grid.push_back(-m);
    grid.push_back(0.0);
    for (auto it = mags.rbegin(); it != mags.rend(); ++it) grid.push_back(*it);
    return grid;
}

LumpedTail lump_resistive_tail(std::span<const Element> tail_in, std::span<const double> samples, double tol) {
    std::vector<Element> tail(tail_in.begin(), tail_in.end());
    // A trailing open admittance disconnects the impedance in front of it.
    while (!tail.empty() && CircuitChain::position_orientation(tail.size() - 1) == Orientation::Admittance &&
           std::holds_alternative<Open>(tail.back())) {
        tail.pop_back();
        tail.pop_back();
    }
    if (tail.empty()) throw Error(ErrorKind::SingularNetwork, "lump_resistive_tail: tail is an open circuit");
    for (std::size_t k = 0; k < tail.size(); ++k) {
        if (!is_static(tail[k])) {
            throw Error(ErrorKind::UnsupportedLumping,
                        "lump_resistive_tail: dynamic element " + describe(tail[k]) + " in the tail");
        }
    }
    if (samples.size() < 2) throw Error(ErrorKind::InvalidArgument, "lump_resistive_tail: need >= 2 samples");

    // Inner solves (inverse maps) run well below the outer residual so
    // their error does not accumulate along the ladder.
    const double inner_tol = std::min(tol, 1e-13);

    // Shoot from the port: for a trial port voltage the sweep inward fixes
    // every node voltage and branch current, and the far-end mismatch is
    // non-decreasing in the trial voltage. Shooting the other way amplifies
    // rounding by the ladder's attenuation and is useless for long tails.
    const std::size_t last = tail.size() - 1;
    constexpr double blow_up = 1e150;
    auto mismatch = [&](double port_current, double port_voltage) {
        double current = port_current;
        double voltage = port_voltage;
        for (std::size_t k = 0; k <= last; ++k) {
            if (CircuitChain::position_orientation(k) == Orientation::Impedance) {
                voltage -= eval_oriented(tail[k], Orientation::Impedance, current, inner_tol);
            } else {
                current -= eval_oriented(tail[k], Orientation::Admittance, voltage, inner_tol);
            }
            // Past this point the trial voltage is clearly off; the sign of
            // the runaway tells which way.
            if (std::abs(voltage) > blow_up || std::abs(current) > blow_up) {
                return (voltage > blow_up || current < -blow_up) ? blow_up : -blow_up;
            }
        }
        return CircuitChain::position_orientation(last) == Orientation::Impedance ? voltage : -current;
    };

    std::vector<double> xs(samples.begin(), samples.end());
    std::sort(xs.begin(), xs.end());
    std::vector<double> ys;
    ys.reserve(xs.size());
    double worst = 0.0;
    for (double target : xs) {
        const double v =
            bisect_monotone([&](double q) { return mismatch(target, q); }, 0.0, tol, "lump_resistive_tail");
        worst = std::max(worst, std::abs(mismatch(target, v)));
        ys.push_back(v);
    }
    // Residual noise can break monotonicity at flat spots; enforce it.
    for (std::size_t k = 1; k < ys.size(); ++k) ys[k] = std::max(ys[k], ys[k - 1]);

    // Certified sector: fold the element sectors through the tail.
    std::vector<region::Region> regions;
    regions.reserve(tail.size());
    for (std::size_t k = 0; k < tail.size(); ++k) {
        regions.push_back(position_region(tail[k], CircuitChain::position_orientation(k)));
    }
    const region::Region folded = region::fold_continued_fraction(regions);
    PwlTable table(std::move(xs), std::move(ys));
    std::optional<SectorBound> sector;
    if (const auto* d = folded.as<region::Disc>(); d && folded.in_closed_right_half_plane()) {
        sector = SectorBound{std::max(0.0, d->lower()), d->upper()};
    }
    LumpedTail out{StaticNL::pwl(std::move(table), Orientation::Impedance), worst};
    if (sector) {
        const SectorBound natural = out.element.intrinsic_sector();
        // Keep the folded bound whenever it covers the tabulated slopes.
        const double slack = kSectorSlack * std::max(1.0, natural.lambda);
        if (sector->mu <= natural.mu + slack && sector->lambda >= natural.lambda - slack) out.element.sector = *sector;
    }
    return out;
}

CircuitChain truncate_capacitors(const CircuitChain& chain, int r, int pwl_points, double range_max, Diagnostics* diag) {
    if (r < 0) throw Error(ErrorKind::InvalidArgument, "truncation depth must be >= 0");
    const std::size_t keep = 2 * static_cast<std::size_t>(r) + 2;
    if (keep >= chain.size()) {
        if (diag) diag->warn("truncate_capacitors: nothing beyond depth " + std::to_string(r) + "; chain returned unchanged");
        return chain;
    }
    std::vector<Element> tail;
    for (std::size_t k = keep; k < chain.size(); ++k) {
        const Element& e = chain[k];
        if (const auto* rc = std::get_if<ShuntRC>(&e)) {
            if (rc->conductance > 0.0) {
                tail.emplace_back(LinearResistor{1.0 / rc->conductance});
            } else {
                tail.emplace_back(Open{});
            }
        } else {
            tail.push_back(e);
        }
    }
    LumpedTail lumped = lump_resistive_tail(tail, lumping_grid(pwl_points, range_max));
    std::vector<Element> out(chain.elements().begin(), chain.elements().begin() + static_cast<std::ptrdiff_t>(keep));
    const SectorBound& s = lumped.element.sector;
    if (s.lambda > 0.0 && s.lambda - s.mu <= 1e-12 * s.lambda) {
        out.emplace_back(LinearResistor{s.lambda});
    } else {
        out.emplace_back(std::move(lumped.element));
    }
    CircuitChain reduced(std::move(out), chain.units(), r);
    return chain.port_orientation() == Orientation::Impedance ? reduced : reduced.flipped();
}

// --- regions and properties ------------------------------------------------

region::Region element_region(const Element& e) {
    using region::Region;
    return std::visit(
        [](const auto& x) -> Region {
            using T = std::decay_t<decltype(x)>;
            if constexpr (std::is_same_v<T, StaticNL>) {
                return region::disc_from_real_interval(x.sector.mu, x.sector.lambda);
            } else if constexpr (std::is_same_v<T, LinearResistor>) {
                return Region::point(x.resistance);
            } else if constexpr (std::is_same_v<T, ShuntRC>) {
                return x.capacitance > 0.0 ? Region::half_plane(x.conductance) : Region::point(x.conductance);
            } else {
                return Region::point(0.0);
            }
        },
        e);
}

region::Region position_region(const Element& e, Orientation pos) {
    region::Region r = element_region(e);
    return stored_orientation(e) == pos ? r : region::invert(r);
}

PortProperties propagate_properties(const CircuitChain& chain) {
    const auto& els = chain.elements();
    const std::size_t last = els.size() - 1;
    auto tags_at = [&](std::size_t k) {
        return PropState::from_tags(region::classify(position_region(els[k], CircuitChain::position_orientation(k))));
    };
    PropState acc = tags_at(last);
    for (std::size_t k = last; k-- > 0;) acc = sum(tags_at(k), inverse(acc));
    return {acc.to_tags(), inverse(acc).to_tags()};
}

std::optional<std::complex<double>> lti_port_transfer(const CircuitChain& chain, std::complex<double> s) {
    auto value_at = [&](std::size_t k) -> ExtComplex {
        const Element& e = chain[k];
        ExtComplex own = std::visit(
            [&](const auto& x) -> ExtComplex {
                using T = std::decay_t<decltype(x)>;
                if constexpr (std::is_same_v<T, StaticNL>) {
                    throw Error(ErrorKind::InvalidArgument, "lti_port_transfer: nonlinear element " + describe(x));
                } else if constexpr (std::is_same_v<T, LinearResistor>) {
                    return {x.resistance, false};
                } else if constexpr (std::is_same_v<T, ShuntRC>) {
                    return {x.conductance + x.capacitance * s, false};
                } else {
                    return {0.0, false};
                }
            },
            e);
        return stored_orientation(e) == CircuitChain::position_orientation(k) ? own : reciprocal(own);
    };
    const std::size_t last = chain.size() - 1;
    ExtComplex acc = value_at(last);
    for (std::size_t k = last; k-- > 0;) acc = add(value_at(k), reciprocal(acc));
    if (acc.infinite) return std::nullopt;
    return acc.value;
}

}  // namespace cfrac
