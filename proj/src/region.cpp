#include "cfrac/region.hpp"

#include "cfrac/error.hpp"
#include "cfrac/format.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <ostream>

namespace cfrac::region {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

template <class... Ts>
struct Overloaded : Ts... {
    using Ts::operator()...;
};
template <class... Ts>
Overloaded(Ts...) -> Overloaded<Ts...>;

// Real-axis endpoints that should be zero but picked up rounding from a
// centre/radius subtraction.
double snap_zero(double endpoint, double scale) {
    return std::abs(endpoint) <= 4.0 * std::numeric_limits<double>::epsilon() * std::abs(scale) ? 0.0
                                                                                             : endpoint;
}

bool contains_infinity(const Region& r) {
    return r.is<PointAtInfinity>() || r.is<HalfPlane>() || r.is<Plane>();
}

Region invert_nonneg_interval(double a, double b) {
    // Disc with real diameter [a, b], 0 <= a <= b.
    if (b == 0.0) return Region::infinity();
    if (a == 0.0) return Region::half_plane(1.0 / b);
    return disc_from_real_interval(1.0 / b, 1.0 / a);
}

double point_segment_distance(std::complex<double> z, std::complex<double> top) {
    // Vertical segment from conj(top) to top.
    const double h = std::abs(top.imag());
    const double y = std::clamp(z.imag(), -h, h);
    return std::abs(z - std::complex<double>(top.real(), y));
}

}  // namespace

// --- Region ----------------------------------------------------------------

Region::Region(Shape shape) : shape_(std::move(shape)) {
    rhp_ = std::visit(Overloaded{
                          [](const Empty&) { return true; },
                          [](const Disc& d) { return d.center >= d.radius; },
                          [](const HalfPlane& h) { return h.side == HalfPlaneSide::MinRe && h.bound >= 0.0; },
                          [](const Plane&) { return false; },
                          [](const PointAtInfinity&) { return true; },
                          [](const Sampled& s) {
                              return std::all_of(s.points.begin(), s.points.end(),
                                                 [](auto z) { return z.real() >= 0.0; });
                          },
                      },
                      shape_);
}

Region Region::disc(double center, double radius) {
    if (!(radius >= 0.0) || !std::isfinite(center) || !std::isfinite(radius)) {
        throw Error(ErrorKind::InvalidArgument, "disc radius must be finite and non-negative");
    }
    return Region(Disc{center, radius});
}

Region Region::half_plane(double min_re) {
    if (!std::isfinite(min_re)) throw Error(ErrorKind::InvalidArgument, "half-plane bound must be finite");
    return Region(HalfPlane{min_re, HalfPlaneSide::MinRe});
}

Region Region::left_half_plane(double max_re) {
    if (!std::isfinite(max_re)) throw Error(ErrorKind::InvalidArgument, "half-plane bound must be finite");
    return Region(HalfPlane{max_re, HalfPlaneSide::MaxRe});
}

Region Region::plane() { return Region(Plane{}); }
Region Region::infinity() { return Region(PointAtInfinity{}); }

Region Region::sampled(std::vector<std::complex<double>> points, bool conservative, bool chords) {
    for (auto& z : points) z = {z.real(), std::abs(z.imag())};
    return Region(Sampled{std::move(points), conservative, chords});
}

bool Region::is_bounded() const noexcept {
    return std::isfinite(max_modulus(*this));
}

double Region::min_re() const {
    return std::visit(Overloaded{
                          [](const Empty&) { return kInf; },
                          [](const Disc& d) { return d.lower(); },
                          [](const HalfPlane& h) { return h.side == HalfPlaneSide::MinRe ? h.bound : -kInf; },
                          [](const Plane&) { return -kInf; },
                          [](const PointAtInfinity&) { return kInf; },
                          [](const Sampled& s) {
                              double m = kInf;
                              for (auto z : s.points) m = std::min(m, z.real());
                              return m;
                          },
                      },
                      shape_);
}

double Region::max_re() const {
    return std::visit(Overloaded{
                          [](const Empty&) { return -kInf; },
                          [](const Disc& d) { return d.upper(); },
                          [](const HalfPlane& h) { return h.side == HalfPlaneSide::MaxRe ? h.bound : kInf; },
                          [](const Plane&) { return kInf; },
                          [](const PointAtInfinity&) { return -kInf; },
                          [](const Sampled& s) {
                              double m = -kInf;
                              for (auto z : s.points) m = std::max(m, z.real());
                              return m;
                          },
                      },
                      shape_);
}

SrgPoint SrgPoint::from_complex(std::complex<double> z) {
    return {std::abs(z), std::abs(std::arg(z)), false};
}

// --- construction ----------------------------------------------------------

Region disc_from_real_interval(double a, double b) {
    if (!(a <= b)) throw Error(ErrorKind::InvalidArgument, "invalid interval: a > b");
    return Region::disc(0.5 * (a + b), 0.5 * (b - a));
}

// --- algebra ---------------------------------------------------------------

Region minkowski_sum(const Region& a, const Region& b) {
    if (!a.is_exact() || !b.is_exact()) {
        throw Error(ErrorKind::UnsupportedExactOp, "minkowski_sum: sampled regions are not supported");
    }
    if (a.is<PointAtInfinity>() || b.is<PointAtInfinity>()) return Region::infinity();
    if (a.is<Empty>()) return contains_infinity(b) ? Region::infinity() : Region::empty();
    if (b.is<Empty>()) return contains_infinity(a) ? Region::infinity() : Region::empty();
    if (a.is<Plane>() || b.is<Plane>()) return Region::plane();

    const auto* da = a.as<Disc>();
    const auto* db = b.as<Disc>();
    if (da && db) return Region::disc(da->center + db->center, da->radius + db->radius);

    const auto* ha = a.as<HalfPlane>();
    const auto* hb = b.as<HalfPlane>();
    if (ha && hb) {
        if (ha->side != hb->side) return Region::plane();
        return ha->side == HalfPlaneSide::MinRe ? Region::half_plane(ha->bound + hb->bound)
                                                : Region::left_half_plane(ha->bound + hb->bound);
    }
    const HalfPlane& h = ha ? *ha : *hb;
    const Disc& d = da ? *da : *db;
    return h.side == HalfPlaneSide::MinRe ? Region::half_plane(h.bound + d.lower())
                                          : Region::left_half_plane(h.bound + d.upper());
}

Region negate(const Region& a) {
    return std::visit(Overloaded{
                          [](const Empty&) { return Region::empty(); },
                          [](const Disc& d) { return Region::disc(-d.center, d.radius); },
                          [](const HalfPlane& h) {
                              return h.side == HalfPlaneSide::MinRe ? Region::left_half_plane(-h.bound)
                                                                    : Region::half_plane(-h.bound);
                          },
                          [](const Plane&) { return Region::plane(); },
                          [](const PointAtInfinity&) { return Region::infinity(); },
                          [](const Sampled& s) {
                              std::vector<std::complex<double>> pts;
                              pts.reserve(s.points.size());
                              for (auto z : s.points) pts.emplace_back(-z.real(), z.imag());
                              return Region::sampled(std::move(pts), s.conservative, s.chords);
                          },
                      },
                      a.shape());
}

Region invert(const Region& a) {
    struct Visitor {
        Region operator()(const Empty&) const { return Region::empty(); }
        Region operator()(const PointAtInfinity&) const { return Region::point(0.0); }
        Region operator()(const Plane&) const {
            throw Error(ErrorKind::NotInvertible, "invert: the plane contains 0 in its interior");
        }
        Region operator()(const Sampled&) const {
            throw Error(ErrorKind::UnsupportedExactOp, "invert: sampled regions are not supported");
        }
        Region operator()(const HalfPlane& h) const {
            if (h.side == HalfPlaneSide::MinRe) {
                if (h.bound < 0.0) throw Error(ErrorKind::NotInvertible, "invert: half-plane contains 0");
                if (h.bound == 0.0) return Region::half_plane(0.0);
                return disc_from_real_interval(0.0, 1.0 / h.bound);
            }
            if (h.bound > 0.0) throw Error(ErrorKind::NotInvertible, "invert: half-plane contains 0");
            if (h.bound == 0.0) return Region::left_half_plane(0.0);
            return disc_from_real_interval(1.0 / h.bound, 0.0);
        }
        Region operator()(const Disc& d) const {
            const double scale = std::abs(d.center) + d.radius;
            const double lo = snap_zero(d.lower(), scale);
            const double hi = snap_zero(d.upper(), scale);
            if (lo >= 0.0) return invert_nonneg_interval(lo, hi);
            if (hi <= 0.0) return negate(invert_nonneg_interval(-hi, -lo));
            throw Error(ErrorKind::NotInvertible, "invert: disc contains 0 in its interior");
        }
    };
    return std::visit(Visitor{}, a.shape());
}

Region chord_closure(const Region& a) {
    if (const auto* s = a.as<Sampled>(); s && !s->chords) {
        return Region::sampled(s->points, s->conservative, true);
    }
    return a;
}

double max_modulus(const Region& a) {
    return std::visit(Overloaded{
                          [](const Empty&) { return 0.0; },
                          [](const Disc& d) { return std::abs(d.center) + d.radius; },
                          [](const HalfPlane&) { return kInf; },
                          [](const Plane&) { return kInf; },
                          [](const PointAtInfinity&) { return kInf; },
                          [](const Sampled& s) {
                              double m = 0.0;
                              for (auto z : s.points) m = std::max(m, std::abs(z));
                              return m;
                          },
                      },
                      a.shape());
}

Region fold_continued_fraction(std::span<const Region> regions) {
    if (regions.empty()) throw Error(ErrorKind::InvalidArgument, "fold_continued_fraction: no regions");
    Region acc = regions.back();
    for (std::size_t k = regions.size() - 1; k-- > 0;) {
        Region inner;
        try {
            inner = invert(acc);
        } catch (const Error& e) {
            throw Error(ErrorKind::PropagationFailure, "SRG propagation failed inverting the region behind position " +
                                                           std::to_string(k) + " (depth " + std::to_string(k / 2) +
                                                           "): " + e.what());
        }
        acc = minkowski_sum(regions[k], chord_closure(inner));
    }
    return acc;
}

// --- properties ------------------------------------------------------------

PropertySet classify(const Region& a) {
    if (!a.is_exact()) throw Error(ErrorKind::UnsupportedExactOp, "classify: sampled region");
    PropertySet tags;
    if (a.is<Empty>()) {
        return {PropertyTag::positive(), PropertyTag::output_strict(0.0), PropertyTag::gain(0.0)};
    }
    if (const auto* d = a.as<Disc>()) {
        const double scale = std::abs(d->center) + d->radius;
        const double lo = snap_zero(d->lower(), scale);
        if (lo >= 0.0) {
            tags.push_back(PropertyTag::positive());
            if (lo > 0.0) tags.push_back(PropertyTag::input_strict(lo));
            tags.push_back(PropertyTag::output_strict(d->upper()));
        }
        tags.push_back(PropertyTag::gain(scale));
        return tags;
    }
    if (const auto* h = a.as<HalfPlane>(); h && h->side == HalfPlaneSide::MinRe && h->bound >= 0.0) {
        tags.push_back(PropertyTag::positive());
        if (h->bound > 0.0) tags.push_back(PropertyTag::input_strict(h->bound));
    }
    return tags;
}

Region region_from_property(const PropertyTag& tag) {
    if (tag.kind != PropertyKind::Positive && !(std::isfinite(tag.value) && tag.value >= 0.0)) {
        throw Error(ErrorKind::InvalidArgument, "region_from_property: parameter must be finite and >= 0");
    }
    switch (tag.kind) {
        case PropertyKind::Positive: return Region::half_plane(0.0);
        case PropertyKind::InputStrict: return Region::half_plane(tag.value);
        case PropertyKind::OutputStrict: return disc_from_real_interval(0.0, tag.value);
        case PropertyKind::Gain: return Region::disc(0.0, tag.value);
    }
    return Region::empty();
}

// --- containment -----------------------------------------------------------

double excess(const Region& a, const SrgPoint& p) {
    if (p.infinite) return contains_infinity(a) ? 0.0 : kInf;
    const std::complex<double> z = p.z();
    return std::visit(Overloaded{
                          [](const Empty&) { return kInf; },
                          [&](const Disc& d) { return std::abs(z - d.center) - d.radius; },
                          [&](const HalfPlane& h) {
                              return h.side == HalfPlaneSide::MinRe ? h.bound - z.real() : z.real() - h.bound;
                          },
                          [](const Plane&) { return -kInf; },
                          [](const PointAtInfinity&) { return kInf; },
                          [&](const Sampled& s) {
                              double best = kInf;
                              const std::complex<double> zu{z.real(), std::abs(z.imag())};
                              for (auto q : s.points) {
                                  best = std::min(best, s.chords ? point_segment_distance(zu, q) : std::abs(zu - q));
                              }
                              return best;
                          },
                      },
                      a.shape());
}

bool contains(const Region& a, const SrgPoint& p, double tol) { return excess(a, p) <= tol; }

bool contains(const Region& a, std::complex<double> z, double tol) {
    return contains(a, SrgPoint::from_complex(z), tol);
}

bool contains_region(const Region& outer, const Region& inner, double tol) {
    if (!outer.is_exact()) throw Error(ErrorKind::UnsupportedExactOp, "contains_region: sampled outer region");
    if (inner.is<Empty>()) return true;
    if (outer.is<Plane>()) return true;
    if (inner.is<PointAtInfinity>()) return contains_infinity(outer);
    if (const auto* s = inner.as<Sampled>()) {
        // Exact outer shapes are convex and symmetric, so chords come for free.
        return std::all_of(s->points.begin(), s->points.end(),
                           [&](auto z) { return contains(outer, z, tol); });
    }
    if (inner.is<Plane>()) return false;

    if (const auto* d = inner.as<Disc>()) {
        return std::visit(Overloaded{
                              [](const Empty&) { return false; },
                              [&](const Disc& o) { return std::abs(d->center - o.center) + d->radius <= o.radius + tol; },
                              [&](const HalfPlane& h) {
                                  return h.side == HalfPlaneSide::MinRe ? d->lower() >= h.bound - tol
                                                                        : d->upper() <= h.bound + tol;
                              },
                              [](const Plane&) { return true; },
                              [](const PointAtInfinity&) { return false; },
                              [](const Sampled&) { return false; },
                          },
                          outer.shape());
    }
    const auto& hi = *inner.as<HalfPlane>();
    const auto* ho = outer.as<HalfPlane>();
    if (!ho || ho->side != hi.side) return false;
    return hi.side == HalfPlaneSide::MinRe ? hi.bound >= ho->bound - tol : hi.bound <= ho->bound + tol;
}

bool approx_equal(const Region& a, const Region& b, double tol) {
    if (a.shape().index() != b.shape().index()) return false;
    if (const auto* da = a.as<Disc>()) {
        const auto& db = *b.as<Disc>();
        return std::abs(da->center - db.center) <= tol && std::abs(da->radius - db.radius) <= tol;
    }
    if (const auto* ha = a.as<HalfPlane>()) {
        const auto& hb = *b.as<HalfPlane>();
        return ha->side == hb.side && std::abs(ha->bound - hb.bound) <= tol;
    }
    if (const auto* sa = a.as<Sampled>()) {
        const auto& sb = *b.as<Sampled>();
        if (sa->points.size() != sb.points.size() || sa->chords != sb.chords) return false;
        for (std::size_t i = 0; i < sa->points.size(); ++i) {
            if (std::abs(sa->points[i] - sb.points[i]) > tol) return false;
        }
        return true;
    }
    return true;
}

// --- export ----------------------------------------------------------------

BoundarySamples sample_boundary(const Region& a, int m, double im_max) {
    if (m < 2) throw Error(ErrorKind::InvalidArgument, "sample_boundary: m must be >= 2");
    BoundarySamples out;
    if (const auto* d = a.as<Disc>()) {
        out.points.reserve(static_cast<std::size_t>(m));
        for (int k = 0; k < m; ++k) {
            const double theta = std::numbers::pi * k / (m - 1);
            // sin(pi) is not exactly zero; pin the endpoints to the real axis.
            const double im = (k == 0 || k == m - 1) ? 0.0 : d->radius * std::sin(theta);
            const double re = k == 0 ? d->upper() : (k == m - 1 ? d->lower() : d->center + d->radius * std::cos(theta));
            out.points.emplace_back(re, im);
        }
    } else if (const auto* h = a.as<HalfPlane>()) {
        out.im_window = std::make_pair(0.0, im_max);
        for (int k = 0; k < m; ++k) out.points.emplace_back(h->bound, im_max * k / (m - 1));
    } else if (const auto* s = a.as<Sampled>()) {
        out.points = s->points;
    }
    return out;
}

void write_boundary_csv(std::ostream& os, const BoundarySamples& samples) {
    if (samples.im_window) {
        os << "# im_window=" << format_number(samples.im_window->first) << ','
           << format_number(samples.im_window->second) << '\n';
    }
    os << "re,im\n";
    for (auto z : samples.points) os << format_number(z.real()) << ',' << format_number(z.imag()) << '\n';
}

std::string to_string(const Region& a) {
    return std::visit(Overloaded{
                          [](const Empty&) -> std::string { return "Empty"; },
                          [](const Disc& d) -> std::string {
                              return "Disc(c=" + format_number(d.center) + ", r=" + format_number(d.radius) + ")";
                          },
                          [](const HalfPlane& h) -> std::string {
                              return std::string(h.side == HalfPlaneSide::MinRe ? "HalfPlane(Re>=" : "HalfPlane(Re<=") +
                                     format_number(h.bound) + ")";
                          },
                          [](const Plane&) -> std::string { return "Plane"; },
                          [](const PointAtInfinity&) -> std::string { return "PointAtInfinity"; },
                          [](const Sampled& s) -> std::string {
                              return "Sampled(" + std::to_string(s.points.size()) + (s.chords ? " points, chords)" : " points)");
                          },
                      },
                      a.shape());
}

}  // namespace cfrac::region
