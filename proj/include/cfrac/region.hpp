#pragma once

// Exact complex-plane regions used as outer bounds for Scaled Relative
// Graphs. Every region is symmetric about the real axis. The exact shapes
// (real-centred discs and half-planes) are closed under the sum, negation
// and inversion rules needed for series/parallel chains; sampled regions
// exist only for export and empirical overlays.

#include "cfrac/property.hpp"

#include <complex>
#include <iosfwd>
#include <optional>
#include <span>
#include <string>
#include <utility>
#include <variant>
#include <vector>

namespace cfrac::region {

/// Closed disc with real centre.
struct Disc {
    double center = 0.0;
    double radius = 0.0;

    [[nodiscard]] double lower() const noexcept { return center - radius; }
    [[nodiscard]] double upper() const noexcept { return center + radius; }
    friend bool operator==(const Disc&, const Disc&) = default;
};

enum class HalfPlaneSide {
    MinRe,  ///< {z : Re z >= bound}
    MaxRe,  ///< {z : Re z <= bound}, the image of a MinRe half-plane under negation
};

struct HalfPlane {
    double bound = 0.0;
    HalfPlaneSide side = HalfPlaneSide::MinRe;
    friend bool operator==(const HalfPlane&, const HalfPlane&) = default;
};

/// The whole complex plane; arises when opposite half-planes are added.
struct Plane {
    friend bool operator==(const Plane&, const Plane&) = default;
};

/// The single point at infinity of the extended plane.
struct PointAtInfinity {
    friend bool operator==(const PointAtInfinity&, const PointAtInfinity&) = default;
};

struct Empty {
    friend bool operator==(const Empty&, const Empty&) = default;
};

/// Boundary or scatter samples; only Im >= 0 points are stored, the mirror
/// image is implied. With `chords` set the region is the union of vertical
/// segments [z, conj(z)] through the stored points.
struct Sampled {
    std::vector<std::complex<double>> points;
    bool conservative = false;
    bool chords = false;
    friend bool operator==(const Sampled&, const Sampled&) = default;
};

class Region {
public:
    using Shape = std::variant<Empty, Disc, HalfPlane, Plane, PointAtInfinity, Sampled>;

    Region() = default;

    static Region disc(double center, double radius);
    static Region point(double x) { return disc(x, 0.0); }
    static Region half_plane(double min_re);
    static Region left_half_plane(double max_re);
    static Region plane();
    static Region infinity();
    static Region empty() { return Region{}; }
    static Region sampled(std::vector<std::complex<double>> points, bool conservative = false,
                          bool chords = false);

    [[nodiscard]] const Shape& shape() const noexcept { return shape_; }

    template <class T>
    [[nodiscard]] const T* as() const noexcept {
        return std::get_if<T>(&shape_);
    }
    template <class T>
    [[nodiscard]] bool is() const noexcept {
        return std::holds_alternative<T>(shape_);
    }

    /// Disc, HalfPlane, Plane, PointAtInfinity or Empty.
    [[nodiscard]] bool is_exact() const noexcept { return !is<Sampled>(); }

    /// Recorded at construction: the region lies in {Re z >= 0}.
    [[nodiscard]] bool in_closed_right_half_plane() const noexcept { return rhp_; }

    [[nodiscard]] bool is_bounded() const noexcept;

    /// inf Re z (-inf when unbounded to the left, +inf when empty).
    [[nodiscard]] double min_re() const;
    /// sup Re z (+inf when unbounded to the right, -inf when empty).
    [[nodiscard]] double max_re() const;

    friend bool operator==(const Region&, const Region&) = default;

private:
    explicit Region(Shape shape);

    Shape shape_{Empty{}};
    bool rhp_ = true;
};

/// A point of an SRG: modulus and angle in [0, pi], or the point at infinity
/// produced by a multivalued relation.
struct SrgPoint {
    double modulus = 0.0;
    double angle = 0.0;
    bool infinite = false;

    static SrgPoint from_complex(std::complex<double> z);
    static SrgPoint at_infinity() { return {0.0, 0.0, true}; }

    [[nodiscard]] std::complex<double> z() const { return std::polar(modulus, angle); }
};

// --- construction ----------------------------------------------------------

/// Closed disc whose real-axis diameter is [a, b]. Throws InvalidArgument if a > b.
[[nodiscard]] Region disc_from_real_interval(double a, double b);

// --- algebra ---------------------------------------------------------------

/// Minkowski sum of two exact regions. Unbounded operands follow the
/// extended-plane convention: Empty plus a region containing infinity
/// gives {infinity}.
[[nodiscard]] Region minkowski_sum(const Region& a, const Region& b);

[[nodiscard]] Region negate(const Region& a);

/// Image under r e^{jw} -> (1/r) e^{jw}. Exact for discs and half-planes not
/// containing 0 in their interior; 0 and infinity are exchanged.
[[nodiscard]] Region invert(const Region& a);

/// Smallest represented superset closed under [z, conj(z)].
[[nodiscard]] Region chord_closure(const Region& a);

/// sup |z| over the region; +inf for unbounded regions, 0 for Empty.
[[nodiscard]] double max_modulus(const Region& a);

/// Fold the regions of a nested series/parallel chain from the far end:
/// the last region is taken as is, then acc <- regions[k] + chord(invert(acc))
/// moving toward the port. The result is in the orientation of position 0.
/// A failed inversion throws PropagationFailure naming the position.
[[nodiscard]] Region fold_continued_fraction(std::span<const Region> regions);

// --- properties ------------------------------------------------------------

[[nodiscard]] PropertySet classify(const Region& a);
[[nodiscard]] Region region_from_property(const PropertyTag& tag);

// --- containment -----------------------------------------------------------

/// True iff p lies in A inflated by tol (radial slack for discs, real-part
/// slack for half-planes, distance to a sample or chord for Sampled).
[[nodiscard]] bool contains(const Region& a, const SrgPoint& p, double tol = 0.0);
[[nodiscard]] bool contains(const Region& a, std::complex<double> z, double tol = 0.0);

/// Signed amount by which p lies outside A (<= 0 when inside).
[[nodiscard]] double excess(const Region& a, const SrgPoint& p);

/// inner ⊆ outer inflated by tol. Sampled outer regions are rejected.
[[nodiscard]] bool contains_region(const Region& outer, const Region& inner, double tol = 0.0);

/// Same variant and all parameters within tol.
[[nodiscard]] bool approx_equal(const Region& a, const Region& b, double tol);

// --- export ----------------------------------------------------------------

struct BoundarySamples {
    std::vector<std::complex<double>> points;
    /// Set when a half-plane boundary was clipped to Im in [first, second].
    std::optional<std::pair<double, double>> im_window;
};

/// m points on the upper half of the boundary, uniformly parametrised.
/// Discs are parametrised by angle from the rightmost point; half-plane
/// boundaries are sampled for Im in [0, im_max].
[[nodiscard]] BoundarySamples sample_boundary(const Region& a, int m, double im_max = 2.0);

/// CSV with header `re,im`; a `# im_window=lo,hi` line precedes the header
/// for clipped half-plane boundaries.
void write_boundary_csv(std::ostream& os, const BoundarySamples& samples);

[[nodiscard]] std::string to_string(const Region& a);

}  // namespace cfrac::region
