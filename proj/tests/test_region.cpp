#include "cfrac/error.hpp"
#include "cfrac/region.hpp"

#include <catch_amalgamated.hpp>

#include <cmath>
#include <numbers>
#include <random>
#include <sstream>

using namespace cfrac;
using namespace cfrac::region;
using Catch::Matchers::WithinAbs;

namespace {

Disc disc_of(const Region& r) {
    REQUIRE(r.is<Disc>());
    return *r.as<Disc>();
}

// Boundary point of a half-plane or disc at parameter t in [0, 1].
std::complex<double> boundary_point(const Region& r, double t) {
    if (const auto* d = r.as<Disc>()) return std::complex<double>(d->center, 0.0) + std::polar(d->radius, std::numbers::pi * t);
    const auto* h = r.as<HalfPlane>();
    return {h->bound, 50.0 * t};
}

std::complex<double> invert_point(std::complex<double> z) {
    const double r = std::abs(z);
    return std::polar(1.0 / r, std::arg(z));
}

std::mt19937_64& rng() {
    static std::mt19937_64 g(20240611);
    return g;
}

double uniform(double lo, double hi) { return std::uniform_real_distribution<double>(lo, hi)(rng()); }

}  // namespace

TEST_CASE("disc from real interval") {
    const Disc a = disc_of(disc_from_real_interval(0, 2));
    CHECK(a.center == 1.0);
    CHECK(a.radius == 1.0);
    const Disc b = disc_of(disc_from_real_interval(1, 1));
    CHECK(b.center == 1.0);
    CHECK(b.radius == 0.0);
    const Disc c = disc_of(disc_from_real_interval(0.5, 1));
    CHECK(c.center == 0.75);
    CHECK(c.radius == 0.25);
    CHECK_THROWS_AS(disc_from_real_interval(2, 1), Error);
}

TEST_CASE("right half-plane predicate is recorded at construction") {
    CHECK(Region::disc(1, 1).in_closed_right_half_plane());
    CHECK_FALSE(Region::disc(0.5, 1).in_closed_right_half_plane());
    CHECK(Region::half_plane(0).in_closed_right_half_plane());
    CHECK_FALSE(Region::left_half_plane(3).in_closed_right_half_plane());
}

TEST_CASE("minkowski sum of exact shapes") {
    const Disc s = disc_of(minkowski_sum(Region::disc(1, 0.5), Region::disc(2, 0.25)));
    CHECK(s.center == 3.0);
    CHECK(s.radius == 0.75);

    const Region h = minkowski_sum(Region::half_plane(1), Region::disc(1, 1));
    REQUIRE(h.is<HalfPlane>());
    CHECK(h.as<HalfPlane>()->bound == 1.0);

    CHECK(minkowski_sum(Region::half_plane(1), Region::half_plane(2)) == Region::half_plane(3));
    CHECK(minkowski_sum(Region::half_plane(1), Region::left_half_plane(2)).is<Plane>());
    CHECK(minkowski_sum(Region::empty(), Region::infinity()).is<PointAtInfinity>());
    CHECK(minkowski_sum(Region::empty(), Region::disc(1, 1)).is<Empty>());
    CHECK_THROWS_AS(minkowski_sum(Region::sampled({{1, 1}}), Region::disc(0, 1)), Error);
}

TEST_CASE("negation") {
    CHECK(negate(Region::disc(1, 0.5)) == Region::disc(-1, 0.5));
    CHECK(negate(Region::disc(0, 1)) == Region::disc(0, 1));
    CHECK(negate(Region::empty()).is<Empty>());
    const Region h = negate(Region::half_plane(2));
    REQUIRE(h.is<HalfPlane>());
    CHECK(h.as<HalfPlane>()->side == HalfPlaneSide::MaxRe);
    CHECK(h.as<HalfPlane>()->bound == -2.0);
    CHECK(negate(h) == Region::half_plane(2));
}

TEST_CASE("inversion of right half-plane shapes") {
    const Disc a = disc_of(invert(disc_from_real_interval(1, 2)));
    CHECK_THAT(a.lower(), WithinAbs(0.5, 1e-15));
    CHECK_THAT(a.upper(), WithinAbs(1.0, 1e-15));

    const Disc b = disc_of(invert(Region::half_plane(1)));
    CHECK_THAT(b.lower(), WithinAbs(0.0, 1e-15));
    CHECK_THAT(b.upper(), WithinAbs(1.0, 1e-15));

    CHECK(invert(Region::point(1)) == Region::point(1));
    CHECK(invert(Region::half_plane(0)) == Region::half_plane(0));
    CHECK(invert(Region::point(0)).is<PointAtInfinity>());
    CHECK(invert(Region::infinity()) == Region::point(0));
    CHECK(invert(disc_from_real_interval(0, 4)) == Region::half_plane(0.25));
    CHECK_THROWS_AS(invert(Region::disc(0, 1)), Error);
    CHECK_THROWS_AS(invert(Region::half_plane(-1)), Error);

    // Left half-plane shapes invert by symmetry.
    const Disc c = disc_of(invert(disc_from_real_interval(-2, -1)));
    CHECK_THAT(c.lower(), WithinAbs(-1.0, 1e-15));
    CHECK_THAT(c.upper(), WithinAbs(-0.5, 1e-15));
}

TEST_CASE("inversion agrees with mapping sampled boundary points") {
    // Map boundary samples of A and of invert(A) through z -> (1/|z|) e^{j arg z}
    // and check containment in the other set both ways.
    const Region shapes[] = {disc_from_real_interval(1, 2), Region::half_plane(1), disc_from_real_interval(0.3, 7),
                             disc_from_real_interval(0, 2)};
    for (const Region& a : shapes) {
        const Region b = invert(a);
        for (int k = 1; k < 200; ++k) {
            const double t = k / 200.0;
            const auto za = boundary_point(a, t);
            if (std::abs(za) > 0) CHECK(contains(b, invert_point(za), 1e-9));
            if (b.is<Disc>() || b.is<HalfPlane>()) {
                const auto zb = boundary_point(b, t);
                if (std::abs(zb) > 0) CHECK(contains(a, invert_point(zb), 1e-9));
            }
        }
    }
}

TEST_CASE("chord closure") {
    CHECK(chord_closure(Region::disc(1, 1)) == Region::disc(1, 1));
    CHECK(chord_closure(Region::half_plane(0)) == Region::half_plane(0));
    const Region s = chord_closure(Region::sampled({{1, 1}, {1, -1}}));
    REQUIRE(s.is<Sampled>());
    CHECK(s.as<Sampled>()->chords);
    // Points go through polar form, so allow rounding-level slack.
    CHECK(contains(s, std::complex<double>(1, 0.3), 1e-12));
    CHECK(contains(s, std::complex<double>(1, -0.9), 1e-12));
    CHECK_FALSE(contains(Region::sampled({{1, 1}}), std::complex<double>(1, 0.3), 1e-12));
}

TEST_CASE("maximum modulus") {
    CHECK(max_modulus(Region::disc(0, 0.75)) == 0.75);
    CHECK(max_modulus(Region::disc(1, 0.5)) == 1.5);
    CHECK(std::isinf(max_modulus(Region::half_plane(1))));
    CHECK(max_modulus(Region::empty()) == 0.0);
}

TEST_CASE("classify reads properties off a region") {
    const PropertySet a = classify(disc_from_real_interval(0, 3));
    CHECK(a == PropertySet{PropertyTag::positive(), PropertyTag::output_strict(3), PropertyTag::gain(3)});

    const PropertySet b = classify(Region::half_plane(0.5));
    CHECK(b == PropertySet{PropertyTag::positive(), PropertyTag::input_strict(0.5)});
    CHECK_FALSE(has_property(b, PropertyKind::Gain));

    CHECK(classify(Region::disc(0, 2)) == PropertySet{PropertyTag::gain(2)});

    const PropertySet d = classify(disc_from_real_interval(1, 2));
    CHECK(find_property(d, PropertyKind::InputStrict) == 1.0);
    CHECK(find_property(d, PropertyKind::OutputStrict) == 2.0);
}

TEST_CASE("region from property") {
    CHECK(region_from_property(PropertyTag::gain(2)) == Region::disc(0, 2));
    CHECK(region_from_property(PropertyTag::input_strict(0.5)) == Region::half_plane(0.5));
    CHECK(region_from_property(PropertyTag::output_strict(1)) == disc_from_real_interval(0, 1));
    CHECK(region_from_property(PropertyTag::positive()) == Region::half_plane(0));
}

TEST_CASE("containment with tolerance") {
    CHECK(contains(Region::disc(0, 1), std::complex<double>(1, 0), 0));
    CHECK(contains(Region::disc(0, 1), std::complex<double>(1.0005, 0), 1e-3));
    CHECK_FALSE(contains(Region::half_plane(1), std::complex<double>(0.5, 2), 0));
    CHECK(contains(Region::half_plane(1), SrgPoint::at_infinity()));
    CHECK_FALSE(contains(Region::disc(0, 1), SrgPoint::at_infinity()));
    CHECK_THAT(excess(Region::disc(0, 2), SrgPoint::from_complex({2.1, 0})), WithinAbs(0.1, 1e-12));
}

TEST_CASE("region inclusion") {
    CHECK(contains_region(Region::disc(0, 2), Region::disc(0.5, 1)));
    CHECK_FALSE(contains_region(Region::disc(0, 2), Region::disc(1.5, 1)));
    CHECK(contains_region(Region::half_plane(0), disc_from_real_interval(0, 1)));
    CHECK(contains_region(Region::half_plane(0), Region::half_plane(1)));
    CHECK_FALSE(contains_region(Region::disc(0, 5), Region::half_plane(1)));
    CHECK(contains_region(Region::plane(), Region::half_plane(1)));
}

TEST_CASE("boundary sampling") {
    const auto a = sample_boundary(Region::disc(0, 1), 3);
    REQUIRE(a.points.size() == 3);
    CHECK_THAT(a.points[0].real(), WithinAbs(1, 1e-15));
    CHECK_THAT(a.points[0].imag(), WithinAbs(0, 1e-15));
    CHECK_THAT(a.points[1].real(), WithinAbs(0, 1e-15));
    CHECK_THAT(a.points[1].imag(), WithinAbs(1, 1e-15));
    CHECK_THAT(a.points[2].real(), WithinAbs(-1, 1e-15));
    CHECK_THAT(a.points[2].imag(), WithinAbs(0, 1e-15));
    CHECK_FALSE(a.im_window);

    const auto b = sample_boundary(Region::point(1), 5);
    for (auto z : b.points) CHECK(z == std::complex<double>(1, 0));

    const auto c = sample_boundary(Region::half_plane(1), 3, 2.0);
    REQUIRE(c.points.size() == 3);
    CHECK(c.points[0] == std::complex<double>(1, 0));
    CHECK(c.points[1] == std::complex<double>(1, 1));
    CHECK(c.points[2] == std::complex<double>(1, 2));
    REQUIRE(c.im_window);

    std::ostringstream os;
    write_boundary_csv(os, c);
    CHECK(os.str() == "# im_window=0,2\nre,im\n1,0\n1,1\n1,2\n");
    CHECK_THROWS_AS(sample_boundary(Region::disc(0, 1), 1), Error);
}

TEST_CASE("continued-fraction fold reports the failing position") {
    // A disc straddling 0 behind position 0 cannot be inverted.
    const Region regs[] = {Region::point(1), Region::disc(0, 1)};
    try {
        (void)fold_continued_fraction(regs);
        FAIL("expected a propagation failure");
    } catch (const Error& e) {
        CHECK(e.kind() == ErrorKind::PropagationFailure);
        CHECK(std::string(e.what()).find("position 0") != std::string::npos);
    }
}

// --- randomized properties -------------------------------------------------

TEST_CASE("inversion is an involution on right half-plane discs") {
    for (int k = 0; k < 500; ++k) {
        const double a = std::exp(uniform(-5, 5));
        const double b = a * std::exp(uniform(0, 5));
        const Region d = disc_from_real_interval(a, b);
        const Region back = invert(invert(d));
        CHECK(approx_equal(back, d, 1e-12 * std::max(1.0, b)));
    }
}

TEST_CASE("minkowski sum contains every pairwise sum of samples") {
    for (int k = 0; k < 200; ++k) {
        const Region a = Region::disc(uniform(-3, 3), uniform(0, 2));
        const Region b = Region::disc(uniform(-3, 3), uniform(0, 2));
        const Region s = minkowski_sum(a, b);
        CHECK(disc_of(s).radius == disc_of(a).radius + disc_of(b).radius);
        const auto pa = sample_boundary(a, 9).points;
        const auto pb = sample_boundary(b, 9).points;
        for (auto za : pa) {
            for (auto zb : pb) {
                CHECK(contains(s, za + zb, 1e-12));
                CHECK(contains(s, za + std::conj(zb), 1e-12));
            }
        }
    }
}

TEST_CASE("classify after region_from_property recovers the tag") {
    for (int k = 0; k < 300; ++k) {
        const double p = std::exp(uniform(-4, 4));
        for (const PropertyTag t : {PropertyTag::input_strict(p), PropertyTag::output_strict(p), PropertyTag::gain(p),
                                    PropertyTag::positive()}) {
            const PropertySet tags = classify(region_from_property(t));
            const auto v = find_property(tags, t.kind);
            REQUIRE(v);
            CHECK_THAT(*v, WithinAbs(t.value, 1e-12 * std::max(1.0, p)));
        }
    }
}

TEST_CASE("chord closure is idempotent") {
    std::vector<Region> shapes = {Region::empty(), Region::plane(), Region::infinity(), Region::half_plane(1),
                                  Region::left_half_plane(-1), Region::disc(1, 2)};
    for (int k = 0; k < 50; ++k) {
        std::vector<std::complex<double>> pts;
        for (int j = 0; j < 5; ++j) pts.emplace_back(uniform(-2, 2), uniform(-2, 2));
        shapes.push_back(Region::sampled(pts));
    }
    for (const auto& r : shapes) {
        const Region once = chord_closure(r);
        CHECK(chord_closure(once) == once);
    }
}

TEST_CASE("inverted boundary points land in the inverted region") {
    int checked = 0;
    for (int k = 0; k < 100; ++k) {
        Region a = uniform(0, 1) < 0.5 ? Region::half_plane(std::exp(uniform(-3, 3)))
                                       : disc_from_real_interval(0, std::exp(uniform(-3, 3)));
        if (uniform(0, 1) < 0.5) {
            const double lo = std::exp(uniform(-3, 3));
            a = disc_from_real_interval(lo, lo * std::exp(uniform(0, 3)));
        }
        const Region b = invert(a);
        for (int j = 0; j < 100; ++j) {
            const double t = uniform(0, 1);
            const auto z = boundary_point(a, t);
            if (std::abs(z) == 0.0) continue;
            CHECK(contains(b, invert_point(z), 1e-9 * std::max(1.0, max_modulus(b) < 1e300 ? max_modulus(b) : 1.0)));
            ++checked;
        }
    }
    CHECK(checked >= 9000);
}
