#include "cfrac/baseline.hpp"
#include "cfrac/circuit_file.hpp"
#include "cfrac/commands.hpp"
#include "cfrac/format.hpp"

#include <catch_amalgamated.hpp>

#include <atomic>
#include <cstdlib>
#include <filesystem>
#include <sstream>
#include <unistd.h>

using namespace cfrac;
using namespace cfrac::cli;
namespace fs = std::filesystem;

namespace {

std::vector<std::string> lines_of(const std::string& text) {
    std::vector<std::string> out;
    std::istringstream is(text);
    for (std::string l; std::getline(is, l);) out.push_back(l);
    return out;
}

std::vector<double> csv_row(const std::string& line) {
    std::vector<double> out;
    std::istringstream is(line);
    for (std::string cell; std::getline(is, cell, ',');) out.push_back(std::stod(cell));
    return out;
}

fs::path temp_dir() {
    static std::atomic<int> counter{0};
    fs::path p = fs::temp_directory_path() / ("cfrac_cmd_" + std::to_string(::getpid()) + "_" + std::to_string(counter++));
    fs::create_directories(p);
    return p;
}

}  // namespace

TEST_CASE("exit codes follow the error kind", "[commands]") {
    CHECK(exit_code_for(Error(ErrorKind::InvalidArgument, "")) == 1);
    CHECK(exit_code_for(Error(ErrorKind::Parse, "")) == 2);
    CHECK(exit_code_for(Error(ErrorKind::Io, "")) == 2);
    CHECK(exit_code_for(Error(ErrorKind::Divergence, "")) == 3);
    CHECK(exit_code_for(Error(ErrorKind::SingularNetwork, "")) == 3);
    CHECK(kExitCheckViolation == 4);
}

TEST_CASE("seed defaults come from the environment", "[commands]") {
    ::setenv("CFRAC_SEED", "1234", 1);
    CHECK(default_seed() == 1234);
    ::setenv("CFRAC_SEED", "12x", 1);
    CHECK(default_seed() == 42);
    ::unsetenv("CFRAC_SEED");
    CHECK(default_seed() == 42);
}

TEST_CASE("reduction specs", "[commands]") {
    CHECK(parse_reduction("none").kind == Reduction::Kind::None);
    const Reduction u = parse_reduction("units:3");
    CHECK(u.kind == Reduction::Kind::Units);
    CHECK(u.r == 3);
    const Reduction c = parse_reduction("capacitors:0");
    CHECK(c.kind == Reduction::Kind::Capacitors);
    CHECK(c.r == 0);
    for (const char* bad : {"", "units", "units:", "units:-1", "units:2x", "caps:3", "NONE"}) {
        INFO(bad);
        CHECK_THROWS_AS(parse_reduction(bad), Error);
    }
}

TEST_CASE("lattice detection", "[commands]") {
    const auto s = lattice_shape(make_lattice(5));
    REQUIRE(s);
    CHECK(s->units == 5);
    CHECK(s->lambda == Catch::Approx(1.0));
    const auto lin = lattice_shape(make_lattice(4, LinearResistor{0.5}));
    REQUIRE(lin);
    CHECK(lin->lambda == 0.5);
    CHECK_FALSE(lattice_shape(make_lattice(0)));
    CHECK_FALSE(lattice_shape(make_lattice(3, StaticNL::tanh_plus_id(), ShuntRC{2.0, 1.0})));
    CHECK_FALSE(lattice_shape(truncate_capacitors(make_lattice(6), 2)));
}

TEST_CASE("bounds csv", "[commands]") {
    std::ostringstream os;
    cmd_bounds({2.0, 3, 10, 12}, os);
    const auto lines = lines_of(os.str());
    REQUIRE(lines.size() == 4);
    CHECK(lines[0] == "n,s,b");
    const auto row = csv_row(lines[1]);
    CHECK(row[0] == 10);
    CHECK(row[1] == Catch::Approx(srg::lambda_chain(2.0, 10).values.back()).epsilon(1e-11));
    CHECK(row[2] == Catch::Approx(baseline::besselink_bound(10, 3, 2.0).bound).epsilon(1e-11));

    std::ostringstream one;
    cmd_bounds({1.0, 0, 800, 800}, one);
    const auto single = lines_of(one.str());
    REQUIRE(single.size() == 2);
    CHECK(csv_row(single[1])[1] == Catch::Approx(0.618034).margin(1e-6));

    std::ostringstream sink;
    CHECK_THROWS_AS(cmd_bounds({2.0, 3, 20, 10}, sink), Error);
    CHECK_THROWS_AS(cmd_bounds({2.0, 3, 3, 10}, sink), Error);
    CHECK_THROWS_AS(cmd_bounds({0.0, 3, 10, 20}, sink), Error);
}

TEST_CASE("simulate csv layouts", "[commands]") {
    SimulateOptions o;
    o.t_final = 1.0;
    o.dt = 0.1;
    std::ostringstream two;
    cmd_simulate(make_lattice(5), o, two);
    auto lines = lines_of(two.str());
    REQUIRE(lines.size() == 12);
    CHECK(lines[0] == "t,v");
    CHECK(lines[1] == "0,0");

    o.compare = true;
    o.reduce = parse_reduction("capacitors:2");
    o.ic = 1.0;
    std::ostringstream six;
    cmd_simulate(make_lattice(5), o, six);
    lines = lines_of(six.str());
    REQUIRE(lines.size() == 12);
    CHECK(lines[0] == "t,v_full,v_red_srg,v_red_bt,err_srg,err_bt");
    const auto first = csv_row(lines[1]);
    REQUIRE(first.size() == 6);
    CHECK(first[1] == 1.0);
    for (std::size_t k = 1; k < lines.size(); ++k) {
        const auto r = csv_row(lines[k]);
        CHECK(r[4] == Catch::Approx(std::abs(r[1] - r[2])).margin(1e-11));
        CHECK(r[5] == Catch::Approx(std::abs(r[1] - r[3])).margin(1e-11));
    }

    o.reduce = {};
    std::ostringstream sink;
    CHECK_THROWS_AS(cmd_simulate(make_lattice(5), o, sink), Error);
    o.compare = false;
    o.input = "square";
    CHECK_THROWS_AS(cmd_simulate(make_lattice(5), o, sink), Error);
}

TEST_CASE("simulate output is deterministic", "[commands][property]") {
    SimulateOptions o;
    o.input = "multisine";
    o.seed = 77;
    o.t_final = 2.0;
    o.dt = 0.01;
    o.compare = true;
    o.reduce = parse_reduction("capacitors:1");
    std::ostringstream a, b;
    cmd_simulate(make_lattice(4), o, a);
    cmd_simulate(make_lattice(4), o, b);
    CHECK(a.str() == b.str());
    o.seed = 78;
    std::ostringstream c;
    cmd_simulate(make_lattice(4), o, c);
    CHECK(a.str() != c.str());
}

TEST_CASE("srg report for a short lattice", "[commands]") {
    SrgOptions o;
    o.samples = 20;
    std::ostringstream z, y, report;
    cmd_srg(make_lattice(5), o, z, y, report);
    const double lambda5 = srg::lambda_chain(1.0, 5).values.back();
    CHECK(lambda5 == Catch::Approx(89.0 / 144.0).epsilon(1e-14));
    const std::string r = report.str();
    CHECK(r.find("gain bound: " + format_number(lambda5)) != std::string::npos);
    CHECK(r.find("lambda_n (n=5, lambda=1): " + format_number(lambda5)) != std::string::npos);
    // Without a reduction the error bound is srg(Z) - srg(Z), a disc of radius lambda_5.
    CHECK(r.find("error disc radius: " + format_number(lambda5) + "\n") != std::string::npos);
    CHECK(lines_of(z.str()).size() == 21);
    CHECK(lines_of(z.str())[0] == "re,im");

    o.reduce = parse_reduction("units:2");
    const SrgSummary s = srg_summary(make_lattice(5), o);
    REQUIRE(s.reduced);
    REQUIRE(s.secant_error);
    const double lambda2 = srg::lambda_chain(1.0, 2).values.back();
    CHECK(s.secant_error->value == Catch::Approx(lambda5 - lambda2).margin(1e-12));
    CHECK(s.secant_error->enlarged);
    // Discs with diameters [0, a] and [0, b]: the difference reaches max(a, b).
    CHECK(s.error_radius == Catch::Approx(std::max(lambda5, lambda2)).epsilon(1e-12));
}

TEST_CASE("capacitor truncation keeps the lattice SRG", "[commands]") {
    SrgOptions o;
    o.reduce = parse_reduction("capacitors:3");
    const SrgSummary s = srg_summary(make_lattice(20), o);
    REQUIRE(s.reduced);
    CHECK(region::approx_equal(s.full.impedance, s.reduced->impedance, 1e-12));
    REQUIRE(s.secant_error);
    CHECK(std::abs(s.secant_error->value) <= 1e-12);
}

TEST_CASE("check passes on a short lattice", "[commands]") {
    CheckOptions o;
    o.pairs = 12;
    o.dt = 1e-2;
    o.t_final = 10.0;
    o.threads = 2;
    const CheckResult r = run_check(make_lattice(2), o);
    CHECK(r.passed());
    CHECK(r.containment.checked == 12);
    CHECK(r.estimate.pairs_used == 12);
    CHECK(r.estimate.lambda <= r.gain_bound);
    CHECK(r.gain_from_zero <= r.gain_bound);
    std::ostringstream os;
    print_check(r, os);
    CHECK(os.str().find("check passed") != std::string::npos);

    // Thread count does not change the result.
    o.threads = 1;
    const CheckResult s = run_check(make_lattice(2), o);
    CHECK(s.estimate.lambda == r.estimate.lambda);
    CHECK(s.containment.worst_excess == r.containment.worst_excess);

    o.pairs = 0;
    CHECK_THROWS_AS(run_check(make_lattice(2), o), Error);
}

TEST_CASE("truncate writes a circuit that reads back", "[commands]") {
    const fs::path dir = temp_dir();
    const CircuitChain c = make_lattice(6);
    const Reduction red = parse_reduction("capacitors:2");
    const LumpingOptions lump{32, 4.0};
    cmd_truncate(c, red, lump, (dir / "reduced.cir").string());
    CHECK(fs::exists(dir / "reduced_pwl0.txt"));
    const CircuitChain back = read_circuit_file(dir / "reduced.cir");
    const CircuitChain direct = apply_reduction(c, red, lump);
    CHECK(back.elements() == direct.elements());
    const PortProperties pb = propagate_properties(back);
    const PortProperties pd = propagate_properties(direct);
    CHECK(pb.impedance == pd.impedance);
    CHECK(pb.admittance == pd.admittance);

    cmd_truncate(c, parse_reduction("units:1"), lump, (dir / "units.cir").string());
    CHECK(read_circuit_file(dir / "units.cir").elements() == truncate_chain(c, 1).elements());
    std::error_code ec;
    fs::remove_all(dir, ec);
}
