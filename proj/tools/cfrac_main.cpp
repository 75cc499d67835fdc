// cfrac: bounds, simulation, SRG export, empirical checks and truncation of
// series/parallel chain circuits.

#include "cfrac/circuit_file.hpp"
#include "cfrac/commands.hpp"

#include <CLI11.hpp>

#include <fstream>
#include <iostream>
#include <memory>

namespace {

using namespace cfrac;

class Output {
public:
    explicit Output(const std::string& path) {
        if (path.empty() || path == "-") return;
        file_ = std::make_unique<std::ofstream>(path);
        if (!*file_) throw Error(ErrorKind::Io, "cannot open output file " + path);
    }
    std::ostream& stream() { return file_ ? *file_ : std::cout; }
    void close() {
        if (!file_) return;
        file_->close();
        if (!*file_) throw Error(ErrorKind::Io, "failed writing output file");
    }

private:
    std::unique_ptr<std::ofstream> file_;
};

void print_warnings(const Diagnostics& diag) {
    for (const auto& w : diag.warnings) std::cerr << "warning: " << w << '\n';
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Continued-fraction circuit analysis: SRG bounds, simulation and truncation"};
    app.require_subcommand(1);

    std::string circuit;
    std::string out;
    std::string reduce = "none";
    cli::LumpingOptions lumping;
    std::uint64_t seed = cli::default_seed();

    auto* bounds = app.add_subcommand("bounds", "CSV n,s,b of the lambda_n bound and the baseline bound");
    cli::BoundsOptions bopts;
    bounds->add_option("--lambda", bopts.lambda, "element sector upper bound")->capture_default_str();
    bounds->add_option("--r", bopts.r, "reduced order")->capture_default_str();
    bounds->add_option("--n-min", bopts.n_min)->capture_default_str();
    bounds->add_option("--n-max", bopts.n_max)->capture_default_str();
    bounds->add_option("--out", out, "output CSV (default stdout)");

    auto* simulate = app.add_subcommand("simulate", "simulate a chain and optionally its reduced models");
    cli::SimulateOptions sopts;
    simulate->add_option("--circuit", circuit)->required();
    simulate->add_option("--input", sopts.input, "sin | step | multisine")->capture_default_str();
    simulate->add_option("--amplitude", sopts.amplitude)->capture_default_str();
    simulate->add_option("--omega", sopts.omega)->capture_default_str();
    simulate->add_option("--tfinal", sopts.t_final)->capture_default_str();
    simulate->add_option("--dt", sopts.dt)->capture_default_str();
    simulate->add_option("--ic", sopts.ic, "initial voltage of every capacitor")->capture_default_str();
    simulate->add_option("--reduce", reduce, "none | units:<r> | capacitors:<r>")->capture_default_str();
    simulate->add_flag("--compare", sopts.compare, "simulate both reductions to order r");
    simulate->add_option("--seed", seed, "multisine seed (default $CFRAC_SEED or 42)");
    simulate->add_option("--pwl-points", lumping.pwl_points)->capture_default_str();
    simulate->add_option("--range", lumping.range_max, "lumping current range")->capture_default_str();
    simulate->add_option("--out", out, "output CSV (default stdout)");

    auto* srg_cmd = app.add_subcommand("srg", "export SRG bounds of a chain");
    cli::SrgOptions gopts;
    std::string prefix = "srg";
    srg_cmd->add_option("--circuit", circuit)->required();
    srg_cmd->add_option("--samples", gopts.samples, "boundary points per region")->capture_default_str();
    srg_cmd->add_option("--im-max", gopts.im_max, "half-plane clipping height")->capture_default_str();
    srg_cmd->add_option("--reduce", reduce, "reduced model for the error region")->capture_default_str();
    srg_cmd->add_option("--pwl-points", lumping.pwl_points)->capture_default_str();
    srg_cmd->add_option("--range", lumping.range_max)->capture_default_str();
    srg_cmd->add_option("--out", prefix, "writes <out>_impedance.csv and <out>_admittance.csv")->capture_default_str();

    auto* check = app.add_subcommand("check", "compare empirical SRG samples with the certified bounds");
    cli::CheckOptions copts;
    check->add_option("--circuit", circuit)->required();
    check->add_option("--pairs", copts.pairs)->capture_default_str();
    check->add_option("--seed", seed, "default $CFRAC_SEED or 42");
    check->add_option("--tol", copts.tol)->capture_default_str();
    check->add_option("--dt", copts.dt)->capture_default_str();
    check->add_option("--tfinal", copts.t_final)->capture_default_str();
    check->add_option("--threads", copts.threads)->capture_default_str();
    check->add_option("--out", out, "CSV of empirical SRG points");

    auto* truncate = app.add_subcommand("truncate", "write a reduced circuit file");
    truncate->add_option("--circuit", circuit)->required();
    truncate->add_option("--reduce", reduce, "units:<r> | capacitors:<r>")->required();
    truncate->add_option("--pwl-points", lumping.pwl_points)->capture_default_str();
    truncate->add_option("--range", lumping.range_max)->capture_default_str();
    truncate->add_option("--out", out, "output circuit file")->required();

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::CallForAllHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return cli::kExitUsage;
    }

    Diagnostics diag;
    try {
        if (bounds->parsed()) {
            Output o(out);
            cli::cmd_bounds(bopts, o.stream());
            o.close();
        } else if (simulate->parsed()) {
            const CircuitChain chain = read_circuit_file(circuit);
            sopts.reduce = cli::parse_reduction(reduce);
            sopts.seed = seed;
            sopts.lumping = lumping;
            Output o(out);
            cli::cmd_simulate(chain, sopts, o.stream(), &diag);
            o.close();
        } else if (srg_cmd->parsed()) {
            const CircuitChain chain = read_circuit_file(circuit);
            gopts.reduce = cli::parse_reduction(reduce);
            gopts.lumping = lumping;
            Output z(prefix + "_impedance.csv");
            Output y(prefix + "_admittance.csv");
            cli::cmd_srg(chain, gopts, z.stream(), y.stream(), std::cout, &diag);
            z.close();
            y.close();
        } else if (check->parsed()) {
            const CircuitChain chain = read_circuit_file(circuit);
            copts.seed = seed;
            const cli::CheckResult res = cli::run_check(chain, copts);
            cli::print_check(res, std::cout);
            if (!out.empty()) {
                Output o(out);
                srg::write_srg_points_csv(o.stream(), res.empirical.points);
                o.close();
            }
            print_warnings(diag);
            return res.passed() ? cli::kExitOk : cli::kExitCheckViolation;
        } else if (truncate->parsed()) {
            const CircuitChain chain = read_circuit_file(circuit);
            const cli::Reduction red = cli::parse_reduction(reduce);
            if (red.kind == cli::Reduction::Kind::None) throw Error(ErrorKind::InvalidArgument, "truncate needs --reduce");
            cli::cmd_truncate(chain, red, lumping, out, &diag);
        }
    } catch (const Error& e) {
        print_warnings(diag);
        std::cerr << "error: " << e.what() << '\n';
        return cli::exit_code_for(e);
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return cli::kExitNumeric;
    }
    print_warnings(diag);
    return cli::kExitOk;
}
