// Command-line front end: closed-form constants, extremizer ratio sweeps,
// property suites, and ball-volume reports, with CSV/JSON emission.

#include <cstdlib>
#include <filesystem>
#include <future>
#include <iostream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "hgo/hgo.hpp"
#include "hgo/report.hpp"

namespace {

constexpr int kExitOk = 0;
constexpr int kExitSuiteFailure = 1;
constexpr int kExitInvalidConfig = 2;
constexpr int kExitDivergence = 3;

std::filesystem::path resolve_out(const std::string& out) {
    std::filesystem::path p(out);
    if (p.is_relative()) {
        if (const char* dir = std::getenv("HGO_OUTPUT_DIR")) p = std::filesystem::path(dir) / p;
    }
    return p;
}

struct CommonOpts {
    int n = 1;
    double p = 2.0;
    double p_bar_in = 2.0;
    double p_bar_out = 2.0;
    std::string op = "hilbert";
    int m = 1;
    std::vector<double> p_list;
    std::uint64_t seed = 1;
    long samples = 20000;
    double tol = 1e-10;
    std::string format = "csv";
    std::string out;
};

void add_space_options(CLI::App* cmd, CommonOpts& o) {
    cmd->add_option("--n", o.n, "Heisenberg dimension parameter n (Q = 2n+2)");
    cmd->add_option("--seed", o.seed, "Base seed for every random stream");
    cmd->add_option("--samples", o.samples, "Monte Carlo sample budget");
    cmd->add_option("--tol", o.tol, "Relative quadrature tolerance");
}

void add_exponent_options(CLI::App* cmd, CommonOpts& o) {
    cmd->add_option("--p", o.p, "Radial exponent p in (1, inf)");
    cmd->add_option("--pbar-in", o.p_bar_in, "Domain angular exponent");
    cmd->add_option("--pbar-out", o.p_bar_out, "Codomain angular exponent");
    cmd->add_option("--m", o.m, "Multilinear arity for the mlinear operator");
    cmd->add_option("--p-list", o.p_list, "Per-factor exponents p_1..p_m (sum 1/p_i = 1/p)")
        ->delimiter(',');
}

void add_output_options(CLI::App* cmd, CommonOpts& o) {
    cmd->add_option("--format", o.format, "Report format: csv or json")
        ->check(CLI::IsMember({"csv", "json"}));
    cmd->add_option("--out", o.out,
                    "Output file; relative paths land in $HGO_OUTPUT_DIR when set");
}

hgo::KernelKind kernel_kind_from_name(const std::string& name) {
    if (name == "hilbert") return hgo::KernelKind::Hilbert1;
    if (name == "hlp") return hgo::KernelKind::HLP;
    if (name == "mlinear") return hgo::KernelKind::MLinearHilbert;
    throw std::invalid_argument("unknown operator '" + name + "'");
}

void print_constant(const hgo::SharpConstantReport& report) {
    std::cout << "constant " << report.name << "\n"
              << "  closed form          " << hgo::detail::format_double(report.closed_form_value)
              << "\n"
              << "  quadrature           " << hgo::detail::format_double(report.quadrature_value)
              << "\n"
              << "  relative gap         " << hgo::detail::format_double(report.relative_gap)
              << "\n"
              << "  quoted-formula value "
              << hgo::detail::format_double(report.quoted_convention_value) << "\n"
              << "  convention           " << report.omega_convention << "\n";
    for (const std::string& note : report.notes) std::cout << "  note: " << note << "\n";
}

int run_constants(const CommonOpts& o, const std::vector<std::string>& operators) {
    std::vector<hgo::SharpConstantReport> reports;
    for (const std::string& name : operators) {
        hgo::ConstantRequest req;
        req.n = o.n;
        req.p = o.p;
        req.p_bar_in = o.p_bar_in;
        req.p_bar_out = o.p_bar_out;
        req.operator_kind = kernel_kind_from_name(name);
        req.m = o.m;
        req.p_list = o.p_list;
        hgo::QuadratureSpec quad{o.tol * 1e-3, o.tol, 4000};
        reports.push_back(hgo::evaluate_constant(req, quad));
        print_constant(reports.back());
    }
    if (!o.out.empty()) {
        if (o.format == "csv") {
            hgo::write_text_file(resolve_out(o.out), hgo::constants_to_csv(reports));
        } else {
            nlohmann::json j = nlohmann::json::array();
            for (const auto& r : reports) j.push_back(hgo::constant_to_json(r));
            hgo::write_text_file(resolve_out(o.out), j.dump(2) + "\n");
        }
        std::cout << "wrote " << resolve_out(o.out).string() << "\n";
    }
    return kExitOk;
}

int run_sweeps(const CommonOpts& o, const std::vector<std::string>& operators,
               const std::vector<double>& eps_grid, int jobs) {
    std::vector<hgo::ExperimentConfig> configs;
    for (const std::string& name : operators) {
        hgo::ExperimentConfig cfg;
        cfg.n = o.n;
        cfg.operator_name = name;
        cfg.p = o.p;
        cfg.p_bar_in = o.p_bar_in;
        cfg.p_bar_out = o.p_bar_out;
        cfg.m = o.m;
        cfg.p_list = o.p_list;
        if (!eps_grid.empty()) cfg.eps_grid = eps_grid;
        cfg.seed = o.seed;
        cfg.samples = o.samples;
        cfg.tol = o.tol;
        cfg.validate();
        configs.push_back(std::move(cfg));
    }

    std::vector<hgo::RatioSweep> sweeps(configs.size());
    if (jobs > 1) {
        std::vector<std::future<hgo::RatioSweep>> futures;
        futures.reserve(configs.size());
        for (const auto& cfg : configs)
            futures.push_back(
                std::async(std::launch::async, [&cfg] { return hgo::run_ratio_sweep(cfg); }));
        for (std::size_t i = 0; i < futures.size(); ++i) sweeps[i] = futures[i].get();
    } else {
        for (std::size_t i = 0; i < configs.size(); ++i) sweeps[i] = hgo::run_ratio_sweep(configs[i]);
    }

    for (const hgo::RatioSweep& sweep : sweeps) {
        std::cout << sweep.experiment << ": constant "
                  << hgo::detail::format_double(sweep.constant_value) << ", extrapolated limit "
                  << hgo::detail::format_double(sweep.extrapolated_limit) << ", monotone "
                  << (sweep.monotone ? "yes" : "no") << "\n";
        for (const hgo::RatioSweepRow& row : sweep.rows) {
            std::cout << "  eps " << hgo::detail::format_double(row.epsilon);
            if (row.valid)
                std::cout << "  ratio " << hgo::detail::format_double(row.ratio)
                          << "  ratio/constant "
                          << hgo::detail::format_double(row.ratio / sweep.constant_value) << "\n";
            else
                std::cout << "  invalid: " << row.note << "\n";
        }
    }

    if (!o.out.empty()) {
        hgo::ReportMetadata meta;
        meta.seed = o.seed;
        meta.quad_rel_tol = o.tol;
        meta.mc_samples = o.samples;
        hgo::HeisenbergSpace space(o.n);
        meta.notes.push_back(
            "quoted unit-ball formula / computed volume = " +
            hgo::detail::format_double(space.quoted_ball_volume() / space.ball_volume()));
        hgo::emit_report(sweeps, meta, hgo::parse_report_format(o.format), resolve_out(o.out));
        std::cout << "wrote " << resolve_out(o.out).string() << "\n";
    }
    return kExitOk;
}

int run_suite(const CommonOpts& o, const std::string& filter) {
    hgo::SuiteOptions opt;
    opt.n = o.n;
    opt.seed = o.seed;
    opt.mc_samples = o.samples;
    opt.filter = filter;
    hgo::SuiteReport report = hgo::run_property_suite(opt);
    for (const hgo::CheckResult& c : report.checks)
        std::cout << (c.passed ? "[PASS] " : "[FAIL] ") << c.suite << "/" << c.name << ": "
                  << c.detail << "\n";
    std::cout << report.checks.size() << " checks, " << report.failures() << " failures\n";
    if (!o.out.empty()) {
        hgo::write_text_file(resolve_out(o.out), hgo::suite_to_json(report).dump(2) + "\n");
        std::cout << "wrote " << resolve_out(o.out).string() << "\n";
    }
    return report.all_passed() ? kExitOk : kExitSuiteFailure;
}

int run_volume(const CommonOpts& o) {
    hgo::HeisenbergSpace space(o.n);
    auto reduction = hgo::integrate_1d(
        [&](double rho) {
            return std::pow(rho, 2 * o.n - 1) * 2.0 * std::sqrt(1.0 - std::pow(rho, 4));
        },
        hgo::Interval::finite(0.0, 1.0), hgo::QuadratureSpec{1e-14, 1e-12, 4000});
    const double area = 2.0 * std::pow(std::numbers::pi, o.n) / hgo::gamma_fn(o.n);
    const double vol_quad = area * reduction.value;
    auto mc = hgo::mc_integrate(
        [](const hgo::GroupPoint& x) { return hgo::koranyi_norm(x) <= 1.0 ? 1.0 : 0.0; },
        hgo::box_sampler(space, 1.0), hgo::MCSpec{o.samples, o.seed, 8});

    std::cout << "unit gauge ball, n = " << o.n << " (Q = " << space.Q() << ")\n"
              << "  closed form       " << hgo::detail::format_double(space.ball_volume()) << "\n"
              << "  quadrature        " << hgo::detail::format_double(vol_quad) << "\n"
              << "  monte carlo       " << hgo::detail::format_double(mc.value) << " +/- "
              << hgo::detail::format_double(mc.error_estimate) << "\n"
              << "  quoted formula    " << hgo::detail::format_double(space.quoted_ball_volume())
              << "\n"
              << "  quoted / computed "
              << hgo::detail::format_double(space.quoted_ball_volume() / space.ball_volume())
              << " (informational)\n"
              << "  omega_Q           " << hgo::detail::format_double(space.omega_q()) << "\n";

    if (!o.out.empty()) {
        nlohmann::json j = {{"n", o.n},
                            {"Q", space.Q()},
                            {"closed_form", space.ball_volume()},
                            {"quadrature", vol_quad},
                            {"monte_carlo", mc.value},
                            {"mc_std_error", mc.error_estimate},
                            {"mc_samples", o.samples},
                            {"quoted_formula", space.quoted_ball_volume()},
                            {"quoted_over_computed",
                             space.quoted_ball_volume() / space.ball_volume()},
                            {"omega_q", space.omega_q()}};
        if (o.format == "json") {
            hgo::write_text_file(resolve_out(o.out), j.dump(2) + "\n");
        } else {
            std::string csv =
                "n,closed_form,quadrature,monte_carlo,mc_std_error,quoted_formula,"
                "quoted_over_computed\n";
            csv += std::to_string(o.n) + ',' + hgo::detail::format_double(space.ball_volume()) +
                   ',' + hgo::detail::format_double(vol_quad) + ',' +
                   hgo::detail::format_double(mc.value) + ',' +
                   hgo::detail::format_double(mc.error_estimate) + ',' +
                   hgo::detail::format_double(space.quoted_ball_volume()) + ',' +
                   hgo::detail::format_double(space.quoted_ball_volume() / space.ball_volume()) +
                   '\n';
            hgo::write_text_file(resolve_out(o.out), csv);
        }
        std::cout << "wrote " << resolve_out(o.out).string() << "\n";
    }
    return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Sharp bounds of gauge-homogeneous integral operators on Heisenberg "
                 "groups in mixed radial-angular norms"};
    app.require_subcommand(1);
    app.set_config("--config", "", "Flat key=value config file; flags take precedence");

    CommonOpts opts;
    std::vector<std::string> operators{"hilbert"};
    std::vector<double> eps_grid;
    std::string filter;
    int jobs = 1;

    CLI::App* constants = app.add_subcommand("constants", "Evaluate sharp operator constants");
    add_space_options(constants, opts);
    add_exponent_options(constants, opts);
    add_output_options(constants, opts);
    constants->add_option("--operator", operators, "Operators: hilbert, hlp, mlinear")
        ->delimiter(',');

    CLI::App* sweep = app.add_subcommand("sweep", "Extremizer ratio sweeps");
    add_space_options(sweep, opts);
    add_exponent_options(sweep, opts);
    add_output_options(sweep, opts);
    sweep->add_option("--operator", operators, "Operators: hilbert, hlp, mlinear")
        ->delimiter(',');
    sweep->add_option("--eps-grid", eps_grid, "Strictly decreasing positive epsilon grid")
        ->delimiter(',');
    sweep->add_option("--jobs", jobs, "Run experiments concurrently (deterministic order)");

    CLI::App* suite = app.add_subcommand("suite", "Property suites (group axioms, norms, ...)");
    add_space_options(suite, opts);
    add_output_options(suite, opts);
    suite->add_option("--filter", filter,
                      "Run one suite: group-axioms, volume, norm-reduction, radialization, "
                      "minkowski-bound, im-recursion");

    CLI::App* volume = app.add_subcommand("volume", "Unit-ball volume cross-checks");
    add_space_options(volume, opts);
    add_output_options(volume, opts);

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::CallForAllHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return kExitInvalidConfig;
    }

    try {
        if (*constants) return run_constants(opts, operators);
        if (*sweep) return run_sweeps(opts, operators, eps_grid, jobs);
        if (*suite) return run_suite(opts, filter);
        if (*volume) return run_volume(opts);
    } catch (const hgo::DivergenceError& e) {
        std::cerr << "divergence: " << e.what() << "\n";
        return kExitDivergence;
    } catch (const hgo::AccuracyError& e) {
        std::cerr << "accuracy: " << e.what() << "\n";
        return kExitDivergence;
    } catch (const std::invalid_argument& e) {
        std::cerr << "invalid configuration: " << e.what() << "\n";
        return kExitInvalidConfig;
    } catch (const std::domain_error& e) {
        std::cerr << "invalid configuration: " << e.what() << "\n";
        return kExitInvalidConfig;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitInvalidConfig;
    }
    return kExitOk;
}
