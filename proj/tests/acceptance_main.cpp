// Acceptance suite: one pass/fail line per criterion, nonzero exit on any
// failure. Each criterion pins its tolerance in code; budgets are printed
// so regressions in runtime are visible too.

#include <chrono>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iostream>
#include <numbers>
#include <sstream>
#include <string>
#include <vector>

#include "hgo/hgo.hpp"
#include "hgo/report.hpp"

namespace {

const double kPi = std::numbers::pi;

struct Failure : std::runtime_error {
    using std::runtime_error::runtime_error;
};

void require(bool condition, const std::string& message) {
    if (!condition) throw Failure(message);
}

std::string cli_path;  // set from --cli

// ---------------------------------------------------------------- 1 ----
void criterion_ball_volume(std::ostream& log) {
    for (int n : {1, 2}) {
        hgo::HeisenbergSpace space(n);
        const double closed = space.ball_volume();

        auto reduced = hgo::integrate_1d(
            [n](double rho) {
                return std::pow(rho, 2 * n - 1) * 2.0 * std::sqrt(1.0 - std::pow(rho, 4));
            },
            hgo::Interval::finite(0.0, 1.0), hgo::QuadratureSpec{1e-14, 1e-12, 4000});
        const double area = 2.0 * std::pow(kPi, n) / hgo::gamma_fn(n);
        const double quad = area * reduced.value;
        require(std::abs(quad - closed) / closed <= 1e-10,
                "quadrature volume off at n=" + std::to_string(n));

        auto mc = hgo::mc_integrate(
            [](const hgo::GroupPoint& x) { return hgo::koranyi_norm(x) <= 1.0 ? 1.0 : 0.0; },
            hgo::box_sampler(space, 1.0), hgo::MCSpec{1000000, 2026, 16});
        require(std::abs(mc.value - closed) <= 3.0 * mc.error_estimate,
                "Monte Carlo volume off at n=" + std::to_string(n));

        log << "    n=" << n << ": closed " << closed << ", quad " << quad << ", mc "
            << mc.value << " +/- " << mc.error_estimate << ", quoted/computed "
            << space.quoted_ball_volume() / closed << " (informational)\n";
    }
}

// ---------------------------------------------------------------- 2 ----
void criterion_constant_E(std::ostream& log) {
    hgo::HeisenbergSpace space(1);
    auto kernel = hgo::KernelSpec::hilbert1(space);

    auto at2 = hgo::constant_E(kernel, 2.0, 2.0, 2.0);
    require(std::abs(at2.closed_form_value - kPi * kPi * kPi / 2.0) <=
                1e-12 * at2.closed_form_value,
            "closed form at p=2 is not pi^3/2");
    require(at2.relative_gap <= 1e-6, "quadrature gap at p=2 exceeds 1e-6");

    for (double p : {1.5, 3.0}) {
        auto report = hgo::constant_E(kernel, p, 2.0, 2.0);
        const double expected =
            (space.omega_q() / space.Q()) * hgo::beta_fn(1.0 - 1.0 / p, 1.0 / p);
        require(std::abs(report.closed_form_value - expected) <= 1e-12 * expected,
                "closed form at p=" + std::to_string(p));
        require(report.relative_gap <= 1e-6,
                "quadrature gap at p=" + std::to_string(p));
        log << "    p=" << p << ": " << report.closed_form_value << " (gap "
            << report.relative_gap << ")\n";
    }
    log << "    p=2: " << at2.closed_form_value << " (gap " << at2.relative_gap << ")\n";
}

// ---------------------------------------------------------------- 3 ----
void criterion_constant_G(std::ostream& log) {
    for (int n : {1, 2}) {
        hgo::HeisenbergSpace space(n);
        for (double p : {1.5, 2.0, 3.0}) {
            auto report = hgo::constant_G(space, p, 2.0, 2.0);
            require(report.relative_gap <= 1e-8,
                    "split quadrature gap at Q=" + std::to_string(space.Q()) +
                        ", p=" + std::to_string(p));
            log << "    Q=" << space.Q() << " p=" << p << ": " << report.closed_form_value
                << " (gap " << report.relative_gap << ")\n";
        }
    }
}

// ---------------------------------------------------------------- 4 ----
void criterion_im_identity(std::ostream& log) {
    double worst_quad = 0.0, worst_rec = 0.0;
    for (int i = 0; i < 100; ++i) {
        hgo::SampleRng rng(1234, static_cast<std::uint64_t>(i));
        const int m = 1 + (i % 2);
        std::vector<double> betas(static_cast<std::size_t>(m));
        double sum = 0.0;
        for (double& b : betas) {
            b = rng.uniform(0.15, 0.85);
            sum += b;
        }
        const double a = m - sum + rng.uniform(0.3, 2.5);

        const double closed = hgo::I_m(a, betas);
        auto quad = hgo::I_m_quadrature(a, betas, hgo::QuadratureSpec{1e-12, 3e-9, 4000});
        worst_quad = std::max(worst_quad, std::abs(quad.value - closed) / closed);

        const double b_m = betas.back();
        double recursed = hgo::beta_fn(1.0 - b_m, a + b_m - 1.0);
        if (m > 1) recursed *= hgo::I_m(a - 1.0 + b_m, std::span(betas).first(betas.size() - 1));
        worst_rec = std::max(worst_rec, std::abs(recursed - closed) / closed);
    }
    require(worst_quad <= 1e-6, "quadrature disagreement " + std::to_string(worst_quad));
    require(worst_rec <= 1e-11, "recursion defect " + std::to_string(worst_rec));
    log << "    worst quadrature gap " << worst_quad << ", worst recursion defect "
        << worst_rec << " over 100 draws\n";
}

// ---------------------------------------------------------------- 5 ----
void criterion_boundedness(std::ostream& log) {
    hgo::HeisenbergSpace space(1);
    const hgo::MixedNormParams params{2.0, 2.0};
    hgo::NormEvalSpec eval;

    int checked = 0;
    double worst_fraction = 0.0;
    for (auto kind : {hgo::KernelKind::Hilbert1, hgo::KernelKind::HLP}) {
        auto kernel = kind == hgo::KernelKind::Hilbert1 ? hgo::KernelSpec::hilbert1(space)
                                                        : hgo::KernelSpec::hlp(space);
        const double constant =
            kind == hgo::KernelKind::Hilbert1
                ? hgo::constant_E(kernel, params.p, params.p_bar, params.p_bar)
                      .closed_form_value
                : hgo::constant_G(space, params.p, params.p_bar, params.p_bar)
                      .closed_form_value;
        for (int i = 0; i < 50; ++i) {
            hgo::SampleRng rng(5001, static_cast<std::uint64_t>(i));
            const double c0 = rng.uniform(0.2, 1.0);
            const double c1 = rng.uniform(0.1, 1.0);
            const double alpha = rng.uniform(-1.5, 2.0);
            const double r0 = rng.uniform(0.05, 0.5);
            const double r1 = rng.uniform(1.0, 8.0);
            auto f = hgo::TestFunction::radial(
                [c0, c1, alpha](double r) { return c0 + c1 * std::pow(r, alpha); },
                hgo::Support::annulus(r0, r1));
            auto res = hgo::operator_ratio(kernel, f, params, params, space, eval);
            require(res.ratio <= constant + 3.0 * res.error + 1e-8 * constant,
                    std::string("bound violated for ") + to_string(kind) + " at draw " +
                        std::to_string(i));
            worst_fraction = std::max(worst_fraction, res.ratio / constant);
            ++checked;
        }
    }
    log << "    " << checked << " ratios, worst ratio/constant " << worst_fraction << "\n";
}

// ---------------------------------------------------------------- 6 ----
void criterion_sharpness(std::ostream& log) {
    for (std::string op : {"hilbert", "hlp"}) {
        hgo::ExperimentConfig cfg;
        cfg.operator_name = op;
        cfg.eps_grid = {0.5, 0.2, 0.1, 0.05, 0.02, 0.01};
        auto sweep = hgo::run_ratio_sweep(cfg);
        require(sweep.rows.size() == 6, op + ": unexpected row count");
        double previous = 0.0;
        for (const auto& row : sweep.rows) {
            require(row.valid, op + ": row marked invalid");
            require(row.ratio <= sweep.constant_value + 3.0 * row.ratio_error +
                                     1e-9 * sweep.constant_value,
                    op + ": ratio above the constant at eps=" + std::to_string(row.epsilon));
            require(row.ratio >= previous - 3.0 * row.ratio_error,
                    op + ": not monotone at eps=" + std::to_string(row.epsilon));
            previous = row.ratio;
        }
        require(sweep.monotone, op + ": monotone flag not set");
        require(sweep.rows.back().ratio >= 0.95 * sweep.constant_value,
                op + ": ratio at eps=0.01 below 0.95 of the constant");
        require(std::abs(sweep.extrapolated_limit - sweep.constant_value) <=
                    0.01 * sweep.constant_value,
                op + ": extrapolated limit misses the constant by more than 1%");
        log << "    " << op << ": ratio(0.01)/C = "
            << sweep.rows.back().ratio / sweep.constant_value
            << ", extrapolated/C = " << sweep.extrapolated_limit / sweep.constant_value
            << "\n";
    }
}

// ---------------------------------------------------------------- 7 ----
void criterion_proof_steps(std::ostream& log) {
    hgo::SuiteOptions opt;
    opt.n = 1;
    opt.seed = 424242;
    opt.mc_samples = 5000;
    opt.function_count = 20;
    opt.filter = "radialization";
    auto report = hgo::run_property_suite(opt);
    for (const auto& check : report.checks) {
        require(check.passed, check.suite + "/" + check.name + ": " + check.detail);
        log << "    " << check.name << ": " << check.detail << "\n";
    }
}

// ---------------------------------------------------------------- 8 ----
void criterion_group_algebra(std::ostream& log) {
    hgo::SuiteOptions opt;
    opt.n = 1;
    opt.seed = 31337;
    opt.samples = 10000;
    opt.volume_samples = 200000;
    opt.filter = "group-axioms";
    auto report = hgo::run_property_suite(opt);
    for (const auto& check : report.checks) {
        require(check.passed, check.suite + "/" + check.name + ": " + check.detail);
        log << "    " << check.name << ": " << check.detail << "\n";
    }
}

// ---------------------------------------------------------------- 9 ----
int run_command(const std::string& command) {
    return std::system(command.c_str());
}

std::string slurp(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    std::ostringstream os;
    os << in.rdbuf();
    return os.str();
}

void criterion_determinism(std::ostream& log) {
    require(!cli_path.empty(), "CLI path not supplied (pass --cli <path>)");
    namespace fs = std::filesystem;
    const fs::path dir = fs::temp_directory_path() / "hgo_acceptance_runs";
    fs::remove_all(dir);
    fs::create_directories(dir);

    const std::string base = cli_path +
                             " sweep --operator hilbert,hlp --n 1 --p 2"
                             " --eps-grid 0.5,0.2,0.1 --seed 7 --samples 5000 --tol 1e-9";
    struct Run {
        std::string args;
        std::string file;
    };
    const std::vector<Run> runs = {
        {" --format csv --jobs 1 --out ", "a.csv"},
        {" --format csv --jobs 1 --out ", "b.csv"},
        {" --format csv --jobs 2 --out ", "c.csv"},
        {" --format json --jobs 1 --out ", "a.json"},
        {" --format json --jobs 2 --out ", "b.json"},
    };
    for (const auto& run : runs) {
        const fs::path out = dir / run.file;
        const std::string cmd = base + run.args + out.string() + " > /dev/null";
        require(run_command(cmd) == 0, "CLI run failed: " + cmd);
    }
    const std::string a = slurp(dir / "a.csv");
    require(!a.empty(), "empty CSV output");
    require(a == slurp(dir / "b.csv"), "repeated CSV runs differ");
    require(a == slurp(dir / "c.csv"), "CSV differs under --jobs 2");
    const std::string aj = slurp(dir / "a.json");
    require(!aj.empty(), "empty JSON output");
    require(aj == slurp(dir / "b.json"), "JSON differs under --jobs 2");
    log << "    " << runs.size() << " CLI runs, byte-identical across repeats and --jobs\n";
}

}  // namespace

int main(int argc, char** argv) {
    for (int i = 1; i + 1 < argc; ++i)
        if (std::string(argv[i]) == "--cli") cli_path = argv[i + 1];

    struct Criterion {
        int id;
        std::string name;
        std::function<void(std::ostream&)> run;
    };
    const std::vector<Criterion> criteria = {
        {1, "ball volume: closed form vs quadrature vs Monte Carlo", criterion_ball_volume},
        {2, "Hilbert-kernel sharp constant vs Beta reduction", criterion_constant_E},
        {3, "max-kernel sharp constant vs split quadrature", criterion_constant_G},
        {4, "I_m Gamma identity and recursion", criterion_im_identity},
        {5, "operator boundedness below the sharp constant", criterion_boundedness},
        {6, "extremizer sharpness sweep and extrapolation", criterion_sharpness},
        {7, "radialization proof-step properties", criterion_proof_steps},
        {8, "group and gauge-norm algebra", criterion_group_algebra},
        {9, "deterministic reports across runs and jobs", criterion_determinism},
    };

    int failures = 0;
    for (const auto& criterion : criteria) {
        std::ostringstream detail;
        const auto start = std::chrono::steady_clock::now();
        bool passed = true;
        std::string why;
        try {
            criterion.run(detail);
        } catch (const std::exception& e) {
            passed = false;
            why = e.what();
        }
        const auto elapsed = std::chrono::duration<double>(
                                 std::chrono::steady_clock::now() - start)
                                 .count();
        std::cout << (passed ? "[PASS]" : "[FAIL]") << " criterion " << criterion.id << ": "
                  << criterion.name << " (" << elapsed << " s)\n";
        if (!passed) {
            std::cout << "    reason: " << why << "\n";
            ++failures;
        }
        std::cout << detail.str();
    }
    std::cout << (failures == 0 ? "ALL CRITERIA PASSED" : "FAILURES: " + std::to_string(failures))
              << "\n";
    return failures == 0 ? 0 : 1;
}
