// cvpm: runs the contextuality-test pipelines from a config file and writes
// JSON/CSV reports. Subcommands: square, commutativity, bench, sweep.
//
// Exit codes: 0 success, 2 config error, 3 numeric guard failure.

#include <chrono>
#include <cstdlib>
#include <ctime>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>

#include <CLI11.hpp>

#include "cvpm/analysis.hpp"
#include "cvpm/circuits.hpp"
#include "cvpm/config.hpp"
#include "cvpm/io.hpp"

namespace fs = std::filesystem;
using namespace cvpm;

namespace {

constexpr int exit_ok = 0;
constexpr int exit_config = 2;
constexpr int exit_numeric = 3;

struct CommonArgs {
    std::string config_path;
    std::optional<std::uint64_t> seed;
    std::string out_dir;
};

void add_common(CLI::App* cmd, CommonArgs& args) {
    cmd->add_option("--config", args.config_path, "Config file path")->required();
    cmd->add_option("--seed", args.seed, "RNG seed (overrides config)");
    cmd->add_option("--out", args.out_dir, "Output directory (overrides CVPM_OUT_DIR)");
}

std::string resolve_out_dir(const CommonArgs& args) {
    if (!args.out_dir.empty()) return args.out_dir;
    if (const char* env = std::getenv("CVPM_OUT_DIR"); env && *env) return env;
    return ".";
}

std::string read_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

std::string now_iso8601() {
    auto t = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
    char buf[32];
    std::tm tm{};
    gmtime_r(&t, &tm);
    std::strftime(buf, sizeof(buf), "%Y-%m-%dT%H:%M:%SZ", &tm);
    return buf;
}

struct RunContext {
    ConfigMap config;
    std::string out_dir;
    RunManifest manifest;
};

RunContext begin_run(const std::string& command, const CommonArgs& args) {
    RunContext ctx{ConfigMap::parse_file(args.config_path), resolve_out_dir(args), {}};
    fs::create_directories(ctx.out_dir);
    ctx.manifest.command = command;
    ctx.manifest.config_path = args.config_path;
    ctx.manifest.config_echo = read_file(args.config_path);
    ctx.manifest.timestamp = now_iso8601();
    return ctx;
}

void emit(RunContext& ctx, const std::string& name, const std::string& content) {
    write_text_file(ctx.out_dir + "/" + name, content);
    ctx.manifest.digests.emplace_back(name, content_digest(content));
    std::cout << "wrote " << ctx.out_dir << "/" << name << "\n";
}

void finish_run(RunContext& ctx) {
    write_json_file(ctx.out_dir + "/manifest.json", ctx.manifest.to_json());
    std::cout << "wrote " << ctx.out_dir << "/manifest.json\n";
}

ExperimentConfig load_experiment(const RunContext& ctx, const CommonArgs& args) {
    ExperimentConfig cfg = experiment_from_config(ctx.config);
    if (args.seed) cfg.rng_seed = *args.seed;
    return cfg;
}

int cmd_square(const CommonArgs& args) {
    RunContext ctx = begin_run("square", args);
    ExperimentConfig cfg = load_experiment(ctx, args);
    ctx.manifest.seed = cfg.rng_seed;
    InequalityReport rep = run_pm_experiment(cfg);
    emit(ctx, "square.json", square_report_json(rep, cfg.rng_seed).dump(2) + "\n");
    emit(ctx, "square.csv", square_report_csv(rep));
    finish_run(ctx);
    std::cout << "L = " << fmt17(rep.L) << " (bound " << fmt17(nc_bound())
              << (rep.violation ? ", violated)" : ", not violated)") << "\n";
    return exit_ok;
}

int cmd_commutativity(const CommonArgs& args) {
    RunContext ctx = begin_run("commutativity", args);
    ExperimentConfig cfg = load_experiment(ctx, args);
    ctx.manifest.seed = cfg.rng_seed;
    KappaReport rep = run_commutativity_suite(cfg);
    emit(ctx, "kappa.csv", kappa_report_csv(rep));
    finish_run(ctx);
    std::cout << "mean kappa = " << fmt17(rep.mean_kappa) << ", max = " << fmt17(rep.max_kappa)
              << "\n";
    if (rep.max_kappa >= 0.03)
        std::cout << "note: max kappa exceeds the 0.03 sanity bound; check Sagnac visibility\n";
    return exit_ok;
}

int cmd_bench(const CommonArgs& args) {
    RunContext ctx = begin_run("bench", args);
    BenchConfig cfg = bench_from_config(ctx.config);
    if (args.seed) ctx.manifest.seed = *args.seed;
    json j = bench_report_json(cfg);
    emit(ctx, "bench.json", j.dump(2) + "\n");
    finish_run(ctx);
    if (!j["product_ok"].get<bool>())
        std::cout << "advisory: " << j["advisory"].get<std::string>() << "\n";
    return exit_ok;
}

// Analytic L for the current config: dephased backend expectations, no sampling.
double analytic_L(const ExperimentConfig& cfg, bool guard = true) {
    PMSquare sq = build_pm_square(cfg.effective_square_params());
    std::array<double, 6> e{};
    for (int i = 0; i < 6; ++i) {
        auto ops = context_ops(sq, all_contexts()[static_cast<size_t>(i)]);
        double re;
        if (cfg.backend.kind == BackendKind::Fock && !guard) {
            TwoModeFockState st = cfg.probe.fock(cfg.backend.cutoff);
            re = std::real(fock_expectation(st, ops, false));
        } else {
            re = std::real(backend_expectation(cfg, ops));
        }
        double p = dephase(0.5 * (1.0 + re), effective_visibility(cfg.noise, i));
        e[static_cast<size_t>(i)] = 2.0 * p - 1.0;
    }
    return evaluate_L(e);
}

int cmd_sweep(const CommonArgs& args) {
    RunContext ctx = begin_run("sweep", args);
    ExperimentConfig base = load_experiment(ctx, args);
    ctx.manifest.seed = base.rng_seed;
    SweepSpec spec = sweep_from_config(ctx.config);

    std::vector<SweepRow> rows;
    const double nan = std::numeric_limits<double>::quiet_NaN();
    std::uint64_t idx = 0;
    for (double v : spec.values) {
        ExperimentConfig cfg = base;
        cfg.rng_seed = detail::splitmix64(base.rng_seed ^ idx++);
        SweepRow row;
        row.value = v;
        if (spec.parameter == "cutoff") {
            cfg.backend.kind = BackendKind::Fock;
            cfg.backend.cutoff = static_cast<int>(v);
            cfg.validate();
            // Guard off: small cutoffs are the point of this sweep.
            row.L = analytic_L(cfg, false);
            row.significance = nan;
            // Kappa is backend-independent; use the closed form so small
            // cutoffs do not trip the truncation guard.
            ExperimentConfig kcfg = cfg;
            kcfg.backend.kind = BackendKind::Gaussian;
            row.corrected_bound = corrected_bound(analytic_kappa_report(kcfg), cfg.slots_per_context);
            auto scan = convergence_scan(build_pm_square(cfg.effective_square_params()),
                                         {cfg.backend.cutoff});
            row.max_deviation = scan.front().max_deviation;
        } else {
            if (spec.parameter == "visibility") cfg.noise.visibility_hadamard = v;
            else if (spec.parameter == "g2") cfg.noise.g2 = v;
            else if (spec.parameter == "eps_q") cfg.noise.calib_eps_q = v;
            else cfg.noise.calib_eps_p = v;
            cfg.validate();
            row.L = analytic_L(cfg);
            InequalityReport rep = run_pm_experiment(cfg);
            row.significance = rep.significance;
            row.corrected_bound = rep.corrected_bound;
            row.max_deviation = nan;
        }
        rows.push_back(row);
    }
    emit(ctx, "sweep.csv", sweep_csv(spec.parameter, rows));
    finish_run(ctx);
    return exit_ok;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Hybrid qubit-qumode contextuality-test simulator"};
    app.require_subcommand(1);

    CommonArgs square_args, comm_args, bench_args, sweep_args;
    CLI::App* square = app.add_subcommand("square", "Run the full six-context inequality experiment");
    add_common(square, square_args);
    CLI::App* comm = app.add_subcommand("commutativity", "Run the 18-pair commutativity suite");
    add_common(comm, comm_args);
    CLI::App* bench = app.add_subcommand("bench", "Map optical bench parameters to phase space");
    add_common(bench, bench_args);
    CLI::App* sweep = app.add_subcommand("sweep", "Sweep one parameter and tabulate L");
    add_common(sweep, sweep_args);

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        return app.exit(e) == 0 ? exit_ok : exit_config;
    }

    try {
        if (square->parsed()) return cmd_square(square_args);
        if (comm->parsed()) return cmd_commutativity(comm_args);
        if (bench->parsed()) return cmd_bench(bench_args);
        return cmd_sweep(sweep_args);
    } catch (const ConfigError& e) {
        std::cerr << "config error: " << e.what() << "\n";
        return exit_config;
    } catch (const TruncationError& e) {
        std::cerr << "numeric guard: " << e.what()
                  << "\nhint: raise [backend] cutoff or reduce displacements/squeezing\n";
        return exit_numeric;
    } catch (const std::invalid_argument& e) {
        std::cerr << "config error: " << e.what() << "\n";
        return exit_config;
    } catch (const std::exception& e) {
        std::cerr << "numeric guard: " << e.what() << "\n";
        return exit_numeric;
    }
}
