#include "cli.hpp"

#include "invasion/error.hpp"
#include "invasion/kernels/rhs.hpp"

#include <CLI11.hpp>

#include <chrono>
#include <ctime>
#include <fstream>
#include <iomanip>
#include <ostream>
#include <sstream>

#ifndef INVASION_VERSION
#define INVASION_VERSION "unknown"
#endif

namespace invasion::cli {

namespace {

using nlohmann::json;
using Clock = std::chrono::system_clock;

std::string iso_time(Clock::time_point t)
{
    const std::time_t tt = Clock::to_time_t(t);
    std::tm tm{};
    gmtime_r(&tt, &tm);
    std::ostringstream s;
    s << std::put_time(&tm, "%Y-%m-%dT%H:%M:%SZ");
    return s.str();
}

json runs_json(const std::vector<RunRecord>& runs)
{
    json arr = json::array();
    for (const RunRecord& r : runs) {
        json j{{"id", r.id}, {"status", r.ok ? "ok" : "failed"}};
        if (!r.message.empty()) {
            j["message"] = r.message;
        }
        arr.push_back(std::move(j));
    }
    return arr;
}

void write_record(const std::filesystem::path& path, const json& doc)
{
    std::ofstream out(path);
    out << doc.dump(2) << '\n';
}

std::string error_kind(const std::exception& e)
{
    if (dynamic_cast<const DomainError*>(&e)) {
        return "domain";
    }
    if (dynamic_cast<const IntegrationError*>(&e)) {
        return "integration";
    }
    if (dynamic_cast<const NoBracketError*>(&e)) {
        return "no_bracket";
    }
    if (dynamic_cast<const RankDeficientError*>(&e)) {
        return "rank_deficient";
    }
    if (dynamic_cast<const SolverError*>(&e)) {
        return "solver";
    }
    return "runtime";
}

// Options shared by every subcommand live on the root app; fallthrough lets
// them follow the subcommand name, and the config file's top level sets them.
void add_common(CLI::App& app, ExperimentConfig& cfg)
{
    app.set_config("--config", "", "INI file: top-level keys for shared options, [subcommand] sections for the rest");
    app.add_option("--out", cfg.out_dir, "output directory");
    app.add_flag("--overwrite", cfg.overwrite, "replace the files of an earlier run in --out");
    app.add_option("--gamma", cfg.gamma, "resident death rate");
    app.add_option("--v0", cfg.v0, "initial / far-field resident density");
    app.add_option("--ic", cfg.ic, "initial condition for u")->check(CLI::IsMember({"compact", "exp"}));
    app.add_option("--a", cfg.a, "decay rate of exp initial data");
    app.add_option("--L", cfg.length, "domain length");
    app.add_option("--N", cfg.cells, "number of cells");
    app.add_option("--t-end", cfg.t_end, "final time");
    app.add_option("--tol-rel", cfg.tol_rel, "relative tolerance of the PDE integrator");
    app.add_option("--tol-abs", cfg.tol_abs, "absolute tolerance of the PDE integrator");
    app.add_option("--gamma-min", cfg.gamma_min, "smallest gamma on branch grids");
    app.add_option("--gamma-max", cfg.gamma_max, "largest gamma on branch grids");
    app.add_option("--per-decade", cfg.per_decade, "branch grid points per decade of gamma");
    app.add_option("--threads", cfg.threads, "worker threads for independent runs");
    app.fallthrough();
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err)
{
    ExperimentConfig cfg;
    CLI::App app{"Numerical experiments for a two-species cell-invasion model", "invasion"};
    add_common(app, cfg);
    app.set_version_flag("--version", INVASION_VERSION);
    app.require_subcommand(1);

    auto* simulate = app.add_subcommand("simulate", "run the PDE and fit the front speed");
    simulate->add_option("--snapshots", cfg.snapshots, "number of profile snapshots, including t = 0 and t_end");

    auto* fit = app.add_subcommand("fit-speed", "fit x_f = c t + k0 log t + k1 to a front trace CSV");
    fit->add_option("--trace", cfg.trace, "CSV with columns t and x_f")->required();
    fit->add_option("--t-min", cfg.t_min, "window start (default: half the trace span)");
    fit->add_option("--t-max", cfg.t_max, "window end");

    auto* traj = app.add_subcommand("tw-trajectory", "one travelling-wave orbit ending at V = v0");
    traj->add_option("--c", cfg.c, "wave speed (default: the speed selected by the initial data)");
    traj->add_option("--shot", cfg.shot, "rear or front shooting")->check(CLI::IsMember({"rear", "front"}));

    auto* branch = app.add_subcommand("tw-branch", "selected speed c(gamma) for each V_inf");
    branch->add_option("--v-inf", cfg.v_infs, "far-field densities");

    auto* asy = app.add_subcommand("asymptotics", "A0, A_I(V_inf) and matching reports");
    asy->add_option("--v-inf", cfg.v_infs, "far-field densities");

    auto* sweep = app.add_subcommand("sweep", "PDE speed estimates over a parameter grid");
    sweep->add_option("--gammas", cfg.gammas, "gamma grid");
    sweep->add_option("--v0s", cfg.v0s, "v0 grid (default: --v0)");
    sweep->add_option("--as", cfg.as, "decay rates; nonempty selects exp initial data");

    auto* repro = app.add_subcommand("reproduce", "data behind one of the figures");
    repro->add_option("figure", cfg.figure, "fig1 .. fig6")->required();
    repro->add_option("--v-inf", cfg.v_infs, "branches for fig2 and fig5");
    repro->add_option("--pde-gammas", cfg.pde_gammas, "gammas of the PDE estimates in fig2 and fig6");
    repro->add_option("--snapshots", cfg.snapshots, "profile snapshots per fig1 case");

    std::vector<const char*> argv;
    for (const auto& a : args) {
        argv.push_back(a.c_str());
    }
    try {
        app.parse(static_cast<int>(argv.size()), argv.data());
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e, out, err);
        return code == 0 ? 0 : 2;
    }
    cfg.mode = app.get_subcommands().front()->get_name();
    const json config = cfg.to_json();

    try {
        cfg.validate();
    } catch (const DomainError& e) {
        err << json{{"status", "invalid"}, {"kind", "validation"}, {"message", e.what()}}.dump() << '\n';
        return 2;
    }

    std::optional<OutputDir> dir;
    try {
        dir.emplace(cfg.out_dir, cfg.overwrite);
    } catch (const std::exception& e) {
        err << json{{"status", "invalid"}, {"kind", "output"}, {"message", e.what()}}.dump() << '\n';
        return 2;
    }

    const auto start = Clock::now();
    const auto steady0 = std::chrono::steady_clock::now();
    json manifest{{"tool", "invasion"},
                  {"version", INVASION_VERSION},
                  {"command", cfg.mode},
                  {"config", config},
                  {"kernel_isa", kernels::isa_name(kernels::detect_isa())},
                  {"started", iso_time(start)}};
    try {
        CommandResult r;
        if (cfg.mode == "simulate") {
            r = cmd_simulate(cfg, *dir);
        } else if (cfg.mode == "fit-speed") {
            r = cmd_fit_speed(cfg, *dir);
        } else if (cfg.mode == "tw-trajectory") {
            r = cmd_tw_trajectory(cfg, *dir);
        } else if (cfg.mode == "tw-branch") {
            r = cmd_tw_branch(cfg, *dir);
        } else if (cfg.mode == "asymptotics") {
            r = cmd_asymptotics(cfg, *dir);
        } else if (cfg.mode == "sweep") {
            r = cmd_sweep(cfg, *dir);
        } else {
            r = cmd_reproduce(cfg, *dir);
        }
        manifest["status"] = "ok";
        manifest["runs"] = runs_json(r.runs);
        manifest["results"] = r.results;
        manifest["files"] = dir->files_json();
        manifest["finished"] = iso_time(Clock::now());
        manifest["wall_clock_s"] = std::chrono::duration<double>(std::chrono::steady_clock::now() - steady0).count();
        write_record(dir->path() / "manifest.json", manifest);
        out << manifest["results"].dump(2) << '\n';
        return 0;
    } catch (const std::exception& e) {
        json record = manifest;
        record["status"] = "failed";
        record["error"] = {{"kind", error_kind(e)}, {"message", e.what()}};
        if (const auto* ie = dynamic_cast<const IntegrationError*>(&e)) {
            record["error"]["at"] = ie->at();
        }
        record["files"] = dir->files_json();
        record["finished"] = iso_time(Clock::now());
        write_record(dir->path() / "error.json", record);
        err << record["error"].dump() << '\n';
        return 1;
    }
}

}  // namespace invasion::cli
