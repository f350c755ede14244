#include "cli.hpp"
#include "detail.hpp"

#include "invasion/asym.hpp"
#include "invasion/error.hpp"
#include "invasion/tw.hpp"

#include <charconv>
#include <cmath>
#include <fstream>
#include <sstream>

namespace invasion::cli {

namespace detail {

const std::vector<std::string> fit_columns{"model", "c", "k0", "k1", "c_stderr", "rms", "samples", "t_min", "t_max"};

pde::InitialCondition make_ic(const std::string& kind, double a, double v0)
{
    return kind == "exp" ? pde::InitialCondition::exponential(a, v0) : pde::InitialCondition::compact(v0);
}

PdeJob job_from_config(const ExperimentConfig& cfg)
{
    PdeJob job;
    job.params = {cfg.gamma, cfg.v0};
    job.ic = make_ic(cfg.ic, cfg.a, cfg.v0);
    job.grid = {cfg.length, cfg.cells};
    job.t_end = cfg.t_end;
    job.tol = {cfg.tol_rel, cfg.tol_abs, {}};
    return job;
}

PdeOutcome run_pde(const PdeJob& job)
{
    pde::RunOptions opt;
    opt.tol = job.tol;
    opt.guard = pde::GuardPolicy::truncate;
    PdeOutcome o;
    o.run = pde::run(job.params, job.ic, job.grid, job.t_end, job.output_times, opt);
    try {
        const speedfit::Window w = speedfit::default_window(o.run.trace);
        o.fit = speedfit::fit_speed(o.run.trace, w);
        o.linear = speedfit::fit_linear(o.run.trace, w);
    } catch (const SolverError& e) {
        o.fit_note = e.what();
    } catch (const RankDeficientError& e) {
        o.fit_note = e.what();
    }
    return o;
}

std::vector<double> snapshot_times(double t_end, std::size_t n)
{
    std::vector<double> t(n);
    for (std::size_t k = 0; k < n; ++k) {
        t[k] = k + 1 == n ? t_end : t_end * static_cast<double>(k) / static_cast<double>(n - 1);
    }
    return t;
}

io::Metadata pde_metadata(const PdeJob& job)
{
    io::Metadata m{
        {"gamma", io::format_double(job.params.gamma)},
        {"v0", io::format_double(job.params.v_inf)},
        {"ic", job.ic.kind_name()},
    };
    if (const auto* e = std::get_if<pde::ExponentialIc>(&job.ic.shape)) {
        m.emplace_back("a", io::format_double(e->a));
    }
    const io::Metadata g = grid_metadata(job);
    m.insert(m.end(), g.begin(), g.end());
    return m;
}

io::Metadata grid_metadata(const PdeJob& job)
{
    return {
        {"L", io::format_double(job.grid.length)},
        {"N", std::to_string(job.grid.cells)},
        {"t_end", io::format_double(job.t_end)},
        {"tol_rel", io::format_double(job.tol.rel)},
        {"tol_abs", io::format_double(job.tol.abs)},
    };
}

std::vector<std::vector<double>> trace_rows(const pde::FrontTrace& trace)
{
    std::vector<std::vector<double>> rows;
    rows.reserve(trace.samples.size());
    for (const auto& s : trace.samples) {
        rows.push_back({s.t, s.x_f});
    }
    return rows;
}

std::vector<std::vector<double>> profile_rows(const std::vector<pde::PdeState>& states)
{
    std::vector<std::vector<double>> rows;
    for (const auto& s : states) {
        for (std::size_t i = 0; i < s.u.size(); ++i) {
            rows.push_back({s.t, s.grid.x(i), s.u[i], s.v[i]});
        }
    }
    return rows;
}

nlohmann::json fit_json(const PdeOutcome& o)
{
    nlohmann::json j{{"guard_hit", o.run.guard_hit}, {"t_final", o.run.final_state.t}};
    if (o.fit) {
        j["c"] = o.fit->c;
        j["k0"] = o.fit->k0;
        j["k1"] = o.fit->k1;
        j["c_stderr"] = o.fit->c_stderr;
        j["window"] = {o.fit->window.t_min, o.fit->window.t_max};
    } else {
        j["fit_error"] = o.fit_note;
    }
    return j;
}

std::vector<std::vector<std::string>> fit_table(const std::optional<speedfit::SpeedFit>& fit,
                                                const std::optional<speedfit::LinearFit>& linear)
{
    using io::format_double;
    std::vector<std::vector<std::string>> rows;
    if (fit) {
        rows.push_back({"log_corrected", format_double(fit->c), format_double(fit->k0), format_double(fit->k1),
                        format_double(fit->c_stderr), format_double(fit->rms), std::to_string(fit->samples),
                        format_double(fit->window.t_min), format_double(fit->window.t_max)});
    }
    if (linear) {
        rows.push_back({"linear", format_double(linear->c), "0", format_double(linear->k1), "nan",
                        format_double(linear->rms), std::to_string(linear->samples),
                        format_double(linear->window.t_min), format_double(linear->window.t_max)});
    }
    return rows;
}

pde::FrontTrace read_trace(const std::filesystem::path& path, double fallback_length)
{
    std::ifstream in(path);
    if (!in) {
        throw DomainError("cannot read trace file " + path.string());
    }
    pde::FrontTrace tr;
    tr.domain_length = fallback_length;
    std::string line;
    int col_t = -1, col_x = -1;
    std::size_t lineno = 0;
    const auto parse = [&](std::string_view cell) {
        double x = 0;
        const auto [p, ec] = std::from_chars(cell.data(), cell.data() + cell.size(), x);
        if (ec != std::errc{} || p != cell.data() + cell.size()) {
            throw DomainError(path.string() + ":" + std::to_string(lineno) + ": not a number: " + std::string(cell));
        }
        return x;
    };
    while (std::getline(in, line)) {
        ++lineno;
        if (!line.empty() && line.back() == '\r') {
            line.pop_back();
        }
        if (line.empty()) {
            continue;
        }
        if (line[0] == '#') {
            const auto eq = line.find('=');
            if (eq != std::string::npos) {
                std::string key = line.substr(1, eq - 1);
                key.erase(0, key.find_first_not_of(' '));
                key.erase(key.find_last_not_of(' ') + 1);
                if (key == "L") {
                    tr.domain_length = parse(std::string_view(line).substr(line.find_first_not_of(' ', eq + 1)));
                }
            }
            continue;
        }
        std::vector<std::string> cells;
        std::stringstream ss(line);
        for (std::string c; std::getline(ss, c, ',');) {
            cells.push_back(c);
        }
        if (col_t < 0) {
            for (std::size_t i = 0; i < cells.size(); ++i) {
                if (cells[i] == "t") {
                    col_t = static_cast<int>(i);
                } else if (cells[i] == "x_f") {
                    col_x = static_cast<int>(i);
                }
            }
            if (col_t < 0 || col_x < 0) {
                throw DomainError(path.string() + ": header must name columns t and x_f");
            }
            continue;
        }
        if (cells.size() <= static_cast<std::size_t>(std::max(col_t, col_x))) {
            throw DomainError(path.string() + ":" + std::to_string(lineno) + ": short row");
        }
        tr.samples.push_back({parse(cells[col_t]), parse(cells[col_x])});
    }
    if (tr.samples.empty()) {
        throw DomainError(path.string() + ": no samples");
    }
    return tr;
}

}  // namespace detail

using detail::label;

CommandResult cmd_simulate(const ExperimentConfig& cfg, OutputDir& out)
{
    detail::PdeJob job = detail::job_from_config(cfg);
    job.output_times = detail::snapshot_times(cfg.t_end, cfg.snapshots);
    const detail::PdeOutcome o = detail::run_pde(job);
    const io::Metadata meta = detail::pde_metadata(job);

    out.write_csv("front_trace.csv", "front position x_f(t) after every accepted step", {"t", "x_f"},
                  detail::trace_rows(o.run.trace), meta);
    out.write_csv("snapshots.csv", "u and v profiles at the snapshot times", {"t", "x", "u", "v"},
                  detail::profile_rows(o.run.states), meta);
    if (o.fit) {
        out.write_csv_text("speed_fit.csv", "x_f = c t + k0 log t + k1 and the plain linear fit",
                           detail::fit_columns, detail::fit_table(o.fit, o.linear), meta);
    }

    CommandResult r;
    r.results = detail::fit_json(o);
    r.results["steps"] = o.run.stats.steps;
    r.results["rejected"] = o.run.stats.rejected;
    r.runs.push_back({"simulate", true, o.fit ? "" : "no speed fit: " + o.fit_note});
    return r;
}

CommandResult cmd_fit_speed(const ExperimentConfig& cfg, OutputDir& out)
{
    const pde::FrontTrace tr = detail::read_trace(cfg.trace, cfg.length);
    speedfit::Window w = speedfit::default_window(tr);
    if (cfg.t_min) {
        w.t_min = *cfg.t_min;
    }
    if (cfg.t_max) {
        w.t_max = *cfg.t_max;
    }
    const speedfit::SpeedFit f = speedfit::fit_speed(tr, w);
    const speedfit::LinearFit l = speedfit::fit_linear(tr, w);
    out.write_csv_text("speed_fit.csv", "x_f = c t + k0 log t + k1 and the plain linear fit", detail::fit_columns,
                       detail::fit_table(f, l), {{"trace", cfg.trace.filename().string()}});
    CommandResult r;
    r.results = {{"c", f.c}, {"k0", f.k0}, {"k1", f.k1}, {"c_stderr", f.c_stderr}, {"window", {w.t_min, w.t_max}}};
    return r;
}

namespace {

std::vector<std::vector<double>> orbit_rows(const tw::TwTrajectory& t, double shift = 0.0)
{
    std::vector<std::vector<double>> rows;
    rows.reserve(t.samples.size());
    for (const auto& s : t.samples) {
        rows.push_back({s.z - shift, s.u, s.v, s.w});
    }
    return rows;
}

io::Metadata orbit_metadata(const tw::TwTrajectory& t, const std::string& shot)
{
    return {
        {"gamma", io::format_double(t.gamma)},
        {"c", io::format_double(t.c)},
        {"shot", shot},
        {"v_end", io::format_double(t.v_end)},
        {"tail", std::string(tw::tail_name(t.tail))},
        {"termination", std::string(tw::termination_name(t.termination))},
        {"rear_residual", io::format_double(t.rear_residual)},
    };
}

}  // namespace

CommandResult cmd_tw_trajectory(const ExperimentConfig& cfg, OutputDir& out)
{
    const std::optional<double> a = cfg.ic == "exp" ? std::optional<double>(cfg.a) : std::nullopt;
    const double c = cfg.c ? *cfg.c : tw::selected_speed(cfg.gamma, cfg.v0, a);
    const tw::TwTrajectory t = cfg.shot == "rear" ? tw::shoot_to_axis(cfg.gamma, c, cfg.v0)
                                                  : tw::shoot_from_front(cfg.gamma, c, cfg.v0);
    out.write_csv("trajectory.csv", "travelling-wave orbit (U, V, W) against z", {"z", "u", "v", "w"},
                  orbit_rows(t), orbit_metadata(t, cfg.shot));
    CommandResult r;
    r.results = {{"c", c},
                 {"v_end", t.v_end},
                 {"tail", tw::tail_name(t.tail)},
                 {"termination", tw::termination_name(t.termination)},
                 {"rear_residual", t.rear_residual}};
    return r;
}

CommandResult cmd_tw_branch(const ExperimentConfig& cfg, OutputDir& out)
{
    const std::vector<double> gammas = log_grid(cfg.gamma_min, cfg.gamma_max, cfg.per_decade);
    CommandResult r;
    for (double v : cfg.v_infs) {
        std::vector<tw::BranchPoint> pts(gammas.size());
        parallel_for(gammas.size(), cfg.threads, [&](std::size_t i) { pts[i] = tw::branch_speed(gammas[i], v); });
        std::vector<std::vector<std::string>> rows;
        for (const auto& b : pts) {
            rows.push_back({io::format_double(b.gamma), io::format_double(b.c), std::string(tw::regime_name(b.regime))});
        }
        out.write_csv_text("branch_v" + label(v) + ".csv", "selected wave speed c(gamma) at V_inf = " + label(v),
                           {"gamma", "c", "regime"}, rows, {{"v_inf", io::format_double(v)}});
        r.runs.push_back({"branch_v" + label(v), true, ""});
    }
    return r;
}

CommandResult cmd_asymptotics(const ExperimentConfig& cfg, OutputDir& out)
{
    const asym::OuterWave o = asym::outer_wave();
    out.write_csv("a0.csv", "outer Fisher-KPP tail prefactor", {"A0", "ell_limit", "z_plateau"},
                  {{o.a0, o.ell_limit, o.z_plateau}});

    std::vector<asym::InnerWave> inner(cfg.v_infs.size());
    parallel_for(inner.size(), cfg.threads, [&](std::size_t i) { inner[i] = asym::inner_wave(cfg.v_infs[i]); });
    std::vector<std::vector<double>> rows;
    for (const auto& w : inner) {
        rows.push_back({w.v_inf, w.a_inner, w.lambda});
    }
    out.write_csv("a_inner.csv", "inner-problem rear prefactor A_I(V_inf)", {"V_inf", "A_I", "Lambda"}, rows);

    std::vector<double> gammas;
    for (double g : log_grid(cfg.gamma_min, cfg.gamma_max, cfg.per_decade)) {
        if (g > 1.0) {
            gammas.push_back(g);
        }
    }
    std::vector<asym::MatchReport> reports(gammas.size() * inner.size());
    parallel_for(reports.size(), cfg.threads, [&](std::size_t k) {
        const auto& w = inner[k % inner.size()];
        const double g = gammas[k / inner.size()];
        reports[k] = asym::validate_matching(g, w.v_inf, tw::branch_speed(g, w.v_inf), o.a0, w.a_inner);
    });
    std::vector<std::vector<double>> mrows;
    for (const auto& m : reports) {
        mrows.push_back({m.gamma, m.v_inf, m.delta_num, m.delta_one, m.delta_two, m.delta1, m.ratio});
    }
    out.write_csv("matching.csv", "computed delta = 2 - c against the one- and two-term predictions",
                  {"gamma", "V_inf", "delta_num", "delta_one", "delta_two", "delta1", "ratio"}, mrows);

    CommandResult r;
    r.results["A0"] = o.a0;
    for (const auto& w : inner) {
        r.results["A_I"][label(w.v_inf)] = w.a_inner;
    }
    return r;
}

CommandResult cmd_sweep(const ExperimentConfig& cfg, OutputDir& out)
{
    struct Point {
        double gamma, v0;
        std::string ic;
        double a;
    };
    const std::vector<double> v0s = cfg.v0s.empty() ? std::vector<double>{cfg.v0} : cfg.v0s;
    std::vector<Point> grid;
    for (double g : cfg.gammas) {
        for (double v : v0s) {
            if (cfg.as.empty()) {
                grid.push_back({g, v, cfg.ic, cfg.a});
            } else {
                for (double a : cfg.as) {
                    grid.push_back({g, v, "exp", a});
                }
            }
        }
    }

    struct Row {
        std::optional<detail::PdeOutcome> outcome;
        std::string error;
    };
    std::vector<Row> rows(grid.size());
    parallel_for(grid.size(), cfg.threads, [&](std::size_t i) {
        const Point& p = grid[i];
        detail::PdeJob job = detail::job_from_config(cfg);
        job.params = {p.gamma, p.v0};
        try {
            job.ic = detail::make_ic(p.ic, p.a, p.v0);
            rows[i].outcome = detail::run_pde(job);
            if (!rows[i].outcome->fit) {
                rows[i].error = "no speed fit: " + rows[i].outcome->fit_note;
            }
        } catch (const std::exception& e) {
            rows[i].error = e.what();
        }
    });

    using io::format_double;
    const std::string nan = "nan";
    std::vector<std::vector<std::string>> table;
    CommandResult r;
    for (std::size_t i = 0; i < grid.size(); ++i) {
        const Point& p = grid[i];
        const Row& row = rows[i];
        const auto& f = row.outcome ? row.outcome->fit : std::nullopt;
        const bool ok = row.error.empty();
        table.push_back({std::to_string(i), format_double(p.gamma), format_double(p.v0), p.ic,
                         p.ic == "exp" ? format_double(p.a) : nan, f ? format_double(f->c) : nan,
                         f ? format_double(f->k0) : nan, f ? format_double(f->k1) : nan,
                         f ? format_double(f->c_stderr) : nan, f ? format_double(f->rms) : nan,
                         row.outcome ? std::to_string(static_cast<int>(row.outcome->run.guard_hit)) : nan,
                         ok ? "ok" : "failed", detail::csv_cell(row.error)});
        r.runs.push_back({std::to_string(i), ok, row.error});
    }
    const io::Metadata meta = detail::grid_metadata(detail::job_from_config(cfg));
    out.write_csv_text("sweep.csv", "one fitted speed per grid point, in grid order",
                       {"index", "gamma", "v0", "ic", "a", "c", "k0", "k1", "c_stderr", "rms", "guard_hit", "status",
                        "message"},
                       table, meta);
    std::size_t failed = 0;
    for (const auto& rr : r.runs) {
        failed += rr.ok ? 0 : 1;
    }
    r.results = {{"points", grid.size()}, {"failed", failed}};
    return r;
}

}  // namespace invasion::cli
