#include "cli.hpp"
#include "detail.hpp"

#include "invasion/asym.hpp"
#include "invasion/error.hpp"
#include "invasion/model.hpp"
#include "invasion/tw.hpp"

#include <cmath>
#include <numbers>

namespace invasion::cli {

using detail::label;
using nlohmann::json;

namespace {

// The four runs of the PDE figure: compact data at v0 = 0.5 for gamma = 1 and
// 10, then exponential data at v0 = 0.75 with decay rates giving the same speeds.
struct PdeCase {
    std::string id;
    double gamma;
    double v0;
    std::optional<double> a;
};

const std::vector<PdeCase> pde_cases{
    {"a", 1.0, 0.5, std::nullopt},
    {"b", 10.0, 0.5, std::nullopt},
    {"c", 1.0, 0.75, 0.27},
    {"d", 10.0, 0.75, 0.21},
};

detail::PdeJob case_job(const ExperimentConfig& cfg, double gamma, double v0, std::optional<double> a)
{
    detail::PdeJob job = detail::job_from_config(cfg);
    job.params = {gamma, v0};
    job.ic = a ? pde::InitialCondition::exponential(*a, v0) : pde::InitialCondition::compact(v0);
    return job;
}

json series(const std::string& file, const std::string& x, const std::string& y, const std::string& label_text,
            const std::string& style = "line")
{
    return {{"file", file}, {"x", x}, {"y", y}, {"label", label_text}, {"style", style}};
}

json panel(const std::string& name, const std::string& xlabel, const std::string& ylabel, json list,
           const std::string& xscale = "linear")
{
    return {{"name", name}, {"x", {{"label", xlabel}, {"scale", xscale}}}, {"y", {{"label", ylabel}}},
            {"series", std::move(list)}};
}

std::string case_label(const PdeCase& c)
{
    std::string s = "gamma=" + label(c.gamma) + ", v0=" + label(c.v0);
    return c.a ? s + ", a=" + label(*c.a) : s + ", compact";
}

CommandResult fig1(const ExperimentConfig& cfg, OutputDir& out)
{
    std::vector<std::optional<detail::PdeOutcome>> runs(pde_cases.size());
    std::vector<std::string> errors(pde_cases.size());
    parallel_for(pde_cases.size(), cfg.threads, [&](std::size_t i) {
        const PdeCase& c = pde_cases[i];
        detail::PdeJob job = case_job(cfg, c.gamma, c.v0, c.a);
        job.output_times = detail::snapshot_times(cfg.t_end, cfg.snapshots);
        try {
            runs[i] = detail::run_pde(job);
        } catch (const std::exception& e) {
            errors[i] = e.what();
        }
    });

    CommandResult r;
    json panels = json::array();
    std::vector<std::vector<std::string>> speeds;
    for (std::size_t i = 0; i < pde_cases.size(); ++i) {
        const PdeCase& c = pde_cases[i];
        if (!runs[i]) {
            r.runs.push_back({"fig1" + c.id, false, errors[i]});
            continue;
        }
        const detail::PdeOutcome& o = *runs[i];
        const detail::PdeJob job = case_job(cfg, c.gamma, c.v0, c.a);
        const std::string prof = "fig1" + c.id + "_profiles.csv";
        const std::string trace = "fig1" + c.id + "_trace.csv";
        out.write_csv(prof, "u, v profiles for case (" + c.id + ")", {"t", "x", "u", "v"},
                      detail::profile_rows(o.run.states), detail::pde_metadata(job));
        out.write_csv(trace, "front trace for case (" + c.id + ")", {"t", "x_f"}, detail::trace_rows(o.run.trace),
                      detail::pde_metadata(job));
        panels.push_back(panel("(" + c.id + ") " + case_label(c), "x", "density",
                               {series(prof, "x", "u", "u, one curve per t", "line-by-t"),
                                series(prof, "x", "v", "v, one curve per t", "dashed-by-t")}));
        using io::format_double;
        speeds.push_back({c.id, format_double(c.gamma), format_double(c.v0), c.a ? format_double(*c.a) : "nan",
                          o.fit ? format_double(o.fit->c) : "nan", o.fit ? format_double(o.fit->k0) : "nan"});
        r.results[c.id] = detail::fit_json(o);
        r.runs.push_back({"fig1" + c.id, o.fit.has_value(), o.fit ? "" : "no speed fit: " + o.fit_note});
    }
    out.write_csv_text("fig1_speeds.csv", "fitted long-time speed of each case", {"case", "gamma", "v0", "a", "c", "k0"},
                       speeds);
    out.write_json("layout.json", "figure layout",
                   {{"figure", "fig1"}, {"title", "PDE solutions for four death rates and initial conditions"},
                    {"panels", panels}});
    return r;
}

CommandResult fig2(const ExperimentConfig& cfg, OutputDir& out)
{
    const std::vector<double> gammas = log_grid(cfg.gamma_min, cfg.gamma_max, cfg.per_decade);
    const std::vector<double> pde_gammas = cfg.pde_gammas.empty() ? std::vector<double>{0.1, 1.0, 10.0} : cfg.pde_gammas;
    const std::size_t nv = cfg.v_infs.size();

    std::vector<tw::BranchPoint> branch(gammas.size() * nv);
    parallel_for(branch.size(), cfg.threads, [&](std::size_t k) {
        branch[k] = tw::branch_speed(gammas[k % gammas.size()], cfg.v_infs[k / gammas.size()]);
    });
    std::vector<std::optional<detail::PdeOutcome>> est(pde_gammas.size() * nv);
    std::vector<std::string> errors(est.size());
    parallel_for(est.size(), cfg.threads, [&](std::size_t k) {
        const double g = pde_gammas[k % pde_gammas.size()];
        const double v = cfg.v_infs[k / pde_gammas.size()];
        try {
            est[k] = detail::run_pde(case_job(cfg, g, v, std::nullopt));
        } catch (const std::exception& e) {
            errors[k] = e.what();
        }
    });

    CommandResult r;
    json list = json::array();
    for (std::size_t j = 0; j < nv; ++j) {
        const double v = cfg.v_infs[j];
        std::vector<std::vector<std::string>> rows;
        for (std::size_t i = 0; i < gammas.size(); ++i) {
            const auto& b = branch[j * gammas.size() + i];
            rows.push_back({io::format_double(b.gamma), io::format_double(b.c), std::string(tw::regime_name(b.regime))});
        }
        const std::string bf = "fig2_branch_v" + label(v) + ".csv";
        out.write_csv_text(bf, "travelling-wave branch at V_inf = " + label(v), {"gamma", "c", "regime"}, rows,
                           {{"v_inf", io::format_double(v)}});
        list.push_back(series(bf, "gamma", "c", "travelling waves, V_inf=" + label(v)));
    }
    std::vector<std::vector<std::string>> pde_rows;
    for (std::size_t k = 0; k < est.size(); ++k) {
        const double g = pde_gammas[k % pde_gammas.size()];
        const double v = cfg.v_infs[k / pde_gammas.size()];
        const bool ok = est[k] && est[k]->fit;
        const std::string msg = !est[k] ? errors[k] : (est[k]->fit ? "" : "no speed fit: " + est[k]->fit_note);
        pde_rows.push_back({io::format_double(g), io::format_double(v), ok ? io::format_double(est[k]->fit->c) : "nan",
                            ok ? "ok" : "failed", detail::csv_cell(msg)});
        r.runs.push_back({"pde_g" + label(g) + "_v" + label(v), ok, msg});
    }
    out.write_csv_text("fig2_pde.csv", "PDE speed estimates for compact initial data",
                       {"gamma", "v0", "c", "status", "message"}, pde_rows,
                       detail::grid_metadata(case_job(cfg, 1.0, 0.5, std::nullopt)));
    list.push_back(series("fig2_pde.csv", "gamma", "c", "PDE estimates, grouped by v0", "markers-by-v0"));
    out.write_json("layout.json", "figure layout",
                   {{"figure", "fig2"}, {"title", "wave speed c against death rate gamma"},
                    {"panels", json::array({panel("c(gamma)", "gamma", "c", list, "log")})}});
    return r;
}

CommandResult fig3(const ExperimentConfig& cfg, OutputDir& out)
{
    std::vector<std::optional<detail::PdeOutcome>> runs(pde_cases.size());
    std::vector<std::optional<tw::TwTrajectory>> orbits(pde_cases.size());
    std::vector<std::string> errors(pde_cases.size());
    parallel_for(pde_cases.size(), cfg.threads, [&](std::size_t i) {
        const PdeCase& c = pde_cases[i];
        try {
            orbits[i] = tw::shoot_to_axis(c.gamma, tw::selected_speed(c.gamma, c.v0, c.a), c.v0);
            runs[i] = detail::run_pde(case_job(cfg, c.gamma, c.v0, c.a));
        } catch (const std::exception& e) {
            errors[i] = e.what();
        }
    });

    CommandResult r;
    json panels = json::array();
    std::vector<std::vector<std::string>> summary;
    for (std::size_t i = 0; i < pde_cases.size(); ++i) {
        const PdeCase& c = pde_cases[i];
        if (!runs[i] || !orbits[i]) {
            r.runs.push_back({"fig3" + c.id, false, errors[i]});
            continue;
        }
        const tw::TwTrajectory& t = *orbits[i];
        const auto curve = pde::phase_curve(runs[i]->run.final_state);
        const double dist = tw::phase_sup_distance(curve, t);
        std::vector<std::vector<double>> orbit_rows, pde_rows;
        for (const auto& s : t.samples) {
            orbit_rows.push_back({s.z, s.u, s.v, s.w});
        }
        for (const auto& [u, v] : curve) {
            pde_rows.push_back({u, v});
        }
        const std::string tf = "fig3" + c.id + "_tw.csv";
        const std::string pf = "fig3" + c.id + "_pde.csv";
        out.write_csv(tf, "travelling-wave orbit for case (" + c.id + ")", {"z", "u", "v", "w"}, orbit_rows,
                      {{"gamma", io::format_double(c.gamma)},
                       {"c", io::format_double(t.c)},
                       {"v_end", io::format_double(t.v_end)},
                       {"tail", std::string(tw::tail_name(t.tail))}});
        out.write_csv(pf, "late-time PDE (u, v) curve for case (" + c.id + ")", {"u", "v"}, pde_rows,
                      detail::pde_metadata(case_job(cfg, c.gamma, c.v0, c.a)));
        panels.push_back(panel("(" + c.id + ") " + case_label(c), "U", "V",
                               {series(tf, "u", "v", "travelling wave"), series(pf, "u", "v", "PDE at t_end", "dotted")}));
        summary.push_back({c.id, io::format_double(c.gamma), io::format_double(t.c), io::format_double(t.v_end),
                           io::format_double(dist)});
        r.results[c.id] = {{"c", t.c}, {"sup_distance", dist}};
        r.runs.push_back({"fig3" + c.id, true, ""});
    }
    out.write_csv_text("fig3_summary.csv", "phase-plane sup distance between PDE curve and orbit",
                       {"case", "gamma", "c", "v_end", "sup_distance"}, summary);
    out.write_json("layout.json", "figure layout",
                   {{"figure", "fig3"}, {"title", "travelling waves in the (U, V) plane with PDE overlays"},
                    {"panels", panels}});
    return r;
}

CommandResult fig4(const ExperimentConfig& cfg, OutputDir& out)
{
    const double v = 0.5;
    const std::vector<double> gammas{10.0, 1e5, 1e11};
    CommandResult r;
    json list = json::array();
    for (double g : gammas) {
        const tw::BranchPoint b = tw::branch_speed(g, v);
        const tw::TwTrajectory t = tw::shoot_from_front(g, b.c, v);
        // z = 0 where U = 1/2.
        const auto roots = t.dense.roots([](double, std::span<const double> y) { return y[0] - 0.5; });
        const double shift = roots.empty() ? 0.0 : roots.front();
        std::vector<std::vector<double>> rows;
        for (const auto& s : t.samples) {
            rows.push_back({s.z - shift, s.u, s.v, s.w});
        }
        const std::string f = "fig4_gamma" + label(g) + ".csv";
        out.write_csv(f, "travelling-wave profile at gamma = " + label(g), {"z", "u", "v", "w"}, rows,
                      {{"gamma", io::format_double(g)},
                       {"c", io::format_double(b.c)},
                       {"v_inf", io::format_double(v)},
                       {"rear_residual", io::format_double(t.rear_residual)}});
        list.push_back(series(f, "z", "u", "U, gamma=" + label(g)));
        list.push_back(series(f, "z", "v", "V, gamma=" + label(g), "dashed"));
        r.results["gamma" + label(g)] = {{"c", b.c}, {"gap_width", tw::gap_width(t)}};
    }
    (void)cfg;
    out.write_json("layout.json", "figure layout",
                   {{"figure", "fig4"}, {"title", "travelling-wave profiles at V_inf = 0.5 for large gamma"},
                    {"panels", json::array({panel("profiles", "z", "density", list)})}});
    return r;
}

CommandResult fig5(const ExperimentConfig& cfg, OutputDir& out)
{
    const std::vector<double> gammas = log_grid(std::max(cfg.gamma_min, 10.0), cfg.gamma_max, cfg.per_decade);
    const asym::OuterWave o = asym::outer_wave();
    const std::size_t nv = cfg.v_infs.size();
    std::vector<double> a_inner(nv);
    parallel_for(nv, cfg.threads, [&](std::size_t j) { a_inner[j] = asym::inner_wave(cfg.v_infs[j]).a_inner; });
    std::vector<asym::MatchReport> reports(gammas.size() * nv);
    parallel_for(reports.size(), cfg.threads, [&](std::size_t k) {
        const double g = gammas[k % gammas.size()];
        const std::size_t j = k / gammas.size();
        reports[k] = asym::validate_matching(g, cfg.v_infs[j], tw::branch_speed(g, cfg.v_infs[j]), o.a0, a_inner[j]);
    });

    CommandResult r;
    json a = json::array(), b = json::array();
    for (std::size_t j = 0; j < nv; ++j) {
        const double v = cfg.v_infs[j];
        std::vector<std::vector<double>> rows;
        for (std::size_t i = 0; i < gammas.size(); ++i) {
            const auto& m = reports[j * gammas.size() + i];
            const double lg = std::log(m.gamma);
            rows.push_back({m.gamma, 1.0 / (lg * lg), m.delta_num, m.delta1, m.delta_one, m.delta_two,
                            m.delta_two - m.delta_one});
        }
        const std::string f = "fig5_v" + label(v) + ".csv";
        out.write_csv(f, "wave-speed correction against (log gamma)^-2 at V_inf = " + label(v),
                      {"gamma", "inv_log2", "delta", "delta1", "pred_one", "pred_two", "pred_delta1"}, rows,
                      {{"v_inf", io::format_double(v)},
                       {"A0", io::format_double(o.a0)},
                       {"A_I", io::format_double(a_inner[j])}});
        a.push_back(series(f, "inv_log2", "delta", "delta, V_inf=" + label(v), "markers"));
        b.push_back(series(f, "inv_log2", "delta1", "delta1, V_inf=" + label(v), "markers"));
        b.push_back(series(f, "inv_log2", "pred_delta1", "two-term prediction, V_inf=" + label(v), "dashed"));
        r.results["A_I"][label(v)] = a_inner[j];
    }
    a.push_back({{"slope", std::numbers::pi * std::numbers::pi}, {"label", "leading order"}, {"style", "dashed"}});
    r.results["A0"] = o.a0;
    out.write_json("layout.json", "figure layout",
                   {{"figure", "fig5"}, {"title", "asymptotic wave-speed correction"},
                    {"panels", json::array({panel("(a) delta", "(log gamma)^-2", "2 - c", a),
                                            panel("(b) delta1", "(log gamma)^-2", "2 - c - pi^2/(log gamma)^2", b)})}});
    return r;
}

CommandResult fig6(const ExperimentConfig& cfg, OutputDir& out)
{
    const double v0 = cfg.v0;
    const std::vector<double> decay{0.5, 0.325, 0.25};
    const std::vector<double> gammas = log_grid(cfg.gamma_min, cfg.gamma_max, cfg.per_decade);
    const std::vector<double> pde_gammas = cfg.pde_gammas.empty() ? std::vector<double>{1.0, 10.0} : cfg.pde_gammas;

    std::vector<double> compact(gammas.size());
    parallel_for(gammas.size(), cfg.threads,
                 [&](std::size_t i) { compact[i] = tw::selected_speed(gammas[i], v0, std::nullopt); });

    CommandResult r;
    json list = json::array();
    std::vector<std::vector<double>> crow;
    for (std::size_t i = 0; i < gammas.size(); ++i) {
        crow.push_back({gammas[i], compact[i]});
    }
    out.write_csv("fig6_compact.csv", "selected speed for compact initial data", {"gamma", "c"}, crow,
                  {{"v0", io::format_double(v0)}});
    list.push_back(series("fig6_compact.csv", "gamma", "c", "compact initial data", "black"));
    for (double a : decay) {
        const double disp = model::dispersion_speed(a, v0);
        std::vector<std::vector<double>> rows;
        for (std::size_t i = 0; i < gammas.size(); ++i) {
            // selected_speed, reusing the compact branch computed above.
            rows.push_back({gammas[i], std::max(disp, compact[i]), disp});
        }
        const std::string f = "fig6_a" + label(a) + ".csv";
        out.write_csv(f, "selected speed for u0 = exp(-a x), a = " + label(a), {"gamma", "c", "c_dispersion"}, rows,
                      {{"v0", io::format_double(v0)}, {"a", io::format_double(a)}});
        list.push_back(series(f, "gamma", "c", "a=" + label(a)));
        list.push_back(series(f, "gamma", "c_dispersion", "dispersion speed, a=" + label(a), "dashed"));
    }

    std::vector<std::optional<detail::PdeOutcome>> est(pde_gammas.size() * decay.size());
    std::vector<std::string> errors(est.size());
    parallel_for(est.size(), cfg.threads, [&](std::size_t k) {
        try {
            est[k] = detail::run_pde(case_job(cfg, pde_gammas[k % pde_gammas.size()], v0, decay[k / pde_gammas.size()]));
        } catch (const std::exception& e) {
            errors[k] = e.what();
        }
    });
    std::vector<std::vector<std::string>> pde_rows;
    for (std::size_t k = 0; k < est.size(); ++k) {
        const double g = pde_gammas[k % pde_gammas.size()];
        const double a = decay[k / pde_gammas.size()];
        const bool ok = est[k] && est[k]->fit;
        const std::string msg = !est[k] ? errors[k] : (est[k]->fit ? "" : "no speed fit: " + est[k]->fit_note);
        pde_rows.push_back({io::format_double(g), io::format_double(a), ok ? io::format_double(est[k]->fit->c) : "nan",
                            ok ? "ok" : "failed", detail::csv_cell(msg)});
        r.runs.push_back({"pde_g" + label(g) + "_a" + label(a), ok, msg});
    }
    out.write_csv_text("fig6_pde.csv", "PDE speed estimates for exponential initial data",
                       {"gamma", "a", "c", "status", "message"}, pde_rows,
                       detail::grid_metadata(case_job(cfg, 1.0, v0, 1.0)));
    list.push_back(series("fig6_pde.csv", "gamma", "c", "PDE estimates, grouped by a", "markers-by-a"));
    out.write_json("layout.json", "figure layout",
                   {{"figure", "fig6"}, {"title", "wave speed against gamma for exponential initial data"},
                    {"panels", json::array({panel("c(gamma)", "gamma", "c", list, "log")})}});
    return r;
}

}  // namespace

CommandResult cmd_reproduce(const ExperimentConfig& cfg, OutputDir& out)
{
    if (cfg.figure == "fig1") {
        return fig1(cfg, out);
    }
    if (cfg.figure == "fig2") {
        return fig2(cfg, out);
    }
    if (cfg.figure == "fig3") {
        return fig3(cfg, out);
    }
    if (cfg.figure == "fig4") {
        return fig4(cfg, out);
    }
    if (cfg.figure == "fig5") {
        return fig5(cfg, out);
    }
    if (cfg.figure == "fig6") {
        return fig6(cfg, out);
    }
    throw DomainError("unknown figure " + cfg.figure);
}

}  // namespace invasion::cli
