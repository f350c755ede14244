#include "cli.hpp"
#include "detail.hpp"

#include "invasion/error.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <thread>

namespace invasion::cli {

namespace fs = std::filesystem;

void ExperimentConfig::validate() const
{
    const auto need = [](bool ok, const std::string& what) {
        if (!ok) {
            throw DomainError("invalid configuration: " + what);
        }
    };
    need(gamma > 0.0 && std::isfinite(gamma), "gamma must be positive");
    need(v0 >= 0.0 && v0 < 1.0, "v0 must lie in [0, 1)");
    need(ic == "compact" || ic == "exp", "ic must be compact or exp");
    need(a > 0.0 && std::isfinite(a), "a must be positive");
    need(length > 0.0 && std::isfinite(length), "L must be positive");
    need(cells >= 16, "N must be at least 16");
    need(t_end > 0.0 && std::isfinite(t_end), "t-end must be positive");
    need(tol_rel > 0.0 && tol_rel < 1.0, "tol-rel must lie in (0, 1)");
    need(tol_abs > 0.0, "tol-abs must be positive");
    need(gamma_min > 0.0 && gamma_max > gamma_min && std::isfinite(gamma_max), "need 0 < gamma-min < gamma-max");
    need(per_decade >= 1, "per-decade must be at least 1");
    need(threads >= 1, "threads must be at least 1");
    need(snapshots >= 2, "snapshots must be at least 2");
    need(shot == "rear" || shot == "front", "shot must be rear or front");
    if (c) {
        need(*c > 0.0 && std::isfinite(*c), "c must be positive");
    }
    if (t_min && t_max) {
        need(*t_min > 0.0 && *t_max > *t_min, "need 0 < t-min < t-max");
    }
    for (double v : v_infs) {
        need(v > 0.0 && v < 1.0, "v-inf values must lie in (0, 1)");
    }
    for (double g : gammas) {
        need(g > 0.0 && std::isfinite(g), "sweep gammas must be positive");
    }
    for (double v : v0s) {
        need(v >= 0.0 && v < 1.0, "sweep v0s must lie in [0, 1)");
    }
    for (double x : as) {
        need(x > 0.0 && std::isfinite(x), "sweep decay rates must be positive");
    }
    for (double g : pde_gammas) {
        need(g > 0.0 && std::isfinite(g), "pde-gammas must be positive");
    }
    if (mode == "sweep") {
        need(!gammas.empty(), "sweep needs a nonempty gamma grid");
    }
    if (mode == "fit-speed") {
        need(!trace.empty(), "fit-speed needs --trace");
    }
    if (mode == "tw-branch" || mode == "asymptotics") {
        need(!v_infs.empty(), "v-inf list is empty");
    }
    if (mode == "reproduce") {
        static const std::vector<std::string> figs{"fig1", "fig2", "fig3", "fig4", "fig5", "fig6"};
        need(std::find(figs.begin(), figs.end(), figure) != figs.end(), "figure must be one of fig1..fig6");
    }
}

nlohmann::json ExperimentConfig::to_json() const
{
    nlohmann::json j{
        {"mode", mode},       {"out", out_dir.string()}, {"gamma", gamma},         {"v0", v0},
        {"ic", ic},           {"a", a},                  {"L", length},            {"N", cells},
        {"t_end", t_end},     {"tol_rel", tol_rel},      {"tol_abs", tol_abs},     {"gamma_min", gamma_min},
        {"gamma_max", gamma_max}, {"per_decade", per_decade}, {"threads", threads}, {"snapshots", snapshots},
        {"shot", shot},       {"v_inf", v_infs},         {"gammas", gammas},       {"v0s", v0s},
        {"as", as},           {"pde_gammas", pde_gammas},
    };
    j["trace"] = trace.string();
    j["figure"] = figure;
    j["c"] = c ? nlohmann::json(*c) : nlohmann::json(nullptr);
    j["t_min"] = t_min ? nlohmann::json(*t_min) : nlohmann::json(nullptr);
    j["t_max"] = t_max ? nlohmann::json(*t_max) : nlohmann::json(nullptr);
    return j;
}

OutputDir::OutputDir(fs::path dir, bool overwrite) : dir_(std::move(dir))
{
    fs::create_directories(dir_);
    if (overwrite) {
        // Only remove what an earlier run of this tool recorded.
        for (const char* record : {"manifest.json", "error.json"}) {
            const fs::path p = dir_ / record;
            if (!fs::exists(p)) {
                continue;
            }
            std::ifstream in(p);
            const nlohmann::json doc = nlohmann::json::parse(in, nullptr, false);
            if (doc.is_object() && doc.contains("files")) {
                for (const auto& f : doc["files"]) {
                    if (f.contains("name") && f["name"].is_string()) {
                        const fs::path name = f["name"].get<std::string>();
                        if (name.has_filename() && name == name.filename()) {
                            fs::remove(dir_ / name);
                        }
                    }
                }
            }
            fs::remove(p);
        }
    }
    if (!fs::is_empty(dir_)) {
        throw DomainError("output directory " + dir_.string() + " is not empty (use --overwrite)");
    }
}

void OutputDir::write_csv(const std::string& name, const std::string& description,
                          const std::vector<std::string>& columns, const std::vector<std::vector<double>>& rows,
                          const io::Metadata& meta)
{
    io::CsvWriter w(dir_ / name, columns, meta);
    for (const auto& r : rows) {
        w.row(r);
    }
    w.close();
    files_.push_back({name, description, rows.size()});
}

void OutputDir::write_csv_text(const std::string& name, const std::string& description,
                               const std::vector<std::string>& columns,
                               const std::vector<std::vector<std::string>>& rows, const io::Metadata& meta)
{
    io::CsvWriter w(dir_ / name, columns, meta);
    for (const auto& r : rows) {
        w.row_text(r);
    }
    w.close();
    files_.push_back({name, description, rows.size()});
}

void OutputDir::write_json(const std::string& name, const std::string& description, const nlohmann::json& doc)
{
    std::ofstream out(dir_ / name);
    out << doc.dump(2) << '\n';
    out.close();
    if (!out) {
        throw std::runtime_error("failed writing " + (dir_ / name).string());
    }
    files_.push_back({name, description, 0});
}

nlohmann::json OutputDir::files_json() const
{
    nlohmann::json arr = nlohmann::json::array();
    for (const FileEntry& f : files_) {
        arr.push_back({{"name", f.name}, {"description", f.description}, {"rows", f.rows}});
    }
    return arr;
}

void parallel_for(std::size_t n, int threads, const std::function<void(std::size_t)>& body)
{
    const std::size_t workers = std::min<std::size_t>(n, static_cast<std::size_t>(std::max(threads, 1)));
    if (workers <= 1) {
        for (std::size_t i = 0; i < n; ++i) {
            body(i);
        }
        return;
    }
    std::atomic<std::size_t> next{0};
    std::vector<std::thread> pool;
    pool.reserve(workers);
    for (std::size_t w = 0; w < workers; ++w) {
        pool.emplace_back([&] {
            for (std::size_t i = next++; i < n; i = next++) {
                body(i);
            }
        });
    }
    for (auto& t : pool) {
        t.join();
    }
}

std::vector<double> log_grid(double lo, double hi, int per_decade)
{
    if (!(lo > 0.0 && hi >= lo) || per_decade < 1) {
        throw DomainError("log_grid: need 0 < lo <= hi and per_decade >= 1");
    }
    const double l0 = std::log10(lo), l1 = std::log10(hi);
    const auto n = static_cast<std::size_t>(std::ceil((l1 - l0) * per_decade - 1e-9));
    std::vector<double> g;
    for (std::size_t k = 0; k <= n; ++k) {
        const double e = std::min(l0 + static_cast<double>(k) / per_decade, l1);
        g.push_back(k == n ? hi : std::pow(10.0, e));
    }
    return g;
}

namespace detail {

std::string csv_cell(const std::string& text)
{
    if (text.find_first_of(",\"\n") == std::string::npos) {
        return text;
    }
    std::string q = "\"";
    for (char ch : text) {
        if (ch == '"') {
            q += '"';
        }
        q += ch == '\n' ? ' ' : ch;
    }
    return q + '"';
}

std::string label(double x)
{
    char buf[32];
    std::snprintf(buf, sizeof buf, "%g", x);
    std::string s;
    for (const char* p = buf; *p; ++p) {
        if (*p == '+') {
            continue;
        }
        // 1e05 -> 1e5
        const bool after_e = p > buf && p[-1] == 'e';
        const bool after_e_minus = p > buf + 1 && p[-1] == '-' && p[-2] == 'e';
        if (*p == '0' && (after_e || after_e_minus || (p > buf && p[-1] == '+')) && p[1] != '\0') {
            continue;
        }
        s += *p;
    }
    return s;
}

}  // namespace detail

}  // namespace invasion::cli
