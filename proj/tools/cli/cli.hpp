#pragma once

// Command-line front end: configuration, experiment runners and result files.
//
// Every command writes into one output directory. Files are registered as they
// are closed and manifest.json is written last, so its presence means the
// command finished. A failing command leaves error.json instead, listing
// whatever was written before the failure.

#include <cstddef>
#include <filesystem>
#include <functional>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "invasion/io/csv.hpp"

namespace invasion::cli {

struct ExperimentConfig {
    std::string mode;
    std::filesystem::path out_dir = "out";
    bool overwrite = false;

    double gamma = 1.0;
    double v0 = 0.5;
    std::string ic = "compact";
    double a = 1.0;
    double length = 150.0;
    std::size_t cells = 6000;
    double t_end = 60.0;
    double tol_rel = 1e-6;
    double tol_abs = 1e-9;
    double gamma_min = 0.1;
    double gamma_max = 1e8;
    int per_decade = 4;
    int threads = 1;

    std::size_t snapshots = 7;                 // simulate
    std::filesystem::path trace;               // fit-speed
    std::optional<double> t_min, t_max;        // fit-speed
    std::optional<double> c;                   // tw-trajectory, defaults to the selected speed
    std::string shot = "rear";                 // tw-trajectory
    std::vector<double> v_infs{0.25, 0.5, 0.75};  // tw-branch, asymptotics, fig2, fig5
    std::vector<double> gammas, v0s, as;       // sweep grid; empty v0s / as fall back to v0 / ic
    std::string figure;                        // reproduce
    std::vector<double> pde_gammas;            // reproduce fig2 / fig6 PDE estimates

    /// Throws DomainError naming the first offending field. Runs before any compute.
    void validate() const;
    nlohmann::json to_json() const;
};

struct FileEntry {
    std::string name;
    std::string description;
    std::size_t rows = 0;
};

/// Output directory with a registry of the files written into it.
class OutputDir {
public:
    /// Creates the directory. Refuses a non-empty one unless `overwrite`, in
    /// which case files listed by a previous manifest or error record are removed.
    OutputDir(std::filesystem::path dir, bool overwrite);

    const std::filesystem::path& path() const { return dir_; }

    /// Writes a CSV in one go and registers it.
    void write_csv(const std::string& name, const std::string& description, const std::vector<std::string>& columns,
                   const std::vector<std::vector<double>>& rows, const io::Metadata& meta = {});
    /// Rows of preformatted cells, for tables mixing text and numbers.
    void write_csv_text(const std::string& name, const std::string& description,
                        const std::vector<std::string>& columns, const std::vector<std::vector<std::string>>& rows,
                        const io::Metadata& meta = {});
    void write_json(const std::string& name, const std::string& description, const nlohmann::json& doc);

    const std::vector<FileEntry>& files() const { return files_; }
    nlohmann::json files_json() const;

private:
    std::filesystem::path dir_;
    std::vector<FileEntry> files_;
};

/// Per-run status in a manifest.
struct RunRecord {
    std::string id;
    bool ok = true;
    std::string message;
};

/// What a command reports back for the manifest.
struct CommandResult {
    nlohmann::json results = nlohmann::json::object();
    std::vector<RunRecord> runs;
};

CommandResult cmd_simulate(const ExperimentConfig& cfg, OutputDir& out);
CommandResult cmd_fit_speed(const ExperimentConfig& cfg, OutputDir& out);
CommandResult cmd_tw_trajectory(const ExperimentConfig& cfg, OutputDir& out);
CommandResult cmd_tw_branch(const ExperimentConfig& cfg, OutputDir& out);
CommandResult cmd_asymptotics(const ExperimentConfig& cfg, OutputDir& out);
CommandResult cmd_sweep(const ExperimentConfig& cfg, OutputDir& out);
CommandResult cmd_reproduce(const ExperimentConfig& cfg, OutputDir& out);

/// Runs `body(i)` for i in [0, n) on up to `threads` workers. Each call must
/// only touch its own slot of any shared result array.
void parallel_for(std::size_t n, int threads, const std::function<void(std::size_t)>& body);

/// Log-spaced grid from lo to hi inclusive with `per_decade` points per decade.
std::vector<double> log_grid(double lo, double hi, int per_decade);

/// Parses argv (program name first) and runs the command. Returns the exit
/// status: 0 success, 1 command failure, 2 invalid arguments or configuration.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace invasion::cli
