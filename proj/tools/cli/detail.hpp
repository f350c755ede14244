#pragma once

// Helpers shared by the command implementations.

#include "cli.hpp"

#include "invasion/pde.hpp"
#include "invasion/speedfit.hpp"

#include <optional>
#include <string>
#include <vector>

namespace invasion::cli::detail {

struct PdeJob {
    model::ModelParams params;
    pde::InitialCondition ic;
    pde::Grid1D grid;
    double t_end = 60.0;
    numerics::Tolerances tol{1e-6, 1e-9, {}};
    std::vector<double> output_times;
};

struct PdeOutcome {
    pde::RunResult run;
    std::optional<speedfit::SpeedFit> fit;
    std::optional<speedfit::LinearFit> linear;
    std::string fit_note;  ///< why the fit is missing
};

/// Runs with the guard set to truncate and fits over the default window.
/// Fit failures are reported in fit_note; run failures throw.
PdeOutcome run_pde(const PdeJob& job);

PdeJob job_from_config(const ExperimentConfig& cfg);
pde::InitialCondition make_ic(const std::string& kind, double a, double v0);

/// Uniform times 0, t_end / (n - 1), ..., t_end.
std::vector<double> snapshot_times(double t_end, std::size_t n);

io::Metadata pde_metadata(const PdeJob& job);
/// Grid and tolerances only, for files that mix several parameter sets.
io::Metadata grid_metadata(const PdeJob& job);
std::vector<std::vector<double>> trace_rows(const pde::FrontTrace& trace);
/// (t, x, u, v) for every state, in time then space order.
std::vector<std::vector<double>> profile_rows(const std::vector<pde::PdeState>& states);
nlohmann::json fit_json(const PdeOutcome& o);

/// speed_fit.csv layout shared by simulate and fit-speed.
std::vector<std::vector<std::string>> fit_table(const std::optional<speedfit::SpeedFit>& fit,
                                                const std::optional<speedfit::LinearFit>& linear);
extern const std::vector<std::string> fit_columns;

/// Reads a (t, x_f) CSV as written by simulate. The domain length comes from a
/// "# L = ..." line when present, else `fallback_length`.
pde::FrontTrace read_trace(const std::filesystem::path& path, double fallback_length);

/// Quotes a CSV cell when it holds a comma, quote or newline.
std::string csv_cell(const std::string& text);

/// 0.25 -> "0.25", 1e11 -> "1e11": %g labels for file names, no '+' or
/// leading exponent zeros.
std::string label(double x);

}  // namespace invasion::cli::detail
