#pragma once

// Method-of-lines simulation of the two-species invasion model on [0, L] with
// zero-flux ends.

#include "invasion/error.hpp"
#include "invasion/kernels/rhs.hpp"
#include "invasion/model.hpp"
#include "invasion/numerics/banded.hpp"
#include "invasion/numerics/stiff.hpp"

#include <cstddef>
#include <span>
#include <string>
#include <utility>
#include <variant>
#include <vector>

namespace invasion::pde {

struct Grid1D {
    double length = 150.0;
    std::size_t cells = 6000;

    double dx() const { return length / static_cast<double>(cells); }
    /// Cell centre (i + 1/2) dx.
    double x(std::size_t i) const { return (static_cast<double>(i) + 0.5) * dx(); }
    /// Throws DomainError unless length > 0 and cells >= 16.
    void validate() const;
};

/// u0 = height on cells with centre x < width.
struct CompactIc {
    double width = 1.0;
    double height = 1.0;
};

/// u0 = exp(-a x).
struct ExponentialIc {
    double a = 1.0;
};

struct InitialCondition {
    std::variant<CompactIc, ExponentialIc> shape = CompactIc{};
    double v0 = 0.0;

    static InitialCondition compact(double v0, double width = 1.0, double height = 1.0);
    static InitialCondition exponential(double a, double v0);

    bool is_compact() const { return std::holds_alternative<CompactIc>(shape); }
    std::string kind_name() const;
    void validate() const;
    double u0(double x) const;
};

struct PdeState {
    double t = 0;
    Grid1D grid;
    std::vector<double> u;
    std::vector<double> v;
};

struct FrontSample {
    double t = 0;
    double x_f = 0;
};

struct FrontTrace {
    std::vector<FrontSample> samples;
    double level = 0.5;
    double domain_length = 0;  ///< L of the run, used for boundary clipping
};

/// Semi-discrete system on the interleaved state [u0, v0, u1, v1, ...].
class SemiDiscretization {
public:
    SemiDiscretization(model::ModelParams params, Grid1D grid, kernels::Isa isa = kernels::detect_isa());

    static constexpr numerics::BandStructure band() { return {2, 3}; }

    void rhs(std::span<const double> y, std::span<double> dydt) const;
    /// Exact Jacobian of rhs, written into a zeroed band matrix.
    void jacobian(std::span<const double> y, numerics::BandMatrix& jac) const;

    const model::ModelParams& params() const { return params_; }
    const Grid1D& grid() const { return grid_; }
    kernels::Isa isa() const { return isa_; }

private:
    model::ModelParams params_;
    Grid1D grid_;
    kernels::Isa isa_;
    double inv_dx2_;
};

/// Convenience wrapper matching the right-hand-side signature of the integrators.
numerics::RhsFn semidiscretize(const model::ModelParams& params, const Grid1D& grid,
                               kernels::Isa isa = kernels::detect_isa());

std::vector<double> interleave(std::span<const double> u, std::span<const double> v);
PdeState deinterleave(double t, const Grid1D& grid, std::span<const double> y);

PdeState initial_state(const InitialCondition& ic, const Grid1D& grid);

enum class GuardPolicy {
    abort,     ///< throw DomainGuardError carrying the partial run
    truncate,  ///< stop quietly and flag the result
};

struct RunOptions {
    numerics::Tolerances tol{1e-6, 1e-9, {}};
    double level = 0.5;
    /// The run stops once the front passes guard_fraction * L.
    double guard_fraction = 0.9;
    GuardPolicy guard = GuardPolicy::abort;
    kernels::Isa isa = kernels::detect_isa();
    double max_step = 1.0;
};

struct RunResult {
    std::vector<PdeState> states;  ///< at the requested output times reached
    PdeState final_state;
    FrontTrace trace;
    bool guard_hit = false;
    numerics::StiffStats stats;
};

class DomainGuardError : public SolverError {
public:
    DomainGuardError(const std::string& what, RunResult partial)
        : SolverError(what), partial_(std::move(partial)) {}

    const RunResult& partial() const noexcept { return partial_; }

private:
    RunResult partial_;
};

/// Integrates from the initial condition to t_end with TR-BDF2, recording the
/// front position after every accepted step.
///
/// Throws DomainError for invalid input, IntegrationError (with the failure
/// time) if the integrator gives up, and DomainGuardError when the front
/// reaches the guard under GuardPolicy::abort.
RunResult run(const model::ModelParams& params, const InitialCondition& ic, const Grid1D& grid, double t_end,
              std::span<const double> output_times, const RunOptions& options = {});

/// Scalar Fisher-KPP run with the v terms removed from the stencil. Serves as
/// an independent reference for the v0 = 0 reduction; states carry v = 0.
RunResult run_fisher_kpp(const InitialCondition& ic, const Grid1D& grid, double t_end,
                         std::span<const double> output_times, const RunOptions& options = {});

/// Rightmost x with u(x) = level, interpolating linearly between cell centres.
/// Throws SolverError when u does not cross `level` or the crossing is past
/// the last cell.
double front_location(const PdeState& state, double level = 0.5);
double front_location(std::span<const double> u, const Grid1D& grid, double level = 0.5, std::size_t stride = 1);

/// (u_i, v_i) in order of increasing x.
std::vector<std::pair<double, double>> phase_curve(const PdeState& state);

}  // namespace invasion::pde
