#pragma once

// TR-BDF2 for stiff systems with banded Jacobians.

#include "invasion/numerics/banded.hpp"
#include "invasion/numerics/ode.hpp"

#include <functional>
#include <limits>
#include <span>
#include <vector>

namespace invasion::numerics {

struct BandStructure {
    std::size_t lower = 1;
    std::size_t upper = 1;
};

/// Fills `jac` (already sized and zeroed) with df/dy at (t, y).
using BandJacobianFn = std::function<void(double t, std::span<const double> y, BandMatrix& jac)>;

struct StiffProblem {
    RhsFn rhs;
    std::vector<double> y0;
    double t_start = 0;
    double t_end = 1;
    Tolerances tol{1e-6, 1e-9, {}};
};

struct StiffOptions {
    /// Analytic Jacobian. Without one the Jacobian is built from forward
    /// differences, perturbing every (lower + upper + 1)-th column together
    /// with step sqrt(eps) * max(|y_j|, 1).
    BandJacobianFn jacobian;
    double initial_step = 0;
    double max_step = std::numeric_limits<double>::infinity();
    std::size_t max_steps = 5'000'000;
    /// Called at t_start and after every accepted step; returning false stops
    /// the integration at that step.
    std::function<bool(double t, std::span<const double> y)> on_step;
};

struct StiffStats {
    std::size_t steps = 0;
    std::size_t rejected = 0;
    std::size_t newton_failures = 0;
    std::size_t jacobians = 0;
    std::size_t factorizations = 0;
    std::size_t rhs_evals = 0;
};

struct StiffResult {
    std::vector<double> t;               ///< requested output times reached
    std::vector<std::vector<double>> y;  ///< states at `t`
    double t_final = 0;
    std::vector<double> y_final;
    bool stopped_early = false;
    StiffStats stats;
};

/// Integrates with the TR-BDF2 pair of Hosea & Shampine: a trapezoidal stage
/// followed by a BDF2 stage sharing one iteration matrix I - (gamma/2) h J,
/// L-stable, second order, with an embedded third-order estimate filtered
/// through the iteration matrix. Error control uses the max norm. Newton
/// iterations are solved with a banded LU. Steps are shortened to land on each
/// of `output_times`, so outputs are step endpoints rather than interpolants.
///
/// Throws IntegrationError if Newton keeps failing after step reductions.
StiffResult integrate_stiff(const StiffProblem& problem, BandStructure band, std::span<const double> output_times,
                            const StiffOptions& options = {});

}  // namespace invasion::numerics
