#pragma once

// Embedded Dormand-Prince 5(4) integrator with continuous extension and
// event location on the dense output.

#include <cstddef>
#include <functional>
#include <limits>
#include <optional>
#include <span>
#include <string>
#include <vector>

namespace invasion::numerics {

using RhsFn = std::function<void(double z, std::span<const double> y, std::span<double> dydz)>;

struct Tolerances {
    double rel = 1e-8;
    double abs = 1e-10;
    /// Optional per-component absolute tolerance; overrides `abs` when non-empty.
    std::vector<double> abs_per_component;

    double abs_for(std::size_t i) const { return abs_per_component.empty() ? abs : abs_per_component[i]; }
    void validate(std::size_t dim) const;
};

/// y' = rhs(z, y) on [z_start, z_end]; z_end < z_start integrates backward.
struct IvpProblem {
    RhsFn rhs;
    std::vector<double> y0;
    double z_start = 0;
    double z_end = 1;
    Tolerances tol;
};

enum class Crossing { rising, falling, any };

struct EventSpec {
    std::function<double(double z, std::span<const double> y)> fn;
    Crossing direction = Crossing::any;
    bool terminal = false;
    std::string name;
};

struct EventRecord {
    std::size_t index = 0;  ///< position in the events list
    double z = 0;
    std::vector<double> y;
};

/// Piecewise quartic interpolant over the accepted steps.
class DenseSolution {
public:
    explicit DenseSolution(std::size_t dim = 0) : dim_(dim) {}

    std::size_t dim() const { return dim_; }
    std::size_t segments() const { return z0_.size(); }
    bool empty() const { return z0_.empty(); }
    double z_first() const { return z0_.front(); }
    double z_last() const { return end_ ? *end_ : z0_.back() + h_.back(); }

    /// State at z; z must lie within the integrated span.
    std::vector<double> operator()(double z) const;
    void eval(double z, std::span<double> out) const;

    /// All roots of g(z, y(z)) on the integrated span, located per segment to
    /// within `tol` in z, in integration order.
    std::vector<double> roots(const std::function<double(double, std::span<const double>)>& g,
                              double tol = 1e-12) const;

    // Used by the integrator.
    void push_segment(double z0, double h, std::span<const double> coeffs);
    /// Marks where a terminal event cut the last segment.
    void set_end(double z) { end_ = z; }

private:
    std::size_t find_segment(double z) const;
    void eval_segment(std::size_t k, double theta, std::span<double> out) const;

    std::size_t dim_;
    std::vector<double> z0_;
    std::vector<double> h_;
    std::vector<double> coef_;  ///< 5 * dim per segment
    std::optional<double> end_;
};

struct AdaptiveOptions {
    double initial_step = 0;  ///< 0 selects a starting step automatically
    double max_step = std::numeric_limits<double>::infinity();
    std::size_t max_steps = 2'000'000;
    /// Take uniform steps of this size without error control (order studies).
    std::optional<double> fixed_step;
    bool keep_dense = true;
};

struct AdaptiveResult {
    std::size_t dim = 0;
    std::vector<double> z;  ///< accepted step ends, including z_start
    std::vector<double> y;  ///< row-major states, z.size() * dim
    std::vector<EventRecord> events;
    std::optional<std::size_t> terminal_event;  ///< index into `events`
    DenseSolution dense;
    std::size_t steps = 0;
    std::size_t rejected = 0;
    std::size_t rhs_evals = 0;

    std::span<const double> state(std::size_t i) const { return {y.data() + i * dim, dim}; }
    std::span<const double> final_state() const { return state(z.size() - 1); }
    double z_final() const { return z.back(); }
};

/// Dormand-Prince 5(4) with local extrapolation and RMS error control.
///
/// Events are checked on every accepted step and located on the continuous
/// extension, so their positions do not depend on any output grid. Terminal
/// events cut the solution at the event. Throws IntegrationError when the step
/// size underflows or the step budget is exhausted.
AdaptiveResult integrate_adaptive(const IvpProblem& problem, std::span<const EventSpec> events = {},
                                  const AdaptiveOptions& options = {});

}  // namespace invasion::numerics
