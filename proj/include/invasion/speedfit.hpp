#pragma once

// Wave-speed estimation from a front trace with the logarithmically corrected
// model x_f(t) = c t + k0 log t + k1.

#include "invasion/pde.hpp"

namespace invasion::speedfit {

struct Window {
    double t_min = 0;
    double t_max = 0;
};

struct SpeedFit {
    double c = 0;
    double k0 = 0;
    double k1 = 0;
    Window window;
    double rms = 0;           ///< root-mean-square residual over the window
    std::size_t samples = 0;  ///< trace samples used
    double c_stderr = 0;      ///< standard error of c from the fit covariance
    double k0_stderr = 0;
};

struct LinearFit {
    double c = 0;
    double k1 = 0;
    Window window;
    double rms = 0;
    std::size_t samples = 0;
};

/// Least-squares fit of x_f against (t, log t, 1) over samples with
/// t_min <= t <= t_max. Needs t_min > 0 and at least 10 samples; a window too
/// narrow to separate t from log t surfaces as RankDeficientError.
SpeedFit fit_speed(const pde::FrontTrace& trace, Window window);

/// Same window, regressors (t, 1) only.
LinearFit fit_linear(const pde::FrontTrace& trace, Window window);

/// (t_end / 2, t_end), where t_end is the last sample time, or the first time
/// the front reaches 0.9 L if that happens earlier. Requires the trace to span
/// a factor of at least 4 in t.
Window default_window(const pde::FrontTrace& trace);

}  // namespace invasion::speedfit
