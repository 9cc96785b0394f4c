#pragma once

#include <cstddef>
#include <functional>
#include <span>
#include <vector>

#include "fraclyap/operators.hpp"
#include "fraclyap/trajectory.hpp"

namespace fraclyap {

/// Right-hand side f(t, y); writes dy (same length as y).
using VectorField = std::function<void(double t, std::span<const double> y, std::span<double> dy)>;

/// D^alpha y = f(t, y), y(t0) = y0, on the uniform grid t0, t0 + dt, ..., T.
struct FdeProblem {
    VectorField rhs;
    std::vector<double> y0;
    FractionalOrder order;
    double t0 = 0.0;
    double T = 1.0;
    double dt = 0.01;
    KernelConfig kernel;

    /// Checks T > t0, dt <= (T - t0)/2, (T - t0)/dt integral within the grid
    /// tolerance, non-empty finite y0 and a callable rhs.
    void validate() const;
    /// Number of steps (nodes - 1).
    std::size_t steps() const;
};

/// Fractional Adams-Bashforth-Moulton (PECE) with full-memory convolution.
StateTrajectory solve_caputo(const FdeProblem& p);

/// Two-step Adams-Bashforth on the integral form
///   y(t) = y0 + a1 (f(t, y) - f(t0, y0)) + a2 int_{t0}^t f,
/// with the a1 term lagged one step. At alpha = 1 this is classical AB2.
StateTrajectory solve_cf(const FdeProblem& p);

/// Fractional Adams stepping on
///   y(t) = y0 + (1-a)/B (f(t, y) - f(t0, y0)) + a/B RL-integral of f,
/// with a product-rectangle predictor and a fixed-point product-trapezoid
/// corrector (at most 50 sweeps, tolerance 1e-12).
StateTrajectory solve_abc(const FdeProblem& p);

/// Classical RK4, alpha must be 1. Used as a test oracle.
StateTrajectory rk4_oracle(const FdeProblem& p);

/// Dispatches on p.order.family.
StateTrajectory solve(const FdeProblem& p);

}  // namespace fraclyap
