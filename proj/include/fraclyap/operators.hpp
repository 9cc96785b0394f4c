#pragma once

#include <cstddef>
#include <string_view>
#include <vector>

#include "fraclyap/trajectory.hpp"

namespace fraclyap {

enum class Family { RlIntegral, Caputo, CaputoFabrizio, Abc };

std::string_view to_string(Family family);
/// Accepts "rl_integral", "caputo", "caputo_fabrizio" (or "cf"), "abc". Throws DomainError.
Family family_from_string(std::string_view name);

struct FractionalOrder {
    double alpha = 1.0;
    Family family = Family::Caputo;

    /// 0 < alpha <= 1.
    void validate() const;
};

struct KernelConfig {
    /// Value of the normalization function B at the working alpha.
    double normalization_B = 1.0;
    /// Relative tolerance used when comparing grids and time spans.
    double grid_tolerance = 1e-8;

    /// B > 0, and B(1) = 1 when alpha = 1.
    void validate(double alpha) const;
};

// All operators return a trajectory on the input grid. The value at t0 is the
// limit of the defining integral there, i.e. 0, except for the f(t) term of the
// CF and AB integrals. At alpha = 1 the CF/ABC/Caputo derivatives take the
// classical-derivative branch and cf_integral the plain running integral.

/// Riemann-Liouville integral by product-trapezoidal quadrature (exact for
/// piecewise-linear samples).
SampledTrajectory rl_integral(const SampledTrajectory& u, double alpha);

/// Caputo derivative by the L1 scheme. Needs N >= 3.
SampledTrajectory caputo_deriv(const SampledTrajectory& u, double alpha);

/// Caputo-Fabrizio derivative; the exponential kernel is integrated exactly
/// against the piecewise-linear interpolant.
SampledTrajectory cf_deriv(const SampledTrajectory& u, double alpha, const KernelConfig& cfg = {});

/// a1 f(t) + a2 int_{t0}^t f, a1 = 2(1-a)/(B(2-a)), a2 = 2a/(B(2-a)).
SampledTrajectory cf_integral(const SampledTrajectory& f, double alpha,
                              const KernelConfig& cfg = {});

/// Atangana-Baleanu-Caputo derivative. Kernel moments over each subinterval use
/// 4-point Gauss-Legendre; the kernel depends only on t - x, so it is tabulated
/// once per call.
SampledTrajectory abc_deriv(const SampledTrajectory& u, double alpha, const KernelConfig& cfg = {});

/// (1-a)/B f(t) + a/B RL-integral.
SampledTrajectory ab_integral(const SampledTrajectory& f, double alpha,
                              const KernelConfig& cfg = {});

/// Central differences inside, second-order one-sided at the last node, 0 at t0.
SampledTrajectory classical_derivative(const SampledTrajectory& u);

/// Dispatches on order.family; RlIntegral is rejected (not a derivative).
SampledTrajectory fractional_derivative(const SampledTrajectory& u, const FractionalOrder& order,
                                        const KernelConfig& cfg = {});

namespace detail {

/// Differences (k+1)^p - k^p for k = 0..count-1, computed without cancellation.
void power_increments(double p, std::size_t count, double* out);

/// Second differences (k+1)^p - 2k^p + (k-1)^p for k = 1..count-1 (out[0] = 1).
void power_second_differences(double p, std::size_t count, double* out);

/// Endpoint weight (n-1)^(a+1) - (n-1-a) n^a of the product-trapezoid rule at node n >= 1.
double rl_first_weight(double alpha, std::size_t n);

/// out[n] = scale * sum_{j<n} weights[n-1-j] * (u[j+1] - u[j]); out[0] = 0.
/// Parallel over n.
void history_convolution(const std::vector<double>& u, const std::vector<double>& weights,
                         double scale, std::vector<double>& out);

/// Product-trapezoidal RL sum; parallel over n.
void rl_product_trapezoid(const std::vector<double>& f, double alpha, double dt,
                          std::vector<double>& out);

/// Tabulated ABC kernel moments W_k = int_{k dt}^{(k+1) dt} E_a(-a/(1-a) s^a) ds.
std::vector<double> abc_kernel_moments(double alpha, double dt, std::size_t count);

}  // namespace detail

/// Straightforward serial implementations used as test oracles and benchmark
/// baselines for the parallel kernels.
namespace reference {

SampledTrajectory rl_integral(const SampledTrajectory& u, double alpha);
SampledTrajectory caputo_deriv(const SampledTrajectory& u, double alpha);
SampledTrajectory cf_deriv(const SampledTrajectory& u, double alpha, const KernelConfig& cfg = {});
SampledTrajectory abc_deriv(const SampledTrajectory& u, double alpha, const KernelConfig& cfg = {});

}  // namespace reference

}  // namespace fraclyap
