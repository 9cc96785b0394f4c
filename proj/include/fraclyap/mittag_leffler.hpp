#pragma once

namespace fraclyap {

/// Parameters of the Prabhakar function E^rho_{alpha,beta}; rho = 1 is the
/// two-parameter Mittag-Leffler function.
struct MLParams {
    double alpha = 1.0;
    double beta = 1.0;
    double rho = 1.0;

    void validate() const;
};

struct MLOptions {
    /// Absolute accuracy the evaluation must guarantee.
    double tolerance = 1e-13;
    int max_terms = 10000;
};

/// E^rho_{alpha,beta}(z) = sum_j (rho)_j / j! * z^j / Gamma(alpha*j + beta).
///
/// The power series is summed with Neumaier compensation in double precision.
/// When the alternating terms grow large enough that cancellation would break
/// the tolerance, the sum is repeated in quad precision. For the kernel case
/// E_alpha(-x) with 0 < alpha < 1 and large x, the Laplace-type integral
/// representation with its completely monotone spectral density is used
/// instead. Throws EvaluationError when no route reaches the tolerance.
double ml(const MLParams& params, double z, const MLOptions& options = {});

/// Two-parameter function E_{alpha,beta}(z) without the Pochhammer factor.
double ml2(double alpha, double beta, double z, const MLOptions& options = {});

/// dE_{alpha,beta}/dz evaluated as E^2_{alpha,alpha+beta}(z). Requires rho = 1.
double ml_derivative(const MLParams& params, double z, const MLOptions& options = {});

}  // namespace fraclyap
