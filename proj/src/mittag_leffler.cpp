#include "fraclyap/mittag_leffler.hpp"

#include <quadmath.h>

#include <boost/math/quadrature/exp_sinh.hpp>
#include <cmath>
#include <limits>
#include <numbers>
#include <string>

#include "fraclyap/errors.hpp"

namespace fraclyap {
namespace {

using quad = __float128;

// Per-precision math so the series engine can be written once.
inline double abs_(double x) { return std::fabs(x); }
inline double pow_(double x, double y) { return std::pow(x, y); }
inline double tgamma_(double x) { return std::tgamma(x); }
inline double lgamma_(double x) { return std::lgamma(x); }
inline double exp_(double x) { return std::exp(x); }
inline double log_(double x) { return std::log(x); }

inline quad abs_(quad x) { return fabsq(x); }
inline quad pow_(quad x, quad y) { return powq(x, y); }
inline quad tgamma_(quad x) { return tgammaq(x); }
inline quad lgamma_(quad x) { return lgammaq(x); }
inline quad exp_(quad x) { return expq(x); }
inline quad log_(quad x) { return logq(x); }

template <class Real>
constexpr double unit_roundoff();
template <>
constexpr double unit_roundoff<double>() {
    return std::numeric_limits<double>::epsilon();
}
template <>
constexpr double unit_roundoff<quad>() {
    return 1.93e-34;
}

struct SeriesOutcome {
    double value = 0.0;
    double abs_sum = 0.0;  // sum of |term|, bounds the rounding error
    bool converged = false;
};

// Neumaier-compensated summation of sum_j c_j z^j / Gamma(alpha j + beta),
// c_j = (rho)_j / j!. Stops early once the rounding bound exceeds abort_above.
template <class Real>
SeriesOutcome sum_series(double alpha, double beta, double rho, bool pochhammer, double z,
                         int max_terms, double abs_floor, double abort_above) {
    const Real a = alpha;
    const Real b = beta;
    const Real r = rho;
    const Real az = abs_(Real(z));
    const Real log_az = az > 0 ? log_(az) : Real(0);
    const double bound_factor = 4.0 * unit_roundoff<Real>();

    Real sum = 1 / tgamma_(b);
    Real comp = 0;
    Real abs_sum = abs_(sum);
    Real coeff = 1;
    Real prev = abs_(sum);

    SeriesOutcome out;
    for (int j = 1; j < max_terms; ++j) {
        const Real jr = j;
        if (pochhammer) {
            coeff *= (r + jr - 1) / jr;
        }
        const Real gamma_arg = a * jr + b;
        Real magnitude;
        if (gamma_arg < 170 && jr * log_az < 700) {
            magnitude = coeff * pow_(az, jr) / tgamma_(gamma_arg);
        } else {
            magnitude = exp_(log_(coeff) + jr * log_az - lgamma_(gamma_arg));
        }
        const Real term = (z < 0 && (j % 2 == 1)) ? -magnitude : magnitude;

        const Real t = sum + term;
        if (abs_(sum) >= abs_(term)) {
            comp += (sum - t) + term;
        } else {
            comp += (term - t) + sum;
        }
        sum = t;
        abs_sum += magnitude;

        if (!(static_cast<double>(abs_sum) < std::numeric_limits<double>::max())) {
            return out;
        }
        if (bound_factor * static_cast<double>(abs_sum) > abort_above) {
            out.abs_sum = static_cast<double>(abs_sum);
            return out;
        }
        const Real total = sum + comp;
        if (magnitude <= prev && magnitude <= Real(1e-17) * abs_(total) + Real(abs_floor)) {
            out.value = static_cast<double>(total);
            out.abs_sum = static_cast<double>(abs_sum);
            out.converged = true;
            return out;
        }
        prev = magnitude;
    }
    out.value = static_cast<double>(sum + comp);
    out.abs_sum = static_cast<double>(abs_sum);
    return out;
}

// E_alpha(-x), 0 < alpha < 1, x > 0, through
//   sin(alpha pi)/(alpha pi) * int_0^inf exp(-v^(1/alpha)) x / (v^2 + 2 x cos(alpha pi) v + x^2) dv,
// the Laplace representation of the relaxation function after v = s^alpha.
double ml_negative_axis(double alpha, double x, double tolerance) {
    const double c = std::cos(alpha * std::numbers::pi);
    const double inv_alpha = 1.0 / alpha;
    auto integrand = [&](double v) {
        const double den = v * v + 2.0 * x * c * v + x * x;
        return std::exp(-std::pow(v, inv_alpha)) * x / den;
    };
    static thread_local boost::math::quadrature::exp_sinh<double> integrator;
    double error = 0.0;
    double l1 = 0.0;
    const double integral = integrator.integrate(integrand, 1e-15, &error, &l1);
    const double value = std::sin(alpha * std::numbers::pi) / (alpha * std::numbers::pi) * integral;
    if (!std::isfinite(value) || error * std::abs(value) > tolerance) {
        throw EvaluationError("mittag-leffler: integral representation failed at z = " +
                              std::to_string(-x));
    }
    return value;
}

double evaluate(double alpha, double beta, double rho, bool pochhammer, double z,
                const MLOptions& options) {
    if (!std::isfinite(z)) {
        throw DomainError("mittag-leffler: argument must be finite");
    }
    if (z == 0.0) {
        return 1.0 / std::tgamma(beta);
    }
    if (alpha == 1.0 && beta == 1.0 && rho == 1.0) {
        return std::exp(z);
    }
    const double floor = 1e-3 * options.tolerance;

    const auto fast = sum_series<double>(alpha, beta, rho, pochhammer, z, options.max_terms,
                                         floor, options.tolerance);
    if (fast.converged &&
        4.0 * unit_roundoff<double>() * fast.abs_sum <= options.tolerance) {
        return fast.value;
    }

    const bool relaxation_kernel = rho == 1.0 && beta == 1.0 && alpha < 1.0 && z < 0.0;
    if (relaxation_kernel) {
        return ml_negative_axis(alpha, -z, options.tolerance);
    }

    const auto precise = sum_series<quad>(alpha, beta, rho, pochhammer, z, options.max_terms,
                                          floor, options.tolerance);
    if (precise.converged &&
        4.0 * unit_roundoff<quad>() * precise.abs_sum <= options.tolerance) {
        return precise.value;
    }
    throw EvaluationError("mittag-leffler: series did not reach tolerance for alpha=" +
                          std::to_string(alpha) + " beta=" + std::to_string(beta) +
                          " rho=" + std::to_string(rho) + " z=" + std::to_string(z));
}

}  // namespace

void MLParams::validate() const {
    if (!(alpha > 0.0) || !(beta > 0.0) || !(rho > 0.0) || !std::isfinite(alpha) ||
        !std::isfinite(beta) || !std::isfinite(rho)) {
        throw DomainError("mittag-leffler: alpha, beta and rho must be positive and finite");
    }
}

double ml(const MLParams& params, double z, const MLOptions& options) {
    params.validate();
    return evaluate(params.alpha, params.beta, params.rho, true, z, options);
}

double ml2(double alpha, double beta, double z, const MLOptions& options) {
    MLParams{alpha, beta, 1.0}.validate();
    return evaluate(alpha, beta, 1.0, false, z, options);
}

double ml_derivative(const MLParams& params, double z, const MLOptions& options) {
    params.validate();
    if (params.rho != 1.0) {
        throw DomainError("ml_derivative: defined for the two-parameter function (rho = 1)");
    }
    return ml({params.alpha, params.alpha + params.beta, 2.0}, z, options);
}

}  // namespace fraclyap
