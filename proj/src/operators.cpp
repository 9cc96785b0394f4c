#include "fraclyap/operators.hpp"

#include <array>
#include <cmath>
#include <string>

#include "fraclyap/errors.hpp"
#include "fraclyap/mittag_leffler.hpp"

namespace fraclyap {
namespace {

// 4-point Gauss-Legendre on [-1, 1].
constexpr std::array<double, 4> kGaussNodes = {-0.8611363115940526, -0.3399810435848563,
                                               0.3399810435848563, 0.8611363115940526};
constexpr std::array<double, 4> kGaussWeights = {0.3478548451374538, 0.6521451548625461,
                                                 0.6521451548625461, 0.3478548451374538};

void require_alpha(double alpha, const char* op) {
    if (!(alpha > 0.0 && alpha <= 1.0)) {
        throw DomainError(std::string(op) + ": alpha must lie in (0, 1], got " +
                          std::to_string(alpha));
    }
}

double relaxation_rate(double alpha) { return alpha / (1.0 - alpha); }

std::vector<double> running_trapezoid(const SampledTrajectory& f) {
    std::vector<double> out(f.size(), 0.0);
    for (std::size_t n = 1; n < f.size(); ++n) {
        out[n] = out[n - 1] + 0.5 * f.dt * (f.values[n - 1] + f.values[n]);
    }
    return out;
}

}  // namespace

std::string_view to_string(Family family) {
    switch (family) {
        case Family::RlIntegral: return "rl_integral";
        case Family::Caputo: return "caputo";
        case Family::CaputoFabrizio: return "caputo_fabrizio";
        case Family::Abc: return "abc";
    }
    return "unknown";
}

Family family_from_string(std::string_view name) {
    if (name == "rl_integral") return Family::RlIntegral;
    if (name == "caputo" || name == "c") return Family::Caputo;
    if (name == "caputo_fabrizio" || name == "cf") return Family::CaputoFabrizio;
    if (name == "abc") return Family::Abc;
    throw DomainError("unknown derivative family '" + std::string(name) + "'");
}

void FractionalOrder::validate() const { require_alpha(alpha, "FractionalOrder"); }

void KernelConfig::validate(double alpha) const {
    if (!(normalization_B > 0.0) || !std::isfinite(normalization_B)) {
        throw DomainError("KernelConfig: normalization B must be positive and finite");
    }
    if (alpha == 1.0 && normalization_B != 1.0) {
        throw DomainError("KernelConfig: normalization must satisfy B(1) = 1");
    }
    if (!(grid_tolerance > 0.0)) {
        throw DomainError("KernelConfig: grid tolerance must be positive");
    }
}

namespace detail {

void power_increments(double p, std::size_t count, double* out) {
    for (std::size_t k = 0; k < count; ++k) {
        if (k == 0) {
            out[k] = 1.0;
        } else {
            const double kk = static_cast<double>(k);
            out[k] = std::pow(kk, p) * std::expm1(p * std::log1p(1.0 / kk));
        }
    }
}

void power_second_differences(double p, std::size_t count, double* out) {
    for (std::size_t k = 0; k < count; ++k) {
        if (k == 0) {
            out[k] = 1.0;
        } else if (k == 1) {
            out[k] = std::pow(2.0, p) - 2.0;
        } else {
            const double kk = static_cast<double>(k);
            out[k] = std::pow(kk, p) * (std::expm1(p * std::log1p(1.0 / kk)) +
                                        std::expm1(p * std::log1p(-1.0 / kk)));
        }
    }
}

double rl_first_weight(double alpha, std::size_t n) {
    const double nn = static_cast<double>(n);
    // Rearranged to avoid cancellation between the two O(n^(a+1)) terms.
    return std::pow(nn, alpha) *
           (nn * std::expm1((alpha + 1.0) * std::log1p(-1.0 / nn)) + 1.0 + alpha);
}

void history_convolution(const std::vector<double>& u, const std::vector<double>& weights,
                         double scale, std::vector<double>& out) {
    const std::size_t n_nodes = u.size();
    out.assign(n_nodes, 0.0);
    std::vector<double> increments(n_nodes > 0 ? n_nodes - 1 : 0);
    for (std::size_t j = 0; j + 1 < n_nodes; ++j) {
        increments[j] = u[j + 1] - u[j];
    }
    const long long last = static_cast<long long>(n_nodes);
#pragma omp parallel for schedule(dynamic, 64)
    for (long long n = 1; n < last; ++n) {
        double acc = 0.0;
        for (long long j = 0; j < n; ++j) {
            acc += weights[static_cast<std::size_t>(n - 1 - j)] * increments[static_cast<std::size_t>(j)];
        }
        out[static_cast<std::size_t>(n)] = scale * acc;
    }
}

void rl_product_trapezoid(const std::vector<double>& f, double alpha, double dt,
                          std::vector<double>& out) {
    const std::size_t n_nodes = f.size();
    out.assign(n_nodes, 0.0);
    std::vector<double> interior(n_nodes);
    power_second_differences(alpha + 1.0, n_nodes, interior.data());
    const double scale = std::pow(dt, alpha) / std::tgamma(alpha + 2.0);
    const long long last = static_cast<long long>(n_nodes);
#pragma omp parallel for schedule(dynamic, 64)
    for (long long n = 1; n < last; ++n) {
        double acc = rl_first_weight(alpha, static_cast<std::size_t>(n)) * f[0];
        for (long long j = 1; j <= n; ++j) {
            acc += interior[static_cast<std::size_t>(n - j)] * f[static_cast<std::size_t>(j)];
        }
        out[static_cast<std::size_t>(n)] = scale * acc;
    }
}

std::vector<double> abc_kernel_moments(double alpha, double dt, std::size_t count) {
    std::vector<double> moments(count, 0.0);
    const double rate = relaxation_rate(alpha);
    const long long total = static_cast<long long>(count);
    bool failed = false;
    std::string failure;
#pragma omp parallel for schedule(dynamic, 16)
    for (long long k = 0; k < total; ++k) {
        double acc = 0.0;
        try {
            for (std::size_t q = 0; q < kGaussNodes.size(); ++q) {
                const double s = (static_cast<double>(k) + 0.5 * (1.0 + kGaussNodes[q])) * dt;
                acc += kGaussWeights[q] * ml2(alpha, 1.0, -rate * std::pow(s, alpha));
            }
        } catch (const std::exception& e) {
#pragma omp critical(fraclyap_abc_failure)
            {
                failed = true;
                failure = e.what();
            }
        }
        moments[static_cast<std::size_t>(k)] = 0.5 * dt * acc;
    }
    if (failed) {
        throw EvaluationError("abc kernel: " + failure);
    }
    return moments;
}

}  // namespace detail

SampledTrajectory classical_derivative(const SampledTrajectory& u) {
    u.validate();
    SampledTrajectory out = u.zeros_like();
    const std::size_t n = u.size();
    if (n == 2) {
        out.values[1] = (u.values[1] - u.values[0]) / u.dt;
        return out;
    }
    for (std::size_t i = 1; i + 1 < n; ++i) {
        out.values[i] = (u.values[i + 1] - u.values[i - 1]) / (2.0 * u.dt);
    }
    out.values[n - 1] =
        (3.0 * u.values[n - 1] - 4.0 * u.values[n - 2] + u.values[n - 3]) / (2.0 * u.dt);
    return out;
}

SampledTrajectory rl_integral(const SampledTrajectory& u, double alpha) {
    require_alpha(alpha, "rl_integral");
    u.validate();
    SampledTrajectory out{u.t0, u.dt, {}};
    detail::rl_product_trapezoid(u.values, alpha, u.dt, out.values);
    return out;
}

SampledTrajectory caputo_deriv(const SampledTrajectory& u, double alpha) {
    require_alpha(alpha, "caputo_deriv");
    u.validate();
    if (u.size() < 3) {
        throw DomainError("caputo_deriv: at least 3 samples required");
    }
    if (alpha == 1.0) {
        return classical_derivative(u);
    }
    std::vector<double> weights(u.size());
    detail::power_increments(1.0 - alpha, weights.size(), weights.data());
    SampledTrajectory out{u.t0, u.dt, {}};
    detail::history_convolution(u.values, weights,
                                std::pow(u.dt, -alpha) / std::tgamma(2.0 - alpha), out.values);
    return out;
}

SampledTrajectory cf_deriv(const SampledTrajectory& u, double alpha, const KernelConfig& cfg) {
    require_alpha(alpha, "cf_deriv");
    cfg.validate(alpha);
    u.validate();
    if (alpha == 1.0) {
        return classical_derivative(u);
    }
    const double rate = relaxation_rate(alpha);
    const double prefactor = 0.5 * cfg.normalization_B * (2.0 - alpha) / (1.0 - alpha);
    std::vector<double> weights(u.size());
    for (std::size_t k = 0; k < weights.size(); ++k) {
        weights[k] = std::exp(-rate * static_cast<double>(k) * u.dt);
    }
    const double scale = prefactor * (-std::expm1(-rate * u.dt)) / (rate * u.dt);
    SampledTrajectory out{u.t0, u.dt, {}};
    detail::history_convolution(u.values, weights, scale, out.values);
    return out;
}

SampledTrajectory cf_integral(const SampledTrajectory& f, double alpha, const KernelConfig& cfg) {
    require_alpha(alpha, "cf_integral");
    cfg.validate(alpha);
    f.validate();
    SampledTrajectory out{f.t0, f.dt, running_trapezoid(f)};
    if (alpha == 1.0) {
        return out;
    }
    const double denom = cfg.normalization_B * (2.0 - alpha);
    const double a1 = 2.0 * (1.0 - alpha) / denom;
    const double a2 = 2.0 * alpha / denom;
    for (std::size_t i = 0; i < out.size(); ++i) {
        out.values[i] = a1 * f.values[i] + a2 * out.values[i];
    }
    return out;
}

SampledTrajectory abc_deriv(const SampledTrajectory& u, double alpha, const KernelConfig& cfg) {
    require_alpha(alpha, "abc_deriv");
    cfg.validate(alpha);
    u.validate();
    if (alpha == 1.0) {
        return classical_derivative(u);
    }
    const std::vector<double> moments = detail::abc_kernel_moments(alpha, u.dt, u.size());
    SampledTrajectory out{u.t0, u.dt, {}};
    detail::history_convolution(u.values, moments,
                                cfg.normalization_B / ((1.0 - alpha) * u.dt), out.values);
    return out;
}

SampledTrajectory ab_integral(const SampledTrajectory& f, double alpha, const KernelConfig& cfg) {
    require_alpha(alpha, "ab_integral");
    cfg.validate(alpha);
    SampledTrajectory out = rl_integral(f, alpha);
    const double b = cfg.normalization_B;
    for (std::size_t i = 0; i < out.size(); ++i) {
        out.values[i] = (1.0 - alpha) / b * f.values[i] + alpha / b * out.values[i];
    }
    return out;
}

SampledTrajectory fractional_derivative(const SampledTrajectory& u, const FractionalOrder& order,
                                        const KernelConfig& cfg) {
    order.validate();
    switch (order.family) {
        case Family::Caputo: return caputo_deriv(u, order.alpha);
        case Family::CaputoFabrizio: return cf_deriv(u, order.alpha, cfg);
        case Family::Abc: return abc_deriv(u, order.alpha, cfg);
        case Family::RlIntegral: break;
    }
    throw DomainError("fractional_derivative: the RL integral is not a derivative family");
}

namespace reference {

SampledTrajectory rl_integral(const SampledTrajectory& u, double alpha) {
    require_alpha(alpha, "reference::rl_integral");
    u.validate();
    SampledTrajectory out = u.zeros_like();
    const double scale = std::pow(u.dt, alpha) / std::tgamma(alpha + 2.0);
    const double p = alpha + 1.0;
    for (std::size_t n = 1; n < u.size(); ++n) {
        const double nn = static_cast<double>(n);
        double acc = (std::pow(nn - 1.0, p) - (nn - 1.0 - alpha) * std::pow(nn, alpha)) * u[0];
        for (std::size_t j = 1; j < n; ++j) {
            const double k = static_cast<double>(n - j);
            acc += (std::pow(k + 1.0, p) - 2.0 * std::pow(k, p) + std::pow(k - 1.0, p)) * u[j];
        }
        acc += u[n];
        out.values[n] = scale * acc;
    }
    return out;
}

SampledTrajectory caputo_deriv(const SampledTrajectory& u, double alpha) {
    require_alpha(alpha, "reference::caputo_deriv");
    u.validate();
    if (alpha == 1.0) {
        return classical_derivative(u);
    }
    SampledTrajectory out = u.zeros_like();
    const double scale = std::pow(u.dt, -alpha) / std::tgamma(2.0 - alpha);
    const double p = 1.0 - alpha;
    for (std::size_t n = 1; n < u.size(); ++n) {
        double acc = 0.0;
        for (std::size_t j = 0; j < n; ++j) {
            const double k = static_cast<double>(n - 1 - j);
            acc += (std::pow(k + 1.0, p) - std::pow(k, p)) * (u[j + 1] - u[j]);
        }
        out.values[n] = scale * acc;
    }
    return out;
}

SampledTrajectory cf_deriv(const SampledTrajectory& u, double alpha, const KernelConfig& cfg) {
    require_alpha(alpha, "reference::cf_deriv");
    cfg.validate(alpha);
    u.validate();
    if (alpha == 1.0) {
        return classical_derivative(u);
    }
    SampledTrajectory out = u.zeros_like();
    const double rate = relaxation_rate(alpha);
    const double prefactor = 0.5 * cfg.normalization_B * (2.0 - alpha) / (1.0 - alpha);
    for (std::size_t n = 1; n < u.size(); ++n) {
        const double t = u.time(n);
        double acc = 0.0;
        for (std::size_t j = 0; j < n; ++j) {
            const double slope = (u[j + 1] - u[j]) / u.dt;
            // int_{t_j}^{t_{j+1}} exp(-rate (t - x)) dx
            acc += slope * (std::exp(-rate * (t - u.time(j + 1))) - std::exp(-rate * (t - u.time(j)))) /
                   rate;
        }
        out.values[n] = prefactor * acc;
    }
    return out;
}

SampledTrajectory abc_deriv(const SampledTrajectory& u, double alpha, const KernelConfig& cfg) {
    require_alpha(alpha, "reference::abc_deriv");
    cfg.validate(alpha);
    u.validate();
    if (alpha == 1.0) {
        return classical_derivative(u);
    }
    SampledTrajectory out = u.zeros_like();
    const double rate = relaxation_rate(alpha);
    for (std::size_t n = 1; n < u.size(); ++n) {
        const double t = u.time(n);
        double acc = 0.0;
        for (std::size_t j = 0; j < n; ++j) {
            const double slope = (u[j + 1] - u[j]) / u.dt;
            const double a = u.time(j);
            const double b = u.time(j + 1);
            double moment = 0.0;
            for (std::size_t q = 0; q < kGaussNodes.size(); ++q) {
                const double x = 0.5 * (a + b) + 0.5 * (b - a) * kGaussNodes[q];
                moment += kGaussWeights[q] * ml2(alpha, 1.0, -rate * std::pow(t - x, alpha));
            }
            acc += slope * 0.5 * (b - a) * moment;
        }
        out.values[n] = cfg.normalization_B / (1.0 - alpha) * acc;
    }
    return out;
}

}  // namespace reference

}  // namespace fraclyap
