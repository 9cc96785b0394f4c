#include "fraclyap/lyapunov.hpp"

#include <algorithm>
#include <boost/math/quadrature/gauss_kronrod.hpp>
#include <cmath>
#include <limits>

#include "fraclyap/errors.hpp"

namespace fraclyap {
namespace {

constexpr double kQuadratureTolerance = 1e-10;
constexpr int kMonotonicitySamples = 1000;

void require_positive_argument(const CandidateFunction& c, double u) {
    if (c.kind != CandidateKind::Quadratic && !(u > 0.0)) {
        throw DomainError("candidate " + c.label() + ": argument must be positive, got " +
                          std::to_string(u));
    }
}

double checked_g(const CandidateFunction& c, double s) {
    const double v = c.g(s);
    if (!(v > 0.0) || !std::isfinite(v)) {
        throw EvaluationError("candidate " + c.label() + ": g(" + std::to_string(s) +
                              ") is not positive");
    }
    return v;
}

}  // namespace

std::string_view to_string(CandidateKind kind) {
    switch (kind) {
        case CandidateKind::Quadratic: return "quadratic";
        case CandidateKind::Volterra: return "volterra";
        case CandidateKind::PsiGeneral: return "psi_general";
    }
    return "unknown";
}

std::string_view to_string(Verdict verdict) {
    switch (verdict) {
        case Verdict::Holds: return "HOLDS";
        case Verdict::HoldsWithinTolerance: return "HOLDS_WITHIN_TOLERANCE";
        case Verdict::Violated: return "VIOLATED";
    }
    return "unknown";
}

CandidateFunction CandidateFunction::quadratic() { return {CandidateKind::Quadratic, 1.0, {}, {}}; }

CandidateFunction CandidateFunction::volterra(double u_star) {
    if (!(u_star > 0.0)) {
        throw DomainError("volterra candidate: u* must be positive");
    }
    return {CandidateKind::Volterra, u_star, {}, {}};
}

CandidateFunction CandidateFunction::psi_general(double u_star, std::function<double(double)> g,
                                                 std::string label) {
    if (!(u_star > 0.0)) {
        throw DomainError("psi_general candidate: u* must be positive");
    }
    if (!g) {
        throw DomainError("psi_general candidate: g is empty");
    }
    return {CandidateKind::PsiGeneral, u_star, std::move(g), std::move(label)};
}

std::string CandidateFunction::label() const {
    if (kind == CandidateKind::PsiGeneral) {
        return "psi_general[" + g_label + "]";
    }
    return std::string(to_string(kind));
}

double psi(const CandidateFunction& c, double u) {
    require_positive_argument(c, u);
    switch (c.kind) {
        case CandidateKind::Quadratic: return u * u;
        case CandidateKind::Volterra: return u - c.u_star - c.u_star * std::log(u / c.u_star);
        case CandidateKind::PsiGeneral: break;
    }
    if (u == c.u_star) {
        return 0.0;
    }
    const double g_star = checked_g(c, c.u_star);
    auto integrand = [&](double s) { return 1.0 - g_star / checked_g(c, s); };
    const double lo = std::min(u, c.u_star);
    const double hi = std::max(u, c.u_star);
    double error = 0.0;
    const double value = boost::math::quadrature::gauss_kronrod<double, 15>::integrate(
        integrand, lo, hi, 15, kQuadratureTolerance, &error);
    return u > c.u_star ? value : -value;
}

double psi_slope(const CandidateFunction& c, double u) {
    require_positive_argument(c, u);
    switch (c.kind) {
        case CandidateKind::Quadratic: return 2.0 * u;
        case CandidateKind::Volterra: return 1.0 - c.u_star / u;
        case CandidateKind::PsiGeneral: break;
    }
    return 1.0 - checked_g(c, c.u_star) / checked_g(c, u);
}

void validate_candidate(const CandidateFunction& c, double lo, double hi) {
    if (c.kind != CandidateKind::PsiGeneral) {
        return;
    }
    const double a = std::min({lo, hi, c.u_star});
    const double b = std::max({lo, hi, c.u_star});
    if (!(a > 0.0)) {
        throw DomainError("candidate " + c.label() + ": sampled range must be positive");
    }
    double previous = -std::numeric_limits<double>::infinity();
    for (int i = 0; i < kMonotonicitySamples; ++i) {
        const double s = a + (b - a) * static_cast<double>(i) / (kMonotonicitySamples - 1);
        const double v = c.g(s);
        if (!(v > 0.0) || !std::isfinite(v)) {
            throw DomainError("candidate " + c.label() + ": g is not positive at s=" +
                              std::to_string(s));
        }
        if (i > 0 && b > a && !(v > previous)) {
            throw DomainError("candidate " + c.label() + ": g is not strictly increasing at s=" +
                              std::to_string(s));
        }
        previous = v;
    }
}

Verdict classify(double max_violation, double tolerance) {
    if (max_violation <= 0.0) {
        return Verdict::Holds;
    }
    if (max_violation <= tolerance) {
        return Verdict::HoldsWithinTolerance;
    }
    return Verdict::Violated;
}

EstimateReport verify_estimate(const SampledTrajectory& u, const FractionalOrder& order,
                               const CandidateFunction& c, const KernelConfig& kcfg,
                               const EstimateOptions& options) {
    order.validate();
    if (order.family == Family::RlIntegral) {
        throw DomainError("verify_estimate: family must be caputo, caputo_fabrizio or abc");
    }
    u.validate();
    if (c.kind != CandidateKind::Quadratic) {
        for (std::size_t i = 0; i < u.size(); ++i) {
            if (!(u.values[i] > 0.0)) {
                throw DomainError("verify_estimate: trajectory must stay positive for " +
                                  c.label() + " (node " + std::to_string(i) + ")");
            }
        }
        const auto [lo, hi] = std::minmax_element(u.values.begin(), u.values.end());
        validate_candidate(c, *lo, *hi);
    }

    SampledTrajectory composed = u.zeros_like();
    for (std::size_t i = 0; i < u.size(); ++i) {
        composed.values[i] = psi(c, u.values[i]);
    }

    EstimateReport report;
    report.lhs = fractional_derivative(composed, order, kcfg);
    const SampledTrajectory du = fractional_derivative(u, order, kcfg);
    report.rhs = du.zeros_like();
    for (std::size_t i = 0; i < u.size(); ++i) {
        report.rhs.values[i] = psi_slope(c, u.values[i]) * du.values[i];
    }

    // Both sides are 0 at t0 by definition; the margin is taken over the rest.
    double worst = -std::numeric_limits<double>::infinity();
    for (std::size_t i = 1; i < u.size(); ++i) {
        const double gap = options.swap_sides ? report.rhs.values[i] - report.lhs.values[i]
                                              : report.lhs.values[i] - report.rhs.values[i];
        worst = std::max(worst, gap);
    }
    report.max_violation = worst;
    report.tolerance_used = options.tolerance_constant * u.dt;
    report.verdict = classify(report.max_violation, report.tolerance_used);
    return report;
}

ScanSummary margin_scan(const std::vector<ScanItem>& items, const KernelConfig& kcfg,
                        const EstimateOptions& options) {
    ScanSummary summary;
    summary.results.resize(items.size());
    const long long count = static_cast<long long>(items.size());
#pragma omp parallel for schedule(dynamic, 1)
    for (long long i = 0; i < count; ++i) {
        const ScanItem& item = items[static_cast<std::size_t>(i)];
        ScanResult& result = summary.results[static_cast<std::size_t>(i)];
        result.label = item.label;
        result.order = item.order;
        result.candidate = item.candidate.label();
        try {
            result.report = verify_estimate(item.u, item.order, item.candidate, kcfg, options);
        } catch (const std::exception& e) {
            result.error = e.what();
            if (result.error.empty()) {
                result.error = "unknown error";
            }
        }
    }
    for (const ScanResult& r : summary.results) {
        if (!r.report) {
            ++summary.errors;
            continue;
        }
        summary.worst = std::max(summary.worst, r.report->verdict);
        summary.worst_positive_violation =
            std::max(summary.worst_positive_violation, r.report->max_violation);
    }
    return summary;
}

}  // namespace fraclyap
