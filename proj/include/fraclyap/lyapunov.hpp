#pragma once

#include <functional>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "fraclyap/operators.hpp"
#include "fraclyap/trajectory.hpp"

namespace fraclyap {

enum class CandidateKind { Quadratic, Volterra, PsiGeneral };

std::string_view to_string(CandidateKind kind);

/// Lyapunov building block Psi. PsiGeneral is
///   Psi(u) = int_{u*}^{u} (g(s) - g(u*)) / g(s) ds
/// for a positive, strictly increasing g; Volterra is the g(s) = s case in
/// closed form; Quadratic is u^2.
struct CandidateFunction {
    CandidateKind kind = CandidateKind::Quadratic;
    double u_star = 1.0;
    std::function<double(double)> g;
    std::string g_label;

    static CandidateFunction quadratic();
    static CandidateFunction volterra(double u_star);
    static CandidateFunction psi_general(double u_star, std::function<double(double)> g,
                                         std::string label = "g");

    std::string label() const;
};

/// Psi(u). Throws DomainError for u <= 0 on the logarithmic/general forms and
/// EvaluationError when g is not positive on the integration range.
double psi(const CandidateFunction& c, double u);

/// dPsi/du = 1 - g(u*)/g(u) (2u for Quadratic).
double psi_slope(const CandidateFunction& c, double u);

/// Checks g > 0 and strictly increasing on 1000 points spanning [lo, hi] and
/// u*. Throws DomainError on the first failure. No-op for closed-form kinds.
void validate_candidate(const CandidateFunction& c, double lo, double hi);

enum class Verdict { Holds, HoldsWithinTolerance, Violated };

std::string_view to_string(Verdict verdict);

struct EstimateReport {
    SampledTrajectory lhs;  // D^a Psi(u(t))
    SampledTrajectory rhs;  // Psi'(u(t)) D^a u(t)
    double max_violation = 0.0;  // max of lhs - rhs over nodes after t0
    double tolerance_used = 0.0;
    Verdict verdict = Verdict::Holds;
};

struct EstimateOptions {
    /// tolerance_used = tolerance_constant * dt.
    double tolerance_constant = 10.0;
    /// Harness self-test: compare rhs <= lhs instead of lhs <= rhs.
    bool swap_sides = false;
};

Verdict classify(double max_violation, double tolerance);

/// Evaluates both sides of D^a Psi(u) <= Psi'(u) D^a u along a sampled
/// trajectory (Psi applied pointwise, then the operator quadrature).
EstimateReport verify_estimate(const SampledTrajectory& u, const FractionalOrder& order,
                               const CandidateFunction& c, const KernelConfig& kcfg = {},
                               const EstimateOptions& options = {});

struct ScanItem {
    std::string label;
    SampledTrajectory u;
    FractionalOrder order;
    CandidateFunction candidate;
};

struct ScanResult {
    std::string label;
    FractionalOrder order;
    std::string candidate;
    std::optional<EstimateReport> report;
    std::string error;  // non-empty iff report is absent
};

struct ScanSummary {
    std::vector<ScanResult> results;
    Verdict worst = Verdict::Holds;
    std::size_t errors = 0;
    /// max(0, max_violation) over all reports.
    double worst_positive_violation = 0.0;
};

/// Runs verify_estimate on every item (items in parallel). Per-item failures
/// are recorded in the result and do not stop the batch.
ScanSummary margin_scan(const std::vector<ScanItem>& items, const KernelConfig& kcfg = {},
                        const EstimateOptions& options = {});

}  // namespace fraclyap
