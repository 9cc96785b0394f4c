#pragma once

#include <array>
#include <cstdint>
#include <functional>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "fraclyap/operators.hpp"
#include "fraclyap/solvers.hpp"

namespace fraclyap::seir {

/// Rates per unit time; the model uses them raised to alpha. beta may be 0.
struct SeirParams {
    double Lambda = 2.0;
    double d = 0.1;
    double beta = 0.03;
    double sigma = 0.2;
    double gamma = 0.1;
    double alpha = 1.0;

    void validate() const;

    double Lambda_a() const;
    double d_a() const;
    double beta_a() const;
    double sigma_a() const;
    double gamma_a() const;
    /// sigma^a + d^a
    double m1() const;
    /// gamma^a + d^a
    double m2() const;
    /// Lambda^a / d^a
    double S0() const;
};

using Scalar2 = std::function<double(double S, double I)>;

/// Incidence F(S, I) = I F1(S, I) with analytic partial derivatives.
struct IncidenceSpec {
    std::string name;
    Scalar2 F;
    Scalar2 F1;
    Scalar2 dF_dI;  // may be empty: one-sided difference at I = 0 is used by r0
    Scalar2 dF1_dS;
    Scalar2 dF1_dI;
    std::map<std::string, double> constants;
};

/// F = beta S I.
IncidenceSpec bilinear(double beta);

/// F = beta S I / (1 + a1 S + a2 I + a3 S I).
IncidenceSpec beddington_deangelis(double beta, double a1, double a2, double a3);

/// Builds a named incidence ("bilinear" or "beddington_deangelis") with the
/// transmission coefficient beta^alpha from params; `constants` supplies a1..a3.
IncidenceSpec make_incidence(const std::string& name, const SeirParams& params,
                             const std::map<std::string, double>& constants = {});

struct HypothesisViolation {
    std::string condition;
    double S = 0.0;
    double I = 0.0;
    double value = 0.0;
};

struct HypothesisReport {
    bool passed = true;
    std::optional<HypothesisViolation> first;      // in grid scan order
    std::vector<HypothesisViolation> per_condition;  // first violation of each failed condition
};

/// Evaluates the incidence hypotheses on an n x n grid over [0,Smax] x [0,Imax]:
/// F(S,0) = F(0,I) = 0, F = I F1, dF1/dS > 0, dF1/dI <= 0, dF/dI >= 0.
HypothesisReport check_hypotheses(const IncidenceSpec& inc, double Smax, double Imax,
                                  std::size_t n = 50);

/// sigma^a dF/dI(S0, 0) / (m1 m2).
double r0(const SeirParams& params, const IncidenceSpec& inc);

/// (S, E, I, R)
using State = std::array<double, 4>;

struct EquilibriumReport {
    State disease_free{};
    double disease_free_residual = 0.0;
    double r0 = 0.0;
    std::optional<State> endemic;
    double residual_norm = 0.0;  // endemic residual, 0 when absent
};

/// Max-norm of the reduced (S, E, I) right-hand side at a state.
double reduced_residual(const SeirParams& params, const IncidenceSpec& inc, const State& x);

/// Disease-free state always; endemic state by bisection in E on (0, Lambda^a/m1)
/// when r0 > 1.
EquilibriumReport equilibria(const SeirParams& params, const IncidenceSpec& inc);

/// Full four-compartment right-hand side.
VectorField seir_rhs(const SeirParams& params, const IncidenceSpec& inc);

struct PositivityWarning {
    std::size_t step = 0;
    std::size_t component = 0;
    double value = 0.0;
};

struct SimulationResult {
    StateTrajectory trajectory;
    std::optional<PositivityWarning> warning;
};

/// Integrates the model with the solver matching order.family. States below
/// -1e-8 are reported (not clipped).
SimulationResult simulate(const SeirParams& params, const IncidenceSpec& inc, const State& y0,
                          const FractionalOrder& order, double T, double dt,
                          const KernelConfig& kcfg = {});

/// x - 1 - ln x
double g_entropy(double x);

/// int_{S0}^{S} (1 - F1(S0,0)/F1(x,0)) dx + E + (m1/sigma^a) I.
double lyapunov_V0(const SeirParams& params, const IncidenceSpec& inc, double S, double E,
                   double I);

/// Endemic functional; `endemic` is (S*, E*, I*, R*).
double lyapunov_V1(const SeirParams& params, const IncidenceSpec& inc, const State& endemic,
                   double S, double E, double I);

/// 3 - F*/F(S,I*) + F(S,I)/F(S,I*) - E* F(S,I)/(E F*) - I/I* - I* E/(I E*), F* = F(S*,I*).
double v1_bracket(const IncidenceSpec& inc, const State& endemic, double S, double E, double I);

/// The same bracket written as minus a sum of five G terms.
double v1_bracket_g_form(const IncidenceSpec& inc, const State& endemic, double S, double E,
                         double I);

/// H(I) = G(F(S,I)/F(S,I*)) - G(I/I*), non-positive under the hypotheses.
double h_function(const IncidenceSpec& inc, double S, double I, double I_star);

enum class Attractor { DiseaseFree, Endemic };

std::string_view to_string(Attractor a);

struct StabilityOptions {
    double T_max = 400.0;
    double dt = 0.05;
    double epsilon = 1e-3;
    KernelConfig kernel;
};

struct StateOutcome {
    State initial{};
    State final_state{};
    double distance = 0.0;  // max-norm over (S, E, I)
    bool converged = false;
    /// max_k (V_{k+1} - V_k) along the trajectory (finite values only).
    double max_lyapunov_increase = 0.0;
    double v_initial = 0.0;
    double v_final = 0.0;
    std::optional<PositivityWarning> warning;
    std::string error;
};

struct StabilityReport {
    double r0 = 0.0;
    Attractor attractor = Attractor::DiseaseFree;
    State attractor_state{};
    std::vector<StateOutcome> outcomes;

    bool all_converged() const;
    double max_lyapunov_increase() const;
};

/// Simulates each initial state to T_max (states in parallel) and measures the
/// distance to the predicted attractor and the Lyapunov functional along the path.
StabilityReport verify_stability(const SeirParams& params, const IncidenceSpec& inc,
                                 const FractionalOrder& order, const std::vector<State>& initial,
                                 const StabilityOptions& options);

/// Deterministic corpus of strictly positive initial states around the
/// disease-free state: S in [0.5 S0, 1.5 S0], E, I in [0.05, 0.25] S0, R in [0, 0.1] S0.
std::vector<State> random_initial_states(const SeirParams& params, std::size_t count,
                                         std::uint64_t seed);

/// States in a relative neighbourhood of `center`: each positive component is
/// scaled by 1 + spread * U[-1, 1]; zero components are drawn from
/// U[0.01, 0.05] S0 so that infection is present.
std::vector<State> neighbourhood_initial_states(const SeirParams& params, const State& center,
                                                std::size_t count, std::uint64_t seed,
                                                double spread = 0.25);

}  // namespace fraclyap::seir
