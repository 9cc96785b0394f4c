#include "fraclyap/seir.hpp"

#include <algorithm>
#include <boost/math/quadrature/gauss_kronrod.hpp>
#include <cmath>
#include <limits>
#include <random>

#include "fraclyap/errors.hpp"

namespace fraclyap::seir {
namespace {

constexpr double kQuadratureTolerance = 1e-10;
constexpr double kPositivityFloor = -1e-8;
constexpr double kDerivativeStep = 1e-7;

double integrate(const std::function<double(double)>& f, double a, double b) {
    if (a == b) {
        return 0.0;
    }
    using boost::math::quadrature::gauss_kronrod;
    const double lo = std::min(a, b);
    const double hi = std::max(a, b);
    // A single 15-point panel settles smooth integrands; near the anchor the
    // integrand is O(b - a) and the relative criterion would chase roundoff.
    double error = 0.0;
    double value = gauss_kronrod<double, 15>::integrate(f, lo, hi, 0, 0.0, &error);
    if (error > kQuadratureTolerance * std::max(1.0, std::abs(value))) {
        value = gauss_kronrod<double, 15>::integrate(f, lo, hi, 15, kQuadratureTolerance, &error);
    }
    return b > a ? value : -value;
}

// int_a^b (x - a)/x dx = b - a - a ln(b/a)
double volterra_term(double value, double anchor) {
    return value - anchor - anchor * std::log(value / anchor);
}

void require_finite(double v, const char* what, double S, double I) {
    if (!std::isfinite(v)) {
        throw EvaluationError(std::string("incidence: non-finite ") + what + " at S=" +
                              std::to_string(S) + " I=" + std::to_string(I));
    }
}

}  // namespace

void SeirParams::validate() const {
    for (double v : {Lambda, d, sigma, gamma}) {
        if (!(v > 0.0) || !std::isfinite(v)) {
            throw DomainError("SeirParams: Lambda, d, sigma, gamma must be positive");
        }
    }
    if (!(beta >= 0.0) || !std::isfinite(beta)) {
        throw DomainError("SeirParams: beta must be non-negative");
    }
    if (!(alpha > 0.0 && alpha <= 1.0)) {
        throw DomainError("SeirParams: alpha must lie in (0, 1]");
    }
}

double SeirParams::Lambda_a() const { return std::pow(Lambda, alpha); }
double SeirParams::d_a() const { return std::pow(d, alpha); }
double SeirParams::beta_a() const { return std::pow(beta, alpha); }
double SeirParams::sigma_a() const { return std::pow(sigma, alpha); }
double SeirParams::gamma_a() const { return std::pow(gamma, alpha); }
double SeirParams::m1() const { return sigma_a() + d_a(); }
double SeirParams::m2() const { return gamma_a() + d_a(); }
double SeirParams::S0() const { return Lambda_a() / d_a(); }

IncidenceSpec bilinear(double beta) {
    IncidenceSpec inc;
    inc.name = "bilinear";
    inc.constants = {{"beta", beta}};
    inc.F = [beta](double S, double I) { return beta * S * I; };
    inc.F1 = [beta](double S, double) { return beta * S; };
    inc.dF_dI = [beta](double S, double) { return beta * S; };
    inc.dF1_dS = [beta](double, double) { return beta; };
    inc.dF1_dI = [](double, double) { return 0.0; };
    return inc;
}

IncidenceSpec beddington_deangelis(double beta, double a1, double a2, double a3) {
    if (a1 < 0.0 || a2 < 0.0 || a3 < 0.0) {
        throw DomainError("beddington_deangelis: a1, a2, a3 must be non-negative");
    }
    IncidenceSpec inc;
    inc.name = "beddington_deangelis";
    inc.constants = {{"beta", beta}, {"a1", a1}, {"a2", a2}, {"a3", a3}};
    auto den = [=](double S, double I) { return 1.0 + a1 * S + a2 * I + a3 * S * I; };
    inc.F = [=](double S, double I) { return beta * S * I / den(S, I); };
    inc.F1 = [=](double S, double I) { return beta * S / den(S, I); };
    inc.dF_dI = [=](double S, double I) {
        const double D = den(S, I);
        return beta * S * (1.0 + a1 * S) / (D * D);
    };
    inc.dF1_dS = [=](double S, double I) {
        const double D = den(S, I);
        return beta * (1.0 + a2 * I) / (D * D);
    };
    inc.dF1_dI = [=](double S, double I) {
        const double D = den(S, I);
        return -beta * S * (a2 + a3 * S) / (D * D);
    };
    return inc;
}

IncidenceSpec make_incidence(const std::string& name, const SeirParams& params,
                             const std::map<std::string, double>& constants) {
    auto get = [&](const char* key) {
        const auto it = constants.find(key);
        return it == constants.end() ? 0.0 : it->second;
    };
    if (name == "bilinear") {
        if (!constants.empty()) {
            throw DomainError("bilinear incidence takes no constants");
        }
        return bilinear(params.beta_a());
    }
    if (name == "beddington_deangelis") {
        for (const auto& [key, value] : constants) {
            if (key != "a1" && key != "a2" && key != "a3") {
                throw DomainError("beddington_deangelis: unknown constant '" + key + "'");
            }
        }
        return beddington_deangelis(params.beta_a(), get("a1"), get("a2"), get("a3"));
    }
    throw DomainError("unknown incidence '" + name + "'");
}

HypothesisReport check_hypotheses(const IncidenceSpec& inc, double Smax, double Imax,
                                  std::size_t n) {
    if (!(Smax > 0.0) || !(Imax > 0.0) || n < 10) {
        throw DomainError("check_hypotheses: need Smax, Imax > 0 and n >= 10");
    }
    HypothesisReport report;
    auto record = [&](const std::string& condition, double S, double I, double value) {
        HypothesisViolation v{condition, S, I, value};
        if (!report.first) {
            report.first = v;
        }
        const bool seen = std::any_of(report.per_condition.begin(), report.per_condition.end(),
                                      [&](const auto& x) { return x.condition == condition; });
        if (!seen) {
            report.per_condition.push_back(v);
        }
        report.passed = false;
    };

    for (std::size_t i = 0; i < n; ++i) {
        const double S = Smax * static_cast<double>(i) / static_cast<double>(n - 1);
        for (std::size_t j = 0; j < n; ++j) {
            const double I = Imax * static_cast<double>(j) / static_cast<double>(n - 1);
            const double F = inc.F(S, I);
            const double F1 = inc.F1(S, I);
            const double dF1_dS = inc.dF1_dS(S, I);
            const double dF1_dI = inc.dF1_dI(S, I);
            require_finite(F, "F", S, I);
            require_finite(F1, "F1", S, I);
            require_finite(dF1_dS, "dF1/dS", S, I);
            require_finite(dF1_dI, "dF1/dI", S, I);
            double dF_dI = 0.0;
            if (inc.dF_dI) {
                dF_dI = inc.dF_dI(S, I);
            } else {
                dF_dI = (inc.F(S, I + kDerivativeStep) - F) / kDerivativeStep;
            }
            require_finite(dF_dI, "dF/dI", S, I);

            if ((j == 0 || i == 0) && std::abs(F) > 1e-12) {
                record(j == 0 ? "F(S,0) = 0" : "F(0,I) = 0", S, I, F);
            }
            if (std::abs(F - I * F1) > 1e-12 * std::max(1.0, std::abs(F))) {
                record("F = I F1", S, I, F - I * F1);
            }
            if (!(dF1_dS > 0.0)) {
                record("dF1/dS > 0", S, I, dF1_dS);
            }
            if (dF1_dI > 0.0) {
                record("dF1/dI <= 0", S, I, dF1_dI);
            }
            if (dF_dI < 0.0) {
                record("dF/dI >= 0", S, I, dF_dI);
            }
        }
    }
    return report;
}

double r0(const SeirParams& params, const IncidenceSpec& inc) {
    params.validate();
    const double S0 = params.S0();
    const double slope = inc.dF_dI ? inc.dF_dI(S0, 0.0)
                                   : (inc.F(S0, kDerivativeStep) - inc.F(S0, 0.0)) / kDerivativeStep;
    const double value = params.sigma_a() * slope / (params.m1() * params.m2());
    if (!(value >= 0.0)) {
        throw DomainError("r0: negative or undefined value; incidence spec is malformed");
    }
    return value;
}

double reduced_residual(const SeirParams& params, const IncidenceSpec& inc, const State& x) {
    const auto [S, E, I, R] = x;
    const double F = inc.F(S, I);
    const double rS = params.Lambda_a() - params.d_a() * S - F;
    const double rE = F - params.m1() * E;
    const double rI = params.sigma_a() * E - params.m2() * I;
    return std::max({std::abs(rS), std::abs(rE), std::abs(rI)});
}

EquilibriumReport equilibria(const SeirParams& params, const IncidenceSpec& inc) {
    params.validate();
    EquilibriumReport report;
    const double Lambda = params.Lambda_a();
    const double d = params.d_a();
    const double m1 = params.m1();
    const double m2 = params.m2();
    const double sigma = params.sigma_a();
    const double gamma = params.gamma_a();

    report.disease_free = {params.S0(), 0.0, 0.0, 0.0};
    report.disease_free_residual = reduced_residual(params, inc, report.disease_free);
    report.r0 = r0(params, inc);
    if (report.r0 <= 1.0) {
        return report;
    }

    const double upper = Lambda / m1;
    auto state_at = [&](double E) {
        const double S = (Lambda - m1 * E) / d;
        const double I = sigma * E / m2;
        return State{S, E, I, gamma * I / d};
    };
    auto excess = [&](double E) {
        const State x = state_at(E);
        return inc.F(std::max(x[0], 0.0), x[2]) - m1 * E;
    };

    // Positive just above E = 0 when r0 > 1; negative at E = upper where S = 0.
    double lo = 0.0;
    for (double scale = 1e-1; scale >= 1e-15; scale *= 0.1) {
        if (excess(upper * scale) > 0.0) {
            lo = upper * scale;
            break;
        }
    }
    double hi = upper;
    if (!(lo > 0.0) || !(excess(hi) < 0.0)) {
        throw EvaluationError("equilibria: no sign change of F(S(E), I(E)) - m1 E on (0, Lambda^a/m1)"
                              " although r0 > 1; model is inconsistent");
    }
    for (int iter = 0; iter < 400; ++iter) {
        const double mid = 0.5 * (lo + hi);
        if (mid <= lo || mid >= hi) {
            break;
        }
        if (excess(mid) > 0.0) {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    const double E = std::abs(excess(lo)) <= std::abs(excess(hi)) ? lo : hi;
    report.endemic = state_at(E);
    report.residual_norm = reduced_residual(params, inc, *report.endemic);
    return report;
}

VectorField seir_rhs(const SeirParams& params, const IncidenceSpec& inc) {
    const double Lambda = params.Lambda_a();
    const double d = params.d_a();
    const double m1 = params.m1();
    const double m2 = params.m2();
    const double sigma = params.sigma_a();
    const double gamma = params.gamma_a();
    Scalar2 F = inc.F;
    return [=](double, std::span<const double> y, std::span<double> dy) {
        const double force = F(y[0], y[2]);
        dy[0] = Lambda - d * y[0] - force;
        dy[1] = force - m1 * y[1];
        dy[2] = sigma * y[1] - m2 * y[2];
        dy[3] = gamma * y[2] - d * y[3];
    };
}

SimulationResult simulate(const SeirParams& params, const IncidenceSpec& inc, const State& y0,
                          const FractionalOrder& order, double T, double dt,
                          const KernelConfig& kcfg) {
    params.validate();
    order.validate();
    if (std::abs(order.alpha - params.alpha) > 0.0) {
        throw DomainError("simulate: order alpha differs from model alpha");
    }
    for (double v : y0) {
        if (!(v >= 0.0)) {
            throw DomainError("simulate: initial state must be component-wise non-negative");
        }
    }
    FdeProblem problem;
    problem.rhs = seir_rhs(params, inc);
    problem.y0.assign(y0.begin(), y0.end());
    problem.order = order;
    problem.t0 = 0.0;
    problem.T = T;
    problem.dt = dt;
    problem.kernel = kcfg;

    SimulationResult result;
    result.trajectory = solve(problem);
    const StateTrajectory& traj = result.trajectory;
    for (std::size_t i = 0; i < traj.nodes() && !result.warning; ++i) {
        for (std::size_t k = 0; k < traj.dim; ++k) {
            if (traj.at(i, k) < kPositivityFloor) {
                result.warning = PositivityWarning{i, k, traj.at(i, k)};
                break;
            }
        }
    }
    return result;
}

double g_entropy(double x) {
    if (!(x > 0.0)) {
        throw DomainError("g_entropy: argument must be positive");
    }
    return x - 1.0 - std::log(x);
}

double lyapunov_V0(const SeirParams& params, const IncidenceSpec& inc, double S, double E,
                   double I) {
    if (!(S > 0.0)) {
        throw DomainError("lyapunov_V0: S must be positive");
    }
    const double S0 = params.S0();
    const double anchor = inc.F1(S0, 0.0);
    auto integrand = [&](double x) {
        const double f1 = inc.F1(x, 0.0);
        if (!(f1 > 0.0)) {
            throw EvaluationError("lyapunov_V0: F1(x, 0) <= 0 at x=" + std::to_string(x));
        }
        return 1.0 - anchor / f1;
    };
    return integrate(integrand, S0, S) + E + params.m1() / params.sigma_a() * I;
}

double lyapunov_V1(const SeirParams& params, const IncidenceSpec& inc, const State& endemic,
                   double S, double E, double I) {
    if (!(S > 0.0) || !(E > 0.0) || !(I > 0.0)) {
        throw DomainError("lyapunov_V1: S, E, I must be positive");
    }
    const auto [Ss, Es, Is, Rs] = endemic;
    if (!(Ss > 0.0) || !(Es > 0.0) || !(Is > 0.0)) {
        throw DomainError("lyapunov_V1: endemic state must be positive");
    }
    const double anchor = inc.F(Ss, Is);
    auto integrand = [&](double x) {
        const double f = inc.F(x, Is);
        if (!(f > 0.0)) {
            throw EvaluationError("lyapunov_V1: F(x, I*) <= 0 at x=" + std::to_string(x));
        }
        return 1.0 - anchor / f;
    };
    return integrate(integrand, Ss, S) + volterra_term(E, Es) +
           params.m1() / params.sigma_a() * volterra_term(I, Is);
}

double v1_bracket(const IncidenceSpec& inc, const State& endemic, double S, double E, double I) {
    const auto [Ss, Es, Is, Rs] = endemic;
    const double Fstar = inc.F(Ss, Is);
    const double F_SIs = inc.F(S, Is);
    const double F_SI = inc.F(S, I);
    return 3.0 - Fstar / F_SIs + F_SI / F_SIs - Es * F_SI / (E * Fstar) - I / Is -
           Is * E / (I * Es);
}

double v1_bracket_g_form(const IncidenceSpec& inc, const State& endemic, double S, double E,
                         double I) {
    const auto [Ss, Es, Is, Rs] = endemic;
    const double Fstar = inc.F(Ss, Is);
    const double F_SIs = inc.F(S, Is);
    const double F_SI = inc.F(S, I);
    return -(g_entropy(I / Is) - g_entropy(F_SI / F_SIs) + g_entropy(Fstar / F_SIs) +
             g_entropy(Es * F_SI / (E * Fstar)) + g_entropy(Is * E / (I * Es)));
}

double h_function(const IncidenceSpec& inc, double S, double I, double I_star) {
    return g_entropy(inc.F(S, I) / inc.F(S, I_star)) - g_entropy(I / I_star);
}

std::string_view to_string(Attractor a) {
    return a == Attractor::DiseaseFree ? "disease_free" : "endemic";
}

bool StabilityReport::all_converged() const {
    return std::all_of(outcomes.begin(), outcomes.end(),
                       [](const StateOutcome& o) { return o.error.empty() && o.converged; });
}

double StabilityReport::max_lyapunov_increase() const {
    double worst = -std::numeric_limits<double>::infinity();
    for (const auto& o : outcomes) {
        worst = std::max(worst, o.max_lyapunov_increase);
    }
    return worst;
}

StabilityReport verify_stability(const SeirParams& params, const IncidenceSpec& inc,
                                 const FractionalOrder& order, const std::vector<State>& initial,
                                 const StabilityOptions& options) {
    for (const State& x : initial) {
        if (!(x[0] > 0.0) || !(x[1] >= 0.0) || !(x[2] >= 0.0) || !(x[3] >= 0.0)) {
            throw DomainError("verify_stability: initial states need S > 0 and E, I, R >= 0");
        }
    }
    const EquilibriumReport eq = equilibria(params, inc);
    StabilityReport report;
    report.r0 = eq.r0;
    if (eq.r0 <= 1.0) {
        report.attractor = Attractor::DiseaseFree;
        report.attractor_state = eq.disease_free;
    } else {
        report.attractor = Attractor::Endemic;
        report.attractor_state = *eq.endemic;
    }
    const State target = report.attractor_state;
    const bool endemic = report.attractor == Attractor::Endemic;

    report.outcomes.resize(initial.size());
    const long long count = static_cast<long long>(initial.size());
#pragma omp parallel for schedule(dynamic, 1)
    for (long long s = 0; s < count; ++s) {
        StateOutcome& out = report.outcomes[static_cast<std::size_t>(s)];
        out.initial = initial[static_cast<std::size_t>(s)];
        try {
            const SimulationResult sim = simulate(params, inc, out.initial, order, options.T_max,
                                                  options.dt, options.kernel);
            out.warning = sim.warning;
            const StateTrajectory& traj = sim.trajectory;
            const std::size_t last = traj.nodes() - 1;
            for (std::size_t k = 0; k < 4; ++k) {
                out.final_state[k] = traj.at(last, k);
            }
            out.distance = 0.0;
            for (std::size_t k = 0; k < 3; ++k) {
                out.distance = std::max(out.distance, std::abs(out.final_state[k] - target[k]));
            }
            out.converged = out.distance < options.epsilon;

            auto functional = [&](std::size_t i) {
                const double S = traj.at(i, 0);
                const double E = traj.at(i, 1);
                const double I = traj.at(i, 2);
                if (endemic) {
                    if (!(S > 0.0) || !(E > 0.0) || !(I > 0.0)) {
                        return std::numeric_limits<double>::quiet_NaN();
                    }
                    return lyapunov_V1(params, inc, target, S, E, I);
                }
                if (!(S > 0.0)) {
                    return std::numeric_limits<double>::quiet_NaN();
                }
                return lyapunov_V0(params, inc, S, E, I);
            };
            double previous = functional(0);
            out.v_initial = previous;
            out.max_lyapunov_increase = -std::numeric_limits<double>::infinity();
            for (std::size_t i = 1; i <= last; ++i) {
                const double current = functional(i);
                if (std::isfinite(previous) && std::isfinite(current)) {
                    out.max_lyapunov_increase =
                        std::max(out.max_lyapunov_increase, current - previous);
                }
                previous = current;
            }
            out.v_final = previous;
        } catch (const std::exception& e) {
            out.error = e.what();
        }
    }
    return report;
}

std::vector<State> random_initial_states(const SeirParams& params, std::size_t count,
                                         std::uint64_t seed) {
    const double S0 = params.S0();
    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<double> unit(0.0, 1.0);
    std::vector<State> states(count);
    for (State& x : states) {
        x[0] = S0 * (0.5 + unit(rng));
        x[1] = S0 * (0.05 + 0.2 * unit(rng));
        x[2] = S0 * (0.05 + 0.2 * unit(rng));
        x[3] = S0 * 0.1 * unit(rng);
    }
    return states;
}

std::vector<State> neighbourhood_initial_states(const SeirParams& params, const State& center,
                                                std::size_t count, std::uint64_t seed,
                                                double spread) {
    if (!(spread >= 0.0 && spread < 1.0)) {
        throw DomainError("neighbourhood_initial_states: spread must lie in [0, 1)");
    }
    const double S0 = params.S0();
    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<double> unit(0.0, 1.0);
    std::vector<State> states(count);
    for (State& x : states) {
        for (std::size_t k = 0; k < 4; ++k) {
            const double u = unit(rng);
            x[k] = center[k] > 0.0 ? center[k] * (1.0 + spread * (2.0 * u - 1.0))
                                   : S0 * (0.01 + 0.04 * u);
        }
    }
    return states;
}

}  // namespace fraclyap::seir
