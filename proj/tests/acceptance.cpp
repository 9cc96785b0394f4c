// Acceptance gate: one PASS/FAIL line per criterion; exit status 0 iff all pass.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <limits>
#include <random>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include "app.hpp"
#include "fraclyap/lyapunov.hpp"
#include "fraclyap/mittag_leffler.hpp"
#include "fraclyap/operators.hpp"
#include "fraclyap/seir.hpp"
#include "fraclyap/solvers.hpp"
#include "oracles.hpp"

using namespace fraclyap;

namespace {

struct Outcome {
    bool pass = true;
    std::ostringstream detail;

    void require(bool ok, const std::string& what) {
        if (!ok) {
            pass = false;
            detail << " [failed: " << what << "]";
        }
    }
};

std::string config_path;
int failures = 0;

void criterion(int id, const char* title, double limit_seconds,
               const std::function<void(Outcome&)>& body) {
    Outcome out;
    const auto start = std::chrono::steady_clock::now();
    try {
        body(out);
    } catch (const std::exception& e) {
        out.require(false, std::string("exception: ") + e.what());
    }
    const double seconds =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    std::ostringstream lim;
    lim << "runtime < " << limit_seconds << " s";
    out.require(seconds < limit_seconds, lim.str());
    std::printf("%s [%2d] %s:%s (%.2f s)\n", out.pass ? "PASS" : "FAIL", id, title,
                out.detail.str().c_str(), seconds);
    std::fflush(stdout);
    if (!out.pass) {
        ++failures;
    }
}

double max_abs_error(const SampledTrajectory& u, const std::function<double(double)>& exact,
                     std::size_t from = 1) {
    double e = 0.0;
    for (std::size_t i = from; i < u.size(); ++i) {
        e = std::max(e, std::abs(u[i] - exact(u.time(i))));
    }
    return e;
}

SampledTrajectory unit_grid(double dt, const std::function<double(double)>& fn) {
    return sample_interval(0.0, 1.0, static_cast<std::size_t>(std::llround(1.0 / dt)), fn);
}

// ABC derivative of u(t) = t at alpha = 1/2: B/(1-a) int_0^t E_{1/2}(-(s)^{1/2}) ds,
// kernel in closed form through erfc, 100 Gauss panels per grid interval.
std::vector<double> abc_of_t_oracle(double dt, std::size_t nodes) {
    const double a = 0.5;
    const double lambda = a / (1 - a);
    std::vector<double> g = oracle::running_integral(
        [&](double s) { return oracle::ml_half_negative(lambda * std::sqrt(s)); }, dt, nodes, 100);
    for (double& v : g) {
        v /= (1 - a);
    }
    return g;
}

std::string fmt(double v) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.3g", v);
    return buf;
}

seir::State closed_form_attractor(const seir::SeirParams& p) {
    const double L = std::pow(p.Lambda, p.alpha);
    const double d = std::pow(p.d, p.alpha);
    const double b = std::pow(p.beta, p.alpha);
    const double s = std::pow(p.sigma, p.alpha);
    const double g = std::pow(p.gamma, p.alpha);
    const double m1 = s + d;
    const double m2 = g + d;
    const double S0 = L / d;
    const double R0 = s * b * S0 / (m1 * m2);
    if (R0 <= 1.0) {
        return {S0, 0.0, 0.0, 0.0};
    }
    const double S = m1 * m2 / (s * b);
    const double E = (L - d * S) / m1;
    const double I = s * E / m2;
    return {S, E, I, g * I / d};
}

}  // namespace

int main(int argc, char** argv) {
    config_path = argc > 1 ? argv[1] : "configs/verify_corpus.json";

    criterion(1, "Mittag-Leffler identities", 1.0, [](Outcome& o) {
        double e1 = 0.0;
        for (int i = 0; i <= 100; ++i) {
            const double z = -5.0 + 0.1 * i;
            e1 = std::max(e1, std::abs(ml({1.0, 1.0, 1.0}, z) - std::exp(z)));
        }
        double e2 = 0.0;
        for (int i = 0; i <= 90; ++i) {
            const double z = 0.1 * i;
            e2 = std::max(e2, std::abs(ml({2.0, 1.0, 1.0}, z) - std::cosh(std::sqrt(z))));
        }
        o.detail << " max|E11-exp|=" << fmt(e1) << " max|E21-cosh(sqrt z)|=" << fmt(e2);
        o.require(e1 <= 1e-12, "E11 within 1e-12");
        o.require(e2 <= 1e-10, "E21 within 1e-10");
    });

    criterion(2, "Derivative theorem dE/dz = E^2_{a,a+b}", 1.0, [](Outcome& o) {
        double worst = 0.0;
        const double h = 1e-6;
        for (double a : {0.3, 0.5, 0.8}) {
            for (double b : {0.5, 1.0}) {
                for (int i = 0; i <= 30; ++i) {
                    const double z = -3.0 + 0.1 * i;
                    const double fd = (ml({a, b, 1.0}, z + h) - ml({a, b, 1.0}, z - h)) / (2 * h);
                    const double d = ml_derivative({a, b, 1.0}, z);
                    worst = std::max(worst, std::abs(d - fd) / std::abs(fd));
                }
            }
        }
        o.detail << " max relative gap=" << fmt(worst);
        o.require(worst <= 1e-5, "relative gap <= 1e-5");
    });

    criterion(3, "Operator oracles and self-convergence", 10.0, [](Outcome& o) {
        const double dt = 1.0 / 1024;
        const auto lin = unit_grid(dt, [](double t) { return t; });
        double caputo_err = 0.0;
        double cf_err = 0.0;
        for (double a : {0.3, 0.5, 0.8}) {
            caputo_err = std::max(caputo_err, max_abs_error(caputo_deriv(lin, a), [&](double t) {
                                      return oracle::caputo_of_t(t, a);
                                  }));
            cf_err = std::max(cf_err, max_abs_error(cf_deriv(lin, a), [&](double t) {
                                  return oracle::cf_of_t(t, a, 1.0);
                              }));
        }
        const auto abc = abc_deriv(lin, 0.5);
        const auto abc_ref = abc_of_t_oracle(dt, lin.size());
        double abc_err = 0.0;
        for (std::size_t i = 0; i < lin.size(); ++i) {
            abc_err = std::max(abc_err, std::abs(abc[i] - abc_ref[i]));
        }
        // the brute-force oracle itself against t E_{1/2,2}(-t^{1/2}) / (1-a)
        double oracle_gap = 0.0;
        for (std::size_t i = 64; i < lin.size(); i += 64) {
            oracle_gap = std::max(oracle_gap,
                                  std::abs(abc_ref[i] - oracle::abc_of_power(lin.time(i), 0.5, 1.0, 1)));
        }
        o.detail << " caputo(t) err=" << fmt(caputo_err) << " cf(t) err=" << fmt(cf_err)
                 << " abc(t) err=" << fmt(abc_err) << " (oracle cross-check " << fmt(oracle_gap) << ")";
        o.require(caputo_err <= 2e-3, "caputo within 2e-3");
        o.require(cf_err <= 1e-6, "cf within 1e-6");
        o.require(abc_err <= 1e-5, "abc within 1e-5");
        o.require(oracle_gap <= 1e-9, "abc oracle consistent with closed form");

        // grid halving on u = t^2 (all four operators) and on u = t (ABC, brute-force oracle)
        const double a = 0.5;
        std::vector<double> steps{1.0 / 32, 1.0 / 64, 1.0 / 128, 1.0 / 256};
        std::vector<std::vector<double>> errors(5);
        for (double h : steps) {
            const auto sq = unit_grid(h, [](double t) { return t * t; });
            errors[0].push_back(max_abs_error(rl_integral(sq, a), [&](double t) { return oracle::rl_of_t2(t, a); }));
            errors[1].push_back(max_abs_error(caputo_deriv(sq, a), [&](double t) { return oracle::caputo_of_t2(t, a); }));
            errors[2].push_back(max_abs_error(cf_deriv(sq, a), [&](double t) { return oracle::cf_of_t2(t, a, 1.0); }));
            errors[3].push_back(max_abs_error(abc_deriv(sq, a), [&](double t) { return oracle::abc_of_power(t, a, 1.0, 2); }));
            const auto l = unit_grid(h, [](double t) { return t; });
            const auto d = abc_deriv(l, a);
            const auto ref = abc_of_t_oracle(h, l.size());
            double e = 0.0;
            for (std::size_t i = 0; i < l.size(); ++i) {
                e = std::max(e, std::abs(d[i] - ref[i]));
            }
            errors[4].push_back(e);
        }
        const char* names[] = {"rl(t^2)", "caputo(t^2)", "cf(t^2)", "abc(t^2)", "abc(t)"};
        double min_ratio = std::numeric_limits<double>::infinity();
        for (std::size_t k = 0; k < errors.size(); ++k) {
            double worst = std::numeric_limits<double>::infinity();
            for (std::size_t i = 1; i < steps.size(); ++i) {
                worst = std::min(worst, errors[k][i - 1] / errors[k][i]);
            }
            o.detail << " " << names[k] << " ratio>=" << fmt(worst);
            min_ratio = std::min(min_ratio, worst);
        }
        o.require(min_ratio >= 1.8, "error ratio >= 1.8 per halving");
    });

    criterion(4, "Solver oracles", 30.0, [](Outcome& o) {
        double worst_rel = 0.0;
        for (double a : {0.5, 0.8}) {
            FdeProblem p;
            p.rhs = [](double, std::span<const double> y, std::span<double> dy) { dy[0] = -y[0]; };
            p.y0 = {1.0};
            p.order = {a, Family::Caputo};
            p.T = 5.0;
            p.dt = 5.0 / 4096;
            const StateTrajectory y = solve_caputo(p);
            for (std::size_t i = 0; i < y.nodes(); ++i) {
                const double t = y.time(i);
                const double exact = a == 0.5 ? oracle::ml_half_negative(std::sqrt(t))
                                              : oracle::ml_series(a, 1.0, 1.0, -std::pow(t, a));
                worst_rel = std::max(worst_rel, std::abs(y.at(i, 0) - exact) / std::abs(exact));
            }
        }
        o.detail << " ABM vs E_a(-t^a) max rel err=" << fmt(worst_rel);
        o.require(worst_rel <= 1e-3, "ABM within 1e-3 relative");

        FdeProblem p;
        p.rhs = [](double, std::span<const double> y, std::span<double> dy) { dy[0] = -y[0]; };
        p.y0 = {1.0};
        p.T = 5.0;
        p.dt = 1e-3;
        p.order = {1.0, Family::Caputo};
        const StateTrajectory rk = rk4_oracle(p);
        for (Family f : {Family::Caputo, Family::CaputoFabrizio, Family::Abc}) {
            p.order = {1.0, f};
            const StateTrajectory y = solve(p);
            double e = 0.0;
            for (std::size_t i = 0; i < y.nodes(); ++i) {
                e = std::max(e, std::abs(y.at(i, 0) - rk.at(i, 0)));
            }
            o.detail << " " << to_string(f) << " vs RK4=" << fmt(e);
            o.require(e <= 1e-3, std::string(to_string(f)) + " within 1e-3 of RK4");
        }
    });

    criterion(5, "Inequality suite (verify corpus, refine 1 vs 2)", 120.0, [](Outcome& o) {
        const nlohmann::json cfg = app::load_config(config_path);
        double worst[2] = {0.0, 0.0};
        double worst_normalized[2] = {0.0, 0.0};
        double nearest[2] = {0.0, 0.0};
        for (int r = 0; r < 2; ++r) {
            app::RunOptions opts;
            opts.refine = r + 1;
            const app::CommandOutput out = app::cmd_verify(cfg, opts);
            const nlohmann::json reports = nlohmann::json::parse(out.body);
            std::set<std::string> trajectories, families, kinds;
            std::size_t bad = 0;
            worst[r] = -std::numeric_limits<double>::infinity();
            worst_normalized[r] = -std::numeric_limits<double>::infinity();
            for (const auto& rep : reports) {
                if (rep.contains("error")) {
                    ++bad;
                    continue;
                }
                trajectories.insert(rep["trajectory"].get<std::string>());
                families.insert(rep["family"].get<std::string>());
                const std::string cand = rep["candidate"].get<std::string>();
                kinds.insert(cand.substr(0, cand.find('[')));
                const std::string verdict = rep["verdict"].get<std::string>();
                if (verdict != "HOLDS" && verdict != "HOLDS_WITHIN_TOLERANCE") {
                    ++bad;
                }
                const double v = rep["max_violation"].get<double>();
                worst[r] = std::max(worst[r], v);
                worst_normalized[r] = std::max(worst_normalized[r], v / rep["tolerance"].get<double>());
            }
            nearest[r] = worst[r];
            if (r == 0) {
                o.detail << " " << reports.size() << " reports (" << trajectories.size()
                         << " trajectories x " << families.size() << " families x " << kinds.size()
                         << " candidate kinds)";
                o.require(trajectories.size() >= 12 && families.size() == 3 && kinds.size() == 3,
                          "corpus of >= 12 x 3 x 3");
            }
            o.require(bad == 0 && out.exit_code == app::kExitOk,
                      "all verdicts HOLDS/HOLDS_WITHIN_TOLERANCE at refine " + std::to_string(r + 1));
        }
        // Positive margins are discretization artifacts and must shrink >= 1.5x;
        // a margin already at roundoff level counts as shrunk.
        const double floor = 1e-12;
        const double pos1 = std::max(0.0, worst[0]);
        const double pos2 = std::max(0.0, worst[1]);
        o.detail << " worst margin " << fmt(worst[0]) << " -> " << fmt(worst[1]);
        if (nearest[0] < 0.0 && nearest[1] < 0.0) {
            o.detail << " (|gap| ratio " << fmt(nearest[0] / nearest[1]) << ")";
        }
        o.require(pos2 <= pos1 / 1.5 || pos2 <= floor, "positive margin shrinks >= 1.5x");
        o.require(std::max(0.0, worst_normalized[1]) <= std::max(0.0, worst_normalized[0]) + floor,
                  "normalized margin does not grow");
    });

    // Criterion 7 is evaluated on the trajectories of criterion 6.
    bool lyapunov_ok = false;
    std::string lyapunov_detail = " not evaluated";
    criterion(6, "SEIR threshold behaviour", 120.0, [&](Outcome& o) {
        struct Case {
            double alpha, beta, T, dt, eps;
        };
        const Case cases[] = {{1.0, 0.01, 400.0, 0.05, 1e-3},
                              {1.0, 0.03, 400.0, 0.05, 1e-3},
                              {0.8, 0.01, 2000.0, 0.25, 1e-2},
                              {0.8, 0.03, 2000.0, 0.25, 1e-2}};
        lyapunov_ok = true;
        std::ostringstream lyap;
        for (const Case& c : cases) {
            seir::SeirParams p;
            p.alpha = c.alpha;
            p.beta = c.beta;
            const seir::IncidenceSpec inc = seir::make_incidence("bilinear", p);
            const seir::State target = closed_form_attractor(p);
            const std::vector<seir::State> states =
                c.alpha == 1.0 ? seir::random_initial_states(p, 5, 42)
                               : seir::neighbourhood_initial_states(p, target, 5, 42);
            double increase[2];
            double v_scale = 1.0;
            for (int r = 0; r < 2; ++r) {
                seir::StabilityOptions opts;
                opts.T_max = c.T;
                opts.dt = c.dt / (r + 1);
                const seir::StabilityReport rep =
                    seir::verify_stability(p, inc, {c.alpha, Family::Caputo}, states, opts);
                double dist = 0.0;
                bool ok = true;
                for (const auto& s : rep.outcomes) {
                    ok = ok && s.error.empty();
                    for (int k = 0; k < 3; ++k) {
                        dist = std::max(dist, std::abs(s.final_state[k] - target[k]));
                    }
                    v_scale = std::max(v_scale, std::abs(s.v_initial));
                }
                increase[r] = rep.max_lyapunov_increase();
                if (r == 0) {
                    o.detail << " a=" << c.alpha << " R0=" << fmt(rep.r0) << " dist=" << fmt(dist);
                    o.require(ok && dist < c.eps, "a=" + fmt(c.alpha) + " beta=" + fmt(c.beta) +
                                                      " within " + fmt(c.eps));
                }
                if (!(increase[r] <= 10.0 * opts.dt)) {
                    lyapunov_ok = false;
                }
            }
            const double floor = 1e-12 * v_scale;
            const double p1 = std::max(0.0, increase[0]);
            const double p2 = std::max(0.0, increase[1]);
            lyap << " " << fmt(increase[0]) << "->" << fmt(increase[1]);
            if (!(p2 <= p1 || p2 <= floor)) {
                lyapunov_ok = false;
            }
        }
        lyapunov_detail = " max forward difference of V (dt -> dt/2):" + lyap.str();
    });

    criterion(7, "Lyapunov monotonicity (runtime counted in [6])", 1.0, [&](Outcome& o) {
        o.detail << lyapunov_detail;
        o.require(lyapunov_ok, "increase <= 10 dt and not growing under refinement");
    });

    criterion(8, "Equilibrium residuals", 1.0, [](Outcome& o) {
        double worst = 0.0;
        int endemic = 0;
        for (double alpha : {1.0, 0.8}) {
            for (double beta : {0.01, 0.03}) {
                seir::SeirParams p;
                p.alpha = alpha;
                p.beta = beta;
                for (double a : {-1.0, 0.0, 0.01, 0.1}) {
                    const seir::IncidenceSpec inc =
                        a < 0 ? seir::make_incidence("bilinear", p)
                              : seir::make_incidence("beddington_deangelis", p,
                                                     {{"a1", a}, {"a2", a}, {"a3", a}});
                    const seir::EquilibriumReport eq = seir::equilibria(p, inc);
                    worst = std::max(worst, eq.disease_free_residual);
                    o.require((eq.r0 > 1.0) == eq.endemic.has_value(), "endemic iff R0 > 1");
                    if (eq.endemic) {
                        ++endemic;
                        worst = std::max(worst, eq.residual_norm);
                        worst = std::max(worst, seir::reduced_residual(p, inc, *eq.endemic));
                    }
                }
            }
        }
        seir::SeirParams ref;
        ref.beta = 0.03;
        const auto eq = seir::equilibria(ref, seir::make_incidence("bilinear", ref));
        const double s_gap = std::abs(eq.endemic.value()[0] - 10.0);
        o.detail << " max residual=" << fmt(worst) << " over " << endemic
                 << " endemic states, |S*-10|=" << fmt(s_gap);
        o.require(worst <= 1e-10, "residual <= 1e-10");
        o.require(s_gap <= 1e-9, "bilinear S* = 10");
    });

    criterion(9, "Hypotheses (H) checker", 1.0, [](Outcome& o) {
        const auto bil = seir::check_hypotheses(seir::bilinear(0.03), 100.0, 100.0);
        o.require(bil.passed, "bilinear passes");
        for (double a : {0.0, 0.1}) {
            const auto bd = seir::check_hypotheses(seir::beddington_deangelis(1.0, a, a, a), 100.0, 100.0);
            o.require(bd.passed, "Beddington-DeAngelis a=" + fmt(a) + " passes");
        }
        seir::IncidenceSpec bad;
        bad.name = "S I^2";
        bad.F = [](double S, double I) { return S * I * I; };
        bad.F1 = [](double S, double I) { return S * I; };
        bad.dF_dI = [](double S, double I) { return 2 * S * I; };
        bad.dF1_dS = [](double, double I) { return I; };
        bad.dF1_dI = [](double S, double) { return S; };
        const auto rep = seir::check_hypotheses(bad, 100.0, 100.0);
        const auto it = std::find_if(rep.per_condition.begin(), rep.per_condition.end(),
                                     [](const auto& v) { return v.condition == "dF1/dI <= 0"; });
        o.require(!rep.passed && rep.first.has_value(), "S I^2 rejected");
        o.require(it != rep.per_condition.end() && it->value > 0.0, "dF1/dI violation reported");
        if (it != rep.per_condition.end()) {
            o.detail << " S I^2 rejected: " << it->condition << " at (S=" << fmt(it->S)
                     << ", I=" << fmt(it->I) << "), value " << fmt(it->value);
        }
    });

    criterion(10, "G-term identity of the V1 bracket", 1.0, [](Outcome& o) {
        std::mt19937_64 rng(7);
        std::uniform_real_distribution<double> scale(0.1, 3.0);
        double worst = 0.0;
        int samples = 0;
        for (int which = 0; which < 2; ++which) {
            seir::SeirParams p;
            p.alpha = which == 0 ? 1.0 : 0.8;
            const seir::IncidenceSpec inc =
                which == 0 ? seir::make_incidence("bilinear", p)
                           : seir::make_incidence("beddington_deangelis", p,
                                                  {{"a1", 0.01}, {"a2", 0.01}, {"a3", 0.01}});
            const seir::State star = seir::equilibria(p, inc).endemic.value();
            for (int i = 0; i < 1000; ++i, ++samples) {
                const double S = star[0] * scale(rng);
                const double E = star[1] * scale(rng);
                const double I = star[2] * scale(rng);
                worst = std::max(worst, std::abs(seir::v1_bracket(inc, star, S, E, I) -
                                                 seir::v1_bracket_g_form(inc, star, S, E, I)));
            }
        }
        o.detail << " " << samples << " states, max gap=" << fmt(worst);
        o.require(worst <= 1e-10, "gap <= 1e-10");
    });

    std::printf("%d criterion(s) failed\n", failures);
    return failures == 0 ? 0 : 1;
}
