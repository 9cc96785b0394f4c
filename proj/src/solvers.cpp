#include "fraclyap/solvers.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "fraclyap/errors.hpp"

namespace fraclyap {
namespace {

constexpr int kCorrectorSweeps = 50;
constexpr double kCorrectorTolerance = 1e-12;

void require_family(const FdeProblem& p, Family family, const char* solver) {
    if (p.order.family != family) {
        throw DomainError(std::string(solver) + ": problem order has family " +
                          std::string(to_string(p.order.family)));
    }
}

void require_finite(std::span<const double> y, std::size_t step, const char* solver) {
    for (double v : y) {
        if (!std::isfinite(v)) {
            throw DivergenceError(std::string(solver) + ": non-finite state", step);
        }
    }
}

// Node-major history of rhs evaluations.
struct History {
    std::size_t dim;
    std::vector<double> f;

    History(std::size_t nodes, std::size_t dim_) : dim(dim_), f(nodes * dim_, 0.0) {}
    std::span<double> at(std::size_t n) { return {f.data() + n * dim, dim}; }
    double get(std::size_t n, std::size_t k) const { return f[n * dim + k]; }
};

StateTrajectory make_output(const FdeProblem& p) {
    StateTrajectory y(p.t0, p.dt, p.y0.size(), p.steps() + 1);
    std::copy(p.y0.begin(), p.y0.end(), y.state(0).begin());
    return y;
}

}  // namespace

void FdeProblem::validate() const {
    if (!rhs) {
        throw DomainError("FdeProblem: rhs is empty");
    }
    if (y0.empty()) {
        throw DomainError("FdeProblem: state dimension must be at least 1");
    }
    for (double v : y0) {
        if (!std::isfinite(v)) {
            throw DomainError("FdeProblem: y0 must be finite");
        }
    }
    order.validate();
    kernel.validate(order.alpha);
    if (!(T > t0) || !std::isfinite(T) || !std::isfinite(t0)) {
        throw DomainError("FdeProblem: need finite T > t0");
    }
    if (!(dt > 0.0) || dt > 0.5 * (T - t0) * (1.0 + kernel.grid_tolerance)) {
        throw DomainError("FdeProblem: dt must satisfy 0 < dt <= (T - t0)/2, got dt=" +
                          std::to_string(dt));
    }
    const double ratio = (T - t0) / dt;
    if (std::abs(ratio - std::round(ratio)) > kernel.grid_tolerance * ratio) {
        throw DomainError("FdeProblem: (T - t0)/dt must be an integer");
    }
}

std::size_t FdeProblem::steps() const {
    return static_cast<std::size_t>(std::llround((T - t0) / dt));
}

StateTrajectory solve_caputo(const FdeProblem& p) {
    p.validate();
    require_family(p, Family::Caputo, "solve_caputo");
    const double alpha = p.order.alpha;
    const std::size_t steps = p.steps();
    const std::size_t dim = p.y0.size();

    std::vector<double> predictor_w(steps + 1);
    std::vector<double> corrector_w(steps + 1);
    detail::power_increments(alpha, predictor_w.size(), predictor_w.data());
    detail::power_second_differences(alpha + 1.0, corrector_w.size(), corrector_w.data());
    const double predictor_scale = std::pow(p.dt, alpha) / std::tgamma(alpha + 1.0);
    const double corrector_scale = std::pow(p.dt, alpha) / std::tgamma(alpha + 2.0);

    StateTrajectory y = make_output(p);
    History f(steps + 1, dim);
    p.rhs(p.t0, y.state(0), f.at(0));
    require_finite(f.at(0), 0, "solve_caputo");

    std::vector<double> predicted(dim);
    std::vector<double> f_pred(dim);
    for (std::size_t n = 0; n < steps; ++n) {
        const std::size_t next = n + 1;
        const double t = p.t0 + static_cast<double>(next) * p.dt;
        const double first = detail::rl_first_weight(alpha, next);
        for (std::size_t k = 0; k < dim; ++k) {
            double acc = 0.0;
            for (std::size_t j = 0; j <= n; ++j) {
                acc += predictor_w[n - j] * f.get(j, k);
            }
            predicted[k] = p.y0[k] + predictor_scale * acc;
        }
        require_finite(predicted, next, "solve_caputo");
        p.rhs(t, predicted, f_pred);

        auto y_next = y.state(next);
        for (std::size_t k = 0; k < dim; ++k) {
            double acc = first * f.get(0, k) + f_pred[k];
            for (std::size_t j = 1; j <= n; ++j) {
                acc += corrector_w[next - j] * f.get(j, k);
            }
            y_next[k] = p.y0[k] + corrector_scale * acc;
        }
        require_finite(y_next, next, "solve_caputo");
        p.rhs(t, y_next, f.at(next));
        require_finite(f.at(next), next, "solve_caputo");
    }
    return y;
}

StateTrajectory solve_cf(const FdeProblem& p) {
    p.validate();
    require_family(p, Family::CaputoFabrizio, "solve_cf");
    const double alpha = p.order.alpha;
    const std::size_t steps = p.steps();
    const std::size_t dim = p.y0.size();

    double a1 = 0.0;
    double a2 = 1.0;
    if (alpha < 1.0) {
        const double denom = p.kernel.normalization_B * (2.0 - alpha);
        a1 = 2.0 * (1.0 - alpha) / denom;
        a2 = 2.0 * alpha / denom;
    }

    StateTrajectory y = make_output(p);
    History f(steps + 1, dim);
    p.rhs(p.t0, y.state(0), f.at(0));
    require_finite(f.at(0), 0, "solve_cf");

    // Start-up step: trapezoid (Heun) on the integral term.
    std::vector<double> predicted(dim);
    std::vector<double> f_pred(dim);
    for (std::size_t k = 0; k < dim; ++k) {
        predicted[k] = p.y0[k] + a2 * p.dt * f.get(0, k);
    }
    p.rhs(p.t0 + p.dt, predicted, f_pred);
    for (std::size_t k = 0; k < dim; ++k) {
        y.at(1, k) = p.y0[k] + 0.5 * a2 * p.dt * (f.get(0, k) + f_pred[k]);
    }
    require_finite(y.state(1), 1, "solve_cf");
    p.rhs(p.t0 + p.dt, y.state(1), f.at(1));
    require_finite(f.at(1), 1, "solve_cf");

    for (std::size_t n = 1; n < steps; ++n) {
        const std::size_t next = n + 1;
        for (std::size_t k = 0; k < dim; ++k) {
            const double fn = f.get(n, k);
            const double fp = f.get(n - 1, k);
            y.at(next, k) = y.at(n, k) + a1 * (fn - fp) + a2 * p.dt * (1.5 * fn - 0.5 * fp);
        }
        require_finite(y.state(next), next, "solve_cf");
        p.rhs(p.t0 + static_cast<double>(next) * p.dt, y.state(next), f.at(next));
        require_finite(f.at(next), next, "solve_cf");
    }
    return y;
}

StateTrajectory solve_abc(const FdeProblem& p) {
    p.validate();
    require_family(p, Family::Abc, "solve_abc");
    const double alpha = p.order.alpha;
    const double b = p.kernel.normalization_B;
    const double c1 = (1.0 - alpha) / b;
    const double c2 = alpha / b;
    const std::size_t steps = p.steps();
    const std::size_t dim = p.y0.size();

    std::vector<double> predictor_w(steps + 1);
    std::vector<double> corrector_w(steps + 1);
    detail::power_increments(alpha, predictor_w.size(), predictor_w.data());
    detail::power_second_differences(alpha + 1.0, corrector_w.size(), corrector_w.data());
    const double predictor_scale = std::pow(p.dt, alpha) / std::tgamma(alpha + 1.0);
    const double corrector_scale = std::pow(p.dt, alpha) / std::tgamma(alpha + 2.0);

    StateTrajectory y = make_output(p);
    History f(steps + 1, dim);
    p.rhs(p.t0, y.state(0), f.at(0));
    require_finite(f.at(0), 0, "solve_abc");

    std::vector<double> history(dim);
    std::vector<double> current(dim);
    std::vector<double> updated(dim);
    std::vector<double> f_iter(dim);
    for (std::size_t n = 0; n < steps; ++n) {
        const std::size_t next = n + 1;
        const double t = p.t0 + static_cast<double>(next) * p.dt;
        const double first = detail::rl_first_weight(alpha, next);
        for (std::size_t k = 0; k < dim; ++k) {
            double rect = 0.0;
            for (std::size_t j = 0; j <= n; ++j) {
                rect += predictor_w[n - j] * f.get(j, k);
            }
            current[k] = p.y0[k] + c1 * (f.get(n, k) - f.get(0, k)) + c2 * predictor_scale * rect;

            double trap = first * f.get(0, k);
            for (std::size_t j = 1; j <= n; ++j) {
                trap += corrector_w[next - j] * f.get(j, k);
            }
            history[k] = trap;
        }
        require_finite(current, next, "solve_abc");

        bool converged = false;
        for (int sweep = 0; sweep < kCorrectorSweeps; ++sweep) {
            p.rhs(t, current, f_iter);
            double change = 0.0;
            double scale = 1.0;
            for (std::size_t k = 0; k < dim; ++k) {
                updated[k] = p.y0[k] + c1 * (f_iter[k] - f.get(0, k)) +
                             c2 * corrector_scale * (history[k] + f_iter[k]);
                change = std::max(change, std::abs(updated[k] - current[k]));
                scale = std::max(scale, std::abs(updated[k]));
            }
            require_finite(updated, next, "solve_abc");
            current.swap(updated);
            if (change <= kCorrectorTolerance * scale) {
                converged = true;
                break;
            }
        }
        if (!converged) {
            throw ConvergenceError("solve_abc: fixed-point corrector did not converge", next);
        }
        std::copy(current.begin(), current.end(), y.state(next).begin());
        p.rhs(t, y.state(next), f.at(next));
        require_finite(f.at(next), next, "solve_abc");
    }
    return y;
}

StateTrajectory rk4_oracle(const FdeProblem& p) {
    p.validate();
    if (p.order.alpha != 1.0) {
        throw DomainError("rk4_oracle: requires alpha = 1");
    }
    const std::size_t steps = p.steps();
    const std::size_t dim = p.y0.size();
    StateTrajectory y = make_output(p);
    std::vector<double> k1(dim), k2(dim), k3(dim), k4(dim), tmp(dim);
    const double h = p.dt;
    for (std::size_t n = 0; n < steps; ++n) {
        const double t = p.t0 + static_cast<double>(n) * h;
        auto yn = y.state(n);
        p.rhs(t, yn, k1);
        for (std::size_t k = 0; k < dim; ++k) tmp[k] = yn[k] + 0.5 * h * k1[k];
        p.rhs(t + 0.5 * h, tmp, k2);
        for (std::size_t k = 0; k < dim; ++k) tmp[k] = yn[k] + 0.5 * h * k2[k];
        p.rhs(t + 0.5 * h, tmp, k3);
        for (std::size_t k = 0; k < dim; ++k) tmp[k] = yn[k] + h * k3[k];
        p.rhs(t + h, tmp, k4);
        auto y_next = y.state(n + 1);
        for (std::size_t k = 0; k < dim; ++k) {
            y_next[k] = yn[k] + h / 6.0 * (k1[k] + 2.0 * k2[k] + 2.0 * k3[k] + k4[k]);
        }
        require_finite(y_next, n + 1, "rk4_oracle");
    }
    return y;
}

StateTrajectory solve(const FdeProblem& p) {
    switch (p.order.family) {
        case Family::Caputo: return solve_caputo(p);
        case Family::CaputoFabrizio: return solve_cf(p);
        case Family::Abc: return solve_abc(p);
        case Family::RlIntegral: break;
    }
    throw DomainError("solve: the RL integral is not a derivative family");
}

}  // namespace fraclyap
