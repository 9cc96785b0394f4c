#include "app.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <functional>
#include <limits>
#include <map>
#include <numeric>
#include <ostream>
#include <set>
#include <sstream>

#include "fraclyap/errors.hpp"
#include "fraclyap/seir.hpp"
#include "fraclyap/solvers.hpp"

namespace fraclyap::app {

using nlohmann::json;

namespace {

// Typed access to one JSON object; keys that are never read are rejected by finish().
class Section {
public:
    Section(const json& j, std::string path) : j_(j), path_(std::move(path)) {
        if (!j_.is_object()) {
            throw ConfigError(path_ + ": expected an object");
        }
    }

    bool has(const std::string& key) {
        used_.insert(key);
        return j_.contains(key);
    }

    double number(const std::string& key, std::optional<double> fallback = std::nullopt) {
        if (!has(key)) {
            if (!fallback) {
                throw ConfigError(where(key) + ": required number is missing");
            }
            return *fallback;
        }
        const json& v = j_.at(key);
        if (!v.is_number()) {
            throw ConfigError(where(key) + ": expected a number");
        }
        return v.get<double>();
    }

    std::string text(const std::string& key, std::optional<std::string> fallback = std::nullopt) {
        if (!has(key)) {
            if (!fallback) {
                throw ConfigError(where(key) + ": required string is missing");
            }
            return *fallback;
        }
        const json& v = j_.at(key);
        if (!v.is_string()) {
            throw ConfigError(where(key) + ": expected a string");
        }
        return v.get<std::string>();
    }

    const json& child(const std::string& key) {
        if (!has(key)) {
            throw ConfigError(where(key) + ": required entry is missing");
        }
        return j_.at(key);
    }

    const json* optional_child(const std::string& key) {
        return has(key) ? &j_.at(key) : nullptr;
    }

    std::string where(const std::string& key) const { return path_ + "." + key; }

    void finish() const {
        for (const auto& [key, value] : j_.items()) {
            if (!used_.count(key)) {
                throw ConfigError(path_ + ": unknown key '" + key + "'");
            }
        }
    }

private:
    const json& j_;
    std::string path_;
    std::set<std::string> used_;
};

const json& require_array(const json& j, const std::string& path) {
    if (!j.is_array()) {
        throw ConfigError(path + ": expected an array");
    }
    return j;
}

void check_kind(Section& root, const std::string& expected) {
    if (root.has("kind")) {
        const std::string kind = root.text("kind");
        if (kind != expected) {
            throw ConfigError("config kind '" + kind + "' does not match command '" + expected + "'");
        }
    }
    if (root.has("description")) {
        root.text("description");
    }
}

Family parse_family(const std::string& name, const std::string& where) {
    try {
        return family_from_string(name);
    } catch (const DomainError&) {
        throw ConfigError(where + ": unknown family '" + name + "'");
    }
}

FractionalOrder parse_order(const json& j, const std::string& path) {
    Section s(j, path);
    FractionalOrder order;
    order.family = parse_family(s.text("family"), s.where("family"));
    order.alpha = s.number("alpha");
    s.finish();
    return order;
}

KernelConfig parse_kernel(Section& root) {
    KernelConfig k;
    if (const json* j = root.optional_child("kernel")) {
        Section s(*j, "kernel");
        k.normalization_B = s.number("normalization_B", k.normalization_B);
        k.grid_tolerance = s.number("grid_tolerance", k.grid_tolerance);
        s.finish();
    }
    return k;
}

double refined_dt(double dt, const RunOptions& opts) {
    if (opts.refine < 1) {
        throw ConfigError("--refine must be a positive integer");
    }
    return dt / static_cast<double>(opts.refine);
}

struct ModelSetup {
    seir::SeirParams params;
    FractionalOrder order;
    seir::IncidenceSpec incidence;
    KernelConfig kernel;
};

ModelSetup parse_model(Section& root) {
    ModelSetup m;
    m.order = parse_order(root.child("order"), "order");
    {
        Section s(root.child("model"), "model");
        m.params.Lambda = s.number("Lambda", m.params.Lambda);
        m.params.d = s.number("d", m.params.d);
        m.params.beta = s.number("beta", m.params.beta);
        m.params.sigma = s.number("sigma", m.params.sigma);
        m.params.gamma = s.number("gamma", m.params.gamma);
        s.finish();
    }
    m.params.alpha = m.order.alpha;
    if (m.order.family == Family::RlIntegral) {
        throw ConfigError("order.family: the model needs a derivative family");
    }
    std::string name = "bilinear";
    std::map<std::string, double> constants;
    if (const json* j = root.optional_child("incidence")) {
        Section s(*j, "incidence");
        name = s.text("name", name);
        if (const json* c = s.optional_child("constants")) {
            if (!c->is_object()) {
                throw ConfigError("incidence.constants: expected an object");
            }
            for (const auto& [key, value] : c->items()) {
                if (!value.is_number()) {
                    throw ConfigError("incidence.constants." + key + ": expected a number");
                }
                constants[key] = value.get<double>();
            }
        }
        s.finish();
    }
    m.kernel = parse_kernel(root);
    try {
        m.params.validate();
        m.order.validate();
        m.kernel.validate(m.order.alpha);
        m.incidence = seir::make_incidence(name, m.params, constants);
    } catch (const DomainError& e) {
        throw ConfigError(e.what());
    }
    return m;
}

json state_json(const seir::State& x) {
    return json{{"S", x[0]}, {"E", x[1]}, {"I", x[2]}, {"R", x[3]}};
}

seir::State parse_state(const json& j, const std::string& path) {
    require_array(j, path);
    if (j.size() != 4) {
        throw ConfigError(path + ": expected [S, E, I, R]");
    }
    seir::State x{};
    for (std::size_t k = 0; k < 4; ++k) {
        if (!j[k].is_number()) {
            throw ConfigError(path + ": expected numbers");
        }
        x[k] = j[k].get<double>();
    }
    return x;
}

json finite_or_null(double v) { return std::isfinite(v) ? json(v) : json(nullptr); }

std::string one_line(std::string s) {
    std::replace(s.begin(), s.end(), ',', ';');
    std::replace(s.begin(), s.end(), '\n', ' ');
    std::replace(s.begin(), s.end(), '\r', ' ');
    return s;
}

std::string dump(const json& j) { return j.dump(2) + "\n"; }

// ---- verify corpus -------------------------------------------------------

struct Coefficients {
    double a = 1.0, b = 1.0, c = 1.0, omega = 1.0, p = 0.5, alpha = 0.5;
};

Coefficients parse_coefficients(Section& traj) {
    Coefficients k;
    if (const json* j = traj.optional_child("coefficients")) {
        Section s(*j, traj.where("coefficients"));
        k.a = s.number("a", k.a);
        k.b = s.number("b", k.b);
        k.c = s.number("c", k.c);
        k.omega = s.number("omega", k.omega);
        k.p = s.number("p", k.p);
        k.alpha = s.number("alpha", k.alpha);
        s.finish();
    }
    return k;
}

SampledTrajectory solver_trajectory(const std::string& shape, const Coefficients& k, double t0,
                                    double t1, double dt) {
    FdeProblem p;
    const double c = k.c;
    if (shape == "relaxation") {
        p.rhs = [c](double, std::span<const double> y, std::span<double> dy) { dy[0] = c - y[0]; };
    } else if (shape == "logistic") {
        p.rhs = [c](double, std::span<const double> y, std::span<double> dy) {
            dy[0] = y[0] * (c - y[0]);
        };
    } else {
        p.rhs = [c](double, std::span<const double> y, std::span<double> dy) { dy[0] = -c * y[0]; };
    }
    p.y0 = {k.a};
    p.order = {k.alpha, Family::Caputo};
    p.t0 = t0;
    p.T = t1;
    p.dt = dt;
    return solve_caputo(p).component(0);
}

SampledTrajectory build_trajectory(const json& j, const std::string& path, const RunOptions& opts,
                                   std::string& label) {
    Section s(j, path);
    const std::string shape = s.text("shape");
    label = s.text("label", shape);
    const double t0 = s.number("t0", 0.0);
    const double t1 = s.number("t_end");
    const double dt = refined_dt(s.number("dt"), opts);
    const Coefficients k = parse_coefficients(s);
    s.finish();
    if (!(t1 > t0) || !(dt > 0.0)) {
        throw ConfigError(path + ": need t_end > t0 and dt > 0");
    }
    const double ratio = (t1 - t0) / dt;
    if (std::abs(ratio - std::round(ratio)) > 1e-8 * ratio) {
        throw ConfigError(path + ": (t_end - t0)/dt must be an integer");
    }
    const auto intervals = static_cast<std::size_t>(std::llround(ratio));

    static const std::map<std::string, std::function<double(const Coefficients&, double)>> shapes{
        {"sine", [](const Coefficients& k, double t) { return k.a + k.b * std::sin(k.omega * t); }},
        {"cosine", [](const Coefficients& k, double t) { return k.a + k.b * std::cos(k.omega * t); }},
        {"linear", [](const Coefficients& k, double t) { return k.a + k.b * t; }},
        {"exponential", [](const Coefficients& k, double t) { return k.a + k.b * std::exp(-k.c * t); }},
        {"quadratic", [](const Coefficients& k, double t) { return k.a + k.b * t + k.c * t * t; }},
        {"rational", [](const Coefficients& k, double t) { return k.a + k.b / (1.0 + k.c * t); }},
        {"damped_sine",
         [](const Coefficients& k, double t) {
             return k.a + k.b * std::exp(-k.c * t) * std::sin(k.omega * t);
         }},
        {"tanh", [](const Coefficients& k, double t) { return k.a + k.b * std::tanh(k.omega * (t - k.c)); }},
        {"power", [](const Coefficients& k, double t) { return k.a + k.b * std::pow(t, k.p); }},
    };
    if (shape == "relaxation" || shape == "logistic" || shape == "decay") {
        try {
            return solver_trajectory(shape, k, t0, t1, dt);
        } catch (const DomainError& e) {
            throw ConfigError(path + ": " + e.what());
        }
    }
    const auto it = shapes.find(shape);
    if (it == shapes.end()) {
        throw ConfigError(path + ": unknown shape '" + shape + "'");
    }
    const auto& fn = it->second;
    return sample_interval(t0, t1, intervals, [&](double t) { return fn(k, t); });
}

std::function<double(double)> named_g(const std::string& name, const std::string& where) {
    if (name == "identity") return [](double s) { return s; };
    if (name == "square") return [](double s) { return s * s; };
    if (name == "sqrt") return [](double s) { return std::sqrt(s); };
    if (name == "exp") return [](double s) { return std::exp(s); };
    if (name == "saturating") return [](double s) { return s / (1.0 + s); };
    throw ConfigError(where + ": unknown g '" + name + "'");
}

CandidateFunction build_candidate(const json& j, const std::string& path,
                                  const SampledTrajectory& u) {
    Section s(j, path);
    const std::string kind = s.text("kind");
    double u_star = 0.0;
    if (s.has("u_star")) {
        u_star = s.number("u_star");
    } else {
        u_star = std::accumulate(u.values.begin(), u.values.end(), 0.0) /
                 static_cast<double>(u.values.size());
        // A non-positive mean means u itself leaves (0, inf); that is reported
        // per item by the positivity check, so any valid anchor will do here.
        if (!(u_star > 0.0)) {
            u_star = 1.0;
        }
    }
    CandidateFunction c;
    if (kind == "quadratic") {
        c = CandidateFunction::quadratic();
    } else if (kind == "volterra" || kind == "psi_general") {
        if (!(u_star > 0.0)) {
            throw ConfigError(path + ": u_star must be positive");
        }
        if (kind == "volterra") {
            c = CandidateFunction::volterra(u_star);
        } else {
            const std::string g = s.text("g", "identity");
            c = CandidateFunction::psi_general(u_star, named_g(g, s.where("g")), g);
        }
    } else {
        throw ConfigError(path + ": unknown candidate kind '" + kind + "'");
    }
    s.finish();
    return c;
}

struct VerifyConfig {
    std::vector<ScanItem> items;
    KernelConfig kernel;
    EstimateOptions estimate;
};

VerifyConfig parse_verify(const json& cfg, const RunOptions& opts) {
    Section root(cfg, "config");
    check_kind(root, "verify");
    VerifyConfig vc;
    vc.kernel = parse_kernel(root);
    vc.estimate.tolerance_constant = root.number("tolerance_constant", 10.0);
    vc.estimate.swap_sides = opts.swap_sides;

    const json& trajectories = require_array(root.child("trajectories"), "trajectories");
    const json& orders = require_array(root.child("orders"), "orders");
    const json& candidates = require_array(root.child("candidates"), "candidates");
    root.finish();

    std::vector<FractionalOrder> parsed_orders;
    for (std::size_t i = 0; i < orders.size(); ++i) {
        parsed_orders.push_back(parse_order(orders[i], "orders[" + std::to_string(i) + "]"));
    }
    for (std::size_t t = 0; t < trajectories.size(); ++t) {
        std::string label;
        const SampledTrajectory u = build_trajectory(
            trajectories[t], "trajectories[" + std::to_string(t) + "]", opts, label);
        for (std::size_t c = 0; c < candidates.size(); ++c) {
            const CandidateFunction cand =
                build_candidate(candidates[c], "candidates[" + std::to_string(c) + "]", u);
            for (const FractionalOrder& order : parsed_orders) {
                vc.items.push_back({label, u, order, cand});
            }
        }
    }
    return vc;
}

// ---- stability corpus ----------------------------------------------------

struct StabilityConfig {
    ModelSetup model;
    seir::StabilityOptions options;
    std::string corpus = "broad";
    std::size_t count = 5;
    double spread = 0.25;
};

StabilityConfig parse_stability(Section& root, const RunOptions& opts) {
    StabilityConfig sc;
    sc.model = parse_model(root);
    sc.options.kernel = sc.model.kernel;
    sc.options.T_max = root.number("T", sc.options.T_max);
    sc.options.dt = refined_dt(root.number("dt", sc.options.dt), opts);
    sc.options.epsilon = root.number("epsilon", sc.options.epsilon);
    if (const json* j = root.optional_child("corpus")) {
        Section s(*j, "corpus");
        sc.corpus = s.text("kind", sc.corpus);
        const double count = s.number("count", 5.0);
        if (!(count >= 1.0) || count != std::floor(count)) {
            throw ConfigError("corpus.count must be a positive integer");
        }
        sc.count = static_cast<std::size_t>(count);
        sc.spread = s.number("spread", sc.spread);
        s.finish();
    }
    if (sc.corpus != "broad" && sc.corpus != "neighbourhood") {
        throw ConfigError("corpus.kind must be 'broad' or 'neighbourhood'");
    }
    return sc;
}

std::vector<seir::State> corpus_states(const StabilityConfig& sc, const seir::SeirParams& params,
                                       const seir::IncidenceSpec& inc, std::uint64_t seed) {
    if (sc.corpus == "broad") {
        return seir::random_initial_states(params, sc.count, seed);
    }
    const seir::EquilibriumReport eq = seir::equilibria(params, inc);
    const seir::State center = eq.endemic ? *eq.endemic : eq.disease_free;
    return seir::neighbourhood_initial_states(params, center, sc.count, seed, sc.spread);
}

seir::StabilityReport run_stability(const StabilityConfig& sc, const seir::SeirParams& params,
                                    const seir::IncidenceSpec& inc, std::uint64_t seed) {
    try {
        return seir::verify_stability(params, inc, sc.model.order, corpus_states(sc, params, inc, seed),
                                      sc.options);
    } catch (const DomainError& e) {
        throw ConfigError(e.what());
    }
}

}  // namespace

std::string format_number(double v) {
    char buf[64];
    const auto res = std::to_chars(buf, buf + sizeof buf, v, std::chars_format::general, 15);
    return std::string(buf, res.ptr);
}

json load_config(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) {
        throw ConfigError("cannot open config '" + path + "'");
    }
    try {
        return json::parse(in);
    } catch (const json::parse_error& e) {
        throw ConfigError("config '" + path + "' is not valid JSON: " + e.what());
    }
}

CommandOutput cmd_simulate(const json& cfg, const RunOptions& opts) {
    Section root(cfg, "config");
    check_kind(root, "simulate");
    const ModelSetup m = parse_model(root);
    const seir::State y0 = parse_state(root.child("initial_state"), "initial_state");
    const double T = root.number("T");
    const double dt = refined_dt(root.number("dt"), opts);
    root.finish();

    seir::SimulationResult sim;
    try {
        sim = seir::simulate(m.params, m.incidence, y0, m.order, T, dt, m.kernel);
    } catch (const DomainError& e) {
        throw ConfigError(e.what());
    }
    CommandOutput out;
    std::string& csv = out.body;
    csv = "t,S,E,I,R\n";
    const StateTrajectory& traj = sim.trajectory;
    for (std::size_t i = 0; i < traj.nodes(); ++i) {
        csv += format_number(traj.time(i));
        for (std::size_t k = 0; k < 4; ++k) {
            csv += ',';
            csv += format_number(traj.at(i, k));
        }
        csv += '\n';
    }
    if (sim.warning) {
        static const char* names[] = {"S", "E", "I", "R"};
        out.warning = "positivity warning: " + std::string(names[sim.warning->component]) +
                      " = " + format_number(sim.warning->value) + " at step " +
                      std::to_string(sim.warning->step);
    }
    return out;
}

std::vector<ScanItem> verify_items(const json& cfg, const RunOptions& opts) {
    return parse_verify(cfg, opts).items;
}

CommandOutput cmd_verify(const json& cfg, const RunOptions& opts) {
    const VerifyConfig vc = parse_verify(cfg, opts);
    const ScanSummary summary = margin_scan(vc.items, vc.kernel, vc.estimate);
    json reports = json::array();
    for (const ScanResult& r : summary.results) {
        json row{{"trajectory", r.label},
                 {"family", std::string(to_string(r.order.family))},
                 {"alpha", r.order.alpha},
                 {"candidate", r.candidate}};
        if (r.report) {
            row["max_violation"] = r.report->max_violation;
            row["tolerance"] = r.report->tolerance_used;
            row["verdict"] = std::string(to_string(r.report->verdict));
        } else {
            row["error"] = r.error;
        }
        reports.push_back(std::move(row));
    }
    CommandOutput out;
    out.body = dump(reports);
    out.exit_code = summary.worst == Verdict::Violated ? kExitViolated : kExitOk;
    if (summary.errors > 0) {
        out.warning = std::to_string(summary.errors) + " item(s) could not be evaluated";
    }
    return out;
}

CommandOutput cmd_equilibria(const json& cfg, const RunOptions&) {
    Section root(cfg, "config");
    check_kind(root, "equilibria");
    const ModelSetup m = parse_model(root);
    root.finish();

    const seir::EquilibriumReport eq = seir::equilibria(m.params, m.incidence);
    const double S0 = m.params.S0();
    const seir::HypothesisReport hyp = seir::check_hypotheses(m.incidence, 2.0 * S0, S0);
    json violations = json::array();
    for (const auto& v : hyp.per_condition) {
        violations.push_back({{"condition", v.condition}, {"S", v.S}, {"I", v.I}, {"value", v.value}});
    }
    json report{{"r0", eq.r0},
                {"disease_free", state_json(eq.disease_free)},
                {"disease_free_residual", eq.disease_free_residual},
                {"endemic", eq.endemic ? state_json(*eq.endemic) : json(nullptr)},
                {"residual_norm", eq.residual_norm},
                {"hypotheses", {{"passed", hyp.passed}, {"violations", violations}}}};
    CommandOutput out;
    out.body = dump(report);
    return out;
}

CommandOutput cmd_stability(const json& cfg, const RunOptions& opts) {
    Section root(cfg, "config");
    check_kind(root, "stability");
    const StabilityConfig sc = parse_stability(root, opts);
    root.finish();

    const seir::StabilityReport rep = run_stability(sc, sc.model.params, sc.model.incidence, opts.seed);
    json outcomes = json::array();
    for (const seir::StateOutcome& o : rep.outcomes) {
        json row{{"initial", state_json(o.initial)}};
        if (!o.error.empty()) {
            row["error"] = o.error;
        } else {
            row["final"] = state_json(o.final_state);
            row["distance"] = o.distance;
            row["converged"] = o.converged;
            row["max_lyapunov_increase"] = finite_or_null(o.max_lyapunov_increase);
            row["v_initial"] = finite_or_null(o.v_initial);
            row["v_final"] = finite_or_null(o.v_final);
            if (o.warning) {
                row["positivity_warning"] = {{"step", o.warning->step},
                                             {"component", o.warning->component},
                                             {"value", o.warning->value}};
            }
        }
        outcomes.push_back(std::move(row));
    }
    json report{{"r0", rep.r0},
                {"attractor", std::string(seir::to_string(rep.attractor))},
                {"attractor_state", state_json(rep.attractor_state)},
                {"seed", opts.seed},
                {"corpus", sc.corpus},
                {"epsilon", sc.options.epsilon},
                {"lyapunov_tolerance", 10.0 * sc.options.dt},
                {"all_converged", rep.all_converged()},
                {"max_lyapunov_increase", finite_or_null(rep.max_lyapunov_increase())},
                {"outcomes", outcomes}};
    CommandOutput out;
    out.body = dump(report);
    return out;
}

CommandOutput cmd_sweep(const json& cfg, const RunOptions& opts) {
    Section root(cfg, "config");
    check_kind(root, "sweep");
    const StabilityConfig sc = parse_stability(root, opts);
    std::string axis;
    std::vector<double> values;
    {
        Section s(root.child("sweep"), "sweep");
        axis = s.text("axis");
        if (const json* v = s.optional_child("values")) {
            require_array(*v, "sweep.values");
            for (const json& x : *v) {
                if (!x.is_number()) {
                    throw ConfigError("sweep.values: expected numbers");
                }
                values.push_back(x.get<double>());
            }
        } else {
            const double start = s.number("start");
            const double stop = s.number("stop");
            const double count = s.number("count");
            if (!(count >= 1.0) || count != std::floor(count)) {
                throw ConfigError("sweep.count must be a positive integer");
            }
            const auto n = static_cast<std::size_t>(count);
            for (std::size_t i = 0; i < n; ++i) {
                values.push_back(n == 1 ? start
                                        : start + (stop - start) * static_cast<double>(i) /
                                                      static_cast<double>(n - 1));
            }
        }
        s.finish();
    }
    root.finish();
    static const std::set<std::string> axes{"beta", "Lambda", "d", "sigma", "gamma"};
    if (!axes.count(axis)) {
        throw ConfigError("sweep.axis must be one of beta, Lambda, d, sigma, gamma");
    }
    if (values.empty()) {
        throw ConfigError("sweep: no axis values");
    }
    std::sort(values.begin(), values.end());

    struct Row {
        double r0 = std::numeric_limits<double>::quiet_NaN();
        std::string attractor;
        double distance = std::numeric_limits<double>::quiet_NaN();
        std::string status;
    };
    std::vector<Row> rows(values.size());
    const long long count = static_cast<long long>(values.size());
#pragma omp parallel for schedule(dynamic, 1)
    for (long long i = 0; i < count; ++i) {
        Row& row = rows[static_cast<std::size_t>(i)];
        try {
            seir::SeirParams p = sc.model.params;
            const double v = values[static_cast<std::size_t>(i)];
            if (axis == "beta") p.beta = v;
            if (axis == "Lambda") p.Lambda = v;
            if (axis == "d") p.d = v;
            if (axis == "sigma") p.sigma = v;
            if (axis == "gamma") p.gamma = v;
            p.validate();
            const seir::IncidenceSpec inc =
                seir::make_incidence(sc.model.incidence.name, p, [&] {
                    std::map<std::string, double> c = sc.model.incidence.constants;
                    c.erase("beta");
                    return c;
                }());
            const seir::StabilityReport rep = run_stability(sc, p, inc, opts.seed);
            row.r0 = rep.r0;
            row.attractor = std::string(seir::to_string(rep.attractor));
            double worst = 0.0;
            std::string failure;
            for (const auto& o : rep.outcomes) {
                if (!o.error.empty() && failure.empty()) {
                    failure = o.error;
                }
                worst = std::max(worst, o.distance);
            }
            row.distance = worst;
            row.status = !failure.empty()        ? "error: " + one_line(failure)
                         : rep.all_converged() ? "converged"
                                               : "not_converged";
        } catch (const std::exception& e) {
            row.status = "error: " + one_line(e.what());
        }
    }

    CommandOutput out;
    out.body = axis + ",r0,attractor,distance,status\n";
    for (std::size_t i = 0; i < values.size(); ++i) {
        const Row& r = rows[i];
        out.body += format_number(values[i]) + ',' +
                    (std::isfinite(r.r0) ? format_number(r.r0) : std::string()) + ',' +
                    r.attractor + ',' +
                    (std::isfinite(r.distance) ? format_number(r.distance) : std::string()) + ',' +
                    r.status + '\n';
    }
    return out;
}

int run(const std::string& command, const std::string& config_path, const std::string& out_path,
        const RunOptions& opts, std::ostream& out, std::ostream& err) {
    static const std::map<std::string, CommandOutput (*)(const json&, const RunOptions&)> commands{
        {"simulate", cmd_simulate},   {"verify", cmd_verify}, {"equilibria", cmd_equilibria},
        {"stability", cmd_stability}, {"sweep", cmd_sweep},
    };
    const auto it = commands.find(command);
    if (it == commands.end()) {
        err << "error: unknown command '" << command << "'\n";
        return kExitConfig;
    }
    CommandOutput result;
    try {
        result = it->second(load_config(config_path), opts);
    } catch (const ConfigError& e) {
        err << "config error: " << e.what() << '\n';
        return kExitConfig;
    } catch (const DomainError& e) {
        err << "config error: " << e.what() << '\n';
        return kExitConfig;
    } catch (const json::exception& e) {
        err << "config error: " << e.what() << '\n';
        return kExitConfig;
    } catch (const DivergenceError& e) {
        err << "divergence: " << e.what() << '\n';
        return kExitDivergence;
    } catch (const ConvergenceError& e) {
        err << "divergence: " << e.what() << '\n';
        return kExitDivergence;
    } catch (const std::exception& e) {
        err << "internal error: " << e.what() << '\n';
        return kExitInternal;
    }
    if (!result.warning.empty()) {
        err << "warning: " << result.warning << '\n';
    }
    if (out_path.empty()) {
        out << result.body;
    } else {
        std::ofstream file(out_path, std::ios::binary | std::ios::trunc);
        file << result.body;
        if (!file) {
            err << "error: cannot write '" << out_path << "'\n";
            return kExitInternal;
        }
    }
    return result.exit_code;
}

}  // namespace fraclyap::app
