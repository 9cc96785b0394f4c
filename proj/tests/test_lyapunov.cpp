#include <doctest.h>

#include <cmath>
#include <numbers>

#include "fraclyap/errors.hpp"
#include "fraclyap/lyapunov.hpp"
#include "fraclyap/solvers.hpp"

using namespace fraclyap;
using doctest::Approx;

namespace {

CandidateFunction squared_g(double u_star) {
    return CandidateFunction::psi_general(u_star, [](double s) { return s * s; }, "square");
}

constexpr Family kFamilies[] = {Family::Caputo, Family::CaputoFabrizio, Family::Abc};

SampledTrajectory relaxation(double alpha, double dt) {
    FdeProblem p;
    p.rhs = [](double, std::span<const double> y, std::span<double> dy) { dy[0] = 1 - y[0]; };
    p.y0 = {0.2};
    p.order = {alpha, Family::Caputo};
    p.T = 5.0;
    p.dt = dt;
    return solve_caputo(p).component(0);
}

}  // namespace

TEST_SUITE("lyapunov") {

TEST_CASE("psi worked values") {
    CHECK(psi(CandidateFunction::volterra(2.0), 2.0) == 0.0);
    const auto identity = CandidateFunction::psi_general(1.0, [](double s) { return s; }, "identity");
    CHECK(psi(identity, std::numbers::e) == Approx(std::numbers::e - 2).epsilon(1e-10));
    CHECK(psi(squared_g(1.0), 2.0) == Approx(0.5).epsilon(1e-10));
    CHECK(psi(CandidateFunction::quadratic(), -3.0) == 9.0);
}

TEST_CASE("psi_slope worked values") {
    CHECK(psi_slope(squared_g(1.7), 1.7) == 0.0);
    CHECK(psi_slope(CandidateFunction::volterra(1.0), 2.0) == Approx(0.5));
    CHECK(psi_slope(squared_g(1.0), 2.0) == Approx(0.75));
    CHECK(psi_slope(CandidateFunction::quadratic(), 1.5) == 3.0);
}

TEST_CASE("general form with g(s) = s reproduces the Volterra form") {
    const auto identity = CandidateFunction::psi_general(1.5, [](double s) { return s; }, "identity");
    const auto volterra = CandidateFunction::volterra(1.5);
    for (double u : {0.01, 0.3, 1.0, 1.5, 2.2, 9.0}) {
        CHECK(psi(identity, u) == Approx(psi(volterra, u)).epsilon(1e-10));
        CHECK(psi_slope(identity, u) == Approx(psi_slope(volterra, u)).epsilon(1e-14));
    }
}

TEST_CASE("positivity away from u*") {
    const double u_star = 1.3;
    const std::vector<CandidateFunction> candidates = {
        CandidateFunction::volterra(u_star), squared_g(u_star),
        CandidateFunction::psi_general(u_star, [](double s) { return std::exp(s); }, "exp"),
        CandidateFunction::psi_general(u_star, [](double s) { return s / (1 + s); }, "saturating")};
    for (const auto& c : candidates) {
        CAPTURE(c.label());
        CHECK(psi(c, u_star) == 0.0);
        for (int i = 1; i <= 60; ++i) {
            const double u = 0.05 * i;
            if (std::abs(u - u_star) < 1e-12) continue;
            CHECK(psi(c, u) > 0.0);
        }
    }
}

TEST_CASE("slope sign follows u - u*") {
    const double u_star = 2.0;
    for (const auto& c : {CandidateFunction::volterra(u_star), squared_g(u_star)}) {
        for (int i = 1; i <= 80; ++i) {
            const double u = 0.05 * i;
            if (u < u_star) CHECK(psi_slope(c, u) < 0.0);
            if (u > u_star) CHECK(psi_slope(c, u) > 0.0);
        }
    }
}

TEST_CASE("argument and candidate errors") {
    CHECK_THROWS_AS(psi(CandidateFunction::volterra(1.0), 0.0), DomainError);
    CHECK_THROWS_AS(psi_slope(squared_g(1.0), -1.0), DomainError);
    CHECK_THROWS_AS(CandidateFunction::volterra(0.0), DomainError);
    CHECK_THROWS_AS(CandidateFunction::psi_general(1.0, nullptr), DomainError);
    const auto shifted = CandidateFunction::psi_general(1.0, [](double s) { return s - 0.5; }, "shifted");
    CHECK_THROWS_AS(psi(shifted, 0.2), EvaluationError);
    const auto decreasing = CandidateFunction::psi_general(1.0, [](double s) { return 1 / s; }, "inverse");
    CHECK_THROWS_AS(validate_candidate(decreasing, 0.5, 2.0), DomainError);
    CHECK_THROWS_AS(validate_candidate(shifted, 0.1, 2.0), DomainError);
    CHECK_NOTHROW(validate_candidate(squared_g(1.0), 0.1, 5.0));
    CHECK_NOTHROW(validate_candidate(CandidateFunction::quadratic(), -1.0, 1.0));
}

TEST_CASE("classification") {
    CHECK(classify(-1e-3, 0.1) == Verdict::Holds);
    CHECK(classify(0.0, 0.1) == Verdict::Holds);
    CHECK(classify(0.05, 0.1) == Verdict::HoldsWithinTolerance);
    CHECK(classify(0.1, 0.1) == Verdict::HoldsWithinTolerance);
    CHECK(classify(0.2, 0.1) == Verdict::Violated);
}

TEST_CASE("constant trajectory gives equal sides") {
    const auto u = sample_interval(0.0, 3.0, 300, [](double) { return 1.75; });
    for (Family f : kFamilies) {
        const auto r = verify_estimate(u, {0.6, f}, CandidateFunction::volterra(1.0));
        CHECK(r.max_violation <= 0.0);
        CHECK(r.verdict == Verdict::Holds);
        for (std::size_t i = 0; i < u.size(); ++i) {
            CHECK(std::abs(r.lhs[i]) <= 1e-12);
            CHECK(std::abs(r.rhs[i]) <= 1e-12);
        }
    }
}

TEST_CASE("Volterra estimate for the ABC derivative does not lose margin under refinement") {
    auto run = [](std::size_t n) {
        const auto u = sample_interval(0.0, 10.0, n, [](double t) { return 2 + std::sin(t); });
        return verify_estimate(u, {0.7, Family::Abc}, CandidateFunction::volterra(2.0));
    };
    const auto coarse = run(1000);
    const auto fine = run(10000);
    CHECK(coarse.verdict != Verdict::Violated);
    CHECK(fine.verdict != Verdict::Violated);
    CHECK(fine.max_violation / fine.tolerance_used <= std::max(0.0, coarse.max_violation / coarse.tolerance_used));
}

TEST_CASE("quadratic estimate along a Caputo solution") {
    const auto u = relaxation(0.5, 1.0 / 64);
    const auto r = verify_estimate(u, {0.5, Family::Caputo}, CandidateFunction::quadratic());
    CHECK(r.verdict == Verdict::Holds);
    const auto du = fractional_derivative(u, {0.5, Family::Caputo});
    for (std::size_t i = 0; i < u.size(); ++i) {
        CHECK(r.rhs[i] == 2 * u[i] * du[i]);
    }
    CHECK(r.tolerance_used == Approx(10.0 / 64));
}

TEST_CASE("alpha = 1 closes the gap") {
    const auto c = CandidateFunction::volterra(2.0);
    for (std::size_t n : {200u, 400u}) {
        const auto u = sample_interval(0.0, 2.0, n, [](double t) { return 1 + t; });
        const auto r = verify_estimate(u, {1.0, Family::Caputo}, c);
        double gap = 0.0;
        for (std::size_t i = 1; i < u.size(); ++i) gap = std::max(gap, std::abs(r.lhs[i] - r.rhs[i]));
        CHECK(gap <= u.dt);
    }
}

TEST_CASE("swapped sides flag a violation") {
    const auto u = sample_interval(0.0, 5.0, 500, [](double t) { return 2 + std::sin(t); });
    EstimateOptions swapped;
    swapped.swap_sides = true;
    const auto r = verify_estimate(u, {0.6, Family::Caputo}, CandidateFunction::volterra(2.0), {}, swapped);
    CHECK(r.verdict == Verdict::Violated);
}

TEST_CASE("verify_estimate preconditions") {
    const auto crossing = sample_interval(0.0, 5.0, 100, [](double t) { return std::cos(t); });
    CHECK_THROWS_AS(verify_estimate(crossing, {0.5, Family::Caputo}, CandidateFunction::volterra(1.0)), DomainError);
    CHECK_NOTHROW(verify_estimate(crossing, {0.5, Family::Caputo}, CandidateFunction::quadratic()));
    CHECK_THROWS_AS(verify_estimate(crossing, {0.5, Family::RlIntegral}, CandidateFunction::quadratic()), DomainError);
}

TEST_CASE("margin_scan") {
    CHECK(margin_scan({}).results.empty());

    const auto sine = sample_interval(0.0, 10.0, 1000, [](double t) { return 2 + std::sin(t); });
    const auto crossing = sample_interval(0.0, 5.0, 100, [](double t) { return std::cos(t); });
    std::vector<ScanItem> items = {
        {"constant", sample_interval(0.0, 3.0, 300, [](double) { return 1.75; }), {0.6, Family::Caputo},
         CandidateFunction::volterra(1.0)},
        {"sine", sine, {0.7, Family::Abc}, CandidateFunction::volterra(2.0)},
        {"relaxation", relaxation(0.5, 1.0 / 64), {0.5, Family::Caputo}, CandidateFunction::quadratic()},
    };
    const auto clean = margin_scan(items);
    REQUIRE(clean.results.size() == 3);
    CHECK(clean.errors == 0);
    CHECK(clean.worst != Verdict::Violated);

    items.insert(items.begin() + 1, {"crossing", crossing, {0.5, Family::Caputo}, CandidateFunction::volterra(1.0)});
    const auto mixed = margin_scan(items);
    REQUIRE(mixed.results.size() == 4);
    CHECK(mixed.errors == 1);
    CHECK_FALSE(mixed.results[1].report.has_value());
    CHECK(mixed.results[1].error.find("positive") != std::string::npos);
    CHECK(mixed.results[0].report->max_violation == clean.results[0].report->max_violation);
    CHECK(mixed.results[2].report->max_violation == clean.results[1].report->max_violation);
    CHECK(mixed.results[3].report->max_violation == clean.results[2].report->max_violation);
}

}
