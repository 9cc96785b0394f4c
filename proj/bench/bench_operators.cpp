// Wall-clock comparison of the OpenMP operator kernels at 1 thread and at the
// configured thread count, and against the serial reference (small grids only:
// the reference evaluates every kernel weight directly).
//
//   bench_operators [nodes=4096] [repeats=3] [reference_limit=512]
#include <omp.h>

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <functional>
#include <string>

#include "fraclyap/operators.hpp"

using namespace fraclyap;

namespace {

using Op = std::function<SampledTrajectory(const SampledTrajectory&)>;

double seconds(const Op& op, const SampledTrajectory& u, int repeats, SampledTrajectory& out) {
    double best = 1e300;
    for (int r = 0; r < repeats; ++r) {
        const auto start = std::chrono::steady_clock::now();
        out = op(u);
        const std::chrono::duration<double> elapsed = std::chrono::steady_clock::now() - start;
        best = std::min(best, elapsed.count());
    }
    return best;
}

}  // namespace

int main(int argc, char** argv) {
    const std::size_t nodes = argc > 1 ? std::strtoul(argv[1], nullptr, 10) : 4096;
    const int repeats = argc > 2 ? std::atoi(argv[2]) : 3;
    const std::size_t reference_limit = argc > 3 ? std::strtoul(argv[3], nullptr, 10) : 512;
    const int threads = omp_get_max_threads();
    const double alpha = 0.7;
    const auto u = sample_interval(0.0, 10.0, nodes - 1,
                                   [](double t) { return 2.0 + std::sin(t) + 0.01 * t * t; });

    struct Pair {
        const char* name;
        Op parallel;
        Op serial;
    };
    const Pair pairs[] = {
        {"rl_integral", [&](const SampledTrajectory& x) { return rl_integral(x, alpha); },
         [&](const SampledTrajectory& x) { return reference::rl_integral(x, alpha); }},
        {"caputo", [&](const SampledTrajectory& x) { return caputo_deriv(x, alpha); },
         [&](const SampledTrajectory& x) { return reference::caputo_deriv(x, alpha); }},
        {"cf", [&](const SampledTrajectory& x) { return cf_deriv(x, alpha); },
         [&](const SampledTrajectory& x) { return reference::cf_deriv(x, alpha); }},
        {"abc", [&](const SampledTrajectory& x) { return abc_deriv(x, alpha); },
         [&](const SampledTrajectory& x) { return reference::abc_deriv(x, alpha); }},
    };

    std::printf("nodes=%zu threads=%d repeats=%d alpha=%g\n", nodes, threads, repeats, alpha);
    std::printf("%-12s %12s %12s %8s %12s %12s\n", "operator", "1_thread_s", "n_threads_s",
                "speedup", "reference_s", "max_diff");
    for (const Pair& p : pairs) {
        SampledTrajectory single;
        SampledTrajectory multi;
        omp_set_num_threads(1);
        const double t1 = seconds(p.parallel, u, repeats, single);
        omp_set_num_threads(threads);
        const double tn = seconds(p.parallel, u, repeats, multi);
        std::string reference_time = "-";
        double diff = 0.0;
        if (nodes <= reference_limit) {
            SampledTrajectory serial;
            char buffer[32];
            std::snprintf(buffer, sizeof buffer, "%.6f", seconds(p.serial, u, 1, serial));
            reference_time = buffer;
            for (std::size_t i = 0; i < multi.size(); ++i) {
                diff = std::max(diff, std::abs(multi[i] - serial[i]));
            }
        } else {
            for (std::size_t i = 0; i < multi.size(); ++i) {
                diff = std::max(diff, std::abs(multi[i] - single[i]));
            }
        }
        std::printf("%-12s %12.6f %12.6f %8.2f %12s %12.3e\n", p.name, t1, tn, t1 / tn,
                    reference_time.c_str(), diff);
    }
    return 0;
}
