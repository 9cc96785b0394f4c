#pragma once

#include <cstddef>
#include <functional>
#include <span>
#include <vector>

namespace fraclyap {

/// Scalar samples u(t0 + i*dt), i = 0..N-1, on a uniform grid.
struct SampledTrajectory {
    double t0 = 0.0;
    double dt = 1.0;
    std::vector<double> values;

    std::size_t size() const noexcept { return values.size(); }
    double time(std::size_t i) const noexcept { return t0 + static_cast<double>(i) * dt; }
    double operator[](std::size_t i) const noexcept { return values[i]; }

    /// Throws DomainError unless dt > 0, N >= 2 and every value is finite.
    void validate() const;

    /// Same grid, values replaced by zeros.
    SampledTrajectory zeros_like() const;
};

/// Samples `fn` at `nodes` grid points starting at t0.
SampledTrajectory sample(double t0, double dt, std::size_t nodes,
                         const std::function<double(double)>& fn);

/// Grid with `intervals` steps covering [t0, t1].
SampledTrajectory sample_interval(double t0, double t1, std::size_t intervals,
                                  const std::function<double(double)>& fn);

/// True when both trajectories share t0, dt and length (dt compared relatively).
bool same_grid(const SampledTrajectory& a, const SampledTrajectory& b, double tolerance = 1e-8);

/// Vector-valued samples stored node-major: data[i * dim + k] is component k at node i.
struct StateTrajectory {
    double t0 = 0.0;
    double dt = 1.0;
    std::size_t dim = 0;
    std::vector<double> data;

    StateTrajectory() = default;
    StateTrajectory(double t0_, double dt_, std::size_t dim_, std::size_t nodes)
        : t0(t0_), dt(dt_), dim(dim_), data(dim_ * nodes, 0.0) {}

    std::size_t nodes() const noexcept { return dim == 0 ? 0 : data.size() / dim; }
    double time(std::size_t i) const noexcept { return t0 + static_cast<double>(i) * dt; }

    double& at(std::size_t i, std::size_t k) noexcept { return data[i * dim + k]; }
    double at(std::size_t i, std::size_t k) const noexcept { return data[i * dim + k]; }

    std::span<double> state(std::size_t i) noexcept { return {data.data() + i * dim, dim}; }
    std::span<const double> state(std::size_t i) const noexcept {
        return {data.data() + i * dim, dim};
    }

    SampledTrajectory component(std::size_t k) const;
};

}  // namespace fraclyap
