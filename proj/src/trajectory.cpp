#include "fraclyap/trajectory.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "fraclyap/errors.hpp"

namespace fraclyap {

void SampledTrajectory::validate() const {
    if (!(dt > 0.0) || !std::isfinite(dt)) {
        throw DomainError("trajectory: dt must be positive and finite");
    }
    if (!std::isfinite(t0)) {
        throw DomainError("trajectory: t0 must be finite");
    }
    if (values.size() < 2) {
        throw DomainError("trajectory: at least 2 samples required, got " +
                          std::to_string(values.size()));
    }
    for (std::size_t i = 0; i < values.size(); ++i) {
        if (!std::isfinite(values[i])) {
            throw DomainError("trajectory: non-finite value at node " + std::to_string(i));
        }
    }
}

SampledTrajectory SampledTrajectory::zeros_like() const {
    return {t0, dt, std::vector<double>(values.size(), 0.0)};
}

SampledTrajectory sample(double t0, double dt, std::size_t nodes,
                         const std::function<double(double)>& fn) {
    SampledTrajectory u{t0, dt, std::vector<double>(nodes)};
    for (std::size_t i = 0; i < nodes; ++i) {
        u.values[i] = fn(u.time(i));
    }
    return u;
}

SampledTrajectory sample_interval(double t0, double t1, std::size_t intervals,
                                  const std::function<double(double)>& fn) {
    if (intervals == 0 || !(t1 > t0)) {
        throw DomainError("sample_interval: need t1 > t0 and at least one interval");
    }
    return sample(t0, (t1 - t0) / static_cast<double>(intervals), intervals + 1, fn);
}

bool same_grid(const SampledTrajectory& a, const SampledTrajectory& b, double tolerance) {
    if (a.size() != b.size()) {
        return false;
    }
    const double scale = std::max(std::abs(a.dt), std::abs(b.dt));
    return std::abs(a.dt - b.dt) <= tolerance * scale &&
           std::abs(a.t0 - b.t0) <= tolerance * std::max(1.0, scale);
}

SampledTrajectory StateTrajectory::component(std::size_t k) const {
    if (k >= dim) {
        throw DomainError("StateTrajectory::component: index out of range");
    }
    SampledTrajectory u{t0, dt, std::vector<double>(nodes())};
    for (std::size_t i = 0; i < u.values.size(); ++i) {
        u.values[i] = at(i, k);
    }
    return u;
}

}  // namespace fraclyap
