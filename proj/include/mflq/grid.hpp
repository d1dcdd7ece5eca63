#pragma once

#include <cmath>

#include "mflq/errors.hpp"

namespace mflq {

/// Uniform time grid on [t0, T] with n_steps intervals.
struct TimeGrid {
    double t0 = 0.0;
    double T = 1.0;
    int n_steps = 2;

    TimeGrid() = default;
    TimeGrid(double t0_, double T_, int n_steps_) : t0(t0_), T(T_), n_steps(n_steps_) {
        if (!(T > t0)) throw StructuralError("TimeGrid: T must exceed t0");
        if (n_steps < 2) throw StructuralError("TimeGrid: n_steps must be at least 2");
    }

    double dt() const { return (T - t0) / n_steps; }
    double horizon() const { return T - t0; }
    int n_nodes() const { return n_steps + 1; }
    double node(int k) const { return t0 + k * dt(); }

    bool contains(double s) const {
        const double slack = 1e-12 * (1.0 + std::abs(T) + std::abs(t0));
        return s >= t0 - slack && s <= T + slack;
    }

    bool operator==(const TimeGrid& o) const {
        return t0 == o.t0 && T == o.T && n_steps == o.n_steps;
    }
};

}  // namespace mflq
