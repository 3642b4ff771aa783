#pragma once

#include "divisikit/dist.hpp"

#include <optional>
#include <vector>

namespace divisikit {

struct DivisibilityVerdict {
    bool yes = false;
    std::optional<FiniteDistribution> witness;
};

struct Interval {
    double lo = 0, hi = 0;
    bool empty() const { return lo > hi; }
};

struct IntervalBox {
    std::vector<Interval> intervals;
    // index of the first interval found empty, -1 if none
    int empty_at = -1;
    bool empty() const { return empty_at >= 0; }
};

struct EpsOptions {
    int bisection_depth = 20;
    // cap on the number of I_0 cells examined during refinement
    int max_cells = 2048;
};

// Monic n-th root by the top-down recurrence; canonical (g(1)=1) on success.
std::optional<Poly> nth_root_exact(const Poly& f, int n);

DivisibilityVerdict is_n_divisible(const FiniteDistribution& d, int n);

struct EpsResult {
    DivisibilityVerdict verdict;
    IntervalBox box;
};

EpsResult divisibility_eps(const FiniteDistribution& d, int n, const Rational& eps,
                           const EpsOptions& opt = {});

bool weak_divisibility(const FiniteDistribution& d, int n, const Rational& eps);

struct ClosestResult {
    FiniteDistribution witness;
    Rational eps_star;       // smallest accepted margin
    Rational eps_lower;      // largest rejected margin
};

ClosestResult closest_divisible(const FiniteDistribution& d, int n, const Rational& precision);

// Interval propagation only (no witness search).
IntervalBox propagate_intervals(const FiniteDistribution& d, int n, double eps,
                                Interval first);

} // namespace divisikit
