// Shared generators and brute-force references for the test binaries.
#pragma once

#include "divisikit/dist.hpp"
#include "divisikit/matrix.hpp"
#include "divisikit/sat.hpp"

#include <algorithm>
#include <cmath>
#include <initializer_list>
#include <random>
#include <vector>

namespace testsupport {

using divisikit::FiniteDistribution;
using divisikit::Rational;

inline FiniteDistribution pmf(std::initializer_list<const char*> xs)
{
    std::vector<Rational> v;
    for (auto x : xs) v.push_back(divisikit::parse_rational(x));
    return divisikit::normalize_distribution(v).dist;
}

inline FiniteDistribution uniform(int k)
{
    return divisikit::normalize_distribution(std::vector<Rational>(k, Rational(1))).dist;
}

inline Rational rand_rational(std::mt19937_64& rng, long max_den, long lo_num, long hi_num)
{
    std::uniform_int_distribution<long> den(1, max_den);
    long q = den(rng);
    std::uniform_int_distribution<long> num(lo_num * q, hi_num * q);
    Rational r(num(rng), q);
    r.canonicalize();
    return r;
}

// Random aligned pmf with the given width; interior entries may be zero.
inline FiniteDistribution rand_pmf(std::mt19937_64& rng, int width, long max_weight = 9,
                                   double zero_prob = 0.15)
{
    std::uniform_int_distribution<long> w(1, max_weight);
    std::bernoulli_distribution z(zero_prob);
    std::vector<Rational> raw(width + 1);
    for (int i = 0; i <= width; ++i) {
        bool edge = i == 0 || i == width;
        raw[i] = (!edge && z(rng)) ? Rational(0) : Rational(w(rng));
    }
    return divisikit::normalize_distribution(raw).dist;
}

inline std::vector<double> dpow(const std::vector<double>& v, int n)
{
    std::vector<double> acc{1.0};
    for (int r = 0; r < n; ++r) {
        std::vector<double> next(acc.size() + v.size() - 1, 0.0);
        for (std::size_t i = 0; i < acc.size(); ++i)
            for (std::size_t j = 0; j < v.size(); ++j) next[i + j] += acc[i] * v[j];
        acc = next;
    }
    return acc;
}

// Smallest max-norm distance between d and w^{*n} over normalized pmfs w of
// length m+1 (m = ceil(width/n)) sampled on a grid with the given step.
// Only root lengths 1..3 are supported.
inline double grid_min_distance(const FiniteDistribution& d, int n, double step)
{
    int N = d.width();
    int m = (N + n - 1) / n;
    std::vector<double> p(m * n + 1, 0.0);
    for (int i = 0; i <= N; ++i) p[i] = d[i].get_d();
    int K = static_cast<int>(std::lround(1.0 / step));
    double best = 1e300;
    auto eval = [&](const std::vector<double>& w) {
        auto c = dpow(w, n);
        double mx = 0;
        for (std::size_t i = 0; i < p.size(); ++i) mx = std::max(mx, std::fabs(c[i] - p[i]));
        best = std::min(best, mx);
    };
    if (m == 0) {
        eval({1.0});
    } else if (m == 1) {
        for (int i = 0; i <= K; ++i) eval({double(i) / K, double(K - i) / K});
    } else if (m == 2) {
        for (int i = 0; i <= K; ++i)
            for (int j = 0; i + j <= K; ++j) eval({double(i) / K, double(j) / K, double(K - i - j) / K});
    }
    return best;
}

// Random stochastic matrix with integer weights per row (zero with probability zero_prob).
inline divisikit::RationalMatrix rand_stochastic(std::mt19937_64& rng, int d, long max_weight = 9,
                                                 double zero_prob = 0.0)
{
    std::uniform_int_distribution<long> w(1, max_weight);
    std::bernoulli_distribution z(zero_prob);
    divisikit::RationalMatrix m(d);
    for (int i = 0; i < d; ++i) {
        Rational s = 0;
        for (int j = 0; j < d; ++j) {
            m(i, j) = z(rng) ? Rational(0) : Rational(w(rng));
            s += m(i, j);
        }
        if (s == 0) {
            m(i, i) = 1;
            s = 1;
        }
        for (int j = 0; j < d; ++j) m(i, j) /= s;
    }
    return m;
}

inline divisikit::RationalMatrix rand_matrix(std::mt19937_64& rng, int d, long max_den, long lo, long hi)
{
    divisikit::RationalMatrix m(d);
    for (int i = 0; i < d; ++i)
        for (int j = 0; j < d; ++j) m(i, j) = rand_rational(rng, max_den, lo, hi);
    return m;
}

inline double max_abs_diff(const divisikit::ComplexMatrix& x, const divisikit::ComplexMatrix& y)
{
    double m = 0;
    for (std::size_t i = 0; i < x.a.size(); ++i) m = std::max(m, std::abs(x.a[i] - y.a[i]));
    return m;
}

inline divisikit::ComplexMatrix csquare(const divisikit::ComplexMatrix& x)
{
    divisikit::ComplexMatrix r(x.dim);
    for (int i = 0; i < x.dim; ++i)
        for (int j = 0; j < x.dim; ++j)
            for (int k = 0; k < x.dim; ++k) r(i, j) += x(i, k) * x(k, j);
    return r;
}

inline divisikit::ComplexMatrix to_complex(const divisikit::RationalMatrix& m)
{
    divisikit::ComplexMatrix r(m.dim());
    for (int i = 0; i < m.dim(); ++i)
        for (int j = 0; j < m.dim(); ++j) r(i, j) = m(i, j).get_d();
    return r;
}

// Random 1-in-3-SAT instance over three distinct variables per clause, each literal
// negated with probability neg_prob.
inline divisikit::SatInstance rand_sat(std::mt19937_64& rng, int n_v, int n_c, double neg_prob = 0.0)
{
    divisikit::SatInstance inst;
    inst.n_v = n_v;
    std::bernoulli_distribution neg(neg_prob);
    for (int c = 0; c < n_c; ++c) {
        std::vector<int> vars(n_v);
        for (int k = 0; k < n_v; ++k) vars[k] = k + 1;
        std::shuffle(vars.begin(), vars.end(), rng);
        divisikit::Clause cl;
        for (int a = 0; a < 3; ++a) cl[a] = {vars[a], !neg(rng)};
        inst.clauses.push_back(cl);
    }
    return inst;
}

// Independent exhaustive 1-in-3 check.
inline bool brute_sat(const divisikit::SatInstance& inst)
{
    for (unsigned long x = 0; x < (1ul << inst.n_v); ++x) {
        bool ok = true;
        for (const auto& c : inst.clauses) {
            int t = 0;
            for (const auto& l : c) t += ((x >> (l.var - 1) & 1) == 1) == l.positive;
            ok = ok && t == 1;
        }
        if (ok) return true;
    }
    return false;
}

} // namespace testsupport
