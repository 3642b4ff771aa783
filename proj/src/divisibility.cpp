#include "divisikit/divisibility.hpp"
#include "divisikit/error.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace divisikit {

namespace {

void check_n(int n)
{
    if (n < 2) fail(Errc::ParseError, "n must be at least 2");
}

double down(double x) { return std::nextafter(x, -std::numeric_limits<double>::infinity()); }
double up(double x) { return std::nextafter(x, std::numeric_limits<double>::infinity()); }

double rdown(const Rational& q)
{
    double x = q.get_d();
    return from_double(x) > q ? down(x) : x;
}

double rup(const Rational& q)
{
    double x = q.get_d();
    return from_double(x) < q ? up(x) : x;
}

// Coefficients 0..upto of (sum v_j x^j)^n for nonnegative v, rounded in one direction.
std::vector<double> directed_power(const std::vector<double>& v, int n, int upto, bool round_up)
{
    std::vector<double> acc(upto + 1, 0.0);
    acc[0] = 1.0;
    for (int r = 0; r < n; ++r) {
        std::vector<double> next(upto + 1, 0.0);
        for (int i = 0; i <= upto; ++i) {
            if (acc[i] == 0) continue;
            for (int j = 0; j < static_cast<int>(v.size()) && i + j <= upto; ++j) {
                if (v[j] == 0) continue;
                double prod = acc[i] * v[j];
                prod = round_up ? up(prod) : down(prod);
                double s = next[i + j] + prod;
                next[i + j] = round_up ? up(s) : std::max(0.0, down(s));
            }
        }
        acc = std::move(next);
    }
    return acc;
}

std::vector<double> plain_power(const std::vector<double>& v, int n)
{
    int deg = static_cast<int>(v.size() - 1) * n;
    std::vector<double> acc{1.0};
    for (int r = 0; r < n; ++r) {
        std::vector<double> next(acc.size() + v.size() - 1, 0.0);
        for (std::size_t i = 0; i < acc.size(); ++i)
            for (std::size_t j = 0; j < v.size(); ++j) next[i + j] += acc[i] * v[j];
        acc = std::move(next);
    }
    acc.resize(deg + 1);
    return acc;
}

struct Problem {
    int n = 2;
    int m = 0;                 // root degree
    int top = 0;               // n*m
    std::vector<double> p;     // target padded to top+1
    std::vector<double> plo, phi;  // outward-rounded target
    double eps = 0;
    double epslo = 0, epshi = 0;
};

Problem make_problem(const FiniteDistribution& d, int n, const Rational& eps)
{
    Problem pr;
    pr.n = n;
    int N = d.width();
    pr.m = (N + n - 1) / n;
    pr.top = pr.m * n;
    pr.p.assign(pr.top + 1, 0.0);
    pr.plo.assign(pr.top + 1, 0.0);
    pr.phi.assign(pr.top + 1, 0.0);
    for (int i = 0; i <= N; ++i) {
        pr.p[i] = d[i].get_d();
        pr.plo[i] = rdown(d[i]);
        pr.phi[i] = rup(d[i]);
    }
    pr.eps = eps.get_d();
    pr.epslo = rdown(eps);
    pr.epshi = rup(eps);
    return pr;
}

IntervalBox propagate(const Problem& pr, Interval first)
{
    IntervalBox box;
    box.intervals.assign(pr.m + 1, Interval{});
    Interval i0{std::max(0.0, first.lo), std::min(1.0, first.hi)};
    box.intervals[0] = i0;
    if (i0.empty()) {
        box.empty_at = 0;
        return box;
    }
    int n = pr.n;
    std::vector<double> lo{i0.lo}, hi{i0.hi};
    for (int i = 1; i <= pr.m; ++i) {
        double hlo = directed_power(lo, n, i, false)[i];
        double hhi = directed_power(hi, n, i, true)[i];
        // derivative of the i-th coefficient with respect to a_i is n a_0^(n-1)
        double dlo = 1.0, dhi = 1.0;
        for (int k = 0; k < n - 1; ++k) {
            dlo = down(dlo * i0.lo);
            dhi = up(dhi * i0.hi);
        }
        dlo = down(dlo * n);
        dhi = up(dhi * n);
        double num_lo = down(down(pr.plo[i] - pr.epshi) - hhi);
        double num_hi = up(up(pr.phi[i] + pr.epshi) - hlo);
        Interval ai;
        ai.lo = num_lo <= 0 ? 0.0 : down(num_lo / dhi);
        if (dlo <= 0)
            ai.hi = 1.0;
        else
            ai.hi = num_hi < 0 ? -1.0 : up(num_hi / dlo);
        ai.lo = std::max(ai.lo, 0.0);
        ai.hi = std::min(ai.hi, 1.0);
        box.intervals[i] = ai;
        if (ai.empty()) {
            box.empty_at = i;
            return box;
        }
        lo.push_back(ai.lo);
        hi.push_back(ai.hi);
    }
    // coefficients past the root degree involve no new unknowns
    std::vector<double> clo = directed_power(lo, n, pr.top, false);
    std::vector<double> chi = directed_power(hi, n, pr.top, true);
    for (int i = 0; i <= pr.top; ++i) {
        double tlo = down(pr.plo[i] - pr.epshi), thi = up(pr.phi[i] + pr.epshi);
        if (chi[i] < tlo || clo[i] > thi) {
            box.empty_at = pr.m + 1;
            return box;
        }
    }
    double slo = 0, shi = 0;
    for (int i = 0; i <= pr.m; ++i) {
        slo = down(slo + lo[i]);
        shi = up(shi + hi[i]);
    }
    if (slo > 1.0 || shi < 1.0) box.empty_at = pr.m + 1;
    return box;
}

Interval first_interval(const Problem& pr)
{
    double inv = 1.0 / pr.n;
    double a = std::max(0.0, pr.plo[0] - pr.epshi);
    double b = std::min(1.0, pr.phi[0] + pr.epshi);
    return Interval{std::max(0.0, down(std::pow(a, inv)) * (1 - 1e-15)),
                    std::min(1.0, up(std::pow(b, inv)) * (1 + 1e-15))};
}

double objective(const Problem& pr, const std::vector<double>& w)
{
    std::vector<double> c = plain_power(w, pr.n);
    double m = 0;
    for (int i = 0; i <= pr.top; ++i) m = std::max(m, std::fabs(c[i] - pr.p[i]));
    return m;
}

bool normalize_in_place(std::vector<double>& w)
{
    double s = 0;
    for (double& x : w) {
        x = std::max(0.0, x);
        s += x;
    }
    if (!(s > 0)) return false;
    for (double& x : w) x /= s;
    return true;
}

// Coefficient matching from a fixed a_0 upward, then normalization.
std::vector<double> greedy(const Problem& pr, double a0)
{
    std::vector<double> w{a0};
    double deriv = pr.n * std::pow(a0, pr.n - 1);
    for (int i = 1; i <= pr.m; ++i) {
        std::vector<double> c = plain_power(w, pr.n);
        double h = i < static_cast<int>(c.size()) ? c[i] : 0.0;
        double ai = deriv > 0 ? (pr.p[i] - h) / deriv : 0.0;
        w.push_back(std::clamp(ai, 0.0, 1.0));
    }
    if (!normalize_in_place(w)) w.assign(pr.m + 1, 1.0 / (pr.m + 1));
    return w;
}

// Deterministic pattern search on the simplex for the max-norm objective.
std::vector<double> polish(const Problem& pr, std::vector<double> w, double& best)
{
    int k = static_cast<int>(w.size());
    if (k < 2) {
        best = objective(pr, w);
        return w;
    }
    std::vector<std::vector<double>> dirs;
    for (int i = 0; i < k; ++i)
        for (int j = 0; j < k; ++j)
            if (i != j) {
                std::vector<double> v(k, 0.0);
                v[i] = 1;
                v[j] = -1;
                dirs.push_back(v);
            }
    unsigned long long state = 0x9E3779B97F4A7C15ull;
    for (int r = 0; r < 4 * k; ++r) {
        std::vector<double> v(k);
        double mean = 0;
        for (int i = 0; i < k; ++i) {
            state = state * 6364136223846793005ull + 1442695040888963407ull;
            v[i] = static_cast<double>(state >> 11) / 9007199254740992.0 - 0.5;
            mean += v[i];
        }
        mean /= k;
        double nrm = 0;
        for (double& x : v) {
            x -= mean;
            nrm = std::max(nrm, std::fabs(x));
        }
        if (nrm > 0) {
            for (double& x : v) x /= nrm;
            dirs.push_back(v);
        }
    }
    best = objective(pr, w);
    double step = 0.05;
    while (step > 1e-13) {
        bool moved = false;
        for (const auto& v : dirs) {
            std::vector<double> t(w);
            bool ok = true;
            for (int i = 0; i < k; ++i) {
                t[i] += step * v[i];
                if (t[i] < 0) {
                    if (t[i] < -1e-300) ok = false;
                    t[i] = 0;
                }
            }
            if (!ok) continue;
            double f = objective(pr, t);
            if (f < best) {
                best = f;
                w = std::move(t);
                moved = true;
            }
        }
        if (!moved) step *= 0.5;
    }
    return w;
}

std::optional<FiniteDistribution> verify(const FiniteDistribution& d, int n,
                                         const Rational& eps, const std::vector<double>& w)
{
    std::vector<Rational> q;
    Rational s = 0;
    for (double x : w) {
        q.push_back(from_double(std::max(0.0, x)));
        s += q.back();
    }
    if (s == 0) return std::nullopt;
    for (auto& x : q) x /= s;
    while (!q.empty() && q.back() == 0) q.pop_back();
    std::size_t lead = 0;
    while (lead < q.size() && q[lead] == 0) ++lead;
    // leading zeros would shift the n-fold sum by n*lead
    if (lead > 0) return std::nullopt;
    FiniteDistribution cand = FiniteDistribution::from_aligned(q);
    Poly pw = pow(to_char_poly(cand), static_cast<unsigned>(n));
    if (linf_distance(pw.c, d.probs()) < eps) return cand;
    return std::nullopt;
}

void simplex_grid(int k, int res, std::vector<int>& cur, int left,
                  std::vector<std::vector<double>>& out)
{
    if (static_cast<int>(cur.size()) == k - 1) {
        cur.push_back(left);
        std::vector<double> w(k);
        for (int i = 0; i < k; ++i) w[i] = static_cast<double>(cur[i]) / res;
        out.push_back(std::move(w));
        cur.pop_back();
        return;
    }
    for (int t = 0; t <= left; ++t) {
        cur.push_back(t);
        simplex_grid(k, res, cur, left - t, out);
        cur.pop_back();
    }
}

} // namespace

std::optional<Poly> nth_root_exact(const Poly& f, int n)
{
    check_n(n);
    if (f.is_zero()) fail(Errc::AllZero, "zero polynomial");
    if (!f.nonnegative()) fail(Errc::NegativeCoefficient, "polynomial has a negative coefficient");
    int N = f.degree();
    if (N % n != 0) fail(Errc::DegreeNotDivisible, "degree is not a multiple of n");
    int m = N / n;
    Poly F = monic(f);
    // reversed monic polynomial A(y) = 1 + a_1 y + ...; its 1/n-th power series gives
    // the root coefficients from the top down
    std::vector<Rational> a(N + 1);
    for (int k = 0; k <= N; ++k) a[k] = F.c[N - k];
    Rational alpha1 = Rational(1, n) + 1;
    alpha1.canonicalize();
    std::vector<Rational> q(m + 1);
    q[0] = 1;
    for (int k = 1; k <= m; ++k) {
        Rational s = 0;
        for (int j = 1; j <= k; ++j) {
            if (a[j] == 0 || q[k - j] == 0) continue;
            s += (alpha1 * j - k) * a[j] * q[k - j];
        }
        q[k] = s / k;
    }
    std::vector<Rational> g(m + 1);
    for (int k = 0; k <= m; ++k) g[m - k] = q[k];
    Poly root(std::move(g));
    if (!root.nonnegative()) return std::nullopt;
    if (!(pow(root, static_cast<unsigned>(n)) == F)) return std::nullopt;
    return canonical(root);
}

DivisibilityVerdict is_n_divisible(const FiniteDistribution& d, int n)
{
    check_n(n);
    DivisibilityVerdict v;
    int w = d.width();
    // the summands must be non-constant, and an n-fold sum has n times their width
    if (w == 0 || w % n != 0) return v;
    auto root = nth_root_exact(to_char_poly(d), n);
    if (!root) return v;
    v.yes = true;
    v.witness = from_char_poly(*root);
    return v;
}

IntervalBox propagate_intervals(const FiniteDistribution& d, int n, double eps, Interval first)
{
    check_n(n);
    Problem pr = make_problem(d, n, from_double(eps));
    return propagate(pr, first);
}

EpsResult divisibility_eps(const FiniteDistribution& d, int n, const Rational& eps,
                           const EpsOptions& opt)
{
    check_n(n);
    if (eps <= 0) fail(Errc::InvalidEpsilon, "epsilon must be positive");
    EpsResult res;
    Problem pr = make_problem(d, n, eps);
    res.box = propagate(pr, first_interval(pr));
    if (res.box.empty()) return res;

    auto accept = [&](const std::vector<double>& w) {
        if (objective(pr, w) >= pr.eps * (1 + 1e-12) + 1e-300) return false;
        auto wit = verify(d, n, eps, w);
        if (!wit) return false;
        res.verdict.yes = true;
        res.verdict.witness = *wit;
        return true;
    };

    std::vector<std::pair<double, std::vector<double>>> pool;
    auto consider = [&](std::vector<double> w) {
        if (!normalize_in_place(w)) return false;
        double f = objective(pr, w);
        pool.emplace_back(f, w);
        return accept(w);
    };

    {
        std::vector<double> mid;
        for (const auto& iv : res.box.intervals) mid.push_back(0.5 * (iv.lo + iv.hi));
        if (consider(mid)) return res;
        const Interval& i0 = res.box.intervals[0];
        if (consider(greedy(pr, 0.5 * (i0.lo + i0.hi)))) return res;
    }

    // bisection of I_0: breadth first, keeping only cells whose boxes stay nonempty
    std::vector<Interval> cells{res.box.intervals[0]};
    int examined = 0;
    for (int depth = 1; depth <= opt.bisection_depth && !cells.empty(); ++depth) {
        std::vector<Interval> next;
        for (const auto& c : cells) {
            double mid = 0.5 * (c.lo + c.hi);
            for (Interval half : {Interval{c.lo, mid}, Interval{mid, c.hi}}) {
                if (examined >= opt.max_cells) break;
                ++examined;
                IntervalBox b = propagate(pr, half);
                if (b.empty()) continue;
                std::vector<double> w;
                for (const auto& iv : b.intervals) w.push_back(0.5 * (iv.lo + iv.hi));
                if (consider(w)) return res;
                if (consider(greedy(pr, 0.5 * (half.lo + half.hi)))) return res;
                next.push_back(half);
            }
        }
        cells = std::move(next);
        if (examined >= opt.max_cells) break;
    }

    if (pr.m + 1 <= 4) {
        int res_grid = pr.m + 1 <= 2 ? 64 : (pr.m + 1 == 3 ? 32 : 16);
        std::vector<std::vector<double>> grid;
        std::vector<int> cur;
        simplex_grid(pr.m + 1, res_grid, cur, res_grid, grid);
        for (auto& w : grid) {
            if (w[0] == 0 || w.back() == 0) continue;
            pool.emplace_back(objective(pr, w), w);
        }
    }

    std::sort(pool.begin(), pool.end(),
              [](const auto& x, const auto& y) { return x.first < y.first; });
    std::size_t tries = std::min<std::size_t>(pool.size(), 6);
    for (std::size_t t = 0; t < tries; ++t) {
        double f = 0;
        std::vector<double> w = polish(pr, pool[t].second, f);
        if (accept(w)) return res;
    }
    return res;
}

bool weak_divisibility(const FiniteDistribution& d, int n, const Rational& eps)
{
    return divisibility_eps(d, n, eps).verdict.yes;
}

ClosestResult closest_divisible(const FiniteDistribution& d, int n, const Rational& precision)
{
    if (precision <= 0) fail(Errc::InvalidEpsilon, "precision must be positive");
    auto exact = is_n_divisible(d, n);
    if (exact.yes) return ClosestResult{*exact.witness, 0, 0};
    Rational lo = 0, hi = 2;
    // at margin 2 every pmf of the right length qualifies
    EpsResult top = divisibility_eps(d, n, hi);
    FiniteDistribution wit = top.verdict.witness ? *top.verdict.witness : d;
    while (hi - lo > precision) {
        Rational mid = (lo + hi) / 2;
        EpsResult r = divisibility_eps(d, n, mid);
        if (r.verdict.yes) {
            hi = mid;
            wit = *r.verdict.witness;
        } else {
            lo = mid;
        }
    }
    return ClosestResult{wit, hi, lo};
}

} // namespace divisikit
