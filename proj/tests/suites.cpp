#include "suites.hpp"

#include "divisikit/cptp.hpp"
#include "divisikit/decompose.hpp"
#include "divisikit/divisibility.hpp"
#include "divisikit/error.hpp"
#include "divisikit/nptools.hpp"
#include "divisikit/roots.hpp"
#include "divisikit/sat.hpp"
#include "support.hpp"

#include <chrono>
#include <functional>
#include <set>
#include <sstream>

using namespace divisikit;

namespace suites {

namespace {

using Rng = std::mt19937_64;

std::string fmt(const char* f, auto... xs)
{
    char buf[256];
    std::snprintf(buf, sizeof buf, f, xs...);
    return buf;
}

// ---- divisibility ----

FiniteDistribution rand_root(Rng& rng, int width)
{
    std::vector<Rational> raw(width + 1);
    for (int i = 0; i <= width; ++i) {
        raw[i] = testsupport::rand_rational(rng, 12, 0, 1);
        if ((i == 0 || i == width) && raw[i] == 0) raw[i] = Rational(1, 7);
    }
    return normalize_distribution(raw).dist;
}

// An n-th root of a polynomial is fixed by its top width/n + 1 coefficients (after making it
// monic), so changing only the constant term of a power leaves no root at all.
FiniteDistribution break_power(Rng& rng, const FiniteDistribution& d)
{
    std::vector<Rational> p = d.probs();
    Rational f;
    do f = testsupport::rand_rational(rng, 9, 1, 3) / 2; while (f == 1);
    p[0] *= f;
    return normalize_distribution(p).dist;
}

Outcome divisibility_suite(Rng& rng)
{
    Outcome o;
    int recovered = 0, rejected = 0, total = 1000;
    for (int t = 0; t < total; ++t) {
        int n = t % 3 == 0 ? 2 : t % 3 == 1 ? 3 : 5;
        auto g = rand_root(rng, 1 + static_cast<int>(rng() % 20));
        auto d = convolve_power(g, static_cast<unsigned>(n));
        auto v = is_n_divisible(d, n);
        recovered += v.yes && v.witness && *v.witness == g;
        auto bad = break_power(rng, d);
        auto w = is_n_divisible(bad, n);
        rejected += !w.yes;
    }
    o.correct = recovered == total && rejected == total;
    o.detail = fmt("%d/%d powers recovered exactly, %d/%d non-powers rejected", recovered, total, rejected, total);
    return o;
}

Outcome uniform_suite(Rng&)
{
    Outcome o;
    int checks = 0, false_yes = 0;
    for (int k = 2; k <= 30; ++k)
        for (int n = 2; n <= 30; ++n) {
            ++checks;
            false_yes += is_n_divisible(testsupport::uniform(k), n).yes;
        }
    o.correct = false_yes == 0;
    o.detail = fmt("%d (points, n) pairs, %d accepted", checks, false_yes);
    return o;
}

Outcome eps_suite(Rng& rng)
{
    Outcome o;
    const double step = 1e-3;
    int compared = 0, excluded = 0, agree = 0;
    std::string first_bad;
    for (int t = 0; t < 100; ++t) {
        auto d = testsupport::rand_pmf(rng, 1 + t % 4);
        double gm = testsupport::grid_min_distance(d, 2, step);
        for (const char* e : {"1/1000", "1/100", "1/10"}) {
            Rational eps(e);
            if (std::fabs(gm - eps.get_d()) <= 2 * step) {
                ++excluded;
                continue;
            }
            ++compared;
            bool want = gm <= eps.get_d();
            bool got = divisibility_eps(d, 2, eps).verdict.yes;
            if (got == want) ++agree;
            else if (first_bad.empty()) first_bad = fmt(" (first mismatch: instance %d, eps %s)", t, e);
        }
    }
    o.correct = agree == compared;
    o.detail = fmt("%d/%d agree, %d boundary cases excluded", agree, compared, excluded) + first_bad;
    return o;
}

// ---- subset sum: exhaustive integer oracle ----

struct IntInstance {
    std::vector<long long> el;
    long long bound = 0, lo = 0, hi = 0;  // all scaled by the common denominator
};

IntInstance scaled(const SubsetSumInstance& s)
{
    std::vector<Rational> all = s.elements;
    all.push_back(s.bound);
    all.push_back(s.window_lo);
    all.push_back(s.window_hi);
    Integer l = lcm_of_denominators(all);
    auto conv = [&](const Rational& q) {
        Rational x = q * Rational(l);
        if (!x.get_num().fits_slong_p()) fail(Errc::ParseError, "oracle overflow");
        return static_cast<long long>(x.get_num().get_si());
    };
    IntInstance r;
    for (const auto& x : s.elements) r.el.push_back(conv(x));
    r.bound = conv(s.bound);
    r.lo = conv(s.window_lo);
    r.hi = conv(s.window_hi);
    return r;
}

// T ranges over subsets; difference = sum(T) - sum(complement).
bool brute_subset(const SubsetSumInstance& s, bool allow_empty = false)
{
    IntInstance in = scaled(s);
    int n = static_cast<int>(in.el.size());
    long long total = 0;
    for (auto x : in.el) total += x;
    int want_k = -1;
    if (s.variant == SubsetVariant::Even) {
        if (n % 2) return false;
        want_k = n / 2;
    }
    if (s.variant == SubsetVariant::M || s.variant == SubsetVariant::SignedM) want_k = s.m;
    auto ok = [&](int k, long long sum) {
        long long d = 2 * sum - total;
        if (want_k >= 0 && k != want_k) return false;
        if (s.variant == SubsetVariant::SignedM) return (k > 0 || s.m == 0) && in.lo < d && d < in.hi;
        if (k == 0 && !allow_empty) return false;
        if (s.variant != SubsetVariant::Even && k == n) return false;
        return (d < 0 ? -d : d) < in.bound;
    };
    std::function<bool(int, int, long long)> go = [&](int i, int k, long long sum) {
        if (want_k >= 0 && (k > want_k || k + (n - i) < want_k)) return false;
        if (i == n) return ok(k, sum);
        return go(i + 1, k + 1, sum + in.el[i]) || go(i + 1, k, sum);
    };
    return go(0, 0, 0);
}

bool brute_partition(const PartitionInstance& p)
{
    SubsetSumInstance s;
    s.elements = p.elements;
    IntInstance in = scaled(s);
    long long total = 0;
    for (auto x : in.el) total += x;
    int n = static_cast<int>(in.el.size());
    for (unsigned long mask = 0; mask < (1ul << n); ++mask) {
        long long sum = 0;
        for (int i = 0; i < n; ++i)
            if (mask >> i & 1) sum += in.el[i];
        if (2 * sum == total) return true;
    }
    return false;
}

std::vector<Rational> rand_elements(Rng& rng, int n, long lo, long hi, long max_den = 3)
{
    std::vector<Rational> v;
    for (int i = 0; i < n; ++i) v.push_back(testsupport::rand_rational(rng, max_den, lo, hi));
    return v;
}

Rational rand_bound(Rng& rng, long hi)
{
    Rational l = testsupport::rand_rational(rng, 4, 0, hi);
    return l == 0 ? Rational(1, 4) : l;
}

SubsetSumInstance make_instance(std::vector<Rational> el, Rational l, SubsetVariant v, int m = -1)
{
    SubsetSumInstance s;
    s.elements = std::move(el);
    s.bound = l;
    s.variant = v;
    s.m = m;
    return s;
}

Outcome even_suite(Rng& rng)
{
    Outcome o;
    int agree = 0, yes = 0, total = 200;
    for (int t = 0; t < total; ++t) {
        int n = 2 * (1 + t % 4);
        auto s = make_instance(rand_elements(rng, n, -5, 5), rand_bound(rng, 4), SubsetVariant::Even);
        bool want = brute_subset(s);
        yes += want;
        agree += decompose_even(encode_even_subset_sum(s).dist).has_value() == want;
    }
    o.correct = agree == total;
    o.detail = fmt("%d/%d agree (%d yes instances)", agree, total, yes);
    return o;
}

Outcome counterexample_suite(Rng&)
{
    Outcome o;
    o.correct = true;
    const double tol = 1e-9;
    std::ostringstream det;
    long need = 1;
    for (int n = 1; n <= 3; ++n) {
        need *= n;
        auto p = counterexample_family(n);
        auto all = enumerate_complete_decompositions(p, tol, 1000);
        std::set<std::vector<std::vector<Rational>>> distinct;
        bool products_ok = true;
        for (const auto& g : all.groupings) {
            std::vector<std::vector<Rational>> key;
            FiniteDistribution acc;
            for (const auto& x : g) {
                key.push_back(x.probs());
                acc = convolve(acc, x);
            }
            std::sort(key.begin(), key.end());
            distinct.insert(key);
            products_ok = products_ok && acc.size() == p.size();
            for (std::size_t i = 0; products_ok && i < p.size(); ++i)
                products_ok = std::fabs(to_double(acc[i] - p[i])) <= tol;
        }
        bool ok = static_cast<long>(distinct.size()) >= need && products_ok;
        o.correct = o.correct && ok;
        det << (n > 1 ? ", " : "") << "n=" << n << ": " << distinct.size() << " (need " << need << ")";
    }
    o.detail = det.str();
    return o;
}

// ---- matrices ----

Rational det(RationalMatrix m)
{
    int n = m.dim();
    Rational r = 1;
    for (int c = 0; c < n; ++c) {
        int p = -1;
        for (int i = c; i < n; ++i)
            if (m(i, c) != 0) { p = i; break; }
        if (p < 0) return 0;
        if (p != c) {
            for (int j = 0; j < n; ++j) std::swap(m(p, j), m(c, j));
            r = -r;
        }
        r *= m(c, c);
        for (int i = c + 1; i < n; ++i) {
            Rational f = m(i, c) / m(c, c);
            for (int j = c; j < n; ++j) m(i, j) -= f * m(c, j);
        }
    }
    return r;
}

double square_deviation(const NumericMatrix& q, const RationalMatrix& p)
{
    double worst = 0;
    int d = q.dim;
    for (int i = 0; i < d; ++i)
        for (int j = 0; j < d; ++j) {
            double s = 0;
            for (int k = 0; k < d; ++k) s += q(i, k) * q(k, j);
            worst = std::max(worst, std::fabs(s - p(i, j).get_d()));
        }
    return worst;
}

bool numerically_stochastic(const NumericMatrix& q, double tol)
{
    for (int i = 0; i < q.dim; ++i) {
        double s = 0;
        for (int j = 0; j < q.dim; ++j) {
            if (q(i, j) < -tol) return false;
            s += q(i, j);
        }
        if (std::fabs(s - 1) > tol) return false;
    }
    return true;
}

template <class F>
bool degenerate(F&& f)
{
    try {
        f();
        return false;
    } catch (const Error& e) {
        if (e.code() != Errc::DegenerateSpectrum) throw;
        return true;
    }
}

Outcome stochastic_root_suite(Rng& rng)
{
    Outcome o;
    const double tol = 1e-9;
    int found = 0, skipped = 0, total = 500;
    double worst = 0;
    for (int t = 0; t < total;) {
        int d = 1 + static_cast<int>(rng() % 5);
        auto q = testsupport::rand_stochastic(rng, d, 9, 0.2);
        auto p = q * q;
        std::optional<RootMatch> hit;
        if (degenerate([&] { hit = find_stochastic_root(p); })) {
            ++skipped;
            continue;
        }
        ++t;
        if (!hit) continue;
        double dev = square_deviation(hit->root, p);
        worst = std::max(worst, dev);
        found += dev <= tol && numerically_stochastic(hit->root, tol);
    }

    // Negatives: a real square root would force det >= 0. Swap-like involutions mixed with a
    // little noise keep a negative determinant.
    int rejected = 0, negatives = 0;
    auto swap = RationalMatrix::from_rows({{0, 1}, {1, 0}});
    if (!find_stochastic_root(swap)) ++rejected;
    ++negatives;
    while (negatives < 51) {
        int d = 2 + static_cast<int>(rng() % 4);
        std::vector<int> perm(d);
        for (int i = 0; i < d; ++i) perm[i] = i;
        std::shuffle(perm.begin(), perm.end(), rng);
        RationalMatrix inv(d);
        std::vector<bool> used(d);
        int swaps = 0;
        for (int i = 0; i + 1 < d; i += 2) {
            if (swaps == 0 || rng() % 2) {
                inv(perm[i], perm[i + 1]) = inv(perm[i + 1], perm[i]) = 1;
                used[perm[i]] = used[perm[i + 1]] = true;
                ++swaps;
            }
        }
        for (int i = 0; i < d; ++i)
            if (!used[i]) inv(i, i) = 1;
        Rational mix = testsupport::rand_rational(rng, 20, 0, 1) / 5;
        auto p = (1 - mix) * inv + mix * testsupport::rand_stochastic(rng, d, 9);
        if (det(p) >= 0) continue;
        std::optional<RootMatch> hit;
        if (degenerate([&] { hit = find_stochastic_root(p); })) continue;
        ++negatives;
        rejected += !hit;
    }
    o.correct = found == total && rejected == negatives;
    o.detail = fmt("%d/%d roots found (max deviation %.2e, %d degenerate draws skipped), %d/%d negatives rejected",
                   found, total, worst, skipped, rejected, negatives);
    return o;
}

RationalMatrix lift_reference(const RationalMatrix& m, const Rational& a)
{
    int d = m.dim();
    RationalMatrix q(3 * d);
    Rational c[3][3][2] = {{{1764, 637}, {-1260, 735}, {-504, 392}},
                           {{-1260, 735}, {900, 1029}, {360, 0}},
                           {{-504, 392}, {360, 0}, {144, 1372}}};
    for (int r = 0; r < 3; ++r)
        for (int s = 0; s < 3; ++s)
            for (int i = 0; i < d; ++i)
                for (int j = 0; j < d; ++j)
                    q(r * d + i, s * d + j) = (c[r][s][0] * a * m(i, j) + c[r][s][1]) / (1764 * d);
    return q;
}

Outcome lift_suite(Rng& rng)
{
    Outcome o;
    int ok = 0, total = 100, negative_inputs = 0;
    for (int t = 0; t < total; ++t) {
        int d = 1 + t % 4;
        auto m = testsupport::rand_matrix(rng, d, 5, t % 3 == 0 ? -1 : 0, 2);
        if (m.max_entry() <= 0) m(0, 0) = 1;
        auto l = lift_nonneg_to_stochastic(m);
        bool good = l.a * m.max_entry() == Rational(1, 2) && l.lifted == lift_reference(m, l.a);
        bool lifted_nonneg = true, m_nonneg = true;
        for (int i = 0; i < 3 * d; ++i) {
            Rational rs = 0, cs = 0;
            for (int j = 0; j < 3 * d; ++j) {
                rs += l.lifted(i, j);
                cs += l.lifted(j, i);
                lifted_nonneg = lifted_nonneg && l.lifted(i, j) >= 0;
            }
            good = good && rs == 1 && cs == 1;
        }
        for (const auto& x : m.entries()) m_nonneg = m_nonneg && x >= 0;
        negative_inputs += !m_nonneg;
        good = good && lifted_nonneg == m_nonneg && l.lifted * l.lifted == lifted_square(m);
        ok += good;
    }
    o.correct = ok == total;
    o.detail = fmt("%d/%d matrices satisfy all identities (%d with negative entries)", ok, total, negative_inputs);
    return o;
}

Outcome cptp_suite(Rng& rng)
{
    Outcome o;
    int cptp_ok = 0, agree = 0, yes = 0, total = 200;
    for (int t = 0; t < total;) {
        int d = 1 + static_cast<int>(rng() % 4);
        auto p = testsupport::rand_stochastic(rng, d, 9, 0.2);
        if (t % 2) p = p * p;
        std::optional<RootMatch> s;
        if (degenerate([&] { s = find_stochastic_root(p); })) continue;
        ++t;
        auto b = emb(p);
        cptp_ok += is_cptp(b).cptp;
        auto c = find_cptp_root(b);
        agree += c.has_value() == s.has_value();
        yes += s.has_value();
    }
    int traces = 0;
    for (int t = 0; t < 200; ++t) {
        int d = 1 + t % 4;
        auto a = testsupport::rand_matrix(rng, d, 6, -3, 3);
        auto c = choi(emb(a));
        std::vector<Rational> row(d);
        for (int i = 0; i < d; ++i)
            for (int j = 0; j < d; ++j) row[i] += a(i, j);
        // library partial trace, and the same sum written out directly
        auto t2 = partial_trace_second(ComplexRationalMatrix(c));
        bool ok = true;
        for (int i = 0; i < d; ++i)
            for (int k = 0; k < d; ++k) {
                Rational want = i == k ? row[i] : Rational(0);
                Rational s = 0;
                for (int j = 0; j < d; ++j) s += c(i * d + j, k * d + j);
                ok = ok && s == want && t2(i, k).re == want && t2(i, k).im == 0;
            }
        traces += ok;
    }
    o.correct = cptp_ok == total && agree == total && traces == 200;
    o.detail = fmt("%d/%d embeddings CPTP, %d/%d root verdicts agree (%d yes), %d/200 partial traces exact",
                   cptp_ok, total, agree, total, yes, traces);
    return o;
}

// ---- SAT ----

Outcome sat_suite(Rng& rng)
{
    Outcome o;
    SatInstance us;
    us.n_v = 4;
    for (auto c : {std::array<int, 3>{1, 2, 4}, {2, 3, 4}, {1, 3, 4}, {1, 2, 3}})
        us.clauses.push_back({Literal{c[0], true}, Literal{c[1], true}, Literal{c[2], true}});
    bool us_brute = testsupport::brute_sat(us);
    bool us_enc = assemble_family(us).exists_nonnegative_branch();

    int agree = 0, yes = 0, total = 100;
    for (int t = 0; t < total; ++t) {
        int n_v = 3 + (t / 5) % 2;
        int n_c = t % 5;
        auto inst = testsupport::rand_sat(rng, n_v, n_c, 0.3);
        bool want = testsupport::brute_sat(inst);
        yes += want;
        agree += assemble_family(inst).exists_nonnegative_branch() == want;
    }
    o.correct = agree == total && !us_brute && !us_enc;
    o.detail = fmt("%d/%d random instances agree (%d satisfiable); unsatisfiable 4x4 instance: encoder %s, brute force %s",
                   agree, total, yes, us_enc ? "yes" : "no", us_brute ? "yes" : "no");
    return o;
}

// ---- reductions ----

Outcome reductions_suite(Rng& rng)
{
    Outcome o;
    int pad = 0, resc = 0, part = 0, prog = 0, prog_yes = 0;
    for (int t = 0; t < 200; ++t) {
        auto s = make_instance(rand_elements(rng, 1 + static_cast<int>(rng() % 10), -10, 10), rand_bound(rng, 8),
                               SubsetVariant::Plain);
        // the padded half may consist of zeros only, i.e. T may be empty on the original side
        pad += brute_subset(pad_to_even(s)) == brute_subset(s, true);
    }
    for (int t = 0; t < 200; ++t) {
        Rational a = testsupport::rand_rational(rng, 4, -3, 3);
        if (a == 0) a = Rational(-1, 2);
        SubsetSumInstance s;
        Rational c = 0;
        if (t % 2) {
            s = make_instance(rand_elements(rng, 2 * (1 + static_cast<int>(rng() % 5)), -10, 10), rand_bound(rng, 8),
                              SubsetVariant::Even);
            c = testsupport::rand_rational(rng, 4, -5, 5);
        } else {
            s = make_instance(rand_elements(rng, 1 + static_cast<int>(rng() % 10), -10, 10), rand_bound(rng, 8),
                              SubsetVariant::Plain);
        }
        resc += brute_subset(rescale_instance(s, a, c)) == brute_subset(s);
    }
    for (int t = 0; t < 200; ++t) {
        PartitionInstance p;
        for (int i = 0, n = 1 + static_cast<int>(rng() % 10); i < n; ++i) {
            Rational x = testsupport::rand_rational(rng, 2, 1, 6);
            p.elements.push_back(x == 0 ? Rational(1) : x);
        }
        part += brute_subset(partition_to_subset_sum(p)) == brute_partition(p);
    }
    for (int t = 0; t < 200;) {
        int n = 2 + static_cast<int>(rng() % 9);
        int m = 1 + static_cast<int>(rng() % (n - 1));
        if (2 * m == n) continue;
        ++t;
        auto s = make_instance(rand_elements(rng, n, -10, 10), rand_bound(rng, 10), SubsetVariant::M, m);
        auto pr = subset_sum_m_program(s, m);
        bool got = false;
        for (const auto& term : pr.terms) got = got || brute_subset(term.instance);
        bool want = brute_subset(s);
        prog_yes += want;
        prog += got == want;
    }
    o.correct = pad == 200 && resc == 200 && part == 200 && prog == 200;
    o.detail = fmt("pad_to_even %d/200, rescale_instance %d/200, partition_to_subset_sum %d/200, "
                   "subset_sum_m_program %d/200 (%d yes)",
                   pad, resc, part, prog, prog_yes);
    return o;
}

struct Entry {
    const char* name;
    double limit;
    Outcome (*run)(Rng&);
};

const Entry kSuites[kCount] = {
    {"divisibility completeness and soundness", 60, divisibility_suite},
    {"uniform dice are not divisible", 5, uniform_suite},
    {"eps-divisibility vs grid oracle", 600, eps_suite},
    {"even decomposability vs Even Subset Sum", 300, even_suite},
    {"counterexample family decompositions", 120, counterexample_suite},
    {"stochastic root completeness", 120, stochastic_root_suite},
    {"lift identities", 60, lift_suite},
    {"CPTP equivalence", 120, cptp_suite},
    {"1-in-3-SAT embedding equivalence", 600, sat_suite},
    {"subset-sum reductions preserve verdicts", 300, reductions_suite},
};

} // namespace

std::string suite_name(int id)
{
    return kSuites[id - 1].name;
}

Outcome run_suite(int id, const SuiteConfig& cfg)
{
    const Entry& e = kSuites[id - 1];
    Rng rng(cfg.seed + static_cast<std::uint64_t>(id));
    auto t0 = std::chrono::steady_clock::now();
    Outcome o;
    try {
        o = e.run(rng);
    } catch (const Error& err) {
        o.correct = false;
        o.detail = std::string("error ") + errc_name(err.code()) + ": " + err.what();
    } catch (const std::exception& err) {
        o.correct = false;
        o.detail = std::string("exception: ") + err.what();
    }
    o.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    o.id = id;
    o.name = e.name;
    o.limit_seconds = e.limit;
    return o;
}

} // namespace suites
