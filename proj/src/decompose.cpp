#include "divisikit/decompose.hpp"
#include "divisikit/error.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <map>
#include <set>

namespace divisikit {

namespace {

struct Atom {
    int type = 0;
    std::vector<Rational> c;  // monic
    std::vector<double> dc;
    int degree() const { return static_cast<int>(c.size()) - 1; }
};

struct Atoms {
    std::vector<Atom> list;
    std::vector<int> first_of_type;
    std::vector<int> mult_of_type;
    bool exact = false;
};

Atom make_atom(int type, std::vector<Rational> c)
{
    Atom a;
    a.type = type;
    a.c = std::move(c);
    for (const auto& x : a.c) a.dc.push_back(x.get_d());
    return a;
}

Atoms atoms_from(const RealFactorization& rf)
{
    Atoms at;
    at.exact = rf.exact;
    int type = 0;
    for (const auto& f : rf.factors) {
        at.first_of_type.push_back(static_cast<int>(at.list.size()));
        at.mult_of_type.push_back(f.multiplicity);
        for (int k = 0; k < f.multiplicity; ++k) at.list.push_back(make_atom(type, f.coeffs));
        ++type;
    }
    return at;
}

Atoms factor_atoms(const FiniteDistribution& d, double tol)
{
    if (d.width() < 1) return Atoms{};
    return atoms_from(factor_real(to_char_poly(d), 256, tol));
}

std::vector<double> dprod(const Atoms& at, const std::vector<int>& idx)
{
    std::vector<double> acc{1.0};
    for (int i : idx) {
        const auto& c = at.list[i].dc;
        std::vector<double> next(acc.size() + c.size() - 1, 0.0);
        for (std::size_t a = 0; a < acc.size(); ++a)
            for (std::size_t b = 0; b < c.size(); ++b) next[a + b] += acc[a] * c[b];
        acc = std::move(next);
    }
    return acc;
}

Poly rprod(const Atoms& at, const std::vector<int>& idx)
{
    Poly acc(std::vector<Rational>{1});
    for (int i : idx) acc = acc * Poly(at.list[i].c);
    return acc;
}

// Quick screen in double: every normalized coefficient at least -tol (with slack).
bool roughly_nonneg(const std::vector<double>& p, double tol)
{
    double s = 0;
    for (double x : p) s += x;
    if (!(s > 0)) return false;
    for (double x : p)
        if (x / s < -tol - 1e-9) return false;
    return true;
}

struct Side {
    FiniteDistribution dist;
    bool clamped = false;
    bool ok = false;
};

Side to_side(const Poly& p, double tol)
{
    Side s;
    Rational sum = 0;
    for (const auto& x : p.c) sum += x;
    if (sum <= 0) return s;
    Rational mtol = from_double(tol);
    std::vector<Rational> v;
    for (const auto& x : p.c) {
        Rational y = x / sum;
        if (y < 0) {
            if (-y > mtol) return s;
            y = 0;
            s.clamped = true;
        }
        v.push_back(y);
    }
    auto nd = normalize_distribution(v);
    if (nd.shift != 0 || nd.dist.width() < 1) return s;
    s.dist = nd.dist;
    s.ok = true;
    return s;
}

std::vector<int> complement(int n, const std::vector<int>& idx)
{
    std::vector<bool> in(n, false);
    for (int i : idx) in[i] = true;
    std::vector<int> out;
    for (int i = 0; i < n; ++i)
        if (!in[i]) out.push_back(i);
    return out;
}

// All sub-multisets (as canonical atom index lists), ordered by degree then lexicographically.
std::vector<std::vector<int>> ordered_subsets(const Atoms& at, const std::vector<int>& pool)
{
    // group pool atoms by type, keeping order
    std::map<int, std::vector<int>> by_type;
    for (int i : pool) by_type[at.list[i].type].push_back(i);
    std::vector<std::vector<int>> groups;
    for (auto& [t, v] : by_type) groups.push_back(v);
    std::vector<std::vector<int>> out;
    std::vector<int> counts(groups.size(), 0);
    while (true) {
        std::vector<int> idx;
        for (std::size_t g = 0; g < groups.size(); ++g)
            for (int k = 0; k < counts[g]; ++k) idx.push_back(groups[g][k]);
        std::sort(idx.begin(), idx.end());
        out.push_back(std::move(idx));
        std::size_t g = 0;
        while (g < groups.size() && counts[g] == static_cast<int>(groups[g].size())) counts[g++] = 0;
        if (g == groups.size()) break;
        ++counts[g];
    }
    auto deg = [&](const std::vector<int>& idx) {
        int s = 0;
        for (int i : idx) s += at.list[i].degree();
        return s;
    };
    std::stable_sort(out.begin(), out.end(), [&](const auto& a, const auto& b) {
        int da = deg(a), db = deg(b);
        if (da != db) return da < db;
        return a < b;
    });
    return out;
}

struct Filter {
    int left_degree = -1;   // required left degree, -1 for any
    int left_support = -1;  // required left support size, -1 for any
};

std::optional<Decomposition> try_split(const FiniteDistribution& d, const Atoms& at,
                                       const std::vector<int>& left, double tol,
                                       const Rational* eps, const Filter& filt)
{
    int n = static_cast<int>(at.list.size());
    std::vector<int> right = complement(n, left);
    if (left.empty() || right.empty()) return std::nullopt;
    if (filt.left_degree >= 0) {
        int dl = 0;
        for (int i : left) dl += at.list[i].degree();
        if (dl != filt.left_degree) return std::nullopt;
    }
    double screen = eps ? 1.0 : tol;
    if (!roughly_nonneg(dprod(at, left), screen) || !roughly_nonneg(dprod(at, right), screen))
        return std::nullopt;
    double side_tol = eps ? 1.0 : tol;
    Side l = to_side(rprod(at, left), side_tol), r = to_side(rprod(at, right), side_tol);
    if (!l.ok || !r.ok) return std::nullopt;
    if (filt.left_support >= 0 && static_cast<int>(l.dist.support_size()) != filt.left_support)
        return std::nullopt;
    Decomposition dec;
    dec.left = l.dist;
    dec.right = r.dist;
    dec.error = linf_distance(convolve(l.dist, r.dist).probs(), d.probs());
    dec.exact = dec.error == 0;
    if (eps) {
        if (!(dec.error < *eps)) return std::nullopt;
    } else if (dec.error > from_double(tol)) {
        return std::nullopt;
    }
    return dec;
}

std::optional<Decomposition> scan(const FiniteDistribution& d, const Atoms& at, double tol,
                                  const Rational* eps, const Filter& filt)
{
    int n = static_cast<int>(at.list.size());
    if (n < 2) return std::nullopt;
    std::vector<int> pool(n);
    for (int i = 0; i < n; ++i) pool[i] = i;
    for (const auto& left : ordered_subsets(at, pool)) {
        if (left.empty() || static_cast<int>(left.size()) == n) continue;
        auto r = try_split(d, at, left, tol, eps, filt);
        if (r) return r;
    }
    return std::nullopt;
}

void require_support(const FiniteDistribution& d)
{
    if (d.support_size() < 2) fail(Errc::InvalidSupportBound, "distribution must have at least two support points");
}

} // namespace

std::optional<Decomposition> decompose(const FiniteDistribution& d, double tol)
{
    require_support(d);
    return scan(d, factor_atoms(d, tol), tol, nullptr, Filter{});
}

std::optional<Decomposition> decompose_m(const FiniteDistribution& d, int m, double tol)
{
    require_support(d);
    if (m < 2 || m >= static_cast<int>(d.support_size()))
        fail(Errc::InvalidSupportBound, "m must satisfy 2 <= m < support size");
    Filter f;
    f.left_support = m;
    return scan(d, factor_atoms(d, tol), tol, nullptr, f);
}

std::optional<Decomposition> decompose_even(const FiniteDistribution& d, double tol)
{
    if (d.width() % 2 != 0) fail(Errc::OddDegree, "even decomposition needs an even degree");
    require_support(d);
    Filter f;
    f.left_degree = d.width() / 2;
    return scan(d, factor_atoms(d, tol), tol, nullptr, f);
}

std::optional<Decomposition> decompose_eps(const FiniteDistribution& d, const Rational& eps, double tol)
{
    if (eps <= 0) fail(Errc::InvalidEpsilon, "epsilon must be positive");
    if (d.width() < 2) return std::nullopt;
    Atoms at = factor_atoms(d, tol);
    if (auto r = scan(d, at, tol, &eps, Filter{})) return r;
    // split an irreducible quadratic into a nearby real-rooted one
    int next_type = 0;
    for (const auto& a : at.list) next_type = std::max(next_type, a.type + 1);
    std::set<int> seen;
    for (std::size_t j = 0; j < at.list.size(); ++j) {
        const Atom& q = at.list[j];
        if (q.degree() != 2 || !seen.insert(q.type).second) continue;
        double c = q.dc[0], b = q.dc[1];
        std::vector<double> roots;
        roots.push_back(std::sqrt(c));
        double B = 2 * b + 4, C = b * b - 4 * c;
        double u = (-B + std::sqrt(B * B - 4 * C)) / 2;
        if (b + u > 0 && c - u > 0) roots.push_back((b + u) / 2);
        for (double r : roots) {
            Atoms rel;
            for (std::size_t k = 0; k < at.list.size(); ++k)
                if (k != j) rel.list.push_back(at.list[k]);
            Rational rr = from_double(r);
            rel.list.push_back(make_atom(next_type, {rr, Rational(1)}));
            rel.list.push_back(make_atom(next_type, {rr, Rational(1)}));
            if (auto res = scan(d, rel, tol, &eps, Filter{})) return res;
        }
    }
    return std::nullopt;
}

bool weak_decomposability(const FiniteDistribution& d, const Rational& eps)
{
    return decompose_eps(d, eps).has_value();
}

CompleteDecompositions enumerate_complete_decompositions(const FiniteDistribution& d, double tol, int limit)
{
    if (limit < 1) fail(Errc::InvalidSupportBound, "limit must be positive");
    CompleteDecompositions out;
    if (d.width() < 1) {
        out.groupings.push_back({d});
        return out;
    }
    Atoms at = factor_atoms(d, tol);
    int n = static_cast<int>(at.list.size());
    if (n > 20) fail(Errc::InstanceTooLarge, "too many real factors for complete enumeration");
    unsigned full = (1u << n) - 1;

    auto members = [&](unsigned mask) {
        std::vector<int> idx;
        for (int i = 0; i < n; ++i)
            if (mask >> i & 1) idx.push_back(i);
        return idx;
    };
    std::vector<char> nonneg(full + 1, 0), valid(full + 1, 0);
    for (unsigned m = 1; m <= full; ++m) nonneg[m] = roughly_nonneg(dprod(at, members(m)), tol);
    for (unsigned m = 1; m <= full; ++m) {
        if (!nonneg[m]) continue;
        bool split = false;
        for (unsigned s = (m - 1) & m; s && !split; s = (s - 1) & m) split = nonneg[s] && nonneg[m ^ s];
        valid[m] = !split;
    }
    auto types_of = [&](unsigned mask) {
        std::vector<int> t;
        for (int i : members(mask)) t.push_back(at.list[i].type);
        return t;
    };

    std::set<std::vector<std::vector<int>>> seen;
    std::vector<std::vector<unsigned>> found;
    std::vector<unsigned> blocks;
    bool stop = false;
    // exact cover: the block holding the lowest uncovered atom is chosen next
    std::function<void(unsigned)> rec = [&](unsigned covered) {
        if (stop) return;
        if (covered == full) {
            std::vector<std::vector<int>> key;
            for (unsigned b : blocks) key.push_back(types_of(b));
            std::sort(key.begin(), key.end());
            if (!seen.insert(key).second) return;
            if (static_cast<int>(found.size()) >= limit) {
                out.truncated = true;
                stop = true;
                return;
            }
            found.push_back(blocks);
            return;
        }
        unsigned open = full & ~covered;
        unsigned low = open & -open;
        unsigned rest = open & ~low;
        for (unsigned s = rest;; s = (s - 1) & rest) {
            unsigned b = s | low;
            if (valid[b]) {
                blocks.push_back(b);
                rec(covered | b);
                blocks.pop_back();
                if (stop) return;
            }
            if (s == 0) break;
        }
    };
    rec(0);

    for (const auto& part : found) {
        std::vector<FiniteDistribution> dists;
        for (unsigned b : part) dists.push_back(to_side(rprod(at, members(b)), tol).dist);
        std::sort(dists.begin(), dists.end(), [](const auto& x, const auto& y) {
            if (x.size() != y.size()) return x.size() < y.size();
            return x.probs() < y.probs();
        });
        out.groupings.push_back(std::move(dists));
    }
    return out;
}

FiniteDistribution counterexample_family(int n, FamilyVariant v)
{
    if (n < 1) fail(Errc::InvalidSupportBound, "n must be positive");
    Poly f(std::vector<Rational>{1});
    for (int k = 1; k <= n; ++k) {
        Rational a = 1 + Rational(k, 2 * n);
        Rational b = v == FamilyVariant::Standard ? Rational(-k, 2 * n) : Rational(-k, 2 * n * n);
        a.canonicalize();
        b.canonicalize();
        f = f * Poly({1, a, 1}) * Poly({1, b, 1});
    }
    return from_char_poly(f);
}

} // namespace divisikit
