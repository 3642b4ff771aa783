#include "divisikit/sat.hpp"
#include "divisikit/error.hpp"
#include "divisikit/roots.hpp"

#include <algorithm>
#include <cmath>
#include <set>

namespace divisikit {

namespace {

using Vec = std::vector<Rational>;
using Pattern = std::array<std::array<int, 2>, 2>;

constexpr Pattern kX1{{{1, 1}, {-1, 1}}};
constexpr Pattern kX2{{{0, 1}, {1, 0}}};
constexpr Pattern kY{{{0, 1}, {-1, 0}}};
constexpr Pattern kJ{{{1, 1}, {1, 1}}};
constexpr Pattern kP{{{1, 0}, {1, 0}}};

Rational dot(const Vec& x, const Vec& y)
{
    Rational s = 0;
    for (std::size_t i = 0; i < x.size(); ++i)
        if (x[i] != 0 && y[i] != 0) s += x[i] * y[i];
    return s;
}

// m += c * (x y^T) (x) pattern, entry (2i+r, 2j+t)
void add_outer(RationalMatrix& m, const Rational& c, const Vec& x, const Vec& y, const Pattern& p)
{
    for (std::size_t i = 0; i < x.size(); ++i) {
        if (x[i] == 0) continue;
        Rational ci = c * x[i];
        for (std::size_t j = 0; j < y.size(); ++j) {
            if (y[j] == 0) continue;
            Rational v = ci * y[j];
            for (int r = 0; r < 2; ++r)
                for (int t = 0; t < 2; ++t)
                    if (p[r][t]) m(2 * i + r, 2 * j + t) += p[r][t] * v;
        }
    }
}

bool is_true(const Literal& l, const std::vector<bool>& asg)
{
    return asg[l.var - 1] == l.positive;
}

Rational default_or(const Rational& v, const Rational& d) { return v > 0 ? v : d; }

void check_literals(const SatInstance& inst)
{
    for (const auto& c : inst.clauses)
        for (int a = 0; a < 3; ++a)
            for (int b = a + 1; b < 3; ++b)
                if (c[a].var == c[b].var && c[a].positive == c[b].positive)
                    fail(Errc::ParseError, "repeated literal in a clause cannot be embedded");
}

// Literal value sign pattern of clause i for sign choices of its variables; used to test head space.
bool pair_matches(const SatInstance& inst, const Rational& N)
{
    for (const auto& c : inst.clauses)
        for (int mask = 0; mask < 8; ++mask) {
            std::vector<bool> asg(inst.n_v, false);
            bool ok = true;
            for (int a = 0; a < 3; ++a) {
                bool val = mask >> a & 1;
                bool want = c[a].positive ? val : !val;
                // the same variable may appear twice with opposite polarity
                for (int b = 0; b < a; ++b)
                    if (c[b].var == c[a].var && asg[c[a].var - 1] != want) ok = false;
                asg[c[a].var - 1] = want;
            }
            if (!ok) continue;
            SatInstance one{inst.n_v, {c}};
            auto pr = clause_inequalities(one, asg, N)[0];
            int trues = 0;
            for (const auto& l : c) trues += is_true(l, asg);
            if (pr.holds() != (trues == 1) || pr.lower == 0 || pr.upper == 0) return false;
        }
    return true;
}

} // namespace

void validate(const SatInstance& inst)
{
    if (inst.n_v < 0) fail(Errc::ParseError, "negative variable count");
    for (const auto& c : inst.clauses)
        for (const auto& l : c)
            if (l.var < 1 || l.var > inst.n_v) fail(Errc::ParseError, "variable index out of range");
}

bool satisfies(const SatInstance& inst, const std::vector<bool>& asg)
{
    for (const auto& c : inst.clauses) {
        int t = 0;
        for (const auto& l : c) t += is_true(l, asg);
        if (t != 1) return false;
    }
    return true;
}

std::vector<bool> assignment_of(int n_v, unsigned long branch)
{
    std::vector<bool> a(n_v);
    for (int k = 0; k < n_v; ++k) a[k] = branch >> k & 1;
    return a;
}

unsigned long branch_of(const std::vector<bool>& a)
{
    unsigned long b = 0;
    for (std::size_t k = 0; k < a.size(); ++k)
        if (a[k]) b |= 1ul << k;
    return b;
}

SatAnswer sat_oracle(const SatInstance& inst, int cap)
{
    validate(inst);
    if (inst.n_v > cap) fail(Errc::InstanceTooLarge, "too many variables for exhaustive search");
    // lexicographic order with variable 1 most significant and F < T
    unsigned long total = 1ul << inst.n_v;
    std::vector<bool> asg(inst.n_v);
    for (unsigned long x = 0; x < total; ++x) {
        for (int k = 0; k < inst.n_v; ++k) asg[k] = x >> (inst.n_v - 1 - k) & 1;
        if (satisfies(inst, asg)) return {true, asg};
    }
    return {false, {}};
}

Rational rescaled_literal_weight(int var, int n_v, const Rational& N)
{
    return 1 - 1 / N - Rational(var) / (N * n_v);
}

std::vector<ClausePair> clause_inequalities(const SatInstance& inst, const std::vector<bool>& asg,
                                            const Rational& N)
{
    validate(inst);
    if (static_cast<int>(asg.size()) != inst.n_v) fail(Errc::DimensionMismatch, "assignment length");
    std::vector<ClausePair> out;
    for (const auto& c : inst.clauses) {
        Rational p = 0;
        for (const auto& l : c) {
            Rational w = rescaled_literal_weight(l.var, inst.n_v, N);
            p += is_true(l, asg) ? w : Rational(-w);
        }
        out.push_back({Rational(3, 2) + p, Rational(-1, 2) - p});
    }
    return out;
}

EmbeddingFrame build_frame(const SatInstance& inst, const EmbeddingParams& params)
{
    validate(inst);
    check_literals(inst);
    EmbeddingFrame f;
    int n_c = static_cast<int>(inst.clauses.size());
    f.n_c = n_c;
    f.N = default_or(params.N, Rational(100 * std::max(inst.n_v, 1)));
    f.M = default_or(params.M, Rational(100 * std::max(inst.n_v, 1)));
    if (!pair_matches(inst, f.N)) fail(Errc::ParamsTooSmall, "N leaves no head space in the clause inequalities");
    if (f.M <= 1) fail(Errc::ParamsTooSmall, "M must exceed 1");

    // clause prefixes
    std::vector<Vec> pre;
    auto add = [&](Vec v, std::string role) {
        pre.push_back(std::move(v));
        f.roles.push_back(std::move(role));
        return static_cast<int>(pre.size()) - 1;
    };
    f.c1 = add(Vec(n_c, Rational(1)), "c1");
    f.c2 = add(Vec(n_c, Rational(1)), "c2");
    f.v.assign(inst.n_v, -1);
    f.w.assign(inst.n_v, -1);
    for (int k = 1; k <= inst.n_v; ++k) {
        Vec pos(n_c), neg(n_c);
        bool hp = false, hn = false;
        for (int i = 0; i < n_c; ++i)
            for (const auto& l : inst.clauses[i])
                if (l.var == k) {
                    (l.positive ? pos : neg)[i] = 1;
                    (l.positive ? hp : hn) = true;
                }
        if (hp) f.v[k - 1] = add(pos, "v" + std::to_string(k));
        if (hn) f.w[k - 1] = add(neg, "w" + std::to_string(k));
    }
    f.e1 = add(Vec(n_c, Rational(1)), "E1");
    for (int i = 0; i < n_c; ++i) {
        Vec e(n_c);
        e[i] = 1;
        f.b.push_back(add(e, "b" + std::to_string(i + 1)));
    }

    int L = static_cast<int>(pre.size());
    f.m = n_c + L * (L - 1) / 2 + 2 * L + 1;
    int last = f.m - 1;
    f.delta = default_or(params.delta, Rational(100 * 2 * f.m));
    const Rational& d = f.delta;
    f.a = Rational(-n_c) / (d * d) + Rational(f.m - n_c - 1) / d;
    if (!(f.a > 0 && f.a < 1)) fail(Errc::ParamsTooSmall, "delta too small for the D mask");

    // coordinate shared by the pair (i, n), i < n, and the balance coordinate of vector n
    auto pair = [&](int i, int n) { return n_c + n * (n - 1) / 2 + i; };
    auto balance = [&](int n) { return n_c + L * (L - 1) / 2 + 2 * n; };
    // orthogonal to E2 and Delta through the shared coordinate and the entry sum
    Rational kappa = (d + 1) / (d * (1 + f.a * d));
    std::vector<Rational> P(L);
    for (int n = 0; n < L; ++n)
        for (const auto& t : pre[n]) P[n] += t;
    for (int n = 0; n < L; ++n) {
        Vec x(f.m);
        for (int i = 0; i < n_c; ++i) x[i] = pre[n][i];
        x[last] = -P[n] * kappa;
        Rational used = 0;
        for (int i = 0; i < n; ++i) {
            Rational r = dot(pre[i], pre[n]) + P[i] * P[n] * kappa * kappa;
            x[pair(i, n)] = -r;
            used -= r;
        }
        for (int j = n + 1; j < L; ++j) {
            x[pair(n, j)] = 1;
            used += 1;
        }
        Rational S = -P[n] / d - x[last];
        // the first balance entry keeps the vector nonzero when it has no clause coordinates
        x[balance(n)] = 1;
        x[balance(n) + 1] = S - used - 1;
        f.vectors.push_back(std::move(x));
    }

    Vec e2(f.m, Rational(1)), dl(f.m, Rational(-1) / d);
    for (int i = 0; i < n_c; ++i) e2[i] = dl[i] = 1 / d;
    dl[last] = f.a;
    f.e2 = static_cast<int>(f.vectors.size());
    f.vectors.push_back(std::move(e2));
    f.roles.push_back("E2");
    f.delta_vec = static_cast<int>(f.vectors.size());
    f.vectors.push_back(std::move(dl));
    f.roles.push_back("Delta");
    return f;
}

RationalMatrix gram(const EmbeddingFrame& f)
{
    int n = static_cast<int>(f.vectors.size());
    RationalMatrix g(n);
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) g(i, j) = dot(f.vectors[i], f.vectors[j]);
    return g;
}

namespace {

void add_variable_term(RationalMatrix& m, const SatInstance& inst, const EmbeddingFrame& f, int k, int sign)
{
    Rational p = sign * rescaled_literal_weight(k, inst.n_v, f.N);
    if (f.v[k - 1] >= 0) add_outer(m, p, f.vectors[f.v[k - 1]], f.vectors[f.v[k - 1]], kY);
    if (f.w[k - 1] >= 0) add_outer(m, -p, f.vectors[f.w[k - 1]], f.vectors[f.w[k - 1]], kY);
}

RationalMatrix coding_shared(const EmbeddingFrame& f)
{
    RationalMatrix m(2 * f.m);
    add_outer(m, 1, f.vectors[f.c1], f.vectors[f.c1], kX1);
    add_outer(m, Rational(1, 2), f.vectors[f.c2], f.vectors[f.c2], kX2);
    return m;
}

Rational mask_weight(const EmbeddingFrame& f, int i)  // t_i, 1-based
{
    int n_c = std::max(f.n_c, 1);
    return 1 - 1 / f.M - Rational(i) / (f.M * n_c);
}

} // namespace

RationalMatrix build_coding_block(const SatInstance& inst, const std::vector<bool>& asg, const EmbeddingFrame& f)
{
    if (static_cast<int>(asg.size()) != inst.n_v) fail(Errc::DimensionMismatch, "assignment length");
    if (!pair_matches(inst, f.N)) fail(Errc::ParamsTooSmall, "N leaves no head space in the clause inequalities");
    RationalMatrix m = coding_shared(f);
    for (int k = 1; k <= inst.n_v; ++k) add_variable_term(m, inst, f, k, asg[k - 1] ? 1 : -1);
    return m;
}

RationalMatrix build_mask_E(const SatInstance& inst, const EmbeddingFrame& f)
{
    if (static_cast<int>(inst.clauses.size()) != f.n_c) fail(Errc::DimensionMismatch, "frame does not match instance");
    RationalMatrix m(2 * f.m);
    Rational h(7, 2);
    add_outer(m, h, f.vectors[f.e1], f.vectors[f.e1], kJ);
    for (int i = 0; i < f.n_c; ++i) add_outer(m, -h * mask_weight(f, i + 1), f.vectors[f.b[i]], f.vectors[f.b[i]], kJ);
    return m;
}

RationalMatrix build_mask_D(const EmbeddingFrame& f, int delta_sign, int e2_sign)
{
    RationalMatrix m(2 * f.m);
    add_outer(m, e2_sign, f.vectors[f.e2], f.vectors[f.e2], kJ);
    add_outer(m, delta_sign, f.vectors[f.delta_vec], f.vectors[f.delta_vec], kP);
    return m;
}

RationalMatrix build_mask_D(int total_dim, int n, const Rational& delta, int delta_sign, int e2_sign)
{
    if (n < 0 || total_dim % 4 != 0 || 4 * n >= total_dim)
        fail(Errc::DimensionTooSmall, "need 4n < total_dim with total_dim divisible by 4");
    if (delta <= 0) fail(Errc::ParamsTooSmall, "delta must be positive");
    int len = total_dim / 4;
    Rational a = Rational(-n) / (delta * delta) + Rational(len - n - 1) / delta;
    if (!(a > 0 && a < 1)) fail(Errc::ParamsTooSmall, "orthonormalization value a outside (0, 1)");
    Vec e2(len, Rational(1)), dl(len, -1 / delta);
    for (int i = 0; i < n; ++i) e2[i] = dl[i] = 1 / delta;
    dl[len - 1] = a;
    RationalMatrix m(total_dim);
    for (int i = 0; i < len; ++i)
        for (int j = 0; j < len; ++j) {
            Rational x = e2_sign * e2[i] * e2[j], y = delta_sign * dl[i] * dl[j];
            for (int r = 0; r < 4; ++r)
                for (int t = 0; t < 4; ++t) m(4 * i + r, 4 * j + t) = x + (t < 3 ? y : Rational(0));
        }
    return m;
}

int exact_rank(const RationalMatrix& m0)
{
    int n = m0.dim();
    std::vector<Vec> m(n, Vec(n));
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) m[i][j] = m0(i, j);
    int rank = 0;
    for (int c = 0; c < n && rank < n; ++c) {
        int p = -1;
        for (int i = rank; i < n; ++i)
            if (m[i][c] != 0) { p = i; break; }
        if (p < 0) continue;
        std::swap(m[p], m[rank]);
        for (int i = rank + 1; i < n; ++i) {
            if (m[i][c] == 0) continue;
            Rational q = m[i][c] / m[rank][c];
            for (int j = c; j < n; ++j)
                if (m[rank][j] != 0) m[i][j] -= q * m[rank][j];
        }
        ++rank;
    }
    return rank;
}

// ---- family ----

namespace {

struct Direction {
    Vec u, w;                      // right and left factors in R^m, w.u = 1
    std::array<Rational, 2> x, y;  // right = u (x) x, left = w (x) y, y.x = 1
};

// Basis of the orthogonal complement of the rows (exact RREF nullspace).
std::vector<Vec> nullspace(std::vector<Vec> rows, int m)
{
    std::vector<int> pivots;
    int r = 0;
    for (int c = 0; c < m && r < static_cast<int>(rows.size()); ++c) {
        int p = -1;
        for (int i = r; i < static_cast<int>(rows.size()); ++i)
            if (rows[i][c] != 0) { p = i; break; }
        if (p < 0) continue;
        std::swap(rows[p], rows[r]);
        Rational inv = 1 / rows[r][c];
        for (auto& t : rows[r]) t *= inv;
        for (int i = 0; i < static_cast<int>(rows.size()); ++i) {
            if (i == r || rows[i][c] == 0) continue;
            Rational q = rows[i][c];
            for (int j = c; j < m; ++j)
                if (rows[r][j] != 0) rows[i][j] -= q * rows[r][j];
        }
        pivots.push_back(c);
        ++r;
    }
    std::vector<Vec> out;
    std::vector<bool> is_pivot(m, false);
    for (int c : pivots) is_pivot[c] = true;
    for (int c = 0; c < m; ++c) {
        if (is_pivot[c]) continue;
        Vec v(m);
        v[c] = 1;
        for (int k = 0; k < r; ++k) v[pivots[k]] = -rows[k][c];
        out.push_back(std::move(v));
    }
    return out;
}

// Dual basis inside span(u): rows of (U^T U)^-1 U^T.
std::vector<Vec> dual_basis(const std::vector<Vec>& u, int m)
{
    int k = static_cast<int>(u.size());
    std::vector<Vec> a(k, Vec(k + m));
    for (int i = 0; i < k; ++i) {
        for (int j = 0; j < k; ++j) a[i][j] = dot(u[i], u[j]);
        for (int j = 0; j < m; ++j) a[i][k + j] = u[i][j];
    }
    for (int c = 0; c < k; ++c) {
        int p = c;
        while (a[p][c] == 0) ++p;
        std::swap(a[p], a[c]);
        Rational inv = 1 / a[c][c];
        for (auto& t : a[c]) t *= inv;
        for (int i = 0; i < k; ++i) {
            if (i == c || a[i][c] == 0) continue;
            Rational q = a[i][c];
            for (int j = c; j < k + m; ++j)
                if (a[c][j] != 0) a[i][j] -= q * a[c][j];
        }
    }
    std::vector<Vec> out(k, Vec(m));
    for (int i = 0; i < k; ++i)
        for (int j = 0; j < m; ++j) out[i][j] = a[i][k + j];
    return out;
}


RationalMatrix sign_spread(const std::vector<RationalMatrix>& terms, int n)
{
    RationalMatrix spread(n);
    for (const auto& t : terms)
        for (int i = 0; i < n; ++i)
            for (int j = 0; j < n; ++j)
                if (t(i, j) != 0) spread(i, j) += abs(t(i, j));
    return spread;
}

std::vector<RationalMatrix> variable_terms(const SatInstance& inst, const EmbeddingFrame& f)
{
    std::vector<RationalMatrix> out;
    for (int k = 1; k <= inst.n_v; ++k) {
        RationalMatrix t(2 * f.m);
        add_variable_term(t, inst, f, k, 1);
        out.push_back(std::move(t));
    }
    return out;
}

// Largest |C_s + E| entry over all branches.
Rational coding_bound(const RationalMatrix& ce, const RationalMatrix& spread)
{
    Rational big = 0;
    for (int i = 0; i < ce.dim(); ++i)
        for (int j = 0; j < ce.dim(); ++j) big = std::max(big, Rational(abs(ce(i, j)) + spread(i, j)));
    return big;
}

} // namespace

BranchFamily::BranchFamily(SatInstance inst, EmbeddingFrame frame, EmbeddingParams params)
    : inst_(std::move(inst)), frame_(std::move(frame)), params_(std::move(params))
{
    const auto& f = frame_;
    int n = 2 * f.m;
    int n_c = f.n_c;
    RationalMatrix ce = coding_shared(f) + build_mask_E(inst_, f);
    var_terms_ = variable_terms(inst_, f);
    RationalMatrix spread = sign_spread(var_terms_, n);

    RationalMatrix dm = build_mask_D(f);
    auto in_clause = [&](int i, int j) { return i / 2 < n_c && j / 2 < n_c; };
    Rational big = coding_bound(ce, spread), dmin = -1;
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j)
            if (!in_clause(i, j) && (dmin < 0 || dm(i, j) < dmin)) dmin = dm(i, j);
    if (dmin <= 0) fail(Errc::ParamsTooSmall, "D mask does not cover the orthonormalization region");
    if (params_.n_d > 0) {
        n_d_ = params_.n_d;
    } else {
        Rational want = 10 * big / dmin;
        n_d_ = Rational(mpz_class(want.get_num() / want.get_den() + 1));
    }
    shared_ = ce + n_d_ * dm;

    // Head-space validation. Outside the diagonal clause blocks every entry must stay positive in
    // every branch; inside, each clause's sign must match its truth value for all local patterns.
    auto lower = [&](int i, int j) { return shared_(i, j) - spread(i, j); };
    Rational margin = -1;
    auto note = [&](const Rational& v) {
        Rational a = abs(v);
        if (margin < 0 || a < margin) margin = a;
    };
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) {
            if (i / 2 == j / 2 && i / 2 < n_c) continue;
            Rational lo = lower(i, j);
            if (lo <= 0) fail(Errc::ParamsTooSmall, "mask weights do not dominate the off-diagonal entries");
            note(lo);
        }
    for (int c = 0; c < n_c; ++c) {
        std::vector<int> vars;
        for (const auto& l : inst_.clauses[c])
            if (std::find(vars.begin(), vars.end(), l.var) == vars.end()) vars.push_back(l.var);
        for (int mask = 0; mask < (1 << vars.size()); ++mask) {
            std::vector<bool> asg(inst_.n_v, false);
            for (std::size_t q = 0; q < vars.size(); ++q) asg[vars[q] - 1] = mask >> q & 1;
            int trues = 0;
            for (const auto& l : inst_.clauses[c]) trues += is_true(l, asg);
            bool nonneg = true;
            for (int r = 0; r < 2; ++r)
                for (int t = 0; t < 2; ++t) {
                    int i = 2 * c + r, j = 2 * c + t;
                    Rational v = shared_(i, j);
                    for (int k : vars) v += (asg[k - 1] ? 1 : -1) * var_terms_[k - 1](i, j);
                    if (v == 0) fail(Errc::ParamsTooSmall, "clause block entry vanishes");
                    nonneg = nonneg && v > 0;
                    note(v);
                }
            if (nonneg != (trues == 1)) fail(Errc::ParamsTooSmall, "clause block sign does not track the clause");
        }
    }

    margin_ = margin;
    spread_ = std::move(spread);
}

void BranchFamily::ensure_lift() const
{
    if (lifted_) return;
    const auto& f = frame_;
    int n = dim();
    const RationalMatrix& spread = spread_;
    lift_ = RationalMatrix(n);
    lift_bound_ = 0;
    if (params_.lift_singularities) {
        // kernel directions: complement of the frame, then the null directions of J and P patterns
        std::vector<Vec> comp = nullspace(f.vectors, f.m);
        std::vector<Vec> dual = dual_basis(comp, f.m);
        std::vector<Direction> dirs;
        for (std::size_t q = 0; q < comp.size(); ++q) {
            dirs.push_back({comp[q], dual[q], {1, 0}, {1, 0}});
            dirs.push_back({comp[q], dual[q], {0, 1}, {0, 1}});
        }
        auto scaled = [&](const Vec& u) {
            Vec w = u;
            Rational n2 = dot(u, u);
            for (auto& t : w) t /= n2;
            return w;
        };
        auto jnull = [&](int idx) {
            const Vec& u = f.vectors[idx];
            dirs.push_back({u, scaled(u), {1, -1}, {Rational(1, 2), Rational(-1, 2)}});
        };
        jnull(f.e1);
        for (int idx : f.b) jnull(idx);
        jnull(f.e2);
        const Vec& dv = f.vectors[f.delta_vec];
        dirs.push_back({dv, scaled(dv), {0, 1}, {-1, 1}});

        Rational zmax = 1;
        for (const auto& dr : dirs)
            for (int i = 0; i < f.m; ++i)
                for (int r = 0; r < 2; ++r) {
                    if (dr.u[i] != 0) zmax = std::max(zmax, Rational(abs(dr.u[i]) * abs(dr.x[r])));
                    if (dr.w[i] != 0) zmax = std::max(zmax, Rational(abs(dr.w[i]) * abs(dr.y[r])));
                }
        // round zmax up to a power of two to keep the lifted values short
        Rational z2 = 1;
        while (z2 < zmax) z2 *= 2;
        Rational dim3 = Rational(n) * n * n;
        lift_bound_ = 1 / (params_.lift_c * dim3 * z2);
        int K = static_cast<int>(dirs.size());
        for (int q = 0; q < K; ++q) {
            Rational lam = lift_bound_ * (q + 1) / (K + 1);
            lift_values_.push_back(lam);
            const auto& dr = dirs[q];
            for (int i = 0; i < f.m; ++i) {
                if (dr.u[i] == 0) continue;
                for (int j = 0; j < f.m; ++j) {
                    if (dr.w[j] == 0) continue;
                    Rational v = lam * dr.u[i] * dr.w[j];
                    for (int r = 0; r < 2; ++r)
                        for (int t = 0; t < 2; ++t)
                            if (dr.x[r] != 0 && dr.y[t] != 0) lift_(2 * i + r, 2 * j + t) += v * dr.x[r] * dr.y[t];
                }
            }
        }
        Rational lmax = 0;
        for (const auto& t : lift_.entries()) lmax = std::max(lmax, abs(t));
        if (margin_ >= 0 && lmax >= margin_) fail(Errc::ParamsTooSmall, "singularity lift would flip an entry sign");
    }

    // common scale: the largest entry over all branches is attained entrywise by aligning signs
    Rational top = 0;
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) top = std::max(top, Rational(shared_(i, j) + lift_(i, j) + spread(i, j)));
    scale_ = 1 / (2 * top);
    lifted_ = true;
}

const Rational& BranchFamily::scale() const
{
    ensure_lift();
    return scale_;
}

const RationalMatrix& BranchFamily::lift() const
{
    ensure_lift();
    return lift_;
}

const Rational& BranchFamily::lift_bound() const
{
    ensure_lift();
    return lift_bound_;
}

RationalMatrix BranchFamily::raw_branch(unsigned long s) const
{
    RationalMatrix m = shared_;
    int n = m.dim();
    for (int k = 0; k < inst_.n_v; ++k) {
        const auto& t = var_terms_[k];
        bool plus = s >> k & 1;
        for (int i = 0; i < n; ++i)
            for (int j = 0; j < n; ++j) {
                const Rational& v = t(i, j);
                if (v == 0) continue;
                if (plus) m(i, j) += v;
                else m(i, j) -= v;
            }
    }
    return m;
}

RationalMatrix BranchFamily::branch(unsigned long s) const
{
    ensure_lift();
    return scale_ * (raw_branch(s) + lift_);
}

RationalMatrix BranchFamily::stochastic_branch(unsigned long s) const
{
    RationalMatrix b = branch(s);
    LiftOptions o;
    o.scale_target = b.max_entry();  // lift factor 1 for every branch
    return lift_nonneg_to_stochastic(b, o).lifted;
}

// Signs are read off the unlifted branch: the build-time margin exceeds every lift entry, so
// the lift cannot flip a sign, and scaling is positive.
BranchDiagnostics BranchFamily::diagnose(unsigned long s) const
{
    BranchDiagnostics d;
    d.branch = s;
    RationalMatrix b = raw_branch(s);
    d.min_entry = b.min_entry();
    d.nonnegative = d.min_entry >= 0;
    for (int c = 0; c < frame_.n_c; ++c) {
        bool neg = false;
        for (int r = 0; r < 2; ++r)
            for (int t = 0; t < 2; ++t) neg = neg || b(2 * c + r, 2 * c + t) < 0;
        if (neg) d.violated_clauses.push_back(c);
    }
    return d;
}

bool BranchFamily::exists_nonnegative_branch(unsigned long* witness) const
{
    for (unsigned long s = 0; s < branch_count(); ++s)
        if (raw_branch(s).min_entry() >= 0) {
            if (witness) *witness = s;
            return true;
        }
    return false;
}

std::vector<Complex> BranchFamily::eigenvalues(unsigned long s) const
{
    ensure_lift();
    const auto& f = frame_;
    double sc = to_double(scale_);
    std::vector<Complex> ev;
    auto n2 = [&](int idx) { return to_double(dot(f.vectors[idx], f.vectors[idx])); };
    double c1 = n2(f.c1);
    ev.push_back({c1 * sc, c1 * sc});
    ev.push_back({c1 * sc, -c1 * sc});
    double c2 = n2(f.c2) / 2;
    ev.push_back({c2 * sc, 0});
    ev.push_back({-c2 * sc, 0});
    for (int k = 1; k <= inst_.n_v; ++k) {
        double p = to_double(rescaled_literal_weight(k, inst_.n_v, f.N)) * ((s >> (k - 1) & 1) ? 1 : -1);
        // p (x) Y has eigenvalues +-i p |v|^2
        for (int idx : {f.v[k - 1], f.w[k - 1]}) {
            if (idx < 0) continue;
            double x = p * n2(idx) * sc * (idx == f.w[k - 1] ? -1 : 1);
            ev.push_back({0, x});
            ev.push_back({0, -x});
        }
    }
    ev.push_back({7 * n2(f.e1) * sc, 0});
    for (int i = 0; i < f.n_c; ++i) ev.push_back({-7 * to_double(mask_weight(f, i + 1)) * n2(f.b[i]) * sc, 0});
    double nd = to_double(n_d_);
    ev.push_back({2 * nd * n2(f.e2) * sc, 0});
    ev.push_back({nd * n2(f.delta_vec) * sc, 0});
    for (const auto& l : lift_values_) ev.push_back({to_double(l) * sc, 0});
    while (static_cast<int>(ev.size()) < dim()) ev.push_back(0);
    return ev;
}

double BranchFamily::min_spectral_gap(unsigned long s) const
{
    auto ev = eigenvalues(s);
    double g = INFINITY;
    for (std::size_t i = 0; i < ev.size(); ++i)
        for (std::size_t j = i + 1; j < ev.size(); ++j) g = std::min(g, std::abs(ev[i] - ev[j]));
    return g;
}

BranchFamily assemble_family(const SatInstance& inst, const EmbeddingParams& params)
{
    validate(inst);
    if (inst.n_v > 20) fail(Errc::InstanceTooLarge, "too many branches");
    EmbeddingParams p = params;
    if (p.delta <= 0) {
        // the D mask must outweigh C_s + E by a factor delta while staying O(1/delta) on the clauses
        EmbeddingFrame f = build_frame(inst, p);
        RationalMatrix ce = coding_shared(f) + build_mask_E(inst, f);
        Rational big = coding_bound(ce, sign_spread(variable_terms(inst, f), 2 * f.m));
        Rational want = 100 * big;
        mpz_class up = want.get_num() / want.get_den() + 1;
        p.delta = std::max(f.delta, Rational(up));
    }
    for (int attempt = 0;; ++attempt) {
        EmbeddingFrame f = build_frame(inst, p);
        Rational used = f.delta;
        try {
            return BranchFamily(inst, std::move(f), p);
        } catch (const Error& e) {
            if (e.code() != Errc::ParamsTooSmall || params.delta > 0 || attempt >= 4) throw;
            p.delta = used * 10;
        }
    }
}

SatCheckReport check_instance(const SatInstance& inst, const EmbeddingParams& params, bool with_spectrum)
{
    validate(inst);
    if (inst.n_v > 10) fail(Errc::InstanceTooLarge, "check_instance takes at most 10 variables");
    SatCheckReport r;
    r.oracle_verdict = sat_oracle(inst).yes;
    BranchFamily fam = assemble_family(inst, params);
    r.dim = fam.dim();
    for (unsigned long s = 0; s < fam.branch_count(); ++s) {
        r.branches.push_back(fam.diagnose(s));
        if (r.branches.back().nonnegative && !r.encoder_verdict) {
            r.encoder_verdict = true;
            r.witness_branch = s;
        }
    }
    r.agree = r.encoder_verdict == r.oracle_verdict;
    if (with_spectrum) r.min_spectral_gap = fam.min_spectral_gap(r.encoder_verdict ? r.witness_branch : 0);
    return r;
}

} // namespace divisikit
