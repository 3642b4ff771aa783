#include "divisikit/nptools.hpp"
#include "divisikit/error.hpp"

#include <algorithm>
#include <limits>
#include <numeric>

namespace divisikit {

const char* variant_name(SubsetVariant v)
{
    switch (v) {
    case SubsetVariant::Plain: return "plain";
    case SubsetVariant::Even: return "even";
    case SubsetVariant::M: return "m";
    case SubsetVariant::SignedM: return "signed_m";
    }
    return "?";
}

SubsetVariant parse_variant(const std::string& s)
{
    if (s == "plain") return SubsetVariant::Plain;
    if (s == "even") return SubsetVariant::Even;
    if (s == "m") return SubsetVariant::M;
    if (s == "signed_m" || s == "signed-m") return SubsetVariant::SignedM;
    fail(Errc::ParseError, "unknown subset-sum variant '" + s + "'");
}

namespace {

Rational total(const std::vector<Rational>& v)
{
    Rational s = 0;
    for (const auto& x : v) s += x;
    return s;
}

bool lex_less(unsigned long a, unsigned long b)
{
    // compare sorted index lists of two masks
    while (a && b) {
        unsigned long la = a & (~a + 1), lb = b & (~b + 1);
        if (la != lb) return la < lb;
        a ^= la;
        b ^= lb;
    }
    return !a && b;
}

std::vector<int> indices(unsigned long mask)
{
    std::vector<int> out;
    for (int i = 0; mask; ++i, mask >>= 1)
        if (mask & 1) out.push_back(i);
    return out;
}

// Exhaustive scan; accept(mask, popcount, diff) decides membership. Differences are
// computed on integers after clearing denominators.
template <class Accept>
OracleResult scan(const std::vector<Rational>& el, const OracleOptions& opt, Accept&& accept_scaled,
                  const Integer& scale)
{
    int n = static_cast<int>(el.size());
    if (n > opt.cap) fail(Errc::InstanceTooLarge, "instance exceeds the brute-force cap");
    OracleResult res;
    bool found = false;
    unsigned long best = 0;
    std::vector<Integer> zi;
    bool small = true;
    for (const auto& x : el) {
        Rational y = x * scale;
        zi.push_back(y.get_num());
        if (!zi.back().fits_slong_p() || abs(zi.back()) > Integer(1) << 56) small = false;
    }
    Integer tot = 0;
    for (const auto& z : zi) tot += z;
    unsigned long full = n == 0 ? 0 : ((1ul << n) - 1);
    if (small) {
        std::vector<long> v;
        for (const auto& z : zi) v.push_back(z.get_si());
        long t = tot.get_si();
        // Gray code walk keeps the running subset sum in O(1) per step
        long sum = 0;
        unsigned long mask = 0;
        for (unsigned long k = 0;; ++k) {
            if (k > 0) {
                int bit = __builtin_ctzl(k);
                mask ^= 1ul << bit;
                sum += (mask >> bit & 1) ? v[bit] : -v[bit];
            }
            int pc = __builtin_popcountl(mask);
            if (accept_scaled(mask, pc, 2 * sum - t) && (!found || lex_less(mask, best))) {
                found = true;
                best = mask;
            }
            if (k == full) break;
        }
    } else {
        for (unsigned long mask = 0;; ++mask) {
            Integer sum = 0;
            for (int i = 0; i < n; ++i)
                if (mask >> i & 1) sum += zi[i];
            int pc = __builtin_popcountl(mask);
            if (accept_scaled(mask, pc, Integer(2 * sum - tot)) && (!found || lex_less(mask, best))) {
                found = true;
                best = mask;
            }
            if (mask == full) break;
        }
    }
    res.yes = found;
    if (found) res.witness = indices(best);
    return res;
}

Integer scale_for(const std::vector<Rational>& v)
{
    return lcm_of_denominators(v);
}

} // namespace

OracleResult solve_subset_variant(const SubsetSumInstance& s, const OracleOptions& opt)
{
    return solve_subset_variant(s, s.variant, opt);
}

OracleResult solve_subset_variant(const SubsetSumInstance& s, SubsetVariant v, const OracleOptions& opt)
{
    int n = static_cast<int>(s.elements.size());
    if (n > opt.cap) fail(Errc::InstanceTooLarge, "instance exceeds the brute-force cap");
    unsigned long full = n == 0 ? 0 : ((1ul << n) - 1);
    std::vector<Rational> all = s.elements;
    all.push_back(s.bound);
    all.push_back(s.window_lo);
    all.push_back(s.window_hi);
    Integer q = scale_for(all);
    Integer lq = Rational(s.bound * q).get_num();
    Integer xq = Rational(s.window_lo * q).get_num(), yq = Rational(s.window_hi * q).get_num();
    auto proper = [&](unsigned long mask) { return mask != full && (opt.allow_empty || mask != 0); };
    switch (v) {
    case SubsetVariant::Plain:
        return scan(s.elements, opt, [&](unsigned long mask, int, const auto& d) {
            return proper(mask) && d < lq && -d < lq;
        }, q);
    case SubsetVariant::Even:
        if (n % 2 != 0) fail(Errc::ParseError, "even variant needs an even number of elements");
        return scan(s.elements, opt, [&](unsigned long mask, int pc, const auto& d) {
            return pc == n / 2 && proper(mask) && d < lq && -d < lq;
        }, q);
    case SubsetVariant::M:
        return scan(s.elements, opt, [&](unsigned long mask, int pc, const auto& d) {
            return pc == s.m && proper(mask) && d < lq && -d < lq;
        }, q);
    case SubsetVariant::SignedM:
        if (s.window_lo > s.window_hi) fail(Errc::ParseError, "signed window needs x <= y");
        return scan(s.elements, opt, [&](unsigned long mask, int pc, const auto& d) {
            return pc == s.m && (opt.allow_empty || mask != 0 || s.m == 0) && xq < d && d < yq;
        }, q);
    }
    return {};
}

bool witness_holds(const SubsetSumInstance& s, SubsetVariant v, const std::vector<int>& t)
{
    int n = static_cast<int>(s.elements.size());
    std::vector<bool> in(n, false);
    for (int i : t) {
        if (i < 0 || i >= n || in[i]) return false;
        in[i] = true;
    }
    Rational d = 0;
    for (int i = 0; i < n; ++i) d += in[i] ? s.elements[i] : -s.elements[i];
    int k = static_cast<int>(t.size());
    switch (v) {
    case SubsetVariant::Plain: return k < n && abs(d) < s.bound;
    case SubsetVariant::Even: return k < n && 2 * k == n && abs(d) < s.bound;
    case SubsetVariant::M: return k < n && k == s.m && abs(d) < s.bound;
    case SubsetVariant::SignedM: return k == s.m && s.window_lo < d && d < s.window_hi;
    }
    return false;
}

OracleResult partition_oracle(const PartitionInstance& p, const OracleOptions& opt)
{
    for (const auto& x : p.elements)
        if (x <= 0) fail(Errc::ParseError, "partition elements must be positive");
    Integer q = scale_for(p.elements);
    OracleOptions o = opt;
    o.allow_empty = false;
    unsigned long full = p.elements.empty() ? 0 : ((1ul << p.elements.size()) - 1);
    return scan(p.elements, o, [&](unsigned long mask, int, const auto& d) {
        return mask != 0 && mask != full && d == 0;
    }, q);
}

SubsetSumInstance rescale_instance(const SubsetSumInstance& s, const Rational& a, const Rational& c)
{
    if (a == 0) fail(Errc::ParseError, "scale factor must be nonzero");
    if (c != 0 && s.variant != SubsetVariant::Even)
        fail(Errc::ShiftOnPlainVariant, "an additive shift preserves verdicts only for the even variant");
    SubsetSumInstance out = s;
    for (auto& x : out.elements) x = a * x + c;
    out.bound = abs(a) * s.bound;
    Rational lo = a * s.window_lo, hi = a * s.window_hi;
    out.window_lo = std::min(lo, hi);
    out.window_hi = std::max(lo, hi);
    return out;
}

SubsetSumInstance pad_to_even(const SubsetSumInstance& s)
{
    if (s.variant != SubsetVariant::Plain) fail(Errc::ParseError, "padding applies to the plain variant");
    SubsetSumInstance out = s;
    out.elements.resize(2 * s.elements.size(), Rational(0));
    out.variant = SubsetVariant::Even;
    return out;
}

SubsetSumInstance partition_to_subset_sum(const PartitionInstance& p)
{
    for (const auto& x : p.elements)
        if (x <= 0) fail(Errc::ParseError, "partition elements must be positive");
    Rational sum = total(p.elements);
    Rational q = Rational(scale_for(p.elements));
    // half-differences of the source live on a grid of 1/(2q); eta stays below it
    Rational eta = 1 / (4 * q);
    SubsetSumInstance out;
    out.elements = p.elements;
    out.elements.push_back(-sum / 2 + eta);
    out.elements.push_back(-sum / 2 + eta);
    out.bound = 2 * eta;
    out.variant = SubsetVariant::Plain;
    return out;
}

IntervalPartition interval_partition(const Rational& l, const Rational& a)
{
    if (l <= 0 || a <= 0) fail(Errc::ParseError, "interval partition needs l > 0 and a > 0");
    IntervalPartition p;
    p.cells.push_back({-l - 2 * a, -l});
    Rational x = -l;
    while (x < l) {
        Rational nx = std::min(Rational(x + 2 * a), l);
        p.cells.push_back({x, nx});
        x = nx;
    }
    p.cells.push_back({l, l + 2 * a});
    return p;
}

MProgram subset_sum_m_program(const SubsetSumInstance& s, int m)
{
    int n = static_cast<int>(s.elements.size());
    int k = 2 * m - n;
    if (k == 0) fail(Errc::DegenerateCardinality, "2m equals |S|; use the even variant");
    MProgram prog;
    if (m <= 0 || m >= n || s.bound <= 0) return prog;  // no admissible subset
    Rational sum = total(s.elements);
    // shifting every element by c moves each difference by c(2m - |S|)
    Rational a = 2 * (n * s.bound + k * sum) / k;
    if (a <= 0) a = s.bound;
    if (s.bound / a > 256) a = s.bound / 256;  // keep the program small
    prog.cell_half_width = a;
    auto term = [&](const Rational& lo, const Rational& hi) {
        ProgramTerm t;
        Rational centre = (lo + hi) / 2;
        t.shift = -centre / k;
        t.window = {lo, hi};
        t.instance.elements = s.elements;
        for (auto& x : t.instance.elements) x += t.shift;
        t.instance.bound = (hi - lo) / 2;
        t.instance.m = m;
        t.instance.variant = SubsetVariant::M;
        prog.terms.push_back(std::move(t));
    };
    auto cells = interval_partition(s.bound, a).cells;
    // achievable differences lie on -sum + (2/q)Z; a point term of radius 1/q catches
    // a difference sitting exactly on an interior cell boundary
    std::vector<Rational> all = s.elements;
    all.push_back(s.bound);
    Rational radius = 1 / Rational(scale_for(all));
    for (std::size_t i = 1; i + 1 < cells.size(); ++i) {
        term(cells[i].lo, cells[i].hi);
        if (i + 2 < cells.size()) {
            Rational x = cells[i].hi;
            Rational r = std::min({radius, Rational(x + s.bound), Rational(s.bound - x)});
            term(x - r, x + r);
        }
    }
    return prog;
}

bool evaluate_program(const MProgram& p, const OracleOptions& opt)
{
    for (const auto& t : p.terms)
        if (solve_subset_variant(t.instance, SubsetVariant::M, opt).yes) return true;
    return false;
}

} // namespace divisikit
