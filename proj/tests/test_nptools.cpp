#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include "divisikit/decompose.hpp"
#include "divisikit/error.hpp"
#include "divisikit/nptools.hpp"
#include "support.hpp"

#include <functional>

using namespace divisikit;

namespace {

template <class F>
Errc error_of(F&& f)
{
    try {
        f();
    } catch (const Error& e) {
        return e.code();
    }
    FAIL("expected an error");
    return Errc::ParseError;
}

std::vector<Rational> rats(std::initializer_list<long> xs)
{
    std::vector<Rational> v;
    for (long x : xs) v.push_back(Rational(x));
    return v;
}

SubsetSumInstance inst(std::vector<Rational> el, Rational l, SubsetVariant v = SubsetVariant::Plain, int m = -1)
{
    SubsetSumInstance s;
    s.elements = std::move(el);
    s.bound = l;
    s.variant = v;
    s.m = m;
    return s;
}

// Reference oracle: depth-first walk over sorted index lists in lexicographic order,
// plain rational arithmetic, first accepted list wins.
OracleResult reference(const std::vector<Rational>& el, const std::function<bool(const std::vector<int>&)>& ok)
{
    OracleResult r;
    std::vector<int> cur;
    std::function<bool(int)> dfs = [&](int start) {
        if (ok(cur)) {
            r.yes = true;
            r.witness = cur;
            return true;
        }
        for (int i = start; i < static_cast<int>(el.size()); ++i) {
            cur.push_back(i);
            if (dfs(i + 1)) return true;
            cur.pop_back();
        }
        return false;
    };
    dfs(0);
    return r;
}

Rational diff_of(const std::vector<Rational>& el, const std::vector<int>& t)
{
    Rational d = 0;
    for (const auto& x : el) d -= x;
    for (int i : t) d += 2 * el[i];
    return d;
}

OracleResult reference_variant(const SubsetSumInstance& s, SubsetVariant v, bool allow_empty = false)
{
    int n = static_cast<int>(s.elements.size());
    return reference(s.elements, [&](const std::vector<int>& t) {
        int k = static_cast<int>(t.size());
        if (k == 0 && !allow_empty && !(v == SubsetVariant::SignedM && s.m == 0)) return false;
        Rational d = diff_of(s.elements, t);
        switch (v) {
        case SubsetVariant::Plain: return k < n && abs(d) < s.bound;
        case SubsetVariant::Even: return 2 * k == n && abs(d) < s.bound;
        case SubsetVariant::M: return k == s.m && k < n && abs(d) < s.bound;
        case SubsetVariant::SignedM: return k == s.m && s.window_lo < d && d < s.window_hi;
        }
        return false;
    });
}

std::vector<Rational> rand_elements(std::mt19937_64& rng, int n, long lo, long hi, long max_den = 3)
{
    std::vector<Rational> v;
    for (int i = 0; i < n; ++i) v.push_back(testsupport::rand_rational(rng, max_den, lo, hi));
    return v;
}

Rational rand_bound(std::mt19937_64& rng, long hi)
{
    Rational l = testsupport::rand_rational(rng, 4, 0, hi);
    return l == 0 ? Rational(1, 4) : l;
}

PartitionInstance rand_partition(std::mt19937_64& rng, int n)
{
    PartitionInstance p;
    std::uniform_int_distribution<long> d(1, 6);
    for (int i = 0; i < n; ++i) p.elements.push_back(Rational(d(rng)));
    return p;
}

} // namespace

TEST_CASE("oracle examples")
{
    auto r = solve_subset_variant(inst(rats({1, 2, 3}), Rational(1, 2)));
    CHECK(r.yes);
    CHECK(r.witness == std::vector<int>{0, 1});
    CHECK(!solve_subset_variant(inst(rats({1, 2}), Rational(1, 2))).yes);
    auto e = solve_subset_variant(inst(rats({1, 3}), 3, SubsetVariant::Even));
    CHECK(e.yes);
    CHECK(e.witness == std::vector<int>{0});

    auto p = partition_oracle({rats({3, 1, 1, 2, 2, 1})});
    CHECK(p.yes);
    Rational half = 0;
    for (int i : p.witness) half += rats({3, 1, 1, 2, 2, 1})[i];
    CHECK(half == 5);
    CHECK(!partition_oracle({rats({1, 2})}).yes);
    CHECK(partition_oracle({rats({1, 1})}).yes);

    std::vector<Rational> big(25, Rational(1));
    CHECK(error_of([&] { solve_subset_variant(inst(big, 1)); }) == Errc::InstanceTooLarge);
}

TEST_CASE("empty subset convention")
{
    // S = {5, -5}, l = 1: only T = {} reaches difference 0
    auto s = inst(rats({5, -5}), 1);
    CHECK(!solve_subset_variant(s).yes);
    OracleOptions o;
    o.allow_empty = true;
    auto r = solve_subset_variant(s, o);
    CHECK(r.yes);
    CHECK(r.witness.empty());
}

TEST_CASE("oracles agree with the reference walk")
{
    std::mt19937_64 rng(21);
    for (int t = 0; t < 300; ++t) {
        int n = 1 + static_cast<int>(rng() % 8);
        auto s = inst(rand_elements(rng, n, -10, 10), rand_bound(rng, 8));
        s.m = static_cast<int>(rng() % (n + 1));
        Rational x = testsupport::rand_rational(rng, 3, -15, 10);
        s.window_lo = x;
        s.window_hi = x + testsupport::rand_rational(rng, 3, 0, 8);
        std::vector<SubsetVariant> vs{SubsetVariant::Plain, SubsetVariant::M, SubsetVariant::SignedM};
        if (n % 2 == 0) vs.push_back(SubsetVariant::Even);
        for (auto v : vs)
            for (bool empty : {false, true}) {
                OracleOptions o;
                o.allow_empty = empty;
                auto got = solve_subset_variant(s, v, o);
                auto want = reference_variant(s, v, empty);
                CHECK(got.yes == want.yes);
                CHECK(got.witness == want.witness);
                if (got.yes && !got.witness.empty()) CHECK(witness_holds(s, v, got.witness));
            }
    }
}

TEST_CASE("rescale_instance")
{
    auto s = inst(rats({1, 2, 3}), 1);
    auto r = rescale_instance(s, 2, 0);
    CHECK(r.elements == rats({2, 4, 6}));
    CHECK(r.bound == 2);
    CHECK(solve_subset_variant(r).yes == solve_subset_variant(s).yes);

    auto e = inst(rats({1, 3}), 3, SubsetVariant::Even);
    auto es = rescale_instance(e, 1, 5);
    CHECK(es.elements == rats({6, 8}));
    CHECK(es.bound == 3);
    CHECK(solve_subset_variant(es).yes == solve_subset_variant(e).yes);
    CHECK(rescale_instance(s, 1, 0).elements == s.elements);
    CHECK(error_of([&] { rescale_instance(s, 1, 1); }) == Errc::ShiftOnPlainVariant);

    std::mt19937_64 rng(3);
    for (int t = 0; t < 200; ++t) {
        int n = 2 * (1 + static_cast<int>(rng() % 5));
        auto ev = inst(rand_elements(rng, n, -10, 10), rand_bound(rng, 8), SubsetVariant::Even);
        Rational a = testsupport::rand_rational(rng, 4, -3, 3);
        if (a == 0) a = Rational(-1, 2);
        Rational c = testsupport::rand_rational(rng, 4, -5, 5);
        auto out = rescale_instance(ev, a, c);
        CHECK(solve_subset_variant(out).yes == solve_subset_variant(ev).yes);
        auto back = rescale_instance(out, 1 / a, -c / a);
        CHECK(back.elements == ev.elements);
        CHECK(back.bound == ev.bound);
    }
}

TEST_CASE("pad_to_even")
{
    auto p = pad_to_even(inst(rats({1, 2, 3}), 1));
    CHECK(p.elements == rats({1, 2, 3, 0, 0, 0}));
    CHECK(p.variant == SubsetVariant::Even);
    CHECK(pad_to_even(inst({}, 1)).elements.empty());

    std::mt19937_64 rng(4);
    OracleOptions with_empty;
    with_empty.allow_empty = true;
    for (int t = 0; t < 200; ++t) {
        auto s = inst(rand_elements(rng, 1 + static_cast<int>(rng() % 10), -10, 10), rand_bound(rng, 8));
        CHECK(solve_subset_variant(pad_to_even(s)).yes == solve_subset_variant(s, with_empty).yes);
    }
}

TEST_CASE("partition_to_subset_sum")
{
    auto s = partition_to_subset_sum({rats({1, 1, 2})});
    CHECK(s.elements.size() == 5);
    CHECK(solve_subset_variant(s).yes);
    auto one = partition_to_subset_sum({rats({1})});
    CHECK(!solve_subset_variant(one).yes);
    CHECK(!partition_oracle({rats({1})}).yes);
    // the bound equals the total of the emitted multiset
    Rational sum = 0;
    for (const auto& x : s.elements) sum += x;
    CHECK(sum == s.bound);

    std::mt19937_64 rng(5);
    for (int t = 0; t < 200; ++t) {
        PartitionInstance p;
        for (int i = 0, n = 1 + static_cast<int>(rng() % 8); i < n; ++i)
            p.elements.push_back(testsupport::rand_rational(rng, 2, 1, 6));
        for (auto& x : p.elements)
            if (x == 0) x = 1;
        CHECK(solve_subset_variant(partition_to_subset_sum(p)).yes == partition_oracle(p).yes);
    }
}

TEST_CASE("interval_partition")
{
    auto p = interval_partition(1, Rational(1, 4));
    REQUIRE(p.cells.size() == 6);
    CHECK(p.cells.front().lo == Rational(-3, 2));
    CHECK(p.cells.back().hi == Rational(3, 2));
    for (const auto& c : p.cells) CHECK(c.hi - c.lo == Rational(1, 2));
    CHECK(p.cells[1].lo == -1);
    CHECK(p.cells[p.cells.size() - 2].hi == 1);
    auto q = interval_partition(1, 1);
    CHECK(q.cells.size() == 3);
    auto r = interval_partition(1, Rational(1, 3));
    CHECK(r.cells[r.cells.size() - 2].hi == 1);
}

TEST_CASE("subset_sum_m_program")
{
    auto s = inst(rats({1, 2, 3, 4}), 1, SubsetVariant::M, 1);
    CHECK(evaluate_program(subset_sum_m_program(s, 1)) == solve_subset_variant(s).yes);
    CHECK(error_of([&] { subset_sum_m_program(s, 2); }) == Errc::DegenerateCardinality);

    std::mt19937_64 rng(6);
    int yes = 0;
    for (int t = 0; t < 150; ++t) {
        int n = 2 + static_cast<int>(rng() % 7);
        auto r = inst(rand_elements(rng, n, -10, 10), rand_bound(rng, 10), SubsetVariant::M);
        int m = 1 + static_cast<int>(rng() % (n - 1));
        if (2 * m == n) continue;
        r.m = m;
        auto prog = subset_sum_m_program(r, m);
        for (const auto& term : prog.terms) {
            CHECK(term.window.lo >= -r.bound);
            CHECK(term.window.hi <= r.bound);
        }
        bool want = solve_subset_variant(r).yes;
        yes += want;
        CHECK(evaluate_program(prog) == want);
    }
    CHECK(yes > 20);
}

TEST_CASE("even encoder")
{
    auto s = inst(rats({1, 3}), 3, SubsetVariant::Even);
    auto g = encode_even_subset_sum(s);
    CHECK(g.dist.width() == 4);
    CHECK(decompose_even(g.dist).has_value() == solve_subset_variant(s).yes);

    auto tiny = inst(rats({1, 1}), Rational(1, 1000), SubsetVariant::Even);
    CHECK(solve_subset_variant(tiny).yes);
    CHECK(decompose_even(encode_even_subset_sum(tiny).dist).has_value());

    std::mt19937_64 rng(7);
    int yes = 0, no = 0;
    for (int t = 0; t < 48; ++t) {
        int n = 2 * (1 + t % 4);
        auto r = inst(rand_elements(rng, n, -5, 5), rand_bound(rng, 6), SubsetVariant::Even);
        auto gg = encode_even_subset_sum(r);
        Rational sb = 0;
        for (const auto& b : gg.b) {
            sb += b;
            CHECK(abs(b) < Rational(1, 4) / (n * n));
        }
        CHECK(sb > 0);
        bool want = solve_subset_variant(r).yes;
        (want ? yes : no)++;
        CHECK(decompose_even(gg.dist).has_value() == want);
    }
    CHECK(yes > 5);
    CHECK(no > 5);
    CHECK(error_of([] { encode_even_subset_sum(inst(rats({1, 2, 3}), 1, SubsetVariant::Even)); }) == Errc::OddDegree);
}

TEST_CASE("total-bound encoder matches the plain oracle")
{
    std::mt19937_64 rng(8);
    int yes = 0, no = 0;
    for (int t = 0; t < 40; ++t) {
        int n = 2 + static_cast<int>(rng() % 4);
        auto el = rand_elements(rng, n, -6, 6, 2);
        Rational sum = 0;
        for (const auto& x : el) sum += x;
        if (sum <= 0) continue;
        auto s = inst(el, sum);
        bool want = solve_subset_variant(s).yes;
        (want ? yes : no)++;
        CHECK(decompose(encode_subset_sum(s).dist).has_value() == want);
    }
    CHECK(yes > 3);
    CHECK(no > 3);
}

TEST_CASE("partition pipeline and the eps encoder")
{
    auto yes_inst = partition_to_subset_sum({rats({1, 1, 2})});
    CHECK(decompose(encode_subset_sum(yes_inst).dist).has_value());
    CHECK(encode_subset_sum_eps(yes_inst, 0).dist == encode_subset_sum(yes_inst).dist);
    CHECK(decompose_eps(encode_subset_sum_eps(yes_inst, Rational(1, 10000)).dist, Rational(1, 10000)));

    auto no_inst = partition_to_subset_sum({rats({1, 1, 3})});
    CHECK(!decompose(encode_subset_sum(no_inst).dist));
    CHECK(!decompose_eps(encode_subset_sum_eps(no_inst, Rational(1, 10000)).dist, Rational(1, 10000)));

    std::mt19937_64 rng(9);
    Rational eps(1, 1000000);
    for (int t = 0; t < 100; ++t) {
        auto p = rand_partition(rng, 2 + static_cast<int>(rng() % 4));
        auto s = partition_to_subset_sum(p);
        bool want = solve_subset_variant(eps_relaxed_instance(s, eps)).yes;
        CHECK(want == partition_oracle(p).yes);
        CHECK(decompose_eps(encode_subset_sum_eps(s, eps).dist, eps).has_value() == want);
    }
}
