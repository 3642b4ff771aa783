// Subset-sum gadgets: products of quadratics x^2 + b_i x + 1 with small b_i.
#include "divisikit/error.hpp"
#include "divisikit/nptools.hpp"

#include <algorithm>

namespace divisikit {

namespace {

Rational binom(int n, int k)
{
    if (k < 0 || k > n) return 0;
    Integer r;
    mpz_bin_uiui(r.get_mpz_t(), static_cast<unsigned long>(n), static_cast<unsigned long>(k));
    return Rational(r);
}

// For a product of n quadratics with |b_i| <= B and |sum b_i| >= G, the sign of
// every odd coefficient follows sum b_i and every even coefficient is positive.
bool sign_dominated(int n, const Rational& B, const Rational& G)
{
    for (int j = 1; j < 2 * n; ++j) {
        Rational tail = 0;
        for (int k = (j % 2 == 0) ? 2 : 3; k <= j && k <= n; k += 2) {
            int x2 = (j - k) / 2;
            if (x2 > n - k) continue;
            tail += binom(n, k) * pow(B, static_cast<unsigned>(k)) * binom(n - k, x2);
        }
        Rational lead = (j % 2 == 0) ? binom(n, j / 2) : binom(n - 1, (j - 1) / 2) * G;
        if (!(tail < lead)) return false;
    }
    return true;
}

Gadget build(const std::vector<Rational>& beta, const Rational& gamma, const std::vector<int>& sizes,
             const GadgetParams& params)
{
    int N = static_cast<int>(beta.size());
    if (params.c <= 0) fail(Errc::DegenerateGadget, "delta constant must be positive");
    Rational mx = max_abs(beta);
    if (mx == 0) fail(Errc::DegenerateGadget, "all transformed elements vanish");
    Rational a0 = params.c / (Rational(N) * N) / mx;
    Rational a = 1;
    while (a > a0) a /= 2;
    while (a * 2 <= a0) a *= 2;
    for (int it = 0;; ++it) {
        if (it > 400) fail(Errc::DegenerateGadget, "no admissible scale found");
        Rational B = a * mx, G = a * gamma;
        bool ok = B < 2;
        for (int n : sizes) ok = ok && sign_dominated(n, B, G);
        if (ok) break;
        a /= 2;
    }
    Gadget g;
    g.a = a;
    Poly f(std::vector<Rational>{1});
    for (const auto& x : beta) {
        g.b.push_back(a * x);
        f = f * Poly({1, g.b.back(), 1});
    }
    for (const auto& c : f.c)
        if (c <= 0) fail(Errc::DegenerateGadget, "gadget product has a coefficient that is not positive");
    g.dist = from_char_poly(f);
    return g;
}

} // namespace

Gadget encode_even_subset_sum(const SubsetSumInstance& s, const GadgetParams& params)
{
    int N = static_cast<int>(s.elements.size());
    if (N < 2 || N % 2 != 0) fail(Errc::OddDegree, "even encoder needs an even number of elements");
    if (s.bound <= 0) fail(Errc::DegenerateGadget, "bound must be positive");
    std::vector<Rational> all = s.elements;
    all.push_back(s.bound);
    Rational q = Rational(lcm_of_denominators(all));
    // differences and the bound share the grid 1/q; moving the bound half a step
    // keeps every half-size subset sum of the transformed elements away from zero
    Rational l_eff = s.bound - 1 / (2 * q);
    Rational mean = 0;
    for (const auto& x : s.elements) mean += x;
    mean /= N;
    std::vector<Rational> beta;
    for (const auto& x : s.elements) beta.push_back(x - mean + l_eff / N);
    return build(beta, 1 / (4 * q), {N / 2, N}, params);
}

namespace {

// Gadget for Subset Sum with bound = total. Differences of the source instance live on
// the grid 1/q; shift moves each element by shift/N (the eps relaxation) and must stay
// below half a grid step so the sign pattern of subset sums is unchanged.
Gadget encode_total_bound(const std::vector<Rational>& elements, const Rational& q, const Rational& shift,
                          const GadgetParams& params)
{
    int N = static_cast<int>(elements.size());
    Rational sum = 0;
    for (const auto& x : elements) sum += x;
    if (sum <= 0) fail(Errc::DegenerateGadget, "element total must be positive");
    Rational rho = 1 / (2 * q);
    if (shift >= rho / 2) fail(Errc::InvalidEpsilon, "epsilon exceeds the resolution of the instance grid");
    std::vector<Rational> beta;
    for (const auto& x : elements) beta.push_back(x + (shift - rho) / N);
    std::vector<int> sizes;
    for (int n = 1; n <= N; ++n) sizes.push_back(n);
    return build(beta, (rho - shift) / N, sizes, params);
}

} // namespace

Gadget encode_subset_sum(const SubsetSumInstance& s, const GadgetParams& params)
{
    return encode_subset_sum_eps(s, 0, params);
}

SubsetSumInstance eps_relaxed_instance(const SubsetSumInstance& s, const Rational& eps)
{
    if (eps < 0) fail(Errc::InvalidEpsilon, "epsilon must be nonnegative");
    SubsetSumInstance out = s;
    int N = static_cast<int>(s.elements.size());
    if (N == 0) return out;
    for (auto& x : out.elements) x += eps / N;
    out.bound = s.bound + eps;
    return out;
}

Gadget encode_subset_sum_eps(const SubsetSumInstance& s, const Rational& eps, const GadgetParams& params)
{
    if (eps < 0) fail(Errc::InvalidEpsilon, "epsilon must be nonnegative");
    if (s.elements.size() < 2) fail(Errc::DegenerateGadget, "encoder needs at least two elements");
    Rational sum = 0;
    for (const auto& x : s.elements) sum += x;
    if (s.bound != sum) fail(Errc::DegenerateGadget, "bound must equal the element total");
    return encode_total_bound(s.elements, Rational(lcm_of_denominators(s.elements)), eps, params);
}

} // namespace divisikit
