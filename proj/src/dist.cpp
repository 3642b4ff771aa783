#include "divisikit/dist.hpp"
#include "divisikit/error.hpp"
#include "divisikit/matrix.hpp"

#include <cmath>

namespace divisikit {

Poly::Poly(std::vector<Rational> coeffs) : c(std::move(coeffs))
{
    trim();
}

void Poly::trim()
{
    while (!c.empty() && c.back() == 0) c.pop_back();
}

bool Poly::nonnegative() const
{
    for (const auto& x : c)
        if (x < 0) return false;
    return true;
}

Rational Poly::eval(const Rational& x) const
{
    Rational r = 0;
    for (auto it = c.rbegin(); it != c.rend(); ++it) r = r * x + *it;
    return r;
}

Poly Poly::derivative() const
{
    std::vector<Rational> d;
    for (std::size_t i = 1; i < c.size(); ++i) d.push_back(c[i] * static_cast<long>(i));
    return Poly(std::move(d));
}

Poly operator+(const Poly& a, const Poly& b)
{
    std::vector<Rational> r(std::max(a.c.size(), b.c.size()));
    for (std::size_t i = 0; i < r.size(); ++i) r[i] = a[i] + b[i];
    return Poly(std::move(r));
}

Poly operator-(const Poly& a, const Poly& b)
{
    std::vector<Rational> r(std::max(a.c.size(), b.c.size()));
    for (std::size_t i = 0; i < r.size(); ++i) r[i] = a[i] - b[i];
    return Poly(std::move(r));
}

Poly operator*(const Poly& a, const Poly& b)
{
    if (a.is_zero() || b.is_zero()) return Poly();
    std::vector<Rational> r(a.c.size() + b.c.size() - 1);
    for (std::size_t i = 0; i < a.c.size(); ++i) {
        if (a.c[i] == 0) continue;
        for (std::size_t j = 0; j < b.c.size(); ++j)
            if (b.c[j] != 0) r[i + j] += a.c[i] * b.c[j];
    }
    return Poly(std::move(r));
}

Poly operator*(const Rational& s, const Poly& a)
{
    std::vector<Rational> r(a.c);
    for (auto& x : r) x *= s;
    return Poly(std::move(r));
}

Poly pow(const Poly& a, unsigned n)
{
    Poly result(std::vector<Rational>{1});
    Poly base = a;
    while (n) {
        if (n & 1u) result = result * base;
        n >>= 1;
        if (n) base = base * base;
    }
    return result;
}

void divmod(const Poly& a, const Poly& b, Poly& q, Poly& r)
{
    if (b.is_zero()) fail(Errc::DimensionMismatch, "division by the zero polynomial");
    std::vector<Rational> rem = a.c;
    int db = b.degree();
    int dq = a.degree() - db;
    std::vector<Rational> quo(dq >= 0 ? dq + 1 : 0);
    for (int k = dq; k >= 0; --k) {
        Rational t = rem[k + db] / b.lead();
        quo[k] = t;
        if (t == 0) continue;
        for (int j = 0; j <= db; ++j) rem[k + j] -= t * b.c[j];
    }
    if (dq >= 0) rem.resize(db);
    q = Poly(std::move(quo));
    r = Poly(std::move(rem));
}

Poly monic(const Poly& a)
{
    if (a.is_zero()) return a;
    return Rational(1 / a.lead()) * a;
}

Poly gcd(const Poly& a, const Poly& b)
{
    Poly x = a, y = b;
    while (!y.is_zero()) {
        Poly q, r;
        divmod(x, y, q, r);
        x = std::move(y);
        y = monic(r);
    }
    return monic(x);
}

Poly reversed(const Poly& a)
{
    std::vector<Rational> r(a.c.rbegin(), a.c.rend());
    return Poly(std::move(r));
}

Poly canonical(const Poly& f)
{
    if (f.is_zero()) return f;
    if (f.nonnegative()) {
        Rational s = 0;
        for (const auto& x : f.c) s += x;
        return Rational(1 / s) * f;
    }
    return monic(f);
}

bool equivalent(const Poly& a, const Poly& b)
{
    if (a.is_zero() || b.is_zero()) return a.is_zero() && b.is_zero();
    if (a.c.size() != b.c.size()) return false;
    if ((a.lead() > 0) != (b.lead() > 0)) return false;
    Rational s = b.lead() / a.lead();
    for (std::size_t i = 0; i < a.c.size(); ++i)
        if (a.c[i] * s != b.c[i]) return false;
    return true;
}

FiniteDistribution FiniteDistribution::from_aligned(std::vector<Rational> probs)
{
    if (probs.empty()) fail(Errc::AllZero, "empty distribution");
    Rational s = 0;
    for (const auto& x : probs) {
        if (x < 0) fail(Errc::NegativeMass, "negative probability mass");
        s += x;
    }
    if (s != 1 || probs.front() == 0 || probs.back() == 0)
        fail(Errc::ParseError, "distribution is not an aligned pmf");
    FiniteDistribution d;
    d.p_ = std::move(probs);
    return d;
}

std::size_t FiniteDistribution::support_size() const
{
    std::size_t n = 0;
    for (const auto& x : p_)
        if (x != 0) ++n;
    return n;
}

NormalizedDistribution normalize_distribution(const std::vector<Rational>& raw)
{
    if (raw.empty()) fail(Errc::AllZero, "empty distribution");
    Rational s = 0;
    for (const auto& x : raw) {
        if (x < 0) fail(Errc::NegativeMass, "negative probability mass");
        s += x;
    }
    if (s == 0) fail(Errc::AllZero, "all entries are zero");
    std::size_t lo = 0, hi = raw.size();
    while (raw[lo] == 0) ++lo;
    while (raw[hi - 1] == 0) --hi;
    std::vector<Rational> p(raw.begin() + static_cast<long>(lo), raw.begin() + static_cast<long>(hi));
    for (auto& x : p) x /= s;
    NormalizedDistribution out;
    out.dist = FiniteDistribution::from_aligned(std::move(p));
    out.shift = static_cast<int>(lo);
    return out;
}

Poly to_char_poly(const FiniteDistribution& d)
{
    return Poly(d.probs());
}

FiniteDistribution from_char_poly(const Poly& f)
{
    if (f.is_zero()) fail(Errc::AllZero, "zero polynomial");
    if (!f.nonnegative()) fail(Errc::NegativeCoefficient, "polynomial has a negative coefficient");
    return normalize_distribution(f.c).dist;
}

std::complex<double> eval_characteristic(const FiniteDistribution& d, double omega)
{
    std::complex<double> r = 0;
    for (std::size_t k = 0; k < d.size(); ++k)
        r += d[k].get_d() * std::polar(1.0, omega * static_cast<double>(k));
    return r;
}

Rational poly_norm_inf(const Poly& f)
{
    return max_abs(f.c);
}

double poly_norm(const Poly& f, const NormSpec& spec)
{
    if (f.degree() > spec.N)
        fail(Errc::DegreeExceedsBound, "polynomial degree exceeds the norm's bound");
    switch (spec.p) {
    case kInfNorm:
        return poly_norm_inf(f).get_d();
    case 1: {
        Rational s = 0;
        for (const auto& x : f.c) s += abs(x);
        return s.get_d();
    }
    case 2: {
        Rational s = 0;
        for (const auto& x : f.c) s += x * x;
        return std::sqrt(s.get_d());
    }
    default:
        fail(Errc::ParseError, "norm order must be 1, 2 or infinity");
    }
}

FiniteDistribution convolve(const FiniteDistribution& a, const FiniteDistribution& b)
{
    // product of aligned pmfs is aligned and sums to one
    return FiniteDistribution::from_aligned((to_char_poly(a) * to_char_poly(b)).c);
}

FiniteDistribution convolve_power(const FiniteDistribution& a, unsigned n)
{
    return FiniteDistribution::from_aligned(pow(to_char_poly(a), n).c);
}

RationalMatrix transition_matrix(const FiniteDistribution& d, int size)
{
    if (size < 1) fail(Errc::DimensionMismatch, "transition matrix size must be positive");
    RationalMatrix m(size);
    for (int i = 0; i < size; ++i)
        for (int j = i; j < size && j - i < static_cast<int>(d.size()); ++j) m(i, j) = d[j - i];
    return m;
}

Rational linf_distance(const std::vector<Rational>& a, const std::vector<Rational>& b)
{
    Rational m = 0;
    std::size_t n = std::max(a.size(), b.size());
    for (std::size_t i = 0; i < n; ++i) {
        Rational x = i < a.size() ? a[i] : Rational(0);
        Rational y = i < b.size() ? b[i] : Rational(0);
        Rational dlt = abs(x - y);
        if (dlt > m) m = dlt;
    }
    return m;
}

} // namespace divisikit
