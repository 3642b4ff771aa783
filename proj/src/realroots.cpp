// Real factorization: exact squarefree split, then Aberth iteration at
// escalating precision until the reassembled product matches the input.
#include "divisikit/decompose.hpp"
#include "divisikit/error.hpp"

#include <boost/multiprecision/cpp_bin_float.hpp>

#include <algorithm>
#include <cmath>
#include <sstream>

namespace divisikit {

namespace {

namespace mp = boost::multiprecision;
using F128 = mp::number<mp::cpp_bin_float<128, mp::digit_base_2>, mp::et_off>;
using F256 = mp::number<mp::cpp_bin_float<256, mp::digit_base_2>, mp::et_off>;
using F512 = mp::number<mp::cpp_bin_float<512, mp::digit_base_2>, mp::et_off>;

template <class T>
T from_rational(const Rational& q)
{
    if constexpr (std::is_same_v<T, double>) {
        return q.get_d();
    } else {
        return T(q.get_num().get_str()) / T(q.get_den().get_str());
    }
}

template <class T>
Rational to_rational(const T& x)
{
    if constexpr (std::is_same_v<T, double>) {
        return from_double(x);
    } else {
        std::ostringstream os;
        os << std::scientific << std::setprecision(std::numeric_limits<T>::max_digits10) << x;
        return parse_rational(os.str());
    }
}

template <class T>
struct Cx {
    T re, im;
};

template <class T> Cx<T> operator+(const Cx<T>& a, const Cx<T>& b) { return {a.re + b.re, a.im + b.im}; }
template <class T> Cx<T> operator-(const Cx<T>& a, const Cx<T>& b) { return {a.re - b.re, a.im - b.im}; }
template <class T> Cx<T> operator*(const Cx<T>& a, const Cx<T>& b)
{
    return {a.re * b.re - a.im * b.im, a.re * b.im + a.im * b.re};
}
template <class T> Cx<T> operator/(const Cx<T>& a, const Cx<T>& b)
{
    T den = b.re * b.re + b.im * b.im;
    return {(a.re * b.re + a.im * b.im) / den, (a.im * b.re - a.re * b.im) / den};
}
template <class T> T norm_of(const Cx<T>& a)
{
    using std::sqrt;
    return sqrt(a.re * a.re + a.im * a.im);
}

template <class T>
std::vector<Cx<T>> aberth(const std::vector<T>& c)
{
    using std::cos;
    using std::pow;
    using std::sin;
    using std::fabs;
    using std::abs;
    int n = static_cast<int>(c.size()) - 1;
    std::vector<Cx<T>> z(n);
    if (n == 0) return z;
    if (n == 1) {
        z[0] = {-c[0] / c[1], T(0)};
        return z;
    }
    T radius = pow(abs(c[0] / c[n]), T(1) / T(n));
    if (!(radius > 0)) radius = T(1);
    const double tau = 6.283185307179586;
    for (int k = 0; k < n; ++k) {
        double ang = tau * k / n + 0.4;
        z[k] = {radius * T(std::cos(ang)), radius * T(std::sin(ang))};
    }
    T eps = std::numeric_limits<T>::epsilon();
    for (int iter = 0; iter < 800; ++iter) {
        T maxstep = 0;
        for (int k = 0; k < n; ++k) {
            Cx<T> p{c[n], T(0)}, dp{T(0), T(0)};
            for (int i = n - 1; i >= 0; --i) {
                dp = dp * z[k] + p;
                p = p * z[k] + Cx<T>{c[i], T(0)};
            }
            if (p.re == 0 && p.im == 0) continue;
            Cx<T> ratio = p / dp;
            Cx<T> s{T(0), T(0)};
            for (int j = 0; j < n; ++j)
                if (j != k) s = s + Cx<T>{T(1), T(0)} / (z[k] - z[j]);
            Cx<T> w = ratio / (Cx<T>{T(1), T(0)} - ratio * s);
            z[k] = z[k] - w;
            T rel = norm_of(w) / (T(1) + norm_of(z[k]));
            if (rel > maxstep) maxstep = rel;
        }
        if (maxstep < eps * 4) break;
    }
    return z;
}

struct NumFactor {
    std::vector<Rational> coeffs;
    int mult;
};

// Squarefree parts by Yun's algorithm: f = lead * prod s_i^i.
std::vector<std::pair<Poly, int>> squarefree(const Poly& f0)
{
    std::vector<std::pair<Poly, int>> out;
    Poly f = monic(f0);
    Poly fp = f.derivative();
    Poly b = gcd(f, fp);
    Poly c, d, r;
    divmod(f, b, c, r);
    Poly fpb;
    divmod(fp, b, fpb, r);
    d = fpb - c.derivative();
    int i = 1;
    while (c.degree() > 0) {
        Poly a = gcd(c, d);
        if (a.degree() > 0) out.emplace_back(a, i);
        Poly cn, dn;
        divmod(c, a, cn, r);
        divmod(d, a, dn, r);
        c = cn;
        d = dn - c.derivative();
        ++i;
    }
    return out;
}

template <class T>
bool factor_at(const std::vector<std::pair<Poly, int>>& parts, const Poly& f, int zero_mult, double tol,
               std::vector<NumFactor>& out, double& residual)
{
    using std::abs;
    using std::sqrt;
    out.clear();
    int bits = std::numeric_limits<T>::digits;
    using std::pow;
    T thr = pow(T(2), T(-bits / 2));
    std::vector<std::vector<T>> tcoeffs;  // factor coefficients in working precision
    std::vector<int> tmult;
    if (zero_mult > 0) {
        tcoeffs.push_back({T(0), T(1)});
        tmult.push_back(zero_mult);
    }
    for (const auto& [s, mult] : parts) {
        std::vector<T> c;
        for (const auto& x : s.c) c.push_back(from_rational<T>(x));
        auto z = aberth(c);
        std::vector<Cx<T>> upper, lower;
        for (const auto& r : z) {
            T scale = T(1) + norm_of(r);
            if (abs(r.im) <= thr * scale) {
                tcoeffs.push_back({-r.re, T(1)});
                tmult.push_back(mult);
            } else if (r.im > 0) {
                upper.push_back(r);
            } else {
                lower.push_back(r);
            }
        }
        if (upper.size() != lower.size()) return false;
        std::vector<bool> used(lower.size(), false);
        for (const auto& u : upper) {
            int best = -1;
            T bd = 0;
            for (std::size_t j = 0; j < lower.size(); ++j) {
                if (used[j]) continue;
                T dist = norm_of(Cx<T>{u.re - lower[j].re, u.im + lower[j].im});
                if (best < 0 || dist < bd) {
                    best = static_cast<int>(j);
                    bd = dist;
                }
            }
            used[best] = true;
            T re = (u.re + lower[best].re) / 2;
            T im = (u.im - lower[best].im) / 2;
            tcoeffs.push_back({re * re + im * im, -2 * re, T(1)});
            tmult.push_back(mult);
        }
    }
    // reassemble and compare with the input
    std::vector<T> prod{from_rational<T>(f.lead())};
    for (std::size_t k = 0; k < tcoeffs.size(); ++k)
        for (int r = 0; r < tmult[k]; ++r) {
            std::vector<T> next(prod.size() + tcoeffs[k].size() - 1, T(0));
            for (std::size_t i = 0; i < prod.size(); ++i)
                for (std::size_t j = 0; j < tcoeffs[k].size(); ++j) next[i + j] += prod[i] * tcoeffs[k][j];
            prod = std::move(next);
        }
    if (static_cast<int>(prod.size()) != f.degree() + 1) return false;
    T err = 0, mx = 0;
    for (int i = 0; i <= f.degree(); ++i) {
        T fi = from_rational<T>(f.c[i]);
        if (abs(fi) > mx) mx = abs(fi);
        T e = abs(prod[i] - fi);
        if (e > err) err = e;
    }
    residual = static_cast<double>(err / mx);
    if (!(residual <= tol)) return false;
    for (std::size_t k = 0; k < tcoeffs.size(); ++k) {
        NumFactor nf;
        for (const auto& x : tcoeffs[k]) nf.coeffs.push_back(to_rational(x));
        nf.coeffs.back() = 1;
        nf.mult = tmult[k];
        out.push_back(std::move(nf));
    }
    return true;
}

// Try to replace numeric factors by nearby simple rationals that reproduce f exactly.
bool reconstruct(std::vector<RealFactor>& fs, const Poly& f, int bits)
{
    Rational window = 1;
    mpq_div_2exp(window.get_mpq_t(), window.get_mpq_t(), static_cast<mp_bitcnt_t>(bits * 3 / 5));
    std::vector<RealFactor> cand = fs;
    for (auto& fac : cand)
        for (auto& x : fac.coeffs) {
            Rational w = window * (1 + abs(x));
            x = simplest_between(x - w, x + w);
        }
    Poly prod(std::vector<Rational>{f.lead()});
    for (const auto& fac : cand)
        prod = prod * pow(Poly(fac.coeffs), static_cast<unsigned>(fac.multiplicity));
    if (!(prod == f)) return false;
    fs = std::move(cand);
    return true;
}

} // namespace

RealFactorization factor_real(const Poly& f, int max_precision_bits, double tol)
{
    if (f.is_zero() || f.degree() < 1) fail(Errc::DegreeExceedsBound, "factorization needs degree at least 1");
    if (!f.nonnegative()) fail(Errc::NegativeCoefficient, "polynomial has a negative coefficient");
    int zero_mult = 0;
    while (f.c[zero_mult] == 0) ++zero_mult;
    Poly g(std::vector<Rational>(f.c.begin() + zero_mult, f.c.end()));
    auto parts = g.degree() > 0 ? squarefree(g) : std::vector<std::pair<Poly, int>>{};

    RealFactorization out;
    out.scale = f.lead();
    std::vector<NumFactor> nf;
    double residual = 0;
    bool ok = false;
    int bits = 53;
    if (!ok) ok = factor_at<double>(parts, f, zero_mult, tol, nf, residual), bits = 53;
    if (!ok && max_precision_bits >= 128) ok = factor_at<F128>(parts, f, zero_mult, tol, nf, residual), bits = 128;
    if (!ok && max_precision_bits >= 256) ok = factor_at<F256>(parts, f, zero_mult, tol, nf, residual), bits = 256;
    if (!ok && max_precision_bits >= 512) ok = factor_at<F512>(parts, f, zero_mult, tol, nf, residual), bits = 512;
    if (!ok) fail(Errc::PrecisionExhausted, "root finding did not reach the tolerance");
    out.residual = residual;
    out.precision_bits = bits;
    for (auto& x : nf) out.factors.push_back(RealFactor{std::move(x.coeffs), x.mult});
    // merge identical factors coming from different squarefree parts
    std::sort(out.factors.begin(), out.factors.end(), [](const RealFactor& a, const RealFactor& b) {
        if (a.degree() != b.degree()) return a.degree() < b.degree();
        return a.coeffs < b.coeffs;
    });
    out.exact = reconstruct(out.factors, f, bits);
    if (out.exact) {
        std::sort(out.factors.begin(), out.factors.end(), [](const RealFactor& a, const RealFactor& b) {
            if (a.degree() != b.degree()) return a.degree() < b.degree();
            return a.coeffs < b.coeffs;
        });
        out.residual = 0;
    }
    return out;
}

} // namespace divisikit
