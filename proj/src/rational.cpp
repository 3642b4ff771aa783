#include "divisikit/rational.hpp"
#include "divisikit/error.hpp"

#include <cctype>
#include <cmath>

namespace divisikit {

namespace {

Integer pow10(unsigned long e)
{
    Integer r;
    mpz_ui_pow_ui(r.get_mpz_t(), 10, e);
    return r;
}

bool all_digits(const std::string& s)
{
    if (s.empty()) return false;
    for (char c : s)
        if (!std::isdigit(static_cast<unsigned char>(c))) return false;
    return true;
}

Rational parse_decimal(const std::string& s)
{
    std::size_t i = 0;
    bool neg = false;
    if (i < s.size() && (s[i] == '+' || s[i] == '-')) {
        neg = s[i] == '-';
        ++i;
    }
    std::string mant, exps;
    auto epos = s.find_first_of("eE", i);
    if (epos == std::string::npos) {
        mant = s.substr(i);
    } else {
        mant = s.substr(i, epos - i);
        exps = s.substr(epos + 1);
    }
    std::string ip = mant, fp;
    auto dot = mant.find('.');
    if (dot != std::string::npos) {
        ip = mant.substr(0, dot);
        fp = mant.substr(dot + 1);
    }
    if (ip.empty() && fp.empty())
        fail(Errc::ParseError, "malformed number '" + s + "'");
    if ((!ip.empty() && !all_digits(ip)) || (!fp.empty() && !all_digits(fp)))
        fail(Errc::ParseError, "malformed number '" + s + "'");
    long e = 0;
    if (epos != std::string::npos) {
        std::string digits = exps;
        bool eneg = false;
        if (!digits.empty() && (digits[0] == '+' || digits[0] == '-')) {
            eneg = digits[0] == '-';
            digits = digits.substr(1);
        }
        if (!all_digits(digits) || digits.size() > 6)
            fail(Errc::ParseError, "malformed exponent in '" + s + "'");
        e = std::stol(digits);
        if (eneg) e = -e;
    }
    std::string digits = ip + fp;
    Integer num(digits, 10);
    e -= static_cast<long>(fp.size());
    Rational r(num);
    if (e > 0) r *= Rational(pow10(static_cast<unsigned long>(e)));
    if (e < 0) r /= Rational(pow10(static_cast<unsigned long>(-e)));
    r.canonicalize();
    return neg ? Rational(-r) : r;
}

} // namespace

Rational parse_rational(const std::string& raw)
{
    std::string s;
    for (char c : raw)
        if (!std::isspace(static_cast<unsigned char>(c))) s += c;
    if (s.empty()) fail(Errc::ParseError, "empty number");
    auto slash = s.find('/');
    if (slash == std::string::npos) return parse_decimal(s);
    Rational n = parse_decimal(s.substr(0, slash));
    Rational d = parse_decimal(s.substr(slash + 1));
    if (d == 0) fail(Errc::ParseError, "zero denominator in '" + raw + "'");
    Rational r = n / d;
    r.canonicalize();
    return r;
}

std::string to_string(const Rational& q)
{
    return q.get_str();
}

double to_double(const Rational& q)
{
    return q.get_d();
}

Rational from_double(double x)
{
    if (!std::isfinite(x)) fail(Errc::ParseError, "non-finite value");
    Rational r;
    mpq_set_d(r.get_mpq_t(), x);
    return r;
}

Rational abs(const Rational& q)
{
    return q < 0 ? Rational(-q) : q;
}

Rational pow(const Rational& q, unsigned n)
{
    Rational r;
    mpz_pow_ui(r.get_num_mpz_t(), q.get_num_mpz_t(), n);
    mpz_pow_ui(r.get_den_mpz_t(), q.get_den_mpz_t(), n);
    r.canonicalize();
    return r;
}

Rational max_abs(const std::vector<Rational>& v)
{
    Rational m = 0;
    for (const auto& x : v)
        if (abs(x) > m) m = abs(x);
    return m;
}

// Continued-fraction walk: the simplest rational in [lo, hi].
Rational simplest_between(const Rational& lo_in, const Rational& hi_in)
{
    Rational lo = lo_in, hi = hi_in;
    if (lo > hi) std::swap(lo, hi);
    if (lo <= 0 && hi >= 0) return 0;
    if (hi < 0) return -simplest_between(-hi, -lo);
    Integer fl;
    mpz_fdiv_q(fl.get_mpz_t(), lo.get_num_mpz_t(), lo.get_den_mpz_t());
    if (Rational(fl) == lo) return lo;
    if (Rational(fl + 1) <= hi) return Rational(fl + 1);
    // lo and hi share the integer part fl; recurse on reciprocals of fractional parts
    Rational flo = lo - fl, fhi = hi - fl;
    Rational inner = simplest_between(1 / fhi, 1 / flo);
    Rational r = Rational(fl) + 1 / inner;
    r.canonicalize();
    return r;
}

Integer lcm_of_denominators(const std::vector<Rational>& v)
{
    Integer l = 1;
    for (const auto& x : v)
        mpz_lcm(l.get_mpz_t(), l.get_mpz_t(), x.get_den_mpz_t());
    return l;
}

} // namespace divisikit
