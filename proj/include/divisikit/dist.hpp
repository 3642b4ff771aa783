#pragma once

#include "divisikit/rational.hpp"

#include <complex>
#include <cstddef>
#include <vector>

namespace divisikit {

class RationalMatrix;

// Dense polynomial, lowest degree first. The zero polynomial has no coefficients.
struct Poly {
    std::vector<Rational> c;

    Poly() = default;
    explicit Poly(std::vector<Rational> coeffs);

    int degree() const { return static_cast<int>(c.size()) - 1; }
    bool is_zero() const { return c.empty(); }
    Rational operator[](std::size_t i) const { return i < c.size() ? c[i] : Rational(0); }
    const Rational& lead() const { return c.back(); }
    void trim();

    bool nonnegative() const;
    Rational eval(const Rational& x) const;
    Poly derivative() const;

    friend bool operator==(const Poly& a, const Poly& b) { return a.c == b.c; }
};

Poly operator+(const Poly& a, const Poly& b);
Poly operator-(const Poly& a, const Poly& b);
Poly operator*(const Poly& a, const Poly& b);
Poly operator*(const Rational& s, const Poly& a);
Poly pow(const Poly& a, unsigned n);
// Euclidean division; b must be nonzero.
void divmod(const Poly& a, const Poly& b, Poly& q, Poly& r);
Poly monic(const Poly& a);
Poly gcd(const Poly& a, const Poly& b);
Poly reversed(const Poly& a);

// f(1)=1 for nonnegative polynomials, monic otherwise.
Poly canonical(const Poly& f);
// Equal up to a positive scalar.
bool equivalent(const Poly& a, const Poly& b);

// Aligned pmf: first and last entries nonzero, exact sum 1.
class FiniteDistribution {
public:
    FiniteDistribution() : p_{Rational(1)} {}
    // Validates the aligned-pmf invariants.
    static FiniteDistribution from_aligned(std::vector<Rational> probs);

    const std::vector<Rational>& probs() const { return p_; }
    std::size_t size() const { return p_.size(); }
    int width() const { return static_cast<int>(p_.size()) - 1; }
    std::size_t support_size() const;
    const Rational& operator[](std::size_t k) const { return p_[k]; }

    friend bool operator==(const FiniteDistribution& a, const FiniteDistribution& b) { return a.p_ == b.p_; }
    friend bool operator!=(const FiniteDistribution& a, const FiniteDistribution& b) { return !(a == b); }

private:
    std::vector<Rational> p_;
};

struct NormalizedDistribution {
    FiniteDistribution dist;
    int shift = 0;
};

NormalizedDistribution normalize_distribution(const std::vector<Rational>& raw);

Poly to_char_poly(const FiniteDistribution& d);
FiniteDistribution from_char_poly(const Poly& f);

std::complex<double> eval_characteristic(const FiniteDistribution& d, double omega);

struct NormSpec {
    int N = 0;
    // 1, 2, or 0 for the maximum norm
    int p = 0;
};
constexpr int kInfNorm = 0;

double poly_norm(const Poly& f, const NormSpec& spec);
// Maximum norm computed exactly.
Rational poly_norm_inf(const Poly& f);

FiniteDistribution convolve(const FiniteDistribution& a, const FiniteDistribution& b);
FiniteDistribution convolve_power(const FiniteDistribution& a, unsigned n);

RationalMatrix transition_matrix(const FiniteDistribution& d, int size);

// Max-norm distance between coefficient vectors, zero padded.
Rational linf_distance(const std::vector<Rational>& a, const std::vector<Rational>& b);

} // namespace divisikit
