#pragma once

#include "divisikit/dist.hpp"

#include <optional>
#include <vector>

namespace divisikit {

// Monic real factor, lowest degree first: x + r or x^2 + b x + c.
struct RealFactor {
    std::vector<Rational> coeffs;
    int multiplicity = 1;
    int degree() const { return static_cast<int>(coeffs.size()) - 1; }
};

struct RealFactorization {
    std::vector<RealFactor> factors;
    Rational scale;            // leading coefficient of the input
    double residual = 0;       // max coefficient error of the reassembled product, relative to max |f_i|
    int precision_bits = 53;   // precision at which the roots were accepted
    bool exact = false;        // factor coefficients reconstructed as exact rationals
};

constexpr double kDefaultTol = 1e-9;

RealFactorization factor_real(const Poly& f, int max_precision_bits = 256, double tol = kDefaultTol);

struct Decomposition {
    FiniteDistribution left, right;
    bool exact = false;
    Rational error;  // max-norm distance of left*right to the input
};

std::optional<Decomposition> decompose(const FiniteDistribution& d, double tol = kDefaultTol);
std::optional<Decomposition> decompose_m(const FiniteDistribution& d, int m, double tol = kDefaultTol);
std::optional<Decomposition> decompose_even(const FiniteDistribution& d, double tol = kDefaultTol);
std::optional<Decomposition> decompose_eps(const FiniteDistribution& d, const Rational& eps,
                                           double tol = kDefaultTol);
bool weak_decomposability(const FiniteDistribution& d, const Rational& eps);

struct CompleteDecompositions {
    std::vector<std::vector<FiniteDistribution>> groupings;
    bool truncated = false;
};

CompleteDecompositions enumerate_complete_decompositions(const FiniteDistribution& d, double tol,
                                                         int limit);

enum class FamilyVariant { Standard, Extended };

FiniteDistribution counterexample_family(int n, FamilyVariant v = FamilyVariant::Standard);

} // namespace divisikit
