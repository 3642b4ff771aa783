#pragma once

#include "divisikit/rational.hpp"

#include <complex>
#include <vector>

namespace divisikit {

// Square matrix with exact entries, row-major.
class RationalMatrix {
public:
    RationalMatrix() = default;
    explicit RationalMatrix(int dim) : dim_(dim), a_(static_cast<std::size_t>(dim) * dim) {}
    RationalMatrix(int dim, std::vector<Rational> entries);

    static RationalMatrix identity(int dim);
    static RationalMatrix from_rows(const std::vector<std::vector<Rational>>& rows);

    int dim() const { return dim_; }
    Rational& operator()(int i, int j) { return a_[static_cast<std::size_t>(i) * dim_ + j]; }
    const Rational& operator()(int i, int j) const { return a_[static_cast<std::size_t>(i) * dim_ + j]; }
    const std::vector<Rational>& entries() const { return a_; }

    Rational max_entry() const;
    Rational min_entry() const;
    RationalMatrix transpose() const;

    friend bool operator==(const RationalMatrix& x, const RationalMatrix& y) { return x.dim_ == y.dim_ && x.a_ == y.a_; }

private:
    int dim_ = 0;
    std::vector<Rational> a_;
};

RationalMatrix operator*(const RationalMatrix& x, const RationalMatrix& y);
RationalMatrix operator+(const RationalMatrix& x, const RationalMatrix& y);
RationalMatrix operator-(const RationalMatrix& x, const RationalMatrix& y);
RationalMatrix operator*(const Rational& s, const RationalMatrix& x);
RationalMatrix kron(const RationalMatrix& x, const RationalMatrix& y);
Rational linf_distance(const RationalMatrix& x, const RationalMatrix& y);

struct MatrixClass {
    bool nonnegative = false;
    bool stochastic = false;
    bool doubly_stochastic = false;
};

MatrixClass classify_matrix(const RationalMatrix& m);

// Floating-point square matrix (row-major), used for numeric roots.
struct NumericMatrix {
    int dim = 0;
    std::vector<double> a;

    NumericMatrix() = default;
    explicit NumericMatrix(int d) : dim(d), a(static_cast<std::size_t>(d) * d, 0.0) {}
    double& operator()(int i, int j) { return a[static_cast<std::size_t>(i) * dim + j]; }
    double operator()(int i, int j) const { return a[static_cast<std::size_t>(i) * dim + j]; }
};

NumericMatrix to_numeric(const RationalMatrix& m);
RationalMatrix to_rational(const NumericMatrix& m);

using Complex = std::complex<double>;

struct ComplexRational {
    Rational re, im;
    friend bool operator==(const ComplexRational& x, const ComplexRational& y) { return x.re == y.re && x.im == y.im; }
};

// Square matrix with exact complex entries, row-major.
struct ComplexRationalMatrix {
    int dim = 0;
    std::vector<ComplexRational> a;

    ComplexRationalMatrix() = default;
    explicit ComplexRationalMatrix(int d) : dim(d), a(static_cast<std::size_t>(d) * d) {}
    explicit ComplexRationalMatrix(const RationalMatrix& m);
    ComplexRational& operator()(int i, int j) { return a[static_cast<std::size_t>(i) * dim + j]; }
    const ComplexRational& operator()(int i, int j) const { return a[static_cast<std::size_t>(i) * dim + j]; }
    bool is_real() const;
    RationalMatrix real_part() const;
};

struct ComplexMatrix {
    int dim = 0;
    std::vector<Complex> a;

    ComplexMatrix() = default;
    explicit ComplexMatrix(int d) : dim(d), a(static_cast<std::size_t>(d) * d) {}
    Complex& operator()(int i, int j) { return a[static_cast<std::size_t>(i) * dim + j]; }
    Complex operator()(int i, int j) const { return a[static_cast<std::size_t>(i) * dim + j]; }
};

} // namespace divisikit
