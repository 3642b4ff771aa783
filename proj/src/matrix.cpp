#include "divisikit/matrix.hpp"
#include "divisikit/error.hpp"

#include <cmath>

namespace divisikit {

RationalMatrix::RationalMatrix(int dim, std::vector<Rational> entries)
    : dim_(dim), a_(std::move(entries))
{
    if (a_.size() != static_cast<std::size_t>(dim) * dim)
        fail(Errc::DimensionMismatch, "entry count does not match dimension");
}

RationalMatrix RationalMatrix::identity(int dim)
{
    RationalMatrix m(dim);
    for (int i = 0; i < dim; ++i) m(i, i) = 1;
    return m;
}

RationalMatrix RationalMatrix::from_rows(const std::vector<std::vector<Rational>>& rows)
{
    int d = static_cast<int>(rows.size());
    RationalMatrix m(d);
    for (int i = 0; i < d; ++i) {
        if (static_cast<int>(rows[i].size()) != d)
            fail(Errc::DimensionMismatch, "matrix is not square");
        for (int j = 0; j < d; ++j) m(i, j) = rows[i][j];
    }
    return m;
}

Rational RationalMatrix::max_entry() const
{
    Rational m = a_.empty() ? Rational(0) : a_[0];
    for (const auto& x : a_)
        if (x > m) m = x;
    return m;
}

Rational RationalMatrix::min_entry() const
{
    Rational m = a_.empty() ? Rational(0) : a_[0];
    for (const auto& x : a_)
        if (x < m) m = x;
    return m;
}

RationalMatrix RationalMatrix::transpose() const
{
    RationalMatrix t(dim_);
    for (int i = 0; i < dim_; ++i)
        for (int j = 0; j < dim_; ++j) t(j, i) = (*this)(i, j);
    return t;
}

RationalMatrix operator*(const RationalMatrix& x, const RationalMatrix& y)
{
    if (x.dim() != y.dim()) fail(Errc::DimensionMismatch, "matrix product dimension mismatch");
    int d = x.dim();
    RationalMatrix r(d);
    for (int i = 0; i < d; ++i)
        for (int k = 0; k < d; ++k) {
            const Rational& xik = x(i, k);
            if (xik == 0) continue;
            for (int j = 0; j < d; ++j)
                if (y(k, j) != 0) r(i, j) += xik * y(k, j);
        }
    return r;
}

RationalMatrix operator+(const RationalMatrix& x, const RationalMatrix& y)
{
    if (x.dim() != y.dim()) fail(Errc::DimensionMismatch, "matrix sum dimension mismatch");
    RationalMatrix r(x.dim());
    for (int i = 0; i < x.dim(); ++i)
        for (int j = 0; j < x.dim(); ++j) r(i, j) = x(i, j) + y(i, j);
    return r;
}

RationalMatrix operator-(const RationalMatrix& x, const RationalMatrix& y)
{
    return x + Rational(-1) * y;
}

RationalMatrix operator*(const Rational& s, const RationalMatrix& x)
{
    RationalMatrix r(x.dim());
    for (int i = 0; i < x.dim(); ++i)
        for (int j = 0; j < x.dim(); ++j) r(i, j) = s * x(i, j);
    return r;
}

RationalMatrix kron(const RationalMatrix& x, const RationalMatrix& y)
{
    int a = x.dim(), b = y.dim();
    RationalMatrix r(a * b);
    for (int i = 0; i < a; ++i)
        for (int j = 0; j < a; ++j) {
            if (x(i, j) == 0) continue;
            for (int k = 0; k < b; ++k)
                for (int l = 0; l < b; ++l) r(i * b + k, j * b + l) = x(i, j) * y(k, l);
        }
    return r;
}

Rational linf_distance(const RationalMatrix& x, const RationalMatrix& y)
{
    if (x.dim() != y.dim()) fail(Errc::DimensionMismatch, "dimension mismatch");
    Rational m = 0;
    for (std::size_t i = 0; i < x.entries().size(); ++i) {
        Rational d = abs(x.entries()[i] - y.entries()[i]);
        if (d > m) m = d;
    }
    return m;
}

MatrixClass classify_matrix(const RationalMatrix& m)
{
    MatrixClass c;
    int d = m.dim();
    c.nonnegative = true;
    for (const auto& x : m.entries())
        if (x < 0) c.nonnegative = false;
    bool rows = true, cols = true;
    for (int i = 0; i < d; ++i) {
        Rational rs = 0, cs = 0;
        for (int j = 0; j < d; ++j) {
            rs += m(i, j);
            cs += m(j, i);
        }
        rows = rows && rs == 1;
        cols = cols && cs == 1;
    }
    c.stochastic = c.nonnegative && rows;
    c.doubly_stochastic = c.stochastic && cols;
    return c;
}

NumericMatrix to_numeric(const RationalMatrix& m)
{
    NumericMatrix r(m.dim());
    for (std::size_t i = 0; i < r.a.size(); ++i) r.a[i] = m.entries()[i].get_d();
    return r;
}

RationalMatrix to_rational(const NumericMatrix& m)
{
    std::vector<Rational> e;
    e.reserve(m.a.size());
    for (double x : m.a) e.push_back(from_double(x));
    return RationalMatrix(m.dim, std::move(e));
}

ComplexRationalMatrix::ComplexRationalMatrix(const RationalMatrix& m)
    : dim(m.dim()), a(m.entries().size())
{
    for (std::size_t i = 0; i < a.size(); ++i) a[i].re = m.entries()[i];
}

bool ComplexRationalMatrix::is_real() const
{
    for (const auto& z : a)
        if (z.im != 0) return false;
    return true;
}

RationalMatrix ComplexRationalMatrix::real_part() const
{
    std::vector<Rational> e;
    e.reserve(a.size());
    for (const auto& z : a) e.push_back(z.re);
    return RationalMatrix(dim, std::move(e));
}

} // namespace divisikit
