#include "divisikit/roots.hpp"
#include "divisikit/error.hpp"

#include <algorithm>
#include <cmath>

namespace divisikit {

RootReport verify_root(const NumericMatrix& q, const RationalMatrix& p)
{
    if (q.dim != p.dim()) fail(Errc::DimensionMismatch, "root and target differ in dimension");
    int d = q.dim;
    RootReport r;
    r.min_entry = d ? q(0, 0) : 0;
    for (int i = 0; i < d; ++i) {
        long double rs = 0, cs = 0;
        for (int j = 0; j < d; ++j) {
            long double s = 0;
            for (int k = 0; k < d; ++k) s += static_cast<long double>(q(i, k)) * q(k, j);
            double dev = static_cast<double>(std::fabs(s - to_double(p(i, j))));
            r.max_deviation = std::max(r.max_deviation, dev);
            r.min_entry = std::min(r.min_entry, q(i, j));
            rs += q(i, j);
            cs += q(j, i);
        }
        r.max_row_sum_deviation = std::max(r.max_row_sum_deviation, static_cast<double>(std::fabs(rs - 1)));
        r.max_col_sum_deviation = std::max(r.max_col_sum_deviation, static_cast<double>(std::fabs(cs - 1)));
    }
    return r;
}

ExactRootReport verify_root(const RationalMatrix& q, const RationalMatrix& p)
{
    if (q.dim() != p.dim()) fail(Errc::DimensionMismatch, "root and target differ in dimension");
    int d = q.dim();
    ExactRootReport r;
    RationalMatrix sq = q * q;
    r.max_deviation = linf_distance(sq, p);
    r.min_entry = q.min_entry();
    for (int i = 0; i < d; ++i) {
        Rational rs = 0, cs = 0;
        for (int j = 0; j < d; ++j) {
            rs += q(i, j);
            cs += q(j, i);
        }
        r.max_row_sum_deviation = std::max(r.max_row_sum_deviation, abs(Rational(rs - 1)));
        r.max_col_sum_deviation = std::max(r.max_col_sum_deviation, abs(Rational(cs - 1)));
    }
    return r;
}

std::optional<NumericMatrix> accept_branch(const ComplexMatrix& r, RootMode mode, double tol)
{
    int d = r.dim;
    NumericMatrix q(d);
    for (int i = 0; i < d; ++i)
        for (int j = 0; j < d; ++j) {
            Complex z = r(i, j);
            if (std::fabs(z.imag()) > tol || z.real() < -tol) return std::nullopt;
            q(i, j) = std::max(z.real(), 0.0);
        }
    if (mode == RootMode::nonnegative) return q;
    for (int i = 0; i < d; ++i) {
        double rs = 0, cs = 0;
        for (int j = 0; j < d; ++j) {
            rs += q(i, j);
            cs += q(j, i);
        }
        if (std::fabs(rs - 1) > tol) return std::nullopt;
        if (mode == RootMode::doubly_stochastic && std::fabs(cs - 1) > tol) return std::nullopt;
    }
    return q;
}

std::optional<RootMatch> find_root(const RationalMatrix& m, RootMode mode, const RootOptions& opt)
{
    MatrixClass cls = classify_matrix(m);
    if (mode != RootMode::nonnegative && !cls.stochastic)
        fail(Errc::NotStochasticInput, "input matrix is not stochastic");
    // the square of a doubly stochastic matrix is doubly stochastic
    if (mode == RootMode::doubly_stochastic && !cls.doubly_stochastic) return std::nullopt;
    if (!cls.nonnegative) return std::nullopt;

    RootOptions o = opt;
    o.fix_perron = opt.fix_perron.value_or(true);
    RootFamily fam = enumerate_roots(m, o);
    for (std::size_t k = 0; k < fam.branch_count(); ++k) {
        auto q = accept_branch(fam.branch(k), mode, opt.tol);
        if (!q) continue;
        RootReport rep = verify_root(*q, m);
        if (rep.max_deviation > opt.tol) continue;
        return RootMatch{std::move(*q), k, rep};
    }
    return std::nullopt;
}

std::optional<RootMatch> find_stochastic_root(const RationalMatrix& p, const RootOptions& opt)
{
    return find_root(p, RootMode::stochastic, opt);
}

std::optional<RootMatch> find_nonnegative_root(const RationalMatrix& m, const RootOptions& opt)
{
    return find_root(m, RootMode::nonnegative, opt);
}

} // namespace divisikit
