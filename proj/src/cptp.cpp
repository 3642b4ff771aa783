#include "divisikit/cptp.hpp"
#include "divisikit/error.hpp"

#include <Eigen/Dense>
#include <Eigen/Eigenvalues>

#include <algorithm>
#include <cmath>

namespace divisikit {

namespace {

int root_dim(int n)
{
    int d = static_cast<int>(std::lround(std::sqrt(static_cast<double>(n))));
    if (n <= 0 || d * d != n) fail(Errc::NotSquareDimension, "dimension is not a perfect square");
    return d;
}

template <class M>
M reshuffle(const M& b, int n)
{
    int d = root_dim(n);
    M c(n);
    for (int i = 0; i < d; ++i)
        for (int j = 0; j < d; ++j)
            for (int k = 0; k < d; ++k)
                for (int l = 0; l < d; ++l) c(i * d + j, k * d + l) = b(i * d + k, j * d + l);
    return c;
}

ComplexRational cmul(const ComplexRational& x, const ComplexRational& y)
{
    return {x.re * y.re - x.im * y.im, x.re * y.im + x.im * y.re};
}

ComplexRational conj(const ComplexRational& x) { return {x.re, -x.im}; }

bool is_zero(const ComplexRational& x) { return x.re == 0 && x.im == 0; }

double min_hermitian_eigenvalue(const ComplexMatrix& c)
{
    int n = c.dim;
    Eigen::MatrixXcd h(n, n);
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) h(i, j) = (c(i, j) + std::conj(c(j, i))) / 2.0;
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(h, Eigen::EigenvaluesOnly);
    return es.eigenvalues().minCoeff();
}

ComplexMatrix to_numeric(const ComplexRationalMatrix& m)
{
    ComplexMatrix r(m.dim);
    for (std::size_t i = 0; i < m.a.size(); ++i) r.a[i] = {to_double(m.a[i].re), to_double(m.a[i].im)};
    return r;
}

} // namespace

RationalMatrix emb(const RationalMatrix& a)
{
    int d = a.dim();
    RationalMatrix b(d * d);
    for (int i = 0; i < d; ++i)
        for (int j = 0; j < d; ++j) b(i * d + i, j * d + j) = a(i, j);
    return b;
}

ComplexRationalMatrix emb(const ComplexRationalMatrix& a)
{
    int d = a.dim;
    ComplexRationalMatrix b(d * d);
    for (int i = 0; i < d; ++i)
        for (int j = 0; j < d; ++j) b(i * d + i, j * d + j) = a(i, j);
    return b;
}

ComplexRationalMatrix choi(const ComplexRationalMatrix& b) { return reshuffle(b, b.dim); }
RationalMatrix choi(const RationalMatrix& b) { return reshuffle(b, b.dim()); }
ComplexMatrix choi(const ComplexMatrix& b) { return reshuffle(b, b.dim); }

ComplexRationalMatrix partial_trace_second(const ComplexRationalMatrix& c)
{
    int d = root_dim(c.dim);
    ComplexRationalMatrix t(d);
    for (int i = 0; i < d; ++i)
        for (int k = 0; k < d; ++k)
            for (int j = 0; j < d; ++j) {
                t(i, k).re += c(i * d + j, k * d + j).re;
                t(i, k).im += c(i * d + j, k * d + j).im;
            }
    return t;
}

ComplexMatrix partial_trace_second(const ComplexMatrix& c)
{
    int d = root_dim(c.dim);
    ComplexMatrix t(d);
    for (int i = 0; i < d; ++i)
        for (int k = 0; k < d; ++k)
            for (int j = 0; j < d; ++j) t(i, k) += c(i * d + j, k * d + j);
    return t;
}

bool is_psd_exact(const ComplexRationalMatrix& h0)
{
    int n = h0.dim;
    for (int i = 0; i < n; ++i)
        for (int j = i; j < n; ++j)
            if (!(h0(i, j) == conj(h0(j, i)))) return false;
    ComplexRationalMatrix h = h0;
    std::vector<bool> done(n, false);
    for (int step = 0; step < n; ++step) {
        int p = -1;
        for (int k = 0; k < n; ++k) {
            if (done[k]) continue;
            if (h(k, k).re < 0) return false;
            if (h(k, k).re > 0 && p < 0) p = k;
        }
        if (p < 0) {
            // zero diagonal on the remaining block forces the block to vanish
            for (int i = 0; i < n; ++i)
                for (int j = 0; j < n; ++j)
                    if (!done[i] && !done[j] && !is_zero(h(i, j))) return false;
            return true;
        }
        done[p] = true;
        Rational piv = h(p, p).re;
        for (int i = 0; i < n; ++i) {
            if (done[i] || is_zero(h(i, p))) continue;
            for (int j = 0; j < n; ++j) {
                if (done[j] || is_zero(h(p, j))) continue;
                ComplexRational t = cmul(h(i, p), h(p, j));
                h(i, j).re -= t.re / piv;
                h(i, j).im -= t.im / piv;
            }
        }
    }
    return true;
}

CptpReport is_cptp(const ComplexRationalMatrix& b)
{
    ComplexRationalMatrix c = choi(b);
    CptpReport r;
    r.exact = true;
    r.hermitian = true;
    for (int i = 0; i < c.dim && r.hermitian; ++i)
        for (int j = i; j < c.dim; ++j)
            if (!(c(i, j) == conj(c(j, i)))) {
                r.hermitian = false;
                break;
            }
    r.cp = r.hermitian && is_psd_exact(c);
    ComplexRationalMatrix t = partial_trace_second(c);
    Rational dev = 0;
    for (int i = 0; i < t.dim; ++i)
        for (int k = 0; k < t.dim; ++k) {
            Rational re = t(i, k).re - (i == k ? 1 : 0);
            dev = std::max({dev, abs(re), abs(t(i, k).im)});
        }
    r.tp = dev == 0;
    r.tp_deviation = to_double(dev);
    r.cptp = r.cp && r.tp;
    r.min_eigenvalue = min_hermitian_eigenvalue(to_numeric(c));
    return r;
}

CptpReport is_cptp(const RationalMatrix& b) { return is_cptp(ComplexRationalMatrix(b)); }

CptpReport is_cptp(const ComplexMatrix& b, double tol)
{
    ComplexMatrix c = choi(b);
    CptpReport r;
    double herm = 0;
    for (int i = 0; i < c.dim; ++i)
        for (int j = 0; j < c.dim; ++j) herm = std::max(herm, std::abs(c(i, j) - std::conj(c(j, i))));
    r.hermitian = herm <= tol;
    r.min_eigenvalue = min_hermitian_eigenvalue(c);
    r.cp = r.hermitian && r.min_eigenvalue >= -tol;
    ComplexMatrix t = partial_trace_second(c);
    for (int i = 0; i < t.dim; ++i)
        for (int k = 0; k < t.dim; ++k)
            r.tp_deviation = std::max(r.tp_deviation, std::abs(t(i, k) - Complex(i == k ? 1.0 : 0.0)));
    r.tp = r.tp_deviation <= tol;
    r.cptp = r.cp && r.tp;
    return r;
}

std::optional<CptpRootMatch> find_cptp_root(const ComplexRationalMatrix& b, const RootOptions& opt)
{
    root_dim(b.dim);
    if (!is_cptp(b).cptp) return std::nullopt;
    RootOptions o = opt;
    // a CPTP map has spectral radius 1 with eigenvalue 1; a CPTP root keeps +1 there
    o.fix_perron = opt.fix_perron.value_or(true);
    RootFamily fam = enumerate_roots(b, o);
    ComplexMatrix target = to_numeric(b);
    for (std::size_t k = 0; k < fam.branch_count(); ++k) {
        ComplexMatrix r = fam.branch(k);
        CptpReport rep = is_cptp(r, opt.tol);
        if (!rep.cptp) continue;
        double dev = 0;
        for (int i = 0; i < r.dim; ++i)
            for (int j = 0; j < r.dim; ++j) {
                Complex s = 0;
                for (int l = 0; l < r.dim; ++l) s += r(i, l) * r(l, j);
                dev = std::max(dev, std::abs(s - target(i, j)));
            }
        if (dev > opt.tol) continue;
        return CptpRootMatch{std::move(r), k, rep, dev};
    }
    return std::nullopt;
}

std::optional<CptpRootMatch> find_cptp_root(const RationalMatrix& b, const RootOptions& opt)
{
    return find_cptp_root(ComplexRationalMatrix(b), opt);
}

} // namespace divisikit
