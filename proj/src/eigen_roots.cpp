#include "divisikit/roots.hpp"
#include "divisikit/error.hpp"

#include <boost/multiprecision/eigen.hpp>
#include <boost/multiprecision/mpfr.hpp>
#include <Eigen/Dense>
#include <Eigen/Eigenvalues>

#include <algorithm>
#include <cmath>

namespace divisikit {

namespace mp = boost::multiprecision;
// Expression templates off: Eigen's complex kernels need plain value types.
using Real = mp::number<mp::mpfr_float_backend<0>, mp::et_off>;
using Cx = std::complex<Real>;
using CMat = Eigen::Matrix<Cx, Eigen::Dynamic, Eigen::Dynamic>;

namespace {

class PrecisionGuard {
public:
    explicit PrecisionGuard(int bits) : old_(Real::default_precision())
    {
        if (bits < 53 || bits > 4096) fail(Errc::ParseError, "precision must be between 53 and 4096 bits");
        Real::default_precision(static_cast<unsigned>(std::ceil(bits * 0.30103)) + 1);
    }
    ~PrecisionGuard() { Real::default_precision(old_); }
    PrecisionGuard(const PrecisionGuard&) = delete;
    PrecisionGuard& operator=(const PrecisionGuard&) = delete;

private:
    unsigned old_;
};

Real to_real(const Rational& q)
{
    Real r;
    mpfr_set_q(r.backend().data(), q.get_mpq_t(), MPFR_RNDN);
    return r;
}

CMat to_cmat(const ComplexRationalMatrix& m)
{
    CMat a(m.dim, m.dim);
    for (int i = 0; i < m.dim; ++i)
        for (int j = 0; j < m.dim; ++j) a(i, j) = Cx(to_real(m(i, j).re), to_real(m(i, j).im));
    return a;
}

Real inf_norm(const CMat& a)
{
    Real best = 0;
    for (int i = 0; i < a.rows(); ++i) {
        Real s = 0;
        for (int j = 0; j < a.cols(); ++j) s += abs(a(i, j));
        best = std::max(best, s);
    }
    return best;
}

Real max_abs_entry(const CMat& a)
{
    Real best = 0;
    for (int i = 0; i < a.rows(); ++i)
        for (int j = 0; j < a.cols(); ++j) best = std::max(best, Real(abs(a(i, j))));
    return best;
}

Complex to_complex(const Cx& z)
{
    return {static_cast<double>(z.real()), static_cast<double>(z.imag())};
}

// Exact nullspace basis by reduced row echelon form.
std::vector<std::vector<Rational>> nullspace(const RationalMatrix& a)
{
    int d = a.dim();
    std::vector<std::vector<Rational>> r(d, std::vector<Rational>(d));
    for (int i = 0; i < d; ++i)
        for (int j = 0; j < d; ++j) r[i][j] = a(i, j);
    std::vector<int> pivcol;
    int row = 0;
    for (int col = 0; col < d && row < d; ++col) {
        int p = -1;
        for (int i = row; i < d; ++i)
            if (r[i][col] != 0) { p = i; break; }
        if (p < 0) continue;
        std::swap(r[p], r[row]);
        Rational inv = 1 / r[row][col];
        for (auto& x : r[row]) x *= inv;
        for (int i = 0; i < d; ++i) {
            if (i == row || r[i][col] == 0) continue;
            Rational f = r[i][col];
            for (int j = 0; j < d; ++j) r[i][j] -= f * r[row][j];
        }
        pivcol.push_back(col);
        ++row;
    }
    std::vector<std::vector<Rational>> basis;
    for (int free = 0; free < d; ++free) {
        if (std::find(pivcol.begin(), pivcol.end(), free) != pivcol.end()) continue;
        std::vector<Rational> v(d);
        v[free] = 1;
        for (std::size_t k = 0; k < pivcol.size(); ++k) v[pivcol[k]] = -r[k][free];
        basis.push_back(std::move(v));
    }
    return basis;
}

} // namespace

struct RootFamily::Impl {
    int dim = 0;
    int bits = 128;
    std::vector<Complex> eigen;     // double view
    std::vector<int> mult;
    std::vector<Cx> roots;          // principal square roots, 0 for the zero cluster
    std::vector<CMat> proj;         // spectral projectors
    std::vector<int> free;          // eigenvalue indices carrying a sign bit
    int perron = -1;
    double residual = 0;
};

RootFamily make_root_family(std::shared_ptr<const RootFamily::Impl> impl)
{
    RootFamily f;
    f.impl_ = std::move(impl);
    return f;
}

int RootFamily::dim() const { return impl_->dim; }
const std::vector<Complex>& RootFamily::eigenvalues() const { return impl_->eigen; }
const std::vector<int>& RootFamily::multiplicities() const { return impl_->mult; }
int RootFamily::perron_index() const { return impl_->perron; }
double RootFamily::projector_residual() const { return impl_->residual; }

std::size_t RootFamily::branch_count() const { return std::size_t{1} << impl_->free.size(); }

std::vector<int> RootFamily::signs(std::size_t branch) const
{
    const Impl& im = *impl_;
    std::vector<int> s(im.eigen.size(), 1);
    for (std::size_t k = 0; k < im.eigen.size(); ++k)
        if (im.eigen[k] == Complex(0, 0)) s[k] = 0;
    for (std::size_t j = 0; j < im.free.size(); ++j)
        if (branch >> j & 1) s[im.free[j]] = -1;
    return s;
}

ComplexMatrix RootFamily::branch(std::size_t index) const
{
    if (index >= branch_count()) fail(Errc::ParseError, "branch index out of range");
    const Impl& im = *impl_;
    PrecisionGuard guard(im.bits);
    std::vector<int> s = signs(index);
    CMat r = CMat::Zero(im.dim, im.dim);
    for (std::size_t k = 0; k < im.proj.size(); ++k) {
        if (s[k] == 0) continue;
        Cx c = s[k] > 0 ? im.roots[k] : -im.roots[k];
        r += c * im.proj[k];
    }
    ComplexMatrix out(im.dim);
    for (int i = 0; i < im.dim; ++i)
        for (int j = 0; j < im.dim; ++j) out(i, j) = to_complex(r(i, j));
    return out;
}

std::vector<Complex> spectrum(const ComplexRationalMatrix& m, const RootOptions& opt)
{
    PrecisionGuard guard(opt.precision_bits);
    if (m.dim <= 0) return {};
    Eigen::ComplexEigenSolver<CMat> es(to_cmat(m), false);
    if (es.info() != Eigen::Success) fail(Errc::DegenerateSpectrum, "eigenvalue iteration did not converge");
    std::vector<Complex> out;
    for (int i = 0; i < m.dim; ++i) out.push_back(to_complex(es.eigenvalues()(i)));
    return out;
}

RootFamily enumerate_roots(const RationalMatrix& m, const RootOptions& opt)
{
    return enumerate_roots(ComplexRationalMatrix(m), opt);
}

RootFamily enumerate_roots(const ComplexRationalMatrix& m, const RootOptions& opt)
{
    int d = m.dim;
    if (d <= 0) fail(Errc::ParseError, "empty matrix");
    PrecisionGuard guard(opt.precision_bits);
    auto impl = std::make_shared<RootFamily::Impl>();
    impl->dim = d;
    impl->bits = opt.precision_bits;

    CMat a = to_cmat(m);
    Real scale = inf_norm(a);
    if (scale == 0) scale = 1;
    Eigen::ComplexEigenSolver<CMat> es(a, false);
    if (es.info() != Eigen::Success) fail(Errc::DegenerateSpectrum, "eigenvalue iteration did not converge");
    auto ev = es.eigenvalues();

    Real zero_tol = scale * pow(Real(2), Real(-0.6 * opt.precision_bits));
    Real sep = scale * Real(opt.separation);
    std::vector<Cx> nonzero;
    int zeros = 0;
    for (int i = 0; i < d; ++i) {
        if (abs(ev(i)) <= zero_tol) ++zeros;
        else nonzero.push_back(ev(i));
    }
    for (std::size_t i = 0; i < nonzero.size(); ++i) {
        if (abs(nonzero[i]) <= sep)
            fail(Errc::DegenerateSpectrum, "an eigenvalue lies within the separation tolerance of 0");
        for (std::size_t j = i + 1; j < nonzero.size(); ++j)
            if (abs(nonzero[i] - nonzero[j]) < sep)
                fail(Errc::DegenerateSpectrum, "eigenvalues are not separated");
    }
    // deterministic order: descending real part, then descending imaginary part
    std::sort(nonzero.begin(), nonzero.end(), [](const Cx& x, const Cx& y) {
        if (x.real() != y.real()) return x.real() > y.real();
        return x.imag() > y.imag();
    });
    std::vector<Cx> mu = nonzero;
    if (zeros > 0) mu.push_back(Cx(0));
    int r = static_cast<int>(mu.size());

    CMat id = CMat::Identity(d, d);
    if (zeros > 1) {
        // a repeated zero eigenvalue must be semisimple: prod (A - mu_k) vanishes
        CMat p = id;
        for (const auto& x : mu) p = (p * (a - x * id)).eval();
        Real rel = inf_norm(p) / pow(scale, Real(r));
        if (rel > pow(Real(2), Real(-0.4 * opt.precision_bits)))
            fail(Errc::DegenerateSpectrum, "zero eigenvalue is not semisimple");
    }
    for (int k = 0; k < r; ++k) {
        CMat p = id;
        for (int h = 0; h < r; ++h)
            if (h != k) p = (p * (a - mu[h] * id) / (mu[k] - mu[h])).eval();
        CMat e = p * p - p;
        impl->residual = std::max(impl->residual, static_cast<double>(max_abs_entry(e)));
        impl->proj.push_back(std::move(p));
        impl->eigen.push_back(k < static_cast<int>(nonzero.size()) ? to_complex(mu[k]) : Complex(0, 0));
        impl->mult.push_back(k < static_cast<int>(nonzero.size()) ? 1 : zeros);
        impl->roots.push_back(k < static_cast<int>(nonzero.size()) ? Cx(sqrt(mu[k])) : Cx(0));
    }

    if (opt.fix_perron.value_or(false) && !nonzero.empty()) {
        Real rho = 0;
        for (const auto& x : nonzero) rho = std::max(rho, Real(abs(x)));
        for (std::size_t k = 0; k < nonzero.size(); ++k) {
            const Cx& x = nonzero[k];
            if (abs(x.imag()) <= sep && x.real() > 0 && x.real() >= rho - sep) {
                impl->perron = static_cast<int>(k);
                break;  // sorted by real part, so this is the largest
            }
        }
    }
    for (int k = 0; k < static_cast<int>(nonzero.size()); ++k)
        if (k != impl->perron) impl->free.push_back(k);
    if (impl->free.size() > 40) fail(Errc::InstanceTooLarge, "too many root branches to enumerate");
    return make_root_family(std::move(impl));
}

SingularLift lift_singularities(const RationalMatrix& am, double c, const RootOptions& opt)
{
    if (!(c > 0)) fail(Errc::ParseError, "lift constant must be positive");
    int d = am.dim();
    if (d <= 0) fail(Errc::ParseError, "empty matrix");
    PrecisionGuard guard(opt.precision_bits);
    CMat a = to_cmat(ComplexRationalMatrix(am));
    Real scale = inf_norm(a);
    if (scale == 0) scale = 1;

    auto kernel = nullspace(am);
    int nk = static_cast<int>(kernel.size());
    Eigen::ComplexEigenSolver<CMat> es(a, true);
    if (es.info() != Eigen::Success) fail(Errc::NotDiagonalizable, "eigenvalue iteration did not converge");
    Real zero_tol = scale * pow(Real(2), Real(-0.6 * opt.precision_bits));

    // Z: eigenvectors of the nonzero eigenvalues, then an exact kernel basis
    CMat z(d, d);
    std::vector<Cx> lam;
    int col = 0;
    for (int i = 0; i < d; ++i) {
        if (abs(es.eigenvalues()(i)) <= zero_tol) continue;
        if (col >= d - nk) fail(Errc::NotDiagonalizable, "zero eigenvalue is defective");
        z.col(col) = es.eigenvectors().col(i);
        lam.push_back(es.eigenvalues()(i));
        ++col;
    }
    if (col != d - nk) fail(Errc::NotDiagonalizable, "zero eigenvalue is defective");
    for (const auto& v : kernel) {
        Real n = 0;
        for (const auto& x : v) n += to_real(x * x);
        n = sqrt(n);
        for (int i = 0; i < d; ++i) z(i, col) = Cx(to_real(v[i]) / n);
        lam.push_back(Cx(0));
        ++col;
    }
    Eigen::FullPivLU<CMat> lu(z);
    lu.setThreshold(Real(1e-20));
    if (!lu.isInvertible()) fail(Errc::NotDiagonalizable, "eigenvectors do not span");
    CMat zi = lu.inverse();
    CMat lmat = CMat::Zero(d, d);
    for (int i = 0; i < d; ++i) lmat(i, i) = lam[i];
    Real recon = max_abs_entry(CMat(z * lmat * zi - a)) / scale;
    if (recon > Real(1e-12)) fail(Errc::NotDiagonalizable, "matrix is not diagonalizable");

    SingularLift out;
    Real zmax = std::max(max_abs_entry(z), max_abs_entry(zi));
    Real bound = 1 / (Real(c) * Real(d) * Real(d) * Real(d) * zmax);
    out.bound = static_cast<double>(bound);
    CMat shift = CMat::Zero(d, d);
    for (int k = 0; k < nk; ++k) {
        Real v = bound * Real(nk - k) / Real(nk);
        // keep clear of the existing spectrum
        for (int guard_iter = 0; guard_iter < 64; ++guard_iter) {
            bool clash = false;
            for (int i = 0; i < d - nk; ++i)
                if (abs(lam[i] - Cx(v)) < bound * Real(1e-6) / Real(nk + 1)) clash = true;
            if (!clash) break;
            v *= Real(0.999);
        }
        out.new_eigenvalues.push_back(static_cast<double>(v));
        int j = d - nk + k;
        shift += Cx(v) * z.col(j) * zi.row(j);
    }
    CMat lifted = a + shift;
    out.lifted = NumericMatrix(d);
    for (int i = 0; i < d; ++i)
        for (int j = 0; j < d; ++j) out.lifted(i, j) = static_cast<double>(lifted(i, j).real());
    return out;
}

} // namespace divisikit
