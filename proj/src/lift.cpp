#include "divisikit/roots.hpp"
#include "divisikit/error.hpp"

namespace divisikit {

namespace {

RationalMatrix outer(const std::array<Rational, 3>& x, const std::array<Rational, 3>& y)
{
    RationalMatrix m(3);
    for (int i = 0; i < 3; ++i)
        for (int j = 0; j < 3; ++j) m(i, j) = x[i] * y[j];
    return m;
}

Rational lift_scale(const RationalMatrix& m, const LiftOptions& opt)
{
    if (m.dim() <= 0) fail(Errc::ParseError, "empty matrix");
    Rational mx = m.max_entry();
    if (mx <= 0) fail(Errc::NoPositiveEntry, "lift needs a positive entry");
    if (opt.scale_target <= 0 || opt.scale_target > lift_scale_limit())
        fail(Errc::ParseError, "lift scale target must lie in (0, 43/81]");
    return opt.scale_target / mx;
}

RationalMatrix ones(int d)
{
    RationalMatrix j(d);
    for (int r = 0; r < d; ++r)
        for (int c = 0; c < d; ++c) j(r, c) = 1;
    return j;
}

} // namespace

Rational lift_scale_limit() { return Rational(43, 81); }

LiftFrame lift_frame()
{
    LiftFrame f;
    f.a = {Rational(1), Rational(-5, 7), Rational(-2, 7)};
    f.b = {Rational(1, 6), Rational(1, 2), Rational(-2, 3)};
    f.c_outer = RationalMatrix(3);
    for (int i = 0; i < 3; ++i)
        for (int j = 0; j < 3; ++j) f.c_outer(i, j) = Rational(1, 3);
    return f;
}

LiftResult lift_nonneg_to_stochastic(const RationalMatrix& m, const LiftOptions& opt)
{
    Rational a = lift_scale(m, opt);
    int d = m.dim();
    LiftFrame f = lift_frame();
    Rational inv_d = Rational(1, d);
    RationalMatrix q = kron((a * inv_d) * outer(f.a, f.a), m) +
                       kron(inv_d * (outer(f.b, f.b) + f.c_outer), ones(d));
    return {std::move(q), a};
}

RationalMatrix lifted_square(const RationalMatrix& m, const LiftOptions& opt)
{
    Rational a = lift_scale(m, opt);
    int d = m.dim();
    LiftFrame f = lift_frame();
    Rational na = 0, nb = 0;
    for (int i = 0; i < 3; ++i) {
        na += f.a[i] * f.a[i];
        nb += f.b[i] * f.b[i];
    }
    Rational inv_d = Rational(1, d);
    return kron((a * a * inv_d * inv_d * na) * outer(f.a, f.a), m * m) +
           kron(inv_d * (nb * outer(f.b, f.b) + f.c_outer), ones(d));
}

} // namespace divisikit
