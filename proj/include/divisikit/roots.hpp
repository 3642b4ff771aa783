#pragma once

#include "divisikit/matrix.hpp"

#include <array>
#include <cstddef>
#include <memory>
#include <optional>
#include <vector>

namespace divisikit {

struct RootOptions {
    int precision_bits = 128;
    double tol = 1e-9;
    double separation = 1e-12;       // min gap between nonzero eigenvalues, relative to the matrix scale
    std::optional<bool> fix_perron;  // unset: off for enumeration, on for root searches
};

// Primary square roots of a diagonalizable matrix whose nonzero eigenvalues are simple.
// Branch k carries sign (-1)^(bit j of k) on the j-th free eigenvalue; a zero eigenvalue
// (any multiplicity, semisimple) contributes a single branch.
class RootFamily {
public:
    struct Impl;

    int dim() const;
    // Distinct eigenvalues; the zero cluster, if present, is reported once as 0.
    const std::vector<Complex>& eigenvalues() const;
    const std::vector<int>& multiplicities() const;
    int perron_index() const;  // index into eigenvalues() whose sign is pinned, or -1
    std::size_t branch_count() const;
    std::vector<int> signs(std::size_t branch) const;  // +-1 per eigenvalue, 0 for the zero cluster
    ComplexMatrix branch(std::size_t index) const;
    // max ||P_k^2 - P_k|| over the spectral projectors
    double projector_residual() const;

private:
    friend RootFamily make_root_family(std::shared_ptr<const Impl>);
    std::shared_ptr<const Impl> impl_;
};

// All eigenvalues with multiplicity, computed at opt.precision_bits.
std::vector<Complex> spectrum(const ComplexRationalMatrix& m, const RootOptions& opt = {});

RootFamily enumerate_roots(const RationalMatrix& m, const RootOptions& opt = {});
RootFamily enumerate_roots(const ComplexRationalMatrix& m, const RootOptions& opt = {});

enum class RootMode { stochastic, nonnegative, doubly_stochastic };

struct RootReport {
    double max_deviation = 0;      // ||Q^2 - P||_inf entrywise
    double min_entry = 0;
    double max_row_sum_deviation = 0;
    double max_col_sum_deviation = 0;
};

struct ExactRootReport {
    Rational max_deviation, min_entry, max_row_sum_deviation, max_col_sum_deviation;
};

RootReport verify_root(const NumericMatrix& q, const RationalMatrix& p);
ExactRootReport verify_root(const RationalMatrix& q, const RationalMatrix& p);

struct RootMatch {
    NumericMatrix root;
    std::size_t branch = 0;
    RootReport report;
};

// Stochastic-type modes reject non-stochastic input with NotStochasticInput.
std::optional<RootMatch> find_root(const RationalMatrix& m, RootMode mode, const RootOptions& opt = {});
std::optional<RootMatch> find_stochastic_root(const RationalMatrix& p, const RootOptions& opt = {});
std::optional<RootMatch> find_nonnegative_root(const RationalMatrix& m, const RootOptions& opt = {});

// Accepts a numeric branch as a real matrix of the given kind; clamps negative dust to 0.
std::optional<NumericMatrix> accept_branch(const ComplexMatrix& r, RootMode mode, double tol);

struct LiftOptions {
    Rational scale_target{1, 2};  // a * max M, at most lift_scale_limit()
};

Rational lift_scale_limit();  // 43/81

struct LiftResult {
    RationalMatrix lifted;  // 3d x 3d, block (r, s) occupies rows r*d.., columns s*d..
    Rational a;
};

LiftResult lift_nonneg_to_stochastic(const RationalMatrix& m, const LiftOptions& opt = {});
// The square of the lift assembled from its closed form.
RationalMatrix lifted_square(const RationalMatrix& m, const LiftOptions& opt = {});

// Mixing vectors of the lift: two rational directions and the outer product of the
// normalized all-ones direction (which is irrational itself).
struct LiftFrame {
    std::array<Rational, 3> a, b;
    RationalMatrix c_outer;
};
LiftFrame lift_frame();

struct SingularLift {
    NumericMatrix lifted;
    double bound = 0;                  // largest value a zero eigenvalue may be moved to
    std::vector<double> new_eigenvalues;
};

// Moves the zero eigenvalues of a diagonalizable matrix to distinct positive values below
// 1 / (c d^3 max(|Z_ij|, |Z^-1_ij|)), Z having unit-norm columns.
SingularLift lift_singularities(const RationalMatrix& a, double c, const RootOptions& opt = {});

} // namespace divisikit
