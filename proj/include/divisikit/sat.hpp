#pragma once

#include "divisikit/matrix.hpp"

#include <array>
#include <string>
#include <vector>

namespace divisikit {

struct Literal {
    int var = 1;          // 1-based
    bool positive = true;
};

using Clause = std::array<Literal, 3>;

struct SatInstance {
    int n_v = 0;
    std::vector<Clause> clauses;
};

// Throws ParseError on out-of-range variables.
void validate(const SatInstance& inst);

struct SatAnswer {
    bool yes = false;
    std::vector<bool> assignment;  // index k-1 holds variable k; lexicographically first with F < T
};

SatAnswer sat_oracle(const SatInstance& inst, int cap = 24);
bool satisfies(const SatInstance& inst, const std::vector<bool>& assignment);

// Branch index <-> assignment: bit k-1 set means variable k is TRUE.
std::vector<bool> assignment_of(int n_v, unsigned long branch);
unsigned long branch_of(const std::vector<bool>& assignment);

struct EmbeddingParams {
    // Zero selects the default for the instance.
    Rational N;       // denominator separating the variable weights, default 100 n_v
    Rational M;       // denominator separating the clause mask weights, default 100 max(n_c, 1)
    Rational delta;   // orthonormalization mask scale, default 100 * total dimension
    Rational n_d;     // weight of the D mask, default 10 * max|C_s + E| / min(D outside the clause region)
    Rational lift_c{1000};
    bool lift_singularities = true;
};

// Per clause: the pair (3/2 + P_i, -1/2 - P_i) with P_i the sum of the clause's
// rescaled literal values; both nonnegative iff the clause holds (given head space).
struct ClausePair {
    Rational lower, upper;
    bool holds() const { return lower >= 0 && upper >= 0; }
};
std::vector<ClausePair> clause_inequalities(const SatInstance& inst, const std::vector<bool>& assignment,
                                            const Rational& N);
Rational rescaled_literal_weight(int var, int n_v, const Rational& N);  // 1 - 1/N - k/(N n_v)

// Construction vectors in R^m. Clause coordinates come first, then one coordinate per vector
// pair, two balance coordinates per vector, and a shared last coordinate carrying the D-mask
// parameter a.
struct EmbeddingFrame {
    int m = 0;
    int n_c = 0;
    std::vector<std::vector<Rational>> vectors;  // all mutually orthogonal
    std::vector<std::string> roles;              // "c1", "c2", "v3", "w3", "E1", "b2", "E2", "Delta"
    int c1 = 0, c2 = 1, e1 = -1, e2 = -1, delta_vec = -1;
    std::vector<int> v, w;  // per variable (index k-1), -1 if absent
    std::vector<int> b;     // per clause
    Rational N, M, delta, a;
};

EmbeddingFrame build_frame(const SatInstance& inst, const EmbeddingParams& params = {});
RationalMatrix gram(const EmbeddingFrame& f);

// Coding part (dimension 2m). ParamsTooSmall when the rescaling breaks an inequality sign.
RationalMatrix build_coding_block(const SatInstance& inst, const std::vector<bool>& assignment,
                                  const EmbeddingFrame& f);
RationalMatrix build_mask_E(const SatInstance& inst, const EmbeddingFrame& f);
// D over the frame, 2-wide patterns: E2 E2^T (x) J + Delta Delta^T (x) [[1,0],[1,0]].
RationalMatrix build_mask_D(const EmbeddingFrame& f, int delta_sign = 1, int e2_sign = 1);
// Stand-alone mask with 4-wide patterns: total_dim = 4 L, E2/Delta of length L with n leading 1/delta
// entries. DimensionTooSmall unless 4n < total_dim; ParamsTooSmall unless 0 < a < 1.
RationalMatrix build_mask_D(int total_dim, int block_count, const Rational& delta, int delta_sign = 1,
                            int e2_sign = 1);

int exact_rank(const RationalMatrix& m);

// Read off C_s + E + n_d D; lifting and scaling keep every sign (checked when the lift is built).
struct BranchDiagnostics {
    unsigned long branch = 0;
    bool nonnegative = false;
    Rational min_entry;
    std::vector<int> violated_clauses;  // 0-based clause indices with a negative diagonal entry
};

class BranchFamily {
public:
    BranchFamily(SatInstance inst, EmbeddingFrame frame, EmbeddingParams params);

    const EmbeddingFrame& frame() const { return frame_; }
    int dim() const { return 2 * frame_.m; }
    unsigned long branch_count() const { return 1ul << inst_.n_v; }

    // C_s + E + n_d D before lifting and scaling.
    RationalMatrix raw_branch(unsigned long s) const;
    // Lifted (if enabled) and scaled by scale().
    RationalMatrix branch(unsigned long s) const;
    // Stochastic 3dim x 3dim image of branch(s) with a common lift factor across branches.
    RationalMatrix stochastic_branch(unsigned long s) const;
    const Rational& scale() const;
    const Rational& n_d() const { return n_d_; }
    const RationalMatrix& lift() const;   // kernel perturbation (unscaled)
    const Rational& lift_bound() const;

    BranchDiagnostics diagnose(unsigned long s) const;
    bool exists_nonnegative_branch(unsigned long* witness = nullptr) const;
    // Eigenvalues of branch 0 from the construction (all branches share moduli); minimum gap.
    std::vector<Complex> eigenvalues(unsigned long s) const;
    double min_spectral_gap(unsigned long s) const;

private:
    void ensure_lift() const;

    SatInstance inst_;
    EmbeddingFrame frame_;
    EmbeddingParams params_;
    RationalMatrix shared_;    // everything except the sign-carrying variable terms
    std::vector<RationalMatrix> var_terms_;  // per variable, for p_k = +|p_k|
    RationalMatrix spread_;    // sum of |var_terms_|: the exact entry range over branches
    Rational n_d_, margin_;
    // the lift is built on first use
    mutable bool lifted_ = false;
    mutable RationalMatrix lift_;
    mutable Rational lift_bound_;
    mutable std::vector<Rational> lift_values_;
    mutable Rational scale_;
};

BranchFamily assemble_family(const SatInstance& inst, const EmbeddingParams& params = {});

struct SatCheckReport {
    bool encoder_verdict = false;
    bool oracle_verdict = false;
    bool agree = false;
    unsigned long witness_branch = 0;
    std::vector<BranchDiagnostics> branches;
    double min_spectral_gap = 0;  // filled only with_spectrum (it needs the singularity lift)
    int dim = 0;
};

SatCheckReport check_instance(const SatInstance& inst, const EmbeddingParams& params = {},
                              bool with_spectrum = false);

} // namespace divisikit
