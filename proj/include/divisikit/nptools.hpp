#pragma once

#include "divisikit/dist.hpp"

#include <optional>
#include <utility>
#include <vector>

namespace divisikit {

enum class SubsetVariant { Plain, Even, M, SignedM };

const char* variant_name(SubsetVariant v);
SubsetVariant parse_variant(const std::string& s);

// Difference of a subset T is sum(T) - sum(S \ T).
struct SubsetSumInstance {
    std::vector<Rational> elements;
    Rational bound;                 // l; unused by SignedM
    int m = -1;                     // cardinality for M / SignedM
    Rational window_lo, window_hi;  // open window (x, y) for SignedM
    SubsetVariant variant = SubsetVariant::Plain;
};

struct PartitionInstance {
    std::vector<Rational> elements;  // all positive
};

struct OracleOptions {
    int cap = 24;
    bool allow_empty = false;  // whether T = {} counts as a subset
};

struct OracleResult {
    bool yes = false;
    std::vector<int> witness;  // sorted indices into the elements, lexicographically smallest
};

OracleResult solve_subset_variant(const SubsetSumInstance& s, SubsetVariant v, const OracleOptions& opt = {});
OracleResult solve_subset_variant(const SubsetSumInstance& s, const OracleOptions& opt = {});
OracleResult partition_oracle(const PartitionInstance& p, const OracleOptions& opt = {});

// Exact check of the variant's defining inequality for a given subset.
bool witness_holds(const SubsetSumInstance& s, SubsetVariant v, const std::vector<int>& t);

SubsetSumInstance rescale_instance(const SubsetSumInstance& s, const Rational& a, const Rational& c);
SubsetSumInstance pad_to_even(const SubsetSumInstance& s);
// S plus two copies of -sum/2 + eta, bound = new total (= 2 eta); eta below the granularity of S.
SubsetSumInstance partition_to_subset_sum(const PartitionInstance& p);

struct Cell {
    Rational lo, hi;
};

struct IntervalPartition {
    std::vector<Cell> cells;  // first and last are the end cells outside (-l, l)
};

IntervalPartition interval_partition(const Rational& l, const Rational& a);

// One disjunct: the m-constrained instance on S + shift with its own bound.
struct ProgramTerm {
    SubsetSumInstance instance;
    Rational shift;
    Cell window;  // difference window on the original S covered by this term
};

struct MProgram {
    Rational cell_half_width;
    std::vector<ProgramTerm> terms;  // verdict = OR over terms
};

MProgram subset_sum_m_program(const SubsetSumInstance& s, int m);
bool evaluate_program(const MProgram& p, const OracleOptions& opt = {});

struct GadgetParams {
    Rational c{1, 4};  // delta = c / |S|^2
};

struct Gadget {
    FiniteDistribution dist;
    std::vector<Rational> b;  // linear coefficients of the quadratics x^2 + b_i x + 1
    Rational a;               // scale actually used
};

// Even Subset Sum -> even decomposability.
Gadget encode_even_subset_sum(const SubsetSumInstance& s, const GadgetParams& params = {});
// Subset Sum with bound equal to the element total -> decomposability.
Gadget encode_subset_sum(const SubsetSumInstance& s, const GadgetParams& params = {});
// Same gadget on the instance shifted so its bound becomes total + eps.
Gadget encode_subset_sum_eps(const SubsetSumInstance& s, const Rational& eps, const GadgetParams& params = {});
SubsetSumInstance eps_relaxed_instance(const SubsetSumInstance& s, const Rational& eps);

} // namespace divisikit
