#pragma once

#include "divisikit/roots.hpp"

#include <optional>

namespace divisikit {

// Composite index (i, k) of a d^2 x d^2 matrix is stored at i*d + k.

// B = sum_ij A_ij (e_i e_j^T) (x) (e_i e_j^T)
RationalMatrix emb(const RationalMatrix& a);
ComplexRationalMatrix emb(const ComplexRationalMatrix& a);

// Reshuffle (e_i e_j^T) (x) (e_k e_l^T) -> (e_i e_k^T) (x) (e_j e_l^T); an involution.
// NotSquareDimension unless the dimension is a perfect square.
ComplexRationalMatrix choi(const ComplexRationalMatrix& b);
RationalMatrix choi(const RationalMatrix& b);
ComplexMatrix choi(const ComplexMatrix& b);

// Trace over the second tensor factor: (tr2 C)_{ik} = sum_j C_{(i,j),(k,j)}.
ComplexRationalMatrix partial_trace_second(const ComplexRationalMatrix& c);
ComplexMatrix partial_trace_second(const ComplexMatrix& c);

// Exact positive semidefiniteness of a Hermitian matrix by pivoted LDL^*; false if not Hermitian.
bool is_psd_exact(const ComplexRationalMatrix& h);

struct CptpReport {
    bool exact = false;
    bool hermitian = false;
    bool cp = false;
    bool tp = false;
    bool cptp = false;
    double min_eigenvalue = 0;  // of the Hermitian part of the Choi matrix
    double tp_deviation = 0;    // ||tr2(choi) - I||_inf
};

CptpReport is_cptp(const ComplexRationalMatrix& b);
CptpReport is_cptp(const RationalMatrix& b);
CptpReport is_cptp(const ComplexMatrix& b, double tol);

struct CptpRootMatch {
    ComplexMatrix root;
    std::size_t branch = 0;
    CptpReport report;
    double max_deviation = 0;  // ||root^2 - B||_inf
};

// No for non-CPTP input; otherwise the first branch that passes the numeric CPTP test.
std::optional<CptpRootMatch> find_cptp_root(const ComplexRationalMatrix& b, const RootOptions& opt = {});
std::optional<CptpRootMatch> find_cptp_root(const RationalMatrix& b, const RootOptions& opt = {});

} // namespace divisikit
