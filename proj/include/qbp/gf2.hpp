#pragma once

#include <cstdint>
#include <vector>

#include "qbp/bitmatrix.hpp"

namespace qbp {

struct RrefResult {
    BitMatrix reduced;               // reduced row-echelon form, same row space
    std::vector<std::size_t> pivots; // pivot column of each nonzero row
    std::size_t rank = 0;
};

RrefResult gf2_rref(const BitMatrix& m);

// Rows of the result form a basis of {x : M x = 0}; row count = cols - rank(M).
BitMatrix gf2_nullspace(const BitMatrix& m);

BitMatrix gf2_matmul(const BitMatrix& a, const BitMatrix& b);

BitMatrix gf2_transpose(const BitMatrix& m);

std::size_t gf2_rank(const BitMatrix& m);

// a^T M b mod 2 where M swaps the two halves of a 2N-bit Pauli string.
// Returns 1 iff the Pauli strings anticommute. M is applied as a half-swap,
// never materialized.
int symplectic_product(const BitVector& a, const BitVector& b);

// Returns the matrix with the two column halves swapped (i.e. H M).
BitMatrix swap_halves(const BitMatrix& h);

// Basis of the symplectic orthogonal complement {x : H M x = 0 mod 2}.
// Satisfies H M (result)^T = 0; row count = cols - rank(H).
BitMatrix normalizer_basis(const BitMatrix& h);

// Membership tester against the row space of a fixed matrix. Holds the RREF
// once so repeated queries cost O(rank * words); the evaluation harness asks
// millions of these per sweep.
class RowspaceTester {
public:
    RowspaceTester() = default;
    explicit RowspaceTester(const BitMatrix& m);

    bool contains(const BitVector& v) const;

    std::size_t rank() const { return rref_.rank; }
    std::size_t cols() const { return rref_.reduced.cols(); }

private:
    RrefResult rref_;
};

// One-shot membership test; build a RowspaceTester for hot paths.
bool in_rowspace(const BitMatrix& m, const BitVector& v);

}  // namespace qbp
