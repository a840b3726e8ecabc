#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "qbp/bitmatrix.hpp"

namespace qbp {

struct ClassicalCode {
    BitMatrix h;       // parity-check matrix, m x n
    std::size_t n = 0;
    std::size_t k = 0; // n - rank(h)
    std::string name;

    // exhaustive over all 2^k codewords; requires k <= 24
    std::size_t min_distance() const;
};

// Classical cyclic code from a generator polynomial g (coefficients low
// degree first). g must divide x^n - 1 over GF(2). The parity-check matrix
// is built from the check polynomial h(x) = (x^n - 1)/g(x) in the standard
// cyclic arrangement; rank = deg g.
ClassicalCode cyclic_parity_check(std::size_t n, const std::vector<int>& g,
                                  const std::string& name = "");

ClassicalCode hamming_7_4_3();
ClassicalCode bch_15_7_5();
ClassicalCode parity_code(std::size_t n);  // [n, n-1] single parity check

// Generator matrix of a classical code (basis of the nullspace of h).
BitMatrix classical_generator(const ClassicalCode& code);

// Lattice metadata carried by toric codes: edge index -> coordinates.
// Edges are enumerated horizontal-first row-major, then vertical, so the
// order is canonical across runs and checkpoints stay portable.
struct ToricLattice {
    std::size_t L = 0;
    // per edge: x, y in [0, L), orientation 0 = horizontal, 1 = vertical
    struct EdgeCoord {
        std::size_t x, y;
        int orientation;
    };
    std::vector<EdgeCoord> edges;

    std::size_t horizontal_index(std::size_t x, std::size_t y) const { return y * L + x; }
    std::size_t vertical_index(std::size_t x, std::size_t y) const { return L * L + y * L + x; }
    // checks (vertices or plaquettes) are indexed row-major: id = y*L + x
    std::size_t check_x(std::size_t check) const { return check % L; }
    std::size_t check_y(std::size_t check) const { return check / L; }
};

// A CSS stabilizer code. a holds the X-type stabilizer supports (its rows
// act on the Z half of an error), b the Z-type supports (rows act on the X
// half). Syndrome of e = (e_x | e_z) is (a e_z , b e_x) mod 2.
struct CssCode {
    std::string name;
    std::size_t n = 0;  // qubits
    BitMatrix a;
    BitMatrix b;
    std::optional<ToricLattice> lattice;
    std::optional<uint64_t> seed;

    std::size_t k() const;  // n - rank(a) - rank(b), computed

    // Stabilizer matrix in symplectic layout: diag(a, b) over 2n columns.
    BitMatrix full_h() const;
};

// Toric code on an L x L square lattice: n = 2L^2 qubits on edges,
// a = vertex (star) incidence matrix, b = plaquette incidence matrix,
// k = 2 for every L.
CssCode toric_code(std::size_t L);

// Quantum bicycle code. Draws a random weight-w vector of length N/2,
// forms the circulant C (column c = the vector shifted down by c),
// H0 = [C, C^T], removes K/2 random rows, retrying until rank(H0) is full
// so the resulting code is [[N, K]]. a = b = H0.
CssCode bicycle_code(std::size_t N, std::size_t K, std::size_t w, uint64_t seed);

// Hypergraph product of two classical codes:
//   H_X = [H1 x I_n2 , I_m1 x H2^T],  H_Z = [I_n1 x H2 , H1^T x I_m2]
// => m = m1 n2 + n1 m2 checks on n = n1 n2 + m1 m2 qubits.
CssCode hypergraph_product(const ClassicalCode& h1, const ClassicalCode& h2);

struct CssReport {
    std::size_t n = 0;
    std::size_t k = 0;
    std::size_t rank_a = 0;
    std::size_t rank_b = 0;
    bool commutes = false;  // a b^T == 0
    std::vector<std::size_t> a_row_weights;
    std::vector<std::size_t> b_row_weights;
    std::vector<std::size_t> a_col_weights;
    std::vector<std::size_t> b_col_weights;

    std::string to_text() const;
};

// Never throws on a bad code; a failed commutation check is reported.
CssReport validate_css(const CssCode& code);

// Code file round trip. Format:
// {"name", "n", "A": BitMatrix, "B": BitMatrix, "lattice": {"L": int}?, "seed"?}
std::string code_to_json(const CssCode& code);
CssCode code_from_json(const std::string& text);
void save_code(const CssCode& code, const std::string& path);
CssCode load_code(const std::string& path);

}  // namespace qbp
