#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "qbp/codes.hpp"
#include "qbp/gf2.hpp"
#include "qbp/rng.hpp"

#include "oracles.hpp"

using namespace qbp;

TEST_CASE("rref rank on hand examples") {
    // third row is the GF(2) sum of the first two
    const BitMatrix m = BitMatrix::from_rows({{1, 1, 0}, {0, 1, 1}, {1, 0, 1}});
    CHECK(gf2_rref(m).rank == 2);

    const RrefResult id4 = gf2_rref(BitMatrix::identity(4));
    CHECK(id4.rank == 4);
    CHECK(id4.pivots == std::vector<std::size_t>{0, 1, 2, 3});
}

TEST_CASE("rref on the toric L=2 vertex matrix") {
    const CssCode code = toric_code(2);
    CHECK(code.a.rows() == 4);
    CHECK(code.a.cols() == 8);
    CHECK(gf2_rref(code.a).rank == 3);
    CHECK(oracle::rank(code.a) == 3);
}

TEST_CASE("rref preserves the row space") {
    Rng rng(11);
    for (int trial = 0; trial < 20; ++trial) {
        const BitMatrix m = oracle::random_matrix(6, 9, 0.4, rng);
        const RrefResult rref = gf2_rref(m);
        CHECK(rref.rank == oracle::rank(m));
        const RowspaceTester original(m);
        const RowspaceTester reduced(rref.reduced);
        for (std::size_t r = 0; r < rref.rank; ++r)
            CHECK(original.contains(rref.reduced.row(r)));
        for (std::size_t r = 0; r < m.rows(); ++r)
            CHECK(reduced.contains(m.row(r)));
    }
}

TEST_CASE("nullspace basics") {
    CHECK(gf2_nullspace(BitMatrix::identity(5)).rows() == 0);

    const BitMatrix m = BitMatrix::from_rows({{1, 1}});
    const BitMatrix basis = gf2_nullspace(m);
    REQUIRE(basis.rows() == 1);
    CHECK(basis.get(0, 0));
    CHECK(basis.get(0, 1));

    const CssCode code = toric_code(2);
    CHECK(gf2_nullspace(code.a).rows() == 5);  // 8 - rank 3
}

TEST_CASE("nullspace dimension + rank = columns, and M x = 0") {
    Rng rng(22);
    for (int trial = 0; trial < 200; ++trial) {
        const std::size_t rows = 1 + rng.next_below(64);
        const std::size_t cols = 1 + rng.next_below(64);
        const BitMatrix m = oracle::random_matrix(rows, cols, 0.3, rng);
        const RrefResult rref = gf2_rref(m);
        const BitMatrix basis = gf2_nullspace(m);
        CHECK(basis.rows() + rref.rank == cols);
        for (std::size_t r = 0; r < basis.rows(); ++r)
            CHECK(m.mul_vector(basis.row(r)).is_zero());
        // basis rows are linearly independent
        CHECK(gf2_rank(basis) == basis.rows());
    }
}

TEST_CASE("matmul basics") {
    Rng rng(33);
    const BitMatrix a = oracle::random_matrix(5, 7, 0.5, rng);
    CHECK(gf2_matmul(a, BitMatrix::identity(7)) == a);

    const BitMatrix col = BitMatrix::from_rows({{1}, {1}});
    const BitMatrix row = BitMatrix::from_rows({{1, 1}});
    const BitMatrix prod = gf2_matmul(row, col);
    CHECK(prod.rows() == 1);
    CHECK(prod.cols() == 1);
    CHECK_FALSE(prod.get(0, 0));  // 1 + 1 = 0 mod 2

    CHECK_THROWS_AS(gf2_matmul(a, a), std::invalid_argument);
}

TEST_CASE("bicycle H0 is self-dual") {
    const CssCode code = bicycle_code(32, 4, 4, 7);
    const BitMatrix prod = gf2_matmul(code.a, gf2_transpose(code.a));
    for (std::size_t r = 0; r < prod.rows(); ++r) CHECK(prod.row_is_zero(r));
}

TEST_CASE("symplectic product on single-qubit Paulis") {
    // N=2: X on qubit 0 vs Z on qubit 0 anticommute
    const BitVector x1 = BitVector::from_string("1000");
    const BitVector z1 = BitVector::from_string("0010");
    const BitVector x2 = BitVector::from_string("0100");
    CHECK(symplectic_product(x1, z1) == 1);
    CHECK(symplectic_product(x1, x2) == 0);
    CHECK(symplectic_product(x1, x1) == 0);
    CHECK(symplectic_product(z1, z1) == 0);

    CHECK_THROWS_AS(symplectic_product(x1, BitVector(2)), std::invalid_argument);
    CHECK_THROWS_AS(symplectic_product(BitVector(3), BitVector(3)), std::invalid_argument);
}

TEST_CASE("symplectic product is symmetric and bilinear") {
    Rng rng(44);
    for (int trial = 0; trial < 200; ++trial) {
        const std::size_t n2 = 2 * (1 + rng.next_below(16));
        const BitVector a = oracle::random_error(n2, 0.5, rng);
        const BitVector b = oracle::random_error(n2, 0.5, rng);
        const BitVector c = oracle::random_error(n2, 0.5, rng);
        CHECK(symplectic_product(a, b) == symplectic_product(b, a));
        BitVector bc = b;
        bc.xor_with(c);
        CHECK(symplectic_product(a, bc) ==
              (symplectic_product(a, b) ^ symplectic_product(a, c)));
    }
}

TEST_CASE("normalizer basis of the toric L=2 stabilizer matrix") {
    const CssCode code = toric_code(2);
    const BitMatrix h = code.full_h();
    CHECK(h.rows() == 8);
    CHECK(h.cols() == 16);
    CHECK(gf2_rank(h) == 6);

    const BitMatrix perp = normalizer_basis(h);
    CHECK(perp.rows() == 10);  // 2N - rank

    // H M (H_perp)^T = 0
    const BitMatrix prod = gf2_matmul(swap_halves(h), gf2_transpose(perp));
    for (std::size_t r = 0; r < prod.rows(); ++r) CHECK(prod.row_is_zero(r));

    // stabilizers commute with each other, so rowspace(H) <= rowspace(H_perp)
    const RowspaceTester perp_space(perp);
    for (std::size_t r = 0; r < h.rows(); ++r) CHECK(perp_space.contains(h.row(r)));
}

TEST_CASE("normalizer basis for a single X over one qubit") {
    const BitMatrix h = BitMatrix::from_rows({{1, 0}});
    const BitMatrix perp = normalizer_basis(h);
    REQUIRE(perp.rows() == 1);
    CHECK(perp.get(0, 0));
    CHECK_FALSE(perp.get(0, 1));

    CHECK_THROWS_AS(normalizer_basis(BitMatrix::from_rows({{1, 0, 1}})), std::invalid_argument);
}

TEST_CASE("in_rowspace basics") {
    Rng rng(55);
    const BitMatrix m = oracle::random_matrix(5, 10, 0.4, rng);
    CHECK(in_rowspace(m, BitVector(10)));  // zero vector: empty combination
    for (std::size_t r = 0; r < m.rows(); ++r) CHECK(in_rowspace(m, m.row(r)));
}

TEST_CASE("in_rowspace on toric L=2 plaquettes") {
    const CssCode code = toric_code(2);
    CHECK(in_rowspace(code.b, code.b.row(2)));
    const BitVector single_edge = BitVector::from_support(8, {3});
    CHECK_FALSE(in_rowspace(code.b, single_edge));
}

TEST_CASE("in_rowspace agrees with exhaustive enumeration") {
    Rng rng(66);
    for (int trial = 0; trial < 40; ++trial) {
        const std::size_t rows = 1 + rng.next_below(12);
        const std::size_t cols = 2 + rng.next_below(10);
        const BitMatrix m = oracle::random_matrix(rows, cols, 0.35, rng);
        const RowspaceTester tester(m);
        for (int q = 0; q < 20; ++q) {
            const BitVector v = oracle::random_error(cols, 0.5, rng);
            CHECK(tester.contains(v) == oracle::in_rowspace_exhaustive(m, v));
        }
    }
}

TEST_CASE("bit matrix JSON round trip is exact") {
    Rng rng(77);
    for (int trial = 0; trial < 30; ++trial) {
        const std::size_t rows = 1 + rng.next_below(20);
        const std::size_t cols = 1 + rng.next_below(130);
        const BitMatrix m = oracle::random_matrix(rows, cols, 0.2, rng);
        const BitMatrix back = BitMatrix::from_json(m.to_json());
        CHECK(back == m);
        CHECK(back.to_json() == m.to_json());
    }
}

TEST_CASE("out of range access throws") {
    BitMatrix m(2, 3);
    CHECK_THROWS_AS(m.get(0, 3), std::out_of_range);
    CHECK_THROWS_AS(m.get(2, 0), std::out_of_range);
    BitVector v(4);
    CHECK_THROWS_AS(v.get(4), std::out_of_range);
}
