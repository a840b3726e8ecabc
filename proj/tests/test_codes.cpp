#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "qbp/codes.hpp"
#include "qbp/gf2.hpp"

#include "oracles.hpp"

using namespace qbp;

namespace {

// independent min-distance oracle: enumerate every codeword of the
// nullspace basis of h
std::size_t min_distance_exhaustive(const BitMatrix& h) {
    const BitMatrix gen = gf2_nullspace(h);
    const std::size_t k = gen.rows();
    REQUIRE(k <= 16);
    std::size_t best = h.cols() + 1;
    for (uint64_t mask = 1; mask < (uint64_t(1) << k); ++mask) {
        BitVector word(h.cols());
        for (std::size_t r = 0; r < k; ++r)
            if ((mask >> r) & 1) {
                BitVector row = gen.row(r);
                word.xor_with(row);
            }
        best = std::min(best, word.weight());
    }
    return best;
}

bool commutes(const CssCode& code) {
    const BitMatrix prod = gf2_matmul(code.a, gf2_transpose(code.b));
    for (std::size_t r = 0; r < prod.rows(); ++r)
        if (!prod.row_is_zero(r)) return false;
    return true;
}

}  // namespace

TEST_CASE("toric code parameters across sizes") {
    for (std::size_t L = 2; L <= 8; ++L) {
        const CssCode code = toric_code(L);
        CHECK(code.n == 2 * L * L);
        CHECK(code.a.rows() == L * L);
        CHECK(code.b.rows() == L * L);
        CHECK(code.k() == 2);
        CHECK(commutes(code));
        for (std::size_t r = 0; r < code.a.rows(); ++r) CHECK(code.a.row_weight(r) == 4);
        for (std::size_t r = 0; r < code.b.rows(); ++r) CHECK(code.b.row_weight(r) == 4);
        for (std::size_t c = 0; c < code.n; ++c) {
            CHECK(code.a.col_weight(c) == 2);
            CHECK(code.b.col_weight(c) == 2);
        }
    }
    CHECK_THROWS_AS(toric_code(1), std::invalid_argument);
}

TEST_CASE("toric L=2 ranks via the elimination oracle") {
    const CssCode code = toric_code(2);
    CHECK(oracle::rank(code.a) == 3);
    CHECK(oracle::rank(code.b) == 3);
    CHECK(code.k() == 8 - 3 - 3);
}

TEST_CASE("toric lattice map matches the incidence matrices") {
    const CssCode code = toric_code(3);
    REQUIRE(code.lattice.has_value());
    const ToricLattice& lat = *code.lattice;
    CHECK(lat.edges.size() == code.n);
    // a horizontal edge at (x, y) belongs to vertices (x, y) and (x+1, y)
    for (std::size_t y = 0; y < 3; ++y)
        for (std::size_t x = 0; x < 3; ++x) {
            const std::size_t e = lat.horizontal_index(x, y);
            CHECK(lat.edges[e].orientation == 0);
            CHECK(code.a.get(y * 3 + x, e));
            CHECK(code.a.get(y * 3 + (x + 1) % 3, e));
            // and to plaquettes (x, y) and (x, y-1)
            CHECK(code.b.get(y * 3 + x, e));
            CHECK(code.b.get(((y + 2) % 3) * 3 + x, e));
        }
}

TEST_CASE("cyclic code constructions") {
    const ClassicalCode hamming = cyclic_parity_check(7, {1, 1, 0, 1}, "hamming743");
    CHECK(hamming.n == 7);
    CHECK(hamming.k == 4);
    CHECK(hamming.h.rows() == 3);
    CHECK(min_distance_exhaustive(hamming.h) == 3);

    const ClassicalCode bch = cyclic_parity_check(15, {1, 0, 0, 0, 1, 0, 1, 1, 1}, "bch1575");
    CHECK(bch.n == 15);
    CHECK(bch.k == 7);
    CHECK(bch.h.rows() == 8);
    CHECK(min_distance_exhaustive(bch.h) == 5);

    // [3,2] single parity check: x + 1 generates it
    const ClassicalCode par = cyclic_parity_check(3, {1, 1});
    CHECK(par.k == 2);
    REQUIRE(par.h.rows() == 1);
    CHECK(par.h.row_weight(0) == 3);

    // x^2 + 1 does not divide x^7 - 1
    CHECK_THROWS_AS(cyclic_parity_check(7, {1, 0, 1}), std::invalid_argument);
}

TEST_CASE("named classical codes self-verify") {
    const ClassicalCode hamming = hamming_7_4_3();
    CHECK(hamming.min_distance() == 3);
    const ClassicalCode bch = bch_15_7_5();
    CHECK(bch.min_distance() == 5);
}

TEST_CASE("every codeword satisfies the parity checks") {
    for (const auto& code : {hamming_7_4_3(), bch_15_7_5(), parity_code(5)}) {
        const BitMatrix gen = classical_generator(code);
        CHECK(gen.rows() == code.k);
        const auto words = oracle::rowspace_elements(gen);
        for (const auto& word : words) CHECK(code.h.mul_vector(word).is_zero());
    }
}

TEST_CASE("bicycle code [[256,32]]") {
    const CssCode code = bicycle_code(256, 32, 8, 7);
    CHECK(code.n == 256);
    CHECK(code.a.rows() == 112);
    CHECK(code.k() == 32);
    CHECK(commutes(code));
    // column weights never exceed w, row weights 2w before row removal
    for (std::size_t r = 0; r < code.a.rows(); ++r) CHECK(code.a.row_weight(r) == 16);
}

TEST_CASE("bicycle code determinism and small instance") {
    const CssCode a = bicycle_code(16, 4, 4, 123);
    const CssCode b = bicycle_code(16, 4, 4, 123);
    CHECK(a.a == b.a);
    CHECK(a.b == b.b);
    CHECK(a.k() == 4);
    CHECK(oracle::rank(a.a) == 6);  // (16-4)/2

    const CssCode c = bicycle_code(16, 4, 4, 124);
    CHECK(c.k() == 4);

    CHECK_THROWS_AS(bicycle_code(15, 4, 4, 1), std::invalid_argument);
    CHECK_THROWS_AS(bicycle_code(16, 3, 4, 1), std::invalid_argument);
    CHECK_THROWS_AS(bicycle_code(16, 4, 0, 1), std::invalid_argument);
    CHECK_THROWS_AS(bicycle_code(16, 16, 4, 1), std::invalid_argument);
}

TEST_CASE("bicycle code hits k = K across 50 seeds") {
    for (uint64_t seed = 0; seed < 50; ++seed) {
        const CssCode code = bicycle_code(256, 32, 8, seed);
        CHECK(code.k() == 32);
        CHECK(commutes(code));
    }
}

TEST_CASE("hypergraph product of Hamming and BCH gives [[129,28]]") {
    const CssCode code = hypergraph_product(hamming_7_4_3(), bch_15_7_5());
    CHECK(code.n == 129);  // 7*15 + 3*8
    CHECK(code.a.rows() + code.b.rows() == 101);  // 3*15 + 7*8
    CHECK(code.a.rows() == 45);
    CHECK(code.b.rows() == 56);
    CHECK(code.k() == 28);
    CHECK(commutes(code));

    // bit-deterministic: rebuild and compare
    const CssCode again = hypergraph_product(hamming_7_4_3(), bch_15_7_5());
    CHECK(code.a == again.a);
    CHECK(code.b == again.b);
}

TEST_CASE("hypergraph product of two parity codes") {
    const ClassicalCode par = parity_code(3);
    const CssCode code = hypergraph_product(par, par);
    CHECK(code.n == 3 * 3 + 1 * 1);
    CHECK(commutes(code));
    CHECK(code.k() == 4);
}

TEST_CASE("validate_css reports") {
    const CssReport rep = validate_css(toric_code(3));
    CHECK(rep.n == 18);
    CHECK(rep.k == 2);
    CHECK(rep.commutes);
    for (std::size_t w : rep.a_row_weights) CHECK(w == 4);

    const CssReport bike = validate_css(bicycle_code(256, 32, 8, 7));
    CHECK(bike.commutes);
    CHECK(bike.k == 32);

    CssCode corrupted = toric_code(2);
    corrupted.a.set(0, 5, !corrupted.a.get(0, 5));
    const CssReport bad = validate_css(corrupted);
    CHECK_FALSE(bad.commutes);
}

TEST_CASE("code file round trip") {
    for (const CssCode& code :
         {toric_code(3), bicycle_code(32, 4, 4, 9), hypergraph_product(parity_code(3), parity_code(3))}) {
        const std::string json = code_to_json(code);
        const CssCode back = code_from_json(json);
        CHECK(back.name == code.name);
        CHECK(back.n == code.n);
        CHECK(back.a == code.a);
        CHECK(back.b == code.b);
        CHECK(back.lattice.has_value() == code.lattice.has_value());
        if (code.lattice) CHECK(back.lattice->L == code.lattice->L);
        CHECK(code_to_json(back) == json);
    }
}
