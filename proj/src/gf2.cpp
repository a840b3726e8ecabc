#include "qbp/gf2.hpp"

#include <stdexcept>

namespace qbp {

RrefResult gf2_rref(const BitMatrix& m) {
    RrefResult res;
    res.reduced = m;
    BitMatrix& a = res.reduced;
    const std::size_t rows = a.rows();
    const std::size_t cols = a.cols();

    std::size_t r = 0;
    for (std::size_t c = 0; c < cols && r < rows; ++c) {
        std::size_t pivot = rows;
        for (std::size_t i = r; i < rows; ++i) {
            if (a.get(i, c)) {
                pivot = i;
                break;
            }
        }
        if (pivot == rows) continue;
        a.swap_rows(r, pivot);
        for (std::size_t i = 0; i < rows; ++i) {
            if (i != r && a.get(i, c)) a.xor_rows(i, r);
        }
        res.pivots.push_back(c);
        ++r;
    }
    res.rank = r;
    return res;
}

std::size_t gf2_rank(const BitMatrix& m) { return gf2_rref(m).rank; }

BitMatrix gf2_nullspace(const BitMatrix& m) {
    const RrefResult rref = gf2_rref(m);
    const std::size_t cols = m.cols();

    std::vector<bool> is_pivot(cols, false);
    for (std::size_t c : rref.pivots) is_pivot[c] = true;

    BitMatrix basis(cols - rref.rank, cols);
    std::size_t out = 0;
    for (std::size_t f = 0; f < cols; ++f) {
        if (is_pivot[f]) continue;
        basis.set(out, f, true);
        // pivot row i constrains x[pivots[i]] = rref[i][f]
        for (std::size_t i = 0; i < rref.rank; ++i) {
            if (rref.reduced.get(i, f)) basis.set(out, rref.pivots[i], true);
        }
        ++out;
    }
    return basis;
}

BitMatrix gf2_matmul(const BitMatrix& a, const BitMatrix& b) {
    if (a.cols() != b.rows())
        throw std::invalid_argument("gf2_matmul: dimension mismatch");
    BitMatrix c(a.rows(), b.cols());
    const auto support = a.row_support();
    for (std::size_t r = 0; r < a.rows(); ++r)
        for (std::size_t k : support[r]) c.xor_row_from(r, b, k);
    return c;
}

BitMatrix gf2_transpose(const BitMatrix& m) {
    BitMatrix t(m.cols(), m.rows());
    const auto support = m.row_support();
    for (std::size_t r = 0; r < m.rows(); ++r)
        for (std::size_t c : support[r]) t.set(c, r, true);
    return t;
}

int symplectic_product(const BitVector& a, const BitVector& b) {
    if (a.size() != b.size())
        throw std::invalid_argument("symplectic_product: length mismatch");
    if (a.size() % 2 != 0)
        throw std::invalid_argument("symplectic_product: length must be even");
    const std::size_t n = a.size() / 2;
    int acc = 0;
    for (std::size_t i = 0; i < n; ++i) {
        acc ^= (a.get(i) & b.get(i + n)) ^ (a.get(i + n) & b.get(i));
    }
    return acc;
}

BitMatrix swap_halves(const BitMatrix& h) {
    if (h.cols() % 2 != 0)
        throw std::invalid_argument("swap_halves: column count must be even");
    const std::size_t n = h.cols() / 2;
    BitMatrix out(h.rows(), h.cols());
    const auto support = h.row_support();
    for (std::size_t r = 0; r < h.rows(); ++r)
        for (std::size_t c : support[r]) out.set(r, c < n ? c + n : c - n, true);
    return out;
}

BitMatrix normalizer_basis(const BitMatrix& h) {
    if (h.rows() == 0) throw std::invalid_argument("normalizer_basis: empty matrix");
    // H M x = 0  <=>  (H with column halves swapped) x = 0
    return gf2_nullspace(swap_halves(h));
}

RowspaceTester::RowspaceTester(const BitMatrix& m) : rref_(gf2_rref(m)) {}

bool RowspaceTester::contains(const BitVector& v) const {
    if (v.size() != rref_.reduced.cols())
        throw std::invalid_argument("RowspaceTester::contains: length mismatch");
    // Reduce v against the RREF rows; membership iff it cancels to zero,
    // i.e. appending it would not grow the rank.
    BitVector w = v;
    for (std::size_t i = 0; i < rref_.rank; ++i) {
        if (w.get(rref_.pivots[i])) {
            BitVector row = rref_.reduced.row(i);
            w.xor_with(row);
        }
    }
    return w.is_zero();
}

bool in_rowspace(const BitMatrix& m, const BitVector& v) {
    return RowspaceTester(m).contains(v);
}

}  // namespace qbp
