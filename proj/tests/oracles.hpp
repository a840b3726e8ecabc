#pragma once

// Test-side oracles, deliberately naive and independent of the library's
// bit-packed implementations: dense Gaussian elimination, exhaustive
// subset enumeration and brute-force posterior marginals.

#include <cmath>
#include <cstdint>
#include <stdexcept>
#include <vector>

#include "qbp/bitmatrix.hpp"
#include "qbp/rng.hpp"

namespace oracle {

using Dense = std::vector<std::vector<int>>;

inline Dense to_dense(const qbp::BitMatrix& m) {
    Dense d(m.rows(), std::vector<int>(m.cols(), 0));
    for (std::size_t r = 0; r < m.rows(); ++r)
        for (std::size_t c = 0; c < m.cols(); ++c) d[r][c] = m.get(r, c) ? 1 : 0;
    return d;
}

// plain row-reduction, no bit packing
inline std::size_t dense_rank(Dense a) {
    if (a.empty()) return 0;
    const std::size_t rows = a.size(), cols = a[0].size();
    std::size_t r = 0;
    for (std::size_t c = 0; c < cols && r < rows; ++c) {
        std::size_t pivot = rows;
        for (std::size_t i = r; i < rows; ++i)
            if (a[i][c]) {
                pivot = i;
                break;
            }
        if (pivot == rows) continue;
        std::swap(a[r], a[pivot]);
        for (std::size_t i = 0; i < rows; ++i) {
            if (i != r && a[i][c])
                for (std::size_t j = 0; j < cols; ++j) a[i][j] ^= a[r][j];
        }
        ++r;
    }
    return r;
}

inline std::size_t rank(const qbp::BitMatrix& m) { return dense_rank(to_dense(m)); }

// membership in the row space by enumerating all 2^rows combinations;
// rows must be <= 20 or so
inline bool in_rowspace_exhaustive(const qbp::BitMatrix& m, const qbp::BitVector& v) {
    if (m.rows() > 24) throw std::invalid_argument("in_rowspace_exhaustive: too many rows");
    const std::size_t cols = m.cols();
    for (uint64_t mask = 0; mask < (uint64_t(1) << m.rows()); ++mask) {
        std::vector<int> sum(cols, 0);
        for (std::size_t r = 0; r < m.rows(); ++r)
            if ((mask >> r) & 1)
                for (std::size_t c = 0; c < cols; ++c) sum[c] ^= m.get(r, c) ? 1 : 0;
        bool equal = true;
        for (std::size_t c = 0; c < cols && equal; ++c)
            if (sum[c] != (v.get(c) ? 1 : 0)) equal = false;
        if (equal) return true;
    }
    return false;
}

// every element of the row space, via full subset enumeration
inline std::vector<qbp::BitVector> rowspace_elements(const qbp::BitMatrix& m) {
    if (m.rows() > 20) throw std::invalid_argument("rowspace_elements: too many rows");
    std::vector<qbp::BitVector> out;
    for (uint64_t mask = 0; mask < (uint64_t(1) << m.rows()); ++mask) {
        qbp::BitVector sum(m.cols());
        for (std::size_t r = 0; r < m.rows(); ++r)
            if ((mask >> r) & 1) {
                qbp::BitVector row = m.row(r);
                sum.xor_with(row);
            }
        out.push_back(sum);
    }
    return out;
}

// Exact posterior log-likelihood ratios given a syndrome, by enumerating
// all 2^n error patterns weighted by p^w (1-p)^(n-w). n <= 20.
inline std::vector<double> posterior_llrs(const qbp::BitMatrix& h, const qbp::BitVector& syndrome,
                                          double p) {
    const std::size_t n = h.cols();
    if (n > 20) throw std::invalid_argument("posterior_llrs: too many variables");
    std::vector<double> prob0(n, 0.0), prob1(n, 0.0);
    for (uint64_t mask = 0; mask < (uint64_t(1) << n); ++mask) {
        qbp::BitVector e(n);
        for (std::size_t v = 0; v < n; ++v)
            if ((mask >> v) & 1) e.set(v, true);
        if (h.mul_vector(e) != syndrome) continue;
        const double w = static_cast<double>(e.weight());
        const double weight = std::pow(p, w) * std::pow(1.0 - p, static_cast<double>(n) - w);
        for (std::size_t v = 0; v < n; ++v)
            (e.get(v) ? prob1[v] : prob0[v]) += weight;
    }
    std::vector<double> llrs(n);
    for (std::size_t v = 0; v < n; ++v) {
        if (prob0[v] == 0.0 && prob1[v] == 0.0)
            throw std::runtime_error("posterior_llrs: inconsistent syndrome");
        llrs[v] = std::log(prob0[v] / prob1[v]);
    }
    return llrs;
}

// Random bipartite tree in parity-check form: every check has degree >= 2,
// so no variable is hard-pinned and all posterior LLRs stay finite.
inline qbp::BitMatrix random_tree_code(std::size_t n_vars, qbp::Rng& rng) {
    if (n_vars < 3) throw std::invalid_argument("random_tree_code: need >= 3 variables");
    std::vector<std::vector<std::size_t>> checks;  // variable lists
    std::size_t placed = 1;                        // variable 0 is the root
    while (placed < n_vars) {
        // attach a new check to a random placed variable, with 1..2 fresh leaves
        const std::size_t anchor = rng.next_below(placed);
        std::size_t leaves = 1 + rng.next_below(2);
        leaves = std::min<std::size_t>(leaves, n_vars - placed);
        std::vector<std::size_t> members{anchor};
        for (std::size_t i = 0; i < leaves; ++i) members.push_back(placed++);
        checks.push_back(members);
    }
    qbp::BitMatrix h(checks.size(), n_vars);
    for (std::size_t c = 0; c < checks.size(); ++c)
        for (std::size_t v : checks[c]) h.set(c, v, true);
    return h;
}

inline qbp::BitVector random_error(std::size_t n, double p, qbp::Rng& rng) {
    qbp::BitVector e(n);
    for (std::size_t i = 0; i < n; ++i)
        if (rng.next_bernoulli(p)) e.set(i, true);
    return e;
}

inline qbp::BitMatrix random_matrix(std::size_t rows, std::size_t cols, double density,
                                    qbp::Rng& rng) {
    qbp::BitMatrix m(rows, cols);
    for (std::size_t r = 0; r < rows; ++r)
        for (std::size_t c = 0; c < cols; ++c)
            if (rng.next_bernoulli(density)) m.set(r, c, true);
    return m;
}

}  // namespace oracle
