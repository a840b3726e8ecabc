#pragma once

#include <cstdint>
#include <string>
#include <vector>

namespace qbp {

// Dense bit-packed vector over GF(2).
class BitVector {
public:
    BitVector() = default;
    explicit BitVector(std::size_t len) : len_(len), words_((len + 63) / 64, 0) {}

    std::size_t size() const { return len_; }

    bool get(std::size_t i) const;
    void set(std::size_t i, bool value);
    void flip(std::size_t i);

    // number of set bits
    std::size_t weight() const;

    bool is_zero() const;

    // in-place XOR; lengths must match
    void xor_with(const BitVector& other);

    // parity of the AND of two equal-length vectors
    static int dot(const BitVector& a, const BitVector& b);

    std::vector<std::size_t> support() const;

    bool operator==(const BitVector& other) const;
    bool operator!=(const BitVector& other) const { return !(*this == other); }

    const std::vector<uint64_t>& words() const { return words_; }

    static BitVector from_support(std::size_t len, const std::vector<std::size_t>& ones);
    static BitVector from_string(const std::string& bits);  // e.g. "0110"
    std::string to_string() const;

private:
    std::size_t len_ = 0;
    std::vector<uint64_t> words_;

    friend class BitMatrix;
};

// Dense bit-packed matrix over GF(2), row-major. Row elimination is
// word-level XOR, which dominates setup cost once codes reach a few
// hundred columns.
class BitMatrix {
public:
    BitMatrix() = default;
    BitMatrix(std::size_t rows, std::size_t cols) : rows_(rows), cols_(cols) {
        wpr_ = (cols + 63) / 64;
        if (wpr_ == 0) wpr_ = 1;
        words_.assign(rows_ * wpr_, 0);
    }

    std::size_t rows() const { return rows_; }
    std::size_t cols() const { return cols_; }

    bool get(std::size_t r, std::size_t c) const;
    void set(std::size_t r, std::size_t c, bool value);

    void xor_rows(std::size_t dst, std::size_t src);  // row dst ^= row src
    // row dst ^= row src_row of src; column counts must match
    void xor_row_from(std::size_t dst, const BitMatrix& src, std::size_t src_row);
    void swap_rows(std::size_t a, std::size_t b);

    std::size_t row_weight(std::size_t r) const;
    std::size_t col_weight(std::size_t c) const;
    bool row_is_zero(std::size_t r) const;

    BitVector row(std::size_t r) const;
    void set_row(std::size_t r, const BitVector& v);

    // y = M x over GF(2); x.size() must equal cols
    BitVector mul_vector(const BitVector& x) const;

    bool operator==(const BitMatrix& other) const;
    bool operator!=(const BitMatrix& other) const { return !(*this == other); }

    static BitMatrix identity(std::size_t n);
    static BitMatrix from_rows(const std::vector<std::vector<int>>& dense);
    static BitMatrix from_row_support(std::size_t rows, std::size_t cols,
                                      const std::vector<std::vector<std::size_t>>& support);

    std::vector<std::vector<std::size_t>> row_support() const;

    // JSON text format: {"rows": m, "cols": n, "row_support": [[...], ...]}.
    // Round-trips bit-exactly.
    std::string to_json() const;
    static BitMatrix from_json(const std::string& text);

private:
    std::size_t rows_ = 0;
    std::size_t cols_ = 0;
    std::size_t wpr_ = 0;  // words per row
    std::vector<uint64_t> words_;

    uint64_t* row_ptr(std::size_t r) { return words_.data() + r * wpr_; }
    const uint64_t* row_ptr(std::size_t r) const { return words_.data() + r * wpr_; }

    friend struct Gf2Ops;
};

}  // namespace qbp
