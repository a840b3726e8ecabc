#include "qbp/bitmatrix.hpp"

#include <bit>
#include <sstream>
#include <stdexcept>

#include <nlohmann/json.hpp>

namespace qbp {

bool BitVector::get(std::size_t i) const {
    if (i >= len_) throw std::out_of_range("BitVector::get index out of range");
    return (words_[i >> 6] >> (i & 63)) & 1u;
}

void BitVector::set(std::size_t i, bool value) {
    if (i >= len_) throw std::out_of_range("BitVector::set index out of range");
    const uint64_t mask = uint64_t(1) << (i & 63);
    if (value)
        words_[i >> 6] |= mask;
    else
        words_[i >> 6] &= ~mask;
}

void BitVector::flip(std::size_t i) {
    if (i >= len_) throw std::out_of_range("BitVector::flip index out of range");
    words_[i >> 6] ^= uint64_t(1) << (i & 63);
}

std::size_t BitVector::weight() const {
    std::size_t w = 0;
    for (uint64_t word : words_) w += std::popcount(word);
    return w;
}

bool BitVector::is_zero() const {
    for (uint64_t word : words_)
        if (word != 0) return false;
    return true;
}

void BitVector::xor_with(const BitVector& other) {
    if (len_ != other.len_) throw std::invalid_argument("BitVector::xor_with length mismatch");
    for (std::size_t i = 0; i < words_.size(); ++i) words_[i] ^= other.words_[i];
}

int BitVector::dot(const BitVector& a, const BitVector& b) {
    if (a.len_ != b.len_) throw std::invalid_argument("BitVector::dot length mismatch");
    uint64_t acc = 0;
    for (std::size_t i = 0; i < a.words_.size(); ++i) acc ^= a.words_[i] & b.words_[i];
    return std::popcount(acc) & 1;
}

std::vector<std::size_t> BitVector::support() const {
    std::vector<std::size_t> out;
    for (std::size_t i = 0; i < len_; ++i)
        if (get(i)) out.push_back(i);
    return out;
}

bool BitVector::operator==(const BitVector& other) const {
    return len_ == other.len_ && words_ == other.words_;
}

BitVector BitVector::from_support(std::size_t len, const std::vector<std::size_t>& ones) {
    BitVector v(len);
    for (std::size_t i : ones) v.set(i, true);
    return v;
}

BitVector BitVector::from_string(const std::string& bits) {
    BitVector v(bits.size());
    for (std::size_t i = 0; i < bits.size(); ++i) {
        if (bits[i] == '1')
            v.set(i, true);
        else if (bits[i] != '0')
            throw std::invalid_argument("BitVector::from_string: expected only 0/1 characters");
    }
    return v;
}

std::string BitVector::to_string() const {
    std::string s(len_, '0');
    for (std::size_t i = 0; i < len_; ++i)
        if (get(i)) s[i] = '1';
    return s;
}

bool BitMatrix::get(std::size_t r, std::size_t c) const {
    if (r >= rows_ || c >= cols_) throw std::out_of_range("BitMatrix::get index out of range");
    return (row_ptr(r)[c >> 6] >> (c & 63)) & 1u;
}

void BitMatrix::set(std::size_t r, std::size_t c, bool value) {
    if (r >= rows_ || c >= cols_) throw std::out_of_range("BitMatrix::set index out of range");
    const uint64_t mask = uint64_t(1) << (c & 63);
    if (value)
        row_ptr(r)[c >> 6] |= mask;
    else
        row_ptr(r)[c >> 6] &= ~mask;
}

void BitMatrix::xor_rows(std::size_t dst, std::size_t src) {
    uint64_t* d = row_ptr(dst);
    const uint64_t* s = row_ptr(src);
    for (std::size_t i = 0; i < wpr_; ++i) d[i] ^= s[i];
}

void BitMatrix::xor_row_from(std::size_t dst, const BitMatrix& src, std::size_t src_row) {
    if (cols_ != src.cols_) throw std::invalid_argument("BitMatrix::xor_row_from column mismatch");
    uint64_t* d = row_ptr(dst);
    const uint64_t* s = src.row_ptr(src_row);
    for (std::size_t i = 0; i < wpr_; ++i) d[i] ^= s[i];
}

void BitMatrix::swap_rows(std::size_t a, std::size_t b) {
    if (a == b) return;
    uint64_t* pa = row_ptr(a);
    uint64_t* pb = row_ptr(b);
    for (std::size_t i = 0; i < wpr_; ++i) std::swap(pa[i], pb[i]);
}

std::size_t BitMatrix::row_weight(std::size_t r) const {
    const uint64_t* p = row_ptr(r);
    std::size_t w = 0;
    for (std::size_t i = 0; i < wpr_; ++i) w += std::popcount(p[i]);
    return w;
}

std::size_t BitMatrix::col_weight(std::size_t c) const {
    std::size_t w = 0;
    for (std::size_t r = 0; r < rows_; ++r) w += get(r, c) ? 1 : 0;
    return w;
}

bool BitMatrix::row_is_zero(std::size_t r) const {
    const uint64_t* p = row_ptr(r);
    for (std::size_t i = 0; i < wpr_; ++i)
        if (p[i] != 0) return false;
    return true;
}

BitVector BitMatrix::row(std::size_t r) const {
    BitVector v(cols_);
    const uint64_t* p = row_ptr(r);
    for (std::size_t i = 0; i < v.words_.size(); ++i) v.words_[i] = p[i];
    return v;
}

void BitMatrix::set_row(std::size_t r, const BitVector& v) {
    if (v.size() != cols_) throw std::invalid_argument("BitMatrix::set_row length mismatch");
    uint64_t* p = row_ptr(r);
    for (std::size_t i = 0; i < v.words_.size(); ++i) p[i] = v.words_[i];
}

BitVector BitMatrix::mul_vector(const BitVector& x) const {
    if (x.size() != cols_) throw std::invalid_argument("BitMatrix::mul_vector dimension mismatch");
    BitVector y(rows_);
    for (std::size_t r = 0; r < rows_; ++r) {
        const uint64_t* p = row_ptr(r);
        uint64_t acc = 0;
        for (std::size_t i = 0; i < x.words_.size(); ++i) acc ^= p[i] & x.words_[i];
        if (std::popcount(acc) & 1) y.set(r, true);
    }
    return y;
}

bool BitMatrix::operator==(const BitMatrix& other) const {
    return rows_ == other.rows_ && cols_ == other.cols_ && words_ == other.words_;
}

BitMatrix BitMatrix::identity(std::size_t n) {
    BitMatrix m(n, n);
    for (std::size_t i = 0; i < n; ++i) m.set(i, i, true);
    return m;
}

BitMatrix BitMatrix::from_rows(const std::vector<std::vector<int>>& dense) {
    const std::size_t rows = dense.size();
    const std::size_t cols = rows == 0 ? 0 : dense[0].size();
    BitMatrix m(rows, cols);
    for (std::size_t r = 0; r < rows; ++r) {
        if (dense[r].size() != cols)
            throw std::invalid_argument("BitMatrix::from_rows: ragged rows");
        for (std::size_t c = 0; c < cols; ++c)
            if (dense[r][c] & 1) m.set(r, c, true);
    }
    return m;
}

BitMatrix BitMatrix::from_row_support(std::size_t rows, std::size_t cols,
                                      const std::vector<std::vector<std::size_t>>& support) {
    if (support.size() != rows)
        throw std::invalid_argument("BitMatrix::from_row_support: row count mismatch");
    BitMatrix m(rows, cols);
    for (std::size_t r = 0; r < rows; ++r)
        for (std::size_t c : support[r]) {
            if (c >= cols) throw std::out_of_range("BitMatrix::from_row_support: column out of range");
            m.set(r, c, true);
        }
    return m;
}

std::vector<std::vector<std::size_t>> BitMatrix::row_support() const {
    std::vector<std::vector<std::size_t>> out(rows_);
    for (std::size_t r = 0; r < rows_; ++r) {
        const uint64_t* p = row_ptr(r);
        for (std::size_t w = 0; w < wpr_; ++w) {
            uint64_t word = p[w];
            while (word) {
                const int bit = std::countr_zero(word);
                out[r].push_back(w * 64 + static_cast<std::size_t>(bit));
                word &= word - 1;
            }
        }
    }
    return out;
}

std::string BitMatrix::to_json() const {
    nlohmann::json j;
    j["rows"] = rows_;
    j["cols"] = cols_;
    j["row_support"] = row_support();
    return j.dump();
}

BitMatrix BitMatrix::from_json(const std::string& text) {
    const nlohmann::json j = nlohmann::json::parse(text);
    if (!j.contains("rows") || !j.contains("cols") || !j.contains("row_support"))
        throw std::invalid_argument("BitMatrix::from_json: missing field");
    const auto rows = j.at("rows").get<std::size_t>();
    const auto cols = j.at("cols").get<std::size_t>();
    const auto support = j.at("row_support").get<std::vector<std::vector<std::size_t>>>();
    return from_row_support(rows, cols, support);
}

}  // namespace qbp
