#include "qbp/codes.hpp"

#include <algorithm>
#include <fstream>
#include <map>
#include <sstream>
#include <stdexcept>

#include <nlohmann/json.hpp>

#include "qbp/gf2.hpp"
#include "qbp/rng.hpp"

namespace qbp {
namespace {

// ---- GF(2) polynomial helpers (coefficients low degree first) ----

std::vector<int> poly_trim(std::vector<int> p) {
    while (!p.empty() && p.back() == 0) p.pop_back();
    return p;
}

int poly_deg(const std::vector<int>& p) { return static_cast<int>(p.size()) - 1; }

// returns {quotient, remainder} of a / b over GF(2)
std::pair<std::vector<int>, std::vector<int>> poly_divmod(std::vector<int> a,
                                                          const std::vector<int>& b) {
    a = poly_trim(std::move(a));
    const int db = poly_deg(b);
    if (db < 0) throw std::invalid_argument("poly_divmod: division by zero polynomial");
    std::vector<int> q(std::max<int>(poly_deg(a) - db + 1, 0), 0);
    while (poly_deg(a) >= db) {
        const int shift = poly_deg(a) - db;
        q[shift] ^= 1;
        for (int i = 0; i <= db; ++i) a[i + shift] ^= b[i];
        a = poly_trim(std::move(a));
    }
    return {poly_trim(std::move(q)), a};
}

}  // namespace

std::size_t ClassicalCode::min_distance() const {
    if (k > 24) throw std::invalid_argument("min_distance: enumeration needs k <= 24");
    if (k == 0) return 0;
    const BitMatrix gen = classical_generator(*this);
    std::size_t best = n + 1;
    // Gray-code walk over all nonzero codewords
    BitVector word(n);
    uint64_t gray_prev = 0;
    for (uint64_t i = 1; i < (uint64_t(1) << k); ++i) {
        const uint64_t gray = i ^ (i >> 1);
        const uint64_t diff = gray ^ gray_prev;
        gray_prev = gray;
        int bit = 0;
        while (!((diff >> bit) & 1)) ++bit;
        BitVector row = gen.row(static_cast<std::size_t>(bit));
        word.xor_with(row);
        best = std::min(best, word.weight());
    }
    return best;
}

BitMatrix classical_generator(const ClassicalCode& code) { return gf2_nullspace(code.h); }

ClassicalCode cyclic_parity_check(std::size_t n, const std::vector<int>& g,
                                  const std::string& name) {
    const std::vector<int> gt = poly_trim(g);
    const int dg = poly_deg(gt);
    if (dg < 0 || n == 0 || static_cast<std::size_t>(dg) > n)
        throw std::invalid_argument("cyclic_parity_check: invalid generator polynomial");

    // x^n - 1 over GF(2)
    std::vector<int> xn1(n + 1, 0);
    xn1[0] = 1;
    xn1[n] = 1;
    auto [h_poly, rem] = poly_divmod(xn1, gt);
    if (!rem.empty())
        throw std::invalid_argument("cyclic_parity_check: g does not divide x^n - 1");

    // Standard cyclic arrangement: row i carries the reversed check
    // polynomial starting at column i, i = 0 .. deg(g)-1.
    const std::size_t kk = n - static_cast<std::size_t>(dg);  // deg h
    BitMatrix h(static_cast<std::size_t>(dg), n);
    for (std::size_t r = 0; r < static_cast<std::size_t>(dg); ++r)
        for (std::size_t j = 0; j <= kk; ++j)
            if (h_poly[kk - j]) h.set(r, r + j, true);

    ClassicalCode code;
    code.h = std::move(h);
    code.n = n;
    code.k = n - gf2_rank(code.h);
    code.name = name.empty() ? ("cyclic_n" + std::to_string(n)) : name;
    return code;
}

ClassicalCode hamming_7_4_3() {
    // g = x^3 + x + 1
    ClassicalCode code = cyclic_parity_check(7, {1, 1, 0, 1}, "hamming743");
    if (code.k != 4 || code.min_distance() != 3)
        throw std::runtime_error("hamming_7_4_3: construction self-check failed");
    return code;
}

ClassicalCode bch_15_7_5() {
    // g = (x^4+x+1)(x^4+x^3+x^2+x+1) = x^8 + x^7 + x^6 + x^4 + 1
    ClassicalCode code = cyclic_parity_check(15, {1, 0, 0, 0, 1, 0, 1, 1, 1}, "bch1575");
    if (code.k != 7 || code.min_distance() != 5)
        throw std::runtime_error("bch_15_7_5: construction self-check failed");
    return code;
}

ClassicalCode parity_code(std::size_t n) {
    if (n < 2) throw std::invalid_argument("parity_code: need n >= 2");
    BitMatrix h(1, n);
    for (std::size_t c = 0; c < n; ++c) h.set(0, c, true);
    ClassicalCode code;
    code.h = std::move(h);
    code.n = n;
    code.k = n - 1;
    code.name = "parity" + std::to_string(n);
    return code;
}

std::size_t CssCode::k() const {
    const std::size_t ra = gf2_rank(a);
    const std::size_t rb = gf2_rank(b);
    return n - ra - rb;
}

BitMatrix CssCode::full_h() const {
    BitMatrix h(a.rows() + b.rows(), 2 * n);
    const auto sa = a.row_support();
    for (std::size_t r = 0; r < a.rows(); ++r)
        for (std::size_t c : sa[r]) h.set(r, c, true);
    const auto sb = b.row_support();
    for (std::size_t r = 0; r < b.rows(); ++r)
        for (std::size_t c : sb[r]) h.set(a.rows() + r, n + c, true);
    return h;
}

CssCode toric_code(std::size_t L) {
    if (L < 2) throw std::invalid_argument("toric_code: need L >= 2");
    const std::size_t n = 2 * L * L;

    ToricLattice lat;
    lat.L = L;
    lat.edges.resize(n);
    for (std::size_t y = 0; y < L; ++y)
        for (std::size_t x = 0; x < L; ++x) {
            lat.edges[lat.horizontal_index(x, y)] = {x, y, 0};
            lat.edges[lat.vertical_index(x, y)] = {x, y, 1};
        }

    // Vertex (star) operators: the four edges meeting at vertex (x, y).
    BitMatrix a(L * L, n);
    for (std::size_t y = 0; y < L; ++y)
        for (std::size_t x = 0; x < L; ++x) {
            const std::size_t row = y * L + x;
            a.set(row, lat.horizontal_index(x, y), true);
            a.set(row, lat.horizontal_index((x + L - 1) % L, y), true);
            a.set(row, lat.vertical_index(x, y), true);
            a.set(row, lat.vertical_index(x, (y + L - 1) % L), true);
        }

    // Plaquette operators: the four edges bounding the face at (x, y).
    BitMatrix b(L * L, n);
    for (std::size_t y = 0; y < L; ++y)
        for (std::size_t x = 0; x < L; ++x) {
            const std::size_t row = y * L + x;
            b.set(row, lat.horizontal_index(x, y), true);
            b.set(row, lat.horizontal_index(x, (y + 1) % L), true);
            b.set(row, lat.vertical_index(x, y), true);
            b.set(row, lat.vertical_index((x + 1) % L, y), true);
        }

    CssCode code;
    code.name = "toric_L" + std::to_string(L);
    code.n = n;
    code.a = std::move(a);
    code.b = std::move(b);
    code.lattice = std::move(lat);
    return code;
}

CssCode bicycle_code(std::size_t N, std::size_t K, std::size_t w, uint64_t seed) {
    if (N % 2 != 0 || K % 2 != 0 || K >= N || w == 0 || w > N / 2)
        throw std::invalid_argument("bicycle_code: invalid parameters");
    const std::size_t half = N / 2;
    const std::size_t target_rows = (N - K) / 2;

    Rng rng(derive_seed(seed, /*stream=*/0xb1c7c1e));
    constexpr int kOuterRetries = 100;
    constexpr int kRowRetries = 100;

    for (int outer = 0; outer < kOuterRetries; ++outer) {
        // random weight-w seed vector
        std::vector<std::size_t> positions(half);
        for (std::size_t i = 0; i < half; ++i) positions[i] = i;
        for (std::size_t i = 0; i < w; ++i) {
            const std::size_t j = i + rng.next_below(half - i);
            std::swap(positions[i], positions[j]);
        }
        BitVector avec(half);
        for (std::size_t i = 0; i < w; ++i) avec.set(positions[i], true);

        // circulant: column c is avec shifted down by c, so
        // C[r][c] = avec[(r - c) mod half]; H0 = [C, C^T]
        BitMatrix h0_full(half, N);
        for (std::size_t r = 0; r < half; ++r)
            for (std::size_t c = 0; c < half; ++c) {
                if (avec.get((r + half - c) % half)) h0_full.set(r, c, true);
                if (avec.get((c + half - r) % half)) h0_full.set(r, half + c, true);
            }

        for (int inner = 0; inner < kRowRetries; ++inner) {
            // choose K/2 distinct rows to remove
            std::vector<std::size_t> rows(half);
            for (std::size_t i = 0; i < half; ++i) rows[i] = i;
            for (std::size_t i = 0; i < K / 2; ++i) {
                const std::size_t j = i + rng.next_below(half - i);
                std::swap(rows[i], rows[j]);
            }
            std::vector<bool> removed(half, false);
            for (std::size_t i = 0; i < K / 2; ++i) removed[rows[i]] = true;

            BitMatrix h0(target_rows, N);
            std::size_t out = 0;
            for (std::size_t r = 0; r < half; ++r) {
                if (removed[r]) continue;
                h0.xor_row_from(out, h0_full, r);
                ++out;
            }

            if (gf2_rank(h0) != target_rows) continue;

            CssCode code;
            code.name = "bicycle_n" + std::to_string(N) + "_k" + std::to_string(K);
            code.n = N;
            code.a = h0;
            code.b = std::move(h0);
            code.seed = seed;
            return code;
        }
    }
    throw std::runtime_error("bicycle_code: retry budget exhausted without full-rank H0");
}

namespace {

// kron(A, B) with A m1 x n1, B m2 x n2 -> (m1 m2) x (n1 n2)
BitMatrix kron(const BitMatrix& a, const BitMatrix& b) {
    BitMatrix out(a.rows() * b.rows(), a.cols() * b.cols());
    const auto sa = a.row_support();
    const auto sb = b.row_support();
    for (std::size_t ra = 0; ra < a.rows(); ++ra)
        for (std::size_t rb = 0; rb < b.rows(); ++rb) {
            const std::size_t row = ra * b.rows() + rb;
            for (std::size_t ca : sa[ra])
                for (std::size_t cb : sb[rb]) out.set(row, ca * b.cols() + cb, true);
        }
    return out;
}

// [left, right] horizontal concatenation
BitMatrix hconcat(const BitMatrix& left, const BitMatrix& right) {
    if (left.rows() != right.rows()) throw std::invalid_argument("hconcat: row mismatch");
    BitMatrix out(left.rows(), left.cols() + right.cols());
    const auto sl = left.row_support();
    const auto sr = right.row_support();
    for (std::size_t r = 0; r < left.rows(); ++r) {
        for (std::size_t c : sl[r]) out.set(r, c, true);
        for (std::size_t c : sr[r]) out.set(r, left.cols() + c, true);
    }
    return out;
}

}  // namespace

CssCode hypergraph_product(const ClassicalCode& c1, const ClassicalCode& c2) {
    const BitMatrix& h1 = c1.h;
    const BitMatrix& h2 = c2.h;
    const std::size_t m1 = h1.rows(), n1 = h1.cols();
    const std::size_t m2 = h2.rows(), n2 = h2.cols();

    const BitMatrix h2t = gf2_transpose(h2);
    const BitMatrix h1t = gf2_transpose(h1);

    // qubit layout: first n1*n2 "vertex" qubits, then m1*m2 "check" qubits
    const BitMatrix hx = hconcat(kron(h1, BitMatrix::identity(n2)),
                                 kron(BitMatrix::identity(m1), h2t));
    const BitMatrix hz = hconcat(kron(BitMatrix::identity(n1), h2),
                                 kron(h1t, BitMatrix::identity(m2)));

    CssCode code;
    code.name = "hgp_" + c1.name + "_" + c2.name;
    code.n = n1 * n2 + m1 * m2;
    code.a = hx;
    code.b = hz;
    return code;
}

CssReport validate_css(const CssCode& code) {
    CssReport rep;
    rep.n = code.n;
    rep.rank_a = gf2_rank(code.a);
    rep.rank_b = gf2_rank(code.b);
    rep.k = code.n - rep.rank_a - rep.rank_b;

    const BitMatrix prod = gf2_matmul(code.a, gf2_transpose(code.b));
    rep.commutes = true;
    for (std::size_t r = 0; r < prod.rows() && rep.commutes; ++r)
        if (!prod.row_is_zero(r)) rep.commutes = false;

    for (std::size_t r = 0; r < code.a.rows(); ++r) rep.a_row_weights.push_back(code.a.row_weight(r));
    for (std::size_t r = 0; r < code.b.rows(); ++r) rep.b_row_weights.push_back(code.b.row_weight(r));
    for (std::size_t c = 0; c < code.a.cols(); ++c) rep.a_col_weights.push_back(code.a.col_weight(c));
    for (std::size_t c = 0; c < code.b.cols(); ++c) rep.b_col_weights.push_back(code.b.col_weight(c));
    return rep;
}

namespace {

std::string weight_histogram(const std::vector<std::size_t>& weights) {
    std::map<std::size_t, std::size_t> hist;
    for (std::size_t w : weights) hist[w]++;
    std::ostringstream os;
    bool first = true;
    for (const auto& [w, count] : hist) {
        if (!first) os << ", ";
        os << w << "x" << count;
        first = false;
    }
    return os.str();
}

}  // namespace

std::string CssReport::to_text() const {
    std::ostringstream os;
    os << "[[" << n << "," << k << "]] code\n";
    os << "  rank(A) = " << rank_a << ", rank(B) = " << rank_b << "\n";
    os << "  commutation A B^T = 0: " << (commutes ? "pass" : "FAIL") << "\n";
    os << "  A row weights: " << weight_histogram(a_row_weights) << "\n";
    os << "  B row weights: " << weight_histogram(b_row_weights) << "\n";
    os << "  A column weights: " << weight_histogram(a_col_weights) << "\n";
    os << "  B column weights: " << weight_histogram(b_col_weights) << "\n";
    return os.str();
}

std::string code_to_json(const CssCode& code) {
    nlohmann::json j;
    j["name"] = code.name;
    j["n"] = code.n;
    j["A"] = nlohmann::json::parse(code.a.to_json());
    j["B"] = nlohmann::json::parse(code.b.to_json());
    if (code.lattice) j["lattice"] = {{"L", code.lattice->L}};
    if (code.seed) j["seed"] = *code.seed;
    return j.dump(2) + "\n";
}

CssCode code_from_json(const std::string& text) {
    const nlohmann::json j = nlohmann::json::parse(text);
    CssCode code;
    code.name = j.at("name").get<std::string>();
    code.n = j.at("n").get<std::size_t>();
    code.a = BitMatrix::from_json(j.at("A").dump());
    code.b = BitMatrix::from_json(j.at("B").dump());
    if (j.contains("lattice") && !j.at("lattice").is_null()) {
        const std::size_t L = j.at("lattice").at("L").get<std::size_t>();
        // rebuild the canonical edge map from L
        CssCode fresh = toric_code(L);
        code.lattice = fresh.lattice;
    }
    if (j.contains("seed") && !j.at("seed").is_null())
        code.seed = j.at("seed").get<uint64_t>();
    if (code.a.cols() != code.n || code.b.cols() != code.n)
        throw std::invalid_argument("code_from_json: matrix width disagrees with n");
    return code;
}

void save_code(const CssCode& code, const std::string& path) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw std::runtime_error("save_code: cannot open " + path);
    out << code_to_json(code);
}

CssCode load_code(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw std::runtime_error("load_code: cannot open " + path);
    std::ostringstream ss;
    ss << in.rdbuf();
    return code_from_json(ss.str());
}

}  // namespace qbp
