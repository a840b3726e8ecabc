#include "qbp/tanner.hpp"

#include <algorithm>
#include <sstream>
#include <stdexcept>

namespace qbp {

std::size_t TannerGraph::edge_index(std::size_t check, std::size_t var) const {
    const auto& list = check_edges.at(check);
    auto it = std::lower_bound(list.begin(), list.end(), var,
                               [this](std::size_t e, std::size_t v) { return edges[e].var < v; });
    if (it == list.end() || edges[*it].var != var)
        throw std::invalid_argument("TannerGraph::edge_index: no such edge");
    return *it;
}

uint64_t TannerGraph::signature() const {
    uint64_t h = 0xcbf29ce484222325ULL;
    auto mix = [&h](uint64_t v) {
        for (int i = 0; i < 8; ++i) {
            h ^= (v >> (8 * i)) & 0xff;
            h *= 0x100000001b3ULL;
        }
    };
    mix(m);
    mix(n);
    for (const Edge& e : edges) {
        mix(e.check);
        mix(e.var);
    }
    return h;
}

std::string TannerGraph::signature_hex() const {
    std::ostringstream os;
    os << std::hex << signature();
    return os.str();
}

TannerGraph build_tanner(const BitMatrix& h) {
    if (h.rows() == 0 || h.cols() == 0)
        throw std::invalid_argument("build_tanner: empty matrix");

    TannerGraph g;
    g.m = h.rows();
    g.n = h.cols();
    g.check_edges.resize(g.m);
    g.var_edges.resize(g.n);

    const auto support = h.row_support();
    for (std::size_t c = 0; c < g.m; ++c)
        for (std::size_t v : support[c]) {
            const std::size_t e = g.edges.size();
            g.edges.push_back({c, v});
            g.check_edges[c].push_back(e);
            g.var_edges[v].push_back(e);
        }
    // row_support scans rows in order and columns ascending, so edges are
    // already sorted by (check, var) and var_edges lists ascend in check.
    return g;
}

}  // namespace qbp
