#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "qbp/bitmatrix.hpp"

namespace qbp {

// Sparse bipartite check/variable adjacency. Edges are sorted
// lexicographically by (check, variable) and everything else refers to
// edges by that canonical index.
struct TannerGraph {
    std::size_t m = 0;  // checks
    std::size_t n = 0;  // variables

    struct Edge {
        std::size_t check;
        std::size_t var;
    };
    std::vector<Edge> edges;

    std::vector<std::vector<std::size_t>> check_edges;  // per check, edge ids, var ascending
    std::vector<std::vector<std::size_t>> var_edges;    // per variable, edge ids, check ascending

    std::size_t var_degree(std::size_t v) const { return var_edges[v].size(); }
    std::size_t check_degree(std::size_t c) const { return check_edges[c].size(); }

    // edge id for (check, var); throws if absent
    std::size_t edge_index(std::size_t check, std::size_t var) const;

    // FNV-1a over (m, n, edge list); identifies the graph in checkpoints
    uint64_t signature() const;
    std::string signature_hex() const;
};

TannerGraph build_tanner(const BitMatrix& h);

}  // namespace qbp
