#pragma once

#include <array>
#include <cstdint>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "qbp/bitmatrix.hpp"
#include "qbp/bp.hpp"
#include "qbp/codes.hpp"
#include "qbp/tanner.hpp"

namespace qbp {

// Trainable unrolled BP network. Per cycle t there is one multiplicative
// weight for every ordered pair of distinct edges meeting at a variable
// (incoming (c',v), outgoing (v,c)) and one prior bias per variable; the
// check-to-variable layer carries no parameters. A single final layer
// (per-edge marginalization weights plus per-variable biases) is reused to
// read out marginals after every cycle.
//
// Parameters live in `class_values`; each raw slot maps to a class index.
// Untied models use the identity map, lattice-tied models share one class
// per translation orbit, so tied members are equal at all times by
// construction.
struct NbpModel {
    std::shared_ptr<const TannerGraph> graph;
    std::optional<ToricLattice> lattice;
    std::size_t n_cycles = 0;
    bool residual = false;
    std::optional<std::array<std::size_t, 2>> sharing;  // tying period (gx, gy)

    // raw slot -> class index, canonical slot order
    std::vector<std::vector<uint32_t>> cvvc_class;  // [cycle][pair slot]
    std::vector<std::vector<uint32_t>> bias_class;  // [cycle][variable]
    std::vector<uint32_t> marg_w_class;             // [edge]
    std::vector<uint32_t> marg_b_class;             // [variable]
    std::vector<double> class_values;

    // pair-slot layout: slots for variable v start at pair_base[v], ordered
    // by (incoming position, outgoing position), equal positions skipped
    std::vector<std::size_t> pair_base;
    std::size_t pairs_per_cycle = 0;

    std::size_t pair_slot(std::size_t v, std::size_t in_pos, std::size_t out_pos) const {
        const std::size_t deg = graph->var_degree(v);
        return pair_base[v] + in_pos * (deg - 1) + (out_pos > in_pos ? out_pos - 1 : out_pos);
    }

    double cvvc_weight(std::size_t cycle, std::size_t slot) const {
        return class_values[cvvc_class[cycle][slot]];
    }
    double prior_bias(std::size_t cycle, std::size_t v) const {
        return class_values[bias_class[cycle][v]];
    }
    double marg_weight(std::size_t edge) const { return class_values[marg_w_class[edge]]; }
    double marg_bias(std::size_t v) const { return class_values[marg_b_class[v]]; }

    std::size_t raw_param_count() const {
        return n_cycles * (pairs_per_cycle + graph->n) + graph->edges.size() + graph->n;
    }
    std::size_t class_count() const { return class_values.size(); }

    uint64_t graph_signature() const { return graph->signature(); }
};

// All intermediate messages and the per-cycle marginals of one forward
// pass, kept for reverse-mode differentiation.
struct ForwardTrace {
    std::vector<std::vector<double>> vc;         // [cycle][edge]
    std::vector<std::vector<double>> cv;         // [cycle][edge]
    std::vector<std::vector<double>> marginals;  // [cycle][variable]
    BitVector syndrome;
    std::vector<double> priors;
};

// All parameters set to 1; with residual off the forward pass is
// bit-for-bit standard BP.
NbpModel init_identity(std::shared_ptr<const TannerGraph> graph, std::size_t n_cycles,
                       bool residual, std::optional<ToricLattice> lattice = std::nullopt);

ForwardTrace nbp_forward(const NbpModel& model, const BitVector& syndrome,
                         const std::vector<double>& priors, double eps = kDefaultClip);

// Forward pass without retaining the trace; decision read from the final
// cycle's marginals (no early stopping).
DecodeResult nbp_decode(const NbpModel& model, const BitVector& syndrome,
                        const std::vector<double>& priors, double eps = kDefaultClip);

// Ties parameters whose lattice coordinates differ by a multiple of
// (gx, gy); each class takes the value of its smallest-coordinate member.
// Requires a toric lattice map and gx | L, gy | L.
NbpModel tie_weights_toric(const NbpModel& model, std::size_t gx, std::size_t gy);

// Instantiates a fully tied model on a different lattice size by tiling
// the class values. Requires gx | L' and gy | L'.
NbpModel retarget_tied_model(const NbpModel& model, std::shared_ptr<const TannerGraph> graph,
                             const ToricLattice& lattice);

// Checkpoint file: JSON with version, graph signature, cycles, residual,
// sharing period and the raw parameter arrays in canonical order, doubles
// printed with 17 significant digits. Round-trips bit-exactly.
void save_checkpoint(const NbpModel& model, const std::string& path);
std::string checkpoint_to_json(const NbpModel& model);

NbpModel load_checkpoint(const std::string& path, std::shared_ptr<const TannerGraph> graph,
                         std::optional<ToricLattice> lattice = std::nullopt,
                         bool allow_retarget = false);
NbpModel checkpoint_from_json(const std::string& text, std::shared_ptr<const TannerGraph> graph,
                              std::optional<ToricLattice> lattice = std::nullopt,
                              bool allow_retarget = false);

}  // namespace qbp
