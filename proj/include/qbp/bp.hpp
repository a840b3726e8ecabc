#pragma once

#include <vector>

#include "qbp/bitmatrix.hpp"
#include "qbp/tanner.hpp"

namespace qbp {

inline constexpr double kDefaultClip = 1e-4;

// One value per edge in each direction, log-likelihood-ratio units.
struct MessageState {
    std::vector<double> vc;  // variable -> check
    std::vector<double> cv;  // check -> variable

    explicit MessageState(std::size_t edge_count) : vc(edge_count, 0.0), cv(edge_count, 0.0) {}
    MessageState() = default;
};

struct DecodeResult {
    BitVector inferred;
    std::vector<double> marginals;
    std::size_t iterations_used = 0;
    bool syndrome_matched = false;
};

// l = ln((1-p)/p); requires 0 < p < 1
double prior_llr(double p);

// mu_{v->c} = l_v + sum_{c' in N(v)\c} mu_{c'->v}, from the pre-update cv
// values (flooding schedule).
void variable_to_check(MessageState& state, const std::vector<double>& priors,
                       const TannerGraph& graph);

// mu_{c->v} = (-1)^{s_c} 2 atanh( prod_{v' in N(c)\v} tanh(mu_{v'->c}/2) ),
// with the atanh argument clipped to (-1+eps, 1-eps). Sign/magnitude form,
// exclusion products via prefix/suffix so nothing divides by a zero tanh.
void check_to_variable(MessageState& state, const BitVector& syndrome,
                       const TannerGraph& graph, double eps);

// Same update reading vc from `vc_in` and writing into `cv_out`; the shared
// kernel for both plain BP and the neural forward pass.
void check_layer(const std::vector<double>& vc_in, std::vector<double>& cv_out,
                 const BitVector& syndrome, const TannerGraph& graph, double eps);

// mu_v = l_v + sum_{c in N(v)} mu_{c->v}
std::vector<double> marginalize(const MessageState& state, const std::vector<double>& priors,
                                const TannerGraph& graph);

// e_v = 1 iff mu_v < 0; an exact tie decodes to 0
BitVector hard_decision(const std::vector<double>& marginals);

// T flooding iterations (variable_to_check then check_to_variable), then
// marginalize and hard-decide. With early_stop, halts as soon as a
// provisional decision reproduces the syndrome. Non-convergence is
// reported via syndrome_matched, never thrown.
DecodeResult bp_decode(const TannerGraph& graph, const BitVector& syndrome,
                       const std::vector<double>& priors, std::size_t iterations,
                       double eps = kDefaultClip, bool early_stop = false);

// syndrome of `error` on the graph's check matrix
BitVector graph_syndrome(const TannerGraph& graph, const BitVector& error);

}  // namespace qbp
