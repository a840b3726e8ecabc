#include "qbp/bp.hpp"

#include <cmath>
#include <stdexcept>

namespace qbp {

double prior_llr(double p) {
    if (!(p > 0.0 && p < 1.0))
        throw std::invalid_argument("prior_llr: p must lie in (0, 1)");
    return std::log((1.0 - p) / p);
}

void variable_to_check(MessageState& state, const std::vector<double>& priors,
                       const TannerGraph& graph) {
    for (std::size_t v = 0; v < graph.n; ++v) {
        const auto& edges = graph.var_edges[v];
        for (std::size_t out : edges) {
            double acc = priors[v];
            for (std::size_t in : edges) {
                if (in == out) continue;
                acc += state.cv[in];
            }
            state.vc[out] = acc;
        }
    }
}

void check_layer(const std::vector<double>& vc_in, std::vector<double>& cv_out,
                 const BitVector& syndrome, const TannerGraph& graph, double eps) {
    const double cap = 1.0 - eps;
    std::vector<double> tanh_half;
    std::vector<double> prefix, suffix;
    for (std::size_t c = 0; c < graph.m; ++c) {
        const auto& edges = graph.check_edges[c];
        const std::size_t deg = edges.size();
        tanh_half.resize(deg);
        for (std::size_t i = 0; i < deg; ++i) tanh_half[i] = std::tanh(vc_in[edges[i]] / 2.0);

        prefix.assign(deg + 1, 1.0);
        suffix.assign(deg + 1, 1.0);
        for (std::size_t i = 0; i < deg; ++i) prefix[i + 1] = prefix[i] * tanh_half[i];
        for (std::size_t i = deg; i > 0; --i) suffix[i - 1] = suffix[i] * tanh_half[i - 1];

        const double sign = syndrome.get(c) ? -1.0 : 1.0;
        for (std::size_t i = 0; i < deg; ++i) {
            double prod = prefix[i] * suffix[i + 1];
            if (prod > cap) prod = cap;
            if (prod < -cap) prod = -cap;
            cv_out[edges[i]] = sign * 2.0 * std::atanh(prod);
        }
    }
}

void check_to_variable(MessageState& state, const BitVector& syndrome,
                       const TannerGraph& graph, double eps) {
    if (syndrome.size() != graph.m)
        throw std::invalid_argument("check_to_variable: syndrome length mismatch");
    check_layer(state.vc, state.cv, syndrome, graph, eps);
}

std::vector<double> marginalize(const MessageState& state, const std::vector<double>& priors,
                                const TannerGraph& graph) {
    std::vector<double> mu(graph.n);
    for (std::size_t v = 0; v < graph.n; ++v) {
        double acc = priors[v];
        for (std::size_t e : graph.var_edges[v]) acc += state.cv[e];
        mu[v] = acc;
    }
    return mu;
}

BitVector hard_decision(const std::vector<double>& marginals) {
    BitVector e(marginals.size());
    for (std::size_t v = 0; v < marginals.size(); ++v)
        if (marginals[v] < 0.0) e.set(v, true);
    return e;
}

BitVector graph_syndrome(const TannerGraph& graph, const BitVector& error) {
    if (error.size() != graph.n)
        throw std::invalid_argument("graph_syndrome: length mismatch");
    BitVector s(graph.m);
    for (const auto& edge : graph.edges)
        if (error.get(edge.var)) s.flip(edge.check);
    return s;
}

DecodeResult bp_decode(const TannerGraph& graph, const BitVector& syndrome,
                       const std::vector<double>& priors, std::size_t iterations,
                       double eps, bool early_stop) {
    if (iterations < 1) throw std::invalid_argument("bp_decode: need at least one iteration");
    if (syndrome.size() != graph.m)
        throw std::invalid_argument("bp_decode: syndrome length mismatch");
    if (priors.size() != graph.n)
        throw std::invalid_argument("bp_decode: prior length mismatch");

    MessageState state(graph.edges.size());
    DecodeResult result;

    for (std::size_t t = 1; t <= iterations; ++t) {
        variable_to_check(state, priors, graph);
        check_to_variable(state, syndrome, graph, eps);
        result.iterations_used = t;
        if (early_stop) {
            result.marginals = marginalize(state, priors, graph);
            result.inferred = hard_decision(result.marginals);
            if (graph_syndrome(graph, result.inferred) == syndrome) {
                result.syndrome_matched = true;
                return result;
            }
        }
    }
    result.marginals = marginalize(state, priors, graph);
    result.inferred = hard_decision(result.marginals);
    result.syndrome_matched = graph_syndrome(graph, result.inferred) == syndrome;
    return result;
}

}  // namespace qbp
