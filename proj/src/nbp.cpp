#include "qbp/nbp.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <map>
#include <sstream>
#include <stdexcept>

#include <nlohmann/json.hpp>

namespace qbp {
namespace {

// Tie key: group tag, cycle, variable orientation + orbit representative,
// and the signed offsets of the checks involved relative to the variable.
// Offsets are reduced to [-L/2, L/2) so keys transfer between lattice sizes.
using TieKey = std::array<int64_t, 9>;

int64_t signed_mod(int64_t d, int64_t L) {
    return (d % L + L + L / 2) % L - L / 2;
}

struct KeyBuilder {
    const TannerGraph& graph;
    const ToricLattice& lat;
    int64_t gx, gy, L;

    std::array<int64_t, 3> var_part(std::size_t v) const {
        const auto& ec = lat.edges[v];
        return {ec.orientation, static_cast<int64_t>(ec.x) % gx, static_cast<int64_t>(ec.y) % gy};
    }

    std::array<int64_t, 2> check_delta(std::size_t v, std::size_t check) const {
        const auto& ec = lat.edges[v];
        const int64_t cx = static_cast<int64_t>(lat.check_x(check));
        const int64_t cy = static_cast<int64_t>(lat.check_y(check));
        return {signed_mod(cx - static_cast<int64_t>(ec.x), L),
                signed_mod(cy - static_cast<int64_t>(ec.y), L)};
    }

    TieKey cvvc(std::size_t cycle, std::size_t v, std::size_t e_in, std::size_t e_out) const {
        const auto vp = var_part(v);
        const auto di = check_delta(v, graph.edges[e_in].check);
        const auto dout = check_delta(v, graph.edges[e_out].check);
        return {0, static_cast<int64_t>(cycle), vp[0], vp[1], vp[2], di[0], di[1], dout[0], dout[1]};
    }
    TieKey bias(std::size_t cycle, std::size_t v) const {
        const auto vp = var_part(v);
        return {1, static_cast<int64_t>(cycle), vp[0], vp[1], vp[2], 0, 0, 0, 0};
    }
    TieKey marg_w(std::size_t e) const {
        const std::size_t v = graph.edges[e].var;
        const auto vp = var_part(v);
        const auto dc = check_delta(v, graph.edges[e].check);
        return {2, 0, vp[0], vp[1], vp[2], dc[0], dc[1], 0, 0};
    }
    TieKey marg_b(std::size_t v) const {
        const auto vp = var_part(v);
        return {3, 0, vp[0], vp[1], vp[2], 0, 0, 0, 0};
    }
};

struct ClassAssignment {
    std::vector<std::vector<uint32_t>> cvvc;
    std::vector<std::vector<uint32_t>> bias;
    std::vector<uint32_t> marg_w;
    std::vector<uint32_t> marg_b;
    std::size_t class_count = 0;
    std::vector<TieKey> class_keys;  // tied assignments only, in class-id order
};

void compute_pair_layout(const TannerGraph& graph, std::vector<std::size_t>& pair_base,
                         std::size_t& pairs_per_cycle) {
    pair_base.resize(graph.n);
    std::size_t acc = 0;
    for (std::size_t v = 0; v < graph.n; ++v) {
        pair_base[v] = acc;
        const std::size_t deg = graph.var_degree(v);
        acc += deg * (deg - 1);
    }
    pairs_per_cycle = acc;
}

// Scans all raw parameter slots in canonical order (cycles ascending; cvvc
// by (v, incoming, outgoing); biases by v; then final-layer weights by edge
// and biases by v) and assigns class ids: one per slot when untied, one per
// tie key otherwise. The first slot scanned in a class is its
// smallest-coordinate representative.
ClassAssignment assign_classes(const TannerGraph& graph, std::size_t n_cycles,
                               const std::vector<std::size_t>& pair_base,
                               std::size_t pairs_per_cycle, const KeyBuilder* keys) {
    ClassAssignment out;
    out.cvvc.assign(n_cycles, std::vector<uint32_t>(pairs_per_cycle, 0));
    out.bias.assign(n_cycles, std::vector<uint32_t>(graph.n, 0));
    out.marg_w.assign(graph.edges.size(), 0);
    out.marg_b.assign(graph.n, 0);

    std::map<TieKey, uint32_t> seen;
    uint32_t next = 0;
    auto classify = [&](const TieKey& key) -> uint32_t {
        auto it = seen.find(key);
        if (it != seen.end()) return it->second;
        seen.emplace(key, next);
        out.class_keys.push_back(key);
        return next++;
    };

    for (std::size_t t = 0; t < n_cycles; ++t) {
        for (std::size_t v = 0; v < graph.n; ++v) {
            const auto& edges = graph.var_edges[v];
            const std::size_t deg = edges.size();
            std::size_t slot = pair_base[v];
            for (std::size_t in_pos = 0; in_pos < deg; ++in_pos)
                for (std::size_t out_pos = 0; out_pos < deg; ++out_pos) {
                    if (in_pos == out_pos) continue;
                    out.cvvc[t][slot++] =
                        keys ? classify(keys->cvvc(t, v, edges[in_pos], edges[out_pos])) : next++;
                }
        }
        for (std::size_t v = 0; v < graph.n; ++v)
            out.bias[t][v] = keys ? classify(keys->bias(t, v)) : next++;
    }
    for (std::size_t e = 0; e < graph.edges.size(); ++e)
        out.marg_w[e] = keys ? classify(keys->marg_w(e)) : next++;
    for (std::size_t v = 0; v < graph.n; ++v)
        out.marg_b[v] = keys ? classify(keys->marg_b(v)) : next++;

    out.class_count = next;
    return out;
}

void apply_assignment(NbpModel& model, ClassAssignment&& assign) {
    model.cvvc_class = std::move(assign.cvvc);
    model.bias_class = std::move(assign.bias);
    model.marg_w_class = std::move(assign.marg_w);
    model.marg_b_class = std::move(assign.marg_b);
}

KeyBuilder make_key_builder(const TannerGraph& graph, const ToricLattice& lat, std::size_t gx,
                            std::size_t gy) {
    if (lat.L == 0 || lat.edges.size() != graph.n)
        throw std::invalid_argument("weight tying: graph carries no usable toric lattice map");
    if (gx == 0 || gy == 0 || lat.L % gx != 0 || lat.L % gy != 0)
        throw std::invalid_argument("weight tying: period must divide L");
    return KeyBuilder{graph, lat, static_cast<int64_t>(gx), static_cast<int64_t>(gy),
                      static_cast<int64_t>(lat.L)};
}

}  // namespace

NbpModel init_identity(std::shared_ptr<const TannerGraph> graph, std::size_t n_cycles,
                       bool residual, std::optional<ToricLattice> lattice) {
    if (!graph) throw std::invalid_argument("init_identity: null graph");
    if (n_cycles < 1) throw std::invalid_argument("init_identity: need n_cycles >= 1");

    NbpModel model;
    model.graph = std::move(graph);
    model.lattice = std::move(lattice);
    model.n_cycles = n_cycles;
    model.residual = residual;
    compute_pair_layout(*model.graph, model.pair_base, model.pairs_per_cycle);
    apply_assignment(model, assign_classes(*model.graph, n_cycles, model.pair_base,
                                           model.pairs_per_cycle, nullptr));
    model.class_values.assign(model.raw_param_count(), 1.0);
    return model;
}

NbpModel tie_weights_toric(const NbpModel& model, std::size_t gx, std::size_t gy) {
    if (!model.lattice)
        throw std::invalid_argument("tie_weights_toric: model has no toric lattice");
    const KeyBuilder keys = make_key_builder(*model.graph, *model.lattice, gx, gy);

    NbpModel tied;
    tied.graph = model.graph;
    tied.lattice = model.lattice;
    tied.n_cycles = model.n_cycles;
    tied.residual = model.residual;
    tied.sharing = {{gx, gy}};
    tied.pair_base = model.pair_base;
    tied.pairs_per_cycle = model.pairs_per_cycle;

    ClassAssignment assign = assign_classes(*model.graph, model.n_cycles, tied.pair_base,
                                            tied.pairs_per_cycle, &keys);
    tied.class_values.assign(assign.class_count, 1.0);

    // class value = value of the first (smallest-coordinate) member
    std::vector<bool> initialized(assign.class_count, false);
    auto seed_value = [&](uint32_t cls, double value) {
        if (!initialized[cls]) {
            tied.class_values[cls] = value;
            initialized[cls] = true;
        }
    };
    for (std::size_t t = 0; t < model.n_cycles; ++t) {
        for (std::size_t s = 0; s < model.pairs_per_cycle; ++s)
            seed_value(assign.cvvc[t][s], model.cvvc_weight(t, s));
        for (std::size_t v = 0; v < model.graph->n; ++v)
            seed_value(assign.bias[t][v], model.prior_bias(t, v));
    }
    for (std::size_t e = 0; e < model.graph->edges.size(); ++e)
        seed_value(assign.marg_w[e], model.marg_weight(e));
    for (std::size_t v = 0; v < model.graph->n; ++v)
        seed_value(assign.marg_b[v], model.marg_bias(v));

    apply_assignment(tied, std::move(assign));
    return tied;
}

NbpModel retarget_tied_model(const NbpModel& model, std::shared_ptr<const TannerGraph> graph,
                             const ToricLattice& lattice) {
    if (!model.sharing)
        throw std::invalid_argument("retarget_tied_model: model is not tied");
    const auto [gx, gy] = *model.sharing;
    if (lattice.L % gx != 0 || lattice.L % gy != 0)
        throw std::invalid_argument("retarget_tied_model: incompatible periods");

    // Recover key -> value from the source model by replaying its class scan.
    const KeyBuilder src_keys = make_key_builder(*model.graph, *model.lattice, gx, gy);
    std::vector<std::size_t> src_base = model.pair_base;
    ClassAssignment src_assign = assign_classes(*model.graph, model.n_cycles, src_base,
                                                model.pairs_per_cycle, &src_keys);
    std::map<TieKey, double> key_value;
    for (std::size_t cls = 0; cls < src_assign.class_count; ++cls)
        key_value[src_assign.class_keys[cls]] = model.class_values[cls];

    NbpModel out;
    out.graph = std::move(graph);
    out.lattice = lattice;
    out.n_cycles = model.n_cycles;
    out.residual = model.residual;
    out.sharing = model.sharing;
    compute_pair_layout(*out.graph, out.pair_base, out.pairs_per_cycle);

    const KeyBuilder dst_keys = make_key_builder(*out.graph, *out.lattice, gx, gy);
    ClassAssignment dst_assign = assign_classes(*out.graph, out.n_cycles, out.pair_base,
                                                out.pairs_per_cycle, &dst_keys);
    out.class_values.resize(dst_assign.class_count);
    for (std::size_t cls = 0; cls < dst_assign.class_count; ++cls) {
        auto it = key_value.find(dst_assign.class_keys[cls]);
        if (it == key_value.end())
            throw std::invalid_argument(
                "retarget_tied_model: parameter class has no counterpart in the source model");
        out.class_values[cls] = it->second;
    }
    apply_assignment(out, std::move(dst_assign));
    return out;
}

namespace {

// One unrolled cycle's variable-to-check phase. Accumulation order matches
// bp-core's variable_to_check so the identity model reproduces BP
// bit-for-bit. The residual skip is added last.
void nbp_vc_phase(const NbpModel& model, std::size_t cycle, const std::vector<double>& priors,
                  const std::vector<double>& cv_prev, const std::vector<double>* vc_prev,
                  std::vector<double>& vc_out) {
    const TannerGraph& g = *model.graph;
    for (std::size_t v = 0; v < g.n; ++v) {
        const auto& edges = g.var_edges[v];
        const std::size_t deg = edges.size();
        const double bias = model.prior_bias(cycle, v);
        const std::size_t base = model.pair_base[v];
        for (std::size_t out_pos = 0; out_pos < deg; ++out_pos) {
            double acc = priors[v] * bias;
            for (std::size_t in_pos = 0; in_pos < deg; ++in_pos) {
                if (in_pos == out_pos) continue;
                const std::size_t slot =
                    base + in_pos * (deg - 1) + (out_pos > in_pos ? out_pos - 1 : out_pos);
                acc += model.cvvc_weight(cycle, slot) * cv_prev[edges[in_pos]];
            }
            if (vc_prev) acc += (*vc_prev)[edges[out_pos]];
            vc_out[edges[out_pos]] = acc;
        }
    }
}

void nbp_marginal_phase(const NbpModel& model, const std::vector<double>& priors,
                        const std::vector<double>& cv, std::vector<double>& mu_out) {
    const TannerGraph& g = *model.graph;
    for (std::size_t v = 0; v < g.n; ++v) {
        double acc = priors[v] * model.marg_bias(v);
        for (std::size_t e : g.var_edges[v]) acc += cv[e] * model.marg_weight(e);
        mu_out[v] = acc;
    }
}

void check_forward_inputs(const NbpModel& model, const BitVector& syndrome,
                          const std::vector<double>& priors) {
    if (syndrome.size() != model.graph->m || priors.size() != model.graph->n)
        throw std::invalid_argument("nbp forward: syndrome/prior shape does not match the graph");
}

}  // namespace

ForwardTrace nbp_forward(const NbpModel& model, const BitVector& syndrome,
                         const std::vector<double>& priors, double eps) {
    check_forward_inputs(model, syndrome, priors);
    const TannerGraph& g = *model.graph;
    const std::size_t n_edges = g.edges.size();

    ForwardTrace trace;
    trace.syndrome = syndrome;
    trace.priors = priors;
    trace.vc.reserve(model.n_cycles);
    trace.cv.reserve(model.n_cycles);
    trace.marginals.reserve(model.n_cycles);

    const std::vector<double> cv_zero(n_edges, 0.0);
    for (std::size_t t = 0; t < model.n_cycles; ++t) {
        const std::vector<double>& cv_prev = (t == 0) ? cv_zero : trace.cv[t - 1];
        const std::vector<double>* vc_prev =
            (model.residual && t > 0) ? &trace.vc[t - 1] : nullptr;

        std::vector<double> vc(n_edges);
        nbp_vc_phase(model, t, priors, cv_prev, vc_prev, vc);

        std::vector<double> cv(n_edges);
        check_layer(vc, cv, syndrome, g, eps);

        std::vector<double> mu(g.n);
        nbp_marginal_phase(model, priors, cv, mu);

        trace.vc.push_back(std::move(vc));
        trace.cv.push_back(std::move(cv));
        trace.marginals.push_back(std::move(mu));
    }
    return trace;
}

DecodeResult nbp_decode(const NbpModel& model, const BitVector& syndrome,
                        const std::vector<double>& priors, double eps) {
    check_forward_inputs(model, syndrome, priors);
    const TannerGraph& g = *model.graph;
    const std::size_t n_edges = g.edges.size();

    std::vector<double> cv_prev(n_edges, 0.0);
    std::vector<double> vc_prev(n_edges, 0.0);
    std::vector<double> vc(n_edges), cv(n_edges);

    for (std::size_t t = 0; t < model.n_cycles; ++t) {
        nbp_vc_phase(model, t, priors, cv_prev, (model.residual && t > 0) ? &vc_prev : nullptr,
                     vc);
        check_layer(vc, cv, syndrome, g, eps);
        std::swap(cv_prev, cv);
        std::swap(vc_prev, vc);
    }

    DecodeResult result;
    result.marginals.resize(g.n);
    nbp_marginal_phase(model, priors, cv_prev, result.marginals);
    result.inferred = hard_decision(result.marginals);
    result.iterations_used = model.n_cycles;
    result.syndrome_matched = graph_syndrome(g, result.inferred) == syndrome;
    return result;
}

// ---- checkpoint serialization ----

namespace {

void append_double(std::string& out, double v) {
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    out += buf;
}

void append_double_array(std::string& out, const std::vector<double>& values) {
    out += '[';
    for (std::size_t i = 0; i < values.size(); ++i) {
        if (i) out += ',';
        append_double(out, values[i]);
    }
    out += ']';
}

}  // namespace

std::string checkpoint_to_json(const NbpModel& model) {
    const TannerGraph& g = *model.graph;

    std::vector<std::vector<double>> cvvc(model.n_cycles);
    std::vector<std::vector<double>> bias(model.n_cycles);
    for (std::size_t t = 0; t < model.n_cycles; ++t) {
        cvvc[t].resize(model.pairs_per_cycle);
        for (std::size_t s = 0; s < model.pairs_per_cycle; ++s) cvvc[t][s] = model.cvvc_weight(t, s);
        bias[t].resize(g.n);
        for (std::size_t v = 0; v < g.n; ++v) bias[t][v] = model.prior_bias(t, v);
    }
    std::vector<double> marg_w(g.edges.size());
    for (std::size_t e = 0; e < g.edges.size(); ++e) marg_w[e] = model.marg_weight(e);
    std::vector<double> marg_b(g.n);
    for (std::size_t v = 0; v < g.n; ++v) marg_b[v] = model.marg_bias(v);

    std::string out;
    out += "{\"version\":1,";
    out += "\"graph_signature\":\"" + g.signature_hex() + "\",";
    out += "\"n_cycles\":" + std::to_string(model.n_cycles) + ",";
    out += std::string("\"residual\":") + (model.residual ? "true" : "false") + ",";
    if (model.sharing) {
        out += "\"sharing\":{\"period\":[" + std::to_string((*model.sharing)[0]) + "," +
               std::to_string((*model.sharing)[1]) + "]},";
    } else {
        out += "\"sharing\":null,";
    }
    out += "\"params\":{\"cvvc\":[";
    for (std::size_t t = 0; t < model.n_cycles; ++t) {
        if (t) out += ',';
        append_double_array(out, cvvc[t]);
    }
    out += "],\"prior_bias\":[";
    for (std::size_t t = 0; t < model.n_cycles; ++t) {
        if (t) out += ',';
        append_double_array(out, bias[t]);
    }
    out += "],\"marg_w\":";
    append_double_array(out, marg_w);
    out += ",\"marg_b\":";
    append_double_array(out, marg_b);
    out += "}}\n";
    return out;
}

void save_checkpoint(const NbpModel& model, const std::string& path) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw std::runtime_error("save_checkpoint: cannot open " + path);
    out << checkpoint_to_json(model);
}

namespace {

NbpModel model_from_params(std::shared_ptr<const TannerGraph> graph,
                           std::optional<ToricLattice> lattice, std::size_t n_cycles,
                           bool residual, std::optional<std::array<std::size_t, 2>> sharing,
                           const std::vector<std::vector<double>>& cvvc,
                           const std::vector<std::vector<double>>& bias,
                           const std::vector<double>& marg_w, const std::vector<double>& marg_b) {
    NbpModel model = init_identity(std::move(graph), n_cycles, residual, std::move(lattice));
    const TannerGraph& g = *model.graph;
    if (cvvc.size() != n_cycles || bias.size() != n_cycles ||
        marg_w.size() != g.edges.size() || marg_b.size() != g.n)
        throw std::runtime_error("checkpoint: parameter arrays do not fit the graph");
    for (std::size_t t = 0; t < n_cycles; ++t)
        if (cvvc[t].size() != model.pairs_per_cycle || bias[t].size() != g.n)
            throw std::runtime_error("checkpoint: parameter arrays do not fit the graph");

    // place raw values on the untied slots; tying (if any) then folds each
    // class onto its representative value
    for (std::size_t t = 0; t < n_cycles; ++t) {
        for (std::size_t s = 0; s < model.pairs_per_cycle; ++s)
            model.class_values[model.cvvc_class[t][s]] = cvvc[t][s];
        for (std::size_t v = 0; v < g.n; ++v)
            model.class_values[model.bias_class[t][v]] = bias[t][v];
    }
    for (std::size_t e = 0; e < g.edges.size(); ++e)
        model.class_values[model.marg_w_class[e]] = marg_w[e];
    for (std::size_t v = 0; v < g.n; ++v)
        model.class_values[model.marg_b_class[v]] = marg_b[v];

    if (sharing) return tie_weights_toric(model, (*sharing)[0], (*sharing)[1]);
    return model;
}

}  // namespace

NbpModel checkpoint_from_json(const std::string& text, std::shared_ptr<const TannerGraph> graph,
                              std::optional<ToricLattice> lattice, bool allow_retarget) {
    nlohmann::json j;
    try {
        j = nlohmann::json::parse(text);
    } catch (const nlohmann::json::exception& e) {
        throw std::runtime_error(std::string("checkpoint: malformed file: ") + e.what());
    }
    if (!j.contains("version") || !j.at("version").is_number_integer())
        throw std::runtime_error("checkpoint: malformed file: missing version");
    if (j.at("version").get<int>() != 1)
        throw std::runtime_error("checkpoint: version mismatch (expected 1)");

    const auto signature = j.at("graph_signature").get<std::string>();
    const auto n_cycles = j.at("n_cycles").get<std::size_t>();
    const bool residual = j.at("residual").get<bool>();
    std::optional<std::array<std::size_t, 2>> sharing;
    if (j.contains("sharing") && !j.at("sharing").is_null()) {
        const auto period = j.at("sharing").at("period").get<std::vector<std::size_t>>();
        if (period.size() != 2) throw std::runtime_error("checkpoint: malformed sharing period");
        sharing = {{period[0], period[1]}};
    }
    const auto& params = j.at("params");
    const auto cvvc = params.at("cvvc").get<std::vector<std::vector<double>>>();
    const auto bias = params.at("prior_bias").get<std::vector<std::vector<double>>>();
    const auto marg_w = params.at("marg_w").get<std::vector<double>>();
    const auto marg_b = params.at("marg_b").get<std::vector<double>>();

    if (!graph) throw std::invalid_argument("checkpoint: null target graph");
    if (graph->signature_hex() == signature) {
        return model_from_params(std::move(graph), std::move(lattice), n_cycles, residual,
                                 sharing, cvvc, bias, marg_w, marg_b);
    }

    if (!allow_retarget || !sharing)
        throw std::runtime_error("checkpoint: graph signature mismatch (expected " +
                                 graph->signature_hex() + ", file has " + signature + ")");
    if (!lattice)
        throw std::runtime_error("checkpoint: retargeting requires a toric target lattice");

    // Retarget path: the source is a tied toric sector model, so its lattice
    // size follows from the final-layer width (4 L^2 edges per sector) and
    // the sector from the signature of the rebuilt graphs.
    const std::size_t L2x4 = marg_w.size();
    const std::size_t L_src = static_cast<std::size_t>(std::lround(std::sqrt(L2x4 / 4.0)));
    if (4 * L_src * L_src != L2x4)
        throw std::runtime_error("checkpoint: cannot infer source lattice for retargeting");
    const CssCode src_code = toric_code(L_src);
    auto graph_x = std::make_shared<TannerGraph>(build_tanner(src_code.b));
    auto graph_z = std::make_shared<TannerGraph>(build_tanner(src_code.a));
    std::shared_ptr<const TannerGraph> src_graph;
    if (graph_x->signature_hex() == signature)
        src_graph = graph_x;
    else if (graph_z->signature_hex() == signature)
        src_graph = graph_z;
    else
        throw std::runtime_error("checkpoint: signature matches no toric sector graph; "
                                 "cannot retarget");

    NbpModel src_model = model_from_params(src_graph, src_code.lattice, n_cycles, residual,
                                           sharing, cvvc, bias, marg_w, marg_b);
    return retarget_tied_model(src_model, std::move(graph), *lattice);
}

NbpModel load_checkpoint(const std::string& path, std::shared_ptr<const TannerGraph> graph,
                         std::optional<ToricLattice> lattice, bool allow_retarget) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw std::runtime_error("load_checkpoint: cannot open " + path);
    std::ostringstream ss;
    ss << in.rdbuf();
    return checkpoint_from_json(ss.str(), std::move(graph), std::move(lattice), allow_retarget);
}

}  // namespace qbp
