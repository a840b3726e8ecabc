#include "qbp/loss.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>

namespace qbp {

double fermi_sigma(double x) {
    if (x >= 0.0) {
        const double z = std::exp(-x);
        return z / (1.0 + z);
    }
    return 1.0 / (std::exp(x) + 1.0);
}

double fermi_sigma_prime(double x) {
    const double s = fermi_sigma(x);
    return -s * (1.0 - s);
}

double smooth_parity(double x) {
    return std::fabs(std::sin(std::numbers::pi * x / 2.0));
}

double smooth_parity_prime(double x) {
    const double s = std::sin(std::numbers::pi * x / 2.0);
    if (s == 0.0) return 0.0;
    const double d = (std::numbers::pi / 2.0) * std::cos(std::numbers::pi * x / 2.0);
    return s > 0.0 ? d : -d;
}

LossSpec LossSpec::make(LossKind kind, LossTarget target, const BitMatrix& loss_matrix) {
    LossSpec spec;
    spec.kind = kind;
    spec.target = target;
    spec.loss_matrix = loss_matrix;
    spec.loss_rows = loss_matrix.row_support();
    return spec;
}

BitMatrix sector_loss_matrix(const CssCode& code, int sector) {
    if (sector == 0) return gf2_nullspace(code.a);
    if (sector == 1) return gf2_nullspace(code.b);
    throw std::invalid_argument("sector_loss_matrix: sector must be 0 (x) or 1 (z)");
}

double degeneracy_loss(const std::vector<double>& marginals, const BitVector& true_error,
                       const LossSpec& spec) {
    if (marginals.size() != true_error.size() || marginals.size() != spec.loss_matrix.cols())
        throw std::invalid_argument("degeneracy_loss: dimension mismatch");
    double total = 0.0;
    for (const auto& row : spec.loss_rows) {
        double z = 0.0;
        for (std::size_t k : row) z += (true_error.get(k) ? 1.0 : 0.0) + fermi_sigma(marginals[k]);
        total += smooth_parity(z);
    }
    return total;
}

double classical_bce_loss(const std::vector<double>& marginals, const BitVector& true_error) {
    if (marginals.size() != true_error.size())
        throw std::invalid_argument("classical_bce_loss: dimension mismatch");
    constexpr double kFloor = 1e-30;
    double total = 0.0;
    for (std::size_t v = 0; v < marginals.size(); ++v) {
        const double s = fermi_sigma(marginals[v]);
        if (true_error.get(v))
            total -= std::log(std::max(s, kFloor));
        else
            total -= std::log(std::max(1.0 - s, kFloor));
    }
    return total;
}

double single_cycle_loss(const std::vector<double>& marginals, const BitVector& true_error,
                         const LossSpec& spec) {
    return spec.target == LossTarget::Degeneracy ? degeneracy_loss(marginals, true_error, spec)
                                                 : classical_bce_loss(marginals, true_error);
}

double cycle_loss(const ForwardTrace& trace, const BitVector& true_error, const LossSpec& spec) {
    if (trace.marginals.empty()) throw std::invalid_argument("cycle_loss: empty trace");
    if (spec.kind == LossKind::FinalCycle)
        return single_cycle_loss(trace.marginals.back(), true_error, spec);
    double total = 0.0;
    for (const auto& mu : trace.marginals) total += single_cycle_loss(mu, true_error, spec);
    return total / static_cast<double>(trace.marginals.size());
}

void loss_grad_mu(const std::vector<double>& marginals, const BitVector& true_error,
                  const LossSpec& spec, std::vector<double>& grad_mu) {
    grad_mu.assign(marginals.size(), 0.0);
    if (spec.target == LossTarget::ClassicalBce) {
        // d/dmu of -[e log s + (1-e) log(1-s)] collapses to e - sigma(mu)
        for (std::size_t v = 0; v < marginals.size(); ++v)
            grad_mu[v] = (true_error.get(v) ? 1.0 : 0.0) - fermi_sigma(marginals[v]);
        return;
    }
    for (const auto& row : spec.loss_rows) {
        double z = 0.0;
        for (std::size_t k : row) z += (true_error.get(k) ? 1.0 : 0.0) + fermi_sigma(marginals[k]);
        const double fp = smooth_parity_prime(z);
        if (fp == 0.0) continue;
        for (std::size_t k : row) grad_mu[k] += fp * fermi_sigma_prime(marginals[k]);
    }
}

namespace {

// Reverse of check_layer: given d loss / d cv, accumulate d loss / d vc.
// Outputs that were clipped in the forward pass get zero gradient.
void check_layer_backward(const std::vector<double>& vc_in, const std::vector<double>& dcv,
                          const BitVector& syndrome, const TannerGraph& graph, double eps,
                          std::vector<double>& dvc) {
    const double cap = 1.0 - eps;
    std::vector<double> tanh_half, prefix, suffix, sub, pre2, suf2;
    for (std::size_t c = 0; c < graph.m; ++c) {
        const auto& edges = graph.check_edges[c];
        const std::size_t deg = edges.size();
        tanh_half.resize(deg);
        for (std::size_t i = 0; i < deg; ++i) tanh_half[i] = std::tanh(vc_in[edges[i]] / 2.0);

        // same exclusion products as the forward pass, so the clip decision
        // is taken on identical values
        prefix.assign(deg + 1, 1.0);
        suffix.assign(deg + 1, 1.0);
        for (std::size_t i = 0; i < deg; ++i) prefix[i + 1] = prefix[i] * tanh_half[i];
        for (std::size_t i = deg; i > 0; --i) suffix[i - 1] = suffix[i] * tanh_half[i - 1];

        const double sign = syndrome.get(c) ? -1.0 : 1.0;
        for (std::size_t i = 0; i < deg; ++i) {
            const double d_out = dcv[edges[i]];
            if (d_out == 0.0) continue;

            const double prod = prefix[i] * suffix[i + 1];
            if (prod >= cap || prod <= -cap) continue;  // clipped: flat region

            const double d_prod = d_out * sign * 2.0 / (1.0 - prod * prod);

            // exclusion-of-two products over the factors without i
            sub.clear();
            for (std::size_t j = 0; j < deg; ++j)
                if (j != i) sub.push_back(tanh_half[j]);
            const std::size_t m = sub.size();
            pre2.assign(m + 1, 1.0);
            suf2.assign(m + 1, 1.0);
            for (std::size_t p = 0; p < m; ++p) pre2[p + 1] = pre2[p] * sub[p];
            for (std::size_t p = m; p > 0; --p) suf2[p - 1] = suf2[p] * sub[p - 1];

            std::size_t pos = 0;
            for (std::size_t j = 0; j < deg; ++j) {
                if (j == i) continue;
                const double excl = pre2[pos] * suf2[pos + 1];
                const double dtanh = 0.5 * (1.0 - tanh_half[j] * tanh_half[j]);
                dvc[edges[j]] += d_prod * excl * dtanh;
                ++pos;
            }
        }
    }
}

}  // namespace

std::vector<double> backward(const ForwardTrace& trace, const NbpModel& model,
                             const BitVector& true_error, const LossSpec& spec, double eps) {
    const TannerGraph& g = *model.graph;
    const std::size_t n_edges = g.edges.size();
    const std::size_t n_cycles = model.n_cycles;
    if (trace.marginals.size() != n_cycles || trace.vc.size() != n_cycles ||
        trace.cv.size() != n_cycles)
        throw std::invalid_argument("backward: trace does not match the model's cycle count");

    std::vector<double> grads(model.class_count(), 0.0);
    const std::vector<double>& priors = trace.priors;

    std::vector<double> dmu;
    std::vector<double> dcv(n_edges, 0.0);       // d loss / d cv_t, accumulated
    std::vector<double> dvc(n_edges, 0.0);       // d loss / d vc_t
    std::vector<double> dcv_prev(n_edges, 0.0);  // flows into cycle t-1
    std::vector<double> dvc_res(n_edges, 0.0);   // residual skip into cycle t-1
    const std::vector<double> zeros(n_edges, 0.0);

    for (std::size_t t = n_cycles; t-- > 0;) {
        // weight of this cycle's readout in the total loss
        double cycle_weight = 0.0;
        if (spec.kind == LossKind::FinalCycle)
            cycle_weight = (t + 1 == n_cycles) ? 1.0 : 0.0;
        else
            cycle_weight = 1.0 / static_cast<double>(n_cycles);

        // marginal readout layer
        if (cycle_weight != 0.0) {
            loss_grad_mu(trace.marginals[t], true_error, spec, dmu);
            for (std::size_t v = 0; v < g.n; ++v) {
                const double d = cycle_weight * dmu[v];
                if (d == 0.0) continue;
                grads[model.marg_b_class[v]] += d * priors[v];
                for (std::size_t e : g.var_edges[v]) {
                    grads[model.marg_w_class[e]] += d * trace.cv[t][e];
                    dcv[e] += d * model.marg_weight(e);
                }
            }
        }

        // check layer: dcv -> dvc (no trainable parameters)
        std::fill(dvc.begin(), dvc.end(), 0.0);
        check_layer_backward(trace.vc[t], dcv, trace.syndrome, g, eps, dvc);
        // residual skip from cycle t+1 lands directly on vc_t
        for (std::size_t e = 0; e < n_edges; ++e) dvc[e] += dvc_res[e];

        // variable layer: dvc -> parameter grads + dcv_prev (+ residual carry)
        std::fill(dcv_prev.begin(), dcv_prev.end(), 0.0);
        std::fill(dvc_res.begin(), dvc_res.end(), 0.0);
        const std::vector<double>& cv_prev = (t == 0) ? zeros : trace.cv[t - 1];
        const bool has_residual = model.residual && t > 0;

        for (std::size_t v = 0; v < g.n; ++v) {
            const auto& edges = g.var_edges[v];
            const std::size_t deg = edges.size();
            const std::size_t base = model.pair_base[v];
            for (std::size_t out_pos = 0; out_pos < deg; ++out_pos) {
                const double d = dvc[edges[out_pos]];
                if (d == 0.0) continue;
                grads[model.bias_class[t][v]] += d * priors[v];
                for (std::size_t in_pos = 0; in_pos < deg; ++in_pos) {
                    if (in_pos == out_pos) continue;
                    const std::size_t slot =
                        base + in_pos * (deg - 1) + (out_pos > in_pos ? out_pos - 1 : out_pos);
                    grads[model.cvvc_class[t][slot]] += d * cv_prev[edges[in_pos]];
                    dcv_prev[edges[in_pos]] += d * model.cvvc_weight(t, slot);
                }
                if (has_residual) dvc_res[edges[out_pos]] += d;
            }
        }
        std::swap(dcv, dcv_prev);
    }
    return grads;
}

}  // namespace qbp
