#include "qbp/eval.hpp"

#include <cmath>
#include <cstdio>
#include <sstream>
#include <stdexcept>
#include <thread>

namespace qbp {

void OutcomeTally::add(Outcome o) {
    ++trials;
    switch (o) {
        case Outcome::Flagged: ++flagged; break;
        case Outcome::Unflagged: ++unflagged; break;
        case Outcome::SuccessExact: ++success_exact; break;
        case Outcome::SuccessDegenerate: ++success_degenerate; break;
    }
}

void OutcomeTally::merge(const OutcomeTally& other) {
    trials += other.trials;
    flagged += other.flagged;
    unflagged += other.unflagged;
    success_exact += other.success_exact;
    success_degenerate += other.success_degenerate;
}

BitVector sample_error(std::size_t n, double p, Rng& rng) {
    if (!(p >= 0.0 && p < 1.0))
        throw std::invalid_argument("sample_error: p must lie in [0, 1)");
    BitVector e(n);
    for (std::size_t i = 0; i < n; ++i)
        if (rng.next_bernoulli(p)) e.set(i, true);
    return e;
}

Outcome classify_outcome(const BitVector& e, const BitVector& e_inf,
                         const BitMatrix& sector_check, const BitMatrix& sector_stabilizer) {
    if (e.size() != e_inf.size() || e.size() != sector_check.cols() ||
        e.size() != sector_stabilizer.cols())
        throw std::invalid_argument("classify_outcome: dimension mismatch");
    BitVector e_tot = e;
    e_tot.xor_with(e_inf);
    if (!sector_check.mul_vector(e_tot).is_zero()) return Outcome::Flagged;
    if (e_tot.is_zero()) return Outcome::SuccessExact;
    if (in_rowspace(sector_stabilizer, e_tot)) return Outcome::SuccessDegenerate;
    return Outcome::Unflagged;
}

std::pair<double, double> wilson_interval(uint64_t successes, uint64_t trials, double z) {
    if (trials == 0 || successes > trials)
        throw std::invalid_argument("wilson_interval: need 0 <= k <= n, n >= 1");
    const double n = static_cast<double>(trials);
    const double phat = static_cast<double>(successes) / n;
    const double z2 = z * z;
    const double denom = 1.0 + z2 / n;
    const double center = (phat + z2 / (2.0 * n)) / denom;
    const double half = z * std::sqrt(phat * (1.0 - phat) / n + z2 / (4.0 * n * n)) / denom;
    return {std::max(0.0, center - half), std::min(1.0, center + half)};
}

BitVector SectorDecoder::decode(const TannerGraph& graph, const BitVector& syndrome,
                                const std::vector<double>& priors) const {
    if (model) return nbp_decode(*model, syndrome, priors, eps).inferred;
    return bp_decode(graph, syndrome, priors, bp_iterations, eps, bp_early_stop).inferred;
}

std::string SectorDecoder::id() const {
    if (model) {
        std::ostringstream os;
        os << "nbp_Nc" << model->n_cycles << (model->residual ? "_res" : "") << "_"
           << model->graph->signature_hex();
        return os.str();
    }
    return "bp_T" + std::to_string(bp_iterations) + (bp_early_stop ? "_early" : "");
}

SectorContext make_sector_context(const CssCode& code, int sector) {
    if (sector != 0 && sector != 1)
        throw std::invalid_argument("make_sector_context: sector must be 0 (x) or 1 (z)");
    SectorContext ctx;
    ctx.sector = sector;
    ctx.check = (sector == 0) ? &code.b : &code.a;
    ctx.stabilizer = (sector == 0) ? &code.a : &code.b;
    ctx.graph = std::make_shared<TannerGraph>(build_tanner(*ctx.check));
    ctx.stab_tester = RowspaceTester(*ctx.stabilizer);
    return ctx;
}

namespace {

Outcome classify_fast(const SectorContext& ctx, const BitVector& e, const BitVector& e_inf) {
    BitVector e_tot = e;
    e_tot.xor_with(e_inf);
    if (!ctx.check->mul_vector(e_tot).is_zero()) return Outcome::Flagged;
    if (e_tot.is_zero()) return Outcome::SuccessExact;
    if (ctx.stab_tester.contains(e_tot)) return Outcome::SuccessDegenerate;
    return Outcome::Unflagged;
}

constexpr uint64_t kMonteCarloStream = 0x3c0de;

OutcomeTally run_trials(const SectorContext& ctx_x, const SectorContext& ctx_z,
                        const SectorDecoder& dec_x, const SectorDecoder& dec_z,
                        const MonteCarloOptions& options, uint64_t begin, uint64_t end) {
    const std::size_t n = ctx_x.graph->n;
    const std::vector<double> priors_x(ctx_x.graph->n, prior_llr(options.p));
    const std::vector<double> priors_z(ctx_z.graph->n, prior_llr(options.p));

    OutcomeTally tally;
    for (uint64_t trial = begin; trial < end; ++trial) {
        Rng rng(derive_seed(options.seed, kMonteCarloStream, trial));

        std::optional<Outcome> out_x, out_z;
        if (options.policy != SectorPolicy::ZOnly) {
            const BitVector e = sample_error(n, options.p, rng);
            const BitVector syndrome = ctx_x.check->mul_vector(e);
            const BitVector inferred = dec_x.decode(*ctx_x.graph, syndrome, priors_x);
            out_x = classify_fast(ctx_x, e, inferred);
        }
        if (options.policy != SectorPolicy::XOnly) {
            const BitVector e = sample_error(ctx_z.graph->n, options.p, rng);
            const BitVector syndrome = ctx_z.check->mul_vector(e);
            const BitVector inferred = dec_z.decode(*ctx_z.graph, syndrome, priors_z);
            out_z = classify_fast(ctx_z, e, inferred);
        }

        if (out_x && out_z) {
            // joint label: flagged dominates, exact needs both sectors exact
            Outcome joint;
            if (*out_x == Outcome::Flagged || *out_z == Outcome::Flagged)
                joint = Outcome::Flagged;
            else if (*out_x == Outcome::Unflagged || *out_z == Outcome::Unflagged)
                joint = Outcome::Unflagged;
            else if (*out_x == Outcome::SuccessExact && *out_z == Outcome::SuccessExact)
                joint = Outcome::SuccessExact;
            else
                joint = Outcome::SuccessDegenerate;
            tally.add(joint);
        } else {
            tally.add(out_x ? *out_x : *out_z);
        }
    }
    return tally;
}

}  // namespace

OutcomeTally monte_carlo(const SectorContext& ctx_x, const SectorContext& ctx_z,
                         const SectorDecoder& dec_x, const SectorDecoder& dec_z,
                         const MonteCarloOptions& options) {
    if (options.trials < 1) throw std::invalid_argument("monte_carlo: need trials >= 1");

    const unsigned threads = std::max(1u, options.threads);
    if (threads == 1 || options.trials < 2 * threads) {
        return run_trials(ctx_x, ctx_z, dec_x, dec_z, options, 0, options.trials);
    }

    std::vector<OutcomeTally> parts(threads);
    std::vector<std::thread> pool;
    const uint64_t chunk = (options.trials + threads - 1) / threads;
    for (unsigned w = 0; w < threads; ++w) {
        const uint64_t begin = w * chunk;
        const uint64_t end = std::min<uint64_t>(options.trials, begin + chunk);
        if (begin >= end) break;
        pool.emplace_back([&, w, begin, end] {
            parts[w] = run_trials(ctx_x, ctx_z, dec_x, dec_z, options, begin, end);
        });
    }
    for (auto& t : pool) t.join();

    OutcomeTally total;
    for (const auto& part : parts) total.merge(part);
    return total;
}

std::string sweep_csv_header() {
    return "p_err,trials,flagged,unflagged,success_exact,success_degenerate,"
           "total_failure_rate,ci_low,ci_high";
}

std::string sweep_csv_row(const SweepPoint& point) {
    char buf[256];
    std::snprintf(buf, sizeof(buf), "%.6g,%llu,%llu,%llu,%llu,%llu,%.9g,%.9g,%.9g",
                  point.p, static_cast<unsigned long long>(point.tally.trials),
                  static_cast<unsigned long long>(point.tally.flagged),
                  static_cast<unsigned long long>(point.tally.unflagged),
                  static_cast<unsigned long long>(point.tally.success_exact),
                  static_cast<unsigned long long>(point.tally.success_degenerate),
                  point.tally.failure_rate(), point.ci_low, point.ci_high);
    return buf;
}

std::string SweepResult::to_csv() const {
    std::string out = sweep_csv_header() + "\n";
    for (const auto& point : points) out += sweep_csv_row(point) + "\n";
    return out;
}

SweepResult sweep(const SectorContext& ctx_x, const SectorContext& ctx_z,
                  const SectorDecoder& dec_x, const SectorDecoder& dec_z,
                  const std::vector<double>& p_list, uint64_t trials_per_point, uint64_t seed,
                  unsigned threads, SectorPolicy policy, const std::string& code_id) {
    if (p_list.empty()) throw std::invalid_argument("sweep: empty rate list");
    for (std::size_t i = 1; i < p_list.size(); ++i)
        if (!(p_list[i] > p_list[i - 1]))
            throw std::invalid_argument("sweep: rates must be strictly increasing");

    SweepResult result;
    result.decoder_id = dec_x.id();
    result.code_id = code_id;
    result.seed = seed;
    for (std::size_t i = 0; i < p_list.size(); ++i) {
        MonteCarloOptions options;
        options.p = p_list[i];
        options.trials = trials_per_point;
        options.seed = derive_seed(seed, 0x5eeb, i);
        options.threads = threads;
        options.policy = policy;
        SweepPoint point;
        point.p = p_list[i];
        point.tally = monte_carlo(ctx_x, ctx_z, dec_x, dec_z, options);
        const auto [low, high] = wilson_interval(point.tally.failures(), point.tally.trials);
        point.ci_low = low;
        point.ci_high = high;
        result.points.push_back(point);
    }
    return result;
}

std::string outcome_name(Outcome o) {
    switch (o) {
        case Outcome::Flagged: return "FLAGGED";
        case Outcome::Unflagged: return "UNFLAGGED";
        case Outcome::SuccessExact: return "SUCCESS_EXACT";
        case Outcome::SuccessDegenerate: return "SUCCESS_DEGENERATE";
    }
    return "?";
}

}  // namespace qbp
