#pragma once

#include <cstdint>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "qbp/bitmatrix.hpp"
#include "qbp/bp.hpp"
#include "qbp/codes.hpp"
#include "qbp/gf2.hpp"
#include "qbp/nbp.hpp"
#include "qbp/rng.hpp"

namespace qbp {

enum class Outcome { Flagged, Unflagged, SuccessExact, SuccessDegenerate };

// The four categories partition the trials; total failures are
// flagged + unflagged.
struct OutcomeTally {
    uint64_t trials = 0;
    uint64_t flagged = 0;
    uint64_t unflagged = 0;
    uint64_t success_exact = 0;
    uint64_t success_degenerate = 0;

    void add(Outcome o);
    void merge(const OutcomeTally& other);
    uint64_t failures() const { return flagged + unflagged; }
    double failure_rate() const {
        return trials == 0 ? 0.0 : static_cast<double>(failures()) / static_cast<double>(trials);
    }
};

// Each bit independently 1 with probability p.
BitVector sample_error(std::size_t n, double p, Rng& rng);

// FLAGGED if the residual syndrome sector_check (e + e_inf) is nonzero;
// else SUCCESS_EXACT if e_inf = e; else SUCCESS_DEGENERATE if e + e_inf
// lies in the row space of the sector's stabilizer matrix; else UNFLAGGED.
Outcome classify_outcome(const BitVector& e, const BitVector& e_inf,
                         const BitMatrix& sector_check, const BitMatrix& sector_stabilizer);

// Wilson score interval for a binomial proportion.
std::pair<double, double> wilson_interval(uint64_t successes, uint64_t trials, double z = 1.96);

enum class SectorPolicy { Both, XOnly, ZOnly };

// One sector's decoder: plain BP with a fixed iteration count, or an NBP
// model run for its full unroll depth with the decision read from the final
// marginals (no early stopping during evaluation).
struct SectorDecoder {
    std::shared_ptr<const NbpModel> model;  // null -> BP baseline
    std::size_t bp_iterations = 12;
    bool bp_early_stop = false;
    double eps = kDefaultClip;

    BitVector decode(const TannerGraph& graph, const BitVector& syndrome,
                     const std::vector<double>& priors) const;
    std::string id() const;
};

// Everything monte_carlo needs per sector, built once per code.
struct SectorContext {
    int sector = 0;  // 0 = x, 1 = z
    std::shared_ptr<const TannerGraph> graph;
    const BitMatrix* check = nullptr;       // syndrome matrix (b for x, a for z)
    const BitMatrix* stabilizer = nullptr;  // degeneracy matrix (a for x, b for z)
    RowspaceTester stab_tester;
};

SectorContext make_sector_context(const CssCode& code, int sector);

struct MonteCarloOptions {
    double p = 0.01;
    uint64_t trials = 10000;
    uint64_t seed = 0;
    unsigned threads = 1;
    SectorPolicy policy = SectorPolicy::Both;
};

// Per-trial randomness is keyed by the trial index, so sharding across any
// number of workers cannot change the merged tally. Within one trial both
// sectors are decoded; flagged dominates unflagged in the joint label and
// exact success requires both sectors exact.
OutcomeTally monte_carlo(const SectorContext& ctx_x, const SectorContext& ctx_z,
                         const SectorDecoder& dec_x, const SectorDecoder& dec_z,
                         const MonteCarloOptions& options);

struct SweepPoint {
    double p = 0.0;
    OutcomeTally tally;
    double ci_low = 0.0;
    double ci_high = 0.0;
};

struct SweepResult {
    std::vector<SweepPoint> points;  // rates strictly ascending
    std::string decoder_id;
    std::string code_id;
    uint64_t seed = 0;

    // header: p_err,trials,flagged,unflagged,success_exact,success_degenerate,
    //         total_failure_rate,ci_low,ci_high
    std::string to_csv() const;
};

SweepResult sweep(const SectorContext& ctx_x, const SectorContext& ctx_z,
                  const SectorDecoder& dec_x, const SectorDecoder& dec_z,
                  const std::vector<double>& p_list, uint64_t trials_per_point, uint64_t seed,
                  unsigned threads = 1, SectorPolicy policy = SectorPolicy::Both,
                  const std::string& code_id = "");

std::string outcome_name(Outcome o);
std::string sweep_csv_header();
std::string sweep_csv_row(const SweepPoint& point);

}  // namespace qbp
