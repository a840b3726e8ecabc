#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "qbp/codes.hpp"
#include "qbp/eval.hpp"
#include "qbp/loss.hpp"
#include "qbp/nbp.hpp"
#include "qbp/rng.hpp"

namespace qbp {

// theta <- theta - lr * g, one update per parameter class.
void sgd_step(NbpModel& model, const std::vector<double>& grads, double lr);

// First/second-moment accumulators, one slot per parameter class so tied
// members stay equal by construction.
struct OptimState {
    std::vector<double> m;
    std::vector<double> v;
    uint64_t step = 0;

    explicit OptimState(std::size_t class_count) : m(class_count, 0.0), v(class_count, 0.0) {}
    OptimState() = default;
};

void adam_step(NbpModel& model, const std::vector<double>& grads, OptimState& state, double lr,
               double beta1 = 0.9, double beta2 = 0.999, double eps_a = 1e-8);

struct TrainSample {
    BitVector error;
    BitVector syndrome;
    double p = 0.0;
};

// For each rate: per_rate i.i.d. Bernoulli(p) error vectors over the
// sector's variables, syndromes from the sector check matrix.
std::vector<TrainSample> sample_minibatch(const SectorContext& ctx,
                                          const std::vector<double>& rates,
                                          std::size_t per_rate, Rng& rng);

enum class OptimizerKind { Sgd, Adam };

struct TrainConfig {
    SectorPolicy sectors = SectorPolicy::Both;
    std::size_t n_cycles = 12;
    bool residual = true;
    std::optional<std::array<std::size_t, 2>> sharing;  // toric tying period
    LossKind loss_kind = LossKind::CycleAveraged;
    LossTarget loss_target = LossTarget::Degeneracy;
    OptimizerKind optimizer = OptimizerKind::Sgd;
    double lr = 2e-4;
    std::size_t batch_patterns = 120;
    std::vector<double> rates = {0.01, 0.018, 0.026, 0.034, 0.042, 0.05};
    std::size_t minibatches = 0;
    uint64_t seed = 0;
    double clip_eps = kDefaultClip;
    std::size_t checkpoint_every = 0;   // 0 -> only the final checkpoint
    std::size_t eval_every = 0;         // 0 -> no held-out evaluation
    double eval_p = 0.01;
    uint64_t eval_trials = 2000;
    unsigned eval_threads = 1;
    std::string out_dir;                // empty -> no checkpoint files written

    void validate() const;
};

struct HistoryRow {
    std::size_t minibatch = 0;
    double mean_loss = 0.0;
    bool has_eval = false;
    double eval_p = 0.0;
    double eval_flagged = 0.0;
    double eval_unflagged = 0.0;
    double eval_total = 0.0;
};

struct TrainResult {
    // one model per trained sector; untrained sectors stay empty
    std::optional<NbpModel> model_x;
    std::optional<NbpModel> model_z;
    std::vector<HistoryRow> history;

    // header: minibatch,mean_loss,eval_p,eval_flagged,eval_unflagged,eval_total
    std::string history_csv() const;
};

// Identity-initialized (optionally tied) models trained by
// sample -> forward -> loss -> backward -> step, fully deterministic given
// (config, seed). Sector policy Both trains an independent network per
// sector in lockstep; the held-out evaluation always decodes both sectors,
// using plain BP for any untrained one. Checkpoints are written under
// out_dir at the configured cadence. A NaN minibatch loss aborts.
TrainResult train(const CssCode& code, const TrainConfig& config);

}  // namespace qbp
