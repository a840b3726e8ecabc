#include "qbp/train.hpp"

#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <stdexcept>

namespace qbp {

void sgd_step(NbpModel& model, const std::vector<double>& grads, double lr) {
    if (grads.size() != model.class_values.size())
        throw std::invalid_argument("sgd_step: gradient shape mismatch");
    for (std::size_t i = 0; i < grads.size(); ++i) model.class_values[i] -= lr * grads[i];
}

void adam_step(NbpModel& model, const std::vector<double>& grads, OptimState& state, double lr,
               double beta1, double beta2, double eps_a) {
    if (grads.size() != model.class_values.size() || state.m.size() != grads.size())
        throw std::invalid_argument("adam_step: shape mismatch");
    state.step += 1;
    const double bc1 = 1.0 - std::pow(beta1, static_cast<double>(state.step));
    const double bc2 = 1.0 - std::pow(beta2, static_cast<double>(state.step));
    for (std::size_t i = 0; i < grads.size(); ++i) {
        const double g = grads[i];
        state.m[i] = beta1 * state.m[i] + (1.0 - beta1) * g;
        state.v[i] = beta2 * state.v[i] + (1.0 - beta2) * g * g;
        const double mhat = state.m[i] / bc1;
        const double vhat = state.v[i] / bc2;
        model.class_values[i] -= lr * mhat / (std::sqrt(vhat) + eps_a);
    }
}

std::vector<TrainSample> sample_minibatch(const SectorContext& ctx,
                                          const std::vector<double>& rates,
                                          std::size_t per_rate, Rng& rng) {
    std::vector<TrainSample> batch;
    batch.reserve(rates.size() * per_rate);
    for (double p : rates) {
        for (std::size_t i = 0; i < per_rate; ++i) {
            TrainSample s;
            s.error = sample_error(ctx.graph->n, p, rng);
            s.syndrome = ctx.check->mul_vector(s.error);
            s.p = p;
            batch.push_back(std::move(s));
        }
    }
    return batch;
}

void TrainConfig::validate() const {
    if (!(lr > 0.0)) throw std::invalid_argument("train config: lr must be positive");
    if (rates.empty()) throw std::invalid_argument("train config: need at least one rate");
    if (batch_patterns == 0 || batch_patterns % rates.size() != 0)
        throw std::invalid_argument("train config: batch size must divide evenly over the rates");
    for (double p : rates)
        if (!(p > 0.0 && p < 1.0))
            throw std::invalid_argument("train config: rates must lie in (0, 1)");
    if (n_cycles < 1) throw std::invalid_argument("train config: need n_cycles >= 1");
}

std::string TrainResult::history_csv() const {
    std::string out = "minibatch,mean_loss,eval_p,eval_flagged,eval_unflagged,eval_total\n";
    char buf[192];
    for (const auto& row : history) {
        if (row.has_eval) {
            std::snprintf(buf, sizeof(buf), "%zu,%.9g,%.6g,%.9g,%.9g,%.9g\n", row.minibatch,
                          row.mean_loss, row.eval_p, row.eval_flagged, row.eval_unflagged,
                          row.eval_total);
        } else {
            std::snprintf(buf, sizeof(buf), "%zu,%.9g,,,,\n", row.minibatch, row.mean_loss);
        }
        out += buf;
    }
    return out;
}

namespace {

constexpr uint64_t kSampleStream = 0x5a3b1e;
constexpr uint64_t kEvalStream = 0xe7a1;

struct SectorTrainer {
    SectorContext ctx;
    LossSpec spec;
    NbpModel model;
    OptimState optim;
};

SectorTrainer make_sector_trainer(const CssCode& code, int sector, const TrainConfig& cfg) {
    SectorTrainer t;
    t.ctx = make_sector_context(code, sector);
    t.spec = LossSpec::make(cfg.loss_kind, cfg.loss_target, sector_loss_matrix(code, sector));
    t.model = init_identity(t.ctx.graph, cfg.n_cycles, cfg.residual, code.lattice);
    if (cfg.sharing) t.model = tie_weights_toric(t.model, (*cfg.sharing)[0], (*cfg.sharing)[1]);
    t.optim = OptimState(t.model.class_count());
    return t;
}

void write_checkpoints(const std::vector<SectorTrainer>& trainers, const std::string& out_dir,
                       const std::string& suffix) {
    namespace fs = std::filesystem;
    fs::create_directories(out_dir);
    for (const auto& t : trainers) {
        const std::string name =
            std::string("checkpoint_") + (t.ctx.sector == 0 ? "x" : "z") + suffix + ".json";
        save_checkpoint(t.model, (fs::path(out_dir) / name).string());
    }
}

}  // namespace

TrainResult train(const CssCode& code, const TrainConfig& config) {
    config.validate();

    std::vector<SectorTrainer> trainers;
    if (config.sectors != SectorPolicy::ZOnly)
        trainers.push_back(make_sector_trainer(code, 0, config));
    if (config.sectors != SectorPolicy::XOnly)
        trainers.push_back(make_sector_trainer(code, 1, config));

    // contexts for the held-out joint evaluation (untrained sectors fall
    // back to the BP baseline at the same depth)
    SectorContext eval_ctx_x = make_sector_context(code, 0);
    SectorContext eval_ctx_z = make_sector_context(code, 1);

    const std::size_t per_rate = config.batch_patterns / config.rates.size();

    TrainResult result;
    std::vector<double> grads;
    std::vector<double> priors;

    for (std::size_t mb = 1; mb <= config.minibatches; ++mb) {
        double loss_sum = 0.0;
        std::size_t loss_count = 0;

        for (std::size_t ti = 0; ti < trainers.size(); ++ti) {
            SectorTrainer& t = trainers[ti];
            Rng rng(derive_seed(config.seed, kSampleStream, mb * 2 + ti));
            const std::vector<TrainSample> batch =
                sample_minibatch(t.ctx, config.rates, per_rate, rng);

            grads.assign(t.model.class_count(), 0.0);
            for (const TrainSample& sample : batch) {
                priors.assign(t.ctx.graph->n, prior_llr(sample.p));
                const ForwardTrace trace =
                    nbp_forward(t.model, sample.syndrome, priors, config.clip_eps);
                loss_sum += cycle_loss(trace, sample.error, t.spec);
                ++loss_count;
                const std::vector<double> sample_grads =
                    backward(trace, t.model, sample.error, t.spec, config.clip_eps);
                for (std::size_t i = 0; i < grads.size(); ++i) grads[i] += sample_grads[i];
            }
            const double inv_batch = 1.0 / static_cast<double>(batch.size());
            for (double& g : grads) g *= inv_batch;

            if (config.optimizer == OptimizerKind::Sgd)
                sgd_step(t.model, grads, config.lr);
            else
                adam_step(t.model, grads, t.optim, config.lr);
        }

        HistoryRow row;
        row.minibatch = mb;
        row.mean_loss = loss_sum / static_cast<double>(loss_count);
        if (std::isnan(row.mean_loss))
            throw std::runtime_error("train: NaN loss at minibatch " + std::to_string(mb));

        if (config.eval_every > 0 && mb % config.eval_every == 0) {
            SectorDecoder dec_x, dec_z;
            dec_x.bp_iterations = config.n_cycles;
            dec_z.bp_iterations = config.n_cycles;
            dec_x.eps = config.clip_eps;
            dec_z.eps = config.clip_eps;
            for (const auto& t : trainers) {
                if (t.ctx.sector == 0) dec_x.model = std::make_shared<NbpModel>(t.model);
                else dec_z.model = std::make_shared<NbpModel>(t.model);
            }
            MonteCarloOptions options;
            options.p = config.eval_p;
            options.trials = config.eval_trials;
            options.seed = derive_seed(config.seed, kEvalStream, mb);
            options.threads = config.eval_threads;
            const OutcomeTally tally =
                monte_carlo(eval_ctx_x, eval_ctx_z, dec_x, dec_z, options);
            row.has_eval = true;
            row.eval_p = config.eval_p;
            row.eval_flagged = static_cast<double>(tally.flagged) / tally.trials;
            row.eval_unflagged = static_cast<double>(tally.unflagged) / tally.trials;
            row.eval_total = tally.failure_rate();
        }
        result.history.push_back(row);

        if (!config.out_dir.empty() && config.checkpoint_every > 0 &&
            mb % config.checkpoint_every == 0 && mb != config.minibatches) {
            write_checkpoints(trainers, config.out_dir, "_mb" + std::to_string(mb));
        }
    }

    if (!config.out_dir.empty()) write_checkpoints(trainers, config.out_dir, "");

    for (auto& t : trainers) {
        if (t.ctx.sector == 0)
            result.model_x = std::move(t.model);
        else
            result.model_z = std::move(t.model);
    }
    return result;
}

}  // namespace qbp
