#pragma once

#include <cstddef>
#include <vector>

#include "qbp/bitmatrix.hpp"
#include "qbp/gf2.hpp"
#include "qbp/nbp.hpp"

namespace qbp {

// sigma(x) = 1 / (e^x + 1), the logistic sigmoid flipped so that
// sigma(prior_llr(p)) = p. Stable for |x| into the hundreds.
double fermi_sigma(double x);
// d sigma / dx = -sigma(x) (1 - sigma(x))
double fermi_sigma_prime(double x);

// f(x) = |sin(pi x / 2)|, the smooth stand-in for parity(x) = x mod 2.
double smooth_parity(double x);
// sign(sin) * (pi/2) cos, with subgradient 0 at the kinks
double smooth_parity_prime(double x);

enum class LossKind { FinalCycle, CycleAveraged };
enum class LossTarget { Degeneracy, ClassicalBce };

// Loss configuration plus the (sector-restricted) degeneracy matrix whose
// rows must all see an even real-valued overlap with e + sigma(mu) for the
// loss to vanish.
struct LossSpec {
    LossKind kind = LossKind::CycleAveraged;
    LossTarget target = LossTarget::Degeneracy;
    BitMatrix loss_matrix;  // rows act on the decoded sector's variables
    std::vector<std::vector<std::size_t>> loss_rows;  // cached row support

    static LossSpec make(LossKind kind, LossTarget target, const BitMatrix& loss_matrix);
};

// For a CSS code decoded per sector, the symplectic degeneracy operand
// reduces to: x sector (errors e_x, Tanner graph of B) -> nullspace(A);
// z sector -> nullspace(B). sector: 0 = x, 1 = z.
BitMatrix sector_loss_matrix(const CssCode& code, int sector);

// L = sum_i f( sum_k M[i][k] (e_k + sigma(mu_k)) ), sums over the reals.
double degeneracy_loss(const std::vector<double>& marginals, const BitVector& true_error,
                       const LossSpec& spec);

// -sum_v [ e_v log sigma(mu_v) + (1 - e_v) log(1 - sigma(mu_v)) ],
// log arguments floored at 1e-30.
double classical_bce_loss(const std::vector<double>& marginals, const BitVector& true_error);

// Per-marginal loss value for one cycle, dispatching on spec.target.
double single_cycle_loss(const std::vector<double>& marginals, const BitVector& true_error,
                         const LossSpec& spec);

// FinalCycle evaluates the last cycle only; CycleAveraged takes the mean
// over every cycle's marginals.
double cycle_loss(const ForwardTrace& trace, const BitVector& true_error, const LossSpec& spec);

// d(single-cycle loss)/d mu, written into grad_mu (resized as needed)
void loss_grad_mu(const std::vector<double>& marginals, const BitVector& true_error,
                  const LossSpec& spec, std::vector<double>& grad_mu);

// Exact reverse-mode derivatives of cycle_loss through the unrolled
// network. Clipped check-layer outputs and the kinks of f contribute zero
// gradient; tied parameters accumulate the sum over their members. Returns
// one gradient per parameter class.
std::vector<double> backward(const ForwardTrace& trace, const NbpModel& model,
                             const BitVector& true_error, const LossSpec& spec,
                             double eps = kDefaultClip);

}  // namespace qbp
