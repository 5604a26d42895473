#pragma once

#include <cmath>
#include <stdexcept>

namespace pcstruct {

// Scalar values of the seven training loss terms. The GAN-side terms are
// opaque inputs produced elsewhere; only pc and normal come from this
// toolkit.
struct LossComponents {
  double gan = 0.0;
  double cyc = 0.0;
  double excyc = 0.0;
  double dir = 0.0;
  double iden_d = 0.0;
  double pc = 0.0;
  double normal = 0.0;
};

struct LossWeights {
  double alpha = 0.5;
  double beta = 10.0;
  double gamma = 5.0;
  double lambda = 2.4;
  int pc_start_epoch = 160;

  void validate() const {
    if (alpha < 0 || beta < 0 || gamma < 0 || lambda < 0)
      throw std::invalid_argument("LossWeights: weights must be >= 0");
    if (pc_start_epoch < 0)
      throw std::invalid_argument("LossWeights: pc_start_epoch must be >= 0");
  }
};

inline LossWeights default_weights() { return LossWeights{}; }

// alpha*gan + beta*cyc + beta*excyc + dir + gamma*iden_d + gamma*pc + lambda*normal,
// with the pc term gated on epoch >= pc_start_epoch. dir enters unweighted;
// beta and gamma are each shared by two terms.
inline double total_loss(const LossComponents& c, const LossWeights& w, int epoch) {
  w.validate();
  for (double v : {c.gan, c.cyc, c.excyc, c.dir, c.iden_d, c.pc, c.normal})
    if (!std::isfinite(v))
      throw std::invalid_argument("total_loss: non-finite loss component");
  double total = w.alpha * c.gan + w.beta * c.cyc + w.beta * c.excyc + c.dir +
                 w.gamma * c.iden_d + w.lambda * c.normal;
  if (epoch >= w.pc_start_epoch) total += w.gamma * c.pc;
  return total;
}

}  // namespace pcstruct
