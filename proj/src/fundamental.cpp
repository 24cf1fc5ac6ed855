#include "abm/fundamental.hpp"

#include "abm/types.hpp"

namespace abm {

FundamentalProcess::FundamentalProcess(const FundamentalParams& params) : params_(params), value_(params.initial) {
  if (!(params.initial > 0.0)) throw ValidationError("fundamental.initial must be positive");
  if (!(params.jump_size > -1.0)) throw ValidationError("fundamental.jump_size must exceed -1");
  if (params.jump_prob < 0.0 || params.jump_prob > 1.0) throw ValidationError("fundamental.jump_prob must lie in [0,1]");
}

double FundamentalProcess::step(double u, double j) {
  if (!(j > -1.0)) throw ValidationError("fundamental jump must exceed -1");
  if (u < params_.jump_prob) value_ *= 1.0 + j;
  return value_;
}

double FundamentalProcess::step(Rng& rng) {
  const double u = uniform01(rng);
  const double sign_draw = uniform01(rng);
  double j = params_.jump_size;
  if (params_.signed_jumps && sign_draw < 0.5) j = -j;
  return step(u, j);
}

}  // namespace abm
