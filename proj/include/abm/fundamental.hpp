#pragma once

#include "abm/rng.hpp"
#include "abm/types.hpp"

namespace abm {

struct FundamentalParams {
  double initial{1000.0};
  // Magnitude of each jump; the sign is drawn per jump when signed_jumps is set.
  double jump_size{0.002};
  double jump_prob{0.001};
  bool signed_jumps{true};
};

// Jump process for the fundamental value: with probability jump_prob the
// value is multiplied by (1 + j), otherwise it is carried forward.
class FundamentalProcess {
public:
  explicit FundamentalProcess(const FundamentalParams& params = {});

  double value() const noexcept { return value_; }
  const FundamentalParams& params() const noexcept { return params_; }

  // Deterministic core: u is the threshold draw, j the jump applied if it fires.
  double step(double u, double j);

  // Draws u and the jump sign from rng. Always consumes two uniforms so the
  // stream position does not depend on whether a jump happened.
  double step(Rng& rng);

private:
  FundamentalParams params_;
  double value_;
};

}  // namespace abm
