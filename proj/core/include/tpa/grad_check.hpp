#pragma once

#include <functional>
#include <vector>

#include "tpa/ops.hpp"

namespace tpa {

struct GradCheckReport {
  double max_rel_err = 0.0;
  int worst_param = -1;   // index into the params list
  int worst_index = -1;   // flat element index within that parameter
  double analytic = 0.0;  // gradient values at the worst element
  double numeric = 0.0;
};

// Compares tape gradients of f against central finite differences, element
// by element over every parameter. f must be deterministic and return a
// scalar-shaped tensor; it is evaluated once under a tape and twice per
// parameter element without one. Relative error uses the denominator
// max(|analytic|, |numeric|, 1e-8).
GradCheckReport grad_check(const std::function<Tensor(const std::vector<Tensor>&)>& f,
                           const std::vector<Tensor>& params, double step);

}  // namespace tpa
