#include "tpa/grad_check.hpp"

#include <cmath>

namespace tpa {

GradCheckReport grad_check(const std::function<Tensor(const std::vector<Tensor>&)>& f,
                           const std::vector<Tensor>& params, double step) {
  if (!(step > 0.0)) throw NumericError("grad_check: step must be positive");

  Tape tape;
  std::vector<Tensor> watched;
  watched.reserve(params.size());
  for (const Tensor& p : params) watched.push_back(tape.watch(p));

  Tensor out = f(watched);
  if (out.numel() != 1) throw ShapeError("grad_check: function output must be scalar-shaped");
  if (!out.all_finite()) throw NumericError("grad_check: non-finite function value");

  std::vector<Tensor> analytic;
  analytic.reserve(params.size());
  if (out.on_tape()) {
    Gradients grads = tape.backward(out);
    for (const Tensor& w : watched) analytic.push_back(grads.at(w));
  } else {
    // Function ignored its parameters; all gradients are zero.
    for (const Tensor& p : params) analytic.push_back(Tensor::zeros(p.shape));
  }

  GradCheckReport report;
  std::vector<Tensor> probe = params;
  for (size_t pi = 0; pi < params.size(); ++pi) {
    for (int i = 0; i < params[pi].numel(); ++i) {
      double saved = probe[pi].at(i);
      probe[pi].at(i) = saved + step;
      double up = f(probe).item();
      probe[pi].at(i) = saved - step;
      double down = f(probe).item();
      probe[pi].at(i) = saved;
      if (!std::isfinite(up) || !std::isfinite(down)) {
        throw NumericError("grad_check: non-finite function value at perturbed point");
      }
      double numeric = (up - down) / (2.0 * step);
      double a = analytic[pi].at(i);
      double denom = std::max({std::fabs(a), std::fabs(numeric), 1e-8});
      double rel = std::fabs(a - numeric) / denom;
      if (rel > report.max_rel_err) {
        report.max_rel_err = rel;
        report.worst_param = static_cast<int>(pi);
        report.worst_index = i;
        report.analytic = a;
        report.numeric = numeric;
      }
    }
  }
  return report;
}

}  // namespace tpa
