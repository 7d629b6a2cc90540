#pragma once

#include <cstdint>
#include <functional>
#include <string>
#include <utility>
#include <vector>

#include "scorp/tensor.hpp"

namespace scorp {

using NamedParams = std::vector<std::pair<std::string, Tensor*>>;

// Bias-corrected Adam. First/second moment buffers parallel the parameter
// list they were initialized from.
struct AdamState {
  double beta1 = 0.9;
  double beta2 = 0.999;
  double eps = 1e-8;
  std::uint64_t t = 0;
  std::vector<Tensor> m;
  std::vector<Tensor> v;

  void init_like(const NamedParams& params);
  bool initialized() const { return !m.empty(); }
};

// One update from the accumulated grads; zeroes grads afterward.
void adam_step(const NamedParams& params, AdamState& state, double lr);

void zero_grads(const NamedParams& params);

// -- finite-difference gradient checking ------------------------------------

struct GradCheckItem {
  std::string name;
  double max_rel_err = 0.0;
  std::size_t worst_index = 0;
  double analytic = 0.0;
  double numeric = 0.0;
};

struct GradCheckReport {
  std::vector<GradCheckItem> items;
  double max_rel_err = 0.0;
  bool pass(double tol) const { return max_rel_err < tol; }
  std::string to_string() const;
};

// loss_fn(do_backward) must run a fresh forward pass each call and, when
// do_backward, accumulate dloss/dparam into the grad buffers. Central
// differences with step delta; relative error uses max(|a|,|b|,1e-8) as
// denominator.
GradCheckReport grad_check(const std::function<double(bool)>& loss_fn,
                           const NamedParams& params, double delta = 1e-5,
                           double tol = 1e-4);

}  // namespace scorp
