#include "scorp/optim.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace scorp {

void AdamState::init_like(const NamedParams& params) {
  t = 0;
  m.clear();
  v.clear();
  for (const auto& [name, p] : params) {
    m.push_back(Tensor(p->shape));
    v.push_back(Tensor(p->shape));
  }
}

void adam_step(const NamedParams& params, AdamState& state, double lr) {
  if (!state.initialized()) state.init_like(params);
  if (state.m.size() != params.size())
    throw std::runtime_error("adam_step: state does not match parameter list");
  state.t += 1;
  double bc1 = 1.0 - std::pow(state.beta1, static_cast<double>(state.t));
  double bc2 = 1.0 - std::pow(state.beta2, static_cast<double>(state.t));
  for (std::size_t k = 0; k < params.size(); ++k) {
    Tensor* p = params[k].second;
    if (!p->requires_grad || p->g.size() != p->v.size())
      throw std::runtime_error("adam_step: missing grad for " + params[k].first);
    Tensor& m = state.m[k];
    Tensor& v = state.v[k];
    if (m.size() != p->size())
      throw std::runtime_error("adam_step: moment shape mismatch for " + params[k].first);
    for (std::size_t i = 0; i < p->size(); ++i) {
      double grad = p->g[i];
      m.v[i] = state.beta1 * m.v[i] + (1.0 - state.beta1) * grad;
      v.v[i] = state.beta2 * v.v[i] + (1.0 - state.beta2) * grad * grad;
      double mhat = m.v[i] / bc1;
      double vhat = v.v[i] / bc2;
      p->v[i] -= lr * mhat / (std::sqrt(vhat) + state.eps);
    }
    p->zero_grad();
  }
}

void zero_grads(const NamedParams& params) {
  for (const auto& [name, p] : params) p->zero_grad();
}

std::string GradCheckReport::to_string() const {
  std::string out;
  for (const auto& item : items) {
    char buf[160];
    std::snprintf(buf, sizeof(buf), "%-24s max_rel_err=%.3e at %zu (bp=%.6e fd=%.6e)\n",
                  item.name.c_str(), item.max_rel_err, item.worst_index, item.analytic,
                  item.numeric);
    out += buf;
  }
  return out;
}

GradCheckReport grad_check(const std::function<double(bool)>& loss_fn,
                           const NamedParams& params, double delta, double tol) {
  (void)tol;
  zero_grads(params);
  loss_fn(true);
  std::vector<std::vector<double>> analytic;
  analytic.reserve(params.size());
  for (const auto& [name, p] : params) analytic.push_back(p->g);

  GradCheckReport report;
  for (std::size_t k = 0; k < params.size(); ++k) {
    Tensor* p = params[k].second;
    GradCheckItem item;
    item.name = params[k].first;
    for (std::size_t i = 0; i < p->size(); ++i) {
      double saved = p->v[i];
      p->v[i] = saved + delta;
      double fp = loss_fn(false);
      p->v[i] = saved - delta;
      double fm = loss_fn(false);
      p->v[i] = saved;
      double fd = (fp - fm) / (2.0 * delta);
      double bp = analytic[k][i];
      double denom = std::max({std::fabs(fd), std::fabs(bp), 1e-8});
      double rel = std::fabs(fd - bp) / denom;
      if (rel > item.max_rel_err) {
        item.max_rel_err = rel;
        item.worst_index = i;
        item.analytic = bp;
        item.numeric = fd;
      }
    }
    report.max_rel_err = std::max(report.max_rel_err, item.max_rel_err);
    report.items.push_back(std::move(item));
  }
  zero_grads(params);
  return report;
}

}  // namespace scorp
