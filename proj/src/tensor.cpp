#include "scorp/tensor.hpp"

#include <cmath>
#include <numeric>
#include <stdexcept>

namespace scorp {

namespace {
std::size_t product(const std::vector<std::size_t>& s) {
  std::size_t p = 1;
  for (std::size_t d : s) {
    if (d == 0) throw std::runtime_error("tensor: zero dimension");
    p *= d;
  }
  return p;
}
}  // namespace

Tensor::Tensor(std::vector<std::size_t> s, bool rg) : shape(std::move(s)) {
  v.assign(product(shape), 0.0);
  requires_grad = rg;
  if (rg) g.assign(v.size(), 0.0);
}

Tensor Tensor::vec(std::size_t n, bool rg) { return Tensor({n}, rg); }

Tensor Tensor::mat(std::size_t r, std::size_t c, bool rg) { return Tensor({r, c}, rg); }

Tensor Tensor::scalar(double x) {
  Tensor t({1});
  t.v[0] = x;
  return t;
}

Tensor Tensor::from(std::vector<double> vals) {
  Tensor t;
  t.shape = {vals.size()};
  t.v = std::move(vals);
  return t;
}

std::size_t Tensor::rows() const {
  if (rank() != 2) throw std::runtime_error("tensor: rows() on rank-" + std::to_string(rank()));
  return shape[0];
}

std::size_t Tensor::cols() const {
  if (rank() != 2) throw std::runtime_error("tensor: cols() on rank-" + std::to_string(rank()));
  return shape[1];
}

double& Tensor::at(std::size_t r, std::size_t c) { return v[r * cols() + c]; }
double Tensor::at(std::size_t r, std::size_t c) const { return v[r * cols() + c]; }

void Tensor::set_requires_grad(bool rg) {
  requires_grad = rg;
  if (rg)
    g.assign(v.size(), 0.0);
  else
    g.clear();
}

void Tensor::zero_grad() {
  if (requires_grad) g.assign(v.size(), 0.0);
}

void Tensor::fill(double x) { v.assign(v.size(), x); }

bool Tensor::all_finite() const {
  for (double x : v)
    if (!std::isfinite(x)) return false;
  return true;
}

std::string Tensor::shape_str() const {
  std::string s = "[";
  for (std::size_t i = 0; i < shape.size(); ++i) {
    if (i) s += "x";
    s += std::to_string(shape[i]);
  }
  return s + "]";
}

}  // namespace scorp
