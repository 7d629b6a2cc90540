#pragma once

#include <cstddef>
#include <string>
#include <vector>

namespace scorp {

// Dense row-major f64 array. The grad buffer exists iff requires_grad.
struct Tensor {
  std::vector<std::size_t> shape;
  std::vector<double> v;
  bool requires_grad = false;
  std::vector<double> g;

  Tensor() = default;
  explicit Tensor(std::vector<std::size_t> s, bool rg = false);

  static Tensor vec(std::size_t n, bool rg = false);
  static Tensor mat(std::size_t r, std::size_t c, bool rg = false);
  static Tensor scalar(double x);
  static Tensor from(std::vector<double> vals);

  std::size_t size() const { return v.size(); }
  std::size_t rank() const { return shape.size(); }
  std::size_t rows() const;
  std::size_t cols() const;
  bool is_scalar() const { return v.size() == 1; }

  double& at(std::size_t i) { return v[i]; }
  double at(std::size_t i) const { return v[i]; }
  double& at(std::size_t r, std::size_t c);
  double at(std::size_t r, std::size_t c) const;

  void set_requires_grad(bool rg);
  void zero_grad();
  void fill(double x);
  bool all_finite() const;

  std::string shape_str() const;
};

}  // namespace scorp
