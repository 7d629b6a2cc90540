#include "scorp/graph.hpp"

#include <cmath>
#include <limits>
#include <stdexcept>
#include <string>

namespace scorp {

namespace {

[[noreturn]] void shape_error(const char* op, const Tensor& a) {
  throw std::runtime_error(std::string(op) + ": bad shape " + a.shape_str());
}

[[noreturn]] void shape_error(const char* op, const Tensor& a, const Tensor& b) {
  throw std::runtime_error(std::string(op) + ": shape mismatch " + a.shape_str() +
                           " vs " + b.shape_str());
}

double sigmoid_stable(double x) {
  if (x >= 0.0) return 1.0 / (1.0 + std::exp(-x));
  double e = std::exp(x);
  return e / (1.0 + e);
}

// log(1 + e^x), overflow-safe
double softplus(double x) {
  if (x > 0.0) return x + std::log1p(std::exp(-x));
  return std::log1p(std::exp(x));
}

bool mask_live(std::span<const std::uint8_t> mask, std::size_t j) {
  return mask.empty() || mask[j] != 0;
}

}  // namespace

Graph::Id Graph::push(Node n) {
  nodes_.push_back(std::move(n));
  return static_cast<Id>(nodes_.size() - 1);
}

const Tensor& Graph::in_val(const Node& n, std::size_t k) const {
  const Node& src = node(n.in[k]);
  return src.op == Op::Leaf ? *src.external : src.val;
}

std::vector<double>& Graph::in_grad(Node& n, std::size_t k) {
  return node(n.in[k]).grad;
}

Graph::Id Graph::leaf(Tensor* t) {
  if (t == nullptr) throw std::runtime_error("leaf: null tensor");
  Node n;
  n.op = Op::Leaf;
  n.external = t;
  return push(std::move(n));
}

Graph::Id Graph::constant(Tensor t) {
  Node n;
  n.op = Op::Const;
  n.val = std::move(t);
  return push(std::move(n));
}

Graph::Id Graph::constant_vec(std::span<const double> vals) {
  Tensor t({vals.size()});
  t.v.assign(vals.begin(), vals.end());
  return constant(std::move(t));
}

Graph::Id Graph::matmul(Id a, Id b, bool transpose_b) {
  Node n;
  n.op = Op::MatMul;
  n.in = {a, b};
  n.flag = transpose_b;
  const Tensor& A = in_val(n, 0);
  const Tensor& B = in_val(n, 1);
  if (A.rank() != 2 || B.rank() != 2) shape_error("matmul", A, B);
  std::size_t m = A.rows(), k = A.cols();
  std::size_t bk = transpose_b ? B.cols() : B.rows();
  std::size_t cols = transpose_b ? B.rows() : B.cols();
  if (bk != k) shape_error("matmul", A, B);
  n.val = Tensor::mat(m, cols);
  for (std::size_t i = 0; i < m; ++i) {
    for (std::size_t j = 0; j < cols; ++j) {
      double acc = 0.0;
      if (transpose_b) {
        for (std::size_t t = 0; t < k; ++t) acc += A.at(i, t) * B.at(j, t);
      } else {
        for (std::size_t t = 0; t < k; ++t) acc += A.at(i, t) * B.at(t, j);
      }
      n.val.at(i, j) = acc;
    }
  }
  return push(std::move(n));
}

Graph::Id Graph::matvec(Id m, Id x) {
  Node n;
  n.op = Op::MatVec;
  n.in = {m, x};
  const Tensor& A = in_val(n, 0);
  const Tensor& X = in_val(n, 1);
  if (A.rank() != 2 || X.rank() != 1 || A.cols() != X.size()) shape_error("matvec", A, X);
  n.val = Tensor::vec(A.rows());
  for (std::size_t i = 0; i < A.rows(); ++i) {
    double acc = 0.0;
    for (std::size_t t = 0; t < A.cols(); ++t) acc += A.at(i, t) * X.at(t);
    n.val.at(i) = acc;
  }
  return push(std::move(n));
}

Graph::Id Graph::matvec_t(Id m, Id x) {
  Node n;
  n.op = Op::MatVecT;
  n.in = {m, x};
  const Tensor& A = in_val(n, 0);
  const Tensor& X = in_val(n, 1);
  if (A.rank() != 2 || X.rank() != 1 || A.rows() != X.size()) shape_error("matvec_t", A, X);
  n.val = Tensor::vec(A.cols());
  for (std::size_t j = 0; j < A.cols(); ++j) {
    double acc = 0.0;
    for (std::size_t i = 0; i < A.rows(); ++i) acc += A.at(i, j) * X.at(i);
    n.val.at(j) = acc;
  }
  return push(std::move(n));
}

Graph::Id Graph::add(Id a, Id b) {
  Node n;
  n.op = Op::Add;
  n.in = {a, b};
  const Tensor& A = in_val(n, 0);
  const Tensor& B = in_val(n, 1);
  if (A.shape != B.shape) shape_error("add", A, B);
  n.val = A;
  n.val.set_requires_grad(false);
  for (std::size_t i = 0; i < B.size(); ++i) n.val.v[i] += B.v[i];
  return push(std::move(n));
}

Graph::Id Graph::add_colvec(Id m, Id v) {
  Node n;
  n.op = Op::AddColVec;
  n.in = {m, v};
  const Tensor& M = in_val(n, 0);
  const Tensor& V = in_val(n, 1);
  if (M.rank() != 2 || V.rank() != 1 || M.rows() != V.size()) shape_error("add_colvec", M, V);
  n.val = M;
  n.val.set_requires_grad(false);
  for (std::size_t i = 0; i < M.rows(); ++i)
    for (std::size_t j = 0; j < M.cols(); ++j) n.val.at(i, j) += V.at(i);
  return push(std::move(n));
}

Graph::Id Graph::mul(Id a, Id b) {
  Node n;
  n.op = Op::Mul;
  n.in = {a, b};
  const Tensor& A = in_val(n, 0);
  const Tensor& B = in_val(n, 1);
  if (A.shape != B.shape) shape_error("mul", A, B);
  n.val = A;
  n.val.set_requires_grad(false);
  for (std::size_t i = 0; i < B.size(); ++i) n.val.v[i] *= B.v[i];
  return push(std::move(n));
}

Graph::Id Graph::scale(Id a, double c) {
  Node n;
  n.op = Op::Scale;
  n.in = {a};
  n.c = c;
  n.val = in_val(n, 0);
  n.val.set_requires_grad(false);
  for (double& x : n.val.v) x *= c;
  return push(std::move(n));
}

Graph::Id Graph::concat(std::span<const Id> parts) {
  if (parts.empty()) throw std::runtime_error("concat: no inputs");
  Node n;
  n.op = Op::Concat;
  n.in.assign(parts.begin(), parts.end());
  std::size_t total = 0;
  for (std::size_t k = 0; k < n.in.size(); ++k) {
    const Tensor& p = in_val(n, k);
    if (p.rank() != 1) shape_error("concat", p);
    total += p.size();
  }
  n.val = Tensor::vec(total);
  std::size_t off = 0;
  for (std::size_t k = 0; k < n.in.size(); ++k) {
    const Tensor& p = in_val(n, k);
    for (std::size_t i = 0; i < p.size(); ++i) n.val.at(off + i) = p.at(i);
    off += p.size();
  }
  return push(std::move(n));
}

Graph::Id Graph::stack_rows(std::span<const Id> rows) {
  if (rows.empty()) throw std::runtime_error("stack_rows: no inputs");
  Node n;
  n.op = Op::StackRows;
  n.in.assign(rows.begin(), rows.end());
  std::size_t cols = in_val(n, 0).size();
  for (std::size_t k = 0; k < n.in.size(); ++k) {
    const Tensor& p = in_val(n, k);
    if (p.rank() != 1 || p.size() != cols) shape_error("stack_rows", p);
  }
  n.val = Tensor::mat(n.in.size(), cols);
  for (std::size_t r = 0; r < n.in.size(); ++r) {
    const Tensor& p = in_val(n, r);
    for (std::size_t j = 0; j < cols; ++j) n.val.at(r, j) = p.at(j);
  }
  return push(std::move(n));
}

Graph::Id Graph::stack_cols(std::span<const Id> cols) {
  if (cols.empty()) throw std::runtime_error("stack_cols: no inputs");
  Node n;
  n.op = Op::StackCols;
  n.in.assign(cols.begin(), cols.end());
  std::size_t rows = in_val(n, 0).size();
  for (std::size_t k = 0; k < n.in.size(); ++k) {
    const Tensor& p = in_val(n, k);
    if (p.rank() != 1 || p.size() != rows) shape_error("stack_cols", p);
  }
  n.val = Tensor::mat(rows, n.in.size());
  for (std::size_t c = 0; c < n.in.size(); ++c) {
    const Tensor& p = in_val(n, c);
    for (std::size_t i = 0; i < rows; ++i) n.val.at(i, c) = p.at(i);
  }
  return push(std::move(n));
}

Graph::Id Graph::row_segment(Id m, std::size_t row, std::size_t col_begin, std::size_t len) {
  Node n;
  n.op = Op::RowSegment;
  n.in = {m};
  const Tensor& M = in_val(n, 0);
  if (M.rank() != 2 || row >= M.rows() || col_begin + len > M.cols())
    throw std::runtime_error("row_segment: out of range for " + M.shape_str());
  n.idx = {row, col_begin, len};
  n.val = Tensor::vec(len);
  for (std::size_t j = 0; j < len; ++j) n.val.at(j) = M.at(row, col_begin + j);
  return push(std::move(n));
}

Graph::Id Graph::mean_rows(Id m, std::span<const std::size_t> rows) {
  if (rows.empty()) throw std::runtime_error("mean_rows: empty row selection");
  Node n;
  n.op = Op::MeanRows;
  n.in = {m};
  const Tensor& M = in_val(n, 0);
  if (M.rank() != 2) shape_error("mean_rows", M);
  for (std::size_t r : rows)
    if (r >= M.rows()) throw std::runtime_error("mean_rows: row out of range");
  n.idx.assign(rows.begin(), rows.end());
  n.val = Tensor::vec(M.cols());
  double k = static_cast<double>(rows.size());
  for (std::size_t j = 0; j < M.cols(); ++j) {
    double acc = 0.0;
    for (std::size_t r : n.idx) acc += M.at(r, j);
    n.val.at(j) = acc / k;
  }
  return push(std::move(n));
}

Graph::Id Graph::sigmoid(Id a) {
  Node n;
  n.op = Op::Sigmoid;
  n.in = {a};
  n.val = in_val(n, 0);
  n.val.set_requires_grad(false);
  for (double& x : n.val.v) x = sigmoid_stable(x);
  return push(std::move(n));
}

Graph::Id Graph::tanh(Id a) {
  Node n;
  n.op = Op::Tanh;
  n.in = {a};
  n.val = in_val(n, 0);
  n.val.set_requires_grad(false);
  for (double& x : n.val.v) x = std::tanh(x);
  return push(std::move(n));
}

Graph::Id Graph::softmax_rows(Id m, std::span<const std::uint8_t> col_mask) {
  Node n;
  n.op = Op::SoftmaxRows;
  n.in = {m};
  const Tensor& M = in_val(n, 0);
  if (M.rank() != 2) shape_error("softmax_rows", M);
  if (!col_mask.empty() && col_mask.size() != M.cols())
    throw std::runtime_error("softmax_rows: mask length mismatch");
  bool any = col_mask.empty();
  for (std::uint8_t b : col_mask) any = any || b != 0;
  if (!any) throw std::runtime_error("softmax_rows: all columns masked");
  n.mask.assign(col_mask.begin(), col_mask.end());
  n.val = Tensor::mat(M.rows(), M.cols());
  for (std::size_t i = 0; i < M.rows(); ++i) {
    double mx = -std::numeric_limits<double>::infinity();
    for (std::size_t j = 0; j < M.cols(); ++j)
      if (mask_live(col_mask, j) && M.at(i, j) > mx) mx = M.at(i, j);
    double z = 0.0;
    for (std::size_t j = 0; j < M.cols(); ++j)
      if (mask_live(col_mask, j)) z += std::exp(M.at(i, j) - mx);
    for (std::size_t j = 0; j < M.cols(); ++j)
      n.val.at(i, j) = mask_live(col_mask, j) ? std::exp(M.at(i, j) - mx) / z : 0.0;
  }
  return push(std::move(n));
}

Graph::Id Graph::masked_max_cols(Id m, std::span<const std::uint8_t> col_mask,
                                 std::vector<std::size_t>* argmax_out) {
  Node n;
  n.op = Op::MaskedMaxCols;
  n.in = {m};
  const Tensor& M = in_val(n, 0);
  if (M.rank() != 2) shape_error("masked_max_cols", M);
  if (!col_mask.empty() && col_mask.size() != M.cols())
    throw std::runtime_error("masked_max_cols: mask length mismatch");
  bool any = col_mask.empty();
  for (std::uint8_t b : col_mask) any = any || b != 0;
  if (!any) throw std::runtime_error("masked_max_cols: all columns masked");
  n.mask.assign(col_mask.begin(), col_mask.end());
  n.val = Tensor::vec(M.rows());
  n.idx.resize(M.rows());
  for (std::size_t i = 0; i < M.rows(); ++i) {
    double best = -std::numeric_limits<double>::infinity();
    std::size_t arg = 0;
    for (std::size_t j = 0; j < M.cols(); ++j) {
      if (!mask_live(col_mask, j)) continue;
      if (M.at(i, j) > best) {
        best = M.at(i, j);
        arg = j;
      }
    }
    n.val.at(i) = best;
    n.idx[i] = arg;
  }
  if (argmax_out) *argmax_out = n.idx;
  return push(std::move(n));
}

Graph::Id Graph::masked_mean_cols(Id m, std::span<const std::uint8_t> col_mask) {
  Node n;
  n.op = Op::MaskedMeanCols;
  n.in = {m};
  const Tensor& M = in_val(n, 0);
  if (M.rank() != 2) shape_error("masked_mean_cols", M);
  if (!col_mask.empty() && col_mask.size() != M.cols())
    throw std::runtime_error("masked_mean_cols: mask length mismatch");
  std::size_t live = 0;
  for (std::size_t j = 0; j < M.cols(); ++j)
    if (mask_live(col_mask, j)) ++live;
  if (live == 0) throw std::runtime_error("masked_mean_cols: all columns masked");
  n.mask.assign(col_mask.begin(), col_mask.end());
  n.c = static_cast<double>(live);
  n.val = Tensor::vec(M.rows());
  for (std::size_t i = 0; i < M.rows(); ++i) {
    double acc = 0.0;
    for (std::size_t j = 0; j < M.cols(); ++j)
      if (mask_live(col_mask, j)) acc += M.at(i, j);
    n.val.at(i) = acc / n.c;
  }
  return push(std::move(n));
}

Graph::Id Graph::sum_cols(Id m) {
  Node n;
  n.op = Op::SumCols;
  n.in = {m};
  const Tensor& M = in_val(n, 0);
  if (M.rank() != 2) shape_error("sum_cols", M);
  n.val = Tensor::vec(M.rows());
  for (std::size_t i = 0; i < M.rows(); ++i) {
    double acc = 0.0;
    for (std::size_t j = 0; j < M.cols(); ++j) acc += M.at(i, j);
    n.val.at(i) = acc;
  }
  return push(std::move(n));
}

Graph::Id Graph::dropout(Id a, double rate, bool train) {
  if (!train || rate <= 0.0) return a;  // exact identity
  if (rate >= 1.0) throw std::runtime_error("dropout: rate must be < 1");
  Node n;
  n.op = Op::Dropout;
  n.in = {a};
  n.c = 1.0 / (1.0 - rate);
  const Tensor& A = in_val(n, 0);
  n.mask.resize(A.size());
  n.val = A;
  n.val.set_requires_grad(false);
  for (std::size_t i = 0; i < A.size(); ++i) {
    bool keep = rng_.uniform() >= rate;
    n.mask[i] = keep ? 1 : 0;
    n.val.v[i] = keep ? A.v[i] * n.c : 0.0;
  }
  return push(std::move(n));
}

Graph::Id Graph::bce_with_logits(Id logits, const Tensor& targets) {
  Node n;
  n.op = Op::BceWithLogits;
  n.in = {logits};
  const Tensor& X = in_val(n, 0);
  if (X.rank() != 1 || targets.size() != X.size()) shape_error("bce_with_logits", X, targets);
  n.aux = targets;
  n.aux.set_requires_grad(false);
  double acc = 0.0;
  for (std::size_t j = 0; j < X.size(); ++j) {
    double y = targets.at(j);
    acc += y * softplus(-X.at(j)) + (1.0 - y) * softplus(X.at(j));
  }
  n.val = Tensor::scalar(acc / static_cast<double>(X.size()));
  return push(std::move(n));
}

Graph::Id Graph::bce_literal(Id logits, const Tensor& targets) {
  Node n;
  n.op = Op::BceLiteral;
  n.in = {logits};
  const Tensor& X = in_val(n, 0);
  if (X.rank() != 1 || targets.size() != X.size()) shape_error("bce_literal", X, targets);
  n.aux = targets;
  n.aux.set_requires_grad(false);
  double acc = 0.0;
  for (std::size_t j = 0; j < X.size(); ++j) {
    double y = targets.at(j);
    acc += y * sigmoid_stable(X.at(j)) + (1.0 - y) * sigmoid_stable(-X.at(j));
  }
  n.val = Tensor::scalar(-acc / static_cast<double>(X.size()));
  return push(std::move(n));
}

void Graph::backward(Id loss, double seed) {
  if (loss < 0 || static_cast<std::size_t>(loss) >= nodes_.size())
    throw std::runtime_error("backward: bad loss node");
  {
    const Node& ln = node(loss);
    const Tensor& lv = ln.op == Op::Leaf ? *ln.external : ln.val;
    if (!lv.is_scalar()) throw std::runtime_error("backward: loss is not scalar");
  }
  for (Node& n : nodes_) {
    std::size_t sz = n.op == Op::Leaf ? n.external->size() : n.val.size();
    n.grad.assign(sz, 0.0);
  }
  node(loss).grad[0] = seed;
  for (std::size_t k = nodes_.size(); k-- > 0;) {
    Node& n = nodes_[k];
    if (n.op == Op::Leaf) {
      if (n.external->requires_grad) {
        if (n.external->g.size() != n.external->v.size())
          n.external->g.assign(n.external->v.size(), 0.0);
        for (std::size_t i = 0; i < n.grad.size(); ++i) n.external->g[i] += n.grad[i];
      }
      continue;
    }
    backward_node(n);
  }
}

void Graph::backward_node(Node& n) {
  const std::vector<double>& go = n.grad;
  switch (n.op) {
    case Op::Leaf:
    case Op::Const:
      break;
    case Op::MatMul: {
      const Tensor& A = in_val(n, 0);
      const Tensor& B = in_val(n, 1);
      std::vector<double>& ga = in_grad(n, 0);
      std::vector<double>& gb = in_grad(n, 1);
      std::size_t m = A.rows(), k = A.cols();
      std::size_t cols = n.val.cols();
      for (std::size_t i = 0; i < m; ++i) {
        for (std::size_t j = 0; j < cols; ++j) {
          double gij = go[i * cols + j];
          if (gij == 0.0) continue;
          if (n.flag) {
            // C = A·B^T, B is [cols,k]
            for (std::size_t t = 0; t < k; ++t) {
              ga[i * k + t] += gij * B.at(j, t);
              gb[j * k + t] += gij * A.at(i, t);
            }
          } else {
            for (std::size_t t = 0; t < k; ++t) {
              ga[i * k + t] += gij * B.at(t, j);
              gb[t * cols + j] += gij * A.at(i, t);
            }
          }
        }
      }
      break;
    }
    case Op::MatVec: {
      const Tensor& A = in_val(n, 0);
      const Tensor& X = in_val(n, 1);
      std::vector<double>& ga = in_grad(n, 0);
      std::vector<double>& gx = in_grad(n, 1);
      for (std::size_t i = 0; i < A.rows(); ++i) {
        double gi = go[i];
        if (gi == 0.0) continue;
        for (std::size_t t = 0; t < A.cols(); ++t) {
          ga[i * A.cols() + t] += gi * X.at(t);
          gx[t] += gi * A.at(i, t);
        }
      }
      break;
    }
    case Op::MatVecT: {
      const Tensor& A = in_val(n, 0);
      const Tensor& X = in_val(n, 1);
      std::vector<double>& ga = in_grad(n, 0);
      std::vector<double>& gx = in_grad(n, 1);
      for (std::size_t j = 0; j < A.cols(); ++j) {
        double gj = go[j];
        if (gj == 0.0) continue;
        for (std::size_t i = 0; i < A.rows(); ++i) {
          ga[i * A.cols() + j] += gj * X.at(i);
          gx[i] += gj * A.at(i, j);
        }
      }
      break;
    }
    case Op::Add: {
      std::vector<double>& ga = in_grad(n, 0);
      std::vector<double>& gb = in_grad(n, 1);
      for (std::size_t i = 0; i < go.size(); ++i) {
        ga[i] += go[i];
        gb[i] += go[i];
      }
      break;
    }
    case Op::AddColVec: {
      const Tensor& M = in_val(n, 0);
      std::vector<double>& gm = in_grad(n, 0);
      std::vector<double>& gv = in_grad(n, 1);
      for (std::size_t i = 0; i < M.rows(); ++i)
        for (std::size_t j = 0; j < M.cols(); ++j) {
          gm[i * M.cols() + j] += go[i * M.cols() + j];
          gv[i] += go[i * M.cols() + j];
        }
      break;
    }
    case Op::Mul: {
      const Tensor& A = in_val(n, 0);
      const Tensor& B = in_val(n, 1);
      std::vector<double>& ga = in_grad(n, 0);
      std::vector<double>& gb = in_grad(n, 1);
      for (std::size_t i = 0; i < go.size(); ++i) {
        ga[i] += go[i] * B.v[i];
        gb[i] += go[i] * A.v[i];
      }
      break;
    }
    case Op::Scale: {
      std::vector<double>& ga = in_grad(n, 0);
      for (std::size_t i = 0; i < go.size(); ++i) ga[i] += go[i] * n.c;
      break;
    }
    case Op::Concat: {
      std::size_t off = 0;
      for (std::size_t k = 0; k < n.in.size(); ++k) {
        std::vector<double>& gp = in_grad(n, k);
        for (std::size_t i = 0; i < gp.size(); ++i) gp[i] += go[off + i];
        off += gp.size();
      }
      break;
    }
    case Op::StackRows: {
      std::size_t cols = n.val.cols();
      for (std::size_t r = 0; r < n.in.size(); ++r) {
        std::vector<double>& gp = in_grad(n, r);
        for (std::size_t j = 0; j < cols; ++j) gp[j] += go[r * cols + j];
      }
      break;
    }
    case Op::StackCols: {
      std::size_t cols = n.val.cols();
      std::size_t rows = n.val.rows();
      for (std::size_t c = 0; c < n.in.size(); ++c) {
        std::vector<double>& gp = in_grad(n, c);
        for (std::size_t i = 0; i < rows; ++i) gp[i] += go[i * cols + c];
      }
      break;
    }
    case Op::RowSegment: {
      const Tensor& M = in_val(n, 0);
      std::vector<double>& gm = in_grad(n, 0);
      std::size_t row = n.idx[0], cb = n.idx[1], len = n.idx[2];
      for (std::size_t j = 0; j < len; ++j) gm[row * M.cols() + cb + j] += go[j];
      break;
    }
    case Op::MeanRows: {
      const Tensor& M = in_val(n, 0);
      std::vector<double>& gm = in_grad(n, 0);
      double k = static_cast<double>(n.idx.size());
      for (std::size_t j = 0; j < M.cols(); ++j) {
        double gj = go[j] / k;
        for (std::size_t r : n.idx) gm[r * M.cols() + j] += gj;
      }
      break;
    }
    case Op::Sigmoid: {
      std::vector<double>& ga = in_grad(n, 0);
      for (std::size_t i = 0; i < go.size(); ++i) {
        double y = n.val.v[i];
        ga[i] += go[i] * y * (1.0 - y);
      }
      break;
    }
    case Op::Tanh: {
      std::vector<double>& ga = in_grad(n, 0);
      for (std::size_t i = 0; i < go.size(); ++i) {
        double y = n.val.v[i];
        ga[i] += go[i] * (1.0 - y * y);
      }
      break;
    }
    case Op::SoftmaxRows: {
      const Tensor& Y = n.val;
      std::vector<double>& gm = in_grad(n, 0);
      for (std::size_t i = 0; i < Y.rows(); ++i) {
        double dot = 0.0;
        for (std::size_t j = 0; j < Y.cols(); ++j) dot += go[i * Y.cols() + j] * Y.at(i, j);
        for (std::size_t j = 0; j < Y.cols(); ++j) {
          if (!mask_live(n.mask, j)) continue;
          gm[i * Y.cols() + j] += Y.at(i, j) * (go[i * Y.cols() + j] - dot);
        }
      }
      break;
    }
    case Op::MaskedMaxCols: {
      const Tensor& M = in_val(n, 0);
      std::vector<double>& gm = in_grad(n, 0);
      for (std::size_t i = 0; i < M.rows(); ++i) gm[i * M.cols() + n.idx[i]] += go[i];
      break;
    }
    case Op::MaskedMeanCols: {
      const Tensor& M = in_val(n, 0);
      std::vector<double>& gm = in_grad(n, 0);
      for (std::size_t i = 0; i < M.rows(); ++i) {
        double gi = go[i] / n.c;
        for (std::size_t j = 0; j < M.cols(); ++j)
          if (mask_live(n.mask, j)) gm[i * M.cols() + j] += gi;
      }
      break;
    }
    case Op::SumCols: {
      const Tensor& M = in_val(n, 0);
      std::vector<double>& gm = in_grad(n, 0);
      for (std::size_t i = 0; i < M.rows(); ++i)
        for (std::size_t j = 0; j < M.cols(); ++j) gm[i * M.cols() + j] += go[i];
      break;
    }
    case Op::Dropout: {
      std::vector<double>& ga = in_grad(n, 0);
      for (std::size_t i = 0; i < go.size(); ++i)
        if (n.mask[i]) ga[i] += go[i] * n.c;
      break;
    }
    case Op::BceWithLogits: {
      const Tensor& X = in_val(n, 0);
      std::vector<double>& gx = in_grad(n, 0);
      double gl = go[0] / static_cast<double>(X.size());
      for (std::size_t j = 0; j < X.size(); ++j)
        gx[j] += gl * (sigmoid_stable(X.at(j)) - n.aux.at(j));
      break;
    }
    case Op::BceLiteral: {
      const Tensor& X = in_val(n, 0);
      std::vector<double>& gx = in_grad(n, 0);
      double gl = -go[0] / static_cast<double>(X.size());
      for (std::size_t j = 0; j < X.size(); ++j) {
        double s = sigmoid_stable(X.at(j));
        gx[j] += gl * (2.0 * n.aux.at(j) - 1.0) * s * (1.0 - s);
      }
      break;
    }
  }
}

}  // namespace scorp
