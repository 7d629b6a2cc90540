#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "scorp/rng.hpp"
#include "scorp/tensor.hpp"

namespace scorp {

// Single-use reverse-mode tape. Builder calls evaluate eagerly; backward()
// walks the tape in reverse and accumulates into the grad buffers of leaf
// tensors that have requires_grad set.
//
// A graph and its nodes are confined to one thread.
class Graph {
 public:
  using Id = std::int32_t;

  explicit Graph(std::uint64_t dropout_seed = 0) : rng_(dropout_seed) {}

  // -- inputs ---------------------------------------------------------------
  Id leaf(Tensor* t);               // external tensor, grads accumulate into it
  Id constant(Tensor t);            // owned value, never differentiated
  Id constant_vec(std::span<const double> vals);

  // -- linear algebra ---------------------------------------------------------
  Id matmul(Id a, Id b, bool transpose_b = false);  // [m,k]·[k,n] or [m,k]·[n,k]^T
  Id matvec(Id m, Id x);                            // [m,n]·[n] -> [m]
  Id matvec_t(Id m, Id x);                          // [m,n]^T·[m] -> [n]
  Id add(Id a, Id b);                               // same shape
  Id add_colvec(Id m, Id v);                        // add v to every column of m
  Id mul(Id a, Id b);                               // elementwise
  Id scale(Id a, double c);

  // -- shape ------------------------------------------------------------------
  Id concat(std::span<const Id> parts);             // 1-D parts -> 1-D
  Id stack_rows(std::span<const Id> rows);          // equal-length vectors -> [R,C]
  Id stack_cols(std::span<const Id> cols);          // equal-length vectors -> [R,C]
  Id row_segment(Id m, std::size_t row, std::size_t col_begin, std::size_t len);
  Id mean_rows(Id m, std::span<const std::size_t> rows);  // mean of selected rows -> [C]

  // -- nonlinearities and reductions -------------------------------------------
  Id sigmoid(Id a);
  Id tanh(Id a);
  // Masked softmax over each row (reduction axis = columns). Empty mask means
  // all columns live. Error if every column of the mask is zero.
  Id softmax_rows(Id m, std::span<const std::uint8_t> col_mask);
  // Max over unmasked columns per row; ties resolve to the first index and the
  // gradient routes only to the argmax position.
  Id masked_max_cols(Id m, std::span<const std::uint8_t> col_mask,
                     std::vector<std::size_t>* argmax_out = nullptr);
  Id masked_mean_cols(Id m, std::span<const std::uint8_t> col_mask);
  Id sum_cols(Id m);                                // row sums -> [R]

  // Inverted dropout: scales kept values by 1/(1-rate) at train time and is
  // the exact identity at eval time (or rate 0).
  Id dropout(Id a, double rate, bool train);

  // -- losses -------------------------------------------------------------------
  // mean_j [ y_j*softplus(-x_j) + (1-y_j)*softplus(x_j) ]  (log-sigmoid BCE)
  Id bce_with_logits(Id logits, const Tensor& targets);
  // The same expression without logarithms: -mean_j [ y_j*sigmoid(x_j) +
  // (1-y_j)*sigmoid(-x_j) ]. Kept for comparison experiments only.
  Id bce_literal(Id logits, const Tensor& targets);

  // -- execution ------------------------------------------------------------------
  const Tensor& value(Id id) const { return nodes_[static_cast<std::size_t>(id)].val; }
  void backward(Id loss, double seed = 1.0);
  std::size_t node_count() const { return nodes_.size(); }

 private:
  enum class Op : std::uint8_t {
    Leaf, Const, MatMul, MatVec, MatVecT, Add, AddColVec, Mul, Scale,
    Concat, StackRows, StackCols, RowSegment, MeanRows, Sigmoid, Tanh,
    SoftmaxRows, MaskedMaxCols, MaskedMeanCols, SumCols, Dropout,
    BceWithLogits, BceLiteral,
  };

  struct Node {
    Op op;
    std::vector<Id> in;
    Tensor val;
    std::vector<double> grad;
    Tensor* external = nullptr;        // Leaf
    std::vector<std::uint8_t> mask;    // masked reductions / dropout keep mask
    std::vector<std::size_t> idx;      // argmax / row selections / segment coords
    double c = 0.0;                    // Scale factor, dropout scale
    bool flag = false;                 // MatMul transpose_b
    Tensor aux;                        // BCE targets
  };

  Id push(Node n);
  Node& node(Id id) { return nodes_[static_cast<std::size_t>(id)]; }
  const Node& node(Id id) const { return nodes_[static_cast<std::size_t>(id)]; }
  const Tensor& in_val(const Node& n, std::size_t k) const;
  std::vector<double>& in_grad(Node& n, std::size_t k);
  void backward_node(Node& n);

  std::vector<Node> nodes_;
  Rng rng_;
};

}  // namespace scorp
