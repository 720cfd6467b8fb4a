#pragma once

#include <functional>
#include <string>
#include <vector>

#include "sentipipe/rng.hpp"
#include "sentipipe/tensor.hpp"

namespace sentipipe::nn {

// Numerically stable softmax (max subtraction). Throws RunError on
// non-finite input.
std::vector<double> softmax(const std::vector<double>& logits);

// -log(probs[gold]) with probs clamped below at 1e-12. Throws InputError
// when gold is out of range.
double cross_entropy(const std::vector<double>& probs, size_t gold);

struct Parameter {
  std::string name;
  Tensor value;
  Tensor grad;

  Parameter() = default;
  Parameter(std::string n, Tensor v)
      : name(std::move(n)), value(std::move(v)), grad(value.rows, value.cols) {}
  void zero_grad() { grad.fill(0.0); }
};

// Reverse-mode tape over a fixed op set. Evaluation is eager; backward()
// walks the recorded nodes in reverse and accumulates into bound Parameters.
// A tape instance belongs to one thread.
class Tape {
 public:
  struct Var {
    int id = -1;
    bool valid() const { return id >= 0; }
  };

  Var constant(Tensor v);
  Var param(Parameter& p);

  // b must match a's shape, or be a 1xC row broadcast over a's rows.
  Var add(Var a, Var b);
  Var mul(Var a, Var b);  // elementwise, same shape
  Var scale(Var a, double k);
  Var matmul(Var a, Var b);
  Var transpose(Var a);
  Var relu(Var a);
  Var tanh_act(Var a);
  Var sigmoid(Var a);
  Var gelu(Var a);
  // Row-wise softmax; when `keep` is non-empty, columns with keep[j]==0 get
  // probability exactly 0 and the row normalizes over kept columns.
  Var softmax_rows(Var a, const std::vector<uint8_t>& keep = {});
  Var concat_cols(const std::vector<Var>& parts);
  Var slice_rows(Var a, size_t row_begin, size_t row_end);
  Var max_over_rows(Var a);  // 1xC column maxima; ties go to the lowest row
  Var gather_rows(Var table, const std::vector<size_t>& ids);
  Var layer_norm_rows(Var a, Var gain, Var bias, double eps = 1e-5);
  // Inverted dropout; callers skip the op entirely in evaluation mode.
  Var dropout(Var a, double p, Rng& rng);
  Var cross_entropy_loss(Var probs /*1xK*/, size_t gold);
  Var hinge_loss(Var logits /*1xK*/, size_t gold, double margin = 1.0);
  Var sum_squares(Var a);
  Var mean(const std::vector<Var>& scalars);

  const Tensor& value(Var v) const { return nodes_[v.id].val; }
  double scalar(Var v) const;

  // Seeds d(loss)/d(loss)=1 and accumulates gradients into every bound
  // Parameter. `loss` must be 1x1. May be called once per tape.
  void backward(Var loss);

  size_t node_count() const { return nodes_.size(); }

 private:
  struct Node {
    Tensor val;
    Tensor grad;  // allocated lazily during backward
    std::function<void(Tape&)> back;
    Parameter* bound = nullptr;
    bool needs_grad = false;
  };

  Var push(Tensor val, bool needs_grad, std::function<void(Tape&)> back,
           Parameter* bound = nullptr);
  Tensor& grad_of(int id);
  bool needs(Var v) const { return nodes_[v.id].needs_grad; }

  std::vector<Node> nodes_;
  bool backward_done_ = false;

  friend struct TapeTestAccess;
};

struct GradCheckEntry {
  std::string param;
  double max_rel_err = 0.0;
};

struct GradCheckReport {
  std::vector<GradCheckEntry> entries;
  double max_rel_err() const;
  bool pass(double threshold) const { return max_rel_err() < threshold; }
};

// Loss closure: recomputes the scalar loss from the current parameter
// values; when with_grad is true it must also run backward so gradients land
// in the parameters. grad_check compares those gradients against central
// finite differences. Tensors larger than max_coords_per_tensor are sampled
// (without replacement, deterministically).
using LossFn = std::function<double(bool with_grad)>;

GradCheckReport grad_check(const LossFn& loss, const std::vector<Parameter*>& params,
                           double epsilon = 1e-5, size_t max_coords_per_tensor = 200,
                           uint64_t coord_seed = 0x5eed);

// Glorot-style uniform init in +/- sqrt(6/(fan_in+fan_out)).
Tensor glorot_uniform(size_t rows, size_t cols, Rng& rng);

}  // namespace sentipipe::nn
