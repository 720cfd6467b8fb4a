#include "sentipipe/autodiff.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "sentipipe/errors.hpp"

namespace sentipipe::nn {

namespace {
constexpr double kProbFloor = 1e-12;
constexpr double kInvSqrt2Pi = 0.3989422804014326779399461;
}  // namespace

std::vector<double> softmax(const std::vector<double>& logits) {
  if (logits.empty()) throw InputError("softmax: empty input");
  double maxv = logits[0];
  for (double v : logits) {
    if (!std::isfinite(v)) throw RunError("softmax: non-finite input");
    maxv = std::max(maxv, v);
  }
  std::vector<double> out(logits.size());
  double sum = 0.0;
  for (size_t i = 0; i < logits.size(); ++i) {
    out[i] = std::exp(logits[i] - maxv);
    sum += out[i];
  }
  for (auto& v : out) v /= sum;
  return out;
}

double cross_entropy(const std::vector<double>& probs, size_t gold) {
  if (gold >= probs.size()) {
    throw InputError("cross_entropy: gold index " + std::to_string(gold) +
                     " out of range for " + std::to_string(probs.size()) + " classes");
  }
  return -std::log(std::max(probs[gold], kProbFloor));
}

Tape::Var Tape::push(Tensor val, bool needs_grad, std::function<void(Tape&)> back,
                     Parameter* bound) {
  Node n;
  n.val = std::move(val);
  n.back = std::move(back);
  n.bound = bound;
  n.needs_grad = needs_grad;
  nodes_.push_back(std::move(n));
  return Var{static_cast<int>(nodes_.size()) - 1};
}

Tensor& Tape::grad_of(int id) {
  Node& n = nodes_[id];
  if (n.grad.size() == 0) n.grad = Tensor(n.val.rows, n.val.cols);
  return n.grad;
}

Tape::Var Tape::constant(Tensor v) { return push(std::move(v), false, nullptr); }

Tape::Var Tape::param(Parameter& p) {
  return push(p.value, true, nullptr, &p);
}

Tape::Var Tape::add(Var a, Var b) {
  const Tensor& ta = value(a);
  const Tensor& tb = value(b);
  const bool broadcast = !ta.same_shape(tb);
  if (broadcast && !(tb.rows == 1 && tb.cols == ta.cols)) {
    throw RunError("add shape mismatch: " + ta.shape_str() + " + " + tb.shape_str());
  }
  Tensor out = ta;
  for (size_t i = 0; i < out.rows; ++i) {
    for (size_t j = 0; j < out.cols; ++j) {
      out.at(i, j) += broadcast ? tb.at(0, j) : tb.at(i, j);
    }
  }
  const bool ng = needs(a) || needs(b);
  Var out_var = push(std::move(out), ng, nullptr);
  if (ng) {
    const int id = out_var.id;
    nodes_[id].back = [a, b, broadcast, id](Tape& t) {
      const Tensor& g = t.nodes_[id].grad;
      if (t.needs(a)) {
        Tensor& ga = t.grad_of(a.id);
        for (size_t k = 0; k < g.data.size(); ++k) ga.data[k] += g.data[k];
      }
      if (t.needs(b)) {
        Tensor& gb = t.grad_of(b.id);
        if (broadcast) {
          for (size_t i = 0; i < g.rows; ++i) {
            for (size_t j = 0; j < g.cols; ++j) gb.at(0, j) += g.at(i, j);
          }
        } else {
          for (size_t k = 0; k < g.data.size(); ++k) gb.data[k] += g.data[k];
        }
      }
    };
  }
  return out_var;
}

Tape::Var Tape::mul(Var a, Var b) {
  const Tensor& ta = value(a);
  const Tensor& tb = value(b);
  if (!ta.same_shape(tb)) {
    throw RunError("mul shape mismatch: " + ta.shape_str() + " * " + tb.shape_str());
  }
  Tensor out = ta;
  for (size_t k = 0; k < out.data.size(); ++k) out.data[k] *= tb.data[k];
  const bool ng = needs(a) || needs(b);
  Var v = push(std::move(out), ng, nullptr);
  if (ng) {
    const int id = v.id;
    nodes_[id].back = [a, b, id](Tape& t) {
      const Tensor& g = t.nodes_[id].grad;
      const Tensor& ta = t.value(a);
      const Tensor& tb = t.value(b);
      if (t.needs(a)) {
        Tensor& ga = t.grad_of(a.id);
        for (size_t k = 0; k < g.data.size(); ++k) ga.data[k] += g.data[k] * tb.data[k];
      }
      if (t.needs(b)) {
        Tensor& gb = t.grad_of(b.id);
        for (size_t k = 0; k < g.data.size(); ++k) gb.data[k] += g.data[k] * ta.data[k];
      }
    };
  }
  return v;
}

Tape::Var Tape::scale(Var a, double k) {
  Tensor out = value(a);
  for (auto& x : out.data) x *= k;
  const bool ng = needs(a);
  Var v = push(std::move(out), ng, nullptr);
  if (ng) {
    const int id = v.id;
    nodes_[id].back = [a, k, id](Tape& t) {
      const Tensor& g = t.nodes_[id].grad;
      Tensor& ga = t.grad_of(a.id);
      for (size_t i = 0; i < g.data.size(); ++i) ga.data[i] += k * g.data[i];
    };
  }
  return v;
}

Tape::Var Tape::matmul(Var a, Var b) {
  Tensor out = nn::matmul(value(a), value(b));
  const bool ng = needs(a) || needs(b);
  Var v = push(std::move(out), ng, nullptr);
  if (ng) {
    const int id = v.id;
    nodes_[id].back = [a, b, id](Tape& t) {
      const Tensor& g = t.nodes_[id].grad;
      if (t.needs(a)) {
        const Tensor gb_t = nn::matmul(g, nn::transpose(t.value(b)));
        Tensor& ga = t.grad_of(a.id);
        for (size_t k = 0; k < ga.data.size(); ++k) ga.data[k] += gb_t.data[k];
      }
      if (t.needs(b)) {
        const Tensor ag = nn::matmul(nn::transpose(t.value(a)), g);
        Tensor& gb = t.grad_of(b.id);
        for (size_t k = 0; k < gb.data.size(); ++k) gb.data[k] += ag.data[k];
      }
    };
  }
  return v;
}

Tape::Var Tape::transpose(Var a) {
  Tensor out = nn::transpose(value(a));
  const bool ng = needs(a);
  Var v = push(std::move(out), ng, nullptr);
  if (ng) {
    const int id = v.id;
    nodes_[id].back = [a, id](Tape& t) {
      const Tensor gt = nn::transpose(t.nodes_[id].grad);
      Tensor& ga = t.grad_of(a.id);
      for (size_t k = 0; k < ga.data.size(); ++k) ga.data[k] += gt.data[k];
    };
  }
  return v;
}

Tape::Var Tape::relu(Var a) {
  Tensor out = value(a);
  for (auto& x : out.data) x = x > 0.0 ? x : 0.0;
  const bool ng = needs(a);
  Var v = push(std::move(out), ng, nullptr);
  if (ng) {
    const int id = v.id;
    nodes_[id].back = [a, id](Tape& t) {
      const Tensor& g = t.nodes_[id].grad;
      const Tensor& x = t.value(a);
      Tensor& ga = t.grad_of(a.id);
      for (size_t k = 0; k < g.data.size(); ++k) {
        if (x.data[k] > 0.0) ga.data[k] += g.data[k];
      }
    };
  }
  return v;
}

Tape::Var Tape::tanh_act(Var a) {
  Tensor out = value(a);
  for (auto& x : out.data) x = std::tanh(x);
  const bool ng = needs(a);
  Var v = push(std::move(out), ng, nullptr);
  if (ng) {
    const int id = v.id;
    nodes_[id].back = [a, id](Tape& t) {
      const Tensor& g = t.nodes_[id].grad;
      const Tensor& y = t.nodes_[id].val;
      Tensor& ga = t.grad_of(a.id);
      for (size_t k = 0; k < g.data.size(); ++k) {
        ga.data[k] += g.data[k] * (1.0 - y.data[k] * y.data[k]);
      }
    };
  }
  return v;
}

Tape::Var Tape::sigmoid(Var a) {
  Tensor out = value(a);
  for (auto& x : out.data) x = 1.0 / (1.0 + std::exp(-x));
  const bool ng = needs(a);
  Var v = push(std::move(out), ng, nullptr);
  if (ng) {
    const int id = v.id;
    nodes_[id].back = [a, id](Tape& t) {
      const Tensor& g = t.nodes_[id].grad;
      const Tensor& y = t.nodes_[id].val;
      Tensor& ga = t.grad_of(a.id);
      for (size_t k = 0; k < g.data.size(); ++k) {
        ga.data[k] += g.data[k] * y.data[k] * (1.0 - y.data[k]);
      }
    };
  }
  return v;
}

Tape::Var Tape::gelu(Var a) {
  Tensor out = value(a);
  for (auto& x : out.data) x = 0.5 * x * (1.0 + std::erf(x * M_SQRT1_2));
  const bool ng = needs(a);
  Var v = push(std::move(out), ng, nullptr);
  if (ng) {
    const int id = v.id;
    nodes_[id].back = [a, id](Tape& t) {
      const Tensor& g = t.nodes_[id].grad;
      const Tensor& x = t.value(a);
      Tensor& ga = t.grad_of(a.id);
      for (size_t k = 0; k < g.data.size(); ++k) {
        const double xv = x.data[k];
        const double cdf = 0.5 * (1.0 + std::erf(xv * M_SQRT1_2));
        const double pdf = kInvSqrt2Pi * std::exp(-0.5 * xv * xv);
        ga.data[k] += g.data[k] * (cdf + xv * pdf);
      }
    };
  }
  return v;
}

Tape::Var Tape::softmax_rows(Var a, const std::vector<uint8_t>& keep) {
  const Tensor& ta = value(a);
  if (!keep.empty() && keep.size() != ta.cols) {
    throw RunError("softmax mask length " + std::to_string(keep.size()) +
                   " does not match " + ta.shape_str());
  }
  if (!ta.all_finite()) throw RunError("softmax: non-finite input");
  Tensor out(ta.rows, ta.cols);
  for (size_t i = 0; i < ta.rows; ++i) {
    double maxv = -std::numeric_limits<double>::infinity();
    for (size_t j = 0; j < ta.cols; ++j) {
      if (keep.empty() || keep[j]) maxv = std::max(maxv, ta.at(i, j));
    }
    if (!std::isfinite(maxv)) {
      throw RunError("softmax: row " + std::to_string(i) + " has no unmasked column");
    }
    double sum = 0.0;
    for (size_t j = 0; j < ta.cols; ++j) {
      if (keep.empty() || keep[j]) {
        out.at(i, j) = std::exp(ta.at(i, j) - maxv);
        sum += out.at(i, j);
      }
    }
    for (size_t j = 0; j < ta.cols; ++j) out.at(i, j) /= sum;
  }
  const bool ng = needs(a);
  Var v = push(std::move(out), ng, nullptr);
  if (ng) {
    const int id = v.id;
    nodes_[id].back = [a, id](Tape& t) {
      const Tensor& g = t.nodes_[id].grad;
      const Tensor& y = t.nodes_[id].val;
      Tensor& ga = t.grad_of(a.id);
      for (size_t i = 0; i < y.rows; ++i) {
        double dot = 0.0;
        for (size_t j = 0; j < y.cols; ++j) dot += g.at(i, j) * y.at(i, j);
        for (size_t j = 0; j < y.cols; ++j) {
          ga.at(i, j) += y.at(i, j) * (g.at(i, j) - dot);
        }
      }
    };
  }
  return v;
}

Tape::Var Tape::concat_cols(const std::vector<Var>& parts) {
  if (parts.empty()) throw RunError("concat_cols: empty part list");
  const size_t rows = value(parts[0]).rows;
  size_t cols = 0;
  bool ng = false;
  for (Var p : parts) {
    if (value(p).rows != rows) throw RunError("concat_cols: row mismatch");
    cols += value(p).cols;
    ng = ng || needs(p);
  }
  Tensor out(rows, cols);
  size_t offset = 0;
  for (Var p : parts) {
    const Tensor& tp = value(p);
    for (size_t i = 0; i < rows; ++i) {
      for (size_t j = 0; j < tp.cols; ++j) out.at(i, offset + j) = tp.at(i, j);
    }
    offset += tp.cols;
  }
  Var v = push(std::move(out), ng, nullptr);
  if (ng) {
    const int id = v.id;
    const std::vector<Var> saved = parts;
    nodes_[id].back = [saved, id](Tape& t) {
      const Tensor& g = t.nodes_[id].grad;
      size_t offset = 0;
      for (Var p : saved) {
        const size_t pcols = t.value(p).cols;
        if (t.needs(p)) {
          Tensor& gp = t.grad_of(p.id);
          for (size_t i = 0; i < g.rows; ++i) {
            for (size_t j = 0; j < pcols; ++j) gp.at(i, j) += g.at(i, offset + j);
          }
        }
        offset += pcols;
      }
    };
  }
  return v;
}

Tape::Var Tape::slice_rows(Var a, size_t row_begin, size_t row_end) {
  const Tensor& ta = value(a);
  if (row_begin >= row_end || row_end > ta.rows) {
    throw RunError("slice_rows: bad range [" + std::to_string(row_begin) + "," +
                   std::to_string(row_end) + ") for " + ta.shape_str());
  }
  Tensor out(row_end - row_begin, ta.cols);
  std::copy(ta.data.begin() + static_cast<ptrdiff_t>(row_begin * ta.cols),
            ta.data.begin() + static_cast<ptrdiff_t>(row_end * ta.cols),
            out.data.begin());
  const bool ng = needs(a);
  Var v = push(std::move(out), ng, nullptr);
  if (ng) {
    const int id = v.id;
    nodes_[id].back = [a, row_begin, id](Tape& t) {
      const Tensor& g = t.nodes_[id].grad;
      Tensor& ga = t.grad_of(a.id);
      for (size_t i = 0; i < g.rows; ++i) {
        for (size_t j = 0; j < g.cols; ++j) ga.at(row_begin + i, j) += g.at(i, j);
      }
    };
  }
  return v;
}

Tape::Var Tape::max_over_rows(Var a) {
  const Tensor& ta = value(a);
  if (ta.rows == 0) throw RunError("max_over_rows: empty input");
  Tensor out(1, ta.cols);
  std::vector<size_t> argmax(ta.cols, 0);
  for (size_t j = 0; j < ta.cols; ++j) {
    double best = ta.at(0, j);
    for (size_t i = 1; i < ta.rows; ++i) {
      if (ta.at(i, j) > best) {
        best = ta.at(i, j);
        argmax[j] = i;
      }
    }
    out.at(0, j) = best;
  }
  const bool ng = needs(a);
  Var v = push(std::move(out), ng, nullptr);
  if (ng) {
    const int id = v.id;
    nodes_[id].back = [a, argmax, id](Tape& t) {
      const Tensor& g = t.nodes_[id].grad;
      Tensor& ga = t.grad_of(a.id);
      for (size_t j = 0; j < g.cols; ++j) ga.at(argmax[j], j) += g.at(0, j);
    };
  }
  return v;
}

Tape::Var Tape::gather_rows(Var table, const std::vector<size_t>& ids) {
  const Tensor& tt = value(table);
  Tensor out(ids.size(), tt.cols);
  for (size_t i = 0; i < ids.size(); ++i) {
    if (ids[i] >= tt.rows) {
      throw RunError("gather_rows: id " + std::to_string(ids[i]) +
                     " out of range for " + tt.shape_str());
    }
    std::copy(tt.data.begin() + static_cast<ptrdiff_t>(ids[i] * tt.cols),
              tt.data.begin() + static_cast<ptrdiff_t>((ids[i] + 1) * tt.cols),
              out.data.begin() + static_cast<ptrdiff_t>(i * tt.cols));
  }
  const bool ng = needs(table);
  Var v = push(std::move(out), ng, nullptr);
  if (ng) {
    const int id = v.id;
    const std::vector<size_t> saved = ids;
    nodes_[id].back = [table, saved, id](Tape& t) {
      const Tensor& g = t.nodes_[id].grad;
      Tensor& gt = t.grad_of(table.id);
      for (size_t i = 0; i < saved.size(); ++i) {
        for (size_t j = 0; j < g.cols; ++j) gt.at(saved[i], j) += g.at(i, j);
      }
    };
  }
  return v;
}

Tape::Var Tape::layer_norm_rows(Var a, Var gain, Var bias, double eps) {
  const Tensor& ta = value(a);
  const Tensor& tg = value(gain);
  const Tensor& tb = value(bias);
  if (tg.rows != 1 || tg.cols != ta.cols || tb.rows != 1 || tb.cols != ta.cols) {
    throw RunError("layer_norm: gain/bias must be 1x" + std::to_string(ta.cols));
  }
  Tensor xhat(ta.rows, ta.cols);
  std::vector<double> inv_std(ta.rows);
  Tensor out(ta.rows, ta.cols);
  for (size_t i = 0; i < ta.rows; ++i) {
    double mean = 0.0;
    for (size_t j = 0; j < ta.cols; ++j) mean += ta.at(i, j);
    mean /= static_cast<double>(ta.cols);
    double var = 0.0;
    for (size_t j = 0; j < ta.cols; ++j) {
      const double d = ta.at(i, j) - mean;
      var += d * d;
    }
    var /= static_cast<double>(ta.cols);
    inv_std[i] = 1.0 / std::sqrt(var + eps);
    for (size_t j = 0; j < ta.cols; ++j) {
      xhat.at(i, j) = (ta.at(i, j) - mean) * inv_std[i];
      out.at(i, j) = xhat.at(i, j) * tg.at(0, j) + tb.at(0, j);
    }
  }
  const bool ng = needs(a) || needs(gain) || needs(bias);
  Var v = push(std::move(out), ng, nullptr);
  if (ng) {
    const int id = v.id;
    nodes_[id].back = [a, gain, bias, xhat, inv_std, id](Tape& t) {
      const Tensor& g = t.nodes_[id].grad;
      const Tensor& tg = t.value(gain);
      const size_t cols = g.cols;
      if (t.needs(bias)) {
        Tensor& gb = t.grad_of(bias.id);
        for (size_t i = 0; i < g.rows; ++i) {
          for (size_t j = 0; j < cols; ++j) gb.at(0, j) += g.at(i, j);
        }
      }
      if (t.needs(gain)) {
        Tensor& gg = t.grad_of(gain.id);
        for (size_t i = 0; i < g.rows; ++i) {
          for (size_t j = 0; j < cols; ++j) gg.at(0, j) += g.at(i, j) * xhat.at(i, j);
        }
      }
      if (t.needs(a)) {
        Tensor& ga = t.grad_of(a.id);
        for (size_t i = 0; i < g.rows; ++i) {
          double mean_dxhat = 0.0;
          double mean_dxhat_xhat = 0.0;
          for (size_t j = 0; j < cols; ++j) {
            const double dxhat = g.at(i, j) * tg.at(0, j);
            mean_dxhat += dxhat;
            mean_dxhat_xhat += dxhat * xhat.at(i, j);
          }
          mean_dxhat /= static_cast<double>(cols);
          mean_dxhat_xhat /= static_cast<double>(cols);
          for (size_t j = 0; j < cols; ++j) {
            const double dxhat = g.at(i, j) * tg.at(0, j);
            ga.at(i, j) += inv_std[i] *
                           (dxhat - mean_dxhat - xhat.at(i, j) * mean_dxhat_xhat);
          }
        }
      }
    };
  }
  return v;
}

Tape::Var Tape::dropout(Var a, double p, Rng& rng) {
  if (p < 0.0 || p >= 1.0) throw RunError("dropout probability must lie in [0,1)");
  const Tensor& ta = value(a);
  std::vector<double> mask(ta.size());
  const double keep_scale = 1.0 / (1.0 - p);
  for (auto& m : mask) m = rng.uniform() < p ? 0.0 : keep_scale;
  Tensor out = ta;
  for (size_t k = 0; k < out.data.size(); ++k) out.data[k] *= mask[k];
  const bool ng = needs(a);
  Var v = push(std::move(out), ng, nullptr);
  if (ng) {
    const int id = v.id;
    nodes_[id].back = [a, mask, id](Tape& t) {
      const Tensor& g = t.nodes_[id].grad;
      Tensor& ga = t.grad_of(a.id);
      for (size_t k = 0; k < g.data.size(); ++k) ga.data[k] += g.data[k] * mask[k];
    };
  }
  return v;
}

Tape::Var Tape::cross_entropy_loss(Var probs, size_t gold) {
  const Tensor& tp = value(probs);
  if (tp.rows != 1) throw RunError("cross_entropy_loss expects a 1xK row");
  std::vector<double> row(tp.data.begin(), tp.data.end());
  Tensor out(1, 1);
  out.at(0, 0) = nn::cross_entropy(row, gold);
  const bool ng = needs(probs);
  Var v = push(std::move(out), ng, nullptr);
  if (ng) {
    const int id = v.id;
    nodes_[id].back = [probs, gold, id](Tape& t) {
      const double g = t.nodes_[id].grad.at(0, 0);
      const double p = t.value(probs).at(0, gold);
      if (p >= kProbFloor) {
        t.grad_of(probs.id).at(0, gold) += g * (-1.0 / p);
      }
    };
  }
  return v;
}

Tape::Var Tape::hinge_loss(Var logits, size_t gold, double margin) {
  const Tensor& ts = value(logits);
  if (ts.rows != 1) throw RunError("hinge_loss expects a 1xK row");
  if (gold >= ts.cols) throw InputError("hinge_loss: gold index out of range");
  size_t rival = gold == 0 ? 1 : 0;
  for (size_t j = 0; j < ts.cols; ++j) {
    if (j != gold && ts.at(0, j) > ts.at(0, rival)) rival = j;
  }
  const double violation = ts.at(0, rival) + margin - ts.at(0, gold);
  Tensor out(1, 1);
  out.at(0, 0) = std::max(0.0, violation);
  const bool ng = needs(logits);
  Var v = push(std::move(out), ng, nullptr);
  if (ng && violation > 0.0) {
    const int id = v.id;
    nodes_[id].back = [logits, gold, rival, id](Tape& t) {
      const double g = t.nodes_[id].grad.at(0, 0);
      Tensor& gs = t.grad_of(logits.id);
      gs.at(0, rival) += g;
      gs.at(0, gold) -= g;
    };
  }
  return v;
}

Tape::Var Tape::sum_squares(Var a) {
  const Tensor& ta = value(a);
  Tensor out(1, 1);
  double acc = 0.0;
  for (double x : ta.data) acc += x * x;
  out.at(0, 0) = acc;
  const bool ng = needs(a);
  Var v = push(std::move(out), ng, nullptr);
  if (ng) {
    const int id = v.id;
    nodes_[id].back = [a, id](Tape& t) {
      const double g = t.nodes_[id].grad.at(0, 0);
      const Tensor& x = t.value(a);
      Tensor& ga = t.grad_of(a.id);
      for (size_t k = 0; k < x.data.size(); ++k) ga.data[k] += 2.0 * g * x.data[k];
    };
  }
  return v;
}

Tape::Var Tape::mean(const std::vector<Var>& scalars) {
  if (scalars.empty()) throw RunError("mean: empty input");
  Tensor out(1, 1);
  bool ng = false;
  for (Var s : scalars) {
    if (value(s).size() != 1) throw RunError("mean expects 1x1 inputs");
    out.at(0, 0) += value(s).at(0, 0);
    ng = ng || needs(s);
  }
  out.at(0, 0) /= static_cast<double>(scalars.size());
  Var v = push(std::move(out), ng, nullptr);
  if (ng) {
    const int id = v.id;
    const std::vector<Var> saved = scalars;
    nodes_[id].back = [saved, id](Tape& t) {
      const double g = t.nodes_[id].grad.at(0, 0) / static_cast<double>(saved.size());
      for (Var s : saved) {
        if (t.needs(s)) t.grad_of(s.id).at(0, 0) += g;
      }
    };
  }
  return v;
}

double Tape::scalar(Var v) const {
  const Tensor& t = value(v);
  if (t.size() != 1) throw RunError("scalar() on tensor of shape " + t.shape_str());
  return t.at(0, 0);
}

void Tape::backward(Var loss) {
  if (backward_done_) throw RunError("backward() called twice on one tape");
  backward_done_ = true;
  const Tensor& lt = value(loss);
  if (lt.size() != 1) throw RunError("backward: loss must be 1x1, got " + lt.shape_str());
  grad_of(loss.id).at(0, 0) = 1.0;
  for (int id = loss.id; id >= 0; --id) {
    Node& n = nodes_[id];
    if (!n.needs_grad || n.grad.size() == 0) continue;
    if (n.back) n.back(*this);
    if (n.bound) {
      for (size_t k = 0; k < n.grad.data.size(); ++k) {
        n.bound->grad.data[k] += n.grad.data[k];
      }
    }
  }
}

double GradCheckReport::max_rel_err() const {
  double m = 0.0;
  for (const auto& e : entries) m = std::max(m, e.max_rel_err);
  return m;
}

GradCheckReport grad_check(const LossFn& loss, const std::vector<Parameter*>& params,
                           double epsilon, size_t max_coords_per_tensor,
                           uint64_t coord_seed) {
  for (Parameter* p : params) p->zero_grad();
  const double base = loss(true);
  if (!std::isfinite(base)) throw RunError("grad_check: non-finite loss");

  std::vector<Tensor> analytic;
  analytic.reserve(params.size());
  for (Parameter* p : params) analytic.push_back(p->grad);

  GradCheckReport report;
  for (size_t pi = 0; pi < params.size(); ++pi) {
    Parameter& p = *params[pi];
    std::vector<size_t> coords(p.value.size());
    std::iota(coords.begin(), coords.end(), 0);
    if (coords.size() > max_coords_per_tensor) {
      Rng rng(coord_seed ^ fnv1a64(p.name));
      rng.shuffle(coords);
      coords.resize(max_coords_per_tensor);
    }
    GradCheckEntry entry{p.name, 0.0};
    for (size_t idx : coords) {
      const double orig = p.value.data[idx];
      p.value.data[idx] = orig + epsilon;
      const double up = loss(false);
      p.value.data[idx] = orig - epsilon;
      const double down = loss(false);
      p.value.data[idx] = orig;
      if (!std::isfinite(up) || !std::isfinite(down)) {
        throw RunError("grad_check: non-finite loss during finite differences");
      }
      const double numeric = (up - down) / (2.0 * epsilon);
      const double a = analytic[pi].data[idx];
      const double rel = std::abs(a - numeric) /
                         std::max({std::abs(a), std::abs(numeric), 1e-8});
      entry.max_rel_err = std::max(entry.max_rel_err, rel);
    }
    report.entries.push_back(std::move(entry));
  }
  return report;
}

Tensor glorot_uniform(size_t rows, size_t cols, Rng& rng) {
  Tensor t(rows, cols);
  const double limit = std::sqrt(6.0 / static_cast<double>(rows + cols));
  for (auto& x : t.data) x = rng.uniform(-limit, limit);
  return t;
}

}  // namespace sentipipe::nn
