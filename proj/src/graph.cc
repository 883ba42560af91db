#include "inflect/graph.h"

#include <algorithm>
#include <cmath>
#include <limits>

#include "inflect/errors.h"

namespace inflect {

namespace {

Graph& GraphOf(Var a) {
  if (a.graph == nullptr) throw StateError("Var is not attached to a graph");
  return *a.graph;
}

Graph& SameGraph(Var a, Var b) {
  if (a.graph != b.graph) throw StateError("operands live on different graphs");
  return GraphOf(a);
}

void RequireSameShape(const Tensor& a, const Tensor& b, const char* op) {
  if (a.shape() != b.shape()) {
    throw ShapeError(std::string(op) + ": " + ShapeString(a.shape()) + " vs " +
                     ShapeString(b.shape()));
  }
}

void RequireFinite(const Tensor& t, const char* op) {
  if (!t.AllFinite()) throw NumericError(std::string(op) + " produced a non-finite value");
}

size_t LastAxis(const Tensor& t) { return t.shape().back(); }

template <typename Fn>
Var Unary(Var a, const char* name, Fn fn, Graph::BackwardFn backward) {
  Graph& g = GraphOf(a);
  Tensor out = a.value();
  for (double& x : out.data()) x = fn(x);
  RequireFinite(out, name);
  return g.Record(std::move(out), std::move(backward));
}

}  // namespace

const Tensor& Var::value() const { return GraphOf(*this).value(*this); }

Var Graph::Constant(Tensor value) {
  RequireFinite(value, "constant");
  return Record(std::move(value), nullptr);
}

Var Graph::Param(Parameter& param) {
  auto it = param_nodes_.find(&param);
  if (it != param_nodes_.end()) return Var{this, it->second};
  Node node;
  node.external = &param.value;
  node.param = &param;
  nodes_.push_back(std::move(node));
  const size_t id = nodes_.size() - 1;
  param_nodes_.emplace(&param, id);
  touched_.push_back(&param);
  return Var{this, id};
}

Var Graph::Lookup(Parameter& param, size_t row) {
  const Tensor& table = param.value;
  if (table.rank() != 2) throw ShapeError("Lookup on non-matrix parameter " + param.name);
  const size_t cols = table.cols();
  if (row >= table.rows()) {
    throw ShapeError("row " + std::to_string(row) + " out of range for " + param.name);
  }
  auto begin = table.values().begin() + static_cast<std::ptrdiff_t>(row * cols);
  Tensor out = Tensor::Vector(std::vector<double>(begin, begin + static_cast<std::ptrdiff_t>(cols)));
  if (std::find(touched_.begin(), touched_.end(), &param) == touched_.end()) {
    touched_.push_back(&param);
  }
  Parameter* p = &param;
  return Record(std::move(out), [p, row, cols](Graph& g, size_t self) {
    auto grad = g.Grad(self);
    double* dst = p->grad.data().data() + row * cols;
    for (size_t j = 0; j < cols; ++j) dst[j] += grad[j];
  });
}

const Tensor& Graph::value(Var v) const {
  if (v.graph != this || v.id >= nodes_.size()) throw StateError("stale Var");
  return NodeValue(nodes_[v.id]);
}

Var Graph::Record(Tensor value, BackwardFn backward) {
  Node node;
  node.value = std::move(value);
  node.backward = std::move(backward);
  nodes_.push_back(std::move(node));
  return Var{this, nodes_.size() - 1};
}

std::span<double> Graph::Grad(size_t id) {
  Node& n = nodes_[id];
  if (n.param != nullptr) return n.param->grad.data();
  if (n.grad.empty()) n.grad.assign(NodeValue(n).size(), 0.0);
  return n.grad;
}

bool Graph::HasGrad(size_t id) const {
  const Node& n = nodes_[id];
  return n.param != nullptr || !n.grad.empty();
}

void Graph::Backward(Var loss) {
  if (nodes_.empty() || loss.graph != this || loss.id >= nodes_.size()) {
    throw StateError("Backward without a recorded forward pass");
  }
  if (value(loss).size() != 1) {
    throw ShapeError("Backward expects a scalar loss, got " + ShapeString(value(loss).shape()));
  }
  Grad(loss.id)[0] += 1.0;
  for (size_t id = loss.id + 1; id-- > 0;) {
    Node& n = nodes_[id];
    if (n.backward && !n.grad.empty()) n.backward(*this, id);
  }
  for (Parameter* p : touched_) p->grad_ready = true;
  Clear();
}

void Graph::Clear() {
  nodes_.clear();
  param_nodes_.clear();
  touched_.clear();
}

Var Add(Var a, Var b) {
  Graph& g = SameGraph(a, b);
  const Tensor& av = a.value();
  RequireSameShape(av, b.value(), "add");
  Tensor out = av;
  auto bd = b.value().data();
  auto od = out.data();
  for (size_t i = 0; i < od.size(); ++i) od[i] += bd[i];
  RequireFinite(out, "add");
  return g.Record(std::move(out), [a, b](Graph& g, size_t self) {
    auto grad = g.Grad(self);
    auto ga = g.Grad(a.id);
    for (size_t i = 0; i < grad.size(); ++i) ga[i] += grad[i];
    auto gb = g.Grad(b.id);
    for (size_t i = 0; i < grad.size(); ++i) gb[i] += grad[i];
  });
}

Var Sub(Var a, Var b) {
  Graph& g = SameGraph(a, b);
  const Tensor& av = a.value();
  RequireSameShape(av, b.value(), "sub");
  Tensor out = av;
  auto bd = b.value().data();
  auto od = out.data();
  for (size_t i = 0; i < od.size(); ++i) od[i] -= bd[i];
  RequireFinite(out, "sub");
  return g.Record(std::move(out), [a, b](Graph& g, size_t self) {
    auto grad = g.Grad(self);
    auto ga = g.Grad(a.id);
    for (size_t i = 0; i < grad.size(); ++i) ga[i] += grad[i];
    auto gb = g.Grad(b.id);
    for (size_t i = 0; i < grad.size(); ++i) gb[i] -= grad[i];
  });
}

Var Mul(Var a, Var b) {
  Graph& g = SameGraph(a, b);
  const Tensor& av = a.value();
  RequireSameShape(av, b.value(), "mul");
  Tensor out = av;
  auto bd = b.value().data();
  auto od = out.data();
  for (size_t i = 0; i < od.size(); ++i) od[i] *= bd[i];
  RequireFinite(out, "mul");
  return g.Record(std::move(out), [a, b](Graph& g, size_t self) {
    auto grad = g.Grad(self);
    auto av = g.value(a).data();
    auto bv = g.value(b).data();
    auto ga = g.Grad(a.id);
    for (size_t i = 0; i < grad.size(); ++i) ga[i] += grad[i] * bv[i];
    auto gb = g.Grad(b.id);
    for (size_t i = 0; i < grad.size(); ++i) gb[i] += grad[i] * av[i];
  });
}

Var Scale(Var a, double factor) {
  return Unary(a, "scale", [factor](double x) { return x * factor; },
               [a, factor](Graph& g, size_t self) {
                 auto grad = g.Grad(self);
                 auto ga = g.Grad(a.id);
                 for (size_t i = 0; i < grad.size(); ++i) ga[i] += factor * grad[i];
               });
}

Var Tanh(Var a) {
  return Unary(a, "tanh", [](double x) { return std::tanh(x); },
               [a](Graph& g, size_t self) {
                 auto grad = g.Grad(self);
                 auto y = g.value(Var{&g, self}).data();
                 auto ga = g.Grad(a.id);
                 for (size_t i = 0; i < grad.size(); ++i) ga[i] += grad[i] * (1.0 - y[i] * y[i]);
               });
}

Var Sigmoid(Var a) {
  return Unary(a, "sigmoid",
               [](double x) {
                 if (x >= 0) return 1.0 / (1.0 + std::exp(-x));
                 const double e = std::exp(x);
                 return e / (1.0 + e);
               },
               [a](Graph& g, size_t self) {
                 auto grad = g.Grad(self);
                 auto y = g.value(Var{&g, self}).data();
                 auto ga = g.Grad(a.id);
                 for (size_t i = 0; i < grad.size(); ++i) ga[i] += grad[i] * y[i] * (1.0 - y[i]);
               });
}

Var MatMul(Var a, Var b) {
  Graph& g = SameGraph(a, b);
  const Tensor& av = a.value();
  const Tensor& bv = b.value();
  if (av.rank() != 2 || bv.rank() < 1 || bv.rank() > 2 || av.cols() != bv.shape()[0]) {
    throw ShapeError("matmul: " + ShapeString(av.shape()) + " x " + ShapeString(bv.shape()));
  }
  const size_t m = av.rows();
  const size_t k = av.cols();
  const size_t n = bv.rank() == 2 ? bv.cols() : 1;
  Tensor out(bv.rank() == 2 ? Shape{m, n} : Shape{m});
  const double* A = av.data().data();
  const double* B = bv.data().data();
  double* C = out.data().data();
  if (n == 1) {
    for (size_t i = 0; i < m; ++i) {
      const double* row = A + i * k;
      double s = 0.0;
      for (size_t j = 0; j < k; ++j) s += row[j] * B[j];
      C[i] = s;
    }
  } else {
    for (size_t i = 0; i < m; ++i) {
      for (size_t j = 0; j < k; ++j) {
        const double x = A[i * k + j];
        for (size_t c = 0; c < n; ++c) C[i * n + c] += x * B[j * n + c];
      }
    }
  }
  RequireFinite(out, "matmul");
  return g.Record(std::move(out), [a, b, m, k, n](Graph& g, size_t self) {
    auto grad = g.Grad(self);
    const double* A = g.value(a).data().data();
    const double* B = g.value(b).data().data();
    double* gA = g.Grad(a.id).data();
    double* gB = g.Grad(b.id).data();
    for (size_t i = 0; i < m; ++i) {
      for (size_t c = 0; c < n; ++c) {
        const double d = grad[i * n + c];
        if (d == 0.0) continue;
        for (size_t j = 0; j < k; ++j) {
          gA[i * k + j] += d * B[j * n + c];
          gB[j * n + c] += d * A[i * k + j];
        }
      }
    }
  });
}

Var Concat(std::span<const Var> parts) {
  if (parts.empty()) throw ShapeError("concat of nothing");
  Graph& g = GraphOf(parts[0]);
  std::vector<double> data;
  std::vector<size_t> offsets;
  for (const Var& p : parts) {
    if (p.graph != &g) throw StateError("operands live on different graphs");
    const Tensor& v = p.value();
    if (v.rank() != 1) throw ShapeError("concat expects vectors, got " + ShapeString(v.shape()));
    offsets.push_back(data.size());
    data.insert(data.end(), v.values().begin(), v.values().end());
  }
  std::vector<Var> inputs(parts.begin(), parts.end());
  return g.Record(Tensor::Vector(std::move(data)),
                  [inputs = std::move(inputs), offsets = std::move(offsets)](Graph& g, size_t self) {
                    auto grad = g.Grad(self);
                    for (size_t p = 0; p < inputs.size(); ++p) {
                      auto gp = g.Grad(inputs[p].id);
                      for (size_t i = 0; i < gp.size(); ++i) gp[i] += grad[offsets[p] + i];
                    }
                  });
}

Var StackRows(std::span<const Var> rows) {
  if (rows.empty()) throw ShapeError("stack of nothing");
  Graph& g = GraphOf(rows[0]);
  const size_t cols = rows[0].value().size();
  std::vector<double> data;
  data.reserve(rows.size() * cols);
  for (const Var& r : rows) {
    if (r.graph != &g) throw StateError("operands live on different graphs");
    const Tensor& v = r.value();
    if (v.rank() != 1 || v.size() != cols) {
      throw ShapeError("stack expects equal vectors, got " + ShapeString(v.shape()));
    }
    data.insert(data.end(), v.values().begin(), v.values().end());
  }
  std::vector<Var> inputs(rows.begin(), rows.end());
  return g.Record(Tensor::Matrix(rows.size(), cols, std::move(data)),
                  [inputs = std::move(inputs), cols](Graph& g, size_t self) {
                    auto grad = g.Grad(self);
                    for (size_t r = 0; r < inputs.size(); ++r) {
                      auto gr = g.Grad(inputs[r].id);
                      for (size_t i = 0; i < cols; ++i) gr[i] += grad[r * cols + i];
                    }
                  });
}

Var Slice(Var a, size_t begin, size_t length) {
  Graph& g = GraphOf(a);
  const Tensor& av = a.value();
  if (av.rank() != 1 || length == 0 || begin + length > av.size()) {
    throw ShapeError("slice [" + std::to_string(begin) + ", +" + std::to_string(length) +
                     ") of " + ShapeString(av.shape()));
  }
  auto first = av.values().begin() + static_cast<std::ptrdiff_t>(begin);
  Tensor out = Tensor::Vector(std::vector<double>(first, first + static_cast<std::ptrdiff_t>(length)));
  return g.Record(std::move(out), [a, begin](Graph& g, size_t self) {
    auto grad = g.Grad(self);
    auto ga = g.Grad(a.id);
    for (size_t i = 0; i < grad.size(); ++i) ga[begin + i] += grad[i];
  });
}

Var Mean(std::span<const Var> parts) {
  if (parts.empty()) throw ShapeError("mean of nothing");
  Graph& g = GraphOf(parts[0]);
  Tensor out = parts[0].value();
  for (size_t p = 1; p < parts.size(); ++p) {
    if (parts[p].graph != &g) throw StateError("operands live on different graphs");
    const Tensor& v = parts[p].value();
    RequireSameShape(out, v, "mean");
    for (size_t i = 0; i < out.size(); ++i) out[i] += v[i];
  }
  const double inv = 1.0 / static_cast<double>(parts.size());
  for (double& x : out.data()) x *= inv;
  std::vector<Var> inputs(parts.begin(), parts.end());
  return g.Record(std::move(out), [inputs = std::move(inputs), inv](Graph& g, size_t self) {
    auto grad = g.Grad(self);
    for (const Var& p : inputs) {
      auto gp = g.Grad(p.id);
      for (size_t i = 0; i < gp.size(); ++i) gp[i] += inv * grad[i];
    }
  });
}

Var Sum(Var a) {
  Graph& g = GraphOf(a);
  double s = 0.0;
  for (double x : a.value().data()) s += x;
  Tensor out = Tensor::Scalar(s);
  RequireFinite(out, "sum");
  return g.Record(std::move(out), [a](Graph& g, size_t self) {
    const double d = g.Grad(self)[0];
    for (double& x : g.Grad(a.id)) x += d;
  });
}

Var Pick(Var a, size_t index) {
  Graph& g = GraphOf(a);
  const Tensor& av = a.value();
  if (index >= av.size()) {
    throw ShapeError("pick index " + std::to_string(index) + " outside " + ShapeString(av.shape()));
  }
  return g.Record(Tensor::Scalar(av[index]), [a, index](Graph& g, size_t self) {
    g.Grad(a.id)[index] += g.Grad(self)[0];
  });
}

double LogSumExp(std::span<const double> values) {
  if (values.empty()) throw DomainError("logsumexp over an empty axis");
  const double mx = *std::max_element(values.begin(), values.end());
  if (!std::isfinite(mx)) return mx;
  double s = 0.0;
  for (double v : values) s += std::exp(v - mx);
  return mx + std::log(s);
}

Var Softmax(Var a) {
  Graph& g = GraphOf(a);
  Tensor out = a.value();
  const size_t width = LastAxis(out);
  for (size_t r = 0; r < out.size(); r += width) {
    std::span<double> row = out.data().subspan(r, width);
    const double lse = LogSumExp(row);
    for (double& x : row) x = std::exp(x - lse);
  }
  RequireFinite(out, "softmax");
  return g.Record(std::move(out), [a, width](Graph& g, size_t self) {
    auto grad = g.Grad(self);
    auto y = g.value(Var{&g, self}).data();
    auto ga = g.Grad(a.id);
    for (size_t r = 0; r < grad.size(); r += width) {
      double dot = 0.0;
      for (size_t i = r; i < r + width; ++i) dot += grad[i] * y[i];
      for (size_t i = r; i < r + width; ++i) ga[i] += y[i] * (grad[i] - dot);
    }
  });
}

Var LogSoftmax(Var a) {
  Graph& g = GraphOf(a);
  Tensor out = a.value();
  const size_t width = LastAxis(out);
  for (size_t r = 0; r < out.size(); r += width) {
    std::span<double> row = out.data().subspan(r, width);
    const double lse = LogSumExp(row);
    for (double& x : row) x -= lse;
  }
  RequireFinite(out, "log_softmax");
  return g.Record(std::move(out), [a, width](Graph& g, size_t self) {
    auto grad = g.Grad(self);
    auto y = g.value(Var{&g, self}).data();
    auto ga = g.Grad(a.id);
    for (size_t r = 0; r < grad.size(); r += width) {
      double total = 0.0;
      for (size_t i = r; i < r + width; ++i) total += grad[i];
      for (size_t i = r; i < r + width; ++i) ga[i] += grad[i] - std::exp(y[i]) * total;
    }
  });
}

Var LogSumExp(Var a) {
  Graph& g = GraphOf(a);
  const Tensor& av = a.value();
  if (av.empty()) throw DomainError("logsumexp over an empty axis");
  const size_t width = LastAxis(av);
  const size_t rows = av.size() / width;
  std::vector<double> result(rows);
  for (size_t r = 0; r < rows; ++r) result[r] = LogSumExp(av.data().subspan(r * width, width));
  Tensor out = Tensor::Vector(std::move(result));
  RequireFinite(out, "logsumexp");
  return g.Record(std::move(out), [a, width](Graph& g, size_t self) {
    auto grad = g.Grad(self);
    auto y = g.value(Var{&g, self}).data();
    auto x = g.value(a).data();
    auto ga = g.Grad(a.id);
    for (size_t r = 0; r < grad.size(); ++r) {
      for (size_t i = r * width; i < (r + 1) * width; ++i) {
        ga[i] += grad[r] * std::exp(x[i] - y[r]);
      }
    }
  });
}

Var MaskedLogSoftmaxAt(Var logits, size_t index, std::span<const uint8_t> allowed) {
  Graph& g = GraphOf(logits);
  const Tensor& lv = logits.value();
  if (lv.rank() != 1 || allowed.size() != lv.size() || index >= lv.size()) {
    throw ShapeError("masked log-softmax: logits " + ShapeString(lv.shape()) + ", mask of " +
                     std::to_string(allowed.size()) + ", index " + std::to_string(index));
  }
  if (!allowed[index]) throw DomainError("masked log-softmax picks a masked entry");
  std::vector<double> kept;
  for (size_t i = 0; i < lv.size(); ++i) {
    if (allowed[i]) kept.push_back(lv[i]);
  }
  const double lse = LogSumExp(kept);
  Tensor out = Tensor::Scalar(lv[index] - lse);
  RequireFinite(out, "masked_log_softmax");
  std::vector<uint8_t> mask(allowed.begin(), allowed.end());
  return g.Record(std::move(out), [logits, index, lse, mask = std::move(mask)](Graph& g, size_t self) {
    const double d = g.Grad(self)[0];
    auto x = g.value(logits).data();
    auto gl = g.Grad(logits.id);
    for (size_t i = 0; i < gl.size(); ++i) {
      if (mask[i]) gl[i] -= d * std::exp(x[i] - lse);
    }
    gl[index] += d;
  });
}

Var CrfLogPartition(Var emissions, Var transitions) {
  Graph& g = SameGraph(emissions, transitions);
  const Tensor& ev = emissions.value();
  const Tensor& tv = transitions.value();
  if (ev.rank() != 2 || tv.rank() != 2 || tv.cols() != ev.cols() || tv.rows() != ev.cols() + 1) {
    throw ShapeError("crf: emissions " + ShapeString(ev.shape()) + ", transitions " +
                     ShapeString(tv.shape()));
  }
  const size_t n = ev.rows();
  const size_t labels = ev.cols();
  // alpha[i][m]: log-sum of all prefixes ending in label m at position i.
  std::vector<double> alpha(n * labels);
  std::vector<double> scratch(labels);
  for (size_t m = 0; m < labels; ++m) alpha[m] = tv.at(0, m) + ev.at(0, m);
  for (size_t i = 1; i < n; ++i) {
    for (size_t m = 0; m < labels; ++m) {
      for (size_t p = 0; p < labels; ++p) scratch[p] = alpha[(i - 1) * labels + p] + tv.at(p + 1, m);
      alpha[i * labels + m] = LogSumExp(scratch) + ev.at(i, m);
    }
  }
  const double log_z = LogSumExp(std::span<const double>(alpha).subspan((n - 1) * labels, labels));
  Tensor out = Tensor::Scalar(log_z);
  RequireFinite(out, "crf_log_partition");
  return g.Record(std::move(out), [emissions, transitions, n, labels, log_z,
                                   alpha = std::move(alpha)](Graph& g, size_t self) {
    const double d = g.Grad(self)[0];
    const Tensor& ev = g.value(emissions);
    const Tensor& tv = g.value(transitions);
    std::vector<double> beta(n * labels, 0.0);
    std::vector<double> scratch(labels);
    for (size_t i = n - 1; i-- > 0;) {
      for (size_t p = 0; p < labels; ++p) {
        for (size_t m = 0; m < labels; ++m) {
          scratch[m] = tv.at(p + 1, m) + ev.at(i + 1, m) + beta[(i + 1) * labels + m];
        }
        beta[i * labels + p] = LogSumExp(scratch);
      }
    }
    auto ge = g.Grad(emissions.id);
    auto gt = g.Grad(transitions.id);
    for (size_t i = 0; i < n; ++i) {
      for (size_t m = 0; m < labels; ++m) {
        ge[i * labels + m] += d * std::exp(alpha[i * labels + m] + beta[i * labels + m] - log_z);
      }
    }
    for (size_t m = 0; m < labels; ++m) {
      gt[m] += d * std::exp(alpha[m] + beta[m] - log_z);
    }
    for (size_t i = 1; i < n; ++i) {
      for (size_t p = 0; p < labels; ++p) {
        for (size_t m = 0; m < labels; ++m) {
          const double pair = alpha[(i - 1) * labels + p] + tv.at(p + 1, m) + ev.at(i, m) +
                              beta[i * labels + m] - log_z;
          gt[(p + 1) * labels + m] += d * std::exp(pair);
        }
      }
    }
  });
}

}  // namespace inflect
