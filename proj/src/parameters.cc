#include "inflect/parameters.h"

#include <cmath>

#include "inflect/errors.h"

namespace inflect {

double Rng::Uniform() {
  return static_cast<double>(engine_() >> 11) * 0x1.0p-53;
}

double Rng::Uniform(double lo, double hi) { return lo + (hi - lo) * Uniform(); }

size_t Rng::UniformInt(size_t n) {
  if (n == 0) throw DomainError("UniformInt over an empty range");
  // Rejection sampling keeps the draw unbiased.
  const uint64_t limit = UINT64_MAX - UINT64_MAX % n;
  uint64_t x;
  do {
    x = engine_();
  } while (x >= limit);
  return static_cast<size_t>(x % n);
}

Parameter& ParameterStore::Add(const std::string& name, Tensor init) {
  if (Contains(name)) throw DomainError("duplicate parameter " + name);
  Parameter p;
  p.name = name;
  p.grad = Tensor(init.shape());
  p.first_moment = Tensor(init.shape());
  p.second_moment = Tensor(init.shape());
  p.value = std::move(init);
  return params_.emplace(name, std::move(p)).first->second;
}

Parameter& ParameterStore::Get(const std::string& name) {
  auto it = params_.find(name);
  if (it == params_.end()) throw DomainError("unknown parameter " + name);
  return it->second;
}

const Parameter& ParameterStore::Get(const std::string& name) const {
  auto it = params_.find(name);
  if (it == params_.end()) throw DomainError("unknown parameter " + name);
  return it->second;
}

size_t ParameterStore::NumScalars() const {
  size_t n = 0;
  for (const auto& [name, p] : params_) n += p.value.size();
  return n;
}

void ParameterStore::ZeroGrad() {
  for (auto& [name, p] : params_) {
    p.grad.Fill(0.0);
    p.grad_ready = false;
  }
}

void AdamStep(ParameterStore& store, const AdamOptions& options) {
  bool any_ready = false;
  for (const auto& [name, p] : store) any_ready = any_ready || p.grad_ready;
  if (!any_ready) throw StateError("AdamStep called without gradients");

  for (auto& [name, p] : store) {
    ++p.step;
    const double t = static_cast<double>(p.step);
    const double correction1 = 1.0 - std::pow(options.beta1, t);
    const double correction2 = 1.0 - std::pow(options.beta2, t);
    auto value = p.value.data();
    auto grad = p.grad.data();
    auto m = p.first_moment.data();
    auto v = p.second_moment.data();
    for (size_t i = 0; i < value.size(); ++i) {
      const double g = grad[i];
      m[i] = options.beta1 * m[i] + (1.0 - options.beta1) * g;
      v[i] = options.beta2 * v[i] + (1.0 - options.beta2) * g * g;
      const double m_hat = m[i] / correction1;
      const double v_hat = v[i] / correction2;
      value[i] -= options.learning_rate * m_hat / (std::sqrt(v_hat) + options.epsilon);
      grad[i] = 0.0;
    }
    p.grad_ready = false;
  }
}

double GlobalGradNorm(const ParameterStore& store) {
  double sum = 0.0;
  for (const auto& [name, p] : store) {
    for (double g : p.grad.data()) sum += g * g;
  }
  return std::sqrt(sum);
}

double ClipGradients(ParameterStore& store, double max_norm) {
  const double norm = GlobalGradNorm(store);
  if (norm > max_norm) {
    const double scale = max_norm / norm;
    for (auto& [name, p] : store) {
      for (double& g : p.grad.data()) g *= scale;
    }
  }
  return norm;
}

Tensor GlorotUniform(const Shape& shape, Rng& rng) {
  Tensor out(shape);
  const double fan_out = shape.size() == 2 ? static_cast<double>(shape[0]) : 1.0;
  const double fan_in = static_cast<double>(shape.back());
  const double limit = std::sqrt(6.0 / (fan_in + fan_out));
  for (double& x : out.data()) x = rng.Uniform(-limit, limit);
  return out;
}

}  // namespace inflect
