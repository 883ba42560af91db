#ifndef INFLECT_PARAMETERS_H_
#define INFLECT_PARAMETERS_H_

#include <cstdint>
#include <map>
#include <random>
#include <string>

#include "inflect/tensor.h"

namespace inflect {

// Seeded generator. Distributions are derived by hand from the raw 64-bit
// stream so sequences do not depend on the standard library vendor.
class Rng {
 public:
  explicit Rng(uint64_t seed) : engine_(seed) {}

  double Uniform();                    // [0, 1)
  double Uniform(double lo, double hi);
  size_t UniformInt(size_t n);         // [0, n)

  template <typename T>
  void Shuffle(std::vector<T>& items) {
    for (size_t i = items.size(); i > 1; --i) {
      std::swap(items[i - 1], items[UniformInt(i)]);
    }
  }

 private:
  std::mt19937_64 engine_;
};

// A trainable array with its gradient and Adam moments.
struct Parameter {
  std::string name;
  Tensor value;
  Tensor grad;
  Tensor first_moment;
  Tensor second_moment;
  uint64_t step = 0;
  bool grad_ready = false;  // set by Graph::Backward, cleared by AdamStep
};

class ParameterStore {
 public:
  ParameterStore() = default;
  ParameterStore(const ParameterStore&) = delete;
  ParameterStore& operator=(const ParameterStore&) = delete;

  // Throws DomainError on a duplicate name.
  Parameter& Add(const std::string& name, Tensor init);
  Parameter& Get(const std::string& name);
  const Parameter& Get(const std::string& name) const;
  bool Contains(const std::string& name) const { return params_.count(name) > 0; }
  size_t size() const { return params_.size(); }
  size_t NumScalars() const;

  void ZeroGrad();

  auto begin() { return params_.begin(); }
  auto end() { return params_.end(); }
  auto begin() const { return params_.begin(); }
  auto end() const { return params_.end(); }

 private:
  // std::map keeps element addresses stable, which Graph relies on.
  std::map<std::string, Parameter> params_;
};

struct AdamOptions {
  double learning_rate = 0.001;
  double beta1 = 0.9;
  double beta2 = 0.999;
  double epsilon = 1e-8;
};

// Bias-corrected Adam over every parameter, then zeroes gradients.
// Throws StateError if no parameter received a gradient since the last step.
void AdamStep(ParameterStore& store, const AdamOptions& options);

double GlobalGradNorm(const ParameterStore& store);

// Rescales all gradients so the global L2 norm is at most max_norm.
// Returns the norm before clipping.
double ClipGradients(ParameterStore& store, double max_norm = 5.0);

// Uniform in +-sqrt(6 / (fan_in + fan_out)). For a matrix fan_out is rows and
// fan_in is columns; a vector is treated as a single row.
Tensor GlorotUniform(const Shape& shape, Rng& rng);

}  // namespace inflect

#endif  // INFLECT_PARAMETERS_H_
