#pragma once

#include <string>
#include <vector>

#include "afra/numkit/tensor.hpp"
#include "afra/rng.hpp"

namespace afra::numkit {

struct Parameter {
  std::string name;
  Tensor tensor;
};

// Named trainable tensors in fixed creation order; the optimizer and the
// checkpoint writer iterate this order.
class ParamSet {
 public:
  Tensor add_normal(const std::string& name, Shape shape, Rng& rng, double stddev);
  Tensor add_const(const std::string& name, Shape shape, double value);

  std::vector<Parameter>& items() { return params_; }
  const std::vector<Parameter>& items() const { return params_; }

  Tensor find(const std::string& name) const;

  void zero_grads();
  std::size_t total_scalars() const;

 private:
  Tensor add(const std::string& name, Tensor t);
  std::vector<Parameter> params_;
};

}  // namespace afra::numkit
