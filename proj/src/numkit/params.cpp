#include "afra/numkit/params.hpp"

namespace afra::numkit {

Tensor ParamSet::add(const std::string& name, Tensor t) {
  for (const Parameter& p : params_) {
    if (p.name == name) throw ConfigError("duplicate parameter name: " + name);
  }
  params_.push_back({name, t});
  return t;
}

Tensor ParamSet::add_normal(const std::string& name, Shape shape, Rng& rng, double stddev) {
  Tensor t = Tensor::zeros(std::move(shape), true);
  for (double& v : t.data()) v = rng.normal(0.0, stddev);
  return add(name, t);
}

Tensor ParamSet::add_const(const std::string& name, Shape shape, double value) {
  return add(name, Tensor::full(std::move(shape), value, true));
}

Tensor ParamSet::find(const std::string& name) const {
  for (const Parameter& p : params_) {
    if (p.name == name) return p.tensor;
  }
  throw ConfigError("unknown parameter: " + name);
}

void ParamSet::zero_grads() {
  for (Parameter& p : params_) p.tensor.zero_grad();
}

std::size_t ParamSet::total_scalars() const {
  std::size_t n = 0;
  for (const Parameter& p : params_) n += p.tensor.numel();
  return n;
}

}  // namespace afra::numkit
