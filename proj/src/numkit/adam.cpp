#include "afra/numkit/adam.hpp"

#include <cmath>

namespace afra::numkit {

Adam::Adam(AdamConfig cfg) : cfg_(cfg) {
  if (cfg_.lr <= 0.0) throw ConfigError("adam: lr must be positive");
}

void Adam::step(ParamSet& params) {
  auto& items = params.items();
  if (state_.empty()) {
    state_.resize(items.size());
    for (std::size_t i = 0; i < items.size(); ++i) {
      state_[i].m.assign(items[i].tensor.numel(), 0.0);
      state_[i].v.assign(items[i].tensor.numel(), 0.0);
    }
  }
  if (state_.size() != items.size()) throw ShapeError("adam: parameter list changed");
  ++t_;
  const double bc1 = 1.0 - std::pow(cfg_.beta1, static_cast<double>(t_));
  const double bc2 = 1.0 - std::pow(cfg_.beta2, static_cast<double>(t_));
  for (std::size_t i = 0; i < items.size(); ++i) {
    Tensor& w = items[i].tensor;
    if (state_[i].m.size() != w.numel()) throw ShapeError("adam: parameter shape changed");
    auto wv = w.data();
    const auto gv = w.grad();
    auto& m = state_[i].m;
    auto& v = state_[i].v;
    for (std::size_t j = 0; j < wv.size(); ++j) {
      const double g = gv[j];
      m[j] = cfg_.beta1 * m[j] + (1.0 - cfg_.beta1) * g;
      v[j] = cfg_.beta2 * v[j] + (1.0 - cfg_.beta2) * g * g;
      const double mhat = m[j] / bc1;
      const double vhat = v[j] / bc2;
      wv[j] -= cfg_.lr * mhat / (std::sqrt(vhat) + cfg_.eps);
    }
  }
}

}  // namespace afra::numkit
