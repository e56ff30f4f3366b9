#pragma once

#include <vector>

#include "afra/numkit/params.hpp"

namespace afra::numkit {

struct AdamConfig {
  double lr = 1e-2;
  double beta1 = 0.9;
  double beta2 = 0.999;
  double eps = 1e-8;
};

// Adam with bias correction. State vectors are keyed by parameter position,
// so the parameter list must not change between steps.
class Adam {
 public:
  explicit Adam(AdamConfig cfg);

  void step(ParamSet& params);
  long steps_taken() const { return t_; }

 private:
  struct Moments {
    std::vector<double> m;
    std::vector<double> v;
  };
  AdamConfig cfg_;
  std::vector<Moments> state_;
  long t_ = 0;
};

}  // namespace afra::numkit
