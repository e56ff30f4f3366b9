#pragma once

#include <functional>
#include <vector>

#include "afra/numkit/tensor.hpp"

namespace afra::numkit {

// Records backward steps in forward execution order. backward() replays them
// in reverse, which visits every op exactly once with all downstream
// gradients already accumulated.
class Tape {
 public:
  void record(std::function<void()> backward_step) {
    steps_.push_back(std::move(backward_step));
  }

  // Seeds d(root)/d(root) = seed and propagates. root must be a scalar.
  void backward(Tensor root, double seed = 1.0);

  void clear() { steps_.clear(); }
  std::size_t size() const { return steps_.size(); }

 private:
  std::vector<std::function<void()>> steps_;
};

}  // namespace afra::numkit
