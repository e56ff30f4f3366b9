#include "afra/numkit/tape.hpp"

namespace afra::numkit {

void Tape::backward(Tensor root, double seed) {
  if (root.numel() != 1) throw ShapeError("backward root must be a scalar");
  if (!root.requires_grad()) return;
  root.grad()[0] += seed;
  for (auto it = steps_.rbegin(); it != steps_.rend(); ++it) (*it)();
}

}  // namespace afra::numkit
