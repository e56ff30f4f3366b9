#include "afra/numkit/tensor.hpp"

#include <cmath>
#include <sstream>
#include <utility>

namespace afra::numkit {

std::size_t shape_numel(const Shape& shape) {
  std::size_t n = 1;
  for (int d : shape) {
    if (d < 0) throw ShapeError("negative dimension in shape " + shape_str(shape));
    n *= static_cast<std::size_t>(d);
  }
  return n;
}

std::string shape_str(const Shape& shape) {
  std::ostringstream os;
  os << '[';
  for (std::size_t i = 0; i < shape.size(); ++i) {
    if (i) os << ',';
    os << shape[i];
  }
  os << ']';
  return os.str();
}

Tensor Tensor::zeros(Shape shape, bool requires_grad) {
  return full(std::move(shape), 0.0, requires_grad);
}

Tensor Tensor::full(Shape shape, double value, bool requires_grad) {
  Tensor t;
  t.node_ = std::make_shared<Node>();
  const std::size_t n = shape_numel(shape);
  t.node_->shape = std::move(shape);
  t.node_->value.assign(n, value);
  t.node_->requires_grad = requires_grad;
  if (requires_grad) t.node_->grad.assign(n, 0.0);
  return t;
}

Tensor Tensor::from(Shape shape, std::vector<double> values, bool requires_grad) {
  if (shape_numel(shape) != values.size()) {
    throw ShapeError("value count does not match shape " + shape_str(shape));
  }
  Tensor t;
  t.node_ = std::make_shared<Node>();
  t.node_->shape = std::move(shape);
  t.node_->value = std::move(values);
  t.node_->requires_grad = requires_grad;
  if (requires_grad) t.node_->grad.assign(t.node_->value.size(), 0.0);
  return t;
}

Tensor Tensor::scalar(double value, bool requires_grad) {
  return from({1}, {value}, requires_grad);
}

std::span<double> Tensor::grad() {
  if (!node_->requires_grad) throw ShapeError("grad() on tensor without grad");
  return node_->grad;
}

std::span<const double> Tensor::grad() const {
  if (!node_->requires_grad) throw ShapeError("grad() on tensor without grad");
  return node_->grad;
}

void Tensor::zero_grad() {
  if (node_->requires_grad) std::fill(node_->grad.begin(), node_->grad.end(), 0.0);
}

double Tensor::item() const {
  if (numel() != 1) throw ShapeError("item() on non-scalar " + shape_str(shape()));
  return node_->value[0];
}

double Tensor::grad_item() const {
  if (numel() != 1) throw ShapeError("grad_item() on non-scalar " + shape_str(shape()));
  return grad()[0];
}

void check_finite(const Tensor& t, const char* where) {
  for (double v : t.data()) {
    if (!std::isfinite(v)) {
      throw NumericError(std::string(where) + ": non-finite value in output");
    }
  }
}

}  // namespace afra::numkit
