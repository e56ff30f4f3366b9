#pragma once

#include <memory>
#include <span>
#include <string>
#include <vector>

#include "afra/error.hpp"

namespace afra::numkit {

using Shape = std::vector<int>;

std::size_t shape_numel(const Shape& shape);
std::string shape_str(const Shape& shape);

// Dense row-major fp64 tensor. Copies of a Tensor share storage; ops create
// fresh tensors. Gradient buffers exist only on tensors that require grad.
class Tensor {
 public:
  Tensor() = default;

  static Tensor zeros(Shape shape, bool requires_grad = false);
  static Tensor full(Shape shape, double value, bool requires_grad = false);
  static Tensor from(Shape shape, std::vector<double> values, bool requires_grad = false);
  static Tensor scalar(double value, bool requires_grad = false);

  bool defined() const { return node_ != nullptr; }
  const Shape& shape() const { return node_->shape; }
  int ndim() const { return static_cast<int>(node_->shape.size()); }
  int dim(int i) const { return node_->shape.at(static_cast<std::size_t>(i)); }
  std::size_t numel() const { return node_->value.size(); }

  std::span<double> data() { return node_->value; }
  std::span<const double> data() const { return node_->value; }

  bool requires_grad() const { return node_->requires_grad; }
  std::span<double> grad();
  std::span<const double> grad() const;
  void zero_grad();

  double item() const;
  double grad_item() const;

  bool same_storage(const Tensor& other) const { return node_ == other.node_; }
  const void* id() const { return node_.get(); }

 private:
  struct Node {
    Shape shape;
    std::vector<double> value;
    std::vector<double> grad;
    bool requires_grad = false;
  };
  std::shared_ptr<Node> node_;
};

// Throws NumericError if any element is NaN/Inf.
void check_finite(const Tensor& t, const char* where);

}  // namespace afra::numkit
