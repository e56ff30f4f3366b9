#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "afra/numkit/tape.hpp"
#include "afra/numkit/tensor.hpp"

namespace afra::numkit {

// Every op validates shapes, checks outputs for NaN/Inf, and, when a tape is
// given and an input requires grad, records its backward step.

// [m,k] x [k,n] -> [m,n]; trans flags transpose the corresponding argument.
Tensor matmul(const Tensor& a, const Tensor& b, bool trans_a = false,
              bool trans_b = false, Tape* tape = nullptr);

Tensor add(const Tensor& a, const Tensor& b, Tape* tape = nullptr);
// x[r,w] + row[w] broadcast over rows.
Tensor add_rowwise(const Tensor& x, const Tensor& row, Tape* tape = nullptr);
Tensor mul(const Tensor& a, const Tensor& b, Tape* tape = nullptr);
Tensor scale(const Tensor& x, double factor, Tape* tape = nullptr);
Tensor relu(const Tensor& x, Tape* tape = nullptr);

// Normalized exponentials along `axis`; max-subtraction keeps it stable.
Tensor softmax(const Tensor& x, int axis, Tape* tape = nullptr);

// Per-row zero mean / unit (population) variance over the last axis, then
// affine gain/bias of width d.
Tensor layer_norm(const Tensor& x, const Tensor& gain, const Tensor& bias,
                  double eps, Tape* tape = nullptr);

// Row copies table[id] -> [n,d]; backward scatters into the looked-up rows.
Tensor embedding_lookup(const Tensor& table, std::span<const int> ids,
                        Tape* tape = nullptr);

// Weighted row combination sum_i w_i * table[id_i] -> [1,d].
Tensor embedding_combine(const Tensor& table, std::span<const int> ids,
                         std::span<const double> weights, Tape* tape = nullptr);

// Column-wise concatenation of [r,w_i] blocks -> [r, sum w_i].
Tensor concat_cols(std::span<const Tensor> parts, Tape* tape = nullptr);
Tensor slice_cols(const Tensor& x, int offset, int length, Tape* tape = nullptr);
// Row-wise stack of [r_i, w] blocks -> [sum r_i, w].
Tensor concat_rows(std::span<const Tensor> parts, Tape* tape = nullptr);

// Training: zero with probability `rate`, scale survivors by 1/(1-rate).
// Inference: identity. The mask derives from `seed` alone.
Tensor dropout(const Tensor& x, double rate, bool training, std::uint64_t seed,
               Tape* tape = nullptr);

Tensor sum_all(const Tensor& x, Tape* tape = nullptr);

}  // namespace afra::numkit
