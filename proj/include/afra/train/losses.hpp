#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "afra/numkit/ops.hpp"

namespace afra::train {

enum class LossKind { full_ce, sampled_ce, bce, bpr, top1 };

std::string loss_name(LossKind k);
LossKind loss_from_name(const std::string& s);
const std::vector<std::string>& loss_names();

enum class Reduction {
  mean_over_mask,  // divide by the number of masked positions
  sum_over_mask,   // batch loops divide by the batch-wide mask count
};

// -log softmax(logits_row)[target], averaged (or summed) over positions with
// mask 1. Masked-out positions contribute exactly zero loss and gradient.
numkit::Tensor cross_entropy_loss(const numkit::Tensor& logits,
                                  std::span<const int> targets,
                                  std::span<const std::uint8_t> mask,
                                  Reduction reduction = Reduction::mean_over_mask,
                                  numkit::Tape* tape = nullptr);

// Negative-sampling losses over the positive score and the scores of the
// per-position negatives (negatives[p] lists vocab indices; consulted only
// where mask is 1).
numkit::Tensor sampled_loss(LossKind kind, const numkit::Tensor& logits,
                            std::span<const int> targets,
                            std::span<const std::vector<int>> negatives,
                            std::span<const std::uint8_t> mask,
                            Reduction reduction = Reduction::mean_over_mask,
                            numkit::Tape* tape = nullptr);

// Per-position score-level formulas; the ops above reduce these.
double sampled_ce_pair_loss(double pos, std::span<const double> negs);
double bce_pair_loss(double pos, std::span<const double> negs);
double bpr_pair_loss(double pos, std::span<const double> negs);
double top1_pair_loss(double pos, std::span<const double> negs);

}  // namespace afra::train
