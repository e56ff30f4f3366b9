#include "afra/train/losses.hpp"

#include <algorithm>
#include <array>
#include <cmath>

namespace afra::train {

using numkit::Tape;
using numkit::Tensor;

std::string loss_name(LossKind k) {
  switch (k) {
    case LossKind::full_ce: return "full-ce";
    case LossKind::sampled_ce: return "sampled-ce";
    case LossKind::bce: return "bce";
    case LossKind::bpr: return "bpr";
    case LossKind::top1: return "top1";
  }
  throw ConfigError("bad loss enum");
}

const std::vector<std::string>& loss_names() {
  static const std::vector<std::string> names = {"full-ce", "sampled-ce", "bce", "bpr", "top1"};
  return names;
}

LossKind loss_from_name(const std::string& s) {
  if (s == "full-ce") return LossKind::full_ce;
  if (s == "sampled-ce") return LossKind::sampled_ce;
  if (s == "bce") return LossKind::bce;
  if (s == "bpr") return LossKind::bpr;
  if (s == "top1") return LossKind::top1;
  std::string all;
  for (const auto& n : loss_names()) all += (all.empty() ? "" : ", ") + n;
  throw ConfigError("unknown loss '" + s + "' (valid: " + all + ")");
}

namespace {

double sigmoid(double x) {
  if (x >= 0.0) return 1.0 / (1.0 + std::exp(-x));
  const double e = std::exp(x);
  return e / (1.0 + e);
}

double softplus(double x) {
  if (x > 30.0) return x;
  if (x < -30.0) return std::exp(x);
  return std::log1p(std::exp(x));
}

std::size_t count_mask(std::span<const std::uint8_t> mask) {
  std::size_t m = 0;
  for (std::uint8_t b : mask) m += b;
  return m;
}

void check_loss_args(const Tensor& logits, std::span<const int> targets,
                     std::span<const std::uint8_t> mask) {
  if (logits.ndim() != 2) throw ShapeError("loss: logits must be [positions, vocab]");
  const std::size_t p = static_cast<std::size_t>(logits.dim(0));
  if (targets.size() != p || mask.size() != p) throw ShapeError("loss: targets/mask length mismatch");
  const int vocab = logits.dim(1);
  for (std::size_t i = 0; i < p; ++i) {
    if (mask[i] && (targets[i] < 0 || targets[i] >= vocab)) {
      throw IndexError("loss: masked position has target outside vocab");
    }
  }
}

}  // namespace

double sampled_ce_pair_loss(double pos, std::span<const double> negs) {
  double mx = pos;
  for (double n : negs) mx = std::max(mx, n);
  double denom = std::exp(pos - mx);
  for (double n : negs) denom += std::exp(n - mx);
  return mx + std::log(denom) - pos;
}

double bce_pair_loss(double pos, std::span<const double> negs) {
  double l = softplus(-pos);
  for (double n : negs) l += softplus(n);
  return l;
}

double bpr_pair_loss(double pos, std::span<const double> negs) {
  double l = 0.0;
  for (double n : negs) l += softplus(n - pos);
  return l / static_cast<double>(negs.size());
}

double top1_pair_loss(double pos, std::span<const double> negs) {
  double l = 0.0;
  for (double n : negs) l += sigmoid(n - pos) + sigmoid(n * n);
  return l / static_cast<double>(negs.size());
}

Tensor cross_entropy_loss(const Tensor& logits, std::span<const int> targets,
                          std::span<const std::uint8_t> mask, Reduction reduction,
                          Tape* tape) {
  check_loss_args(logits, targets, mask);
  const int p = logits.dim(0);
  const int vocab = logits.dim(1);
  const std::size_t m = count_mask(mask);
  const bool rg = tape != nullptr && logits.requires_grad();
  if (m == 0) {
    return Tensor::scalar(0.0, rg);  // no masked positions: zero loss, zero grads
  }
  const double norm = reduction == Reduction::mean_over_mask ? 1.0 / static_cast<double>(m) : 1.0;

  // Softmax rows of masked positions, kept for the backward step.
  std::vector<double> probs(rg ? static_cast<std::size_t>(p) * vocab : 0, 0.0);
  const auto lv = logits.data();
  double total = 0.0;
  for (int i = 0; i < p; ++i) {
    if (!mask[static_cast<std::size_t>(i)]) continue;
    const double* row = lv.data() + static_cast<std::size_t>(i) * vocab;
    double mx = row[0];
    for (int j = 1; j < vocab; ++j) mx = std::max(mx, row[j]);
    double denom = 0.0;
    for (int j = 0; j < vocab; ++j) denom += std::exp(row[j] - mx);
    total += (mx + std::log(denom) - row[targets[static_cast<std::size_t>(i)]]) * norm;
    if (rg) {
      double* prow = probs.data() + static_cast<std::size_t>(i) * vocab;
      for (int j = 0; j < vocab; ++j) prow[j] = std::exp(row[j] - mx) / denom;
    }
  }
  Tensor out = Tensor::scalar(total, rg);
  check_finite(out, "cross_entropy_loss");
  if (rg) {
    std::vector<int> tgt(targets.begin(), targets.end());
    std::vector<std::uint8_t> msk(mask.begin(), mask.end());
    tape->record([logits, out, probs = std::move(probs), tgt = std::move(tgt),
                  msk = std::move(msk), p, vocab, norm]() mutable {
      const double g = out.grad()[0] * norm;
      auto dl = logits.grad();
      for (int i = 0; i < p; ++i) {
        if (!msk[static_cast<std::size_t>(i)]) continue;
        const double* prow = probs.data() + static_cast<std::size_t>(i) * vocab;
        double* drow = dl.data() + static_cast<std::size_t>(i) * vocab;
        for (int j = 0; j < vocab; ++j) drow[j] += g * prow[j];
        drow[tgt[static_cast<std::size_t>(i)]] -= g;
      }
    });
  }
  return out;
}

Tensor sampled_loss(LossKind kind, const Tensor& logits, std::span<const int> targets,
                    std::span<const std::vector<int>> negatives,
                    std::span<const std::uint8_t> mask, Reduction reduction, Tape* tape) {
  if (kind == LossKind::full_ce) throw ConfigError("sampled_loss: full-ce is not a sampled loss");
  check_loss_args(logits, targets, mask);
  const int p = logits.dim(0);
  const int vocab = logits.dim(1);
  if (negatives.size() != static_cast<std::size_t>(p)) throw ShapeError("sampled_loss: negatives length mismatch");
  const std::size_t m = count_mask(mask);
  const bool rg = tape != nullptr && logits.requires_grad();
  if (m == 0) return Tensor::scalar(0.0, rg);
  const double norm = reduction == Reduction::mean_over_mask ? 1.0 / static_cast<double>(m) : 1.0;

  const auto lv = logits.data();
  // (position, vocab index, d loss / d score) triplets for the backward step.
  std::vector<std::array<double, 3>> grads;
  double total = 0.0;
  std::vector<int> ordered;
  for (int i = 0; i < p; ++i) {
    if (!mask[static_cast<std::size_t>(i)]) continue;
    const auto& negs = negatives[static_cast<std::size_t>(i)];
    if (negs.empty()) throw ConfigError("sampled_loss: masked position without negatives");
    const int tgt = targets[static_cast<std::size_t>(i)];
    const double* row = lv.data() + static_cast<std::size_t>(i) * vocab;
    for (int nid : negs) {
      if (nid < 0 || nid >= vocab) throw IndexError("sampled_loss: negative id outside vocab");
    }
    const double pos = row[tgt];
    const double n_inv = 1.0 / static_cast<double>(negs.size());

    switch (kind) {
      case LossKind::sampled_ce: {
        // Sum exp in ascending vocab order so that using every non-target id
        // reproduces the full softmax loss bit for bit.
        ordered.assign(negs.begin(), negs.end());
        ordered.push_back(tgt);
        std::sort(ordered.begin(), ordered.end());
        double mx = row[ordered.front()];
        for (int id : ordered) mx = std::max(mx, row[id]);
        double denom = 0.0;
        for (int id : ordered) denom += std::exp(row[id] - mx);
        total += (mx + std::log(denom) - pos) * norm;
        if (rg) {
          for (int id : ordered) {
            const double soft = std::exp(row[id] - mx) / denom;
            grads.push_back({static_cast<double>(i), static_cast<double>(id), soft});
          }
          grads.push_back({static_cast<double>(i), static_cast<double>(tgt), -1.0});
        }
        break;
      }
      case LossKind::bce: {
        double l = softplus(-pos);
        if (rg) grads.push_back({static_cast<double>(i), static_cast<double>(tgt), sigmoid(pos) - 1.0});
        for (int nid : negs) {
          l += softplus(row[nid]);
          if (rg) grads.push_back({static_cast<double>(i), static_cast<double>(nid), sigmoid(row[nid])});
        }
        total += l * norm;
        break;
      }
      case LossKind::bpr: {
        double l = 0.0;
        double dpos = 0.0;
        for (int nid : negs) {
          const double s = sigmoid(row[nid] - pos);
          l += softplus(row[nid] - pos);
          dpos -= s * n_inv;
          if (rg) grads.push_back({static_cast<double>(i), static_cast<double>(nid), s * n_inv});
        }
        total += l * n_inv * norm;
        if (rg) grads.push_back({static_cast<double>(i), static_cast<double>(tgt), dpos});
        break;
      }
      case LossKind::top1: {
        double l = 0.0;
        double dpos = 0.0;
        for (int nid : negs) {
          const double s1 = sigmoid(row[nid] - pos);
          const double s2 = sigmoid(row[nid] * row[nid]);
          l += s1 + s2;
          const double ds1 = s1 * (1.0 - s1);
          dpos -= ds1 * n_inv;
          if (rg) {
            grads.push_back({static_cast<double>(i), static_cast<double>(nid),
                             (ds1 + s2 * (1.0 - s2) * 2.0 * row[nid]) * n_inv});
          }
        }
        total += l * n_inv * norm;
        if (rg) grads.push_back({static_cast<double>(i), static_cast<double>(tgt), dpos});
        break;
      }
      case LossKind::full_ce:
        break;
    }
  }
  Tensor out = Tensor::scalar(total, rg);
  check_finite(out, "sampled_loss");
  if (rg) {
    tape->record([logits, out, grads = std::move(grads), vocab, norm]() mutable {
      const double g = out.grad()[0] * norm;
      auto dl = logits.grad();
      for (const auto& e : grads) {
        dl[static_cast<std::size_t>(e[0]) * vocab + static_cast<std::size_t>(e[1])] += g * e[2];
      }
    });
  }
  return out;
}

}  // namespace afra::train
