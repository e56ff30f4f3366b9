#include "afra/train/trainer.hpp"

#include <chrono>
#include <cmath>
#include <fstream>
#include <numeric>

#include <json.hpp>

#include "afra/numkit/adam.hpp"
#include "afra/train/negatives.hpp"

namespace afra::train {

void TrainConfig::validate(int target_vocab_size) const {
  if (batch_size < 1) throw ConfigError("batch_size must be >= 1");
  if (lr <= 0.0) throw ConfigError("lr must be positive");
  if (epochs < 1) throw ConfigError("epochs must be >= 1");
  if (loss != LossKind::full_ce) {
    if (n_negatives < 1) throw ConfigError("n_negatives must be >= 1 for sampled losses");
    if (n_negatives >= target_vocab_size) {
      throw ConfigError("n_negatives must be smaller than the target vocabulary");
    }
  }
}

std::vector<EpochLog> train(model::AfraModel& m,
                            const std::vector<data::UserSequence>& sequences,
                            int reference_day, const TrainConfig& cfg) {
  cfg.validate(m.target_vocab().size());
  if (sequences.empty()) throw DataError("train: no training sequences");

  numkit::Adam adam({cfg.lr, cfg.adam_beta1, cfg.adam_beta2, cfg.adam_eps});
  Rng order_rng(hash_mix(cfg.seed, 0x0E0C));
  Rng neg_rng(hash_mix(cfg.seed, 0x17EA));
  const int vocab = m.target_vocab().size();

  std::vector<std::size_t> order(sequences.size());
  std::iota(order.begin(), order.end(), 0);

  std::vector<EpochLog> log;
  std::uint64_t step = 0;
  for (int epoch = 1; epoch <= cfg.epochs; ++epoch) {
    const auto t0 = std::chrono::steady_clock::now();
    for (std::size_t i = order.size(); i > 1; --i) {
      std::swap(order[i - 1], order[order_rng.below(i)]);
    }

    double epoch_loss_sum = 0.0;
    std::size_t epoch_mask = 0;
    for (std::size_t start = 0; start < order.size(); start += static_cast<std::size_t>(cfg.batch_size)) {
      const std::size_t end = std::min(order.size(), start + static_cast<std::size_t>(cfg.batch_size));

      // The batch loss is the mean over every masked position in the batch.
      // Per-sequence gradients of the masked-position sums accumulate with
      // seed 1 and are rescaled by 1/M before the optimizer step.
      m.params().zero_grads();
      std::size_t batch_mask = 0;
      double batch_loss = 0.0;
      for (std::size_t b = start; b < end; ++b) {
        const data::UserSequence& seq = sequences[order[b]];
        numkit::Tape tape;
        model::ComposeOptions opts;
        opts.training = true;
        opts.reference_day = reference_day;
        opts.dropout = {cfg.seed, step++, 0};
        auto fwd = m.forward_sequence(seq.interactions, seq.context, opts, &tape);
        const model::ComposedInput& in = fwd.input;
        std::size_t seq_mask = 0;
        for (std::uint8_t bit : in.target_mask) seq_mask += bit;
        if (seq_mask == 0) continue;
        batch_mask += seq_mask;

        numkit::Tensor loss;
        if (cfg.loss == LossKind::full_ce) {
          loss = cross_entropy_loss(fwd.logits, in.target_index, in.target_mask,
                                    Reduction::sum_over_mask, &tape);
        } else {
          std::vector<std::vector<int>> negs(in.target_index.size());
          for (std::size_t p = 0; p < in.target_index.size(); ++p) {
            if (in.target_mask[p]) {
              negs[p] = sample_negatives(vocab, in.target_index[p], cfg.n_negatives, neg_rng);
            }
          }
          loss = sampled_loss(cfg.loss, fwd.logits, in.target_index, negs, in.target_mask,
                              Reduction::sum_over_mask, &tape);
        }
        batch_loss += loss.item();
        tape.backward(loss, 1.0);
      }
      if (batch_mask == 0) continue;
      if (!std::isfinite(batch_loss)) {
        throw NumericError("train: non-finite loss at epoch " + std::to_string(epoch));
      }
      const double inv_mask = 1.0 / static_cast<double>(batch_mask);
      for (auto& p : m.params().items()) {
        for (double& g : p.tensor.grad()) g *= inv_mask;
      }
      adam.step(m.params());
      epoch_loss_sum += batch_loss;
      epoch_mask += batch_mask;
    }

    const auto t1 = std::chrono::steady_clock::now();
    EpochLog e;
    e.epoch = epoch;
    e.loss = epoch_mask ? epoch_loss_sum / static_cast<double>(epoch_mask) : 0.0;
    e.wall_ms = std::chrono::duration<double, std::milli>(t1 - t0).count();
    log.push_back(e);
  }
  return log;
}

void write_train_log(const std::vector<EpochLog>& log, const std::string& path) {
  std::ofstream f(path, std::ios::binary);
  if (!f) throw DataError("cannot open train log for writing: " + path);
  for (const EpochLog& e : log) {
    nlohmann::json j;
    j["epoch"] = e.epoch;
    j["loss"] = e.loss;
    j["wall_ms"] = e.wall_ms;
    f << j.dump() << '\n';
  }
}

}  // namespace afra::train
