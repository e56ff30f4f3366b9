#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "afra/model/model.hpp"
#include "afra/train/losses.hpp"

namespace afra::train {

struct TrainConfig {
  LossKind loss = LossKind::full_ce;
  int n_negatives = 30;  // sampled losses only
  int batch_size = 64;
  double lr = 0.01;
  int epochs = 3;
  std::uint64_t seed = 1;
  double adam_beta1 = 0.9;
  double adam_beta2 = 0.999;
  double adam_eps = 1e-8;

  void validate(int target_vocab_size) const;
};

struct EpochLog {
  int epoch = 0;
  double loss = 0.0;  // mean loss per masked position over the epoch
  double wall_ms = 0.0;
};

// Shuffled mini-batch training; the loss is averaged over all masked
// positions of a batch. Deterministic for a fixed seed.
std::vector<EpochLog> train(model::AfraModel& m,
                            const std::vector<data::UserSequence>& sequences,
                            int reference_day, const TrainConfig& cfg);

void write_train_log(const std::vector<EpochLog>& log, const std::string& path);

}  // namespace afra::train
