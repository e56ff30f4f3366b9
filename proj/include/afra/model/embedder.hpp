#pragma once

#include <optional>

#include "afra/data/dataset.hpp"
#include "afra/model/common.hpp"
#include "afra/model/encoder.hpp"
#include "afra/model/feature_spec.hpp"
#include "afra/model/target_vocab.hpp"
#include "afra/numkit/ops.hpp"
#include "afra/numkit/params.hpp"

namespace afra::model {

struct ModelConfig {
  EncoderConfig encoder;
  int feature_emb_width = 8;
  int session_emb_width = 8;
  int age_emb_width = 8;
  int id_emb_width = 32;
  int max_len = 100;
  int recency_clip_days = 60;  // recency/gap/age buckets: one per day, clipped
  bool use_positional = true;
  bool ids_only = false;        // item-id inputs only: no features, context,
                                // session or action encoding
  bool use_age_feature = false;
  data::EntityType target_entity = data::EntityType::outfit;
  double init_std = 0.02;

  void validate() const;
  int n_context_tokens() const { return ids_only ? 0 : 5; }
};

// Per-position model inputs for one user: context tokens first, then one
// projected row per interaction.
struct ComposedInput {
  numkit::Tensor vectors;             // [positions, d_model]
  std::vector<int> item_ids;          // -1 at context positions
  std::vector<int> target_index;      // target-vocab index of next item, -1 none
  std::vector<std::uint8_t> target_mask;  // 1 iff next item should be predicted
  std::vector<int> recency;           // whole days, 0 at context positions
  std::vector<int> time_gap;          // whole days, 0 at context positions
  int n_context = 0;

  int positions() const { return static_cast<int>(item_ids.size()); }
};

struct ComposeOptions {
  bool training = false;  // training uses real time gaps and item ages;
                          // inference forces both to bucket 0
  int reference_day = 0;  // recency reference (train or serving day)
  DropoutCtx dropout;
};

// Turns catalog items, actions and session timing into model input rows.
class Embedder {
 public:
  Embedder() = default;
  static Embedder init(numkit::ParamSet& params, const ModelConfig& cfg,
                       const data::Catalog& catalog, const data::FeatureVocabs& vocabs,
                       const data::ContextVocabs& ctx_vocabs, const TargetVocab& tvocab,
                       Rng& rng);

  ComposedInput compose(std::span<const data::Interaction> interactions,
                        const data::Context& context, const ComposeOptions& opts,
                        numkit::Tape* tape) const;

  // Feature-concatenation vector of one item, [1, total feature width].
  numkit::Tensor embed_item(int item_id, numkit::Tape* tape = nullptr) const;
  // Member-mean block of one feature for a composite item.
  numkit::Tensor embed_composite_feature(int item_id, const std::string& feature,
                                         numkit::Tape* tape = nullptr) const;
  numkit::Tensor action_encoding(data::ActionType action) const;
  // Recency+gap embedding pair for one interaction.
  numkit::Tensor session_encoding(const data::Interaction& interaction, int reference_day,
                                  std::optional<std::int64_t> next_timestamp,
                                  numkit::Tape* tape = nullptr) const;
  std::vector<numkit::Tensor> context_tokens(const data::Context& context,
                                             numkit::Tape* tape = nullptr) const;

  const FeatureSpec& feature_spec() const { return spec_; }
  int input_width() const { return input_width_; }
  int age_bucket(int item_id, int day) const;
  const data::Catalog& catalog() const { return *catalog_; }
  int catalog_size() const { return catalog_->size(); }

 private:
  struct DefIndex {
    std::vector<int> ids;
    std::vector<double> weights;
    std::vector<double> one_hot;  // constant block for one-hot defs
  };

  numkit::Tensor feature_block(int item_id, std::size_t def_idx, numkit::Tape* tape) const;

  const data::Catalog* catalog_ = nullptr;
  ModelConfig cfg_;
  FeatureSpec spec_;
  std::vector<numkit::Tensor> tables_;  // per def; undefined for one-hot defs
  numkit::Tensor recency_table_, gap_table_;
  numkit::Tensor ctx_country_, ctx_device_, ctx_language_, ctx_market_, ctx_premise_;
  numkit::Tensor proj_w_, proj_b_;
  numkit::Tensor pos_table_;
  std::vector<std::vector<DefIndex>> item_index_;  // [item][def]
  int input_width_ = 0;
  data::ContextVocabs ctx_vocabs_;
  const TargetVocab* tvocab_ = nullptr;
};

}  // namespace afra::model
