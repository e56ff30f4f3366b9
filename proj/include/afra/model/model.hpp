#pragma once

#include <string>

#include "afra/model/embedder.hpp"

namespace afra::model {

// Embedder + encoder + target vocabulary with shared parameter storage.
class AfraModel {
 public:
  AfraModel() = default;
  static AfraModel create(const ModelConfig& cfg, const data::Catalog& catalog,
                          const data::FeatureVocabs& vocabs,
                          const data::ContextVocabs& ctx_vocabs, std::uint64_t seed);

  const ModelConfig& config() const { return cfg_; }
  numkit::ParamSet& params() { return params_; }
  const numkit::ParamSet& params() const { return params_; }
  const Embedder& embedder() const { return embedder_; }
  const Encoder& encoder() const { return encoder_; }
  const TargetVocab& target_vocab() const { return tvocab_; }
  const data::FeatureVocabs& feature_vocabs() const { return vocabs_; }
  const data::ContextVocabs& context_vocabs() const { return ctx_vocabs_; }

  struct ForwardResult {
    ComposedInput input;
    numkit::Tensor logits;  // [positions, |target vocab|]
  };
  ForwardResult forward_sequence(std::span<const data::Interaction> interactions,
                                 const data::Context& context, const ComposeOptions& opts,
                                 numkit::Tape* tape) const;

  // Probability over the target vocabulary for the next interaction, from
  // the last position. History is truncated to the configured max length.
  std::vector<double> predict_next(std::span<const data::Interaction> history,
                                   const data::Context& context, int serving_day) const;

  void save(const std::string& path) const;
  static AfraModel load(const std::string& path, const data::Catalog& catalog);

 private:
  friend AfraModel checkpoint_restore(const ModelConfig&, const data::Catalog&,
                                      const data::FeatureVocabs&, const data::ContextVocabs&,
                                      std::vector<int> target_ids);
  ModelConfig cfg_;
  data::FeatureVocabs vocabs_;
  data::ContextVocabs ctx_vocabs_;
  numkit::ParamSet params_;
  TargetVocab tvocab_;
  Embedder embedder_;
  Encoder encoder_;
};

}  // namespace afra::model
