#include "afra/model/model.hpp"

#include <cmath>

namespace afra::model {

AfraModel AfraModel::create(const ModelConfig& cfg, const data::Catalog& catalog,
                            const data::FeatureVocabs& vocabs,
                            const data::ContextVocabs& ctx_vocabs, std::uint64_t seed) {
  cfg.validate();
  AfraModel m;
  m.cfg_ = cfg;
  m.vocabs_ = vocabs;
  m.ctx_vocabs_ = ctx_vocabs;
  m.tvocab_ = TargetVocab(catalog, cfg.target_entity);
  if (m.tvocab_.size() == 0) throw DataError("catalog has no items of the target entity");
  Rng rng(hash_mix(seed, 0xAF12A));
  m.embedder_ = Embedder::init(m.params_, cfg, catalog, vocabs, ctx_vocabs, m.tvocab_, rng);
  m.encoder_ = Encoder::init(m.params_, cfg.encoder, m.tvocab_.size(), rng);
  return m;
}

AfraModel::ForwardResult AfraModel::forward_sequence(std::span<const data::Interaction> interactions,
                                                     const data::Context& context,
                                                     const ComposeOptions& opts,
                                                     numkit::Tape* tape) const {
  ForwardResult r;
  r.input = embedder_.compose(interactions, context, opts, tape);
  r.logits = encoder_.forward(r.input.vectors, opts.training, opts.dropout, tape);
  return r;
}

std::vector<double> AfraModel::predict_next(std::span<const data::Interaction> history,
                                            const data::Context& context, int serving_day) const {
  const int v = tvocab_.size();
  if (static_cast<int>(history.size()) > cfg_.max_len) {
    history = history.subspan(history.size() - static_cast<std::size_t>(cfg_.max_len));
  }
  if (cfg_.n_context_tokens() == 0 && history.empty()) {
    // Nothing to condition on; score all targets equally.
    return std::vector<double>(static_cast<std::size_t>(v), 1.0 / static_cast<double>(v));
  }
  ComposeOptions opts;
  opts.training = false;
  opts.reference_day = serving_day;
  const ForwardResult r = forward_sequence(history, context, opts, nullptr);
  const int n_pos = r.input.positions();
  const auto logits = r.logits.data();
  const double* last = logits.data() + static_cast<std::size_t>(n_pos - 1) * v;

  std::vector<double> probs(static_cast<std::size_t>(v));
  double mx = last[0];
  for (int i = 1; i < v; ++i) mx = std::max(mx, last[i]);
  double denom = 0.0;
  for (int i = 0; i < v; ++i) {
    probs[static_cast<std::size_t>(i)] = std::exp(last[i] - mx);
    denom += probs[static_cast<std::size_t>(i)];
  }
  for (double& p : probs) p /= denom;
  return probs;
}

}  // namespace afra::model
