#include "afra/rank/reranker.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

namespace afra::rank {

std::string mode_name(ServingMode m) { return m == ServingMode::rt ? "rt" : "batch"; }

ServingMode mode_from_name(const std::string& s) {
  if (s == "rt") return ServingMode::rt;
  if (s == "batch") return ServingMode::batch;
  throw ConfigError("unknown serving mode '" + s + "' (valid: rt, batch)");
}

std::string rerank_name(RerankKind k) {
  switch (k) {
    case RerankKind::none: return "none";
    case RerankKind::decay: return "decay";
    case RerankKind::age_feature: return "age-feature";
  }
  throw ConfigError("bad rerank enum");
}

RerankKind rerank_from_name(const std::string& s) {
  if (s == "none") return RerankKind::none;
  if (s == "decay") return RerankKind::decay;
  if (s == "age-feature") return RerankKind::age_feature;
  throw ConfigError("unknown rerank '" + s + "' (valid: none, decay, age-feature)");
}

RecommendationList topk_available(std::span<const double> scores,
                                  const model::TargetVocab& tvocab,
                                  const data::Catalog& catalog, int serving_day, int k) {
  if (k < 1) throw ConfigError("recommend: k must be >= 1");
  if (scores.size() != static_cast<std::size_t>(tvocab.size())) {
    throw ShapeError("recommend: score vector does not match target vocabulary");
  }
  std::vector<int> idx;
  idx.reserve(scores.size());
  for (int i = 0; i < tvocab.size(); ++i) {
    if (catalog.item(tvocab.id_at(i)).available) idx.push_back(i);
  }
  const auto by_score = [&](int a, int b) {
    if (scores[static_cast<std::size_t>(a)] != scores[static_cast<std::size_t>(b)]) {
      return scores[static_cast<std::size_t>(a)] > scores[static_cast<std::size_t>(b)];
    }
    return tvocab.id_at(a) < tvocab.id_at(b);
  };
  const std::size_t take = std::min<std::size_t>(static_cast<std::size_t>(k), idx.size());
  std::partial_sort(idx.begin(), idx.begin() + static_cast<std::ptrdiff_t>(take), idx.end(), by_score);
  idx.resize(take);

  RecommendationList out;
  out.items.reserve(take);
  for (int i : idx) {
    const data::Item& it = catalog.item(tvocab.id_at(i));
    RecItem r;
    r.id = it.id;
    r.score = scores[static_cast<std::size_t>(i)];
    r.age_days = std::max(0, serving_day - it.created_day);
    r.creator = it.creator;
    out.items.push_back(r);
  }
  return out;
}

RecommendationList age_decay_rerank(const RecommendationList& list, double half_life_days) {
  if (half_life_days <= 0.0) throw ConfigError("age decay: half-life must be positive");
  RecommendationList out = list;
  for (RecItem& r : out.items) {
    if (r.age_days < 0) throw DataError("age decay: negative item age");
    if (r.score < 0.0) throw DataError("age decay: scores must be nonnegative");
    r.score *= std::pow(0.5, static_cast<double>(r.age_days) / half_life_days);
  }
  std::stable_sort(out.items.begin(), out.items.end(), [](const RecItem& a, const RecItem& b) {
    if (a.score != b.score) return a.score > b.score;
    return a.id < b.id;
  });
  return out;
}

AfraRanker::AfraRanker(const model::AfraModel& m, ServingMode mode, RerankPolicy policy)
    : model_(&m), mode_(mode), policy_(policy) {
  if (policy_.kind == RerankKind::age_feature && !m.config().use_age_feature) {
    throw ConfigError("age-feature re-ranking needs a model trained with the age feature");
  }
}

std::string AfraRanker::name() const {
  return "afra-" + mode_name(mode_) +
         (policy_.kind == RerankKind::none ? "" : "+" + rerank_name(policy_.kind));
}

RecommendationList AfraRanker::recommend(const Query& q, int k) const {
  std::vector<data::Interaction> fed;
  fed.reserve(q.history.size() + q.same_day.size());
  for (const data::Interaction& in : q.history) {
    if (mode_ == ServingMode::batch && in.day >= q.serving_day) continue;
    fed.push_back(in);
  }
  if (mode_ == ServingMode::rt) {
    fed.insert(fed.end(), q.same_day.begin(), q.same_day.end());
  }
  const std::vector<double> probs = model_->predict_next(fed, q.context, q.serving_day);
  RecommendationList list = topk_available(probs, model_->target_vocab(),
                                           model_->embedder().catalog(), q.serving_day, k);
  if (policy_.kind == RerankKind::decay) list = age_decay_rerank(list, policy_.half_life_days);
  return list;
}

RecommendationList recommend(const model::AfraModel& m, const Query& q, ServingMode mode,
                             int k, const RerankPolicy& policy) {
  return AfraRanker(m, mode, policy).recommend(q, k);
}

}  // namespace afra::rank
