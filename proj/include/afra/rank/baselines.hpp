#pragma once

#include "afra/rank/reranker.hpp"

namespace afra::rank {

// Training-window interaction counts; recommends the same ranking to
// every user.
class PopularityRanker : public Ranker {
 public:
  PopularityRanker(const data::Catalog& catalog, std::span<const data::Interaction> train,
                   data::EntityType target);
  RecommendationList recommend(const Query& q, int k) const override;
  std::string name() const override { return "popularity"; }
  long count_of(int item_id) const;

 private:
  const data::Catalog* catalog_ = nullptr;
  std::vector<long> counts_;   // per catalog id
  std::vector<int> ranked_;    // available target ids, count desc then id asc
};

// Item-based collaborative filtering over the user x item count matrix:
// score(o) = sum over the user's training items o' of cosine(col o, col o'),
// excluding already-interacted items. Users without training interactions
// fall back to popularity.
class CfKnnRanker : public Ranker {
 public:
  CfKnnRanker(const data::Catalog& catalog, std::span<const data::Interaction> train,
              data::EntityType target, int n_users);
  RecommendationList recommend(const Query& q, int k) const override;
  std::string name() const override { return "cf-knn"; }
  // Exposed for the oracle tests.
  double cosine(int item_a, int item_b) const;

 private:
  const data::Catalog* catalog_ = nullptr;
  data::EntityType target_;
  std::vector<std::vector<std::pair<int, double>>> cols_;  // per item: (user, count)
  std::vector<std::vector<std::pair<int, double>>> rows_;  // per user: (item, count)
  std::vector<double> norms_;
  PopularityRanker fallback_;
};

// Content kNN over learned item embeddings: candidates are the most
// recently created available outfits; each scores as the mean over its
// member articles of the best cosine against the user's recent articles.
class EmbeddingKnnRanker : public Ranker {
 public:
  EmbeddingKnnRanker(const model::AfraModel& embedding_source,
                     std::span<const data::Interaction> train, int candidate_pool = 200,
                     int history_articles = 10);
  RecommendationList recommend(const Query& q, int k) const override;
  std::string name() const override { return "cnn-knn"; }
  int candidate_count() const { return static_cast<int>(candidates_.size()); }

 private:
  std::span<const double> article_vec(int id) const;

  const data::Catalog* catalog_ = nullptr;
  int width_ = 0;
  int history_articles_ = 10;
  std::vector<int> candidates_;           // newest first
  std::vector<double> vecs_;              // normalized article embeddings
  std::vector<std::uint8_t> has_vec_;
  PopularityRanker fallback_;
};

// The ids-only configuration: item-id embeddings, no features, context,
// session or action inputs.
model::ModelConfig sasrec_config(model::ModelConfig base);

}  // namespace afra::rank
