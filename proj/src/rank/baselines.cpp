#include "afra/rank/baselines.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <set>

namespace afra::rank {

namespace {

RecommendationList list_from_ids(std::span<const int> ids, std::span<const double> scores,
                                 const data::Catalog& catalog, int serving_day, int k) {
  RecommendationList out;
  const std::size_t take = std::min<std::size_t>(static_cast<std::size_t>(k), ids.size());
  out.items.reserve(take);
  for (std::size_t i = 0; i < take; ++i) {
    const data::Item& it = catalog.item(ids[i]);
    out.items.push_back({it.id, scores[i], std::max(0, serving_day - it.created_day), it.creator});
  }
  return out;
}

}  // namespace

PopularityRanker::PopularityRanker(const data::Catalog& catalog,
                                   std::span<const data::Interaction> train,
                                   data::EntityType target)
    : catalog_(&catalog) {
  counts_.assign(static_cast<std::size_t>(catalog.size()), 0);
  for (const data::Interaction& in : train) {
    if (catalog.item(in.item).entity == target) ++counts_[static_cast<std::size_t>(in.item)];
  }
  for (int id : catalog.ids_of(target)) {
    if (catalog.item(id).available) ranked_.push_back(id);
  }
  std::sort(ranked_.begin(), ranked_.end(), [&](int a, int b) {
    if (counts_[static_cast<std::size_t>(a)] != counts_[static_cast<std::size_t>(b)]) {
      return counts_[static_cast<std::size_t>(a)] > counts_[static_cast<std::size_t>(b)];
    }
    return a < b;
  });
}

long PopularityRanker::count_of(int item_id) const {
  return counts_.at(static_cast<std::size_t>(item_id));
}

RecommendationList PopularityRanker::recommend(const Query& q, int k) const {
  if (k < 1) throw ConfigError("recommend: k must be >= 1");
  std::vector<double> scores;
  scores.reserve(ranked_.size());
  for (int id : ranked_) scores.push_back(static_cast<double>(counts_[static_cast<std::size_t>(id)]));
  return list_from_ids(ranked_, scores, *catalog_, q.serving_day, k);
}

CfKnnRanker::CfKnnRanker(const data::Catalog& catalog, std::span<const data::Interaction> train,
                         data::EntityType target, int n_users)
    : catalog_(&catalog), target_(target), fallback_(catalog, train, target) {
  cols_.resize(static_cast<std::size_t>(catalog.size()));
  rows_.resize(static_cast<std::size_t>(n_users));
  std::vector<std::map<int, double>> col_maps(static_cast<std::size_t>(catalog.size()));
  for (const data::Interaction& in : train) {
    if (catalog.item(in.item).entity != target) continue;
    col_maps[static_cast<std::size_t>(in.item)][in.user] += 1.0;
  }
  norms_.assign(static_cast<std::size_t>(catalog.size()), 0.0);
  for (std::size_t item = 0; item < col_maps.size(); ++item) {
    double sq = 0.0;
    for (const auto& [user, c] : col_maps[item]) {
      cols_[item].emplace_back(user, c);
      if (user >= 0 && static_cast<std::size_t>(user) < rows_.size()) {
        rows_[static_cast<std::size_t>(user)].emplace_back(static_cast<int>(item), c);
      }
      sq += c * c;
    }
    norms_[item] = std::sqrt(sq);
  }
}

double CfKnnRanker::cosine(int item_a, int item_b) const {
  const auto& a = cols_.at(static_cast<std::size_t>(item_a));
  const auto& b = cols_.at(static_cast<std::size_t>(item_b));
  if (a.empty() || b.empty()) return 0.0;
  double dot = 0.0;
  std::size_t i = 0, j = 0;
  while (i < a.size() && j < b.size()) {
    if (a[i].first == b[j].first) {
      dot += a[i].second * b[j].second;
      ++i;
      ++j;
    } else if (a[i].first < b[j].first) {
      ++i;
    } else {
      ++j;
    }
  }
  if (dot == 0.0) return 0.0;
  return dot / (norms_[static_cast<std::size_t>(item_a)] * norms_[static_cast<std::size_t>(item_b)]);
}

RecommendationList CfKnnRanker::recommend(const Query& q, int k) const {
  if (k < 1) throw ConfigError("recommend: k must be >= 1");
  std::set<int> seen;
  for (const data::Interaction& in : q.history) {
    if (catalog_->item(in.item).entity == target_) seen.insert(in.item);
  }
  if (seen.empty()) return fallback_.recommend(q, k);

  // score(o) = sum_{o' in seen} cos(o, o'); expanded through the shared
  // users so only touched rows are visited.
  std::map<int, double> user_acc;
  for (int o : seen) {
    const double n = norms_[static_cast<std::size_t>(o)];
    if (n == 0.0) continue;
    for (const auto& [user, c] : cols_[static_cast<std::size_t>(o)]) user_acc[user] += c / n;
  }
  std::vector<double> scores(static_cast<std::size_t>(catalog_->size()), 0.0);
  for (const auto& [user, acc] : user_acc) {
    if (user < 0 || static_cast<std::size_t>(user) >= rows_.size()) continue;
    for (const auto& [item, c] : rows_[static_cast<std::size_t>(user)]) {
      scores[static_cast<std::size_t>(item)] += c * acc;
    }
  }
  std::vector<int> ids;
  for (int id : catalog_->ids_of(target_)) {
    if (!catalog_->item(id).available || seen.count(id)) continue;
    if (norms_[static_cast<std::size_t>(id)] > 0.0) {
      scores[static_cast<std::size_t>(id)] /= norms_[static_cast<std::size_t>(id)];
    }
    ids.push_back(id);
  }
  const bool all_zero = std::all_of(ids.begin(), ids.end(), [&](int id) {
    return scores[static_cast<std::size_t>(id)] == 0.0;
  });
  if (all_zero) return fallback_.recommend(q, k);
  std::sort(ids.begin(), ids.end(), [&](int a, int b) {
    if (scores[static_cast<std::size_t>(a)] != scores[static_cast<std::size_t>(b)]) {
      return scores[static_cast<std::size_t>(a)] > scores[static_cast<std::size_t>(b)];
    }
    return a < b;
  });
  std::vector<double> top_scores;
  for (int id : ids) top_scores.push_back(scores[static_cast<std::size_t>(id)]);
  return list_from_ids(ids, top_scores, *catalog_, q.serving_day, k);
}

EmbeddingKnnRanker::EmbeddingKnnRanker(const model::AfraModel& embedding_source,
                                       std::span<const data::Interaction> train,
                                       int candidate_pool, int history_articles)
    : catalog_(&embedding_source.embedder().catalog()),
      history_articles_(history_articles),
      fallback_(*catalog_, train, embedding_source.config().target_entity) {
  if (candidate_pool < 1 || history_articles < 1) {
    throw ConfigError("embedding knn: pool and history sizes must be positive");
  }
  const auto& emb = embedding_source.embedder();
  width_ = emb.feature_spec().total_width();

  // Normalized embedding per article, computed once.
  const auto articles = catalog_->ids_of(data::EntityType::article);
  vecs_.assign(static_cast<std::size_t>(catalog_->size()) * width_, 0.0);
  has_vec_.assign(static_cast<std::size_t>(catalog_->size()), 0);
  for (int id : articles) {
    const numkit::Tensor v = emb.embed_item(id);
    double sq = 0.0;
    for (double x : v.data()) sq += x * x;
    if (sq == 0.0) continue;
    const double inv = 1.0 / std::sqrt(sq);
    double* dst = vecs_.data() + static_cast<std::size_t>(id) * width_;
    const auto src = v.data();
    for (int j = 0; j < width_; ++j) dst[j] = src[j] * inv;
    has_vec_[static_cast<std::size_t>(id)] = 1;
  }

  // Newest available outfits, capped at the candidate pool size.
  std::vector<int> outfits;
  for (int id : catalog_->ids_of(data::EntityType::outfit)) {
    if (catalog_->item(id).available) outfits.push_back(id);
  }
  std::sort(outfits.begin(), outfits.end(), [&](int a, int b) {
    if (catalog_->item(a).created_day != catalog_->item(b).created_day) {
      return catalog_->item(a).created_day > catalog_->item(b).created_day;
    }
    return a < b;
  });
  if (static_cast<int>(outfits.size()) > candidate_pool) outfits.resize(static_cast<std::size_t>(candidate_pool));
  candidates_ = std::move(outfits);
}

std::span<const double> EmbeddingKnnRanker::article_vec(int id) const {
  return {vecs_.data() + static_cast<std::size_t>(id) * width_, static_cast<std::size_t>(width_)};
}

RecommendationList EmbeddingKnnRanker::recommend(const Query& q, int k) const {
  if (k < 1) throw ConfigError("recommend: k must be >= 1");
  // Last N article interactions, serving-day actions included.
  std::vector<int> hist;
  auto scan = [&](std::span<const data::Interaction> span) {
    for (const data::Interaction& in : span) {
      if (catalog_->item(in.item).entity == data::EntityType::article &&
          has_vec_[static_cast<std::size_t>(in.item)]) {
        hist.push_back(in.item);
      }
    }
  };
  scan(q.history);
  scan(q.same_day);
  if (hist.empty()) return fallback_.recommend(q, k);
  if (static_cast<int>(hist.size()) > history_articles_) {
    hist.erase(hist.begin(), hist.end() - history_articles_);
  }

  std::vector<int> ids;
  std::vector<double> scores;
  for (int oid : candidates_) {
    const data::Item& outfit = catalog_->item(oid);
    double total = 0.0;
    int counted = 0;
    for (int member : outfit.members) {
      if (!has_vec_[static_cast<std::size_t>(member)]) continue;
      const auto mv = article_vec(member);
      double best = -1.0;
      for (int h : hist) {
        const auto hv = article_vec(h);
        double dot = 0.0;
        for (int j = 0; j < width_; ++j) dot += mv[static_cast<std::size_t>(j)] * hv[static_cast<std::size_t>(j)];
        best = std::max(best, dot);
      }
      total += best;
      ++counted;
    }
    if (counted == 0) continue;
    ids.push_back(oid);
    scores.push_back(total / static_cast<double>(counted));
  }
  if (ids.empty()) return fallback_.recommend(q, k);
  std::vector<std::size_t> order(ids.size());
  for (std::size_t i = 0; i < order.size(); ++i) order[i] = i;
  std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
    if (scores[a] != scores[b]) return scores[a] > scores[b];
    return ids[a] < ids[b];
  });
  std::vector<int> sorted_ids;
  std::vector<double> sorted_scores;
  for (std::size_t i : order) {
    sorted_ids.push_back(ids[i]);
    sorted_scores.push_back(scores[i]);
  }
  return list_from_ids(sorted_ids, sorted_scores, *catalog_, q.serving_day, k);
}

model::ModelConfig sasrec_config(model::ModelConfig base) {
  base.ids_only = true;
  base.use_age_feature = false;
  return base;
}

}  // namespace afra::rank
