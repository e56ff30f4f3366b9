#include "afra/data/synthetic.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <numeric>
#include <set>

#include "afra/rng.hpp"

namespace afra::data {

namespace {

void require(bool ok, const std::string& msg) {
  if (!ok) throw ConfigError("generator config: " + msg);
}

void require_prob(double p, const std::string& name) {
  require(p >= 0.0 && p <= 1.0, name + " must be a probability");
}

struct ClusterFeature {
  std::string name;
  int vocab;
};

// Vocabulary values owned by each cluster, round-robin over a shuffled
// permutation; thin vocabularies share values across clusters.
std::vector<std::vector<int>> make_profiles(int vocab, int clusters, Rng rng) {
  std::vector<int> values(static_cast<std::size_t>(vocab));
  std::iota(values.begin(), values.end(), 0);
  for (int i = vocab - 1; i > 0; --i) {
    std::swap(values[static_cast<std::size_t>(i)], values[rng.below(static_cast<std::uint64_t>(i + 1))]);
  }
  std::vector<std::vector<int>> allowed(static_cast<std::size_t>(clusters));
  for (int i = 0; i < vocab; ++i) allowed[static_cast<std::size_t>(i % clusters)].push_back(values[static_cast<std::size_t>(i)]);
  for (int c = 0; c < clusters; ++c) {
    if (allowed[static_cast<std::size_t>(c)].empty()) {
      allowed[static_cast<std::size_t>(c)].push_back(values[static_cast<std::size_t>(c % vocab)]);
    }
  }
  return allowed;
}

int draw_feature(const std::vector<std::vector<int>>& allowed, int cluster, int vocab,
                 double purity, Rng& rng) {
  if (rng.bernoulli(purity)) {
    const auto& set = allowed[static_cast<std::size_t>(cluster)];
    return set[rng.below(set.size())];
  }
  return static_cast<int>(rng.below(static_cast<std::uint64_t>(vocab)));
}

// Items of one (entity, cluster), permuted so that index order is the
// popularity order; weight_i follows a Zipf curve.
struct Pool {
  std::vector<int> ids;
  std::vector<double> weight;
  std::vector<double> cum;

  void finalize(double zipf_exponent) {
    weight.resize(ids.size());
    cum.resize(ids.size());
    double total = 0.0;
    for (std::size_t i = 0; i < ids.size(); ++i) {
      weight[i] = 1.0 / std::pow(static_cast<double>(i + 1), zipf_exponent);
      total += weight[i];
      cum[i] = total;
    }
  }

  int sample_static(Rng& rng) const {
    const double r = rng.uniform01() * cum.back();
    const auto it = std::upper_bound(cum.begin(), cum.end(), r);
    const std::size_t idx = std::min(static_cast<std::size_t>(it - cum.begin()), ids.size() - 1);
    return ids[idx];
  }
};

struct ActionMixer {
  double p_click, p_wishlist, p_cart;
  ActionType draw(Rng& rng) const {
    const double r = rng.uniform01();
    if (r < p_click) return ActionType::click;
    if (r < p_click + p_wishlist) return ActionType::wishlist;
    if (r < p_click + p_wishlist + p_cart) return ActionType::add_to_cart;
    return ActionType::purchase;
  }
};

}  // namespace

void GenConfig::validate() const {
  require(users > 0 && articles > 0 && outfits > 0 && influencers > 0, "all entity counts must be positive");
  require(horizon_days >= 2, "horizon_days must be >= 2");
  require(clusters >= 1, "clusters must be >= 1");
  require(brand_vocab > 0 && color_vocab > 0 && category_vocab > 0 && material_vocab > 0 &&
              fit_vocab > 0 && pattern_vocab > 0 && price_buckets > 0 && style_vocab > 0,
          "feature vocabularies must be positive");
  require(context_vocabs.country > 0 && context_vocabs.device > 0 && context_vocabs.language > 0 &&
              context_vocabs.market > 0 && context_vocabs.premise > 0,
          "context vocabularies must be positive");
  require(outfit_members_min >= 1 && outfit_members_max >= outfit_members_min, "bad outfit member range");
  require(outfit_members_max <= articles, "outfit members exceed article count");
  require(cold_share >= 0.0 && article_only_share >= 0.0 && cold_share + article_only_share <= 1.0,
          "segment shares must be nonnegative and sum to <= 1");
  require_prob(feature_purity, "feature_purity");
  require_prob(member_purity, "member_purity");
  require_prob(style_purity, "style_purity");
  require_prob(creator_purity, "creator_purity");
  require_prob(market_affinity, "market_affinity");
  require_prob(session_primary, "session_primary");
  require_prob(item_purity, "item_purity");
  require_prob(p_article, "p_article");
  require_prob(p_outfit, "p_outfit");
  require(p_article + p_outfit <= 1.0, "entity mix exceeds 1");
  require(p_click >= 0 && p_wishlist >= 0 && p_cart >= 0 && p_click + p_wishlist + p_cart <= 1.0,
          "action mix exceeds 1");
  require_prob(p_test_prefix, "p_test_prefix");
  require(active_days_min_article >= 1 && active_days_max_article >= active_days_min_article,
          "bad article-only activity range");
  require(active_days_min_outfit >= 1 && active_days_max_outfit >= active_days_min_outfit,
          "bad outfit-history activity range");
  require(active_days_max_article < horizon_days && active_days_max_outfit < horizon_days,
          "activity range exceeds pre-split days");
  require(session_events_min >= 1 && session_events_max >= session_events_min, "bad session event range");
  require(test_prefix_min >= 1 && test_prefix_max >= test_prefix_min, "bad test prefix range");
  require(test_targets_min >= 1 && test_targets_max >= test_targets_min, "bad test target range");
  require(unavailable_frac >= 0.0 && unavailable_frac < 1.0, "unavailable_frac must be in [0,1)");
  require(zipf_exponent >= 0.0, "zipf_exponent must be nonnegative");
  require(age_pop_strength >= 0.0 && fresh_lover_tau > 0.0 && test_day_fresh_boost >= 0.0 &&
              fresh_lover_frac >= 0.0 && fresh_lover_frac <= 1.0,
          "bad age-structure knobs");
}

SyntheticResult generate_synthetic(const GenConfig& cfg, std::uint64_t seed) {
  cfg.validate();
  const Rng master(seed);
  const int split_day = cfg.horizon_days - 1;

  const std::array<ClusterFeature, 6> cluster_features = {{
      {"brand", cfg.brand_vocab},
      {"color", cfg.color_vocab},
      {"category", cfg.category_vocab},
      {"material", cfg.material_vocab},
      {"fit", cfg.fit_vocab},
      {"pattern", cfg.pattern_vocab},
  }};

  std::vector<std::vector<std::vector<int>>> profiles;
  profiles.reserve(cluster_features.size());
  for (std::size_t f = 0; f < cluster_features.size(); ++f) {
    profiles.push_back(make_profiles(cluster_features[f].vocab, cfg.clusters, master.fork(100 + f)));
  }

  SyntheticResult out;
  SyntheticTruth& truth = out.truth;
  Dataset& ds = out.dataset;
  ds.horizon_days = cfg.horizon_days;
  ds.n_users = cfg.users;
  ds.context_vocabs = cfg.context_vocabs;
  ds.feature_vocabs.entries = {
      {"brand", cfg.brand_vocab},     {"color", cfg.color_vocab},
      {"category", cfg.category_vocab}, {"material", cfg.material_vocab},
      {"fit", cfg.fit_vocab},         {"pattern", cfg.pattern_vocab},
      {"influencer", cfg.influencers}, {"style", cfg.style_vocab},
      {"price_bucket", cfg.price_buckets}};

  const int total_items = cfg.articles + cfg.outfits + cfg.influencers;
  std::vector<Item> items;
  items.reserve(static_cast<std::size_t>(total_items));
  truth.item_cluster.assign(static_cast<std::size_t>(total_items), 0);

  // Articles.
  Rng cat_rng = master.fork(200);
  std::vector<std::vector<int>> cluster_articles(static_cast<std::size_t>(cfg.clusters));
  for (int a = 0; a < cfg.articles; ++a) {
    Item it;
    it.id = a;
    it.entity = EntityType::article;
    const int z = static_cast<int>(cat_rng.below(static_cast<std::uint64_t>(cfg.clusters)));
    truth.item_cluster[static_cast<std::size_t>(a)] = z;
    cluster_articles[static_cast<std::size_t>(z)].push_back(a);
    for (std::size_t f = 0; f < cluster_features.size(); ++f) {
      it.features[cluster_features[f].name] =
          draw_feature(profiles[f], z, cluster_features[f].vocab, cfg.feature_purity, cat_rng);
    }
    it.features["price_bucket"] = static_cast<int>(cat_rng.below(static_cast<std::uint64_t>(cfg.price_buckets)));
    it.created_day = 0;
    items.push_back(std::move(it));
  }
  for (auto& v : cluster_articles) {
    if (v.empty()) v.push_back(0);  // degenerate tiny configs
  }

  // Influencer home clusters.
  std::vector<int> influencer_home(static_cast<std::size_t>(cfg.influencers));
  for (int i = 0; i < cfg.influencers; ++i) influencer_home[static_cast<std::size_t>(i)] = i % cfg.clusters;
  std::vector<std::vector<int>> cluster_influencers(static_cast<std::size_t>(cfg.clusters));
  for (int i = 0; i < cfg.influencers; ++i) {
    cluster_influencers[static_cast<std::size_t>(influencer_home[static_cast<std::size_t>(i)])].push_back(i);
  }
  for (auto& v : cluster_influencers) {
    if (v.empty()) v.push_back(0);
  }

  // Outfits.
  Rng outfit_rng = master.fork(300);
  std::vector<std::vector<int>> cluster_outfits(static_cast<std::size_t>(cfg.clusters));
  for (int o = 0; o < cfg.outfits; ++o) {
    Item it;
    it.id = cfg.articles + o;
    it.entity = EntityType::outfit;
    const int z = static_cast<int>(outfit_rng.below(static_cast<std::uint64_t>(cfg.clusters)));
    truth.item_cluster[static_cast<std::size_t>(it.id)] = z;
    cluster_outfits[static_cast<std::size_t>(z)].push_back(it.id);
    const int n_members = outfit_rng.range(cfg.outfit_members_min, cfg.outfit_members_max);
    std::set<int> chosen;
    while (static_cast<int>(chosen.size()) < n_members) {
      int a;
      if (outfit_rng.bernoulli(cfg.member_purity)) {
        const auto& pool = cluster_articles[static_cast<std::size_t>(z)];
        a = pool[outfit_rng.below(pool.size())];
      } else {
        a = static_cast<int>(outfit_rng.below(static_cast<std::uint64_t>(cfg.articles)));
      }
      chosen.insert(a);
    }
    it.members.assign(chosen.begin(), chosen.end());
    if (outfit_rng.bernoulli(cfg.style_purity)) {
      it.features["style"] = z % cfg.style_vocab;
    } else {
      it.features["style"] = static_cast<int>(outfit_rng.below(static_cast<std::uint64_t>(cfg.style_vocab)));
    }
    if (outfit_rng.bernoulli(cfg.creator_purity)) {
      const auto& pool = cluster_influencers[static_cast<std::size_t>(z)];
      it.creator = pool[outfit_rng.below(pool.size())];
    } else {
      it.creator = static_cast<int>(outfit_rng.below(static_cast<std::uint64_t>(cfg.influencers)));
    }
    it.features["influencer"] = it.creator;
    // Part of the catalog exists from day 0, the rest arrives over time.
    it.created_day = outfit_rng.bernoulli(0.3)
                         ? 0
                         : static_cast<int>(outfit_rng.below(static_cast<std::uint64_t>(cfg.horizon_days)));
    it.available = !outfit_rng.bernoulli(cfg.unavailable_frac);
    items.push_back(std::move(it));
  }

  // Influencer entities.
  for (int i = 0; i < cfg.influencers; ++i) {
    Item it;
    it.id = cfg.articles + cfg.outfits + i;
    it.entity = EntityType::influencer;
    it.features["influencer"] = i;
    truth.item_cluster[static_cast<std::size_t>(it.id)] = influencer_home[static_cast<std::size_t>(i)];
    it.created_day = 0;
    items.push_back(std::move(it));
  }

  ds.catalog = Catalog(std::move(items));

  // Popularity pools.
  auto build_pools = [&](const std::vector<std::vector<int>>& per_cluster) {
    std::vector<Pool> pools(per_cluster.size());
    Rng prng = master.fork(400);
    for (std::size_t c = 0; c < per_cluster.size(); ++c) {
      pools[c].ids = per_cluster[c];
      for (std::size_t i = pools[c].ids.size(); i > 1; --i) {
        std::swap(pools[c].ids[i - 1], pools[c].ids[prng.below(i)]);
      }
      pools[c].finalize(cfg.zipf_exponent);
    }
    return pools;
  };
  const std::vector<Pool> article_pools = build_pools(cluster_articles);
  std::vector<std::vector<int>> cluster_influencer_items(static_cast<std::size_t>(cfg.clusters));
  for (int i = 0; i < cfg.influencers; ++i) {
    cluster_influencer_items[static_cast<std::size_t>(influencer_home[static_cast<std::size_t>(i)])]
        .push_back(cfg.articles + cfg.outfits + i);
  }
  for (auto& v : cluster_influencer_items) {
    if (v.empty()) v.push_back(cfg.articles + cfg.outfits);
  }
  const std::vector<Pool> influencer_pools = build_pools(cluster_influencer_items);
  const std::vector<Pool> outfit_pools = build_pools(cluster_outfits);

  const bool age_weighting = cfg.age_pop_strength > 0.0 || cfg.fresh_lover_frac > 0.0 ||
                             cfg.test_day_fresh_boost > 0.0;

  // Outfit draw honoring creation day and the age-structure knobs.
  auto sample_outfit = [&](int cluster, int day, bool fresh_lover, bool test_target, Rng& rng) {
    const Pool& pool = outfit_pools[static_cast<std::size_t>(cluster)];
    auto eligible = [&](int id) {
      const Item& it = ds.catalog.item(id);
      return it.created_day <= day && (!test_target || it.available);
    };
    if (!age_weighting) {
      for (int tries = 0; tries < 32; ++tries) {
        const int id = pool.sample_static(rng);
        if (eligible(id)) return id;
      }
      // Most popular eligible outfit, if any exists yet.
      for (int id : pool.ids) {
        if (eligible(id)) return id;
      }
      return pool.ids.front();
    }
    double total = 0.0;
    std::vector<double> w(pool.ids.size(), 0.0);
    for (std::size_t i = 0; i < pool.ids.size(); ++i) {
      const Item& it = ds.catalog.item(pool.ids[i]);
      if (it.created_day > day) continue;
      if (test_target && !it.available) continue;
      const double age = static_cast<double>(day - it.created_day);
      double wi = pool.weight[i];
      if (cfg.age_pop_strength > 0.0) wi *= std::pow(1.0 + age, cfg.age_pop_strength);
      if (fresh_lover) wi *= std::exp(-age / cfg.fresh_lover_tau);
      if (test_target && cfg.test_day_fresh_boost > 0.0) {
        wi *= std::exp(-age * cfg.test_day_fresh_boost / 21.0);
      }
      w[i] = wi;
      total += wi;
    }
    if (total <= 0.0) {
      for (int id : pool.ids) {
        if (eligible(id)) return id;
      }
      return pool.ids.front();
    }
    double r = rng.uniform01() * total;
    for (std::size_t i = 0; i < w.size(); ++i) {
      r -= w[i];
      if (r <= 0.0) return pool.ids[i];
    }
    return pool.ids.back();
  };

  auto sample_entity_item = [&](EntityType e, int cluster, int day, bool fresh_lover, Rng& rng) {
    switch (e) {
      case EntityType::article:
        return article_pools[static_cast<std::size_t>(cluster)].sample_static(rng);
      case EntityType::outfit:
        return sample_outfit(cluster, day, fresh_lover, false, rng);
      case EntityType::influencer:
        return influencer_pools[static_cast<std::size_t>(cluster)].sample_static(rng);
    }
    throw DataError("bad entity enum");
  };

  const ActionMixer actions{cfg.p_click, cfg.p_wishlist, cfg.p_cart};

  truth.user_cluster.assign(static_cast<std::size_t>(cfg.users), 0);
  truth.user_segment.assign(static_cast<std::size_t>(cfg.users), 0);
  truth.fresh_lover.assign(static_cast<std::size_t>(cfg.users), 0);
  ds.contexts.assign(static_cast<std::size_t>(cfg.users), Context{});

  for (int u = 0; u < cfg.users; ++u) {
    Rng rng = master.fork(0x10000 + static_cast<std::uint64_t>(u));

    const double seg_draw = rng.uniform01();
    const int segment = seg_draw < cfg.cold_share ? 0 : (seg_draw < cfg.cold_share + cfg.article_only_share ? 1 : 2);
    truth.user_segment[static_cast<std::size_t>(u)] = static_cast<std::uint8_t>(segment);

    Context ctx;
    ctx.market = static_cast<int>(rng.below(static_cast<std::uint64_t>(cfg.context_vocabs.market)));
    ctx.device = static_cast<int>(rng.below(static_cast<std::uint64_t>(cfg.context_vocabs.device)));
    ctx.premise = static_cast<int>(rng.below(static_cast<std::uint64_t>(cfg.context_vocabs.premise)));
    ctx.language = static_cast<int>(rng.below(static_cast<std::uint64_t>(cfg.context_vocabs.language)));
    ctx.country = static_cast<int>(rng.below(static_cast<std::uint64_t>(cfg.context_vocabs.country)));
    ds.contexts[static_cast<std::size_t>(u)] = ctx;

    const int market_pref = ctx.market % cfg.clusters;
    const int primary = rng.bernoulli(cfg.market_affinity)
                            ? market_pref
                            : static_cast<int>(rng.below(static_cast<std::uint64_t>(cfg.clusters)));
    truth.user_cluster[static_cast<std::size_t>(u)] = primary;
    const bool fresh_lover = rng.bernoulli(cfg.fresh_lover_frac);
    truth.fresh_lover[static_cast<std::size_t>(u)] = fresh_lover ? 1 : 0;

    auto session_cluster = [&]() {
      return rng.bernoulli(cfg.session_primary)
                 ? primary
                 : static_cast<int>(rng.below(static_cast<std::uint64_t>(cfg.clusters)));
    };
    auto pick_cluster_for_item = [&](int session) {
      return rng.bernoulli(cfg.item_purity)
                 ? session
                 : static_cast<int>(rng.below(static_cast<std::uint64_t>(cfg.clusters)));
    };

    auto emit_day = [&](int day, const std::vector<std::pair<int, ActionType>>& events) {
      std::vector<std::int64_t> offsets(events.size());
      for (auto& off : offsets) off = static_cast<std::int64_t>(rng.below(kSecondsPerDay));
      std::sort(offsets.begin(), offsets.end());
      for (std::size_t i = 0; i < events.size(); ++i) {
        Interaction in;
        in.user = u;
        in.item = events[i].first;
        in.action = events[i].second;
        in.timestamp = static_cast<std::int64_t>(day) * kSecondsPerDay + offsets[i];
        in.day = day;
        ds.interactions.push_back(in);
      }
    };

    // Pre-split history.
    if (segment != 0) {
      const bool outfit_user = segment == 2;
      const int lo = outfit_user ? cfg.active_days_min_outfit : cfg.active_days_min_article;
      const int hi = outfit_user ? cfg.active_days_max_outfit : cfg.active_days_max_article;
      const int n_days = rng.range(lo, hi);
      std::set<int> days;
      while (static_cast<int>(days.size()) < n_days) {
        days.insert(static_cast<int>(rng.below(static_cast<std::uint64_t>(split_day))));
      }
      bool any_outfit = false;
      std::vector<std::pair<int, std::vector<std::pair<int, ActionType>>>> day_events;
      for (int day : days) {
        const int s = session_cluster();
        const int n_events = rng.range(cfg.session_events_min, cfg.session_events_max);
        std::vector<std::pair<int, ActionType>> events;
        for (int e = 0; e < n_events; ++e) {
          EntityType ent = EntityType::article;
          if (outfit_user) {
            const double r = rng.uniform01();
            ent = r < cfg.p_article ? EntityType::article
                                    : (r < cfg.p_article + cfg.p_outfit ? EntityType::outfit
                                                                        : EntityType::influencer);
          }
          if (ent == EntityType::outfit) any_outfit = true;
          const int item = sample_entity_item(ent, pick_cluster_for_item(s), day, fresh_lover, rng);
          events.emplace_back(item, actions.draw(rng));
        }
        day_events.emplace_back(day, std::move(events));
      }
      if (outfit_user && !any_outfit && !day_events.empty()) {
        auto& [day, events] = day_events.back();
        const int s = pick_cluster_for_item(primary);
        events.back().first = sample_outfit(s, day, fresh_lover, false, rng);
      }
      for (auto& [day, events] : day_events) emit_day(day, events);
    }

    // Test day: optional in-session prefix, then target outfit clicks.
    {
      const int day = split_day;
      const int s = session_cluster();
      std::vector<std::pair<int, ActionType>> events;
      std::set<int> used;
      if (rng.bernoulli(cfg.p_test_prefix)) {
        const int n_pre = rng.range(cfg.test_prefix_min, cfg.test_prefix_max);
        for (int e = 0; e < n_pre; ++e) {
          EntityType ent = EntityType::article;
          if (segment == 2 && rng.uniform01() < 0.4) ent = EntityType::outfit;
          const int item = sample_entity_item(ent, pick_cluster_for_item(s), day, fresh_lover, rng);
          used.insert(item);
          events.emplace_back(item, actions.draw(rng));
        }
      }
      const int n_targets = rng.range(cfg.test_targets_min, cfg.test_targets_max);
      for (int t = 0; t < n_targets; ++t) {
        int target = -1;
        for (int tries = 0; tries < 32; ++tries) {
          const int cand = sample_outfit(pick_cluster_for_item(s), day, fresh_lover, true, rng);
          if (!used.count(cand)) {
            target = cand;
            break;
          }
        }
        if (target < 0) break;
        used.insert(target);
        events.emplace_back(target, ActionType::click);
        if (t + 1 < n_targets && rng.bernoulli(0.5)) {
          const int filler = sample_entity_item(EntityType::article, pick_cluster_for_item(s), day, fresh_lover, rng);
          events.emplace_back(filler, actions.draw(rng));
        }
      }
      emit_day(day, events);
    }
  }

  ds.validate();
  return out;
}

}  // namespace afra::data
