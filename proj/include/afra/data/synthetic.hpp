#pragma once

#include <cstdint>

#include "afra/data/dataset.hpp"

namespace afra::data {

// Synthetic interaction-log generator. Users carry a latent style cluster
// shared across entity types (articles predict outfits), sessions stay on
// one cluster per day, cluster preference is conditioned on market, and
// outfit creation days are staggered so recommendation age is measurable.
struct GenConfig {
  int users = 10000;
  int articles = 20000;
  int outfits = 2000;
  int influencers = 50;
  int horizon_days = 60;
  int clusters = 8;

  int brand_vocab = 50;
  int color_vocab = 20;
  int category_vocab = 25;
  int material_vocab = 15;
  int fit_vocab = 5;
  int pattern_vocab = 10;
  int price_buckets = 6;
  int style_vocab = 8;

  ContextVocabs context_vocabs{.country = 10, .device = 3, .language = 8, .market = 6, .premise = 2};

  // User segment mix: no history / article-only history / outfit history.
  double cold_share = 0.23;
  double article_only_share = 0.31;

  int outfit_members_min = 2;
  int outfit_members_max = 6;

  // Planted-structure strengths, each the probability of following the
  // cluster rule instead of a uniform draw.
  double feature_purity = 0.80;
  double member_purity = 0.90;
  double style_purity = 0.90;
  double creator_purity = 0.80;
  double market_affinity = 0.75;
  double session_primary = 0.55;
  double item_purity = 0.85;

  int active_days_min_article = 2;
  int active_days_max_article = 8;
  int active_days_min_outfit = 4;
  int active_days_max_outfit = 12;
  int session_events_min = 2;
  int session_events_max = 5;

  // Session entity mix for users with outfit history; remainder influencer.
  double p_article = 0.65;
  double p_outfit = 0.30;

  double p_click = 0.80;
  double p_wishlist = 0.10;
  double p_cart = 0.07;

  // Test-day structure: optional in-session prefix before the target clicks.
  double p_test_prefix = 0.75;
  int test_prefix_min = 1;
  int test_prefix_max = 4;
  int test_targets_min = 1;
  int test_targets_max = 2;

  double unavailable_frac = 0.05;
  double zipf_exponent = 1.0;

  // Age-structure knobs for freshness experiments; zero disables them.
  double age_pop_strength = 0.0;    // outfit weight x (1+age)^strength
  double fresh_lover_frac = 0.0;    // user share preferring new outfits
  double fresh_lover_tau = 7.0;     // their weight x exp(-age/tau)
  double test_day_fresh_boost = 0.0;  // test-day target weight x exp(-age*boost/21)

  void validate() const;
};

struct SyntheticTruth {
  std::vector<int> user_cluster;          // planted primary affinity
  std::vector<std::uint8_t> user_segment;  // 0 cold, 1 article-only, 2 outfit
  std::vector<std::uint8_t> fresh_lover;
  std::vector<int> item_cluster;          // per catalog id
};

struct SyntheticResult {
  Dataset dataset;
  SyntheticTruth truth;
};

// Pure function of (config, seed): identical inputs give identical output.
SyntheticResult generate_synthetic(const GenConfig& config, std::uint64_t seed);

}  // namespace afra::data
