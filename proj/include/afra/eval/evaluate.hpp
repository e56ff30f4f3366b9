#pragma once

#include <map>
#include <string>

#include <json.hpp>

#include "afra/data/split.hpp"
#include "afra/rank/reranker.hpp"

namespace afra::eval {

enum class Segment { cold, article_only, outfit_history };
std::string segment_name(Segment s);

// One recommendation visit: the user's pre-split history, the test-day
// events seen before this visit, and the single interacted target item.
struct EvalCase {
  int user = -1;
  Segment segment = Segment::cold;
  data::Context context;
  std::vector<data::Interaction> history;
  std::vector<data::Interaction> same_day;
  int target = -1;
  std::int64_t ts = 0;
  int serving_day = 0;
};

struct EvalCaseSet {
  std::vector<EvalCase> cases;
  long users_without_targets = 0;  // test-day users with no target event
};

// Test-day target clicks on the given entity type, sequential per user:
// each later case sees the earlier same-day events (targets included).
EvalCaseSet build_eval_cases(const data::Dataset& dataset, const data::SplitResult& split,
                             data::EntityType target_entity);

struct EvalConfig {
  std::vector<int> ks = {5, 15, 30};
  int max_users = 0;       // 0 = all; otherwise a deterministic user subsample
  std::uint64_t seed = 1;  // subsample seed
};

struct MetricReport {
  // metric -> k -> segment -> mean value
  std::map<std::string, std::map<int, std::map<std::string, double>>> values;
  std::map<std::string, long> case_counts;
  long skipped_cases = 0;
  std::string ranker;

  double value(const std::string& metric, int k, const std::string& segment = "all") const;
  nlohmann::json to_json() const;
  std::string to_csv() const;
  void save(const std::string& path_prefix) const;  // writes .json and .csv
};

MetricReport evaluate(const rank::Ranker& ranker, const EvalCaseSet& cases, const EvalConfig& cfg);

}  // namespace afra::eval
