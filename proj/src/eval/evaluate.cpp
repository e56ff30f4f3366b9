#include "afra/eval/evaluate.hpp"

#include <algorithm>
#include <fstream>
#include <set>
#include <sstream>

#include "afra/eval/metrics.hpp"
#include "afra/numkit/kernels.hpp"
#include "afra/rng.hpp"

#ifdef _OPENMP
#include <omp.h>
#endif

namespace afra::eval {

std::string segment_name(Segment s) {
  switch (s) {
    case Segment::cold: return "cold";
    case Segment::article_only: return "article_only";
    case Segment::outfit_history: return "outfit_history";
  }
  throw DataError("bad segment enum");
}

EvalCaseSet build_eval_cases(const data::Dataset& dataset, const data::SplitResult& split,
                             data::EntityType target_entity) {
  std::map<int, std::vector<data::Interaction>> train_by_user;
  for (const data::Interaction& in : split.train) train_by_user[in.user].push_back(in);
  for (auto& [u, list] : train_by_user) {
    std::stable_sort(list.begin(), list.end(),
                     [](const auto& a, const auto& b) { return a.timestamp < b.timestamp; });
  }
  std::map<int, std::vector<data::Interaction>> test_by_user;
  for (const data::Interaction& in : split.test) test_by_user[in.user].push_back(in);

  EvalCaseSet out;
  for (auto& [user, events] : test_by_user) {
    std::stable_sort(events.begin(), events.end(),
                     [](const auto& a, const auto& b) { return a.timestamp < b.timestamp; });
    const auto hist_it = train_by_user.find(user);
    const std::vector<data::Interaction> empty;
    const std::vector<data::Interaction>& history = hist_it == train_by_user.end() ? empty : hist_it->second;

    Segment seg = Segment::cold;
    if (!history.empty()) {
      const bool any_target = std::any_of(history.begin(), history.end(), [&](const auto& in) {
        return dataset.catalog.item(in.item).entity == target_entity;
      });
      seg = any_target ? Segment::outfit_history : Segment::article_only;
    }

    bool any_case = false;
    std::vector<data::Interaction> prefix;
    for (const data::Interaction& ev : events) {
      const bool is_target = dataset.catalog.item(ev.item).entity == target_entity &&
                             ev.action == data::ActionType::click;
      if (is_target) {
        EvalCase c;
        c.user = user;
        c.segment = seg;
        c.history = history;
        c.same_day = prefix;
        c.target = ev.item;
        c.ts = ev.timestamp;
        c.serving_day = ev.day;
        out.cases.push_back(std::move(c));
        any_case = true;
      }
      prefix.push_back(ev);
    }
    if (!any_case) ++out.users_without_targets;
  }
  return out;
}

double MetricReport::value(const std::string& metric, int k, const std::string& segment) const {
  return values.at(metric).at(k).at(segment);
}

nlohmann::json MetricReport::to_json() const {
  nlohmann::json j;
  j["ranker"] = ranker;
  j["skipped_cases"] = skipped_cases;
  j["case_counts"] = case_counts;
  nlohmann::json vals = nlohmann::json::object();
  for (const auto& [metric, by_k] : values) {
    for (const auto& [k, by_seg] : by_k) {
      for (const auto& [seg, v] : by_seg) {
        vals[metric][std::to_string(k)][seg] = v;
      }
    }
  }
  j["metrics"] = vals;
  return j;
}

std::string MetricReport::to_csv() const {
  std::ostringstream os;
  os << "metric,k,segment,value\n";
  for (const auto& [metric, by_k] : values) {
    for (const auto& [k, by_seg] : by_k) {
      for (const auto& [seg, v] : by_seg) {
        os << metric << ',' << k << ',' << seg << ',' << v << '\n';
      }
    }
  }
  return os.str();
}

void MetricReport::save(const std::string& path_prefix) const {
  {
    std::ofstream f(path_prefix + ".json", std::ios::binary);
    if (!f) throw DataError("cannot write report: " + path_prefix + ".json");
    f << to_json().dump(2) << '\n';
  }
  {
    std::ofstream f(path_prefix + ".csv", std::ios::binary);
    if (!f) throw DataError("cannot write report: " + path_prefix + ".csv");
    f << to_csv();
  }
}

MetricReport evaluate(const rank::Ranker& ranker, const EvalCaseSet& case_set, const EvalConfig& cfg) {
  if (cfg.ks.empty()) throw ConfigError("evaluate: no k values configured");
  for (int k : cfg.ks) {
    if (k < 1) throw ConfigError("evaluate: k must be >= 1");
  }
  // Deterministic, mode-independent user subsample.
  std::vector<const EvalCase*> cases;
  if (cfg.max_users > 0) {
    std::set<int> users;
    for (const EvalCase& c : case_set.cases) users.insert(c.user);
    if (static_cast<int>(users.size()) > cfg.max_users) {
      std::vector<int> ranked(users.begin(), users.end());
      std::sort(ranked.begin(), ranked.end(), [&](int a, int b) {
        const auto ha = hash_mix(cfg.seed, static_cast<std::uint64_t>(a));
        const auto hb = hash_mix(cfg.seed, static_cast<std::uint64_t>(b));
        return ha != hb ? ha < hb : a < b;
      });
      ranked.resize(static_cast<std::size_t>(cfg.max_users));
      const std::set<int> keep(ranked.begin(), ranked.end());
      for (const EvalCase& c : case_set.cases) {
        if (keep.count(c.user)) cases.push_back(&c);
      }
    }
  }
  if (cases.empty() && !(cfg.max_users > 0 && !case_set.cases.empty() &&
                         [&] {
                           std::set<int> users;
                           for (const EvalCase& c : case_set.cases) users.insert(c.user);
                           return static_cast<int>(users.size()) > cfg.max_users;
                         }())) {
    for (const EvalCase& c : case_set.cases) cases.push_back(&c);
  }
  if (cases.empty()) throw DataError("evaluate: no eval cases");

  const int k_max = *std::max_element(cfg.ks.begin(), cfg.ks.end());
  std::vector<rank::RecommendationList> lists(cases.size());

  const int threads = numkit::kernels::max_threads();
#ifdef _OPENMP
#pragma omp parallel for schedule(static) num_threads(threads)
#endif
  for (std::ptrdiff_t i = 0; i < static_cast<std::ptrdiff_t>(cases.size()); ++i) {
    const EvalCase& c = *cases[static_cast<std::size_t>(i)];
    rank::Query q;
    q.user = c.user;
    q.context = c.user >= 0 ? rank::Query{}.context : rank::Query{}.context;
    q.history = c.history;
    q.same_day = c.same_day;
    q.serving_day = c.serving_day;
    lists[static_cast<std::size_t>(i)] = ranker.recommend(q, k_max);
  }
  (void)threads;

  MetricReport report;
  report.ranker = ranker.name();
  report.skipped_cases = case_set.users_without_targets;

  const std::vector<std::string> segments = {"all", "cold", "article_only", "outfit_history"};
  const std::vector<std::string> rel_metrics = {"recall", "precision", "hitrate", "ndcg", "map"};

  for (const std::string& seg : segments) report.case_counts[seg] = 0;
  for (const EvalCase* c : cases) {
    ++report.case_counts["all"];
    ++report.case_counts[segment_name(c->segment)];
  }

  // metric -> k -> segment -> (sum, count)
  std::map<std::string, std::map<int, std::map<std::string, std::pair<double, long>>>> acc;
  auto add = [&](const std::string& metric, int k, Segment seg, double v) {
    auto& all = acc[metric][k]["all"];
    all.first += v;
    ++all.second;
    auto& s = acc[metric][k][segment_name(seg)];
    s.first += v;
    ++s.second;
  };

  for (std::size_t i = 0; i < cases.size(); ++i) {
    const EvalCase& c = *cases[i];
    const rank::RecommendationList& list = lists[i];
    const std::array<int, 1> targets = {c.target};
    for (int k : cfg.ks) {
      add("recall", k, c.segment, recall_at_k(list, targets, k));
      add("precision", k, c.segment, precision_at_k(list, targets, k));
      add("hitrate", k, c.segment, hitrate_at_k(list, targets, k));
      add("ndcg", k, c.segment, ndcg_at_k(list, targets, k));
      add("map", k, c.segment, map_at_k(list, targets, k));
      add("freshness", k, c.segment, freshness_at_k(list, k));
      add("inter_list_diversity", k, c.segment, static_cast<double>(inter_list_diversity(list, k)));
    }
    // Consecutive visits of the same user.
    if (i + 1 < cases.size() && cases[i + 1]->user == c.user) {
      for (int k : cfg.ks) {
        add("temporal_diversity", k, c.segment, temporal_diversity(list, lists[i + 1], k));
      }
    }
  }

  for (const std::string& metric :
       {std::string("recall"), std::string("precision"), std::string("hitrate"), std::string("ndcg"),
        std::string("map"), std::string("freshness"), std::string("inter_list_diversity"),
        std::string("temporal_diversity")}) {
    for (int k : cfg.ks) {
      for (const std::string& seg : segments) {
        const auto it = acc.find(metric);
        double v = 0.0;
        if (it != acc.end()) {
          const auto& by_seg = it->second[k];
          const auto sit = by_seg.find(seg);
          if (sit != by_seg.end() && sit->second.second > 0) {
            v = sit->second.first / static_cast<double>(sit->second.second);
          }
        }
        report.values[metric][k][seg] = v;
      }
    }
  }
  return report;
}

}  // namespace afra::eval
