#include "afra/model/embedder.hpp"

#include <algorithm>
#include <array>

#include "afra/train/targets.hpp"

namespace afra::model {

using numkit::Tensor;

namespace {

// Features composed from member articles vs. carried by the item itself.
bool article_level(const std::string& name) {
  return name == "brand" || name == "color" || name == "category" ||
         name == "material" || name == "fit" || name == "pattern" ||
         name == "price_bucket";
}

int clip_bucket(long v, int hi) {
  if (v < 0) v = 0;
  if (v > hi) v = hi;
  return static_cast<int>(v);
}

}  // namespace

void ModelConfig::validate() const {
  encoder.validate();
  if (feature_emb_width <= 0 || session_emb_width <= 0 || age_emb_width <= 0 || id_emb_width <= 0) {
    throw ConfigError("embedding widths must be positive");
  }
  if (max_len < 1) throw ConfigError("max_len must be >= 1");
  if (recency_clip_days < 1) throw ConfigError("recency_clip_days must be >= 1");
  if (n_context_tokens() + max_len > encoder.max_positions) {
    throw ConfigError("max_positions too small for context plus max_len");
  }
  if (ids_only && use_age_feature) throw ConfigError("age feature requires the full feature set");
}

Embedder Embedder::init(numkit::ParamSet& params, const ModelConfig& cfg,
                        const data::Catalog& catalog, const data::FeatureVocabs& vocabs,
                        const data::ContextVocabs& ctx_vocabs, const TargetVocab& tvocab,
                        Rng& rng) {
  cfg.validate();
  Embedder e;
  e.catalog_ = &catalog;
  e.cfg_ = cfg;
  e.ctx_vocabs_ = ctx_vocabs;
  e.tvocab_ = &tvocab;

  if (cfg.ids_only) {
    e.spec_ = FeatureSpec::ids_only(catalog.size(), cfg.id_emb_width);
  } else {
    std::vector<FeatureDef> defs = FeatureSpec::for_catalog(vocabs, cfg.feature_emb_width).defs();
    if (cfg.use_age_feature) {
      defs.push_back({"item_age", cfg.recency_clip_days + 1, cfg.age_emb_width, false});
    }
    e.spec_ = FeatureSpec(std::move(defs));
  }

  for (const FeatureDef& d : e.spec_.defs()) {
    e.tables_.push_back(d.one_hot ? Tensor()
                                  : params.add_normal("emb." + d.name, {d.vocab, d.width}, rng, cfg.init_std));
  }
  e.input_width_ = e.spec_.total_width();

  const int d_model = cfg.encoder.d_model;
  if (!cfg.ids_only) {
    const int buckets = cfg.recency_clip_days + 1;
    e.recency_table_ = params.add_normal("session.recency", {buckets, cfg.session_emb_width}, rng, cfg.init_std);
    e.gap_table_ = params.add_normal("session.gap", {buckets, cfg.session_emb_width}, rng, cfg.init_std);
    e.ctx_country_ = params.add_normal("ctx.country", {ctx_vocabs.country, d_model}, rng, cfg.init_std);
    e.ctx_device_ = params.add_normal("ctx.device", {ctx_vocabs.device, d_model}, rng, cfg.init_std);
    e.ctx_language_ = params.add_normal("ctx.language", {ctx_vocabs.language, d_model}, rng, cfg.init_std);
    e.ctx_market_ = params.add_normal("ctx.market", {ctx_vocabs.market, d_model}, rng, cfg.init_std);
    e.ctx_premise_ = params.add_normal("ctx.premise", {ctx_vocabs.premise, d_model}, rng, cfg.init_std);
    e.input_width_ += 2 * cfg.session_emb_width + data::kNumActionTypes;
  }
  e.proj_w_ = params.add_normal("proj.w", {e.input_width_, d_model}, rng, cfg.init_std);
  e.proj_b_ = params.add_const("proj.b", {d_model}, 0.0);
  if (cfg.use_positional) {
    e.pos_table_ = params.add_normal("pos", {cfg.encoder.max_positions, d_model}, rng, cfg.init_std);
  }

  // Precompute per-item id lists / constant blocks per feature definition.
  const auto& defs = e.spec_.defs();
  e.item_index_.resize(static_cast<std::size_t>(catalog.size()));
  for (const data::Item& it : catalog.items()) {
    auto& per_def = e.item_index_[static_cast<std::size_t>(it.id)];
    per_def.resize(defs.size());
    for (std::size_t di = 0; di < defs.size(); ++di) {
      const FeatureDef& d = defs[di];
      DefIndex& idx = per_def[di];
      if (d.one_hot) idx.one_hot.assign(static_cast<std::size_t>(d.width), 0.0);
      if (d.name == "item_id") {
        idx.ids.push_back(it.id);
        idx.weights.push_back(1.0);
        continue;
      }
      if (d.name == "item_age") continue;  // dynamic, depends on interaction day

      auto add_value = [&](int value, double w) {
        if (value < 0 || value >= d.vocab) {
          throw DataError("item " + std::to_string(it.id) + " feature " + d.name + " outside vocab");
        }
        if (d.one_hot) {
          idx.one_hot[static_cast<std::size_t>(value)] += w;
        } else {
          idx.ids.push_back(value);
          idx.weights.push_back(w);
        }
      };
      auto own = it.features.find(d.name);
      if (own != it.features.end()) {
        add_value(own->second, 1.0);
        continue;
      }
      if (!article_level(d.name)) continue;  // absent outfit-level feature: zero block

      if (it.entity == data::EntityType::outfit) {
        const double w = 1.0 / static_cast<double>(it.members.size());
        for (int m : it.members) {
          const auto f = catalog.item(m).features.find(d.name);
          if (f != catalog.item(m).features.end()) add_value(f->second, w);
        }
      } else if (it.entity == data::EntityType::influencer) {
        const auto outfits = catalog.outfits_of_creator(it.features.count("influencer")
                                                            ? it.features.at("influencer")
                                                            : -1);
        if (!outfits.empty()) {
          const double wo = 1.0 / static_cast<double>(outfits.size());
          for (int oid : outfits) {
            const data::Item& o = catalog.item(oid);
            const double wm = wo / static_cast<double>(o.members.size());
            for (int m : o.members) {
              const auto f = catalog.item(m).features.find(d.name);
              if (f != catalog.item(m).features.end()) add_value(f->second, wm);
            }
          }
        }
      }
    }
    // Influencer entity: style block is the mean over the creator's outfits.
    if (!cfg.ids_only && it.entity == data::EntityType::influencer && e.spec_.has("style")) {
      const std::size_t di = static_cast<std::size_t>(&e.spec_.def("style") - defs.data());
      DefIndex& idx = per_def[di];
      const auto outfits = catalog.outfits_of_creator(
          it.features.count("influencer") ? it.features.at("influencer") : -1);
      if (!outfits.empty()) {
        std::fill(idx.one_hot.begin(), idx.one_hot.end(), 0.0);
        const double wo = 1.0 / static_cast<double>(outfits.size());
        for (int oid : outfits) {
          const auto f = catalog.item(oid).features.find("style");
          if (f != catalog.item(oid).features.end()) {
            idx.one_hot[static_cast<std::size_t>(f->second)] += wo;
          }
        }
      }
    }
  }
  return e;
}

int Embedder::age_bucket(int item_id, int day) const {
  const data::Item& it = catalog_->item(item_id);
  if (it.entity != cfg_.target_entity) return 0;
  return clip_bucket(day - it.created_day, cfg_.recency_clip_days);
}

Tensor Embedder::feature_block(int item_id, std::size_t def_idx, numkit::Tape* tape) const {
  const FeatureDef& d = spec_.defs()[def_idx];
  const DefIndex& idx = item_index_[static_cast<std::size_t>(item_id)][def_idx];
  if (d.one_hot) {
    return Tensor::from({1, d.width}, idx.one_hot);
  }
  if (idx.ids.empty()) return Tensor::zeros({1, d.width});
  return numkit::embedding_combine(tables_[def_idx], idx.ids, idx.weights, tape);
}

Tensor Embedder::embed_item(int item_id, numkit::Tape* tape) const {
  if (!catalog_->has(item_id)) throw IndexError("embed_item: unknown item " + std::to_string(item_id));
  std::vector<Tensor> blocks;
  const auto& defs = spec_.defs();
  for (std::size_t di = 0; di < defs.size(); ++di) {
    if (defs[di].name == "item_age") {
      blocks.push_back(Tensor::zeros({1, defs[di].width}));
      continue;
    }
    blocks.push_back(feature_block(item_id, di, tape));
  }
  return numkit::concat_cols(blocks, tape);
}

Tensor Embedder::embed_composite_feature(int item_id, const std::string& feature,
                                         numkit::Tape* tape) const {
  const data::Item& it = catalog_->item(item_id);
  if (it.entity == data::EntityType::outfit && it.members.empty()) {
    throw DataError("composite feature of outfit without members");
  }
  const auto& defs = spec_.defs();
  const FeatureDef& d = spec_.def(feature);
  const std::size_t di = static_cast<std::size_t>(&d - defs.data());
  return feature_block(item_id, di, tape);
}

Tensor Embedder::action_encoding(data::ActionType action) const {
  std::vector<double> v(data::kNumActionTypes, 0.0);
  const int a = static_cast<int>(action);
  if (a < 0 || a >= data::kNumActionTypes) throw IndexError("unknown action type");
  v[static_cast<std::size_t>(a)] = 1.0;
  return Tensor::from({1, data::kNumActionTypes}, std::move(v));
}

Tensor Embedder::session_encoding(const data::Interaction& interaction, int reference_day,
                                  std::optional<std::int64_t> next_timestamp,
                                  numkit::Tape* tape) const {
  if (cfg_.ids_only) throw ConfigError("session encoding disabled in ids-only mode");
  if (reference_day < interaction.day) {
    throw DataError("negative recency: reference day precedes interaction");
  }
  const int r = clip_bucket(reference_day - interaction.day, cfg_.recency_clip_days);
  int g = 0;
  if (next_timestamp.has_value()) {
    const int next_day = static_cast<int>(*next_timestamp / data::kSecondsPerDay);
    g = clip_bucket(next_day - interaction.day, cfg_.recency_clip_days);
  }
  const std::array<int, 1> rid = {r};
  const std::array<int, 1> gid = {g};
  const std::array<Tensor, 2> parts = {numkit::embedding_lookup(recency_table_, rid, tape),
                                       numkit::embedding_lookup(gap_table_, gid, tape)};
  return numkit::concat_cols(parts, tape);
}

std::vector<Tensor> Embedder::context_tokens(const data::Context& context,
                                             numkit::Tape* tape) const {
  if (cfg_.ids_only) return {};
  auto one = [&](const Tensor& table, int id, const char* field) {
    if (id < 0 || id >= table.dim(0)) {
      throw IndexError(std::string("context field ") + field + " id " + std::to_string(id) + " outside vocab");
    }
    const std::array<int, 1> ids = {id};
    return numkit::embedding_lookup(table, ids, tape);
  };
  // Alphabetical field order.
  return {one(ctx_country_, context.country, "country"), one(ctx_device_, context.device, "device"),
          one(ctx_language_, context.language, "language"), one(ctx_market_, context.market, "market"),
          one(ctx_premise_, context.premise, "premise")};
}

ComposedInput Embedder::compose(std::span<const data::Interaction> interactions,
                                const data::Context& context, const ComposeOptions& opts,
                                numkit::Tape* tape) const {
  if (static_cast<int>(interactions.size()) > cfg_.max_len) {
    interactions = interactions.subspan(interactions.size() - static_cast<std::size_t>(cfg_.max_len));
  }
  const int n_ctx = cfg_.n_context_tokens();
  const int n_inter = static_cast<int>(interactions.size());
  const int n_pos = n_ctx + n_inter;
  if (n_pos < 1) throw ShapeError("compose: empty input (no context tokens and no interactions)");
  if (n_pos > cfg_.encoder.max_positions) throw ShapeError("compose: input longer than max_positions");

  ComposedInput out;
  out.n_context = n_ctx;
  out.item_ids.assign(static_cast<std::size_t>(n_pos), -1);
  out.recency.assign(static_cast<std::size_t>(n_pos), 0);
  out.time_gap.assign(static_cast<std::size_t>(n_pos), 0);

  std::vector<Tensor> rows;
  if (n_inter > 0) {
    rows.reserve(static_cast<std::size_t>(n_inter));
    const auto& defs = spec_.defs();
    for (int t = 0; t < n_inter; ++t) {
      const data::Interaction& in = interactions[static_cast<std::size_t>(t)];
      if (!catalog_->has(in.item)) throw IndexError("compose: unknown item " + std::to_string(in.item));
      out.item_ids[static_cast<std::size_t>(n_ctx + t)] = in.item;

      std::vector<Tensor> blocks;
      blocks.reserve(defs.size() + 2);
      for (std::size_t di = 0; di < defs.size(); ++di) {
        if (defs[di].name == "item_age") {
          const int bucket = opts.training ? age_bucket(in.item, in.day) : 0;
          const std::array<int, 1> ids = {bucket};
          blocks.push_back(numkit::embedding_lookup(tables_[di], ids, tape));
          continue;
        }
        blocks.push_back(feature_block(in.item, di, tape));
      }
      if (!cfg_.ids_only) {
        if (opts.reference_day < in.day) throw DataError("negative recency in compose");
        const int r = clip_bucket(opts.reference_day - in.day, cfg_.recency_clip_days);
        int g = 0;
        if (opts.training && t + 1 < n_inter) {
          g = clip_bucket(interactions[static_cast<std::size_t>(t + 1)].day - in.day, cfg_.recency_clip_days);
        }
        out.recency[static_cast<std::size_t>(n_ctx + t)] = r;
        out.time_gap[static_cast<std::size_t>(n_ctx + t)] = g;
        const std::array<int, 1> rid = {r};
        const std::array<int, 1> gid = {g};
        blocks.push_back(numkit::embedding_lookup(recency_table_, rid, tape));
        blocks.push_back(numkit::embedding_lookup(gap_table_, gid, tape));
        blocks.push_back(action_encoding(in.action));
      }
      rows.push_back(numkit::concat_cols(blocks, tape));
    }
  }

  Tensor x;
  std::vector<Tensor> stacked;
  if (n_ctx > 0) {
    for (Tensor& t : context_tokens(context, tape)) stacked.push_back(std::move(t));
  }
  if (!rows.empty()) {
    const Tensor raw = numkit::concat_rows(rows, tape);
    const Tensor projected = numkit::add_rowwise(numkit::matmul(raw, proj_w_, false, false, tape), proj_b_, tape);
    stacked.push_back(projected);
  }
  x = stacked.size() == 1 ? stacked.front() : numkit::concat_rows(stacked, tape);

  if (cfg_.use_positional) {
    std::vector<int> pos_ids(static_cast<std::size_t>(n_pos));
    for (int p = 0; p < n_pos; ++p) pos_ids[static_cast<std::size_t>(p)] = p;
    x = numkit::add(x, numkit::embedding_lookup(pos_table_, pos_ids, tape), tape);
  }
  x = numkit::dropout(x, cfg_.encoder.dropout_rate, opts.training, opts.dropout.next_site_seed(), tape);
  out.vectors = x;

  const auto assignment = train::build_targets(out.item_ids, *catalog_, *tvocab_);
  out.target_index = assignment.target_index;
  out.target_mask = assignment.target_mask;
  return out;
}

}  // namespace afra::model
