#include "afra/model/encoder.hpp"

#include <cmath>

namespace afra::model {

using numkit::Tensor;

namespace {
// Underflows to exp(x) == 0 after max subtraction, keeping every stored
// value finite.
constexpr double kMaskedLogit = -1e30;
}  // namespace

void EncoderConfig::validate() const {
  if (n_layers < 1 || n_heads < 1 || d_model < 1 || d_ff < 1 || max_positions < 1) {
    throw ConfigError("encoder dims must be positive");
  }
  if (d_model % n_heads != 0) throw ConfigError("d_model must be divisible by n_heads");
  if (dropout_rate < 0.0 || dropout_rate >= 1.0) throw ConfigError("dropout_rate must be in [0,1)");
}

Tensor causal_mask(int n_positions) {
  if (n_positions < 1) throw ShapeError("causal_mask: need at least one position");
  Tensor m = Tensor::zeros({n_positions, n_positions});
  auto v = m.data();
  for (int i = 0; i < n_positions; ++i) {
    for (int j = i + 1; j < n_positions; ++j) {
      v[static_cast<std::size_t>(i) * n_positions + j] = kMaskedLogit;
    }
  }
  return m;
}

Encoder Encoder::init(numkit::ParamSet& params, const EncoderConfig& cfg,
                      int target_vocab_size, Rng& rng) {
  cfg.validate();
  if (target_vocab_size < 1) throw ConfigError("target vocabulary is empty");
  Encoder e;
  e.cfg_ = cfg;
  e.vocab_size_ = target_vocab_size;
  const int d = cfg.d_model;
  const double std = 0.02;
  for (int l = 0; l < cfg.n_layers; ++l) {
    const std::string p = "enc.l" + std::to_string(l) + ".";
    Layer layer;
    layer.wq = params.add_normal(p + "att.wq", {d, d}, rng, std);
    layer.bq = params.add_const(p + "att.bq", {d}, 0.0);
    layer.wk = params.add_normal(p + "att.wk", {d, d}, rng, std);
    layer.bk = params.add_const(p + "att.bk", {d}, 0.0);
    layer.wv = params.add_normal(p + "att.wv", {d, d}, rng, std);
    layer.bv = params.add_const(p + "att.bv", {d}, 0.0);
    layer.wo = params.add_normal(p + "att.wo", {d, d}, rng, std);
    layer.bo = params.add_const(p + "att.bo", {d}, 0.0);
    layer.ln1_g = params.add_const(p + "ln1.g", {d}, 1.0);
    layer.ln1_b = params.add_const(p + "ln1.b", {d}, 0.0);
    layer.ln2_g = params.add_const(p + "ln2.g", {d}, 1.0);
    layer.ln2_b = params.add_const(p + "ln2.b", {d}, 0.0);
    layer.ff_w1 = params.add_normal(p + "ff.w1", {d, cfg.d_ff}, rng, std);
    layer.ff_b1 = params.add_const(p + "ff.b1", {cfg.d_ff}, 0.0);
    layer.ff_w2 = params.add_normal(p + "ff.w2", {cfg.d_ff, d}, rng, std);
    layer.ff_b2 = params.add_const(p + "ff.b2", {d}, 0.0);
    e.layers_.push_back(std::move(layer));
  }
  e.final_g_ = params.add_const("enc.final.g", {d}, 1.0);
  e.final_b_ = params.add_const("enc.final.b", {d}, 0.0);
  e.out_w_ = params.add_normal("head.w", {d, target_vocab_size}, rng, std);
  e.out_b_ = params.add_const("head.b", {target_vocab_size}, 0.0);
  return e;
}

Tensor Encoder::forward(const Tensor& x, bool training, const DropoutCtx& dropout,
                        numkit::Tape* tape) const {
  if (x.ndim() != 2 || x.dim(1) != cfg_.d_model) {
    throw ShapeError("encoder input must be [positions, d_model]");
  }
  const int n = x.dim(0);
  if (n > cfg_.max_positions) throw ShapeError("encoder input longer than max_positions");
  const int dh = cfg_.d_model / cfg_.n_heads;
  const double att_scale = 1.0 / std::sqrt(static_cast<double>(dh));
  const Tensor mask = causal_mask(n);
  constexpr double kLnEps = 1e-5;

  Tensor h = x;
  for (const Layer& layer : layers_) {
    // Attention sublayer, pre-norm.
    Tensor a = numkit::layer_norm(h, layer.ln1_g, layer.ln1_b, kLnEps, tape);
    Tensor q = numkit::add_rowwise(numkit::matmul(a, layer.wq, false, false, tape), layer.bq, tape);
    Tensor k = numkit::add_rowwise(numkit::matmul(a, layer.wk, false, false, tape), layer.bk, tape);
    Tensor v = numkit::add_rowwise(numkit::matmul(a, layer.wv, false, false, tape), layer.bv, tape);
    std::vector<Tensor> heads;
    heads.reserve(static_cast<std::size_t>(cfg_.n_heads));
    for (int head = 0; head < cfg_.n_heads; ++head) {
      const int off = head * dh;
      Tensor qh = numkit::slice_cols(q, off, dh, tape);
      Tensor kh = numkit::slice_cols(k, off, dh, tape);
      Tensor vh = numkit::slice_cols(v, off, dh, tape);
      Tensor scores = numkit::scale(numkit::matmul(qh, kh, false, true, tape), att_scale, tape);
      scores = numkit::add(scores, mask, tape);
      Tensor weights = numkit::softmax(scores, -1, tape);
      heads.push_back(numkit::matmul(weights, vh, false, false, tape));
    }
    Tensor att = numkit::concat_cols(heads, tape);
    att = numkit::add_rowwise(numkit::matmul(att, layer.wo, false, false, tape), layer.bo, tape);
    att = numkit::dropout(att, cfg_.dropout_rate, training, dropout.next_site_seed(), tape);
    h = numkit::add(h, att, tape);

    // Feed-forward sublayer.
    Tensor f = numkit::layer_norm(h, layer.ln2_g, layer.ln2_b, kLnEps, tape);
    f = numkit::add_rowwise(numkit::matmul(f, layer.ff_w1, false, false, tape), layer.ff_b1, tape);
    f = numkit::relu(f, tape);
    f = numkit::add_rowwise(numkit::matmul(f, layer.ff_w2, false, false, tape), layer.ff_b2, tape);
    f = numkit::dropout(f, cfg_.dropout_rate, training, dropout.next_site_seed(), tape);
    h = numkit::add(h, f, tape);
  }
  h = numkit::layer_norm(h, final_g_, final_b_, kLnEps, tape);
  return numkit::add_rowwise(numkit::matmul(h, out_w_, false, false, tape), out_b_, tape);
}

}  // namespace afra::model
