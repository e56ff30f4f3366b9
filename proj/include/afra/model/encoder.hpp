#pragma once

#include "afra/model/common.hpp"
#include "afra/numkit/ops.hpp"
#include "afra/numkit/params.hpp"

namespace afra::model {

struct EncoderConfig {
  int n_layers = 2;
  int n_heads = 4;
  int d_model = 32;
  int d_ff = 128;
  double dropout_rate = 0.1;
  int max_positions = 128;

  void validate() const;
};

// Additive attention mask: 0 where position i may attend to j (j <= i),
// a large negative constant elsewhere. The constant underflows to an exact
// zero attention weight after softmax.
numkit::Tensor causal_mask(int n_positions);

// Pre-norm causal transformer stack with a linear head over the target
// vocabulary.
class Encoder {
 public:
  Encoder() = default;
  static Encoder init(numkit::ParamSet& params, const EncoderConfig& cfg,
                      int target_vocab_size, Rng& rng);

  // x is [positions, d_model]; returns logits [positions, vocab].
  numkit::Tensor forward(const numkit::Tensor& x, bool training,
                         const DropoutCtx& dropout, numkit::Tape* tape) const;

  const EncoderConfig& config() const { return cfg_; }
  int vocab_size() const { return vocab_size_; }

 private:
  struct Layer {
    numkit::Tensor wq, bq, wk, bk, wv, bv, wo, bo;
    numkit::Tensor ln1_g, ln1_b, ln2_g, ln2_b;
    numkit::Tensor ff_w1, ff_b1, ff_w2, ff_b2;
  };
  EncoderConfig cfg_;
  int vocab_size_ = 0;
  std::vector<Layer> layers_;
  numkit::Tensor final_g_, final_b_;
  numkit::Tensor out_w_, out_b_;
};

}  // namespace afra::model
