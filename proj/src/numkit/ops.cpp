#include "afra/numkit/ops.hpp"

#include <algorithm>
#include <cmath>
#include <cstring>

#include "afra/numkit/kernels.hpp"
#include "afra/rng.hpp"

namespace afra::numkit {

namespace {

bool track(const Tape* tape, bool any_grad) { return tape != nullptr && any_grad; }

void require_2d(const Tensor& t, const char* op) {
  if (t.ndim() != 2) throw ShapeError(std::string(op) + ": expected 2-d tensor, got " + shape_str(t.shape()));
}

}  // namespace

Tensor matmul(const Tensor& a, const Tensor& b, bool trans_a, bool trans_b, Tape* tape) {
  require_2d(a, "matmul");
  require_2d(b, "matmul");
  const int m = trans_a ? a.dim(1) : a.dim(0);
  const int ka = trans_a ? a.dim(0) : a.dim(1);
  const int kb = trans_b ? b.dim(1) : b.dim(0);
  const int n = trans_b ? b.dim(0) : b.dim(1);
  if (ka != kb) {
    throw ShapeError("matmul: inner dims differ, " + shape_str(a.shape()) + " x " + shape_str(b.shape()));
  }
  const bool rg = track(tape, a.requires_grad() || b.requires_grad());
  Tensor out = Tensor::zeros({m, n}, rg);
  kernels::matmul(a.data().data(), b.data().data(), out.data().data(), m, ka, n,
                  trans_a, trans_b, false);
  check_finite(out, "matmul");
  if (rg) {
    tape->record([a, b, out, m, ka, n, trans_a, trans_b]() mutable {
      const double* dc = out.grad().data();
      if (a.requires_grad()) {
        double* da = a.grad().data();
        if (!trans_a) {
          // da += dC * op(b)^T
          kernels::matmul(dc, b.data().data(), da, m, n, ka, false, !trans_b, true);
        } else if (!trans_b) {
          kernels::matmul(b.data().data(), dc, da, ka, n, m, false, true, true);
        } else {
          kernels::matmul(b.data().data(), dc, da, ka, n, m, true, true, true);
        }
      }
      if (b.requires_grad()) {
        double* db = b.grad().data();
        if (!trans_b) {
          // db += op(a)^T * dC
          kernels::matmul(a.data().data(), dc, db, ka, m, n, !trans_a, false, true);
        } else if (!trans_a) {
          kernels::matmul(dc, a.data().data(), db, n, m, ka, true, false, true);
        } else {
          kernels::matmul(dc, a.data().data(), db, n, m, ka, true, true, true);
        }
      }
    });
  }
  return out;
}

Tensor add(const Tensor& a, const Tensor& b, Tape* tape) {
  if (a.shape() != b.shape()) {
    throw ShapeError("add: shape mismatch " + shape_str(a.shape()) + " vs " + shape_str(b.shape()));
  }
  const bool rg = track(tape, a.requires_grad() || b.requires_grad());
  Tensor out = Tensor::zeros(a.shape(), rg);
  const auto av = a.data();
  const auto bv = b.data();
  auto ov = out.data();
  for (std::size_t i = 0; i < ov.size(); ++i) ov[i] = av[i] + bv[i];
  check_finite(out, "add");
  if (rg) {
    tape->record([a, b, out]() mutable {
      const auto g = out.grad();
      if (a.requires_grad()) {
        auto da = a.grad();
        for (std::size_t i = 0; i < g.size(); ++i) da[i] += g[i];
      }
      if (b.requires_grad()) {
        auto db = b.grad();
        for (std::size_t i = 0; i < g.size(); ++i) db[i] += g[i];
      }
    });
  }
  return out;
}

Tensor add_rowwise(const Tensor& x, const Tensor& row, Tape* tape) {
  require_2d(x, "add_rowwise");
  if (row.ndim() != 1 || row.dim(0) != x.dim(1)) {
    throw ShapeError("add_rowwise: row width " + shape_str(row.shape()) + " vs " + shape_str(x.shape()));
  }
  const int r = x.dim(0);
  const int w = x.dim(1);
  const bool rg = track(tape, x.requires_grad() || row.requires_grad());
  Tensor out = Tensor::zeros(x.shape(), rg);
  const auto xv = x.data();
  const auto bv = row.data();
  auto ov = out.data();
  for (int i = 0; i < r; ++i) {
    for (int j = 0; j < w; ++j) {
      ov[static_cast<std::size_t>(i) * w + j] = xv[static_cast<std::size_t>(i) * w + j] + bv[j];
    }
  }
  check_finite(out, "add_rowwise");
  if (rg) {
    tape->record([x, row, out, r, w]() mutable {
      const auto g = out.grad();
      if (x.requires_grad()) {
        auto dx = x.grad();
        for (std::size_t i = 0; i < g.size(); ++i) dx[i] += g[i];
      }
      if (row.requires_grad()) {
        auto db = row.grad();
        for (int i = 0; i < r; ++i) {
          for (int j = 0; j < w; ++j) db[j] += g[static_cast<std::size_t>(i) * w + j];
        }
      }
    });
  }
  return out;
}

Tensor mul(const Tensor& a, const Tensor& b, Tape* tape) {
  if (a.shape() != b.shape()) {
    throw ShapeError("mul: shape mismatch " + shape_str(a.shape()) + " vs " + shape_str(b.shape()));
  }
  const bool rg = track(tape, a.requires_grad() || b.requires_grad());
  Tensor out = Tensor::zeros(a.shape(), rg);
  const auto av = a.data();
  const auto bv = b.data();
  auto ov = out.data();
  for (std::size_t i = 0; i < ov.size(); ++i) ov[i] = av[i] * bv[i];
  check_finite(out, "mul");
  if (rg) {
    tape->record([a, b, out]() mutable {
      const auto g = out.grad();
      if (a.requires_grad()) {
        auto da = a.grad();
        const auto bv2 = b.data();
        for (std::size_t i = 0; i < g.size(); ++i) da[i] += g[i] * bv2[i];
      }
      if (b.requires_grad()) {
        auto db = b.grad();
        const auto av2 = a.data();
        for (std::size_t i = 0; i < g.size(); ++i) db[i] += g[i] * av2[i];
      }
    });
  }
  return out;
}

Tensor scale(const Tensor& x, double factor, Tape* tape) {
  const bool rg = track(tape, x.requires_grad());
  Tensor out = Tensor::zeros(x.shape(), rg);
  const auto xv = x.data();
  auto ov = out.data();
  for (std::size_t i = 0; i < ov.size(); ++i) ov[i] = xv[i] * factor;
  check_finite(out, "scale");
  if (rg) {
    tape->record([x, out, factor]() mutable {
      const auto g = out.grad();
      auto dx = x.grad();
      for (std::size_t i = 0; i < g.size(); ++i) dx[i] += g[i] * factor;
    });
  }
  return out;
}

Tensor relu(const Tensor& x, Tape* tape) {
  const bool rg = track(tape, x.requires_grad());
  Tensor out = Tensor::zeros(x.shape(), rg);
  const auto xv = x.data();
  auto ov = out.data();
  for (std::size_t i = 0; i < ov.size(); ++i) ov[i] = xv[i] > 0.0 ? xv[i] : 0.0;
  check_finite(out, "relu");
  if (rg) {
    tape->record([x, out]() mutable {
      const auto g = out.grad();
      const auto xv2 = x.data();
      auto dx = x.grad();
      for (std::size_t i = 0; i < g.size(); ++i) {
        if (xv2[i] > 0.0) dx[i] += g[i];
      }
    });
  }
  return out;
}

Tensor softmax(const Tensor& x, int axis, Tape* tape) {
  const int nd = x.ndim();
  if (axis < 0) axis += nd;
  if (axis < 0 || axis >= nd) throw ShapeError("softmax: axis out of range");
  const int n = x.dim(axis);
  if (n < 1) throw ShapeError("softmax: empty axis");
  std::size_t outer = 1, inner = 1;
  for (int i = 0; i < axis; ++i) outer *= static_cast<std::size_t>(x.dim(i));
  for (int i = axis + 1; i < nd; ++i) inner *= static_cast<std::size_t>(x.dim(i));

  const bool rg = track(tape, x.requires_grad());
  Tensor out = Tensor::zeros(x.shape(), rg);
  const auto xv = x.data();
  auto ov = out.data();
  for (std::size_t o = 0; o < outer; ++o) {
    for (std::size_t in = 0; in < inner; ++in) {
      const std::size_t base = o * static_cast<std::size_t>(n) * inner + in;
      double mx = xv[base];
      for (int i = 1; i < n; ++i) mx = std::max(mx, xv[base + static_cast<std::size_t>(i) * inner]);
      double denom = 0.0;
      for (int i = 0; i < n; ++i) {
        const double e = std::exp(xv[base + static_cast<std::size_t>(i) * inner] - mx);
        ov[base + static_cast<std::size_t>(i) * inner] = e;
        denom += e;
      }
      for (int i = 0; i < n; ++i) ov[base + static_cast<std::size_t>(i) * inner] /= denom;
    }
  }
  check_finite(out, "softmax");
  if (rg) {
    tape->record([x, out, n, outer, inner]() mutable {
      const auto y = out.data();
      const auto g = out.grad();
      auto dx = x.grad();
      for (std::size_t o = 0; o < outer; ++o) {
        for (std::size_t in = 0; in < inner; ++in) {
          const std::size_t base = o * static_cast<std::size_t>(n) * inner + in;
          double dot = 0.0;
          for (int i = 0; i < n; ++i) {
            const std::size_t idx = base + static_cast<std::size_t>(i) * inner;
            dot += y[idx] * g[idx];
          }
          for (int i = 0; i < n; ++i) {
            const std::size_t idx = base + static_cast<std::size_t>(i) * inner;
            dx[idx] += y[idx] * (g[idx] - dot);
          }
        }
      }
    });
  }
  return out;
}

Tensor layer_norm(const Tensor& x, const Tensor& gain, const Tensor& bias, double eps, Tape* tape) {
  if (eps <= 0.0) throw ConfigError("layer_norm: eps must be positive");
  const int nd = x.ndim();
  if (nd < 1) throw ShapeError("layer_norm: scalar input");
  const int d = x.dim(nd - 1);
  if (gain.ndim() != 1 || gain.dim(0) != d || bias.ndim() != 1 || bias.dim(0) != d) {
    throw ShapeError("layer_norm: gain/bias width mismatch");
  }
  const std::size_t rows = x.numel() / static_cast<std::size_t>(d);
  const bool rg = track(tape, x.requires_grad() || gain.requires_grad() || bias.requires_grad());
  Tensor out = Tensor::zeros(x.shape(), rg);
  // Normalized values are needed by the backward pass.
  Tensor xhat = Tensor::zeros(x.shape(), false);
  std::vector<double> inv_std(rows, 0.0);

  const auto xv = x.data();
  const auto gv = gain.data();
  const auto bv = bias.data();
  auto hv = xhat.data();
  auto ov = out.data();
  for (std::size_t r = 0; r < rows; ++r) {
    const std::size_t base = r * static_cast<std::size_t>(d);
    double mean = 0.0;
    for (int j = 0; j < d; ++j) mean += xv[base + j];
    mean /= d;
    double var = 0.0;
    for (int j = 0; j < d; ++j) {
      const double c = xv[base + j] - mean;
      var += c * c;
    }
    var /= d;
    const double inv = 1.0 / std::sqrt(var + eps);
    inv_std[r] = inv;
    for (int j = 0; j < d; ++j) {
      const double h = (xv[base + j] - mean) * inv;
      hv[base + j] = h;
      ov[base + j] = gv[j] * h + bv[j];
    }
  }
  check_finite(out, "layer_norm");
  if (rg) {
    tape->record([x, gain, bias, out, xhat, inv_std = std::move(inv_std), rows, d]() mutable {
      const auto g = out.grad();
      const auto h = xhat.data();
      const auto gv2 = gain.data();
      for (std::size_t r = 0; r < rows; ++r) {
        const std::size_t base = r * static_cast<std::size_t>(d);
        if (gain.requires_grad()) {
          auto dg = gain.grad();
          for (int j = 0; j < d; ++j) dg[j] += g[base + j] * h[base + j];
        }
        if (bias.requires_grad()) {
          auto db = bias.grad();
          for (int j = 0; j < d; ++j) db[j] += g[base + j];
        }
        if (x.requires_grad()) {
          auto dx = x.grad();
          double mean_dh = 0.0;
          double mean_dh_h = 0.0;
          for (int j = 0; j < d; ++j) {
            const double dh = g[base + j] * gv2[j];
            mean_dh += dh;
            mean_dh_h += dh * h[base + j];
          }
          mean_dh /= d;
          mean_dh_h /= d;
          for (int j = 0; j < d; ++j) {
            const double dh = g[base + j] * gv2[j];
            dx[base + j] += inv_std[r] * (dh - mean_dh - h[base + j] * mean_dh_h);
          }
        }
      }
    });
  }
  return out;
}

Tensor embedding_lookup(const Tensor& table, std::span<const int> ids, Tape* tape) {
  require_2d(table, "embedding_lookup");
  const int vocab = table.dim(0);
  const int d = table.dim(1);
  for (int id : ids) {
    if (id < 0 || id >= vocab) {
      throw IndexError("embedding_lookup: id " + std::to_string(id) + " outside vocab " + std::to_string(vocab));
    }
  }
  const bool rg = track(tape, table.requires_grad());
  Tensor out = Tensor::zeros({static_cast<int>(ids.size()), d}, rg);
  const auto tv = table.data();
  auto ov = out.data();
  for (std::size_t i = 0; i < ids.size(); ++i) {
    std::memcpy(ov.data() + i * static_cast<std::size_t>(d),
                tv.data() + static_cast<std::size_t>(ids[i]) * d, sizeof(double) * static_cast<std::size_t>(d));
  }
  check_finite(out, "embedding_lookup");
  if (rg) {
    std::vector<int> idv(ids.begin(), ids.end());
    tape->record([table, out, idv = std::move(idv), d]() mutable {
      const auto g = out.grad();
      auto dt = table.grad();
      for (std::size_t i = 0; i < idv.size(); ++i) {
        double* row = dt.data() + static_cast<std::size_t>(idv[i]) * d;
        const double* gr = g.data() + i * static_cast<std::size_t>(d);
        for (int j = 0; j < d; ++j) row[j] += gr[j];
      }
    });
  }
  return out;
}

Tensor embedding_combine(const Tensor& table, std::span<const int> ids,
                         std::span<const double> weights, Tape* tape) {
  require_2d(table, "embedding_combine");
  if (ids.empty()) throw DataError("embedding_combine: empty id list");
  if (ids.size() != weights.size()) throw ShapeError("embedding_combine: ids/weights length mismatch");
  const int vocab = table.dim(0);
  const int d = table.dim(1);
  for (int id : ids) {
    if (id < 0 || id >= vocab) {
      throw IndexError("embedding_combine: id " + std::to_string(id) + " outside vocab " + std::to_string(vocab));
    }
  }
  const bool rg = track(tape, table.requires_grad());
  Tensor out = Tensor::zeros({1, d}, rg);
  const auto tv = table.data();
  auto ov = out.data();
  for (std::size_t i = 0; i < ids.size(); ++i) {
    const double* row = tv.data() + static_cast<std::size_t>(ids[i]) * d;
    const double w = weights[i];
    for (int j = 0; j < d; ++j) ov[j] += w * row[j];
  }
  check_finite(out, "embedding_combine");
  if (rg) {
    std::vector<int> idv(ids.begin(), ids.end());
    std::vector<double> wv(weights.begin(), weights.end());
    tape->record([table, out, idv = std::move(idv), wv = std::move(wv), d]() mutable {
      const auto g = out.grad();
      auto dt = table.grad();
      for (std::size_t i = 0; i < idv.size(); ++i) {
        double* row = dt.data() + static_cast<std::size_t>(idv[i]) * d;
        for (int j = 0; j < d; ++j) row[j] += wv[i] * g[j];
      }
    });
  }
  return out;
}

Tensor concat_cols(std::span<const Tensor> parts, Tape* tape) {
  if (parts.empty()) throw ShapeError("concat_cols: no parts");
  const int r = parts.front().dim(0);
  int w = 0;
  bool any_grad = false;
  for (const Tensor& p : parts) {
    require_2d(p, "concat_cols");
    if (p.dim(0) != r) throw ShapeError("concat_cols: row mismatch");
    w += p.dim(1);
    any_grad = any_grad || p.requires_grad();
  }
  const bool rg = track(tape, any_grad);
  Tensor out = Tensor::zeros({r, w}, rg);
  auto ov = out.data();
  int off = 0;
  for (const Tensor& p : parts) {
    const int pw = p.dim(1);
    const auto pv = p.data();
    for (int i = 0; i < r; ++i) {
      std::memcpy(ov.data() + static_cast<std::size_t>(i) * w + off,
                  pv.data() + static_cast<std::size_t>(i) * pw, sizeof(double) * static_cast<std::size_t>(pw));
    }
    off += pw;
  }
  if (rg) {
    std::vector<Tensor> held(parts.begin(), parts.end());
    tape->record([held = std::move(held), out, r, w]() mutable {
      const auto g = out.grad();
      int off2 = 0;
      for (Tensor& p : held) {
        const int pw = p.dim(1);
        if (p.requires_grad()) {
          auto dp = p.grad();
          for (int i = 0; i < r; ++i) {
            const double* gr = g.data() + static_cast<std::size_t>(i) * w + off2;
            double* dr = dp.data() + static_cast<std::size_t>(i) * pw;
            for (int j = 0; j < pw; ++j) dr[j] += gr[j];
          }
        }
        off2 += pw;
      }
    });
  }
  return out;
}

Tensor slice_cols(const Tensor& x, int offset, int length, Tape* tape) {
  require_2d(x, "slice_cols");
  const int r = x.dim(0);
  const int w = x.dim(1);
  if (offset < 0 || length <= 0 || offset + length > w) throw ShapeError("slice_cols: range out of bounds");
  const bool rg = track(tape, x.requires_grad());
  Tensor out = Tensor::zeros({r, length}, rg);
  const auto xv = x.data();
  auto ov = out.data();
  for (int i = 0; i < r; ++i) {
    std::memcpy(ov.data() + static_cast<std::size_t>(i) * length,
                xv.data() + static_cast<std::size_t>(i) * w + offset, sizeof(double) * static_cast<std::size_t>(length));
  }
  if (rg) {
    tape->record([x, out, offset, length, r, w]() mutable {
      const auto g = out.grad();
      auto dx = x.grad();
      for (int i = 0; i < r; ++i) {
        const double* gr = g.data() + static_cast<std::size_t>(i) * length;
        double* dr = dx.data() + static_cast<std::size_t>(i) * w + offset;
        for (int j = 0; j < length; ++j) dr[j] += gr[j];
      }
    });
  }
  return out;
}

Tensor concat_rows(std::span<const Tensor> parts, Tape* tape) {
  if (parts.empty()) throw ShapeError("concat_rows: no parts");
  const int w = parts.front().dim(1);
  int r = 0;
  bool any_grad = false;
  for (const Tensor& p : parts) {
    require_2d(p, "concat_rows");
    if (p.dim(1) != w) throw ShapeError("concat_rows: column mismatch");
    r += p.dim(0);
    any_grad = any_grad || p.requires_grad();
  }
  const bool rg = track(tape, any_grad);
  Tensor out = Tensor::zeros({r, w}, rg);
  auto ov = out.data();
  std::size_t pos = 0;
  for (const Tensor& p : parts) {
    const auto pv = p.data();
    std::memcpy(ov.data() + pos, pv.data(), sizeof(double) * pv.size());
    pos += pv.size();
  }
  if (rg) {
    std::vector<Tensor> held(parts.begin(), parts.end());
    tape->record([held = std::move(held), out]() mutable {
      const auto g = out.grad();
      std::size_t pos2 = 0;
      for (Tensor& p : held) {
        const std::size_t n = p.numel();
        if (p.requires_grad()) {
          auto dp = p.grad();
          for (std::size_t i = 0; i < n; ++i) dp[i] += g[pos2 + i];
        }
        pos2 += n;
      }
    });
  }
  return out;
}

Tensor dropout(const Tensor& x, double rate, bool training, std::uint64_t seed, Tape* tape) {
  if (rate < 0.0 || rate >= 1.0) throw ConfigError("dropout: rate must be in [0,1)");
  if (!training || rate == 0.0) return x;
  const bool rg = track(tape, x.requires_grad());
  Tensor out = Tensor::zeros(x.shape(), rg);
  const double keep_scale = 1.0 / (1.0 - rate);
  std::vector<std::uint8_t> keep(x.numel());
  Rng rng(seed);
  const auto xv = x.data();
  auto ov = out.data();
  for (std::size_t i = 0; i < keep.size(); ++i) {
    keep[i] = rng.uniform01() >= rate ? 1 : 0;
    ov[i] = keep[i] ? xv[i] * keep_scale : 0.0;
  }
  check_finite(out, "dropout");
  if (rg) {
    tape->record([x, out, keep = std::move(keep), keep_scale]() mutable {
      const auto g = out.grad();
      auto dx = x.grad();
      for (std::size_t i = 0; i < g.size(); ++i) {
        if (keep[i]) dx[i] += g[i] * keep_scale;
      }
    });
  }
  return out;
}

Tensor sum_all(const Tensor& x, Tape* tape) {
  const bool rg = track(tape, x.requires_grad());
  double s = 0.0;
  for (double v : x.data()) s += v;
  Tensor out = Tensor::from({1}, {s}, rg);
  check_finite(out, "sum_all");
  if (rg) {
    tape->record([x, out]() mutable {
      const double g = out.grad()[0];
      auto dx = x.grad();
      for (std::size_t i = 0; i < dx.size(); ++i) dx[i] += g;
    });
  }
  return out;
}

}  // namespace afra::numkit
