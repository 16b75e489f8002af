#pragma once

#include <cmath>
#include <deque>
#include <memory>
#include <stdexcept>
#include <string>
#include <vector>

#include "kenli/mat.hpp"
#include "kenli/rng.hpp"

namespace kenli {

struct Param {
  std::string name;
  Mat w;
  Mat g;

  void zero_grad() { g.zero(); }
};

// Owns all trainable parameters in creation order; creation order is the
// checkpoint manifest order and the optimizer slot order, so it must be
// deterministic for a given config.
class ParamStore {
 public:
  Param& create(const std::string& name, std::size_t r, std::size_t c) {
    for (const auto& p : params_)
      if (p.name == name) throw std::logic_error("duplicate param: " + name);
    params_.push_back(Param{name, Mat(r, c), Mat(r, c)});
    return params_.back();
  }

  std::vector<Param*> all() {
    std::vector<Param*> out;
    for (auto& p : params_) out.push_back(&p);
    return out;
  }
  std::vector<const Param*> all() const {
    std::vector<const Param*> out;
    for (const auto& p : params_) out.push_back(&p);
    return out;
  }

  Param* find(const std::string& name) {
    for (auto& p : params_)
      if (p.name == name) return &p;
    return nullptr;
  }

  void zero_grad() {
    for (auto& p : params_) p.zero_grad();
  }

  std::size_t count_scalars() const {
    std::size_t n = 0;
    for (const auto& p : params_) n += p.w.size();
    return n;
  }

 private:
  std::deque<Param> params_;  // deque: stable addresses across create()
};

inline void init_uniform(Param& p, Rng& rng, double lo = -0.05,
                         double hi = 0.05) {
  for (double& v : p.w.a) v = rng.uniform(lo, hi);
}

inline void init_const(Param& p, double v) {
  for (double& x : p.w.a) x = v;
}

// ---------------------------------------------------------------- linear

struct Linear {
  Param* W = nullptr;  // in x out
  Param* b = nullptr;  // 1 x out

  Linear() = default;
  Linear(ParamStore& ps, const std::string& name, std::size_t in,
         std::size_t out)
      : W(&ps.create(name + ".w", in, out)), b(&ps.create(name + ".b", 1, out)) {}

  struct Cache {
    Mat x;
  };

  Mat forward(const Mat& x, Cache* cc) const {
    if (cc) cc->x = x;
    Mat y = mul(x, W->w);
    for (std::size_t i = 0; i < y.r; ++i)
      for (std::size_t j = 0; j < y.c; ++j) y(i, j) += b->w(0, j);
    return y;
  }

  Mat backward(const Mat& dy, const Cache& cc) const {
    W->g += mul_tn(cc.x, dy);
    for (std::size_t i = 0; i < dy.r; ++i)
      for (std::size_t j = 0; j < dy.c; ++j) b->g(0, j) += dy(i, j);
    return mul_nt(dy, W->w);
  }
};

// -------------------------------------------------------------- layernorm

struct LayerNorm {
  Param* gamma = nullptr;
  Param* beta = nullptr;
  double eps = 1e-5;

  LayerNorm() = default;
  LayerNorm(ParamStore& ps, const std::string& name, std::size_t d)
      : gamma(&ps.create(name + ".gamma", 1, d)),
        beta(&ps.create(name + ".beta", 1, d)) {
    init_const(*gamma, 1.0);
  }

  struct Cache {
    Mat xhat;
    std::vector<double> inv_std;
  };

  Mat forward(const Mat& x, Cache* cc) const {
    Mat y(x.r, x.c);
    Mat xhat(x.r, x.c);
    std::vector<double> inv_std(x.r);
    for (std::size_t i = 0; i < x.r; ++i) {
      double mean = 0.0;
      for (std::size_t j = 0; j < x.c; ++j) mean += x(i, j);
      mean /= static_cast<double>(x.c);
      double var = 0.0;
      for (std::size_t j = 0; j < x.c; ++j) {
        double d = x(i, j) - mean;
        var += d * d;
      }
      var /= static_cast<double>(x.c);
      double is = 1.0 / std::sqrt(var + eps);
      inv_std[i] = is;
      for (std::size_t j = 0; j < x.c; ++j) {
        double xh = (x(i, j) - mean) * is;
        xhat(i, j) = xh;
        y(i, j) = gamma->w(0, j) * xh + beta->w(0, j);
      }
    }
    if (cc) {
      cc->xhat = std::move(xhat);
      cc->inv_std = std::move(inv_std);
    }
    return y;
  }

  Mat backward(const Mat& dy, const Cache& cc) const {
    const Mat& xhat = cc.xhat;
    Mat dx(dy.r, dy.c);
    double n = static_cast<double>(dy.c);
    for (std::size_t i = 0; i < dy.r; ++i) {
      double sum_dxhat = 0.0, sum_dxhat_xhat = 0.0;
      for (std::size_t j = 0; j < dy.c; ++j) {
        double d = dy(i, j);
        gamma->g(0, j) += d * xhat(i, j);
        beta->g(0, j) += d;
        double dxh = d * gamma->w(0, j);
        sum_dxhat += dxh;
        sum_dxhat_xhat += dxh * xhat(i, j);
      }
      for (std::size_t j = 0; j < dy.c; ++j) {
        double dxh = dy(i, j) * gamma->w(0, j);
        dx(i, j) = cc.inv_std[i] *
                   (dxh - sum_dxhat / n - xhat(i, j) * sum_dxhat_xhat / n);
      }
    }
    return dx;
  }
};

// ------------------------------------------------------------------ gelu

// Exact (erf) form; smooth, so finite-difference checks behave.
inline double gelu(double x) {
  return 0.5 * x * (1.0 + std::erf(x * M_SQRT1_2));
}

inline double gelu_grad(double x) {
  static const double kInvSqrt2Pi = 0.3989422804014326779;
  return 0.5 * (1.0 + std::erf(x * M_SQRT1_2)) +
         x * kInvSqrt2Pi * std::exp(-0.5 * x * x);
}

inline Mat gelu(const Mat& x) {
  Mat y(x.r, x.c);
  for (std::size_t i = 0; i < x.a.size(); ++i) y.a[i] = gelu(x.a[i]);
  return y;
}

inline Mat gelu_backward(const Mat& dy, const Mat& x) {
  Mat dx(x.r, x.c);
  for (std::size_t i = 0; i < x.a.size(); ++i)
    dx.a[i] = dy.a[i] * gelu_grad(x.a[i]);
  return dx;
}

// --------------------------------------------------------------- softmax

// Row-wise softmax restricted to positions where mask == 1 (mask == nullptr
// means full support). Rows with empty support come out all zero.
inline Mat masked_softmax(const Mat& s, const Mat* mask) {
  Mat p(s.r, s.c);
  for (std::size_t i = 0; i < s.r; ++i) {
    double mx = -1e300;
    bool any = false;
    for (std::size_t j = 0; j < s.c; ++j) {
      if (mask && (*mask)(i, j) == 0.0) continue;
      any = true;
      mx = std::max(mx, s(i, j));
    }
    if (!any) continue;  // all-zero row
    double z = 0.0;
    for (std::size_t j = 0; j < s.c; ++j) {
      if (mask && (*mask)(i, j) == 0.0) continue;
      double e = std::exp(s(i, j) - mx);
      p(i, j) = e;
      z += e;
    }
    for (std::size_t j = 0; j < s.c; ++j) p(i, j) /= z;
  }
  return p;
}

// dS from dP; positions outside the support have p == 0 and fall out.
inline Mat masked_softmax_backward(const Mat& p, const Mat& dp) {
  Mat ds(p.r, p.c);
  for (std::size_t i = 0; i < p.r; ++i) {
    double dot = 0.0;
    for (std::size_t j = 0; j < p.c; ++j) dot += dp(i, j) * p(i, j);
    for (std::size_t j = 0; j < p.c; ++j)
      ds(i, j) = p(i, j) * (dp(i, j) - dot);
  }
  return ds;
}

// ------------------------------------------------------------- attention

// Multi-head scaled dot-product attention. Query rows come from q_in, keys
// and values from kv_in (q_in == kv_in gives self-attention). Masks are
// per-head nq x nk binary matrices; an empty vector means no masking, a
// single entry is shared by all heads.
struct MultiHeadAttention {
  Param *Wq = nullptr, *Wk = nullptr, *Wv = nullptr;
  Param *bq = nullptr, *bk = nullptr, *bv = nullptr;
  Param *Wo = nullptr, *bo = nullptr;
  std::size_t n_heads = 0, d_head = 0, d_model = 0;

  MultiHeadAttention() = default;
  MultiHeadAttention(ParamStore& ps, const std::string& name,
                     std::size_t d_model_, std::size_t n_heads_,
                     std::size_t d_head_)
      : n_heads(n_heads_), d_head(d_head_), d_model(d_model_) {
    std::size_t dh = n_heads * d_head;
    if (dh == 0) throw std::invalid_argument(name + ": zero attention width");
    Wq = &ps.create(name + ".wq", d_model, dh);
    Wk = &ps.create(name + ".wk", d_model, dh);
    Wv = &ps.create(name + ".wv", d_model, dh);
    bq = &ps.create(name + ".bq", 1, dh);
    bk = &ps.create(name + ".bk", 1, dh);
    bv = &ps.create(name + ".bv", 1, dh);
    Wo = &ps.create(name + ".wo", dh, d_model);
    bo = &ps.create(name + ".bo", 1, d_model);
  }

  struct Cache {
    Mat q_in, kv_in;
    Mat QQ, KK, VV;       // projected, heads side by side
    std::vector<Mat> P;   // per-head attention probabilities
    Mat O;                // concatenated head outputs
  };

  Mat forward(const Mat& q_in, const Mat& kv_in,
              const std::vector<const Mat*>& masks, Cache* cc) const {
    if (q_in.c != d_model || kv_in.c != d_model)
      throw std::invalid_argument("attention: input width mismatch");
    if (!masks.empty() && masks.size() != 1 && masks.size() != n_heads)
      throw std::invalid_argument("attention: mask count mismatch");

    auto project = [&](const Mat& x, const Param* W, const Param* B) {
      Mat y = mul(x, W->w);
      for (std::size_t i = 0; i < y.r; ++i)
        for (std::size_t j = 0; j < y.c; ++j) y(i, j) += B->w(0, j);
      return y;
    };
    Mat QQ = project(q_in, Wq, bq);
    Mat KK = project(kv_in, Wk, bk);
    Mat VV = project(kv_in, Wv, bv);

    double scale = 1.0 / std::sqrt(static_cast<double>(d_head));
    Mat O(q_in.r, n_heads * d_head);
    std::vector<Mat> P(n_heads);
    for (std::size_t h = 0; h < n_heads; ++h) {
      Mat Q = cols(QQ, h * d_head, (h + 1) * d_head);
      Mat K = cols(KK, h * d_head, (h + 1) * d_head);
      Mat V = cols(VV, h * d_head, (h + 1) * d_head);
      Mat S = mul_nt(Q, K);
      S *= scale;
      const Mat* mask = nullptr;
      if (masks.size() == 1) mask = masks[0];
      else if (!masks.empty()) mask = masks[h];
      P[h] = masked_softmax(S, mask);
      Mat Oh = mul(P[h], V);
      add_into_cols(O, h * d_head, Oh);
    }
    Mat out = mul(O, Wo->w);
    for (std::size_t i = 0; i < out.r; ++i)
      for (std::size_t j = 0; j < out.c; ++j) out(i, j) += bo->w(0, j);

    if (cc) {
      cc->q_in = q_in;
      cc->kv_in = kv_in;
      cc->QQ = std::move(QQ);
      cc->KK = std::move(KK);
      cc->VV = std::move(VV);
      cc->P = std::move(P);
      cc->O = std::move(O);
    }
    return out;
  }

  struct Grads {
    Mat d_q_in;
    Mat d_kv_in;
  };

  Grads backward(const Mat& dy, const Cache& cc) const {
    Wo->g += mul_tn(cc.O, dy);
    for (std::size_t i = 0; i < dy.r; ++i)
      for (std::size_t j = 0; j < dy.c; ++j) bo->g(0, j) += dy(i, j);
    Mat dO = mul_nt(dy, Wo->w);

    double scale = 1.0 / std::sqrt(static_cast<double>(d_head));
    Mat dQQ(cc.QQ.r, cc.QQ.c), dKK(cc.KK.r, cc.KK.c), dVV(cc.VV.r, cc.VV.c);
    for (std::size_t h = 0; h < n_heads; ++h) {
      Mat dOh = cols(dO, h * d_head, (h + 1) * d_head);
      Mat Q = cols(cc.QQ, h * d_head, (h + 1) * d_head);
      Mat K = cols(cc.KK, h * d_head, (h + 1) * d_head);
      Mat V = cols(cc.VV, h * d_head, (h + 1) * d_head);
      const Mat& P = cc.P[h];

      Mat dP = mul_nt(dOh, V);
      Mat dV = mul_tn(P, dOh);
      Mat dS = masked_softmax_backward(P, dP);
      dS *= scale;
      Mat dQ = mul(dS, K);
      Mat dK = mul_tn(dS, Q);
      add_into_cols(dQQ, h * d_head, dQ);
      add_into_cols(dKK, h * d_head, dK);
      add_into_cols(dVV, h * d_head, dV);
    }

    auto unproject = [&](const Mat& d_proj, const Mat& x, Param* W, Param* B) {
      W->g += mul_tn(x, d_proj);
      for (std::size_t i = 0; i < d_proj.r; ++i)
        for (std::size_t j = 0; j < d_proj.c; ++j) B->g(0, j) += d_proj(i, j);
      return mul_nt(d_proj, W->w);
    };
    Grads g;
    g.d_q_in = unproject(dQQ, cc.q_in, Wq, bq);
    g.d_kv_in = unproject(dKK, cc.kv_in, Wk, bk);
    g.d_kv_in += unproject(dVV, cc.kv_in, Wv, bv);
    return g;
  }
};

// ------------------------------------------------------------ feedforward

struct FeedForward {
  Linear fc1, fc2;

  FeedForward() = default;
  FeedForward(ParamStore& ps, const std::string& name, std::size_t d,
              std::size_t d_ff)
      : fc1(ps, name + ".fc1", d, d_ff), fc2(ps, name + ".fc2", d_ff, d) {}

  struct Cache {
    Linear::Cache c1, c2;
    Mat pre_act;
  };

  Mat forward(const Mat& x, Cache* cc) const {
    Mat h = fc1.forward(x, cc ? &cc->c1 : nullptr);
    if (cc) cc->pre_act = h;
    Mat a = gelu(h);
    return fc2.forward(a, cc ? &cc->c2 : nullptr);
  }

  Mat backward(const Mat& dy, const Cache& cc) const {
    Mat da = fc2.backward(dy, cc.c2);
    Mat dh = gelu_backward(da, cc.pre_act);
    return fc1.backward(dh, cc.c1);
  }
};

// ---------------------------------------------------------- encoder layer

// Pre-normalization transformer layer:
//   x = x + Attn(LN1(x)); x = x + FFN(LN2(x))
struct EncoderLayer {
  LayerNorm ln1, ln2;
  MultiHeadAttention attn;
  FeedForward ffn;
  bool use_ffn = true;

  EncoderLayer() = default;
  EncoderLayer(ParamStore& ps, const std::string& name, std::size_t d,
               std::size_t n_heads, std::size_t d_head, std::size_t d_ff,
               bool use_ffn_ = true)
      : ln1(ps, name + ".ln1", d),
        ln2(),
        attn(ps, name + ".attn", d, n_heads, d_head),
        use_ffn(use_ffn_) {
    if (use_ffn) {
      ln2 = LayerNorm(ps, name + ".ln2", d);
      ffn = FeedForward(ps, name + ".ffn", d, d_ff);
    }
  }

  struct Cache {
    LayerNorm::Cache ln1c, ln2c;
    MultiHeadAttention::Cache attnc;
    FeedForward::Cache ffnc;
  };

  // Self-attention with optional per-head masks.
  Mat forward(const Mat& x, const std::vector<const Mat*>& masks,
              Cache* cc) const {
    Mat a = ln1.forward(x, cc ? &cc->ln1c : nullptr);
    Mat x1 = x + attn.forward(a, a, masks, cc ? &cc->attnc : nullptr);
    if (!use_ffn) return x1;
    Mat f = ln2.forward(x1, cc ? &cc->ln2c : nullptr);
    return x1 + ffn.forward(f, cc ? &cc->ffnc : nullptr);
  }

  Mat backward(const Mat& dy, const Cache& cc) const {
    Mat dx1 = dy;
    if (use_ffn) {
      Mat df = ffn.backward(dy, cc.ffnc);
      dx1 += ln2.backward(df, cc.ln2c);
    }
    auto ag = attn.backward(dx1, cc.attnc);
    Mat da = ag.d_q_in + ag.d_kv_in;
    Mat dx = dx1 + ln1.backward(da, cc.ln1c);
    return dx;
  }
};

// -------------------------------------------------------------- embedding

struct Embedding {
  Param* table = nullptr;

  Embedding() = default;
  Embedding(ParamStore& ps, const std::string& name, std::size_t n,
            std::size_t d)
      : table(&ps.create(name, n, d)) {}

  struct Cache {
    std::vector<int> ids;
  };

  Mat forward(const std::vector<int>& ids, Cache* cc) const {
    Mat out(ids.size(), table->w.c);
    for (std::size_t i = 0; i < ids.size(); ++i) {
      if (ids[i] < 0 || static_cast<std::size_t>(ids[i]) >= table->w.r)
        throw std::out_of_range("embedding id out of range");
      for (std::size_t j = 0; j < table->w.c; ++j)
        out(i, j) = table->w(static_cast<std::size_t>(ids[i]), j);
    }
    if (cc) cc->ids = ids;
    return out;
  }

  void backward(const Mat& dy, const Cache& cc) const {
    for (std::size_t i = 0; i < cc.ids.size(); ++i)
      for (std::size_t j = 0; j < dy.c; ++j)
        table->g(static_cast<std::size_t>(cc.ids[i]), j) += dy(i, j);
  }
};

}  // namespace kenli
