#pragma once

#include <stdexcept>
#include <string>
#include <vector>

#include "kenli/bridge.hpp"
#include "kenli/nn.hpp"

namespace kenli {

// Binary attention masks derived from one working set.
//   relation_masks[k](i,j) = 1  iff  i == j or (E[i], R[k], E[j]) in KG
//   link_mask(i,j)         = 1  iff  i < |T| and (i == j or token i is
//                                    linked to entity j - |T|)
// Entity rows of link_mask are all zero: entities are not updated here.
struct MaskSet {
  std::vector<Mat> relation_masks;  // each |E| x |E|
  Mat link_mask;                    // (|T|+|E|) x (|T|+|E|)
};

inline MaskSet build_masks(const EntityWorkingSet& ws) {
  std::size_t ne = ws.entity_count();
  std::size_t nt = ws.linked_token_count();
  MaskSet ms;
  ms.relation_masks.reserve(ws.relations.size());
  for (std::size_t k = 0; k < ws.relations.size(); ++k) {
    Mat m(ne, ne);
    for (std::size_t i = 0; i < ne; ++i) m(i, i) = 1.0;
    for (const auto& [i, j] : ws.adjacency[k])
      m(static_cast<std::size_t>(i), static_cast<std::size_t>(j)) = 1.0;
    ms.relation_masks.push_back(std::move(m));
  }
  ms.link_mask = Mat(nt + ne, nt + ne);
  for (std::size_t i = 0; i < nt; ++i) {
    ms.link_mask(i, i) = 1.0;
    ms.link_mask(i, nt + static_cast<std::size_t>(ws.linked_tokens[i].entity)) =
        1.0;
  }
  return ms;
}

// TR2: tokens are queries over the concatenated [tokens; entities] sequence;
// single head; only token rows are recomputed.
struct TR2 {
  LayerNorm ln1, ln2;
  MultiHeadAttention attn;
  FeedForward ffn;
  bool use_ffn = true;

  TR2() = default;
  TR2(ParamStore& ps, const std::string& name, std::size_t d, std::size_t d_ff,
      bool use_ffn_)
      : ln1(ps, name + ".ln1", d),
        attn(ps, name + ".attn", d, 1, d),
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
    std::size_t n_tok = 0, n_ent = 0;
  };

  // mask_rows: the top |T| rows of the link mask, |T| x (|T|+|E|).
  Mat forward(const Mat& t, const Mat& e, const Mat& mask_rows,
              Cache* cc) const {
    Mat x = vcat(t, e);
    Mat a = ln1.forward(x, cc ? &cc->ln1c : nullptr);
    Mat q = rows(a, 0, t.r);
    Mat attn_out =
        attn.forward(q, a, {&mask_rows}, cc ? &cc->attnc : nullptr);
    Mat t1 = t + attn_out;
    if (cc) {
      cc->n_tok = t.r;
      cc->n_ent = e.r;
    }
    if (!use_ffn) return t1;
    Mat f = ln2.forward(t1, cc ? &cc->ln2c : nullptr);
    return t1 + ffn.forward(f, cc ? &cc->ffnc : nullptr);
  }

  struct Grads {
    Mat dt;
    Mat de;
  };

  Grads backward(const Mat& dy, const Cache& cc) const {
    Mat dt1 = dy;
    if (use_ffn) {
      Mat df = ffn.backward(dy, cc.ffnc);
      dt1 += ln2.backward(df, cc.ln2c);
    }
    auto ag = attn.backward(dt1, cc.attnc);
    Mat da = ag.d_kv_in;  // gradient into ln1 output, full sequence
    for (std::size_t i = 0; i < cc.n_tok; ++i)
      for (std::size_t j = 0; j < da.c; ++j) da(i, j) += ag.d_q_in(i, j);
    Mat dx = ln1.backward(da, cc.ln1c);
    Grads g;
    g.dt = rows(dx, 0, cc.n_tok);
    g.dt += dt1;  // residual t1 = t + attn
    g.de = rows(dx, cc.n_tok, cc.n_tok + cc.n_ent);
    return g;
  }
};

// One KE cell: TR1 (relation-per-head entity self-attention) followed by
// TR2 (token update from the refreshed entities).
struct KECell {
  EncoderLayer tr1;
  TR2 tr2;

  KECell() = default;
  KECell(ParamStore& ps, const std::string& name, std::size_t d,
         std::size_t n_relations, std::size_t d_ff, bool use_ffn)
      : tr1(ps, name + ".tr1", d, std::max<std::size_t>(n_relations, 1),
            d / std::max<std::size_t>(n_relations, 1), d_ff, use_ffn),
        tr2(ps, name + ".tr2", d, d_ff, use_ffn) {}

  struct Cache {
    EncoderLayer::Cache tr1c;
    TR2::Cache tr2c;
  };
};

// L stacked KE cells plus the residual merge t0 + tL.
struct KENet {
  std::vector<KECell> cells;

  KENet() = default;
  KENet(ParamStore& ps, const std::string& name, std::size_t d, std::size_t L,
        std::size_t n_relations, std::size_t d_ff, bool use_ffn) {
    if (L < 1) throw std::invalid_argument("KE cell count must be >= 1");
    if (d / std::max<std::size_t>(n_relations, 1) == 0)
      throw std::invalid_argument(
          "embedding dim too small for one head per relation");
    cells.reserve(L);
    for (std::size_t l = 0; l < L; ++l)
      cells.emplace_back(ps, name + ".cell" + std::to_string(l), d,
                         n_relations, d_ff, use_ffn);
  }

  struct Cache {
    std::vector<KECell::Cache> cellc;
    Mat tr2_mask;  // token rows of the link mask
    std::size_t n_tok = 0;
  };

  // t0: |T| x d linked-token states; e0: |E| x d initial entity states.
  // Returns t0 + tL. |T| == 0 short-circuits to an empty matrix.
  Mat forward(const Mat& t0, const Mat& e0, const MaskSet& masks,
              Cache* cc) const {
    if (cc) cc->n_tok = t0.r;
    if (t0.r == 0) return t0;
    std::vector<const Mat*> rel_masks;
    rel_masks.reserve(masks.relation_masks.size());
    for (const auto& m : masks.relation_masks) rel_masks.push_back(&m);
    Mat tr2_mask = rows(masks.link_mask, 0, t0.r);

    Mat t = t0, e = e0;
    if (cc) cc->cellc.resize(cells.size());
    for (std::size_t l = 0; l < cells.size(); ++l) {
      KECell::Cache* cl = cc ? &cc->cellc[l] : nullptr;
      e = cells[l].tr1.forward(e, rel_masks, cl ? &cl->tr1c : nullptr);
      t = cells[l].tr2.forward(t, e, tr2_mask, cl ? &cl->tr2c : nullptr);
    }
    if (cc) cc->tr2_mask = std::move(tr2_mask);
    return t0 + t;
  }

  struct Grads {
    Mat dt0;
    Mat de0;
  };

  Grads backward(const Mat& d_out, const Cache& cc) const {
    Grads g;
    if (cc.n_tok == 0) {
      g.dt0 = d_out;
      return g;
    }
    Mat dt = d_out;   // gradient into t^L
    Mat de;           // gradient into e^l, accumulated down the stack
    for (std::size_t l = cells.size(); l-- > 0;) {
      auto tg = cells[l].tr2.backward(dt, cc.cellc[l].tr2c);
      dt = std::move(tg.dt);
      if (de.empty() && de.r == 0) de = std::move(tg.de);
      else de += tg.de;
      de = cells[l].tr1.backward(de, cc.cellc[l].tr1c);
    }
    g.dt0 = d_out + dt;  // merge residual: out = t0 + tL
    g.de0 = std::move(de);
    return g;
  }
};

}  // namespace kenli
