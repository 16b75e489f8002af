#pragma once

#include <array>
#include <bit>
#include <cmath>
#include <cstdint>
#include <cstring>
#include <fstream>
#include <map>
#include <memory>
#include <optional>
#include <set>
#include <stdexcept>
#include <string>
#include <vector>

#include <json.hpp>

#include "kenli/bridge.hpp"
#include "kenli/kenet.hpp"
#include "kenli/kgraph.hpp"
#include "kenli/linker.hpp"
#include "kenli/nn.hpp"
#include "kenli/optim.hpp"
#include "kenli/rng.hpp"
#include "kenli/text.hpp"

namespace kenli {

using json = nlohmann::json;

enum class NLILabel : int { entailment = 0, contradiction = 1, neutral = 2 };
inline constexpr int kNumLabels = 3;

inline const char* to_string(NLILabel l) {
  switch (l) {
    case NLILabel::entailment: return "entailment";
    case NLILabel::contradiction: return "contradiction";
    case NLILabel::neutral: return "neutral";
  }
  return "?";
}

inline NLILabel label_from_string(const std::string& s) {
  if (s == "entailment") return NLILabel::entailment;
  if (s == "contradiction") return NLILabel::contradiction;
  if (s == "neutral") return NLILabel::neutral;
  throw std::invalid_argument("unknown NLI label: '" + s + "'");
}

struct NLIPair {
  std::string premise;
  std::string hypothesis;
  std::optional<NLILabel> label;
};

struct Prediction {
  std::array<double, 3> probs{};  // entailment, contradiction, neutral
  NLILabel label = NLILabel::entailment;
};

// -------------------------------------------------------------- vocabulary

struct Vocab {
  static constexpr int kCls = 0, kSep = 1, kUnk = 2;

  std::vector<std::string> words;  // specials first, then sorted unique words
  std::map<std::string, int> index;

  static Vocab build(const std::vector<std::string>& plain_words) {
    Vocab v;
    v.words = {"[CLS]", "[SEP]", "[UNK]"};
    std::set<std::string> uniq(plain_words.begin(), plain_words.end());
    uniq.erase("[CLS]");
    uniq.erase("[SEP]");
    uniq.erase("[UNK]");
    for (const auto& w : uniq) v.words.push_back(w);
    for (std::size_t i = 0; i < v.words.size(); ++i)
      v.index[v.words[i]] = static_cast<int>(i);
    return v;
  }

  int id(const std::string& w) const {
    auto it = index.find(w);
    return it == index.end() ? kUnk : it->second;
  }

  std::size_t size() const { return words.size(); }
};

// ------------------------------------------------------------------ config

struct ModelConfig {
  std::size_t d = 64;
  std::size_t n_layers_enc1 = 3;
  std::size_t n_layers_enc2 = 1;
  std::size_t n_heads = 4;
  std::size_t L = 2;
  std::size_t lambda = 20;
  std::size_t nu = 2;
  std::size_t d_ff = 0;  // 0 -> 2 * d
  std::size_t max_seq = 128;
  bool use_ffn = true;
  bool link_both_sides = true;
  std::string link_method = "stem";  // stem | dictionary
  std::uint64_t seed = 1;
  std::vector<std::string> vocab_words;  // without specials

  std::size_t ff_dim() const { return d_ff ? d_ff : 2 * d; }

  // Throws std::invalid_argument naming the offending field.
  void validate(std::size_t n_relations) const {
    if (d == 0) throw std::invalid_argument("config field d must be positive");
    if (n_heads == 0 || d % n_heads != 0)
      throw std::invalid_argument(
          "config field n_heads must be positive and divide d");
    if (n_layers_enc1 == 0 || n_layers_enc2 == 0)
      throw std::invalid_argument(
          "config fields n_layers_enc1/n_layers_enc2 must be positive");
    if (L == 0) throw std::invalid_argument("config field L must be positive");
    if (max_seq < 2)
      throw std::invalid_argument("config field max_seq must be >= 2");
    if (link_method != "stem" && link_method != "dictionary")
      throw std::invalid_argument(
          "config field link_method must be 'stem' or 'dictionary'");
    if (n_relations > 0 && d / n_relations == 0)
      throw std::invalid_argument(
          "config field d too small for one TR1 head per relation");
  }
};

inline void to_json(json& j, const ModelConfig& c) {
  j = json{{"d", c.d},
           {"n_layers_enc1", c.n_layers_enc1},
           {"n_layers_enc2", c.n_layers_enc2},
           {"n_heads", c.n_heads},
           {"L", c.L},
           {"lambda", c.lambda},
           {"nu", c.nu},
           {"d_ff", c.d_ff},
           {"max_seq", c.max_seq},
           {"use_ffn", c.use_ffn},
           {"link_both_sides", c.link_both_sides},
           {"link_method", c.link_method},
           {"seed", c.seed},
           {"vocab_words", c.vocab_words}};
}

inline void from_json(const json& j, ModelConfig& c) {
  ModelConfig defaults;
  c.d = j.value("d", defaults.d);
  c.n_layers_enc1 = j.value("n_layers_enc1", defaults.n_layers_enc1);
  c.n_layers_enc2 = j.value("n_layers_enc2", defaults.n_layers_enc2);
  c.n_heads = j.value("n_heads", defaults.n_heads);
  c.L = j.value("L", defaults.L);
  c.lambda = j.value("lambda", defaults.lambda);
  c.nu = j.value("nu", defaults.nu);
  c.d_ff = j.value("d_ff", defaults.d_ff);
  c.max_seq = j.value("max_seq", defaults.max_seq);
  c.use_ffn = j.value("use_ffn", defaults.use_ffn);
  c.link_both_sides = j.value("link_both_sides", defaults.link_both_sides);
  c.link_method = j.value("link_method", defaults.link_method);
  c.seed = j.value("seed", defaults.seed);
  c.vocab_words = j.value("vocab_words", defaults.vocab_words);
}

// ------------------------------------------------------------------- model

// Encoder1 -> KE Net -> Encoder2 -> 3-way head on CLS. Entity embeddings are
// recomputed from canonical names through Encoder1 on every forward pass.
class KENLIModel {
 public:
  KENLIModel(ModelConfig cfg, const KnowledgeGraph* kg,
             std::map<std::string, std::string> lexicon = {})
      : cfg_(std::move(cfg)), kg_(kg), lexicon_(std::move(lexicon)) {
    static_assert(std::endian::native == std::endian::little,
                  "checkpoint format assumes a little-endian host");
    if (!kg_) throw std::invalid_argument("model requires a knowledge graph");
    cfg_.validate(kg_->relations().size());
    vocab_ = Vocab::build(cfg_.vocab_words);

    std::size_t d = cfg_.d, dff = cfg_.ff_dim();
    tok_emb_ = Embedding(ps_, "tok_emb", vocab_.size(), d);
    pos_emb_ = Embedding(ps_, "pos_emb", cfg_.max_seq, d);
    for (std::size_t i = 0; i < cfg_.n_layers_enc1; ++i)
      enc1_.emplace_back(ps_, "enc1.layer" + std::to_string(i), d,
                         cfg_.n_heads, d / cfg_.n_heads, dff, true);
    kenet_ = KENet(ps_, "kenet", d, cfg_.L, kg_->relations().size(), dff,
                   cfg_.use_ffn);
    for (std::size_t i = 0; i < cfg_.n_layers_enc2; ++i)
      enc2_.emplace_back(ps_, "enc2.layer" + std::to_string(i), d,
                         cfg_.n_heads, d / cfg_.n_heads, dff, true);
    head_ = Linear(ps_, "head", d, kNumLabels);

    init_params();
  }

  KENLIModel(const KENLIModel&) = delete;
  KENLIModel& operator=(const KENLIModel&) = delete;
  // Moves are safe: deque guarantees element addresses survive a move, so
  // the Param* held by the layers stay valid.
  KENLIModel(KENLIModel&&) = default;
  KENLIModel& operator=(KENLIModel&&) = default;

  const ModelConfig& config() const { return cfg_; }
  const Vocab& vocab() const { return vocab_; }
  const KnowledgeGraph& kg() const { return *kg_; }
  ParamStore& param_store() { return ps_; }
  const ParamStore& param_store() const { return ps_; }

  std::vector<EntityMention> link(const TokenizedText& tt) const {
    if (cfg_.link_method == "dictionary")
      return link_by_dictionary(tt, lexicon_);
    return link_by_stem(tt, *kg_);
  }

  EntityWorkingSet working_set(const NLIPair& pair) const {
    TokenizedText p = tokenize(pair.premise), h = tokenize(pair.hypothesis);
    return select_working_set(*kg_, p, link(p), h, link(h), cfg_.lambda,
                              cfg_.nu, cfg_.link_both_sides);
  }

  struct EntityEncCache {
    Embedding::Cache tokc, posc;
    std::vector<EncoderLayer::Cache> layers;
    std::size_t n_tokens = 0;
  };

  struct ForwardCache {
    Embedding::Cache tokc, posc;
    std::vector<EncoderLayer::Cache> enc1c;
    EntityWorkingSet ws;
    MaskSet masks;
    std::vector<std::size_t> gather_pos;
    std::vector<EntityEncCache> entc;
    KENet::Cache kenetc;
    std::vector<EncoderLayer::Cache> enc2c;
    Linear::Cache headc;
    std::array<double, 3> probs{};
    std::size_t seq_len = 0;
  };

  // e0_i = sum of Encoder1 outputs over entity i's canonical-name tokens.
  Mat init_entity_embeddings(const EntityWorkingSet& ws,
                             std::vector<EntityEncCache>* caches) const {
    Mat e0(ws.entities.size(), cfg_.d);
    if (caches) caches->resize(ws.entities.size());
    for (std::size_t i = 0; i < ws.entities.size(); ++i) {
      const std::string* name = kg_->entity_name(ws.entities[i]);
      if (!name) throw std::invalid_argument("entity not in graph: " +
                                             ws.entities[i]);
      TokenizedText tt = tokenize(*name);
      if (tt.tokens.empty())
        throw std::invalid_argument("entity has empty name: " +
                                    ws.entities[i]);
      EntityEncCache local;
      EntityEncCache* ec = caches ? &(*caches)[i] : &local;
      Mat h = encode1(token_ids(tt), ec);
      for (std::size_t t = 0; t < h.r; ++t)
        for (std::size_t j = 0; j < h.c; ++j) e0(i, j) += h(t, j);
    }
    return e0;
  }

  Prediction forward(const NLIPair& pair, ForwardCache* cc = nullptr) const {
    ForwardCache local;
    ForwardCache& c = cc ? *cc : local;

    TokenizedText p = tokenize(pair.premise), h = tokenize(pair.hypothesis);
    auto pm = link(p);
    auto hm = link(h);
    c.ws = select_working_set(*kg_, p, pm, h, hm, cfg_.lambda, cfg_.nu,
                              cfg_.link_both_sides);
    c.masks = build_masks(c.ws);

    // [CLS] P [SEP] H
    std::vector<int> ids;
    ids.push_back(Vocab::kCls);
    for (const auto& t : p.tokens) ids.push_back(vocab_.id(t.surface));
    ids.push_back(Vocab::kSep);
    for (const auto& t : h.tokens) ids.push_back(vocab_.id(t.surface));
    if (ids.size() > cfg_.max_seq)
      throw std::invalid_argument("sequence longer than max_seq (" +
                                  std::to_string(ids.size()) + " > " +
                                  std::to_string(cfg_.max_seq) + ")");
    c.seq_len = ids.size();

    c.enc1c.resize(enc1_.size());
    Mat x = tok_emb_.forward(ids, &c.tokc);
    x += pos_emb_.forward(iota_ids(ids.size()), &c.posc);
    for (std::size_t i = 0; i < enc1_.size(); ++i)
      x = enc1_[i].forward(x, {}, &c.enc1c[i]);

    // KE Net over linked-token rows.
    c.gather_pos.clear();
    for (const auto& lt : c.ws.linked_tokens)
      c.gather_pos.push_back(seq_position(lt, p.tokens.size()));
    Mat t0(c.gather_pos.size(), cfg_.d);
    for (std::size_t i = 0; i < c.gather_pos.size(); ++i)
      for (std::size_t j = 0; j < cfg_.d; ++j)
        t0(i, j) = x(c.gather_pos[i], j);
    Mat e0 = init_entity_embeddings(c.ws, &c.entc);
    Mat merged = kenet_.forward(t0, e0, c.masks, &c.kenetc);
    for (std::size_t i = 0; i < c.gather_pos.size(); ++i)
      for (std::size_t j = 0; j < cfg_.d; ++j)
        x(c.gather_pos[i], j) = merged(i, j);

    c.enc2c.resize(enc2_.size());
    for (std::size_t i = 0; i < enc2_.size(); ++i)
      x = enc2_[i].forward(x, {}, &c.enc2c[i]);

    Mat cls = x.row(0);
    Mat logits = head_.forward(cls, &c.headc);
    double mx = std::max({logits(0, 0), logits(0, 1), logits(0, 2)});
    double z = 0.0;
    for (int k = 0; k < kNumLabels; ++k) z += std::exp(logits(0, k) - mx);
    for (int k = 0; k < kNumLabels; ++k)
      c.probs[static_cast<std::size_t>(k)] = std::exp(logits(0, k) - mx) / z;

    Prediction pred;
    pred.probs = c.probs;
    pred.label = NLILabel::entailment;
    for (int k = 1; k < kNumLabels; ++k)
      if (c.probs[static_cast<std::size_t>(k)] >
          pred.probs[static_cast<std::size_t>(static_cast<int>(pred.label))])
        pred.label = static_cast<NLILabel>(k);
    return pred;
  }

  // Cross-entropy of one labeled pair; gradients accumulate into the store.
  double accumulate_gradients(const NLIPair& pair, NLILabel gold) {
    ForwardCache c;
    forward(pair, &c);
    double loss =
        -std::log(std::max(c.probs[static_cast<std::size_t>(
                               static_cast<int>(gold))],
                           1e-300));
    backward(gold, c);
    return loss;
  }

  double loss(const NLIPair& pair, NLILabel gold) const {
    Prediction pr = forward(pair);
    return -std::log(std::max(
        pr.probs[static_cast<std::size_t>(static_cast<int>(gold))], 1e-300));
  }

  struct TrainSettings {
    std::size_t epochs = 10;
    std::size_t batch_size = 8;
    AdamConfig adam;
  };

  struct EpochStats {
    double loss = 0.0;
    double accuracy = 0.0;
  };

  std::vector<EpochStats> train(const std::vector<NLIPair>& data,
                                const TrainSettings& ts) {
    if (data.empty()) throw std::invalid_argument("empty training set");
    for (const auto& pr : data) {
      if (!pr.label) throw std::invalid_argument("unlabeled pair in training set");
      if (pr.premise.empty() || pr.hypothesis.empty())
        throw std::invalid_argument("empty text in labeled training pair");
    }
    Adam opt(ps_.all(), ts.adam);
    Rng rng(hash_seed(cfg_.seed, "train"));
    std::vector<std::size_t> order(data.size());
    for (std::size_t i = 0; i < order.size(); ++i) order[i] = i;

    std::vector<EpochStats> history;
    for (std::size_t epoch = 0; epoch < ts.epochs; ++epoch) {
      rng.shuffle(order);
      double loss_sum = 0.0;
      std::size_t correct = 0;
      std::size_t done = 0;
      while (done < order.size()) {
        std::size_t batch = std::min(ts.batch_size, order.size() - done);
        ps_.zero_grad();
        for (std::size_t b = 0; b < batch; ++b) {
          const NLIPair& pr = data[order[done + b]];
          ForwardCache c;
          Prediction pred = forward(pr, &c);
          if (pred.label == *pr.label) ++correct;
          loss_sum -= std::log(std::max(
              c.probs[static_cast<std::size_t>(static_cast<int>(*pr.label))],
              1e-300));
          backward(*pr.label, c);
        }
        scale_grads(1.0 / static_cast<double>(batch));
        opt.step(ps_.all());
        done += batch;
      }
      history.push_back(EpochStats{loss_sum / static_cast<double>(data.size()),
                                   static_cast<double>(correct) /
                                       static_cast<double>(data.size())});
    }
    return history;
  }

  std::vector<Prediction> predict_all(const std::vector<NLIPair>& data) const {
    std::vector<Prediction> out;
    out.reserve(data.size());
    for (const auto& pr : data) out.push_back(forward(pr));
    return out;
  }

  // Bag-of-token-embedding text vector (used by retrieval similarity).
  Mat embed_text(const std::string& text) const {
    Mat v(1, cfg_.d);
    for (const auto& t : tokenize(text).tokens) {
      int id = vocab_.id(t.surface);
      for (std::size_t j = 0; j < cfg_.d; ++j)
        v(0, j) += tok_emb_.table->w(static_cast<std::size_t>(id), j);
    }
    return v;
  }

  // ------------------------------------------------------------ checkpoint

  static constexpr char kMagic[9] = "KENLICKP";
  static constexpr std::uint32_t kVersion = 1;

  void save_checkpoint(const std::string& path) const {
    json manifest = json::array();
    for (const Param* p : ps_.all())
      manifest.push_back(
          json{{"name", p->name}, {"rows", p->w.r}, {"cols", p->w.c}});
    json header = {{"config", cfg_},
                   {"relations", kg_->relations()},
                   {"manifest", manifest}};
    std::string hs = header.dump();

    std::ofstream out(path, std::ios::binary);
    if (!out) throw std::runtime_error("cannot write checkpoint: " + path);
    out.write(kMagic, 8);
    std::uint32_t ver = kVersion;
    out.write(reinterpret_cast<const char*>(&ver), 4);
    std::uint64_t hlen = hs.size();
    out.write(reinterpret_cast<const char*>(&hlen), 8);
    out.write(hs.data(), static_cast<std::streamsize>(hs.size()));
    for (const Param* p : ps_.all())
      out.write(reinterpret_cast<const char*>(p->w.a.data()),
                static_cast<std::streamsize>(p->w.size() * sizeof(double)));
    if (!out) throw std::runtime_error("checkpoint write failed: " + path);
  }

  static KENLIModel load_checkpoint(const std::string& path,
                                    const KnowledgeGraph* kg,
                                    std::map<std::string, std::string> lexicon = {}) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw std::runtime_error("cannot open checkpoint: " + path);
    char magic[8];
    in.read(magic, 8);
    if (!in || std::memcmp(magic, kMagic, 8) != 0)
      throw std::runtime_error("not a checkpoint file: " + path);
    std::uint32_t ver = 0;
    in.read(reinterpret_cast<char*>(&ver), 4);
    if (ver != kVersion)
      throw std::runtime_error("unsupported checkpoint version " +
                               std::to_string(ver));
    std::uint64_t hlen = 0;
    in.read(reinterpret_cast<char*>(&hlen), 8);
    std::string hs(hlen, '\0');
    in.read(hs.data(), static_cast<std::streamsize>(hlen));
    if (!in) throw std::runtime_error("truncated checkpoint header: " + path);
    json header = json::parse(hs);

    ModelConfig cfg = header.at("config").get<ModelConfig>();
    std::vector<std::string> rels =
        header.at("relations").get<std::vector<std::string>>();
    if (!kg) throw std::invalid_argument("model requires a knowledge graph");
    if (kg->relations() != rels)
      throw std::runtime_error(
          "checkpoint was trained against a different relation set");

    KENLIModel model(cfg, kg, std::move(lexicon));
    const json& manifest = header.at("manifest");
    auto params = model.ps_.all();
    if (manifest.size() != params.size())
      throw std::runtime_error("checkpoint manifest size mismatch");
    for (std::size_t i = 0; i < params.size(); ++i) {
      const json& m = manifest[i];
      if (m.at("name").get<std::string>() != params[i]->name ||
          m.at("rows").get<std::size_t>() != params[i]->w.r ||
          m.at("cols").get<std::size_t>() != params[i]->w.c)
        throw std::runtime_error("checkpoint manifest mismatch at " +
                                 params[i]->name);
      in.read(reinterpret_cast<char*>(params[i]->w.a.data()),
              static_cast<std::streamsize>(params[i]->w.size() *
                                           sizeof(double)));
    }
    if (!in) throw std::runtime_error("truncated checkpoint data: " + path);
    char extra;
    if (in.read(&extra, 1))
      throw std::runtime_error("trailing bytes in checkpoint: " + path);
    return model;
  }

 private:
  void init_params() {
    Rng rng(hash_seed(cfg_.seed, "init"));
    for (Param* p : ps_.all()) {
      bool is_gamma = p->name.size() >= 6 &&
                      p->name.compare(p->name.size() - 6, 6, ".gamma") == 0;
      bool is_beta = p->name.size() >= 5 &&
                     p->name.compare(p->name.size() - 5, 5, ".beta") == 0;
      if (is_gamma) init_const(*p, 1.0);
      else if (is_beta) init_const(*p, 0.0);
      else init_uniform(*p, rng);
    }
  }

  static std::vector<int> iota_ids(std::size_t n) {
    std::vector<int> v(n);
    for (std::size_t i = 0; i < n; ++i) v[i] = static_cast<int>(i);
    return v;
  }

  std::vector<int> token_ids(const TokenizedText& tt) const {
    std::vector<int> ids;
    ids.reserve(tt.tokens.size());
    for (const auto& t : tt.tokens) ids.push_back(vocab_.id(t.surface));
    return ids;
  }

  std::size_t seq_position(const LinkedToken& lt,
                           std::size_t premise_len) const {
    // [CLS] P [SEP] H
    if (lt.side == 0) return 1 + static_cast<std::size_t>(lt.index);
    return 1 + premise_len + 1 + static_cast<std::size_t>(lt.index);
  }

  Mat encode1(const std::vector<int>& ids, EntityEncCache* ec) const {
    if (ids.size() > cfg_.max_seq)
      throw std::invalid_argument("entity name longer than max_seq");
    ec->n_tokens = ids.size();
    ec->layers.resize(enc1_.size());
    Mat x = tok_emb_.forward(ids, &ec->tokc);
    x += pos_emb_.forward(iota_ids(ids.size()), &ec->posc);
    for (std::size_t i = 0; i < enc1_.size(); ++i)
      x = enc1_[i].forward(x, {}, &ec->layers[i]);
    return x;
  }

  void backward(NLILabel gold, const ForwardCache& c) {
    Mat dlogits(1, kNumLabels);
    for (int k = 0; k < kNumLabels; ++k)
      dlogits(0, k) = c.probs[static_cast<std::size_t>(k)] -
                      (k == static_cast<int>(gold) ? 1.0 : 0.0);
    Mat dcls = head_.backward(dlogits, c.headc);

    Mat dx(c.seq_len, cfg_.d);
    dx.set_row(0, dcls);
    for (std::size_t i = enc2_.size(); i-- > 0;)
      dx = enc2_[i].backward(dx, c.enc2c[i]);

    // Linked rows were replaced by KE-Net output; their gradient flows
    // through the net, everything else passes straight to Encoder1.
    Mat dmerged(c.gather_pos.size(), cfg_.d);
    for (std::size_t i = 0; i < c.gather_pos.size(); ++i) {
      for (std::size_t j = 0; j < cfg_.d; ++j) {
        dmerged(i, j) = dx(c.gather_pos[i], j);
        dx(c.gather_pos[i], j) = 0.0;
      }
    }
    auto kg_grads = kenet_.backward(dmerged, c.kenetc);
    for (std::size_t i = 0; i < c.gather_pos.size(); ++i)
      for (std::size_t j = 0; j < cfg_.d; ++j)
        dx(c.gather_pos[i], j) += kg_grads.dt0(i, j);

    // Entity-embedding initialization backward.
    if (kg_grads.de0.r > 0) {
      for (std::size_t i = 0; i < c.ws.entities.size(); ++i) {
        const EntityEncCache& ec = c.entc[i];
        Mat dh(ec.n_tokens, cfg_.d);
        for (std::size_t t = 0; t < ec.n_tokens; ++t)
          for (std::size_t j = 0; j < cfg_.d; ++j)
            dh(t, j) = kg_grads.de0(i, j);
        for (std::size_t l = enc1_.size(); l-- > 0;)
          dh = enc1_[l].backward(dh, ec.layers[l]);
        tok_emb_.backward(dh, ec.tokc);
        pos_emb_.backward(dh, ec.posc);
      }
    }

    for (std::size_t i = enc1_.size(); i-- > 0;)
      dx = enc1_[i].backward(dx, c.enc1c[i]);
    tok_emb_.backward(dx, c.tokc);
    pos_emb_.backward(dx, c.posc);
  }

  void scale_grads(double s) {
    for (Param* p : ps_.all()) p->g *= s;
  }

  ModelConfig cfg_;
  const KnowledgeGraph* kg_;
  std::map<std::string, std::string> lexicon_;
  Vocab vocab_;
  ParamStore ps_;
  Embedding tok_emb_, pos_emb_;
  std::vector<EncoderLayer> enc1_;
  KENet kenet_;
  std::vector<EncoderLayer> enc2_;
  Linear head_;
};

}  // namespace kenli
