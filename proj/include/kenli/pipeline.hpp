#pragma once

#include <algorithm>
#include <cmath>
#include <functional>
#include <iostream>
#include <map>
#include <set>
#include <stdexcept>
#include <string>
#include <vector>

#include "kenli/kgraph.hpp"
#include "kenli/linker.hpp"
#include "kenli/mat.hpp"
#include "kenli/model.hpp"
#include "kenli/rng.hpp"
#include "kenli/search.hpp"
#include "kenli/text.hpp"
#include "kenli/tfidf.hpp"

namespace kenli {

struct Statement {
  std::string id;
  std::string text;
  std::string source;   // cmv | kialo | fixture
  std::string context;  // optional surrounding text
};

struct Document {
  std::string id;
  std::string method;  // wikipedia | web_a | web_b | local
  std::string url;
  std::string title;
  std::string text;
  std::string snippet;
};

struct EvidenceCandidate {
  std::string statement_id;
  std::string doc_id;
  std::string sentence;
  std::size_t sentence_index = 0;
  std::size_t doc_rank = 0;
  double sim = 0.0;
  double p_contradiction = 0.0;
};

inline std::string candidate_id(const EvidenceCandidate& c) {
  return c.statement_id + "#" + c.doc_id + "#" +
         std::to_string(c.sentence_index);
}

using Embedder = std::function<Mat(const std::string&)>;
using RelevanceScorer =
    std::function<double(const Statement&, const Document&)>;

struct PipelineConfig {
  std::size_t per_method_cap = 8;
  std::size_t top_k_sentences = 200;
  std::size_t max_instance_articles = 5;
  std::size_t tfidf_k = 8;
  double threshold = 0.5;
  bool candidate_as_premise = true;  // orientation for relation prediction
  std::string instance_relation = "instance_of";
  std::uint64_t seed = 1;
};

inline double cosine(const Mat& a, const Mat& b) {
  double dot = 0.0, na = 0.0, nb = 0.0;
  for (std::size_t i = 0; i < a.a.size(); ++i) {
    dot += a.a[i] * b.a[i];
    na += a.a[i] * a.a[i];
    nb += b.a[i] * b.a[i];
  }
  if (na == 0.0 || nb == 0.0) return 0.0;
  return dot / (std::sqrt(na) * std::sqrt(nb));
}

// Local corpus with title lookup and a TF-IDF index over full texts.
class Corpus {
 public:
  explicit Corpus(std::vector<Document> docs) : docs_(std::move(docs)) {
    for (std::size_t i = 0; i < docs_.size(); ++i) {
      by_id_[docs_[i].id] = i;
      if (!docs_[i].title.empty())
        by_title_[normalize_name(docs_[i].title)] = i;
      index_.add(docs_[i].id, docs_[i].text);
    }
    index_.build();
  }

  const std::vector<Document>& docs() const { return docs_; }

  const Document* by_id(const std::string& id) const {
    auto it = by_id_.find(id);
    return it == by_id_.end() ? nullptr : &docs_[it->second];
  }

  // Article whose title normalizes to the entity's canonical name.
  const Document* article_for(const std::string& canonical_name) const {
    auto it = by_title_.find(canonical_name);
    return it == by_title_.end() ? nullptr : &docs_[it->second];
  }

  const TfIdfIndex& index() const { return index_; }

 private:
  std::vector<Document> docs_;
  std::map<std::string, std::size_t> by_id_;
  std::map<std::string, std::size_t> by_title_;
  TfIdfIndex index_;
};

// Stage 1: document retrieval. Union of entity articles, sampled
// instance-entity articles, named-entity backend queries, and TF-IDF hits,
// deduplicated by document id (first occurrence wins).
inline std::vector<Document> retrieve_documents(
    const Statement& stmt, const KnowledgeGraph& kg,
    const std::vector<EntityMention>& mentions, const Corpus& corpus,
    std::vector<SearchBackend*> backends, const PipelineConfig& cfg,
    std::ostream* warnings = nullptr) {
  std::vector<Document> out;
  std::set<std::string> seen;
  auto push = [&](Document d) {
    if (d.id.empty() || d.text.empty()) return;
    if (!seen.insert(d.id).second) return;
    out.push_back(std::move(d));
  };

  // (a) articles of linked entities  (b) sampled instance-entity articles
  std::set<std::string> linked;
  for (const auto& m : mentions) linked.insert(m.entity);
  for (const auto& e : linked) {
    const std::string* name = kg.entity_name(e);
    if (name) {
      if (const Document* d = corpus.article_for(*name)) push(*d);
    }
    std::vector<std::string> instances;
    for (const auto& [rel, pred] : kg.predecessors(e, cfg.instance_relation))
      instances.push_back(pred);
    std::sort(instances.begin(), instances.end());
    instances.erase(std::unique(instances.begin(), instances.end()),
                    instances.end());
    if (instances.size() > cfg.max_instance_articles) {
      Rng rng(hash_seed(cfg.seed, "instances:" + stmt.id + ":" + e));
      rng.shuffle(instances);
      instances.resize(cfg.max_instance_articles);
      std::sort(instances.begin(), instances.end());
    }
    for (const auto& inst : instances) {
      const std::string* iname = kg.entity_name(inst);
      if (!iname) continue;
      if (const Document* d = corpus.article_for(*iname)) push(*d);
    }
  }

  // (c) named-entity queries against the backends
  for (const auto& query : capitalized_runs(stmt.text)) {
    for (SearchBackend* b : backends) {
      if (!b) continue;
      std::vector<SearchResult> results;
      try {
        results = b->search(query);
      } catch (const std::exception& ex) {
        if (warnings)
          *warnings << "warning: backend " << b->method()
                    << " failed for query '" << query << "': " << ex.what()
                    << "\n";
        continue;
      }
      for (const auto& r : results) {
        Document d;
        d.id = r.url;
        d.method = b->method();
        d.url = r.url;
        d.title = r.title;
        d.text = r.snippet;  // backends provide snippets only
        d.snippet = r.snippet;
        push(std::move(d));
      }
    }
  }

  // (d) TF-IDF hits from the local corpus
  for (const auto& [score, id] : corpus.index().query(stmt.text, cfg.tfidf_k))
    if (const Document* d = corpus.by_id(id)) push(*d);

  return out;
}

// Stage 1b: snippet construction. Corpus-style documents get
// title + most-similar sentence; backend documents keep their snippets.
inline std::string make_snippet(const Document& doc, const Statement& stmt,
                                const Embedder& embed) {
  if (!doc.snippet.empty()) return doc.snippet;
  auto spans = split_sentences(doc.text);
  if (spans.empty()) throw std::invalid_argument("document has no sentences: " +
                                                 doc.id);
  Mat target = embed(stmt.text);
  double best = -2.0;
  std::size_t best_i = 0;
  for (std::size_t i = 0; i < spans.size(); ++i) {
    std::string sentence =
        doc.text.substr(spans[i].start, spans[i].end - spans[i].start);
    double sim = cosine(embed(sentence), target);
    if (sim > best) {
      best = sim;
      best_i = i;
    }
  }
  std::string sentence = doc.text.substr(spans[best_i].start,
                                         spans[best_i].end - spans[best_i].start);
  if (doc.title.empty()) return sentence;
  return doc.title + " " + sentence;
}

// Stage 2: per-method ranking. Sort each method bucket by (score desc,
// id asc), truncate to the cap, then interleave buckets round-robin in
// method-name order.
inline std::vector<Document> rank_documents(const std::vector<Document>& docs,
                                            const Statement& stmt,
                                            const RelevanceScorer& scorer,
                                            std::size_t per_method_cap) {
  std::map<std::string, std::vector<std::pair<double, const Document*>>>
      buckets;
  for (const auto& d : docs) {
    double s = scorer(stmt, d);
    if (s < 0.0 || s > 1.0)
      throw std::logic_error("relevance score out of [0,1]");
    buckets[d.method].emplace_back(s, &d);
  }
  for (auto& [method, vec] : buckets) {
    std::sort(vec.begin(), vec.end(), [](const auto& a, const auto& b) {
      if (a.first != b.first) return a.first > b.first;
      return a.second->id < b.second->id;
    });
    if (vec.size() > per_method_cap) vec.resize(per_method_cap);
  }
  std::vector<Document> out;
  for (std::size_t i = 0;; ++i) {
    bool any = false;
    for (const auto& [method, vec] : buckets) {
      if (i < vec.size()) {
        out.push_back(*vec[i].second);
        any = true;
      }
    }
    if (!any) break;
  }
  return out;
}

// Default relevance scorer: cosine between snippet and statement
// bag-of-embedding vectors, mapped from [-1,1] to [0,1].
inline RelevanceScorer snippet_cosine_scorer(const Embedder& embed) {
  return [embed](const Statement& stmt, const Document& doc) {
    const std::string& basis = doc.snippet.empty() ? doc.text : doc.snippet;
    double c = cosine(embed(basis), embed(stmt.text));
    return (c + 1.0) / 2.0;
  };
}

// Stage 3: sentence selection. Top-k sentences over all ranked documents by
// (similarity desc, doc rank asc, sentence index asc).
inline std::vector<EvidenceCandidate> select_sentences(
    const std::vector<Document>& ranked_docs, const Statement& stmt,
    std::size_t k, const Embedder& embed) {
  std::vector<EvidenceCandidate> all;
  Mat target = embed(stmt.text);
  for (std::size_t rank = 0; rank < ranked_docs.size(); ++rank) {
    const Document& doc = ranked_docs[rank];
    auto spans = split_sentences(doc.text);
    for (std::size_t i = 0; i < spans.size(); ++i) {
      EvidenceCandidate c;
      c.statement_id = stmt.id;
      c.doc_id = doc.id;
      c.sentence = doc.text.substr(spans[i].start, spans[i].end - spans[i].start);
      c.sentence_index = i;
      c.doc_rank = rank;
      c.sim = cosine(embed(c.sentence), target);
      all.push_back(std::move(c));
    }
  }
  std::sort(all.begin(), all.end(),
            [](const EvidenceCandidate& a, const EvidenceCandidate& b) {
              if (a.sim != b.sim) return a.sim > b.sim;
              if (a.doc_rank != b.doc_rank) return a.doc_rank < b.doc_rank;
              return a.sentence_index < b.sentence_index;
            });
  if (all.size() > k) all.resize(k);
  return all;
}

// Stage 4: relation prediction. Fills p_contradiction and sorts descending
// (stable: equal scores keep selection order).
inline std::vector<EvidenceCandidate> score_counterevidence(
    std::vector<EvidenceCandidate> cands, const Statement& stmt,
    const KENLIModel& model, bool candidate_as_premise = true) {
  for (auto& c : cands) {
    NLIPair pair;
    if (candidate_as_premise) {
      pair.premise = c.sentence;
      pair.hypothesis = stmt.text;
    } else {
      pair.premise = stmt.text;
      pair.hypothesis = c.sentence;
    }
    c.p_contradiction =
        model.forward(pair)
            .probs[static_cast<std::size_t>(NLILabel::contradiction)];
  }
  std::stable_sort(cands.begin(), cands.end(),
                   [](const EvidenceCandidate& a, const EvidenceCandidate& b) {
                     return a.p_contradiction > b.p_contradiction;
                   });
  return cands;
}

// Ground-truth pooling: per model (name order), take its top-ranked
// candidate when p_contradiction >= threshold; dedupe by (doc, sentence).
inline std::vector<EvidenceCandidate> build_ground_truth_pool(
    const std::map<std::string, std::vector<EvidenceCandidate>>&
        per_model_rankings,
    double threshold) {
  std::vector<EvidenceCandidate> pool;
  std::set<std::pair<std::string, std::size_t>> seen;
  for (const auto& [model, ranking] : per_model_rankings) {
    if (ranking.empty()) continue;
    const EvidenceCandidate& top = ranking.front();
    if (top.p_contradiction < threshold) continue;
    if (seen.insert({top.doc_id, top.sentence_index}).second)
      pool.push_back(top);
  }
  return pool;
}

// Full pipeline for one statement.
inline std::vector<EvidenceCandidate> run_pipeline(
    const Statement& stmt, const KnowledgeGraph& kg, const Corpus& corpus,
    std::vector<SearchBackend*> backends, const KENLIModel& model,
    const PipelineConfig& cfg, std::ostream* warnings = nullptr) {
  Embedder embed = [&model](const std::string& text) {
    return model.embed_text(text);
  };
  auto mentions = model.link(tokenize(stmt.text));
  auto docs = retrieve_documents(stmt, kg, mentions, corpus, backends, cfg,
                                 warnings);
  for (auto& d : docs)
    if (d.snippet.empty()) d.snippet = make_snippet(d, stmt, embed);
  auto ranked = rank_documents(docs, stmt, snippet_cosine_scorer(embed),
                               cfg.per_method_cap);
  auto cands = select_sentences(ranked, stmt, cfg.top_k_sentences, embed);
  return score_counterevidence(std::move(cands), stmt, model,
                               cfg.candidate_as_premise);
}

}  // namespace kenli
