#pragma once

#include <fstream>
#include <map>
#include <optional>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include <json.hpp>

#include "kenli/evalkit.hpp"
#include "kenli/model.hpp"
#include "kenli/pipeline.hpp"

namespace kenli {

// Maps to exit 1 with the path named.
struct FileError : std::runtime_error {
  explicit FileError(const std::string& path, const std::string& why)
      : std::runtime_error(path + ": " + why), path(path) {}
  std::string path;
};

// Maps to exit 1 with the field named.
struct ConfigError : std::runtime_error {
  explicit ConfigError(const std::string& field, const std::string& why)
      : std::runtime_error("config field '" + field + "': " + why),
        field(field) {}
  std::string field;
};

namespace io_detail {

inline std::ifstream open_in(const std::string& path) {
  std::ifstream f(path);
  if (!f) throw FileError(path, "cannot open for reading");
  return f;
}

inline std::ofstream open_out(const std::string& path) {
  std::ofstream f(path);
  if (!f) throw FileError(path, "cannot open for writing");
  return f;
}

inline json parse_line(const std::string& line, const std::string& path,
                       std::size_t lineno) {
  try {
    return json::parse(line);
  } catch (const json::exception& ex) {
    throw FileError(path + ":" + std::to_string(lineno), ex.what());
  }
}

template <typename Fn>
void for_each_jsonl(const std::string& path, Fn fn) {
  std::ifstream f = open_in(path);
  std::string line;
  std::size_t lineno = 0;
  while (std::getline(f, line)) {
    ++lineno;
    if (line.empty()) continue;
    fn(parse_line(line, path, lineno), lineno);
  }
}

}  // namespace io_detail

// -------------------------------------------------------------- NLI pairs
// One object per line: {"premise": "...", "hypothesis": "...", "label": "..."}
// where label is entailment|contradiction|neutral, optional for unlabeled data.

inline std::vector<NLIPair> load_nli_jsonl(const std::string& path) {
  std::vector<NLIPair> out;
  io_detail::for_each_jsonl(path, [&](const json& j, std::size_t lineno) {
    NLIPair p;
    if (!j.contains("premise") || !j.contains("hypothesis"))
      throw FileError(path + ":" + std::to_string(lineno),
                      "missing premise/hypothesis");
    p.premise = j.at("premise").get<std::string>();
    p.hypothesis = j.at("hypothesis").get<std::string>();
    if (j.contains("label") && !j.at("label").is_null())
      p.label = label_from_string(j.at("label").get<std::string>());
    out.push_back(std::move(p));
  });
  return out;
}

inline void save_nli_jsonl(const std::string& path,
                           const std::vector<NLIPair>& pairs) {
  std::ofstream f = io_detail::open_out(path);
  for (const auto& p : pairs) {
    json j{{"premise", p.premise}, {"hypothesis", p.hypothesis}};
    if (p.label) j["label"] = to_string(*p.label);
    f << j.dump() << "\n";
  }
}

// -------------------------------------------------------------- statements
// {"id": "...", "text": "...", "source": "...", "context": "..."}

inline std::vector<Statement> load_statements_jsonl(const std::string& path) {
  std::vector<Statement> out;
  io_detail::for_each_jsonl(path, [&](const json& j, std::size_t lineno) {
    Statement s;
    if (!j.contains("id") || !j.contains("text"))
      throw FileError(path + ":" + std::to_string(lineno), "missing id/text");
    s.id = j.at("id").get<std::string>();
    s.text = j.at("text").get<std::string>();
    s.source = j.value("source", std::string{});
    s.context = j.value("context", std::string{});
    out.push_back(std::move(s));
  });
  return out;
}

// ------------------------------------------------------------------ corpus
// {"id", "method", "url", "title", "text", "snippet"?}

inline std::vector<Document> load_corpus_jsonl(const std::string& path) {
  std::vector<Document> out;
  io_detail::for_each_jsonl(path, [&](const json& j, std::size_t lineno) {
    Document d;
    if (!j.contains("id") || !j.contains("text"))
      throw FileError(path + ":" + std::to_string(lineno), "missing id/text");
    d.id = j.at("id").get<std::string>();
    d.method = j.value("method", std::string{"local"});
    d.url = j.value("url", std::string{});
    d.title = j.value("title", std::string{});
    d.text = j.at("text").get<std::string>();
    d.snippet = j.value("snippet", std::string{});
    out.push_back(std::move(d));
  });
  return out;
}

// -------------------------------------------------------------- candidates
// Retrieval output; candidate_id is statement#doc#sentence_index.

inline void save_candidates_jsonl(const std::string& path,
                                  const std::vector<EvidenceCandidate>& cands) {
  std::ofstream f = io_detail::open_out(path);
  for (const auto& c : cands) {
    json j{{"candidate_id", candidate_id(c)},
           {"statement_id", c.statement_id},
           {"doc_id", c.doc_id},
           {"sentence", c.sentence},
           {"sentence_index", c.sentence_index},
           {"doc_rank", c.doc_rank},
           {"sim", c.sim},
           {"p_contradiction", c.p_contradiction}};
    f << j.dump() << "\n";
  }
}

inline std::vector<EvidenceCandidate> load_candidates_jsonl(
    const std::string& path) {
  std::vector<EvidenceCandidate> out;
  io_detail::for_each_jsonl(path, [&](const json& j, std::size_t lineno) {
    EvidenceCandidate c;
    if (!j.contains("statement_id") || !j.contains("doc_id") ||
        !j.contains("sentence_index"))
      throw FileError(path + ":" + std::to_string(lineno),
                      "missing statement_id/doc_id/sentence_index");
    c.statement_id = j.at("statement_id").get<std::string>();
    c.doc_id = j.at("doc_id").get<std::string>();
    c.sentence = j.value("sentence", std::string{});
    c.sentence_index = j.at("sentence_index").get<std::size_t>();
    c.doc_rank = j.value("doc_rank", std::size_t{0});
    c.sim = j.value("sim", 0.0);
    c.p_contradiction = j.value("p_contradiction", 0.0);
    out.push_back(std::move(c));
  });
  return out;
}

// ------------------------------------------------------------------ labels
// Human annotation: {"candidate_id", "scores": [a, b], "third"?: c,
// group fields as extra string/bool keys (e.g. "kg_path_exists", "method")}.

struct LabelRecord {
  std::string candidate_id;
  std::vector<int> scores;
  std::optional<int> third;
  std::map<std::string, std::string> groups;
};

inline std::vector<LabelRecord> load_labels_jsonl(const std::string& path) {
  std::vector<LabelRecord> out;
  io_detail::for_each_jsonl(path, [&](const json& j, std::size_t lineno) {
    LabelRecord r;
    if (!j.contains("candidate_id") || !j.contains("scores"))
      throw FileError(path + ":" + std::to_string(lineno),
                      "missing candidate_id/scores");
    r.candidate_id = j.at("candidate_id").get<std::string>();
    r.scores = j.at("scores").get<std::vector<int>>();
    if (j.contains("third") && !j.at("third").is_null())
      r.third = j.at("third").get<int>();
    for (auto it = j.begin(); it != j.end(); ++it) {
      if (it.key() == "candidate_id" || it.key() == "scores" ||
          it.key() == "third")
        continue;
      if (it.value().is_string())
        r.groups[it.key()] = it.value().get<std::string>();
      else if (it.value().is_boolean())
        r.groups[it.key()] = it.value().get<bool>() ? "true" : "false";
    }
    out.push_back(std::move(r));
  });
  return out;
}

// -------------------------------------------------------------- run config
// Single JSON config for the batch entry points; the seed is mandatory so no
// run ever depends on wall-clock state.

struct RunConfig {
  std::uint64_t seed = 0;

  // paths
  std::string kg_path;
  std::string lexicon_path;
  std::string train_path;
  std::string eval_path;
  std::string lm_corpus_path;
  std::string statements_path;
  std::string corpus_path;
  std::string search_fixtures_path;
  std::string checkpoint_path;
  std::string out_path;

  ModelConfig model;

  // training
  std::size_t epochs = 10;
  std::size_t batch_size = 8;
  double lr = 1e-3;

  // syngen
  std::size_t max_variants = 4;
  std::size_t neutral_n = 0;
  double lm_add_k = 1.0;

  PipelineConfig pipeline;

  json to_json() const {
    json paths{{"kg", kg_path},
               {"lexicon", lexicon_path},
               {"train", train_path},
               {"eval", eval_path},
               {"lm_corpus", lm_corpus_path},
               {"statements", statements_path},
               {"corpus", corpus_path},
               {"search_fixtures", search_fixtures_path},
               {"checkpoint", checkpoint_path},
               {"out", out_path}};
    json jm;
    kenli::to_json(jm, model);
    json jp{{"per_method_cap", pipeline.per_method_cap},
            {"top_k_sentences", pipeline.top_k_sentences},
            {"max_instance_articles", pipeline.max_instance_articles},
            {"tfidf_k", pipeline.tfidf_k},
            {"threshold", pipeline.threshold},
            {"candidate_as_premise", pipeline.candidate_as_premise},
            {"instance_relation", pipeline.instance_relation}};
    return json{{"seed", seed},
                {"paths", paths},
                {"model", jm},
                {"train_opts",
                 json{{"epochs", epochs}, {"batch_size", batch_size}, {"lr", lr}}},
                {"syngen",
                 json{{"max_variants", max_variants},
                      {"neutral_n", neutral_n},
                      {"lm_add_k", lm_add_k}}},
                {"pipeline", jp}};
  }
};

inline RunConfig parse_run_config(const json& j) {
  RunConfig c;
  if (!j.contains("seed"))
    throw ConfigError("seed", "required (runs never seed from the clock)");
  bool seed_ok = j.at("seed").is_number_unsigned() ||
                 (j.at("seed").is_number_integer() &&
                  j.at("seed").get<std::int64_t>() >= 0);
  if (!seed_ok) throw ConfigError("seed", "must be a non-negative integer");
  c.seed = j.at("seed").get<std::uint64_t>();

  if (j.contains("paths")) {
    const json& p = j.at("paths");
    c.kg_path = p.value("kg", std::string{});
    c.lexicon_path = p.value("lexicon", std::string{});
    c.train_path = p.value("train", std::string{});
    c.eval_path = p.value("eval", std::string{});
    c.lm_corpus_path = p.value("lm_corpus", std::string{});
    c.statements_path = p.value("statements", std::string{});
    c.corpus_path = p.value("corpus", std::string{});
    c.search_fixtures_path = p.value("search_fixtures", std::string{});
    c.checkpoint_path = p.value("checkpoint", std::string{});
    c.out_path = p.value("out", std::string{});
  }
  if (j.contains("model")) c.model = j.at("model").get<ModelConfig>();
  c.model.seed = c.seed;

  if (j.contains("train_opts")) {
    const json& t = j.at("train_opts");
    c.epochs = t.value("epochs", c.epochs);
    c.batch_size = t.value("batch_size", c.batch_size);
    c.lr = t.value("lr", c.lr);
    if (c.batch_size == 0)
      throw ConfigError("train_opts.batch_size", "must be positive");
    if (!(c.lr >= 0.0)) throw ConfigError("train_opts.lr", "must be >= 0");
  }
  if (j.contains("syngen")) {
    const json& s = j.at("syngen");
    c.max_variants = s.value("max_variants", c.max_variants);
    c.neutral_n = s.value("neutral_n", c.neutral_n);
    c.lm_add_k = s.value("lm_add_k", c.lm_add_k);
    if (!(c.lm_add_k > 0.0)) throw ConfigError("syngen.lm_add_k", "must be > 0");
  }
  if (j.contains("pipeline")) {
    const json& p = j.at("pipeline");
    c.pipeline.per_method_cap =
        p.value("per_method_cap", c.pipeline.per_method_cap);
    c.pipeline.top_k_sentences =
        p.value("top_k_sentences", c.pipeline.top_k_sentences);
    c.pipeline.max_instance_articles =
        p.value("max_instance_articles", c.pipeline.max_instance_articles);
    c.pipeline.tfidf_k = p.value("tfidf_k", c.pipeline.tfidf_k);
    c.pipeline.threshold = p.value("threshold", c.pipeline.threshold);
    c.pipeline.candidate_as_premise =
        p.value("candidate_as_premise", c.pipeline.candidate_as_premise);
    c.pipeline.instance_relation =
        p.value("instance_relation", c.pipeline.instance_relation);
    if (c.pipeline.threshold < 0.0 || c.pipeline.threshold > 1.0)
      throw ConfigError("pipeline.threshold", "must be in [0,1]");
    if (c.pipeline.per_method_cap == 0)
      throw ConfigError("pipeline.per_method_cap", "must be positive");
    if (c.pipeline.top_k_sentences == 0)
      throw ConfigError("pipeline.top_k_sentences", "must be positive");
  }
  c.pipeline.seed = c.seed;
  return c;
}

inline RunConfig load_run_config(const std::string& path) {
  std::ifstream f = io_detail::open_in(path);
  json j;
  try {
    f >> j;
  } catch (const json::exception& ex) {
    throw FileError(path, ex.what());
  }
  return parse_run_config(j);
}

}  // namespace kenli
