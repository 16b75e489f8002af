// kenli: batch entry points for the knowledge-enhanced NLI engine.
//
// Subcommands: kg-build | link | syngen | train | eval-nli | retrieve |
// eval-retrieval | paths. Exit codes: 0 success, 1 runtime/config error
// (message names the offending path or field), 2 usage error.

#include <algorithm>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <map>
#include <memory>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "kenli/evalkit.hpp"
#include "kenli/io.hpp"
#include "kenli/kgraph.hpp"
#include "kenli/linker.hpp"
#include "kenli/lm.hpp"
#include "kenli/model.hpp"
#include "kenli/pipeline.hpp"
#include "kenli/search.hpp"
#include "kenli/syngen.hpp"

namespace {

using kenli::json;

void echo_config(const json& j) {
  std::cout << "resolved-config\t" << j.dump() << "\n";
}

std::ifstream must_open(const std::string& path) {
  std::ifstream f(path);
  if (!f) throw kenli::FileError(path, "cannot open for reading");
  return f;
}

// Output paths from configs routinely point into directories that don't
// exist yet (e.g. out/); create them instead of failing the whole run.
void ensure_parent_dir(const std::string& path) {
  std::filesystem::path parent = std::filesystem::path(path).parent_path();
  if (parent.empty()) return;
  std::error_code ec;
  std::filesystem::create_directories(parent, ec);
  if (ec)
    throw kenli::FileError(path,
                           "cannot create parent directory: " + ec.message());
}

void require_path(const std::string& path, const std::string& field) {
  if (path.empty())
    throw kenli::ConfigError(field, "required by this subcommand");
  if (!std::filesystem::exists(path))
    throw kenli::FileError(path, "no such file");
}

std::map<std::string, std::string> load_lexicon_if(const std::string& path) {
  if (path.empty()) return {};
  require_path(path, "paths.lexicon");
  return kenli::load_lexicon(path);
}

// ----------------------------------------------------------------- kg-build

struct KgBuildArgs {
  std::string input, out;
  std::uint64_t min_patterns = 1;
  std::vector<std::string> relations;
};

int cmd_kg_build(const KgBuildArgs& a) {
  echo_config(json{{"command", "kg-build"},
                   {"input", a.input},
                   {"out", a.out},
                   {"min_patterns", a.min_patterns},
                   {"relations", a.relations}});
  require_path(a.input, "input");
  kenli::KnowledgeGraph kg = kenli::load_triples(a.input);
  if (!a.relations.empty())
    kg = kg.filter_relations(
        std::set<std::string>(a.relations.begin(), a.relations.end()));
  if (a.min_patterns > 1) kg = kg.filter_min_patterns(a.min_patterns);
  ensure_parent_dir(a.out);
  std::ofstream out(a.out);
  if (!out) throw kenli::FileError(a.out, "cannot open for writing");
  kenli::save_triples(kg, out);
  std::cout << "kg-build: retained " << kg.triples().size() << " triples, "
            << kg.entities().size() << " entities, " << kg.relations().size()
            << " relations\n";
  return 0;
}

// --------------------------------------------------------------------- link

struct LinkArgs {
  std::string kg, input, text, lexicon, out;
  std::string method = "stem";
};

int cmd_link(const LinkArgs& a) {
  echo_config(json{{"command", "link"},
                   {"kg", a.kg},
                   {"input", a.input},
                   {"method", a.method},
                   {"lexicon", a.lexicon}});
  require_path(a.kg, "kg");
  kenli::KnowledgeGraph kg = kenli::load_triples(a.kg);
  std::map<std::string, std::string> lexicon;
  if (a.method == "dictionary") {
    if (a.lexicon.empty())
      throw kenli::ConfigError("lexicon", "required when method=dictionary");
    lexicon = load_lexicon_if(a.lexicon);
  } else if (a.method != "stem") {
    throw kenli::ConfigError("method", "must be 'stem' or 'dictionary'");
  }

  std::vector<std::string> texts;
  if (!a.text.empty()) texts.push_back(a.text);
  if (!a.input.empty()) {
    require_path(a.input, "input");
    std::ifstream f = must_open(a.input);
    std::string line;
    while (std::getline(f, line))
      if (!line.empty()) texts.push_back(line);
  }
  if (texts.empty())
    throw kenli::ConfigError("text", "provide --text or --input");

  std::ofstream file_out;
  if (!a.out.empty()) {
    ensure_parent_dir(a.out);
    file_out.open(a.out);
    if (!file_out) throw kenli::FileError(a.out, "cannot open for writing");
  }
  std::ostream& os = a.out.empty() ? std::cout : file_out;

  for (std::size_t i = 0; i < texts.size(); ++i) {
    kenli::TokenizedText tt = kenli::tokenize(texts[i]);
    auto mentions = a.method == "dictionary"
                        ? kenli::link_by_dictionary(tt, lexicon)
                        : kenli::link_by_stem(tt, kg);
    for (const auto& m : mentions) {
      std::size_t from = tt.tokens[m.token_start].char_start;
      std::size_t to = tt.tokens[m.token_end - 1].char_end;
      os << i << '\t' << m.token_start << '\t' << m.token_end << '\t'
         << m.entity << '\t' << tt.text.substr(from, to - from) << "\n";
    }
  }
  return 0;
}

// -------------------------------------------------------------------- paths

struct PathsArgs {
  std::string kg, premise, hypothesis, lexicon;
  std::string method = "stem";
  std::size_t lambda = 20, nu = 2;
};

int cmd_paths(const PathsArgs& a) {
  echo_config(json{{"command", "paths"},
                   {"kg", a.kg},
                   {"premise", a.premise},
                   {"hypothesis", a.hypothesis},
                   {"lambda", a.lambda},
                   {"nu", a.nu},
                   {"method", a.method}});
  require_path(a.kg, "kg");
  kenli::KnowledgeGraph kg = kenli::load_triples(a.kg);
  std::map<std::string, std::string> lexicon;
  if (a.method == "dictionary") {
    if (a.lexicon.empty())
      throw kenli::ConfigError("lexicon", "required when method=dictionary");
    lexicon = load_lexicon_if(a.lexicon);
  }
  auto link = [&](const kenli::TokenizedText& tt) {
    return a.method == "dictionary" ? kenli::link_by_dictionary(tt, lexicon)
                                    : kenli::link_by_stem(tt, kg);
  };

  kenli::TokenizedText p = kenli::tokenize(a.premise);
  kenli::TokenizedText h = kenli::tokenize(a.hypothesis);
  auto pm = link(p), hm = link(h);

  std::set<std::string> p_ents, h_ents;
  for (const auto& m : pm) p_ents.insert(m.entity);
  for (const auto& m : hm) h_ents.insert(m.entity);
  auto paths = kenli::enumerate_paths(kg, p_ents, h_ents, a.nu);
  std::sort(paths.begin(), paths.end());

  std::cout << "paths (" << paths.size() << "):\n";
  for (const auto& path : paths) {
    std::cout << "  " << path.nodes[0];
    for (std::size_t i = 0; i < path.edges.size(); ++i)
      std::cout << " -[" << path.edges[i] << "]-> " << path.nodes[i + 1];
    std::cout << "\n";
  }

  auto ws = kenli::select_working_set(kg, p, pm, h, hm, a.lambda, a.nu);
  std::cout << "entities (" << ws.entities.size() << "):\n";
  for (std::size_t i = 0; i < ws.entities.size(); ++i)
    std::cout << "  " << i << '\t' << ws.entities[i] << '\t'
              << *kg.entity_name(ws.entities[i]) << "\n";
  std::cout << "adjacency:\n";
  for (std::size_t k = 0; k < ws.relations.size(); ++k)
    for (const auto& [i, j] : ws.adjacency[k])
      std::cout << "  " << ws.relations[k] << '\t' << ws.entities[i] << '\t'
                << ws.entities[j] << "\n";
  std::cout << "links:\n";
  for (const auto& lt : ws.linked_tokens)
    std::cout << "  " << (lt.side == 0 ? "premise" : "hypothesis") << '\t'
              << lt.index << '\t' << ws.entities[lt.entity] << "\n";
  return 0;
}

// ----------------------------------------------------- config-driven helpers

kenli::RunConfig load_config_checked(const std::string& path) {
  require_path(path, "config");
  return kenli::load_run_config(path);
}

kenli::KnowledgeGraph load_kg_from(const kenli::RunConfig& c) {
  require_path(c.kg_path, "paths.kg");
  return kenli::load_triples(c.kg_path);
}

// Deterministic vocabulary: tokens of the training texts plus tokens of all
// entity names (entity embeddings are built from name tokens).
std::vector<std::string> vocab_from(const std::vector<kenli::NLIPair>& pairs,
                                    const kenli::KnowledgeGraph& kg) {
  std::set<std::string> words;
  auto add = [&](const std::string& text) {
    for (const auto& t : kenli::tokenize(text).tokens) words.insert(t.surface);
  };
  for (const auto& p : pairs) {
    add(p.premise);
    add(p.hypothesis);
  }
  for (const auto& e : kg.entities()) add(e.name);
  return {words.begin(), words.end()};
}

// ------------------------------------------------------------------- syngen

int cmd_syngen(const std::string& config_path) {
  kenli::RunConfig c = load_config_checked(config_path);
  echo_config(json{{"command", "syngen"}, {"config", c.to_json()}});
  kenli::KnowledgeGraph kg = load_kg_from(c);
  require_path(c.train_path, "paths.train");
  require_path(c.lm_corpus_path, "paths.lm_corpus");
  if (c.out_path.empty())
    throw kenli::ConfigError("paths.out", "required by syngen");

  auto pairs = kenli::load_nli_jsonl(c.train_path);
  kenli::TrigramLM lm(c.lm_add_k);
  {
    std::ifstream f = must_open(c.lm_corpus_path);
    std::vector<std::string> sentences;
    std::string line;
    while (std::getline(f, line))
      if (!line.empty()) sentences.push_back(line);
    lm.fit(sentences);
  }
  auto lexicon = load_lexicon_if(c.lexicon_path);
  kenli::LinkFn link = [&](const kenli::TokenizedText& tt) {
    return c.model.link_method == "dictionary"
               ? kenli::link_by_dictionary(tt, lexicon)
               : kenli::link_by_stem(tt, kg);
  };

  std::vector<kenli::NLIPair> generated;
  std::vector<kenli::GenerationRecord> records;
  for (const auto& pair : pairs) {
    for (auto& rec : kenli::generate_example_pairs(pair, kg, link, lm,
                                                   c.max_variants)) {
      if (rec.kept)
        generated.push_back(kenli::NLIPair{rec.modified_premise,
                                           rec.original.hypothesis,
                                           rec.original.label});
      records.push_back(std::move(rec));
    }
  }
  if (c.neutral_n > 0) {
    std::vector<std::string> spans;
    for (const auto& p : pairs) spans.push_back(p.premise);
    for (auto& np : kenli::make_neutral_pairs(
             spans, c.neutral_n, kenli::hash_seed(c.seed, "neutral")))
      generated.push_back(std::move(np));
  }

  ensure_parent_dir(c.out_path);
  kenli::save_nli_jsonl(c.out_path, generated);
  {
    std::ofstream rf(c.out_path + ".records.jsonl");
    if (!rf)
      throw kenli::FileError(c.out_path + ".records.jsonl",
                             "cannot open for writing");
    for (const auto& r : records) {
      json j;
      kenli::to_json(j, r);
      rf << j.dump() << "\n";
    }
  }
  std::size_t kept = 0;
  for (const auto& r : records)
    if (r.kept) ++kept;
  std::cout << "syngen: " << pairs.size() << " input pairs, " << records.size()
            << " candidate variants, " << kept << " kept, " << c.neutral_n
            << " neutral\n";
  return 0;
}

// -------------------------------------------------------------------- train

int cmd_train(const std::string& config_path) {
  kenli::RunConfig c = load_config_checked(config_path);
  echo_config(json{{"command", "train"}, {"config", c.to_json()}});
  kenli::KnowledgeGraph kg = load_kg_from(c);
  require_path(c.train_path, "paths.train");
  if (c.checkpoint_path.empty())
    throw kenli::ConfigError("paths.checkpoint", "required by train");

  auto pairs = kenli::load_nli_jsonl(c.train_path);
  kenli::ModelConfig mc = c.model;
  if (mc.vocab_words.empty()) mc.vocab_words = vocab_from(pairs, kg);
  kenli::KENLIModel model(mc, &kg, load_lexicon_if(c.lexicon_path));

  kenli::KENLIModel::TrainSettings ts;
  ts.epochs = c.epochs;
  ts.batch_size = c.batch_size;
  ts.adam.lr = c.lr;
  auto history = model.train(pairs, ts);
  for (std::size_t i = 0; i < history.size(); ++i)
    std::cout << "epoch " << i << "\tloss " << history[i].loss << "\tacc "
              << history[i].accuracy << "\n";

  ensure_parent_dir(c.checkpoint_path);
  model.save_checkpoint(c.checkpoint_path);
  std::cout << "train: wrote checkpoint " << c.checkpoint_path << " ("
            << model.param_store().count_scalars() << " parameters)\n";
  if (!c.out_path.empty()) {
    ensure_parent_dir(c.out_path);
    std::ofstream hf(c.out_path);
    if (!hf) throw kenli::FileError(c.out_path, "cannot open for writing");
    for (std::size_t i = 0; i < history.size(); ++i)
      hf << json{{"epoch", i},
                 {"loss", history[i].loss},
                 {"accuracy", history[i].accuracy}}
                .dump()
         << "\n";
  }
  return 0;
}

// ----------------------------------------------------------------- eval-nli

int cmd_eval_nli(const std::string& config_path) {
  kenli::RunConfig c = load_config_checked(config_path);
  echo_config(json{{"command", "eval-nli"}, {"config", c.to_json()}});
  kenli::KnowledgeGraph kg = load_kg_from(c);
  require_path(c.eval_path, "paths.eval");
  require_path(c.checkpoint_path, "paths.checkpoint");

  auto data = kenli::load_nli_jsonl(c.eval_path);
  kenli::KENLIModel model = kenli::KENLIModel::load_checkpoint(
      c.checkpoint_path, &kg, load_lexicon_if(c.lexicon_path));
  kenli::NLIEval ev = kenli::evaluate_nli(model, data);

  const char* names[3] = {"entailment", "contradiction", "neutral"};
  std::cout << "class\tprecision\trecall\tf1\tsupport\n";
  for (std::size_t k = 0; k < 3; ++k)
    std::cout << names[k] << '\t' << ev.per_class[k].precision << '\t'
              << ev.per_class[k].recall << '\t' << ev.per_class[k].f1 << '\t'
              << ev.support[k] << "\n";
  std::cout << "micro-f1\t" << ev.micro_f1 << "\naccuracy\t" << ev.accuracy
            << "\n";

  if (!c.out_path.empty()) {
    json j{{"micro_f1", ev.micro_f1}, {"accuracy", ev.accuracy}};
    for (std::size_t k = 0; k < 3; ++k)
      j["per_class"][names[k]] = json{{"precision", ev.per_class[k].precision},
                                      {"recall", ev.per_class[k].recall},
                                      {"f1", ev.per_class[k].f1},
                                      {"support", ev.support[k]}};
    ensure_parent_dir(c.out_path);
    std::ofstream f(c.out_path);
    if (!f) throw kenli::FileError(c.out_path, "cannot open for writing");
    f << j.dump(2) << "\n";
  }
  return 0;
}

// ----------------------------------------------------------------- retrieve

int cmd_retrieve(const std::string& config_path, bool offline) {
  kenli::RunConfig c = load_config_checked(config_path);
  echo_config(
      json{{"command", "retrieve"}, {"offline", offline}, {"config", c.to_json()}});
  kenli::KnowledgeGraph kg = load_kg_from(c);
  require_path(c.statements_path, "paths.statements");
  require_path(c.corpus_path, "paths.corpus");
  require_path(c.checkpoint_path, "paths.checkpoint");
  if (c.out_path.empty())
    throw kenli::ConfigError("paths.out", "required by retrieve");

  auto statements = kenli::load_statements_jsonl(c.statements_path);
  kenli::Corpus corpus(kenli::load_corpus_jsonl(c.corpus_path));
  kenli::KENLIModel model = kenli::KENLIModel::load_checkpoint(
      c.checkpoint_path, &kg, load_lexicon_if(c.lexicon_path));

  std::vector<kenli::FixtureSearchBackend> fixture_backends;
  if (!c.search_fixtures_path.empty()) {
    require_path(c.search_fixtures_path, "paths.search_fixtures");
    fixture_backends =
        kenli::FixtureSearchBackend::load_all(c.search_fixtures_path);
  }
  std::vector<kenli::SearchBackend*> backends;
  for (auto& b : fixture_backends) backends.push_back(&b);

#ifdef KENLI_ENABLE_HTTP_SEARCH
  // Live search engages only outside --offline and only with host + key
  // present in the environment (SEARCH_A_* / SEARCH_B_*).
  std::vector<std::unique_ptr<kenli::HttpSearchBackend>> live;
  if (!offline) {
    const struct {
      const char* method;
      const char* host_env;
      const char* path_env;
      const char* key_env;
    } engines[] = {{"web_a", "SEARCH_A_HOST", "SEARCH_A_PATH", "SEARCH_A_KEY"},
                   {"web_b", "SEARCH_B_HOST", "SEARCH_B_PATH", "SEARCH_B_KEY"}};
    for (const auto& eng : engines) {
      const char* host = std::getenv(eng.host_env);
      if (!host || !*host) continue;
      const char* path = std::getenv(eng.path_env);
      try {
        live.push_back(std::make_unique<kenli::HttpSearchBackend>(
            eng.method, host, path && *path ? path : "/search", eng.key_env));
        backends.push_back(live.back().get());
      } catch (const std::exception& ex) {
        std::cerr << "warning: live search disabled: " << ex.what() << "\n";
      }
    }
  }
#endif

  std::vector<kenli::EvidenceCandidate> all;
  for (const auto& stmt : statements) {
    auto cands =
        kenli::run_pipeline(stmt, kg, corpus, backends, model, c.pipeline,
                            &std::cerr);
    all.insert(all.end(), cands.begin(), cands.end());
  }
  ensure_parent_dir(c.out_path);
  kenli::save_candidates_jsonl(c.out_path, all);
  std::cout << "retrieve: " << statements.size() << " statements, "
            << all.size() << " candidates -> " << c.out_path << "\n";
  return 0;
}

// ----------------------------------------------------------- eval-retrieval

struct EvalRetrievalArgs {
  std::string pred, gold, out;
  double threshold = 0.5;
};

int cmd_eval_retrieval(const EvalRetrievalArgs& a) {
  echo_config(json{{"command", "eval-retrieval"},
                   {"pred", a.pred},
                   {"gold", a.gold},
                   {"threshold", a.threshold}});
  require_path(a.pred, "pred");
  require_path(a.gold, "gold");
  auto preds = kenli::load_candidates_jsonl(a.pred);
  auto golds = kenli::load_labels_jsonl(a.gold);

  std::map<std::string, double> p_by_id;
  for (const auto& c : preds) p_by_id[kenli::candidate_id(c)] = c.p_contradiction;

  std::vector<double> probs, means;
  std::vector<bool> labels;
  std::map<std::string, std::vector<std::string>> group_values;
  std::size_t skipped = 0;
  for (const auto& g : golds) {
    auto it = p_by_id.find(g.candidate_id);
    if (it == p_by_id.end()) {
      ++skipped;
      continue;
    }
    kenli::ValidityJudgment vj =
        kenli::aggregate_validity(g.candidate_id, g.scores, g.third);
    probs.push_back(it->second);
    means.push_back(vj.mean);
    labels.push_back(vj.label == kenli::ValidityLabel::valid);
    for (const auto& [key, value] : g.groups)
      group_values[key].push_back(value);
  }
  if (skipped > 0)
    std::cerr << "warning: " << skipped
              << " labeled candidates missing from predictions\n";
  if (probs.empty()) throw std::runtime_error("no overlapping candidates");

  kenli::PRF prf = kenli::prf_at_threshold(probs, labels, a.threshold);
  std::cout << "metric\tvalue\n";
  std::cout << "precision\t" << prf.precision << "\n";
  std::cout << "recall\t" << prf.recall << "\n";
  std::cout << "f1\t" << prf.f1 << "\n";
  json summary{{"precision", prf.precision},
               {"recall", prf.recall},
               {"f1", prf.f1},
               {"n", probs.size()}};
  bool x_varies = std::adjacent_find(probs.begin(), probs.end(),
                                     std::not_equal_to<>()) != probs.end();
  bool y_varies = std::adjacent_find(means.begin(), means.end(),
                                     std::not_equal_to<>()) != means.end();
  if (probs.size() >= 2 && x_varies && y_varies) {
    double tau = kenli::kendall_tau(probs, means);
    std::cout << "kendall_tau\t" << tau << "\n";
    summary["kendall_tau"] = tau;
  }

  for (const auto& [key, values] : group_values) {
    if (values.size() != probs.size()) continue;  // field absent on some rows
    auto by = kenli::breakdown(probs, labels, values, a.threshold);
    for (const auto& [group, m] : by) {
      std::cout << "group\t" << key << "=" << group << "\tn " << m.count
                << "\tP " << m.prf.precision << "\tR " << m.prf.recall
                << "\tF1 " << m.prf.f1;
      json gj{{"n", m.count},
              {"precision", m.prf.precision},
              {"recall", m.prf.recall},
              {"f1", m.prf.f1}};
      if (m.tau) {
        std::cout << "\ttau " << *m.tau;
        gj["kendall_tau"] = *m.tau;
      }
      std::cout << "\n";
      summary["groups"][key][group] = gj;
    }
  }
  if (!a.out.empty()) {
    ensure_parent_dir(a.out);
    std::ofstream f(a.out);
    if (!f) throw kenli::FileError(a.out, "cannot open for writing");
    f << summary.dump(2) << "\n";
  }
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"knowledge-enhanced NLI engine"};
  app.require_subcommand(1);

  KgBuildArgs kb;
  CLI::App* kg_build = app.add_subcommand("kg-build", "filter and canonicalize a triple store");
  kg_build->add_option("--input", kb.input, "input TSV of triples")->required();
  kg_build->add_option("--out", kb.out, "output TSV path")->required();
  kg_build->add_option("--min-patterns", kb.min_patterns,
                       "keep triples with pattern_count >= N");
  kg_build->add_option("--relations", kb.relations,
                       "keep only these relations (comma separated)")
      ->delimiter(',');

  LinkArgs la;
  CLI::App* link = app.add_subcommand("link", "link entity mentions in text");
  link->add_option("--kg", la.kg, "knowledge graph TSV")->required();
  link->add_option("--text", la.text, "text to link");
  link->add_option("--input", la.input, "file with one text per line");
  link->add_option("--method", la.method, "stem | dictionary");
  link->add_option("--lexicon", la.lexicon, "lexicon TSV (dictionary method)");
  link->add_option("--out", la.out, "output file (default stdout)");

  PathsArgs pa;
  CLI::App* paths = app.add_subcommand("paths", "show KG paths and the working set for a pair");
  paths->add_option("--kg", pa.kg, "knowledge graph TSV")->required();
  paths->add_option("--premise", pa.premise, "premise text")->required();
  paths->add_option("--hypothesis", pa.hypothesis, "hypothesis text")->required();
  paths->add_option("--lambda", pa.lambda, "working-set entity budget");
  paths->add_option("--nu", pa.nu, "maximum path length");
  paths->add_option("--method", pa.method, "stem | dictionary");
  paths->add_option("--lexicon", pa.lexicon, "lexicon TSV (dictionary method)");

  std::string syngen_config;
  CLI::App* syngen = app.add_subcommand("syngen", "generate synthetic NLI pairs");
  syngen->add_option("--config", syngen_config, "run config JSON")->required();

  std::string train_config;
  CLI::App* train = app.add_subcommand("train", "train the NLI model");
  train->add_option("--config", train_config, "run config JSON")->required();

  std::string eval_nli_config;
  CLI::App* eval_nli = app.add_subcommand("eval-nli", "evaluate a checkpoint on labeled pairs");
  eval_nli->add_option("--config", eval_nli_config, "run config JSON")->required();

  std::string retrieve_config;
  bool offline = false;
  CLI::App* retrieve = app.add_subcommand("retrieve", "run the counterevidence pipeline");
  retrieve->add_option("--config", retrieve_config, "run config JSON")->required();
  retrieve->add_flag("--offline", offline, "fixture backends only, no network");

  EvalRetrievalArgs ea;
  CLI::App* eval_retrieval = app.add_subcommand("eval-retrieval", "score retrieval output against labels");
  eval_retrieval->add_option("--pred", ea.pred, "candidates JSONL")->required();
  eval_retrieval->add_option("--gold", ea.gold, "labels JSONL")->required();
  eval_retrieval->add_option("--threshold", ea.threshold, "decision threshold");
  eval_retrieval->add_option("--out", ea.out, "JSON summary output path");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);  // prints help, exit 0
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);  // prints the usage error
    return 2;
  }

  try {
    if (app.got_subcommand(kg_build)) return cmd_kg_build(kb);
    if (app.got_subcommand(link)) return cmd_link(la);
    if (app.got_subcommand(paths)) return cmd_paths(pa);
    if (app.got_subcommand(syngen)) return cmd_syngen(syngen_config);
    if (app.got_subcommand(train)) return cmd_train(train_config);
    if (app.got_subcommand(eval_nli)) return cmd_eval_nli(eval_nli_config);
    if (app.got_subcommand(retrieve)) return cmd_retrieve(retrieve_config, offline);
    if (app.got_subcommand(eval_retrieval)) return cmd_eval_retrieval(ea);
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 2;  // unreachable with require_subcommand(1)
}
