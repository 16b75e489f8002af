#include <catch2/catch_amalgamated.hpp>

#include <filesystem>
#include <fstream>
#include <map>
#include <set>
#include <sstream>

#include "kenli/pipeline.hpp"

using namespace kenli;

namespace {

KnowledgeGraph parse(const std::string& tsv) {
  std::istringstream in(tsv);
  return KnowledgeGraph::from_triples(parse_triples_tsv(in, "test"));
}

// Counts of exact keyword tokens; gives fully predictable cosines.
Embedder keyword_embed(std::vector<std::string> keys) {
  return [keys](const std::string& text) {
    Mat v(1, keys.size());
    TokenizedText tt = tokenize(text);
    for (std::size_t k = 0; k < keys.size(); ++k)
      for (const auto& t : tt.tokens)
        if (t.surface == keys[k]) v(0, k) += 1.0;
    return v;
  };
}

Document doc(std::string id, std::string method, std::string title,
             std::string text, std::string snippet = "") {
  Document d;
  d.id = std::move(id);
  d.method = std::move(method);
  d.title = std::move(title);
  d.text = std::move(text);
  d.snippet = std::move(snippet);
  return d;
}

Statement stmt(std::string id, std::string text) {
  Statement s;
  s.id = std::move(id);
  s.text = std::move(text);
  s.source = "fixture";
  return s;
}

struct BoomBackend : SearchBackend {
  std::string method() const override { return "web_x"; }
  std::vector<SearchResult> search(const std::string&) override {
    throw std::runtime_error("boom");
  }
};

ModelConfig tiny_config() {
  ModelConfig c;
  c.d = 8;
  c.n_layers_enc1 = 1;
  c.n_layers_enc2 = 1;
  c.n_heads = 2;
  c.L = 1;
  c.d_ff = 16;
  c.max_seq = 48;
  c.seed = 5;
  c.vocab_words = {"poor", "nutrition", "causes", "diabetes", "leaky",
                   "gut",  "weight",    "loss",   "not",      "heals"};
  return c;
}

}  // namespace

TEST_CASE("cosine handles parallel, orthogonal, and zero vectors") {
  Mat a(1, 2);
  a(0, 0) = 2.0;
  Mat b(1, 2);
  b(0, 0) = 1.0;
  Mat c(1, 2);
  c(0, 1) = 3.0;
  Mat z(1, 2);
  REQUIRE(cosine(a, b) == Catch::Approx(1.0));
  REQUIRE(cosine(a, c) == 0.0);
  REQUIRE(cosine(a, z) == 0.0);
}

TEST_CASE("corpus looks up documents by id and normalized title") {
  Corpus corpus({doc("d1", "wikipedia", "Leaky  Gut", "Text one."),
                 doc("d2", "wikipedia", "Diabetes", "Text two.")});
  REQUIRE(corpus.by_id("d2") != nullptr);
  REQUIRE(corpus.by_id("d2")->title == "Diabetes");
  REQUIRE(corpus.by_id("nope") == nullptr);
  const Document* hit = corpus.article_for("leaky gut");
  REQUIRE(hit != nullptr);
  REQUIRE(hit->id == "d1");
  REQUIRE(corpus.article_for("Leaky  Gut") == nullptr);  // expects normalized
}

TEST_CASE("retrieval pulls linked entity articles and dedupes by id") {
  KnowledgeGraph kg = parse("poor nutrition\tcause\tleaky gut\n");
  Corpus corpus({doc("d1", "wikipedia", "Poor nutrition",
                     "Poor nutrition is widespread. It harms health.")});
  Statement s = stmt("s1", "poor nutrition harms adults");
  auto mentions = link_by_stem(tokenize(s.text), kg);
  REQUIRE(mentions.size() == 1);
  PipelineConfig cfg;
  cfg.tfidf_k = 8;  // tf-idf will find d1 again; dedup must drop it
  auto out = retrieve_documents(s, kg, mentions, corpus, {}, cfg);
  REQUIRE(out.size() == 1);
  REQUIRE(out[0].id == "d1");
}

TEST_CASE("instance articles are sampled deterministically up to the cap") {
  std::string tsv;
  for (int i = 1; i <= 7; ++i)
    tsv += "inst" + std::to_string(i) + "\tinstance_of\tschool\n";
  KnowledgeGraph kg = parse(tsv);
  std::vector<Document> docs;
  docs.push_back(doc("a-school", "wikipedia", "school", "About schools."));
  for (int i = 1; i <= 7; ++i) {
    std::string n = "inst" + std::to_string(i);
    docs.push_back(doc(n, "wikipedia", n, "About " + n + "."));
  }
  Corpus corpus(std::move(docs));
  Statement s = stmt("s1", "the school opened");
  auto mentions = link_by_stem(tokenize(s.text), kg);
  REQUIRE(mentions.size() == 1);
  PipelineConfig cfg;
  cfg.tfidf_k = 0;
  cfg.max_instance_articles = 5;
  cfg.seed = 1;

  auto out = retrieve_documents(s, kg, mentions, corpus, {}, cfg);
  REQUIRE(out.size() == 6);  // entity article + 5 of the 7 instances
  REQUIRE(out[0].id == "a-school");

  // The sample follows the published recipe: shuffle the sorted instance
  // list with a statement- and entity-bound seed, cut, and re-sort.
  std::vector<std::string> names;
  for (int i = 1; i <= 7; ++i) names.push_back("inst" + std::to_string(i));
  Rng rng(hash_seed(cfg.seed, "instances:s1:school"));
  rng.shuffle(names);
  names.resize(5);
  std::sort(names.begin(), names.end());
  for (std::size_t i = 0; i < 5; ++i) REQUIRE(out[i + 1].id == names[i]);

  auto again = retrieve_documents(s, kg, mentions, corpus, {}, cfg);
  REQUIRE(again.size() == out.size());
  for (std::size_t i = 0; i < out.size(); ++i)
    REQUIRE(again[i].id == out[i].id);
}

TEST_CASE("retrieval queries backends with capitalized runs") {
  KnowledgeGraph kg = parse("a\tcause\tb\n");
  Corpus corpus({});
  FixtureSearchBackend web_a(
      "web_a",
      {{"New York", {{"http://a/1", "NY story", "Snippet about New York."}}}});
  FixtureSearchBackend web_b(
      "web_b", {{"New York", {{"http://b/1", "NY blog", "Another snippet."}}}});
  Statement s = stmt("s1", "people in New York commute");
  std::vector<SearchBackend*> backends = {&web_a, &web_b};
  PipelineConfig cfg;
  cfg.tfidf_k = 0;
  auto out = retrieve_documents(s, kg, {}, corpus, backends, cfg);
  REQUIRE(out.size() == 2);
  REQUIRE(out[0].id == "http://a/1");
  REQUIRE(out[0].method == "web_a");
  REQUIRE(out[0].snippet == "Snippet about New York.");
  REQUIRE(out[0].text == out[0].snippet);
  REQUIRE(out[1].method == "web_b");
}

TEST_CASE("a failing backend warns and does not abort retrieval") {
  KnowledgeGraph kg = parse("a\tcause\tb\n");
  Corpus corpus({});
  BoomBackend boom;
  FixtureSearchBackend ok(
      "web_b", {{"Paris", {{"http://b/2", "Paris", "About Paris."}}}});
  Statement s = stmt("s1", "they visited Paris");
  std::vector<SearchBackend*> backends = {&boom, &ok};
  PipelineConfig cfg;
  cfg.tfidf_k = 0;
  std::ostringstream warn;
  auto out = retrieve_documents(s, kg, {}, corpus, backends, cfg, &warn);
  REQUIRE(out.size() == 1);
  REQUIRE(out[0].id == "http://b/2");
  REQUIRE(warn.str().find("warning: backend web_x") != std::string::npos);
  REQUIRE(warn.str().find("boom") != std::string::npos);
}

TEST_CASE("retrieval skips results without an id or text") {
  KnowledgeGraph kg = parse("a\tcause\tb\n");
  Corpus corpus({});
  FixtureSearchBackend web_a(
      "web_a",
      {{"Berlin",
        {{"", "no url", "text"}, {"http://a/2", "no snippet", ""}}}});
  Statement s = stmt("s1", "living in Berlin");
  std::vector<SearchBackend*> backends = {&web_a};
  PipelineConfig cfg;
  cfg.tfidf_k = 0;
  REQUIRE(retrieve_documents(s, kg, {}, corpus, backends, cfg).empty());
}

TEST_CASE("snippets keep backend text and summarize corpus articles") {
  Embedder embed = keyword_embed({"smoking", "kills"});
  Statement s = stmt("s1", "smoking kills");

  Document backend_doc = doc("u1", "web_a", "t", "full text", "given snippet");
  REQUIRE(make_snippet(backend_doc, s, embed) == "given snippet");

  Document wiki = doc("d1", "wikipedia", "Tobacco",
                      "Dogs are friendly. Smoking kills people. Cats sleep.");
  REQUIRE(make_snippet(wiki, s, embed) == "Tobacco Smoking kills people.");

  Document untitled = doc("d2", "local", "",
                          "Smoking is bad. Smoking is sad.");
  Embedder one_key = keyword_embed({"smoking"});
  // equal similarity: the earlier sentence wins; no title prefix
  REQUIRE(make_snippet(untitled, s, one_key) == "Smoking is bad.");

  Document empty_doc = doc("d3", "wikipedia", "Empty", "");
  REQUIRE_THROWS_WITH(make_snippet(empty_doc, s, embed),
                      Catch::Matchers::ContainsSubstring("d3"));
}

TEST_CASE("per-method ranking caps buckets and interleaves round-robin") {
  std::vector<Document> docs;
  std::map<std::string, double> score;
  auto add = [&](const std::string& id, const std::string& method, double s) {
    docs.push_back(doc(id, method, "", "text"));
    score[id] = s;
  };
  for (int i = 0; i < 12; ++i)
    add("a" + std::to_string(10 + i), "alpha", 1.0 - 0.01 * i);
  for (int i = 0; i < 9; ++i)
    add("b" + std::to_string(10 + i), "beta", 0.9 - 0.01 * i);
  for (int i = 0; i < 3; ++i)
    add("c" + std::to_string(10 + i), "gamma", 0.8 - 0.01 * i);
  RelevanceScorer scorer = [&](const Statement&, const Document& d) {
    return score.at(d.id);
  };
  auto ranked = rank_documents(docs, stmt("s", "x"), scorer, 3);
  std::vector<std::string> ids;
  for (const auto& d : ranked) ids.push_back(d.id);
  std::vector<std::string> want = {"a10", "b10", "c10", "a11", "b11",
                                   "c11", "a12", "b12", "c12"};
  REQUIRE(ids == want);
}

TEST_CASE("ranking breaks score ties by ascending id") {
  std::vector<Document> docs = {doc("z", "m", "", "t"), doc("a", "m", "", "t"),
                                doc("k", "m", "", "t")};
  RelevanceScorer half = [](const Statement&, const Document&) { return 0.5; };
  auto ranked = rank_documents(docs, stmt("s", "x"), half, 10);
  REQUIRE(ranked.size() == 3);
  REQUIRE(ranked[0].id == "a");
  REQUIRE(ranked[1].id == "k");
  REQUIRE(ranked[2].id == "z");
}

TEST_CASE("relevance scores outside the unit interval are rejected") {
  std::vector<Document> docs = {doc("d", "m", "", "t")};
  RelevanceScorer bad = [](const Statement&, const Document&) { return 1.5; };
  REQUIRE_THROWS_AS(rank_documents(docs, stmt("s", "x"), bad, 4),
                    std::logic_error);
  RelevanceScorer neg = [](const Statement&, const Document&) { return -0.1; };
  REQUIRE_THROWS_AS(rank_documents(docs, stmt("s", "x"), neg, 4),
                    std::logic_error);
}

TEST_CASE("ranking matches an independent sort oracle") {
  Rng rng(123);
  const std::vector<std::string> methods = {"alpha", "beta"};
  for (int iter = 0; iter < 30; ++iter) {
    std::size_t n = 1 + rng.uniform_int(12);
    std::size_t cap = rng.uniform_int(4);
    std::vector<Document> docs;
    std::map<std::string, double> score;
    std::map<std::string, std::string> method_of;
    for (std::size_t i = 0; i < n; ++i) {
      std::string id = "d" + std::to_string(10 + i);
      std::string m = methods[rng.uniform_int(2)];
      docs.push_back(doc(id, m, "", "t"));
      score[id] = static_cast<double>(rng.uniform_int(5)) / 4.0;  // forces ties
      method_of[id] = m;
    }
    RelevanceScorer scorer = [&](const Statement&, const Document& d) {
      return score.at(d.id);
    };
    auto ranked = rank_documents(docs, stmt("s", "x"), scorer, cap);

    std::map<std::string, std::vector<std::pair<double, std::string>>> buckets;
    for (const auto& d : docs) buckets[d.method].emplace_back(score[d.id], d.id);
    for (auto& [m, vec] : buckets) {
      std::sort(vec.begin(), vec.end(), [](const auto& a, const auto& b) {
        if (a.first != b.first) return a.first > b.first;
        return a.second < b.second;
      });
      if (vec.size() > cap) vec.resize(cap);
    }
    std::vector<std::string> expect;
    for (std::size_t i = 0;; ++i) {
      bool any = false;
      for (const auto& [m, vec] : buckets)
        if (i < vec.size()) {
          expect.push_back(vec[i].second);
          any = true;
        }
      if (!any) break;
    }
    std::vector<std::string> got;
    for (const auto& d : ranked) got.push_back(d.id);
    REQUIRE(got == expect);
  }
}

TEST_CASE("sentence selection orders by similarity, rank, then index") {
  Embedder embed = keyword_embed({"smoke", "fire", "rain"});
  std::vector<Document> ranked = {
      doc("d0", "wikipedia", "",
          "Smoke rises fast. Rain falls. Fire smoke burns."),
      doc("d1", "wikipedia", "", "Smoke alarms help. Nothing here.")};
  Statement s = stmt("s1", "smoke fire");

  auto all = select_sentences(ranked, s, 100, embed);
  REQUIRE(all.size() == 5);
  REQUIRE(all[0].sentence == "Fire smoke burns.");
  REQUIRE(all[0].sim == Catch::Approx(1.0));
  REQUIRE(all[1].sentence == "Smoke rises fast.");  // tie: rank 0 before 1
  REQUIRE(all[2].sentence == "Smoke alarms help.");
  REQUIRE(all[1].sim == all[2].sim);
  REQUIRE(all[3].sentence == "Rain falls.");  // zero sim: rank 0, index 1
  REQUIRE(all[4].sentence == "Nothing here.");
  REQUIRE(all[0].doc_rank == 0);
  REQUIRE(all[0].sentence_index == 2);
  REQUIRE(candidate_id(all[0]) == "s1#d0#2");

  for (const auto& c : all) {
    const Document& d = c.doc_id == "d0" ? ranked[0] : ranked[1];
    REQUIRE(d.text.find(c.sentence) != std::string::npos);
  }

  auto top3 = select_sentences(ranked, s, 3, embed);
  REQUIRE(top3.size() == 3);
  for (std::size_t i = 0; i < 3; ++i) {
    REQUIRE(top3[i].doc_id == all[i].doc_id);
    REQUIRE(top3[i].sentence_index == all[i].sentence_index);
  }
}

TEST_CASE("relation scoring fills contradiction probabilities and sorts") {
  KnowledgeGraph kg = parse(
      "poor nutrition\tcause\tleaky gut\n"
      "leaky gut\tcause\tdiabetes\n");
  KENLIModel model(tiny_config(), &kg);
  Statement s = stmt("s1", "leaky gut heals");

  std::vector<EvidenceCandidate> cands(3);
  cands[0].statement_id = "s1";
  cands[0].doc_id = "d0";
  cands[0].sentence = "poor nutrition causes leaky gut";
  cands[1].statement_id = "s1";
  cands[1].doc_id = "d1";
  cands[1].sentence = "leaky gut causes diabetes";
  cands[2].statement_id = "s1";
  cands[2].doc_id = "d2";
  cands[2].sentence = "poor nutrition causes leaky gut";  // dup of cands[0]

  std::vector<double> expect_p;
  for (const auto& c : cands) {
    NLIPair pair{c.sentence, s.text, std::nullopt};
    expect_p.push_back(model.forward(pair).probs[1]);
  }
  auto scored = score_counterevidence(cands, s, model, true);
  REQUIRE(scored.size() == 3);
  for (std::size_t i = 0; i + 1 < scored.size(); ++i)
    REQUIRE(scored[i].p_contradiction >= scored[i + 1].p_contradiction);
  REQUIRE(expect_p[0] == expect_p[2]);  // identical sentences, equal scores

  // stable sort keeps d0 ahead of its duplicate d2
  std::vector<std::string> dup_order;
  for (const auto& c : scored)
    if (c.sentence == "poor nutrition causes leaky gut")
      dup_order.push_back(c.doc_id);
  std::vector<std::string> want_dup = {"d0", "d2"};
  REQUIRE(dup_order == want_dup);

  for (const auto& c : scored) {
    NLIPair pair{c.sentence, s.text, std::nullopt};
    REQUIRE(c.p_contradiction == model.forward(pair).probs[1]);
  }

  auto swapped = score_counterevidence(cands, s, model, false);
  for (const auto& c : swapped) {
    NLIPair pair{s.text, c.sentence, std::nullopt};
    REQUIRE(c.p_contradiction == model.forward(pair).probs[1]);
  }
}

TEST_CASE("ground-truth pooling takes confident tops and dedupes") {
  auto make = [](const std::string& doc_id, std::size_t idx, double p) {
    EvidenceCandidate c;
    c.statement_id = "s1";
    c.doc_id = doc_id;
    c.sentence_index = idx;
    c.p_contradiction = p;
    return c;
  };
  std::map<std::string, std::vector<EvidenceCandidate>> rankings;
  rankings["m1"] = {make("docA", 0, 0.9), make("docB", 1, 0.1)};
  rankings["m2"] = {make("docA", 0, 0.8)};            // duplicate of m1's top
  rankings["m3"] = {make("docB", 2, 0.4)};            // below threshold
  rankings["m4"] = {};                                // empty ranking
  rankings["m5"] = {make("docC", 3, 0.5)};            // exactly at threshold

  auto pool = build_ground_truth_pool(rankings, 0.5);
  REQUIRE(pool.size() == 2);
  REQUIRE(pool[0].doc_id == "docA");
  REQUIRE(pool[0].p_contradiction == 0.9);  // first model's copy is kept
  REQUIRE(pool[1].doc_id == "docC");
}

TEST_CASE("fixture search backends load from json") {
  namespace fs = std::filesystem;
  fs::create_directories(KENLI_WORK_DIR);
  const std::string one = std::string(KENLI_WORK_DIR) + "/search_one.json";
  {
    std::ofstream out(one);
    out << R"({"method": "web_a", "queries": {"New York": [
          {"url": "http://a/1", "title": "NY", "snippet": "About NY."}]}})";
  }
  FixtureSearchBackend b = FixtureSearchBackend::load(one);
  REQUIRE(b.method() == "web_a");
  auto hits = b.search("New York");
  REQUIRE(hits.size() == 1);
  REQUIRE(hits[0].url == "http://a/1");
  REQUIRE(hits[0].title == "NY");
  REQUIRE(hits[0].snippet == "About NY.");
  REQUIRE(b.search("missing").empty());

  const std::string many = std::string(KENLI_WORK_DIR) + "/search_many.json";
  {
    std::ofstream out(many);
    out << R"([{"method": "web_a", "queries": {}},
               {"method": "web_b", "queries": {"Q": [
                 {"url": "u", "title": "t", "snippet": "s"}]}}])";
  }
  auto all = FixtureSearchBackend::load_all(many);
  REQUIRE(all.size() == 2);
  REQUIRE(all[0].method() == "web_a");
  REQUIRE(all[1].method() == "web_b");
  REQUIRE(all[1].search("Q").size() == 1);

  REQUIRE_THROWS_WITH(FixtureSearchBackend::load("/nonexistent/s.json"),
                      Catch::Matchers::ContainsSubstring("cannot open"));
}

TEST_CASE("the whole pipeline runs deterministically on a local corpus") {
  KnowledgeGraph kg = parse(
      "poor nutrition\tcause\tleaky gut\n"
      "leaky gut\tcause\tdiabetes\n"
      "leaky gut\tcause\tweight loss\n");
  Corpus corpus(
      {doc("d1", "wikipedia", "Poor nutrition",
           "Poor nutrition weakens the body. It does not cause leaky gut."),
       doc("d2", "wikipedia", "Leaky gut",
           "Leaky gut is debated. Some say leaky gut causes diabetes."),
       doc("d3", "wikipedia", "Weather", "Rain falls. Wind blows.")});
  KENLIModel model(tiny_config(), &kg);
  Statement s = stmt("st1", "poor nutrition causes diabetes");
  PipelineConfig cfg;
  cfg.tfidf_k = 3;

  auto run1 = run_pipeline(s, kg, corpus, {}, model, cfg);
  REQUIRE(!run1.empty());
  for (std::size_t i = 0; i + 1 < run1.size(); ++i)
    REQUIRE(run1[i].p_contradiction >= run1[i + 1].p_contradiction);
  for (const auto& c : run1) {
    REQUIRE(c.statement_id == "st1");
    const Document* d = corpus.by_id(c.doc_id);
    REQUIRE(d != nullptr);
    REQUIRE(d->text.find(c.sentence) != std::string::npos);
    REQUIRE(c.p_contradiction >= 0.0);
    REQUIRE(c.p_contradiction <= 1.0);
  }

  auto run2 = run_pipeline(s, kg, corpus, {}, model, cfg);
  REQUIRE(run2.size() == run1.size());
  for (std::size_t i = 0; i < run1.size(); ++i) {
    REQUIRE(run2[i].doc_id == run1[i].doc_id);
    REQUIRE(run2[i].sentence_index == run1[i].sentence_index);
    REQUIRE(run2[i].p_contradiction == run1[i].p_contradiction);
  }
}
