#include <catch2/catch_amalgamated.hpp>

#include <sstream>

#include "kenli/bridge.hpp"
#include "kenli/rng.hpp"
#include "oracles.hpp"

using namespace kenli;

namespace {

KnowledgeGraph parse(const std::string& tsv) {
  std::istringstream in(tsv);
  return KnowledgeGraph::from_triples(parse_triples_tsv(in, "test"));
}

const char* kDietGraph =
    "poor nutrition\tcause\tleaky gut\n"
    "leaky gut\tcause\tdiabetes\n"
    "leaky gut\tcause\tweight loss\n";

EntityWorkingSet diet_ws(const KnowledgeGraph& kg, std::size_t lambda,
                         std::size_t nu, bool link_h = true) {
  TokenizedText p = tokenize("Poor nutrition causes problems");
  TokenizedText h = tokenize("He developed diabetes");
  auto pm = link_by_stem(p, kg);
  auto hm = link_by_stem(h, kg);
  REQUIRE(pm.size() == 1);
  REQUIRE(hm.size() == 1);
  return select_working_set(kg, p, pm, h, hm, lambda, nu, link_h);
}

}  // namespace

TEST_CASE("chain path found within length budget") {
  KnowledgeGraph kg = parse("a\tr\tb\nb\tr\tc\n");
  auto two = enumerate_paths(kg, {"a"}, {"c"}, 2);
  REQUIRE(two.size() == 1);
  std::vector<std::string> nodes = {"a", "b", "c"};
  std::vector<std::string> edges = {"r", "r"};
  REQUIRE(two[0].nodes == nodes);
  REQUIRE(two[0].edges == edges);
  REQUIRE(two[0].length() == 2);
  REQUIRE(enumerate_paths(kg, {"a"}, {"c"}, 1).empty());
}

TEST_CASE("zero-length path exists iff endpoint is on both sides") {
  KnowledgeGraph kg = parse("a\tr\tb\n");
  auto self = enumerate_paths(kg, {"a"}, {"a"}, 2);
  REQUIRE(self.size() == 1);
  REQUIRE(self[0].length() == 0);
  std::vector<std::string> just_a = {"a"};
  REQUIRE(self[0].nodes == just_a);
  REQUIRE(enumerate_paths(kg, {"a"}, {"b"}, 0).empty());
}

TEST_CASE("cycles do not produce repeated nodes") {
  KnowledgeGraph kg = parse("a\tr\tb\nb\tr\ta\n");
  auto ps = enumerate_paths(kg, {"a"}, {"a"}, 3);
  REQUIRE(ps.size() == 1);  // only the zero-length path
  REQUIRE(ps[0].length() == 0);
  auto ab = enumerate_paths(kg, {"a"}, {"b"}, 3);
  REQUIRE(ab.size() == 1);
  REQUIRE(ab[0].length() == 1);
}

TEST_CASE("parallel relations give distinct paths ordered by edge label") {
  KnowledgeGraph kg = parse("a\tr1\tb\na\tr2\tb\n");
  auto ps = enumerate_paths(kg, {"a"}, {"b"}, 1);
  REQUIRE(ps.size() == 2);
  std::vector<std::string> e1 = {"r1"};
  std::vector<std::string> e2 = {"r2"};
  REQUIRE(ps[0].edges == e1);
  REQUIRE(ps[1].edges == e2);
}

TEST_CASE("paths are ordered by length first") {
  KnowledgeGraph kg = parse("a\tr\tc\na\tr\tb\nb\tr\tc\n");
  auto ps = enumerate_paths(kg, {"a"}, {"c"}, 2);
  REQUIRE(ps.size() == 2);
  REQUIRE(ps[0].length() == 1);
  REQUIRE(ps[1].length() == 2);
}

TEST_CASE("path enumeration matches a raw-triple-scan oracle") {
  Rng rng(41);
  std::vector<std::string> names = {"n0", "n1", "n2", "n3", "n4", "n5", "n7"};
  for (int c = 0; c < 60; ++c) {
    std::vector<Triple> ts;
    std::size_t n_edges = rng.uniform_int(13);
    for (std::size_t i = 0; i < n_edges; ++i)
      ts.push_back(Triple{names[rng.uniform_int(6)],
                          "r" + std::to_string(rng.uniform_int(2)),
                          names[rng.uniform_int(6)], 1});
    KnowledgeGraph kg = KnowledgeGraph::from_triples(ts);
    std::set<std::string> sources, dests;
    for (std::size_t k = 0, n = 1 + rng.uniform_int(2); k < n; ++k)
      sources.insert(names[rng.uniform_int(names.size())]);
    for (std::size_t k = 0, n = 1 + rng.uniform_int(2); k < n; ++k)
      dests.insert(names[rng.uniform_int(names.size())]);
    std::size_t max_len = rng.uniform_int(4);
    auto got = enumerate_paths(kg, sources, dests, max_len);
    auto want = oracles::paths_by_scan(kg.triples(), sources, dests, max_len);
    REQUIRE(got == want);
  }
}

TEST_CASE("working set admits the bridging chain then expands") {
  KnowledgeGraph kg = parse(kDietGraph);
  EntityWorkingSet ws = diet_ws(kg, 20, 2);
  std::vector<std::string> expect = {"poor nutrition", "leaky gut", "diabetes",
                                     "weight loss"};
  REQUIRE(ws.entities == expect);
  REQUIRE(ws.relations == std::vector<std::string>{"cause"});

  std::vector<std::pair<int, int>> adj = {{0, 1}, {1, 2}, {1, 3}};
  REQUIRE(adjacency_pairs(ws, "cause") == adj);

  REQUIRE(ws.linked_tokens.size() == 3);
  REQUIRE(ws.linked_tokens[0].side == 0);
  REQUIRE(ws.linked_tokens[0].index == 0);
  REQUIRE(ws.linked_tokens[0].entity == 0);
  REQUIRE(ws.linked_tokens[1].side == 0);
  REQUIRE(ws.linked_tokens[1].index == 1);
  REQUIRE(ws.linked_tokens[2].side == 1);
  REQUIRE(ws.linked_tokens[2].index == 2);
  REQUIRE(ws.linked_tokens[2].entity == 2);
  REQUIRE(ws.premise_token_count == 4);
  REQUIRE(ws.hypothesis_token_count == 3);
}

TEST_CASE("tight budget falls back to linked entities only") {
  KnowledgeGraph kg = parse(kDietGraph);
  EntityWorkingSet ws = diet_ws(kg, 2, 2);
  std::vector<std::string> expect = {"poor nutrition", "diabetes"};
  REQUIRE(ws.entities == expect);
  REQUIRE(adjacency_pairs(ws, "cause").empty());
}

TEST_CASE("lambda zero empties everything") {
  KnowledgeGraph kg = parse(kDietGraph);
  EntityWorkingSet ws = diet_ws(kg, 0, 2);
  REQUIRE(ws.entities.empty());
  REQUIRE(ws.linked_tokens.empty());
  REQUIRE(ws.adjacency.size() == 1);
  REQUIRE(ws.adjacency[0].empty());
}

TEST_CASE("short path budget keeps endpoints and expands one hop") {
  KnowledgeGraph kg = parse(kDietGraph);
  EntityWorkingSet ws = diet_ws(kg, 20, 1);
  std::vector<std::string> expect = {"poor nutrition", "diabetes",
                                     "leaky gut"};
  REQUIRE(ws.entities == expect);
}

TEST_CASE("entity linked on both sides enters as a zero-length path") {
  KnowledgeGraph kg = parse(kDietGraph);
  TokenizedText p = tokenize("a leaky gut causes harm");
  TokenizedText h = tokenize("leaky gut is treatable");
  auto pm = link_by_stem(p, kg);
  auto hm = link_by_stem(h, kg);
  EntityWorkingSet ws = select_working_set(kg, p, pm, h, hm, 20, 2);
  std::vector<std::string> expect = {"leaky gut", "diabetes", "weight loss"};
  REQUIRE(ws.entities == expect);
}

TEST_CASE("path admission is all-or-nothing and stops at first overflow") {
  KnowledgeGraph kg = parse("s\tr\td\nq\tr\ta\na\tr\td\ns\tr\tc\nc\tr\td\n");
  TokenizedText p = tokenize("s q");
  TokenizedText h = tokenize("d");
  std::vector<EntityMention> pm = {EntityMention{0, 1, "s", LinkMethod::stem},
                                   EntityMention{1, 2, "q", LinkMethod::stem}};
  std::vector<EntityMention> hm = {EntityMention{0, 1, "d", LinkMethod::stem}};
  EntityWorkingSet ws = select_working_set(kg, p, pm, h, hm, 3, 2);
  // [s,d] admitted; [q,a,d] overflows and stops stage one, so [s,c,d] is
  // never considered even though "c" alone would fit.
  std::vector<std::string> expect = {"s", "d", "q"};
  REQUIRE(ws.entities == expect);
}

TEST_CASE("unknown relation is rejected") {
  KnowledgeGraph kg = parse(kDietGraph);
  EntityWorkingSet ws = diet_ws(kg, 20, 2);
  REQUIRE_THROWS_AS(adjacency_pairs(ws, "bogus"), std::invalid_argument);
  REQUIRE_THROWS_WITH(adjacency_pairs(ws, "bogus"),
                      Catch::Matchers::ContainsSubstring("bogus"));
}

TEST_CASE("hypothesis token linking can be disabled") {
  KnowledgeGraph kg = parse(kDietGraph);
  EntityWorkingSet with = diet_ws(kg, 20, 2, true);
  EntityWorkingSet without = diet_ws(kg, 20, 2, false);
  REQUIRE(without.entities == with.entities);  // dests still used for paths
  REQUIRE(without.linked_tokens.size() == 2);
  for (const auto& lt : without.linked_tokens) REQUIRE(lt.side == 0);
}

TEST_CASE("working set invariants hold on random inputs") {
  Rng rng(53);
  std::vector<std::string> names = {"n0", "n1", "n2", "n3", "n4", "n5"};
  for (int c = 0; c < 40; ++c) {
    std::vector<Triple> ts;
    std::size_t n_edges = 2 + rng.uniform_int(12);
    for (std::size_t i = 0; i < n_edges; ++i)
      ts.push_back(Triple{names[rng.uniform_int(names.size())],
                          "r" + std::to_string(rng.uniform_int(2)),
                          names[rng.uniform_int(names.size())], 1});
    KnowledgeGraph kg = KnowledgeGraph::from_triples(ts);

    TokenizedText p = tokenize("t0 t1 t2 t3 t4");
    TokenizedText h = tokenize("u0 u1 u2");
    auto fake_mentions = [&](std::size_t n_tokens) {
      std::vector<EntityMention> ms;
      std::size_t n = rng.uniform_int(3);
      for (std::size_t k = 0; k < n; ++k) {
        std::size_t start = rng.uniform_int(n_tokens);
        ms.push_back(EntityMention{start, start + 1,
                                   names[rng.uniform_int(names.size())],
                                   LinkMethod::stem});
      }
      return ms;
    };
    auto pm = fake_mentions(p.tokens.size());
    auto hm = fake_mentions(h.tokens.size());
    std::size_t lambda = rng.uniform_int(7);
    EntityWorkingSet ws = select_working_set(kg, p, pm, h, hm, lambda, 2);

    REQUIRE(ws.entities.size() <= lambda);
    std::set<std::string> uniq(ws.entities.begin(), ws.entities.end());
    REQUIRE(uniq.size() == ws.entities.size());
    REQUIRE(ws.adjacency.size() == ws.relations.size());
    for (std::size_t k = 0; k < ws.relations.size(); ++k)
      for (auto [i, j] : ws.adjacency[k]) {
        REQUIRE(i >= 0);
        REQUIRE(j >= 0);
        REQUIRE(static_cast<std::size_t>(i) < ws.entities.size());
        REQUIRE(static_cast<std::size_t>(j) < ws.entities.size());
        REQUIRE(kg.has_triple(ws.entities[static_cast<std::size_t>(i)],
                              ws.relations[k],
                              ws.entities[static_cast<std::size_t>(j)]));
      }
    // Completeness: every in-set triple appears in the adjacency.
    for (std::size_t k = 0; k < ws.relations.size(); ++k) {
      std::size_t expect = 0;
      for (std::size_t i = 0; i < ws.entities.size(); ++i)
        for (std::size_t j = 0; j < ws.entities.size(); ++j)
          if (kg.has_triple(ws.entities[i], ws.relations[k], ws.entities[j]))
            ++expect;
      REQUIRE(ws.adjacency[k].size() == expect);
    }
    int prev_side = 0, prev_index = -1;
    for (const auto& lt : ws.linked_tokens) {
      REQUIRE(lt.entity >= 0);
      REQUIRE(static_cast<std::size_t>(lt.entity) < ws.entities.size());
      std::size_t side_count =
          lt.side == 0 ? ws.premise_token_count : ws.hypothesis_token_count;
      REQUIRE(static_cast<std::size_t>(lt.index) < side_count);
      if (lt.side == prev_side) REQUIRE(lt.index >= prev_index);
      REQUIRE(lt.side >= prev_side);
      prev_side = lt.side;
      prev_index = lt.index;
    }
  }
}
