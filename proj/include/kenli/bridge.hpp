#pragma once

#include <algorithm>
#include <map>
#include <set>
#include <stdexcept>
#include <string>
#include <vector>

#include "kenli/kgraph.hpp"
#include "kenli/linker.hpp"

namespace kenli {

struct EntityPath {
  std::vector<std::string> nodes;
  std::vector<std::string> edges;  // size = nodes.size() - 1

  std::size_t length() const { return edges.size(); }

  friend bool operator==(const EntityPath& a, const EntityPath& b) {
    return a.nodes == b.nodes && a.edges == b.edges;
  }
  friend bool operator<(const EntityPath& a, const EntityPath& b) {
    if (a.length() != b.length()) return a.length() < b.length();
    if (a.nodes != b.nodes) return a.nodes < b.nodes;
    return a.edges < b.edges;
  }
};

// All simple directed paths from any source to any destination with
// 0 <= length <= max_len, ordered by (length, node sequence, edge sequence).
// A zero-length path [e] exists iff e is both a source and a destination.
inline std::vector<EntityPath> enumerate_paths(
    const KnowledgeGraph& kg, const std::set<std::string>& sources,
    const std::set<std::string>& destinations, std::size_t max_len) {
  std::vector<EntityPath> found;
  std::vector<std::string> nodes, edges;
  std::set<std::string> on_path;

  auto dfs = [&](auto&& self, const std::string& at) -> void {
    if (destinations.count(at)) found.push_back(EntityPath{nodes, edges});
    if (edges.size() == max_len) return;
    for (const auto& [rel, next] : kg.successors(at)) {
      if (on_path.count(next)) continue;
      nodes.push_back(next);
      edges.push_back(rel);
      on_path.insert(next);
      self(self, next);
      on_path.erase(next);
      edges.pop_back();
      nodes.pop_back();
    }
  };

  for (const auto& s : sources) {
    nodes = {s};
    edges.clear();
    on_path = {s};
    dfs(dfs, s);
  }
  std::sort(found.begin(), found.end());
  return found;
}

struct LinkedToken {
  int side = 0;     // 0 = premise, 1 = hypothesis
  int index = 0;    // token index within that side
  int entity = 0;   // index into EntityWorkingSet::entities
};

struct EntityWorkingSet {
  std::vector<std::string> entities;            // E, |E| <= lambda
  std::vector<std::string> relations;           // R, fixed from the KG
  // adjacency[k] = ordered pairs (i,j) with (E[i], R[k], E[j]) in the KG
  std::vector<std::vector<std::pair<int, int>>> adjacency;
  std::vector<LinkedToken> linked_tokens;       // T, premise first, in order
  std::size_t premise_token_count = 0;
  std::size_t hypothesis_token_count = 0;

  std::size_t entity_count() const { return entities.size(); }
  std::size_t linked_token_count() const { return linked_tokens.size(); }

  // (token index in T, entity index in E)
  std::vector<std::pair<int, int>> token_links() const {
    std::vector<std::pair<int, int>> out;
    out.reserve(linked_tokens.size());
    for (std::size_t t = 0; t < linked_tokens.size(); ++t)
      out.emplace_back(static_cast<int>(t), linked_tokens[t].entity);
    return out;
  }
};

inline std::vector<std::pair<int, int>> adjacency_pairs(
    const EntityWorkingSet& ws, const std::string& relation) {
  auto it = std::find(ws.relations.begin(), ws.relations.end(), relation);
  if (it == ws.relations.end())
    throw std::invalid_argument("unknown relation: " + relation);
  return ws.adjacency[static_cast<std::size_t>(it - ws.relations.begin())];
}

// Builds the per-pair working set:
//   1. entities on P->H paths (paths admitted whole, in enumeration order,
//      stopping at the first path that would push |E| past lambda);
//   2. entities linked in P or H, id order;
//   3. expansion: successors of included P entities at hop 1..nu,
//      (hop, id) order;
// each stage capped at lambda. Adjacency and token links cover the final E.
// link_hypothesis_tokens: when false, hypothesis mentions still supply path
// destinations but their tokens are left out of T.
inline EntityWorkingSet select_working_set(
    const KnowledgeGraph& kg, const TokenizedText& premise,
    const std::vector<EntityMention>& p_mentions,
    const TokenizedText& hypothesis,
    const std::vector<EntityMention>& h_mentions, std::size_t lambda,
    std::size_t nu, bool link_hypothesis_tokens = true) {
  std::set<std::string> p_ents, h_ents;
  for (const auto& m : p_mentions) p_ents.insert(m.entity);
  for (const auto& m : h_mentions) h_ents.insert(m.entity);

  EntityWorkingSet ws;
  ws.relations = kg.relations();
  ws.premise_token_count = premise.tokens.size();
  ws.hypothesis_token_count = hypothesis.tokens.size();

  std::set<std::string> in_e;
  auto add = [&](const std::string& e) {
    if (in_e.count(e) || ws.entities.size() >= lambda) return;
    in_e.insert(e);
    ws.entities.push_back(e);
  };

  // 1. Bridging paths, whole-path admission.
  for (const auto& path : enumerate_paths(kg, p_ents, h_ents, nu)) {
    std::size_t fresh = 0;
    for (const auto& n : path.nodes) fresh += in_e.count(n) ? 0 : 1;
    if (ws.entities.size() + fresh > lambda) break;
    for (const auto& n : path.nodes) add(n);
  }

  // 2. Linked entities.
  for (const auto& e : p_ents) add(e);
  for (const auto& e : h_ents) add(e);

  // 3. Expansion from P-linked entities that made it in.
  if (ws.entities.size() < lambda && nu > 0) {
    std::map<std::string, std::size_t> dist;
    std::vector<std::string> frontier;
    for (const auto& e : p_ents)
      if (in_e.count(e)) {
        dist[e] = 0;
        frontier.push_back(e);
      }
    for (std::size_t hop = 1; hop <= nu && !frontier.empty(); ++hop) {
      std::set<std::string> next;
      for (const auto& e : frontier)
        for (const auto& [rel, obj] : kg.successors(e))
          if (!dist.count(obj)) next.insert(obj);
      frontier.clear();
      for (const auto& e : next) {  // std::set iterates in id order
        dist[e] = hop;
        frontier.push_back(e);
        add(e);
      }
    }
  }

  // Adjacency over the final E.
  ws.adjacency.assign(ws.relations.size(), {});
  std::map<std::string, int> index;
  for (std::size_t i = 0; i < ws.entities.size(); ++i)
    index[ws.entities[i]] = static_cast<int>(i);
  for (std::size_t k = 0; k < ws.relations.size(); ++k) {
    for (std::size_t i = 0; i < ws.entities.size(); ++i) {
      for (const auto& [rel, obj] : kg.successors(ws.entities[i],
                                                  ws.relations[k])) {
        auto it = index.find(obj);
        if (it != index.end())
          ws.adjacency[k].emplace_back(static_cast<int>(i), it->second);
      }
    }
    std::sort(ws.adjacency[k].begin(), ws.adjacency[k].end());
  }

  // Token links: tokens covered by a mention whose entity survived into E.
  auto collect = [&](const std::vector<EntityMention>& mentions, int side) {
    for (const auto& m : mentions) {
      auto it = index.find(m.entity);
      if (it == index.end()) continue;
      for (std::size_t t = m.token_start; t < m.token_end; ++t)
        ws.linked_tokens.push_back(
            LinkedToken{side, static_cast<int>(t), it->second});
    }
  };
  collect(p_mentions, 0);
  if (link_hypothesis_tokens) collect(h_mentions, 1);
  std::sort(ws.linked_tokens.begin(), ws.linked_tokens.end(),
            [](const LinkedToken& a, const LinkedToken& b) {
              if (a.side != b.side) return a.side < b.side;
              return a.index < b.index;
            });
  return ws;
}

}  // namespace kenli
