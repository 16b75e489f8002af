#pragma once

#include <algorithm>
#include <cstdint>
#include <fstream>
#include <map>
#include <set>
#include <stdexcept>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "kenli/text.hpp"

namespace kenli {

struct Triple {
  std::string subject;
  std::string relation;
  std::string object;
  std::uint64_t pattern_count = 0;  // 0 = unknown / not applicable

  friend bool operator<(const Triple& a, const Triple& b) {
    return std::tie(a.subject, a.relation, a.object) <
           std::tie(b.subject, b.relation, b.object);
  }
  friend bool operator==(const Triple& a, const Triple& b) {
    return a.subject == b.subject && a.relation == b.relation &&
           a.object == b.object;
  }
};

struct Entity {
  std::string id;
  std::string name;  // lowercase, whitespace-collapsed
};

class KGError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Directed labeled multigraph over string ids. Immutable once built: all
// mutation happens inside the builders below, queries are const.
class KnowledgeGraph {
 public:
  using Edge = std::pair<std::string, std::string>;  // (relation, entity)

  static KnowledgeGraph from_triples(std::vector<Triple> triples) {
    // Collapse duplicate (s,r,o) keeping the max pattern_count.
    std::sort(triples.begin(), triples.end(),
              [](const Triple& a, const Triple& b) {
                if (!(a == b)) return a < b;
                return a.pattern_count > b.pattern_count;
              });
    triples.erase(std::unique(triples.begin(), triples.end()), triples.end());

    KnowledgeGraph kg;
    kg.triples_ = std::move(triples);
    std::set<std::string> ents, rels;
    for (const auto& t : kg.triples_) {
      if (t.subject.empty() || t.relation.empty() || t.object.empty())
        throw KGError("triple with empty field");
      ents.insert(t.subject);
      ents.insert(t.object);
      rels.insert(t.relation);
      kg.succ_[t.subject].emplace_back(t.relation, t.object);
      kg.pred_[t.object].emplace_back(t.relation, t.subject);
    }
    for (auto& [_, v] : kg.succ_) std::sort(v.begin(), v.end());
    for (auto& [_, v] : kg.pred_) std::sort(v.begin(), v.end());
    kg.entities_.reserve(ents.size());
    for (const auto& id : ents)
      kg.entities_.push_back(Entity{id, normalize_name(id)});
    kg.relations_.assign(rels.begin(), rels.end());
    return kg;
  }

  const std::vector<Entity>& entities() const { return entities_; }
  const std::vector<std::string>& relations() const { return relations_; }
  const std::vector<Triple>& triples() const { return triples_; }

  bool has_entity(std::string_view id) const {
    return std::binary_search(
        entities_.begin(), entities_.end(), id,
        [](const auto& a, const auto& b) { return id_of(a) < id_of(b); });
  }

  const std::string* entity_name(std::string_view id) const {
    auto it = std::lower_bound(
        entities_.begin(), entities_.end(), id,
        [](const Entity& e, std::string_view v) { return e.id < v; });
    if (it == entities_.end() || it->id != id) return nullptr;
    return &it->name;
  }

  bool has_triple(std::string_view s, std::string_view r,
                  std::string_view o) const {
    auto it = succ_.find(std::string(s));
    if (it == succ_.end()) return false;
    return std::binary_search(it->second.begin(), it->second.end(),
                              Edge{std::string(r), std::string(o)});
  }

  // Outgoing edges of e, optionally restricted to one relation. Sorted by
  // (relation, entity); unknown entities yield empty.
  std::vector<Edge> successors(std::string_view e,
                               std::string_view r = {}) const {
    return query(succ_, e, r);
  }

  std::vector<Edge> predecessors(std::string_view e,
                                 std::string_view r = {}) const {
    return query(pred_, e, r);
  }

  KnowledgeGraph filter_min_patterns(std::uint64_t k) const {
    std::vector<Triple> keep;
    for (const auto& t : triples_)
      if (t.pattern_count >= k) keep.push_back(t);
    return from_triples(std::move(keep));
  }

  KnowledgeGraph filter_relations(const std::set<std::string>& keep) const {
    std::vector<Triple> out;
    for (const auto& t : triples_)
      if (keep.count(t.relation)) out.push_back(t);
    return from_triples(std::move(out));
  }

 private:
  static std::string_view id_of(const Entity& e) { return e.id; }
  static std::string_view id_of(std::string_view v) { return v; }

  static std::vector<Edge> query(const std::map<std::string, std::vector<Edge>>& idx,
                                 std::string_view e, std::string_view r) {
    auto it = idx.find(std::string(e));
    if (it == idx.end()) return {};
    if (r.empty()) return it->second;
    std::vector<Edge> out;
    for (const auto& p : it->second)
      if (p.first == r) out.push_back(p);
    return out;
  }

  std::vector<Entity> entities_;
  std::vector<std::string> relations_;
  std::vector<Triple> triples_;
  std::map<std::string, std::vector<Edge>> succ_;
  std::map<std::string, std::vector<Edge>> pred_;
};

// Parses "subject<TAB>relation<TAB>object[<TAB>pattern_count]". Lines that
// are blank or start with '#' are skipped.
inline std::vector<Triple> parse_triples_tsv(std::istream& in,
                                             std::string_view source_name) {
  std::vector<Triple> out;
  std::string line;
  std::size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty() || line[0] == '#') continue;
    std::vector<std::string> fields;
    std::size_t pos = 0;
    while (true) {
      std::size_t tab = line.find('\t', pos);
      fields.push_back(line.substr(pos, tab == std::string::npos
                                            ? std::string::npos
                                            : tab - pos));
      if (tab == std::string::npos) break;
      pos = tab + 1;
    }
    auto fail = [&](const std::string& why) {
      throw KGError(std::string(source_name) + ":" + std::to_string(lineno) +
                    ": " + why);
    };
    if (fields.size() < 3 || fields.size() > 4)
      fail("expected 3 or 4 tab-separated fields, got " +
           std::to_string(fields.size()));
    Triple t;
    t.subject = fields[0];
    t.relation = fields[1];
    t.object = fields[2];
    if (t.subject.empty() || t.relation.empty() || t.object.empty())
      fail("empty field");
    if (fields.size() == 4) {
      const std::string& c = fields[3];
      if (c.empty() || c.find_first_not_of("0123456789") != std::string::npos)
        fail("pattern_count is not a non-negative integer: '" + c + "'");
      t.pattern_count = std::stoull(c);
    }
    out.push_back(std::move(t));
  }
  return out;
}

inline KnowledgeGraph load_triples(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw KGError("cannot open triple file: " + path);
  return KnowledgeGraph::from_triples(parse_triples_tsv(in, path));
}

inline void save_triples(const KnowledgeGraph& kg, std::ostream& out) {
  for (const auto& t : kg.triples()) {
    out << t.subject << '\t' << t.relation << '\t' << t.object;
    if (t.pattern_count > 0) out << '\t' << t.pattern_count;
    out << '\n';
  }
}

// The eight containment-style relations kept for the Wikidata-style graph.
inline const std::set<std::string>& example_relations() {
  static const std::set<std::string> kRels = {
      "instance_of",
      "subclass_of",
      "part_of",
      "has_part",
      "part_of_the_series",
      "located_in_the_administrative_territorial_entity",
      "contains_administrative_territorial_entity",
      "location"};
  return kRels;
}

}  // namespace kenli
