#pragma once

#include <algorithm>
#include <map>
#include <string>
#include <string_view>
#include <vector>

#include "kenli/kgraph.hpp"
#include "kenli/porter.hpp"
#include "kenli/text.hpp"

namespace kenli {

enum class LinkMethod { stem, dictionary };

struct EntityMention {
  std::size_t token_start = 0;
  std::size_t token_end = 0;  // exclusive
  std::string entity;
  LinkMethod method = LinkMethod::stem;
};

namespace detail {

inline std::vector<std::string> stem_sequence(const TokenizedText& tt) {
  std::vector<std::string> out;
  out.reserve(tt.tokens.size());
  for (const auto& t : tt.tokens) out.push_back(porter_stem(t.surface));
  return out;
}

inline std::string join(const std::vector<std::string>& parts,
                        std::size_t begin, std::size_t end) {
  std::string out;
  for (std::size_t i = begin; i < end; ++i) {
    if (i > begin) out += ' ';
    out += parts[i];
  }
  return out;
}

}  // namespace detail

// Exact stem matching over token spans: a span matches an entity when their
// per-token stem sequences are equal. Longest span wins; ties go to the
// leftmost start, then the smallest entity id. Non-overlapping result,
// ordered by token_start.
inline std::vector<EntityMention> link_by_stem(const TokenizedText& tt,
                                               const KnowledgeGraph& kg) {
  // stemmed entity name -> smallest entity id with that stem sequence
  std::map<std::string, std::string> by_stem;
  std::size_t max_len = 0;
  for (const auto& e : kg.entities()) {
    TokenizedText name = tokenize(e.name);
    if (name.tokens.empty()) continue;
    auto stems = detail::stem_sequence(name);
    std::string key = detail::join(stems, 0, stems.size());
    auto [it, inserted] = by_stem.emplace(key, e.id);
    if (!inserted && e.id < it->second) it->second = e.id;
    max_len = std::max(max_len, stems.size());
  }

  auto stems = detail::stem_sequence(tt);
  struct Cand {
    std::size_t start, len;
    std::string entity;
  };
  std::vector<Cand> cands;
  for (std::size_t start = 0; start < stems.size(); ++start) {
    std::size_t cap = std::min(max_len, stems.size() - start);
    for (std::size_t len = 1; len <= cap; ++len) {
      auto it = by_stem.find(detail::join(stems, start, start + len));
      if (it != by_stem.end())
        cands.push_back(Cand{start, len, it->second});
    }
  }
  std::sort(cands.begin(), cands.end(), [](const Cand& a, const Cand& b) {
    if (a.len != b.len) return a.len > b.len;
    if (a.start != b.start) return a.start < b.start;
    return a.entity < b.entity;
  });

  std::vector<EntityMention> picked;
  std::vector<bool> used(stems.size(), false);
  for (const auto& c : cands) {
    bool free = true;
    for (std::size_t i = c.start; i < c.start + c.len; ++i)
      if (used[i]) { free = false; break; }
    if (!free) continue;
    for (std::size_t i = c.start; i < c.start + c.len; ++i) used[i] = true;
    picked.push_back(EntityMention{c.start, c.start + c.len, c.entity,
                                   LinkMethod::stem});
  }
  std::sort(picked.begin(), picked.end(),
            [](const EntityMention& a, const EntityMention& b) {
              return a.token_start < b.token_start;
            });
  return picked;
}

// Greedy left-to-right longest match of normalized surface forms.
inline std::vector<EntityMention> link_by_dictionary(
    const TokenizedText& tt, const std::map<std::string, std::string>& lexicon) {
  // Normalized key -> entity id; normalization makes lookup insensitive to
  // key casing/whitespace so fixtures can be written naturally.
  std::map<std::string, std::string> norm;
  std::size_t max_len = 0;
  for (const auto& [surface, entity] : lexicon) {
    TokenizedText key = tokenize(surface);
    if (key.tokens.empty()) continue;
    auto toks = key.surfaces();
    auto [it, inserted] =
        norm.emplace(detail::join(toks, 0, toks.size()), entity);
    if (!inserted && entity < it->second) it->second = entity;
    max_len = std::max(max_len, toks.size());
  }

  auto toks = tt.surfaces();
  std::vector<EntityMention> out;
  std::size_t i = 0;
  while (i < toks.size()) {
    std::size_t cap = std::min(max_len, toks.size() - i);
    bool matched = false;
    for (std::size_t len = cap; len >= 1 && !matched; --len) {
      auto it = norm.find(detail::join(toks, i, i + len));
      if (it != norm.end()) {
        out.push_back(
            EntityMention{i, i + len, it->second, LinkMethod::dictionary});
        i += len;
        matched = true;
      }
    }
    if (!matched) ++i;
  }
  return out;
}

// Lexicon TSV: surface<TAB>entity_id. '#' comments and blank lines skipped.
inline std::map<std::string, std::string> load_lexicon(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw KGError("cannot open lexicon file: " + path);
  std::map<std::string, std::string> lex;
  std::string line;
  std::size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty() || line[0] == '#') continue;
    std::size_t tab = line.find('\t');
    if (tab == std::string::npos || tab == 0 || tab + 1 >= line.size())
      throw KGError(path + ":" + std::to_string(lineno) +
                    ": expected surface<TAB>entity_id");
    lex[line.substr(0, tab)] = line.substr(tab + 1);
  }
  return lex;
}

}  // namespace kenli
