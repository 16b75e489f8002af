#pragma once

#include <functional>
#include <set>
#include <stdexcept>
#include <string>
#include <vector>

#include <json.hpp>

#include "kenli/kgraph.hpp"
#include "kenli/linker.hpp"
#include "kenli/lm.hpp"
#include "kenli/model.hpp"
#include "kenli/rng.hpp"

namespace kenli {

using LinkFn = std::function<std::vector<EntityMention>(const TokenizedText&)>;

struct GenerationRecord {
  NLIPair original;
  std::string modified_premise;
  std::string replaced_entity;
  std::string replacement_entity;
  double ppl_original = 0.0;
  double ppl_modified = 0.0;
  bool kept = false;
};

inline void to_json(json& j, const GenerationRecord& r) {
  j = json{{"premise", r.original.premise},
           {"hypothesis", r.original.hypothesis},
           {"label", r.original.label ? to_string(*r.original.label) : ""},
           {"modified_premise", r.modified_premise},
           {"replaced_entity", r.replaced_entity},
           {"replacement_entity", r.replacement_entity},
           {"ppl_original", r.ppl_original},
           {"ppl_modified", r.ppl_modified},
           {"kept", r.kept}};
}

// Entities linked in both premise and hypothesis, id order.
inline std::vector<std::string> find_shared_entities(const NLIPair& pair,
                                                     const KnowledgeGraph& kg,
                                                     const LinkFn& link) {
  (void)kg;  // entities in mentions are guaranteed to exist in the graph
  std::set<std::string> p_ents, shared;
  for (const auto& m : link(tokenize(pair.premise))) p_ents.insert(m.entity);
  for (const auto& m : link(tokenize(pair.hypothesis)))
    if (p_ents.count(m.entity)) shared.insert(m.entity);
  return {shared.begin(), shared.end()};
}

// For each entity shared by P and H, try up to max_variants KG predecessors
// as replacements for the entity's first mention span in P. A variant is
// kept iff its perplexity does not exceed the original's. Texts are handled
// in normalized (lowercased) form.
inline std::vector<GenerationRecord> generate_example_pairs(
    const NLIPair& pair, const KnowledgeGraph& kg, const LinkFn& link,
    const LMScorer& lm, std::size_t max_variants) {
  std::vector<GenerationRecord> out;
  if (max_variants == 0) return out;

  TokenizedText p = tokenize(pair.premise);
  auto p_mentions = link(p);
  double ppl_p = p.tokens.empty() ? 0.0 : lm.score(p.text);

  for (const auto& shared : find_shared_entities(pair, kg, link)) {
    const EntityMention* mention = nullptr;
    for (const auto& m : p_mentions)
      if (m.entity == shared) { mention = &m; break; }
    if (!mention) continue;

    std::size_t c0 = p.tokens[mention->token_start].char_start;
    std::size_t c1 = p.tokens[mention->token_end - 1].char_end;

    std::size_t tried = 0;
    std::set<std::string> seen;
    for (const auto& [rel, pred] : kg.predecessors(shared)) {
      if (tried >= max_variants) break;
      if (pred == shared || seen.count(pred)) continue;
      seen.insert(pred);
      const std::string* name = kg.entity_name(pred);
      if (!name || name->empty()) continue;
      std::string modified =
          p.text.substr(0, c0) + *name + p.text.substr(c1);
      if (modified == p.text) continue;  // replacement changed nothing
      ++tried;

      GenerationRecord rec;
      rec.original = pair;
      rec.modified_premise = modified;
      rec.replaced_entity = shared;
      rec.replacement_entity = pred;
      rec.ppl_original = ppl_p;
      rec.ppl_modified = lm.score(modified);
      rec.kept = rec.ppl_modified <= rec.ppl_original;
      out.push_back(std::move(rec));
    }
  }
  return out;
}

// n random neutral pairs over the given spans, excluding one-word spans.
inline std::vector<NLIPair> make_neutral_pairs(
    const std::vector<std::string>& spans, std::size_t n, std::uint64_t seed) {
  std::vector<const std::string*> eligible;
  for (const auto& s : spans)
    if (tokenize(s).tokens.size() > 1) eligible.push_back(&s);
  std::vector<NLIPair> out;
  if (n == 0) return out;
  if (eligible.size() < 2)
    throw std::invalid_argument(
        "need at least 2 multi-word spans to build neutral pairs");
  Rng rng(seed);
  out.reserve(n);
  for (std::size_t i = 0; i < n; ++i) {
    std::size_t a = rng.uniform_int(eligible.size());
    std::size_t b = rng.uniform_int(eligible.size() - 1);
    if (b >= a) ++b;
    out.push_back(NLIPair{*eligible[a], *eligible[b], NLILabel::neutral});
  }
  return out;
}

}  // namespace kenli
