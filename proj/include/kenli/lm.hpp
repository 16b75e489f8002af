#pragma once

#include <cmath>
#include <map>
#include <memory>
#include <stdexcept>
#include <string>
#include <vector>

#include "kenli/text.hpp"

namespace kenli {

// Perplexity scorer interface. Lower is more fluent. Deterministic.
class LMScorer {
 public:
  virtual ~LMScorer() = default;
  virtual double score(const std::string& text) const = 0;
};

// Word-trigram language model with add-k smoothing. A deterministic,
// dependency-free stand-in for a neural LM; the scorer interface accepts
// stronger models.
class TrigramLM : public LMScorer {
 public:
  explicit TrigramLM(double add_k = 0.1) : add_k_(add_k) {
    if (add_k <= 0.0) throw std::invalid_argument("add_k must be positive");
  }

  void fit(const std::vector<std::string>& sentences) {
    for (const auto& s : sentences) {
      auto toks = padded(s);
      if (toks.size() < 4) continue;  // skip empty sentences
      for (const auto& t : toks) vocab_[t] = 1;
      for (std::size_t i = 0; i + 2 < toks.size(); ++i) {
        ++tri_[toks[i] + "\x1f" + toks[i + 1] + "\x1f" + toks[i + 2]];
        ++bi_[toks[i] + "\x1f" + toks[i + 1]];
      }
    }
    vocab_["<unk>"] = 1;
  }

  // Perplexity: exp of mean negative log trigram probability.
  double score(const std::string& text) const override {
    auto toks = padded(text);
    if (toks.size() < 4)  // <s> <s> w </s> at minimum
      throw std::invalid_argument("cannot score empty text");
    double nll = 0.0;
    std::size_t n = 0;
    double v = static_cast<double>(vocab_.size());
    for (std::size_t i = 0; i + 2 < toks.size(); ++i) {
      double t = count(tri_, known(toks[i]) + "\x1f" + known(toks[i + 1]) +
                                 "\x1f" + known(toks[i + 2]));
      double b = count(bi_, known(toks[i]) + "\x1f" + known(toks[i + 1]));
      double p = (t + add_k_) / (b + add_k_ * v);
      nll -= std::log(p);
      ++n;
    }
    return std::exp(nll / static_cast<double>(n));
  }

 private:
  std::vector<std::string> padded(const std::string& text) const {
    std::vector<std::string> toks = {"<s>", "<s>"};
    for (auto& t : tokenize(text).tokens) toks.push_back(t.surface);
    toks.push_back("</s>");
    return toks;
  }

  std::string known(const std::string& w) const {
    return vocab_.count(w) ? w : "<unk>";
  }

  static double count(const std::map<std::string, std::size_t>& m,
                      const std::string& key) {
    auto it = m.find(key);
    return it == m.end() ? 0.0 : static_cast<double>(it->second);
  }

  double add_k_;
  std::map<std::string, std::size_t> tri_, bi_;
  std::map<std::string, int> vocab_;
};

// Fixed lookup scorer for tests and stubbed reproductions: exact text ->
// perplexity, falling back to a default for unknown strings.
class TableLM : public LMScorer {
 public:
  TableLM(std::map<std::string, double> table, double fallback)
      : table_(std::move(table)), fallback_(fallback) {}

  double score(const std::string& text) const override {
    auto it = table_.find(text);
    return it == table_.end() ? fallback_ : it->second;
  }

 private:
  std::map<std::string, double> table_;
  double fallback_;
};

}  // namespace kenli
