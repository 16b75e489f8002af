#pragma once

#include <algorithm>
#include <cmath>
#include <map>
#include <string>
#include <vector>

#include "kenli/text.hpp"

namespace kenli {

// Small in-memory TF-IDF index with cosine scoring over the local corpus.
class TfIdfIndex {
 public:
  void add(const std::string& id, const std::string& text) {
    DocVec d;
    d.id = id;
    for (const auto& t : tokenize(text).tokens) ++d.tf[t.surface];
    docs_.push_back(std::move(d));
    built_ = false;
  }

  void build() {
    df_.clear();
    for (const auto& d : docs_)
      for (const auto& [term, _] : d.tf) ++df_[term];
    for (auto& d : docs_) {
      d.weights.clear();
      double norm = 0.0;
      for (const auto& [term, count] : d.tf) {
        double w = static_cast<double>(count) * idf(term);
        d.weights[term] = w;
        norm += w * w;
      }
      d.norm = std::sqrt(norm);
    }
    built_ = true;
  }

  // (score, doc id), score descending, id ascending on ties; zero-score
  // documents are omitted.
  std::vector<std::pair<double, std::string>> query(const std::string& text,
                                                    std::size_t k) const {
    if (!built_ || k == 0) return {};
    std::map<std::string, double> q;
    for (const auto& t : tokenize(text).tokens) ++q[t.surface];
    double qnorm = 0.0;
    for (auto& [term, tf] : q) {
      tf *= idf(term);
      qnorm += tf * tf;
    }
    qnorm = std::sqrt(qnorm);
    if (qnorm == 0.0) return {};

    std::vector<std::pair<double, std::string>> scored;
    for (const auto& d : docs_) {
      if (d.norm == 0.0) continue;
      double dot = 0.0;
      for (const auto& [term, qw] : q) {
        auto it = d.weights.find(term);
        if (it != d.weights.end()) dot += qw * it->second;
      }
      if (dot > 0.0) scored.emplace_back(dot / (qnorm * d.norm), d.id);
    }
    std::sort(scored.begin(), scored.end(), [](const auto& a, const auto& b) {
      if (a.first != b.first) return a.first > b.first;
      return a.second < b.second;
    });
    if (scored.size() > k) scored.resize(k);
    return scored;
  }

  std::size_t doc_count() const { return docs_.size(); }

 private:
  struct DocVec {
    std::string id;
    std::map<std::string, std::size_t> tf;
    std::map<std::string, double> weights;
    double norm = 0.0;
  };

  double idf(const std::string& term) const {
    auto it = df_.find(term);
    double df = it == df_.end() ? 0.0 : static_cast<double>(it->second);
    double n = static_cast<double>(docs_.size());
    return std::log((n + 1.0) / (df + 1.0)) + 1.0;
  }

  std::vector<DocVec> docs_;
  std::map<std::string, std::size_t> df_;
  bool built_ = false;
};

}  // namespace kenli
