#pragma once

#include <cstdlib>
#include <fstream>
#include <map>
#include <memory>
#include <stdexcept>
#include <string>
#include <vector>

#include <json.hpp>

namespace kenli {

struct SearchResult {
  std::string url;
  std::string title;
  std::string snippet;
};

// Query -> ranked results. The fixture backend is the deterministic default;
// HTTP adapters exist for live runs and are never exercised offline.
class SearchBackend {
 public:
  virtual ~SearchBackend() = default;
  virtual std::string method() const = 0;
  virtual std::vector<SearchResult> search(const std::string& query) = 0;
};

// Recorded-fixture backend. File format:
//   {"method": "web_a",
//    "queries": {"query text": [{"url":..., "title":..., "snippet":...}]}}
class FixtureSearchBackend : public SearchBackend {
 public:
  FixtureSearchBackend(std::string method,
                       std::map<std::string, std::vector<SearchResult>> data)
      : method_(std::move(method)), data_(std::move(data)) {}

  static FixtureSearchBackend load(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open search fixture: " + path);
    nlohmann::json j = nlohmann::json::parse(in);
    std::map<std::string, std::vector<SearchResult>> data;
    for (const auto& [query, results] : j.at("queries").items()) {
      auto& vec = data[query];
      for (const auto& r : results)
        vec.push_back(SearchResult{r.value("url", ""), r.value("title", ""),
                                   r.value("snippet", "")});
    }
    return FixtureSearchBackend(j.at("method").get<std::string>(),
                                std::move(data));
  }

  // A fixtures file may hold one backend object or an array of them.
  static std::vector<FixtureSearchBackend> load_all(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open search fixture: " + path);
    nlohmann::json j = nlohmann::json::parse(in);
    std::vector<FixtureSearchBackend> out;
    if (!j.is_array()) j = nlohmann::json::array({j});
    for (const auto& item : j) {
      std::map<std::string, std::vector<SearchResult>> data;
      for (const auto& [query, results] : item.at("queries").items()) {
        auto& vec = data[query];
        for (const auto& r : results)
          vec.push_back(SearchResult{r.value("url", ""), r.value("title", ""),
                                     r.value("snippet", "")});
      }
      out.emplace_back(item.at("method").get<std::string>(), std::move(data));
    }
    return out;
  }

  std::string method() const override { return method_; }

  std::vector<SearchResult> search(const std::string& query) override {
    auto it = data_.find(query);
    return it == data_.end() ? std::vector<SearchResult>{} : it->second;
  }

 private:
  std::string method_;
  std::map<std::string, std::vector<SearchResult>> data_;
};

// Thin HTTP adapter. Expects the endpoint to answer
//   GET <path>?q=<query>   (plus an Authorization: Bearer <key> header)
// with a JSON array of {url, title, snippet}. The API key comes from an
// environment variable (SEARCH_A_KEY / SEARCH_B_KEY); without it the
// backend refuses to construct, which keeps offline runs honest.
class HttpSearchBackend : public SearchBackend {
 public:
  HttpSearchBackend(std::string method, std::string host, std::string path,
                    std::string key_env)
      : method_(std::move(method)), host_(std::move(host)),
        path_(std::move(path)) {
    const char* key = std::getenv(key_env.c_str());
    if (!key || !*key)
      throw std::runtime_error("live search requires env var " + key_env);
    key_ = key;
  }

  std::string method() const override { return method_; }

  std::vector<SearchResult> search(const std::string& query) override;

 private:
  std::string method_, host_, path_, key_;
};

}  // namespace kenli

// The HTTP client pulls in a large header; keep it out of every other
// translation unit unless explicitly requested.
#ifdef KENLI_ENABLE_HTTP_SEARCH
#include <httplib.h>

namespace kenli {

namespace detail {
inline std::string url_encode(const std::string& s) {
  static const char* hex = "0123456789ABCDEF";
  std::string out;
  for (unsigned char c : s) {
    if ((c >= 'A' && c <= 'Z') || (c >= 'a' && c <= 'z') ||
        (c >= '0' && c <= '9') || c == '-' || c == '_' || c == '.' ||
        c == '~') {
      out += static_cast<char>(c);
    } else {
      out += '%';
      out += hex[c >> 4];
      out += hex[c & 15];
    }
  }
  return out;
}
}  // namespace detail

inline std::vector<SearchResult> HttpSearchBackend::search(
    const std::string& query) {
  httplib::Client client(host_);
  client.set_connection_timeout(5);
  client.set_read_timeout(10);
  httplib::Headers headers = {{"Authorization", "Bearer " + key_}};
  auto res = client.Get(path_ + "?q=" + detail::url_encode(query), headers);
  if (!res || res->status != 200)
    throw std::runtime_error("search backend " + method_ + " failed: " +
                             (res ? std::to_string(res->status)
                                  : std::string("no response")));
  nlohmann::json j = nlohmann::json::parse(res->body);
  std::vector<SearchResult> out;
  for (const auto& r : j)
    out.push_back(SearchResult{r.value("url", ""), r.value("title", ""),
                               r.value("snippet", "")});
  return out;
}

}  // namespace kenli
#endif  // KENLI_ENABLE_HTTP_SEARCH
