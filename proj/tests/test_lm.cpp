#include <catch2/catch_amalgamated.hpp>

#include <cmath>

#include "kenli/lm.hpp"

using namespace kenli;

TEST_CASE("trigram perplexity matches a hand computation") {
  TrigramLM lm(0.1);
  lm.fit({"a b"});
  // padded: <s> <s> a b </s>; every trigram and its bigram context occur
  // exactly once; vocab = {<s>, a, b, </s>, <unk>} so V = 5.
  // p = (1 + 0.1) / (1 + 0.1 * 5) for all three windows -> ppl = 1.5 / 1.1.
  REQUIRE(lm.score("a b") == Catch::Approx(1.5 / 1.1).epsilon(1e-12));
}

TEST_CASE("scoring is deterministic and positive") {
  TrigramLM lm;
  lm.fit({"the cat sat on the mat", "the dog sat on the rug"});
  double s1 = lm.score("the cat sat on the rug");
  double s2 = lm.score("the cat sat on the rug");
  REQUIRE(s1 == s2);
  REQUIRE(s1 > 0.0);
  REQUIRE(std::isfinite(s1));
}

TEST_CASE("seen text is more fluent than scrambled text") {
  TrigramLM lm;
  lm.fit({"the cat sat on the mat", "the cat sat on the mat"});
  REQUIRE(lm.score("the cat sat on the mat") < lm.score("mat the on sat cat"));
}

TEST_CASE("repeated evidence lowers perplexity") {
  TrigramLM once(0.1);
  once.fit({"the cat sat"});
  TrigramLM twice(0.1);
  twice.fit({"the cat sat", "the cat sat"});
  REQUIRE(twice.score("the cat sat") < once.score("the cat sat"));
}

TEST_CASE("unknown words collapse to a shared token") {
  TrigramLM lm;
  lm.fit({"a b c"});
  REQUIRE(lm.score("qq zz") == lm.score("yy ww"));
}

TEST_CASE("scoring is case-insensitive") {
  TrigramLM lm;
  lm.fit({"The Cat Sat"});
  REQUIRE(lm.score("THE CAT SAT") == lm.score("the cat sat"));
}

TEST_CASE("empty text cannot be scored") {
  TrigramLM lm;
  lm.fit({"a b"});
  REQUIRE_THROWS_AS(lm.score(""), std::invalid_argument);
  REQUIRE_THROWS_AS(lm.score("   "), std::invalid_argument);
}

TEST_CASE("empty sentences are ignored during fitting") {
  TrigramLM a(0.1);
  a.fit({"a b"});
  TrigramLM b(0.1);
  b.fit({"", "a b", "   "});
  REQUIRE(a.score("a b") == b.score("a b"));
}

TEST_CASE("smoothing constant must be positive") {
  REQUIRE_THROWS_AS(TrigramLM(0.0), std::invalid_argument);
  REQUIRE_THROWS_AS(TrigramLM(-0.5), std::invalid_argument);
}

TEST_CASE("table scorer looks up exact strings with a fallback") {
  TableLM lm({{"he smokes", 2.5}, {"he drinks", 3.5}}, 9.0);
  REQUIRE(lm.score("he smokes") == 2.5);
  REQUIRE(lm.score("he drinks") == 3.5);
  REQUIRE(lm.score("anything else") == 9.0);
}
