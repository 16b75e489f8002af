#pragma once

#include <string>
#include <string_view>

// Porter stemming algorithm, following the 1980 description: five rule steps
// over measure-conditioned suffix rewrites. Words containing anything outside
// [a-z] are returned unchanged (the algorithm is defined on English letters).

namespace kenli {
namespace porter_detail {

class Stemmer {
 public:
  explicit Stemmer(std::string word) : b_(std::move(word)), k_(b_.size()) {}

  std::string run() {
    if (k_ <= 2) return b_;  // length 0-2: nothing to do
    step1a();
    step1b();
    step1c();
    step2();
    step3();
    step4();
    step5a();
    step5b();
    b_.resize(k_);
    return b_;
  }

 private:
  std::string b_;
  std::size_t k_;  // current length
  std::size_t j_ = 0;  // stem length after a suffix match

  bool cons(std::size_t i) const {
    switch (b_[i]) {
      case 'a': case 'e': case 'i': case 'o': case 'u':
        return false;
      case 'y':
        return i == 0 ? true : !cons(i - 1);
      default:
        return true;
    }
  }

  // Measure of b_[0..j_): number of VC sequences.
  int m() const {
    int n = 0;
    std::size_t i = 0;
    while (true) {
      if (i >= j_) return n;
      if (!cons(i)) break;
      ++i;
    }
    ++i;
    while (true) {
      while (true) {
        if (i >= j_) return n;
        if (cons(i)) break;
        ++i;
      }
      ++i;
      ++n;
      while (true) {
        if (i >= j_) return n;
        if (!cons(i)) break;
        ++i;
      }
      ++i;
    }
  }

  bool vowel_in_stem() const {
    for (std::size_t i = 0; i < j_; ++i)
      if (!cons(i)) return true;
    return false;
  }

  bool double_c(std::size_t end) const {  // b_[end-1] == b_[end-2], both consonants
    if (end < 2) return false;
    return b_[end - 1] == b_[end - 2] && cons(end - 1);
  }

  // consonant-vowel-consonant ending at pos (inclusive), final cons not w/x/y
  bool cvc(std::size_t pos) const {
    if (pos < 2) return false;
    if (!cons(pos) || cons(pos - 1) || !cons(pos - 2)) return false;
    char ch = b_[pos];
    return ch != 'w' && ch != 'x' && ch != 'y';
  }

  bool ends(std::string_view s) {
    if (s.size() > k_) return false;
    if (b_.compare(k_ - s.size(), s.size(), s) != 0) return false;
    j_ = k_ - s.size();
    return true;
  }

  void set_to(std::string_view s) {
    b_.replace(j_, k_ - j_, s);
    k_ = j_ + s.size();
  }

  void replace_if_m(std::string_view s) {
    if (m() > 0) set_to(s);
  }

  void step1a() {
    if (b_[k_ - 1] != 's') return;
    if (ends("sses")) k_ -= 2;
    else if (ends("ies")) set_to("i");
    else if (b_[k_ - 2] != 's') --k_;
  }

  void step1b() {
    if (ends("eed")) {
      if (m() > 0) --k_;
      return;
    }
    if ((ends("ed") || ends("ing")) && vowel_in_stem()) {
      k_ = j_;
      if (ends("at")) set_to("ate");
      else if (ends("bl")) set_to("ble");
      else if (ends("iz")) set_to("ize");
      else if (double_c(k_)) {
        char ch = b_[k_ - 1];
        if (ch != 'l' && ch != 's' && ch != 'z') --k_;
      } else if (m() == 1 && cvc(k_ - 1)) {
        j_ = k_;
        set_to("e");
      }
    }
  }

  void step1c() {
    if (ends("y") && vowel_in_stem()) b_[k_ - 1] = 'i';
  }

  void step2() {
    if (k_ < 2) return;
    switch (b_[k_ - 2]) {
      case 'a':
        if (ends("ational")) { replace_if_m("ate"); break; }
        if (ends("tional")) { replace_if_m("tion"); break; }
        break;
      case 'c':
        if (ends("enci")) { replace_if_m("ence"); break; }
        if (ends("anci")) { replace_if_m("ance"); break; }
        break;
      case 'e':
        if (ends("izer")) { replace_if_m("ize"); break; }
        break;
      case 'l':
        if (ends("abli")) { replace_if_m("able"); break; }
        if (ends("alli")) { replace_if_m("al"); break; }
        if (ends("entli")) { replace_if_m("ent"); break; }
        if (ends("eli")) { replace_if_m("e"); break; }
        if (ends("ousli")) { replace_if_m("ous"); break; }
        break;
      case 'o':
        if (ends("ization")) { replace_if_m("ize"); break; }
        if (ends("ation")) { replace_if_m("ate"); break; }
        if (ends("ator")) { replace_if_m("ate"); break; }
        break;
      case 's':
        if (ends("alism")) { replace_if_m("al"); break; }
        if (ends("iveness")) { replace_if_m("ive"); break; }
        if (ends("fulness")) { replace_if_m("ful"); break; }
        if (ends("ousness")) { replace_if_m("ous"); break; }
        break;
      case 't':
        if (ends("aliti")) { replace_if_m("al"); break; }
        if (ends("iviti")) { replace_if_m("ive"); break; }
        if (ends("biliti")) { replace_if_m("ble"); break; }
        break;
      default:
        break;
    }
  }

  void step3() {
    switch (b_[k_ - 1]) {
      case 'e':
        if (ends("icate")) { replace_if_m("ic"); break; }
        if (ends("ative")) { replace_if_m(""); break; }
        if (ends("alize")) { replace_if_m("al"); break; }
        break;
      case 'i':
        if (ends("iciti")) { replace_if_m("ic"); break; }
        break;
      case 'l':
        if (ends("ical")) { replace_if_m("ic"); break; }
        if (ends("ful")) { replace_if_m(""); break; }
        break;
      case 's':
        if (ends("ness")) { replace_if_m(""); break; }
        break;
      default:
        break;
    }
  }

  void step4() {
    if (k_ < 2) return;
    switch (b_[k_ - 2]) {
      case 'a':
        if (ends("al")) break;
        return;
      case 'c':
        if (ends("ance")) break;
        if (ends("ence")) break;
        return;
      case 'e':
        if (ends("er")) break;
        return;
      case 'i':
        if (ends("ic")) break;
        return;
      case 'l':
        if (ends("able")) break;
        if (ends("ible")) break;
        return;
      case 'n':
        if (ends("ant")) break;
        if (ends("ement")) break;
        if (ends("ment")) break;
        if (ends("ent")) break;
        return;
      case 'o':
        if (ends("ion") && j_ > 0 && (b_[j_ - 1] == 's' || b_[j_ - 1] == 't'))
          break;
        if (ends("ou")) break;
        return;
      case 's':
        if (ends("ism")) break;
        return;
      case 't':
        if (ends("ate")) break;
        if (ends("iti")) break;
        return;
      case 'u':
        if (ends("ous")) break;
        return;
      case 'v':
        if (ends("ive")) break;
        return;
      case 'z':
        if (ends("ize")) break;
        return;
      default:
        return;
    }
    if (m() > 1) k_ = j_;
  }

  void step5a() {
    if (b_[k_ - 1] != 'e') return;
    j_ = k_ - 1;
    int mm = m();
    if (mm > 1 || (mm == 1 && !cvc(k_ - 2))) --k_;
  }

  void step5b() {
    j_ = k_;
    if (b_[k_ - 1] == 'l' && double_c(k_) && m() > 1) --k_;
  }
};

}  // namespace porter_detail

inline std::string porter_stem(std::string_view word) {
  for (char c : word)
    if (c < 'a' || c > 'z') return std::string(word);
  return porter_detail::Stemmer(std::string(word)).run();
}

}  // namespace kenli
