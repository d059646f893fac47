#pragma once

#include <compare>
#include <string>
#include <vector>

#include "schreier/errors.hpp"

namespace schreier {

/// One letter occurrence in a word: letter index into an alphabet and a sign
/// (+1 for the letter, -1 for its formal inverse).
struct Gen {
  int letter = 0;
  int sign = +1;

  friend bool operator==(const Gen&, const Gen&) = default;
  // Letter index ascending, + before - (matches the transversal tie-break).
  friend std::strong_ordering operator<=>(const Gen& a, const Gen& b) {
    if (auto c = a.letter <=> b.letter; c != 0) return c;
    return b.sign <=> a.sign;
  }
};

/// Freely reduced word over a declared alphabet. The empty word is the
/// identity. Construction reduces adjacent inverse pairs.
class Word {
 public:
  Word() = default;

  explicit Word(std::vector<Gen> gens) : gens_(std::move(gens)) { reduce(); }

  static Word letter(int index, int sign = +1) {
    return Word(std::vector<Gen>{Gen{index, sign}});
  }

  const std::vector<Gen>& gens() const { return gens_; }
  bool empty() const { return gens_.empty(); }
  std::size_t length() const { return gens_.size(); }

  Word inverse() const {
    std::vector<Gen> out;
    out.reserve(gens_.size());
    for (auto it = gens_.rbegin(); it != gens_.rend(); ++it)
      out.push_back(Gen{it->letter, -it->sign});
    return Word(std::move(out));
  }

  friend Word operator*(const Word& a, const Word& b) {
    std::vector<Gen> out = a.gens_;
    out.insert(out.end(), b.gens_.begin(), b.gens_.end());
    return Word(std::move(out));
  }

  friend bool operator==(const Word&, const Word&) = default;
  friend auto operator<=>(const Word&, const Word&) = default;

  /// Canonical representative of {w, w^-1}: the smaller under <=>.
  Word inverse_canonical() const {
    Word inv = inverse();
    return *this <= inv ? *this : inv;
  }

 private:
  void reduce() {
    std::vector<Gen> out;
    out.reserve(gens_.size());
    for (const Gen& g : gens_) {
      if (g.sign != 1 && g.sign != -1)
        throw ValidationError("word sign must be +1 or -1");
      if (!out.empty() && out.back().letter == g.letter &&
          out.back().sign == -g.sign) {
        out.pop_back();
      } else {
        out.push_back(g);
      }
    }
    gens_ = std::move(out);
  }

  std::vector<Gen> gens_;
};

/// Renders a word using alphabet names, e.g. "t x1 t^-1"; identity -> "e".
template <typename Alphabet>
std::string format_word(const Word& w, const Alphabet& alphabet) {
  if (w.empty()) return "e";
  std::string out;
  for (const Gen& g : w.gens()) {
    if (!out.empty()) out += ' ';
    out += alphabet.name(g.letter);
    if (g.sign < 0) out += "^-1";
  }
  return out;
}

}  // namespace schreier
