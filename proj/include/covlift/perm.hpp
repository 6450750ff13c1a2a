#pragma once

#include <algorithm>
#include <cctype>
#include <compare>
#include <cstddef>
#include <string>
#include <string_view>
#include <vector>

#include "covlift/error.hpp"

namespace covlift {

// Permutation of {0, ..., n-1}. Printing and parsing can shift labels by a
// base offset, so the same type serves 0-based vertex ids and 1-based indices.
class Permutation {
 public:
  Permutation() = default;

  explicit Permutation(std::vector<int> images) : img_(std::move(images)) {
    std::vector<char> seen(img_.size(), 0);
    for (int v : img_) {
      if (v < 0 || static_cast<std::size_t>(v) >= img_.size() || seen[v])
        fail(Errc::invalid_argument, "image list is not a permutation");
      seen[v] = 1;
    }
  }

  static Permutation identity(std::size_t n) {
    std::vector<int> v(n);
    for (std::size_t i = 0; i < n; ++i) v[i] = static_cast<int>(i);
    Permutation p;
    p.img_ = std::move(v);
    return p;
  }

  // Cycle notation with fixed points omitted. Labels inside a cycle are either
  // single digits written together, "(13)(67)", or separated by commas or
  // spaces, "(1,13)(6 7)". "id" and "()" denote the identity.
  static Permutation from_cycles(std::string_view text, std::size_t n, int base = 0) {
    std::vector<int> img(n);
    for (std::size_t i = 0; i < n; ++i) img[i] = static_cast<int>(i);
    std::vector<char> moved(n, 0);
    std::size_t pos = 0;
    auto skip_ws = [&] {
      while (pos < text.size() && std::isspace(static_cast<unsigned char>(text[pos]))) ++pos;
    };
    skip_ws();
    if (text.substr(pos) == "id") return identity(n);
    while (true) {
      skip_ws();
      if (pos >= text.size()) break;
      if (text[pos] != '(') fail(Errc::parse, "expected '(' in cycle string: " + std::string(text));
      std::size_t close = text.find(')', pos);
      if (close == std::string_view::npos) fail(Errc::parse, "unbalanced cycle string: " + std::string(text));
      std::string_view body = text.substr(pos + 1, close - pos - 1);
      pos = close + 1;
      std::vector<int> cyc;
      bool separated = body.find_first_of(", \t") != std::string_view::npos;
      if (separated) {
        std::string tok;
        auto flush = [&] {
          if (!tok.empty()) {
            cyc.push_back(std::stoi(tok) - base);
            tok.clear();
          }
        };
        for (char ch : body) {
          if (std::isdigit(static_cast<unsigned char>(ch))) tok.push_back(ch);
          else if (ch == ',' || std::isspace(static_cast<unsigned char>(ch))) flush();
          else fail(Errc::parse, "bad character in cycle: " + std::string(body));
        }
        flush();
      } else {
        for (char ch : body) {
          if (!std::isdigit(static_cast<unsigned char>(ch))) fail(Errc::parse, "bad character in cycle: " + std::string(body));
          cyc.push_back((ch - '0') - base);
        }
      }
      for (int v : cyc) {
        if (v < 0 || static_cast<std::size_t>(v) >= n) fail(Errc::parse, "cycle label out of range: " + std::string(body));
        if (moved[v]) fail(Errc::parse, "label repeated across cycles: " + std::string(text));
        moved[v] = 1;
      }
      for (std::size_t i = 0; i < cyc.size(); ++i) img[cyc[i]] = cyc[(i + 1) % cyc.size()];
    }
    return Permutation(std::move(img));
  }

  std::size_t size() const { return img_.size(); }
  int operator()(int i) const { return img_[static_cast<std::size_t>(i)]; }
  const std::vector<int>& images() const { return img_; }

  bool is_identity() const {
    for (std::size_t i = 0; i < img_.size(); ++i)
      if (img_[i] != static_cast<int>(i)) return false;
    return true;
  }

  Permutation inverse() const {
    std::vector<int> inv(img_.size());
    for (std::size_t i = 0; i < img_.size(); ++i) inv[img_[i]] = static_cast<int>(i);
    Permutation p;
    p.img_ = std::move(inv);
    return p;
  }

  std::string to_cycles(int base = 0) const {
    bool wide = static_cast<int>(img_.size()) - 1 + base > 9;
    std::string out;
    std::vector<char> seen(img_.size(), 0);
    for (std::size_t s = 0; s < img_.size(); ++s) {
      if (seen[s] || img_[s] == static_cast<int>(s)) continue;
      out.push_back('(');
      std::size_t v = s;
      bool first = true;
      while (!seen[v]) {
        seen[v] = 1;
        if (wide && !first) out.push_back(',');
        out += std::to_string(static_cast<int>(v) + base);
        first = false;
        v = static_cast<std::size_t>(img_[v]);
      }
      out.push_back(')');
    }
    return out.empty() ? "id" : out;
  }

  friend auto operator<=>(const Permutation&, const Permutation&) = default;
  friend bool operator==(const Permutation&, const Permutation&) = default;

 private:
  std::vector<int> img_;
};

// (a ∘ b)(i) = a(b(i)).
inline Permutation compose(const Permutation& a, const Permutation& b) {
  if (a.size() != b.size()) fail(Errc::invalid_argument, "composing permutations of different degree");
  std::vector<int> v(a.size());
  for (std::size_t i = 0; i < v.size(); ++i) v[i] = a(b(static_cast<int>(i)));
  return Permutation(std::move(v));
}

// All permutations of {0..n-1} in lexicographic order of image lists.
inline std::vector<Permutation> all_permutations(std::size_t n) {
  std::vector<int> v(n);
  for (std::size_t i = 0; i < n; ++i) v[i] = static_cast<int>(i);
  std::vector<Permutation> out;
  do {
    out.emplace_back(v);
  } while (std::next_permutation(v.begin(), v.end()));
  return out;
}

}  // namespace covlift
