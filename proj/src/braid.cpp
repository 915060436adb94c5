// Copyright 2026 The braidmix Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "braidmix/braid.hpp"

#include <algorithm>
#include <cctype>
#include <cstdlib>
#include <numeric>

namespace braidmix {

std::string to_string(const Generator& g) {
  if (g.is_identity()) return "s0";
  return (g.inverse ? "S" : "s") + std::to_string(g.index);
}

BraidWord::BraidWord(int strands, std::vector<Generator> letters,
                     std::vector<BraceGroup> braces)
    : strands_(strands), letters_(std::move(letters)), braces_(std::move(braces)) {
  if (strands_ < 2) {
    throw PreconditionError("braid word needs at least 2 strands");
  }
  for (const auto& g : letters_) {
    if (g.index < 0 || g.index >= strands_) {
      throw PreconditionError("generator " + to_string(g) +
                              " out of range for " + std::to_string(strands_) +
                              " strands");
    }
    if (g.is_identity() && g.inverse) {
      throw PreconditionError("s0 has no inverse form");
    }
  }
  for (const auto& [first, last] : braces_) {
    if (first >= last || last > letters_.size()) {
      throw PreconditionError("brace group out of range");
    }
  }
}

BraidWord BraidWord::inverse() const {
  std::vector<Generator> out;
  out.reserve(letters_.size());
  for (auto it = letters_.rbegin(); it != letters_.rend(); ++it) {
    out.push_back(it->inverted());
  }
  std::vector<BraceGroup> braces;
  const std::size_t m = letters_.size();
  for (auto it = braces_.rbegin(); it != braces_.rend(); ++it) {
    braces.emplace_back(m - it->second, m - it->first);
  }
  return BraidWord(strands_, std::move(out), std::move(braces));
}

BraidWord BraidWord::concat(const BraidWord& other) const {
  if (other.strands_ != strands_) {
    throw PreconditionError("cannot concatenate words over different strands");
  }
  auto letters = letters_;
  letters.insert(letters.end(), other.letters_.begin(), other.letters_.end());
  auto braces = braces_;
  for (const auto& [first, last] : other.braces_) {
    braces.emplace_back(first + letters_.size(), last + letters_.size());
  }
  return BraidWord(strands_, std::move(letters), std::move(braces));
}

std::string to_string(const BraidWord& word) {
  std::string out;
  const auto& letters = word.letters();
  std::size_t brace = 0;
  for (std::size_t i = 0; i < letters.size(); ++i) {
    if (i > 0) out += '.';
    const bool opens = brace < word.braces().size() &&
                       word.braces()[brace].first == i;
    if (opens) out += '{';
    out += to_string(letters[i]);
    if (brace < word.braces().size() && word.braces()[brace].second == i + 1) {
      out += '}';
      ++brace;
    }
  }
  return out;
}

namespace {

Generator parse_token(std::string_view token, int strands) {
  if (token.size() < 2 || (token[0] != 's' && token[0] != 'S')) {
    throw ParseError("malformed braid token '" + std::string(token) + "'");
  }
  int index = 0;
  for (std::size_t i = 1; i < token.size(); ++i) {
    if (!std::isdigit(static_cast<unsigned char>(token[i]))) {
      throw ParseError("malformed braid token '" + std::string(token) + "'");
    }
    index = index * 10 + (token[i] - '0');
    if (index > 1'000'000) {
      throw ParseError("braid index too large in '" + std::string(token) + "'");
    }
  }
  const bool inverse = token[0] == 'S';
  if (index == 0 && inverse) {
    throw ParseError("malformed braid token 'S0': s0 is its own inverse");
  }
  if (index >= strands) {
    throw ParseError("braid index out of range: '" + std::string(token) +
                     "' with " + std::to_string(strands) + " strands");
  }
  return {index, inverse};
}

}  // namespace

BraidWord parse_braid_word(std::string_view text, int strands) {
  if (strands < 2) throw ParseError("braid word needs at least 2 strands");
  std::string compact;
  for (char c : text) {
    if (!std::isspace(static_cast<unsigned char>(c))) compact += c;
  }
  if (compact.empty()) throw ParseError("empty braid word");

  std::vector<Generator> letters;
  std::vector<BraceGroup> braces;
  bool in_brace = false;
  std::size_t brace_start = 0;
  std::string token;
  // Expect a token after '.', '{' or at the start.
  bool expect_item = true;

  auto flush = [&] {
    if (token.empty()) throw ParseError("empty braid token in '" + compact + "'");
    letters.push_back(parse_token(token, strands));
    token.clear();
    expect_item = false;
  };

  for (std::size_t i = 0; i < compact.size(); ++i) {
    const char c = compact[i];
    if (c == '{') {
      if (in_brace) throw ParseError("nested braces in '" + compact + "'");
      if (!token.empty() || !expect_item) {
        throw ParseError("brace must follow a separator in '" + compact + "'");
      }
      in_brace = true;
      brace_start = letters.size();
    } else if (c == '}') {
      if (!in_brace) throw ParseError("unbalanced '}' in '" + compact + "'");
      flush();
      in_brace = false;
      braces.emplace_back(brace_start, letters.size());
    } else if (c == '.') {
      if (!token.empty()) {
        flush();
      } else if (expect_item) {
        throw ParseError("empty braid token in '" + compact + "'");
      }
      expect_item = true;
    } else {
      if (!expect_item && token.empty()) {
        throw ParseError("missing '.' separator in '" + compact + "'");
      }
      token += c;
    }
  }
  if (in_brace) throw ParseError("unbalanced '{' in '" + compact + "'");
  if (!token.empty()) {
    flush();
  } else if (expect_item) {
    throw ParseError("trailing separator in '" + compact + "'");
  }
  return BraidWord(strands, std::move(letters), std::move(braces));
}

BraidWord free_reduce(const BraidWord& word) {
  std::vector<Generator> stack;
  for (const auto& g : word.letters()) {
    if (g.is_identity()) continue;
    if (!stack.empty() && stack.back() == g.inverted()) {
      stack.pop_back();
    } else {
      stack.push_back(g);
    }
  }
  if (stack.empty()) stack.push_back(Generator::identity());
  return BraidWord(word.strands(), std::move(stack));
}

Permutation::Permutation(int n) : image_(static_cast<std::size_t>(n)) {
  std::iota(image_.begin(), image_.end(), 0);
}

Permutation::Permutation(std::vector<int> image) : image_(std::move(image)) {
  std::vector<bool> seen(image_.size(), false);
  for (int v : image_) {
    if (v < 0 || v >= size() || seen[v]) {
      throw PreconditionError("permutation image is not a bijection");
    }
    seen[v] = true;
  }
}

Permutation Permutation::inverse() const {
  std::vector<int> inv(image_.size());
  for (int a = 0; a < size(); ++a) inv[image_[a]] = a;
  return Permutation(std::move(inv));
}

bool Permutation::is_identity() const {
  for (int a = 0; a < size(); ++a) {
    if (image_[a] != a) return false;
  }
  return true;
}

void Permutation::swap_rows(int row) {
  if (row < 0 || row + 1 >= size()) {
    throw PreconditionError("row swap " + std::to_string(row) +
                            " out of range for " + std::to_string(size()) +
                            " agents");
  }
  for (int& r : image_) {
    if (r == row) {
      r = row + 1;
    } else if (r == row + 1) {
      r = row;
    }
  }
}

Permutation compose(const Permutation& first, const Permutation& second) {
  if (first.size() != second.size()) {
    throw PreconditionError("composing permutations of different sizes");
  }
  std::vector<int> image(static_cast<std::size_t>(first.size()));
  for (int a = 0; a < first.size(); ++a) image[a] = second(first(a));
  return Permutation(std::move(image));
}

Permutation induced_permutation(const BraidWord& word) {
  Permutation p(word.strands());
  for (const auto& g : word.letters()) {
    if (!g.is_identity()) p.swap_rows(g.index - 1);
  }
  return p;
}

bool BraidStep::is_identity() const {
  return std::all_of(generators.begin(), generators.end(),
                     [](const Generator& g) { return g.is_identity(); });
}

std::vector<int> BraidStep::swapped_rows() const {
  std::vector<int> rows;
  for (const auto& g : generators) {
    if (!g.is_identity()) rows.push_back(g.index - 1);
  }
  return rows;
}

bool commutes_pairwise(const std::vector<Generator>& generators) {
  for (std::size_t a = 0; a < generators.size(); ++a) {
    if (generators[a].is_identity()) continue;
    for (std::size_t b = a + 1; b < generators.size(); ++b) {
      if (generators[b].is_identity()) continue;
      if (std::abs(generators[a].index - generators[b].index) < 2) return false;
    }
  }
  return true;
}

std::vector<BraidStep> schedule_steps(const BraidWord& word, bool honor_braces) {
  const auto& letters = word.letters();
  // Brace group id per letter, or -1.
  std::vector<int> group(letters.size(), -1);
  if (honor_braces) {
    for (std::size_t b = 0; b < word.braces().size(); ++b) {
      const auto [first, last] = word.braces()[b];
      for (std::size_t i = first; i < last; ++i) group[i] = static_cast<int>(b);
    }
  }

  std::vector<BraidStep> steps;
  // Whether the last step may still absorb unbraced letters.
  bool open = false;
  for (std::size_t i = 0; i < letters.size();) {
    if (group[i] >= 0) {
      const auto [first, last] = word.braces()[group[i]];
      BraidStep step{{letters.begin() + static_cast<std::ptrdiff_t>(first),
                      letters.begin() + static_cast<std::ptrdiff_t>(last)}};
      if (!commutes_pairwise(step.generators)) {
        throw PreconditionError("brace group {" +
                                to_string(BraidWord(word.strands(),
                                                    step.generators)) +
                                "} has generators closer than two indices");
      }
      steps.push_back(std::move(step));
      open = false;
      i = last;
      continue;
    }
    const Generator g = letters[i];
    if (g.is_identity()) {
      steps.push_back(BraidStep{{g}});
      open = false;
    } else if (open) {
      auto candidate = steps.back().generators;
      candidate.push_back(g);
      if (commutes_pairwise(candidate)) {
        steps.back().generators = std::move(candidate);
      } else {
        steps.push_back(BraidStep{{g}});
      }
    } else {
      steps.push_back(BraidStep{{g}});
      open = true;
    }
    ++i;
  }
  return steps;
}

std::vector<Generator> flatten(const std::vector<BraidStep>& steps) {
  std::vector<Generator> out;
  for (const auto& s : steps) {
    out.insert(out.end(), s.generators.begin(), s.generators.end());
  }
  return out;
}

}  // namespace braidmix
