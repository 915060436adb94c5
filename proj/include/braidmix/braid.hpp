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

// Braid words over N strands: parsing, free reduction, the induced
// permutation of braid-point rows, and packing into simultaneous steps.

#ifndef BRAIDMIX_BRAID_HPP_
#define BRAIDMIX_BRAID_HPP_

#include <cstddef>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "braidmix/types.hpp"

namespace braidmix {

// sigma_k (k >= 1) swaps the agents on rows k and k+1 (1-based); sigma_0 is
// the identity letter. `inverse` marks the hatted generator, i.e. the
// opposite over/under crossing. sigma_0 is never inverse.
struct Generator {
  int index = 0;
  bool inverse = false;

  static Generator identity() { return {}; }
  bool is_identity() const { return index == 0; }
  Generator inverted() const {
    return is_identity() ? *this : Generator{index, !inverse};
  }
  friend bool operator==(const Generator&, const Generator&) = default;
};

std::string to_string(const Generator& g);

// Half-open letter range [first, last) of a brace group.
using BraceGroup = std::pair<std::size_t, std::size_t>;

class BraidWord {
 public:
  BraidWord() = default;
  // Throws PreconditionError if strands < 2 or a letter index >= strands.
  BraidWord(int strands, std::vector<Generator> letters,
            std::vector<BraceGroup> braces = {});

  int strands() const { return strands_; }
  const std::vector<Generator>& letters() const { return letters_; }
  const std::vector<BraceGroup>& braces() const { return braces_; }
  std::size_t length() const { return letters_.size(); }

  // Reversed letters with flipped signs. Brace groups are mirrored.
  BraidWord inverse() const;
  // Letters of `*this` followed by `other`; strand counts must agree.
  BraidWord concat(const BraidWord& other) const;

  friend bool operator==(const BraidWord& a, const BraidWord& b) {
    return a.strands_ == b.strands_ && a.letters_ == b.letters_;
  }

 private:
  int strands_ = 2;
  std::vector<Generator> letters_;
  std::vector<BraceGroup> braces_;
};

std::string to_string(const BraidWord& word);

// Grammar: item ('.' item)*, item := token | '{' token ('.' token)* '}',
// token := 's0' | 'sK' | 'SK' (K >= 1, uppercase marks the inverse).
// Whitespace is ignored. Throws ParseError on malformed input, nested or
// unbalanced braces, and indices >= strands.
BraidWord parse_braid_word(std::string_view text, int strands);

// Cancels adjacent sigma_k / inverse pairs to a fixpoint and drops identity
// letters; an empty result is the single letter sigma_0. Brace annotations
// do not survive reduction.
BraidWord free_reduce(const BraidWord& word);

// Bijection agent -> braid-point row, 0-based. Row r holds the braid point
// at height r*h/(N-1).
class Permutation {
 public:
  explicit Permutation(int n = 0);
  explicit Permutation(std::vector<int> image);

  int size() const { return static_cast<int>(image_.size()); }
  int operator()(int agent) const { return image_[agent]; }
  const std::vector<int>& image() const { return image_; }
  Permutation inverse() const;
  bool is_identity() const;

  // Swap whatever agents occupy rows `row` and `row + 1`.
  void swap_rows(int row);

  friend bool operator==(const Permutation&, const Permutation&) = default;

 private:
  std::vector<int> image_;
};

// `first` applied, then `second`.
Permutation compose(const Permutation& first, const Permutation& second);

// Composes the row transpositions of every non-identity letter left to right.
// Over/under sign is irrelevant here.
Permutation induced_permutation(const BraidWord& word);

// Generators executed simultaneously in one braid step. Non-identity members
// pairwise differ in index by at least two.
struct BraidStep {
  std::vector<Generator> generators;

  bool is_identity() const;
  // Lower row (0-based) of each interacting pair in this step.
  std::vector<int> swapped_rows() const;
};

// True when all non-identity indices pairwise differ by >= 2.
bool commutes_pairwise(const std::vector<Generator>& generators);

// Partitions the word into steps in order. With `honor_braces` every brace
// group becomes exactly one step (validated); other letters are packed
// greedily. Unbraced sigma_0 letters always get a step of their own.
// Throws PreconditionError for a brace group that violates the index gap.
std::vector<BraidStep> schedule_steps(const BraidWord& word, bool honor_braces);

// Letters of the steps in order.
std::vector<Generator> flatten(const std::vector<BraidStep>& steps);

}  // namespace braidmix

#endif  // BRAIDMIX_BRAID_HPP_
