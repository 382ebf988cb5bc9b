// Copyright 2026 The skillbpe Authors
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

#ifndef SKILLBPE_CORPUS_HPP_
#define SKILLBPE_CORPUS_HPP_

#include <compare>
#include <cstddef>
#include <cstdint>
#include <functional>
#include <optional>
#include <unordered_map>
#include <utility>
#include <vector>

namespace skillbpe
{

/// Index of a k-means centroid, i.e. a base token.
struct TokenId
{
  std::int32_t value = 0;
  friend auto operator<=>(const TokenId &, const TokenId &) = default;
};

/// Index of a subword in the vocabulary that created it. Base tokens occupy
/// ids [0, k); merged subwords are numbered in creation order after them.
struct SubwordId
{
  std::int32_t value = 0;
  friend auto operator<=>(const SubwordId &, const SubwordId &) = default;
};

/// A contiguous timestep span [start, start + length) of one trajectory.
struct Instance
{
  std::uint32_t trajectory = 0;
  std::uint32_t start = 0;
  std::uint32_t length = 1;

  std::uint32_t end() const { return start + length; }
  friend bool operator==(const Instance &, const Instance &) = default;
};

struct Token
{
  SubwordId id;
  Instance span;
  friend bool operator==(const Token &, const Token &) = default;
};

/// Per trajectory, the ordered tokens whose spans tile [0, n_i).
struct TokenizedCorpus
{
  std::vector<std::vector<Token>> sequences;

  std::size_t token_count() const;
  friend bool operator==(const TokenizedCorpus &, const TokenizedCorpus &) = default;
};

/// All greedy non-overlapping adjacent occurrences of one ordered pair.
struct CandidatePair
{
  SubwordId left;
  SubwordId right;
  std::vector<Instance> instances;

  std::size_t count() const { return instances.size(); }
};

using BaseSequence = std::vector<TokenId>;

/// Merge tree of every subword ever created. Entries are never removed, so
/// a pruned subword still expands for the composites built on top of it.
class SubwordTable
{
public:
  struct Entry
  {
    SubwordId id;
    std::optional<std::pair<SubwordId, SubwordId>> parents;
    std::optional<TokenId> base;
    BaseSequence expansion;
  };

  SubwordTable() = default;
  explicit SubwordTable(int k);

  SubwordId add_merge(SubwordId left, SubwordId right);

  const Entry & operator[](SubwordId id) const { return entries_.at(static_cast<std::size_t>(id.value)); }
  std::size_t size() const { return entries_.size(); }
  int base_count() const { return base_count_; }
  bool is_base(SubwordId id) const { return id.value < base_count_; }

  /// Cached flattening; see expand() for the recursive definition.
  const BaseSequence & expansion(SubwordId id) const { return (*this)[id].expansion; }
  std::optional<SubwordId> find(const BaseSequence & expansion) const;

private:
  struct SequenceHash
  {
    std::size_t operator()(const BaseSequence & s) const noexcept;
  };

  std::vector<Entry> entries_;
  std::unordered_map<BaseSequence, SubwordId, SequenceHash> by_expansion_;
  int base_count_ = 0;
};

/// Recursively flattens the merge tree rooted at `id` to base tokens.
BaseSequence expand(const SubwordTable & table, SubwordId id);

/// One entry per distinct ordered (left, right) pair adjacent within a
/// trajectory, sorted by (left, right). Self-pairs are counted greedily
/// left to right, so "a a a" yields a single (a, a) occurrence.
std::vector<CandidatePair> enumerate_candidates(const TokenizedCorpus & corpus);

/// Replaces every greedy left-to-right occurrence of (left, right) with one
/// token of `merged` spanning both. Returns the number of replacements; zero
/// means the pair was not present and the corpus is unchanged.
std::size_t apply_merge(TokenizedCorpus & corpus, SubwordId left, SubwordId right, SubwordId merged);

struct MergeStep
{
  SubwordId left;
  SubwordId right;
  SubwordId merged;
  friend bool operator==(const MergeStep &, const MergeStep &) = default;
};

/// Builds the length-1 corpus for per-trajectory base token sequences.
TokenizedCorpus corpus_from_base(const std::vector<std::vector<TokenId>> & base_sequences);

/// Full retokenization: rewrites the base sequences with every merge in
/// learned order, working on plain id arrays rather than the token spans.
TokenizedCorpus retokenize(
  const std::vector<std::vector<TokenId>> & base_sequences, const std::vector<MergeStep> & merges);

/// Expands every token and concatenates, per trajectory.
std::vector<std::vector<TokenId>> flatten(const TokenizedCorpus & corpus, const SubwordTable & table);

}  // namespace skillbpe

#endif  // SKILLBPE_CORPUS_HPP_
