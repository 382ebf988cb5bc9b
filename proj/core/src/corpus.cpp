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

#include "skillbpe/corpus.hpp"

#include "skillbpe/errors.hpp"

#include <algorithm>
#include <numeric>
#include <string>

namespace skillbpe
{

std::size_t TokenizedCorpus::token_count() const
{
  return std::accumulate(
    sequences.begin(), sequences.end(), std::size_t{0},
    [](std::size_t acc, const auto & s) { return acc + s.size(); });
}

SubwordTable::SubwordTable(int k) : base_count_(k)
{
  entries_.reserve(static_cast<std::size_t>(k));
  for (int i = 0; i < k; ++i) {
    Entry e;
    e.id = SubwordId{i};
    e.base = TokenId{i};
    e.expansion = {TokenId{i}};
    by_expansion_.emplace(e.expansion, e.id);
    entries_.push_back(std::move(e));
  }
}

SubwordId SubwordTable::add_merge(SubwordId left, SubwordId right)
{
  Entry e;
  e.id = SubwordId{static_cast<std::int32_t>(entries_.size())};
  e.parents = std::make_pair(left, right);
  e.expansion = expansion(left);
  const auto & tail = expansion(right);
  e.expansion.insert(e.expansion.end(), tail.begin(), tail.end());
  if (!by_expansion_.emplace(e.expansion, e.id).second) {
    throw_invariant("duplicate subword expansion");
  }
  entries_.push_back(std::move(e));
  return entries_.back().id;
}

std::optional<SubwordId> SubwordTable::find(const BaseSequence & expansion) const
{
  const auto it = by_expansion_.find(expansion);
  if (it == by_expansion_.end()) {
    return std::nullopt;
  }
  return it->second;
}

std::size_t SubwordTable::SequenceHash::operator()(const BaseSequence & s) const noexcept
{
  std::size_t h = 1469598103934665603ULL;
  for (auto t : s) {
    h ^= static_cast<std::size_t>(t.value) + 0x9e3779b97f4a7c15ULL + (h << 6) + (h >> 2);
  }
  return h;
}

BaseSequence expand(const SubwordTable & table, SubwordId id)
{
  const auto & e = table[id];
  if (e.base) {
    return {*e.base};
  }
  auto out = expand(table, e.parents->first);
  auto tail = expand(table, e.parents->second);
  out.insert(out.end(), tail.begin(), tail.end());
  return out;
}

namespace
{

std::uint64_t pair_key(SubwordId left, SubwordId right)
{
  return (static_cast<std::uint64_t>(static_cast<std::uint32_t>(left.value)) << 32) |
         static_cast<std::uint32_t>(right.value);
}

}  // namespace

std::vector<CandidatePair> enumerate_candidates(const TokenizedCorpus & corpus)
{
  struct Slot
  {
    std::size_t index;
    std::uint32_t last_trajectory;
    std::size_t last_position;
  };
  std::unordered_map<std::uint64_t, Slot> slots;
  std::vector<CandidatePair> out;

  for (std::size_t t = 0; t < corpus.sequences.size(); ++t) {
    const auto & seq = corpus.sequences[t];
    for (std::size_t i = 0; i + 1 < seq.size(); ++i) {
      const auto & a = seq[i];
      const auto & b = seq[i + 1];
      const auto key = pair_key(a.id, b.id);
      Instance merged{a.span.trajectory, a.span.start, a.span.length + b.span.length};
      auto it = slots.find(key);
      if (it == slots.end()) {
        slots.emplace(key, Slot{out.size(), static_cast<std::uint32_t>(t), i});
        out.push_back(CandidatePair{a.id, b.id, {merged}});
        continue;
      }
      auto & slot = it->second;
      // Only a self-pair can overlap its previous occurrence.
      if (slot.last_trajectory == t && slot.last_position + 1 == i) {
        continue;
      }
      slot.last_trajectory = static_cast<std::uint32_t>(t);
      slot.last_position = i;
      out[slot.index].instances.push_back(merged);
    }
  }
  std::sort(out.begin(), out.end(), [](const CandidatePair & x, const CandidatePair & y) {
    return std::tie(x.left, x.right) < std::tie(y.left, y.right);
  });
  return out;
}

std::size_t apply_merge(TokenizedCorpus & corpus, SubwordId left, SubwordId right, SubwordId merged)
{
  std::size_t replaced = 0;
  for (auto & seq : corpus.sequences) {
    if (seq.size() < 2) {
      continue;
    }
    std::size_t write = 0;
    std::size_t i = 0;
    while (i < seq.size()) {
      if (i + 1 < seq.size() && seq[i].id == left && seq[i + 1].id == right) {
        const Instance span{seq[i].span.trajectory, seq[i].span.start, seq[i].span.length + seq[i + 1].span.length};
        seq[write++] = Token{merged, span};
        i += 2;
        ++replaced;
      } else {
        seq[write++] = seq[i++];
      }
    }
    seq.resize(write);
  }
  return replaced;
}

TokenizedCorpus corpus_from_base(const std::vector<std::vector<TokenId>> & base_sequences)
{
  TokenizedCorpus corpus;
  corpus.sequences.resize(base_sequences.size());
  for (std::size_t t = 0; t < base_sequences.size(); ++t) {
    auto & seq = corpus.sequences[t];
    seq.reserve(base_sequences[t].size());
    for (std::size_t j = 0; j < base_sequences[t].size(); ++j) {
      seq.push_back(Token{
        SubwordId{base_sequences[t][j].value},
        Instance{static_cast<std::uint32_t>(t), static_cast<std::uint32_t>(j), 1}});
    }
  }
  return corpus;
}

TokenizedCorpus retokenize(
  const std::vector<std::vector<TokenId>> & base_sequences, const std::vector<MergeStep> & merges)
{
  TokenizedCorpus corpus;
  corpus.sequences.resize(base_sequences.size());
  for (std::size_t t = 0; t < base_sequences.size(); ++t) {
    std::vector<std::int32_t> ids;
    std::vector<std::uint32_t> lengths;
    for (auto tok : base_sequences[t]) {
      ids.push_back(tok.value);
      lengths.push_back(1);
    }
    for (const auto & m : merges) {
      std::vector<std::int32_t> next_ids;
      std::vector<std::uint32_t> next_lengths;
      for (std::size_t i = 0; i < ids.size();) {
        if (i + 1 < ids.size() && ids[i] == m.left.value && ids[i + 1] == m.right.value) {
          next_ids.push_back(m.merged.value);
          next_lengths.push_back(lengths[i] + lengths[i + 1]);
          i += 2;
        } else {
          next_ids.push_back(ids[i]);
          next_lengths.push_back(lengths[i]);
          ++i;
        }
      }
      ids = std::move(next_ids);
      lengths = std::move(next_lengths);
    }
    std::uint32_t start = 0;
    for (std::size_t i = 0; i < ids.size(); ++i) {
      corpus.sequences[t].push_back(
        Token{SubwordId{ids[i]}, Instance{static_cast<std::uint32_t>(t), start, lengths[i]}});
      start += lengths[i];
    }
  }
  return corpus;
}

std::vector<std::vector<TokenId>> flatten(const TokenizedCorpus & corpus, const SubwordTable & table)
{
  std::vector<std::vector<TokenId>> out(corpus.sequences.size());
  for (std::size_t t = 0; t < corpus.sequences.size(); ++t) {
    for (const auto & tok : corpus.sequences[t]) {
      const auto & e = table.expansion(tok.id);
      out[t].insert(out[t].end(), e.begin(), e.end());
    }
  }
  return out;
}

}  // namespace skillbpe
