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

#ifndef SKILLBPE_TOKENIZER_HPP_
#define SKILLBPE_TOKENIZER_HPP_

#include "skillbpe/codebook.hpp"
#include "skillbpe/corpus.hpp"
#include "skillbpe/dataset.hpp"
#include "skillbpe/scoring.hpp"

#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace skillbpe
{

enum class MergeStrategy
{
  mahalanobis,
  frequency,
};

std::string_view to_string(MergeStrategy strategy);
MergeStrategy parse_strategy(std::string_view name);

struct TokenizerConfig
{
  /// Number of base tokens; 0 selects default_k(d_act).
  int k = 0;
  int n_max = 128;
  int n_min = 16;
  double epsilon = 1e-6;
  MergeStrategy strategy = MergeStrategy::mahalanobis;
  /// Candidates with fewer greedy occurrences are never merged.
  int min_count = 2;
  /// Exclude base tokens from pruning.
  bool keep_base_tokens = false;
  ColumnSelection heading_columns;
  std::uint64_t seed = 0;
  int kmeans_max_iters = 300;
  double kmeans_tol = 1e-6;
};

/// Throws UsageError unless 2 <= k <= n_max, n_min <= n_max, and n_min >= k
/// when base tokens are kept (n_min >= 1 otherwise).
void validate(const TokenizerConfig & config, int resolved_k);

struct MergeRecord
{
  SubwordId left;
  SubwordId right;
  SubwordId merged;
  double score = 0.0;
  std::size_t count = 0;
  friend bool operator==(const MergeRecord &, const MergeRecord &) = default;
};

struct PruneRecord
{
  SubwordId removed;
  double score = 0.0;
  friend bool operator==(const PruneRecord &, const PruneRecord &) = default;
};

/// The working subword set W. Base tokens carry no heading in Q; merged
/// subwords contribute the heading they were admitted with.
class Vocabulary
{
public:
  Vocabulary(int k, int heading_dim, double epsilon);

  const SubwordTable & table() const { return table_; }
  int k() const { return table_.base_count(); }
  int heading_dim() const { return heading_dim_; }
  std::size_t size() const { return active_count_; }
  bool is_active(SubwordId id) const { return active_.at(static_cast<std::size_t>(id.value)); }
  std::vector<SubwordId> active_ids() const;

  /// Stored heading for merged subwords, the zero vector for base tokens.
  Heading scoring_heading(SubwordId id) const;
  const std::optional<Heading> & heading(SubwordId id) const { return headings_.at(static_cast<std::size_t>(id.value)); }
  std::size_t instance_count(SubwordId id) const { return counts_.at(static_cast<std::size_t>(id.value)); }

  /// Q in admission order: headings of active merged subwords.
  std::vector<Heading> admitted_headings() const;
  const ScoreState & score_state() const { return state_; }

  const std::vector<MergeRecord> & merge_log() const { return merge_log_; }
  const std::vector<PruneRecord> & prune_log() const { return prune_log_; }
  std::vector<MergeStep> merge_steps() const;

  /// Adds concat(left, right), appends its heading to Q and refreshes stats.
  SubwordId admit(SubwordId left, SubwordId right, Heading heading, std::size_t count, double score);
  /// Removes an active subword (and its heading from Q) and refreshes stats.
  void remove(SubwordId id, double score);

  void set_instance_count(SubwordId id, std::size_t count) { counts_.at(static_cast<std::size_t>(id.value)) = count; }

private:
  void refresh();

  SubwordTable table_;
  int heading_dim_;
  double epsilon_;
  std::vector<bool> active_;
  std::size_t active_count_ = 0;
  std::vector<std::optional<Heading>> headings_;
  std::vector<std::size_t> counts_;
  ScoreState state_;
  std::vector<MergeRecord> merge_log_;
  std::vector<PruneRecord> prune_log_;
};

/// Total order used for argmax/argmin ties: lexicographic on the expansion,
/// then on the left part's expansion (for not-yet-created candidates) or
/// creation order.
bool expansion_less(const BaseSequence & a, const BaseSequence & b);

struct MergeOptions
{
  int n_max = 128;
  MergeStrategy strategy = MergeStrategy::mahalanobis;
  int min_count = 2;
};

struct MergeReport
{
  std::size_t merges = 0;
  bool early_stop = false;
  std::string message;
};

/// Grows the vocabulary to n_max by repeatedly admitting the best eligible
/// adjacent pair and merging all its occurrences. Candidates below
/// min_count or duplicating an existing expansion are ineligible; running
/// out of eligible candidates stops early with a message.
MergeReport merge_loop(
  TokenizedCorpus & corpus, Vocabulary & vocab, const HeadingEvaluator & headings, const MergeOptions & options);

struct PruneOptions
{
  int n_min = 16;
  bool keep_base_tokens = false;
};

/// Shrinks the vocabulary to n_min by repeatedly removing the subword with
/// the smallest Mahalanobis score against the current statistics.
std::size_t prune_loop(Vocabulary & vocab, const PruneOptions & options);

struct Skill
{
  int id = 0;
  SubwordId subword;
  BaseSequence base_tokens;
  /// Row i is the centroid of base_tokens[i].
  RowMatrix actions;
  Heading heading;
  std::size_t instance_count = 0;

  std::size_t length() const { return base_tokens.size(); }
};

struct SkillLibrary
{
  Codebook codebook;
  std::vector<Skill> skills;
  TokenizerConfig config;
  std::vector<MergeRecord> merge_log;
  std::vector<PruneRecord> prune_log;
  double generation_seconds = 0.0;
  bool early_stopped = false;
  std::string note;

  std::size_t size() const { return skills.size(); }
  int action_dim() const { return codebook.dim(); }
};

/// Everything the pipeline produced, for inspection and testing.
struct Extraction
{
  SkillLibrary library;
  Vocabulary vocabulary;
  std::vector<std::vector<TokenId>> base_sequences;
  TokenizedCorpus corpus;
  MergeReport merge_report;
};

/// Codebook fit, tokenization, merging, pruning and export.
Extraction run_extraction(const Dataset & dataset, const TokenizerConfig & config);

SkillLibrary build_skill_library(const Dataset & dataset, const TokenizerConfig & config);

/// Library of the k single-step centroid actions, no merging.
SkillLibrary primitive_library(const Codebook & codebook);

/// Exports the active subwords of `vocab`, in creation order.
std::vector<Skill> export_skills(const Vocabulary & vocab, const Codebook & codebook);

struct LengthStats
{
  double mean = 0.0;
  double stddev = 0.0;
};

/// Mean and population standard deviation of skill lengths.
LengthStats skill_length_stats(const SkillLibrary & library);

void save_skill_library(const SkillLibrary & library, const std::filesystem::path & path);
SkillLibrary load_skill_library(const std::filesystem::path & path);

/// Canonical JSON text, optionally without the timing field, for
/// bit-identity comparisons.
std::string skill_library_json(const SkillLibrary & library, bool include_timing = true);

}  // namespace skillbpe

#endif  // SKILLBPE_TOKENIZER_HPP_
