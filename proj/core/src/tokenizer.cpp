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

#include "skillbpe/tokenizer.hpp"

#include "skillbpe/errors.hpp"

#include <algorithm>
#include <chrono>
#include <string>

namespace skillbpe
{

std::string_view to_string(MergeStrategy strategy)
{
  switch (strategy) {
    case MergeStrategy::mahalanobis:
      return "mahalanobis";
    case MergeStrategy::frequency:
      return "frequency";
  }
  return "unknown";
}

MergeStrategy parse_strategy(std::string_view name)
{
  if (name == "mahalanobis") {
    return MergeStrategy::mahalanobis;
  }
  if (name == "frequency") {
    return MergeStrategy::frequency;
  }
  throw UsageError("unknown merge strategy '" + std::string(name) + "' (expected mahalanobis|frequency)");
}

void validate(const TokenizerConfig & config, int resolved_k)
{
  if (resolved_k < 2) {
    throw UsageError("k must be at least 2");
  }
  if (config.n_max < resolved_k) {
    throw UsageError(
      "n_max (" + std::to_string(config.n_max) + ") must be at least k (" + std::to_string(resolved_k) + ")");
  }
  if (config.n_min > config.n_max) {
    throw UsageError("n_min must not exceed n_max");
  }
  if (config.keep_base_tokens ? config.n_min < resolved_k : config.n_min < 1) {
    throw UsageError(
      config.keep_base_tokens ? "n_min must be at least k when base tokens are kept" : "n_min must be positive");
  }
  if (!(config.epsilon > 0.0)) {
    throw UsageError("epsilon must be positive");
  }
  if (config.min_count < 1) {
    throw UsageError("min_count must be at least 1");
  }
}

Vocabulary::Vocabulary(int k, int heading_dim, double epsilon)
  : table_(k),
    heading_dim_(heading_dim),
    epsilon_(epsilon),
    active_(static_cast<std::size_t>(k), true),
    active_count_(static_cast<std::size_t>(k)),
    headings_(static_cast<std::size_t>(k)),
    counts_(static_cast<std::size_t>(k), 0),
    state_(heading_dim, epsilon)
{
}

std::vector<SubwordId> Vocabulary::active_ids() const
{
  std::vector<SubwordId> out;
  out.reserve(active_count_);
  for (std::size_t i = 0; i < active_.size(); ++i) {
    if (active_[i]) {
      out.push_back(SubwordId{static_cast<std::int32_t>(i)});
    }
  }
  return out;
}

Heading Vocabulary::scoring_heading(SubwordId id) const
{
  const auto & h = heading(id);
  return h ? *h : Heading::Zero(heading_dim_);
}

std::vector<Heading> Vocabulary::admitted_headings() const
{
  std::vector<Heading> q;
  for (std::size_t i = 0; i < active_.size(); ++i) {
    if (active_[i] && headings_[i]) {
      q.push_back(*headings_[i]);
    }
  }
  return q;
}

std::vector<MergeStep> Vocabulary::merge_steps() const
{
  std::vector<MergeStep> out;
  out.reserve(merge_log_.size());
  for (const auto & m : merge_log_) {
    out.push_back(MergeStep{m.left, m.right, m.merged});
  }
  return out;
}

SubwordId Vocabulary::admit(SubwordId left, SubwordId right, Heading heading, std::size_t count, double score)
{
  if (heading.size() != heading_dim_) {
    throw_invariant("admitted heading has wrong dimension");
  }
  const SubwordId id = table_.add_merge(left, right);
  active_.push_back(true);
  ++active_count_;
  headings_.push_back(std::move(heading));
  counts_.push_back(count);
  merge_log_.push_back(MergeRecord{left, right, id, score, count});
  refresh();
  return id;
}

void Vocabulary::remove(SubwordId id, double score)
{
  if (!is_active(id)) {
    throw_invariant("removing an inactive subword");
  }
  active_[static_cast<std::size_t>(id.value)] = false;
  --active_count_;
  prune_log_.push_back(PruneRecord{id, score});
  refresh();
}

void Vocabulary::refresh()
{
  const auto q = admitted_headings();
  state_ = update_stats(q, heading_dim_, epsilon_);
}

bool expansion_less(const BaseSequence & a, const BaseSequence & b)
{
  return std::lexicographical_compare(a.begin(), a.end(), b.begin(), b.end());
}

namespace
{

struct Scored
{
  const CandidatePair * pair = nullptr;
  BaseSequence expansion;
  double score = 0.0;
  Heading heading;
};

// Tie-break between two candidates whose scores tie.
bool precedes(const Scored & x, const Scored & y, const SubwordTable & table)
{
  if (x.expansion != y.expansion) {
    return expansion_less(x.expansion, y.expansion);
  }
  return expansion_less(table.expansion(x.pair->left), table.expansion(y.pair->left));
}

}  // namespace

MergeReport merge_loop(
  TokenizedCorpus & corpus, Vocabulary & vocab, const HeadingEvaluator & headings, const MergeOptions & options)
{
  if (headings.dim() != vocab.heading_dim()) {
    throw_invariant("heading evaluator and vocabulary disagree on dimension");
  }
  MergeReport report;
  const auto & table = vocab.table();
  while (vocab.size() < static_cast<std::size_t>(options.n_max)) {
    const auto candidates = enumerate_candidates(corpus);
    std::vector<Scored> scored;
    double top = 0.0;
    for (const auto & c : candidates) {
      if (c.count() < static_cast<std::size_t>(options.min_count)) {
        continue;
      }
      Scored s;
      s.pair = &c;
      s.expansion = table.expansion(c.left);
      const auto & tail = table.expansion(c.right);
      s.expansion.insert(s.expansion.end(), tail.begin(), tail.end());
      if (table.find(s.expansion)) {
        continue;
      }
      if (options.strategy == MergeStrategy::mahalanobis) {
        s.heading = headings.mean_heading(c.instances);
        s.score = vocab.score_state().score(s.heading);
      } else {
        s.score = static_cast<double>(frequency_score(c));
      }
      top = scored.empty() ? s.score : std::max(top, s.score);
      scored.push_back(std::move(s));
    }
    std::optional<Scored> best;
    for (auto & s : scored) {
      if (ties_with(s.score, top) && (!best || precedes(s, *best, table))) {
        best = std::move(s);
      }
    }
    if (!best) {
      report.early_stop = true;
      report.message = "no eligible merge candidate remains at vocabulary size " + std::to_string(vocab.size()) +
                       " (n_max " + std::to_string(options.n_max) + ")";
      break;
    }
    if (best->heading.size() == 0) {
      best->heading = headings.mean_heading(best->pair->instances);
    }
    const SubwordId left = best->pair->left;
    const SubwordId right = best->pair->right;
    const std::size_t count = best->pair->count();
    const SubwordId merged = vocab.admit(left, right, std::move(best->heading), count, best->score);
    const std::size_t replaced = apply_merge(corpus, left, right, merged);
    if (replaced != count) {
      throw_invariant("merge replaced a different number of occurrences than enumerated");
    }
    ++report.merges;
  }
  return report;
}

std::size_t prune_loop(Vocabulary & vocab, const PruneOptions & options)
{
  if (options.n_min < 1) {
    throw UsageError("n_min must be positive");
  }
  if (static_cast<std::size_t>(options.n_min) > vocab.size()) {
    throw UsageError(
      "n_min (" + std::to_string(options.n_min) + ") exceeds vocabulary size " + std::to_string(vocab.size()));
  }
  const auto & table = vocab.table();
  std::size_t removed = 0;
  while (vocab.size() > static_cast<std::size_t>(options.n_min)) {
    std::vector<std::pair<SubwordId, double>> scored;
    double bottom = 0.0;
    for (const auto id : vocab.active_ids()) {
      if (options.keep_base_tokens && table.is_base(id)) {
        continue;
      }
      const double s = vocab.score_state().score(vocab.scoring_heading(id));
      bottom = scored.empty() ? s : std::min(bottom, s);
      scored.emplace_back(id, s);
    }
    // Ids ascend, so a strict comparison leaves creation order as the last key.
    std::optional<SubwordId> worst;
    double worst_score = 0.0;
    for (const auto & [id, s] : scored) {
      if (ties_with(s, bottom) && (!worst || expansion_less(table.expansion(id), table.expansion(*worst)))) {
        worst = id;
        worst_score = s;
      }
    }
    if (!worst) {
      throw UsageError("no prunable subword left; n_min is below the number of kept base tokens");
    }
    vocab.remove(*worst, worst_score);
    ++removed;
  }
  return removed;
}

std::vector<Skill> export_skills(const Vocabulary & vocab, const Codebook & codebook)
{
  std::vector<Skill> skills;
  for (const auto id : vocab.active_ids()) {
    Skill s;
    s.id = static_cast<int>(skills.size());
    s.subword = id;
    s.base_tokens = vocab.table().expansion(id);
    s.actions.resize(static_cast<Eigen::Index>(s.base_tokens.size()), codebook.dim());
    for (std::size_t i = 0; i < s.base_tokens.size(); ++i) {
      s.actions.row(static_cast<Eigen::Index>(i)) = codebook.centroids.row(s.base_tokens[i].value);
    }
    s.heading = vocab.scoring_heading(id);
    s.instance_count = vocab.instance_count(id);
    skills.push_back(std::move(s));
  }
  return skills;
}

Extraction run_extraction(const Dataset & dataset, const TokenizerConfig & config)
{
  const auto started = std::chrono::steady_clock::now();
  const int k = config.k > 0 ? config.k : default_k(dataset.d_act());
  validate(config, k);

  KMeansOptions km;
  km.k = k;
  km.seed = config.seed;
  km.max_iters = config.kmeans_max_iters;
  km.tol = config.kmeans_tol;
  Codebook codebook = fit_codebook(dataset, km);

  auto base = base_sequences(dataset, codebook);
  TokenizedCorpus corpus = corpus_from_base(base);

  const HeadingEvaluator headings(dataset, config.heading_columns);
  Vocabulary vocab(k, headings.dim(), config.epsilon);
  for (const auto & seq : corpus.sequences) {
    for (const auto & tok : seq) {
      vocab.set_instance_count(tok.id, vocab.instance_count(tok.id) + 1);
    }
  }

  MergeOptions mo;
  mo.n_max = config.n_max;
  mo.strategy = config.strategy;
  mo.min_count = config.min_count;
  MergeReport report = merge_loop(corpus, vocab, headings, mo);

  PruneOptions po;
  po.n_min = std::min<int>(config.n_min, static_cast<int>(vocab.size()));
  po.keep_base_tokens = config.keep_base_tokens;
  prune_loop(vocab, po);

  SkillLibrary library;
  library.skills = export_skills(vocab, codebook);
  library.codebook = std::move(codebook);
  library.config = config;
  library.config.k = k;
  library.merge_log = vocab.merge_log();
  library.prune_log = vocab.prune_log();
  library.early_stopped = report.early_stop;
  library.note = report.message;
  library.generation_seconds =
    std::chrono::duration<double>(std::chrono::steady_clock::now() - started).count();

  return Extraction{std::move(library), std::move(vocab), std::move(base), std::move(corpus), std::move(report)};
}

SkillLibrary build_skill_library(const Dataset & dataset, const TokenizerConfig & config)
{
  return run_extraction(dataset, config).library;
}

SkillLibrary primitive_library(const Codebook & codebook)
{
  SkillLibrary library;
  library.codebook = codebook;
  library.config.k = codebook.k;
  library.config.n_max = codebook.k;
  library.config.n_min = codebook.k;
  library.config.seed = codebook.seed;
  library.config.keep_base_tokens = true;
  library.note = "primitive centroid actions";
  for (int i = 0; i < codebook.k; ++i) {
    Skill s;
    s.id = i;
    s.subword = SubwordId{i};
    s.base_tokens = {TokenId{i}};
    s.actions = codebook.centroids.row(i);
    s.heading = Heading::Zero(0);
    library.skills.push_back(std::move(s));
  }
  return library;
}

LengthStats skill_length_stats(const SkillLibrary & library)
{
  if (library.skills.empty()) {
    throw UsageError("skill library is empty");
  }
  const auto n = static_cast<double>(library.skills.size());
  double mean = 0.0;
  for (const auto & s : library.skills) {
    mean += static_cast<double>(s.length());
  }
  mean /= n;
  double var = 0.0;
  for (const auto & s : library.skills) {
    const double d = static_cast<double>(s.length()) - mean;
    var += d * d;
  }
  return LengthStats{mean, std::sqrt(var / n)};
}

}  // namespace skillbpe
