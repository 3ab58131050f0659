// csdet/tagger.hpp

// Copyright 2026  csdet authors

// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//  http://www.apache.org/licenses/LICENSE-2.0
//
// THIS CODE IS PROVIDED *AS IS* BASIS, WITHOUT WARRANTIES OR CONDITIONS OF ANY
// KIND, EITHER EXPRESS OR IMPLIED, INCLUDING WITHOUT LIMITATION ANY IMPLIED
// WARRANTIES OR CONDITIONS OF TITLE, FITNESS FOR A PARTICULAR PURPOSE,
// MERCHANTABLITY OR NON-INFRINGEMENT.
// See the Apache 2 License for the specific language governing permissions and
// limitations under the License.

// Word-level language tagging from two monolingual language models.
//
// Each word w with utterance history h gets the posterior of the first
// language under prior weight lambda,
//
//   q = lambda P_first(w|h) / (lambda P_first(w|h) + (1-lambda) P_second(w|h)),
//
// where each component scores the word with its own model (words and history
// tokens unknown to a component fall back to its <unk> event).  With switch
// penalty gamma = 0 every word independently takes the tag with the higher
// posterior; q = 0.5 exactly resolves to the second tag.  With gamma > 0 a
// two-state Viterbi pass maximizes
//
//   sum_i ln q_i[tag_i]  -  gamma * (number of adjacent tag changes),
//
// breaking exact ties toward the second tag at the end of the utterance and
// toward staying in the same state at each transition.
//
// A sweep tags the whole corpus once per lambda on a fixed grid.  Component
// probabilities do not depend on lambda, so they are computed once per word
// and reused across the grid.

#pragma once

#include <array>
#include <cmath>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "csdet/common.hpp"
#include "csdet/corpus.hpp"
#include "csdet/lm.hpp"

namespace csdet {

struct TaggedHypothesis {
  std::string utterance_id;
  double lambda = 0.0;
  std::vector<LanguageTag> tags;
  std::vector<double> posteriors;  // per word, probability of the first tag
};

struct SweepConfig {
  std::vector<double> lambdas;
  double gamma = 0.0;

  // 51 grid points from 0 to 1 in steps of 0.02.
  static SweepConfig defaults() {
    SweepConfig cfg;
    cfg.lambdas.reserve(51);
    for (int i = 0; i <= 50; ++i) cfg.lambdas.push_back(i / 50.0);
    return cfg;
  }

  void validate() const {
    if (lambdas.size() < 2 || lambdas.front() != 0.0 || lambdas.back() != 1.0)
      throw ValidationError("lambda grid must span 0 to 1");
    for (std::size_t i = 1; i < lambdas.size(); ++i)
      if (!(lambdas[i] > lambdas[i - 1]))
        throw ValidationError("lambda grid must be strictly increasing");
    if (!(gamma >= 0.0)) throw ValidationError("switch penalty must be >= 0");
  }
};

struct SweepPoint {
  double lambda = 0.0;
  std::vector<TaggedHypothesis> hyps;  // one per utterance, corpus order
};

template <LanguageModel M1, LanguageModel M2>
double posterior(std::string_view word, std::span<const std::string> history,
                 const M1& first_lm, const M2& second_lm, double lambda) {
  if (!(lambda >= 0.0 && lambda <= 1.0))
    throw ValidationError("prior weight must lie in [0, 1]");
  if (lambda == 0.0) return 0.0;
  if (lambda == 1.0) return 1.0;
  double p1 = first_lm.prob(word, history);
  double p2 = second_lm.prob(word, history);
  return lambda * p1 / (lambda * p1 + (1.0 - lambda) * p2);
}

// Decodes a tag sequence from per-word first-tag posteriors.  This is the
// whole decision rule; the model only enters through the posteriors.
inline std::vector<LanguageTag> tags_from_posteriors(std::span<const double> q,
                                                     const TagPair& pair, double gamma) {
  if (q.empty()) throw ValidationError("cannot tag an empty utterance");
  if (!(gamma >= 0.0)) throw ValidationError("switch penalty must be >= 0");
  std::size_t n = q.size();
  std::vector<LanguageTag> tags(n);
  if (gamma == 0.0) {
    for (std::size_t i = 0; i < n; ++i)
      tags[i] = q[i] > 0.5 ? pair.first : pair.second;
    return tags;
  }
  // States 0 = first tag, 1 = second tag.
  std::vector<std::array<double, 2>> score(n);
  std::vector<std::array<int, 2>> from(n);
  score[0] = {std::log(q[0]), std::log(1.0 - q[0])};
  for (std::size_t i = 1; i < n; ++i) {
    double emit[2] = {std::log(q[i]), std::log(1.0 - q[i])};
    for (int s = 0; s < 2; ++s) {
      double stay = score[i - 1][s];
      double sw = score[i - 1][1 - s] - gamma;
      from[i][s] = sw > stay ? 1 - s : s;
      score[i][s] = emit[s] + std::max(stay, sw);
    }
  }
  int s = score[n - 1][0] > score[n - 1][1] ? 0 : 1;
  for (std::size_t i = n; i-- > 0;) {
    tags[i] = s == 0 ? pair.first : pair.second;
    if (i) s = from[i][s];
  }
  return tags;
}

namespace detail {

// Component probabilities per word, with the utterance's preceding words as
// the history.  These are lambda-independent.
template <LanguageModel M1, LanguageModel M2>
std::vector<std::array<double, 2>> word_scores(const Utterance& u, const M1& first_lm,
                                               const M2& second_lm) {
  std::vector<std::array<double, 2>> scores;
  scores.reserve(u.words.size());
  std::vector<std::string> hist;
  hist.reserve(u.words.size());
  for (const TimedWord& w : u.words) {
    scores.push_back({first_lm.prob(w.surface, hist), second_lm.prob(w.surface, hist)});
    hist.push_back(w.surface);
  }
  return scores;
}

inline std::vector<double> posteriors_from_scores(std::span<const std::array<double, 2>> s,
                                                  double lambda) {
  std::vector<double> q(s.size());
  for (std::size_t i = 0; i < s.size(); ++i) {
    if (lambda <= 0.0)
      q[i] = 0.0;
    else if (lambda >= 1.0)
      q[i] = 1.0;
    else
      q[i] = lambda * s[i][0] / (lambda * s[i][0] + (1.0 - lambda) * s[i][1]);
  }
  return q;
}

}  // namespace detail

template <LanguageModel M1, LanguageModel M2>
TaggedHypothesis tag_utterance(const Utterance& u, const M1& first_lm, const M2& second_lm,
                               const TagPair& pair, double lambda, double gamma = 0.0) {
  if (u.words.empty())
    throw ValidationError("cannot tag empty utterance '" + u.id + "'");
  if (!(lambda >= 0.0 && lambda <= 1.0))
    throw ValidationError("prior weight must lie in [0, 1]");
  TaggedHypothesis hyp;
  hyp.utterance_id = u.id;
  hyp.lambda = lambda;
  hyp.posteriors =
      detail::posteriors_from_scores(detail::word_scores(u, first_lm, second_lm), lambda);
  hyp.tags = tags_from_posteriors(hyp.posteriors, pair, gamma);
  return hyp;
}

// One complete tagging of the corpus per grid point, in grid order.
template <LanguageModel M1, LanguageModel M2>
std::vector<SweepPoint> sweep(const Corpus& ref, const M1& first_lm, const M2& second_lm,
                              const SweepConfig& cfg) {
  cfg.validate();
  std::vector<std::vector<std::array<double, 2>>> scores;
  scores.reserve(ref.utterances.size());
  for (const Utterance& u : ref.utterances) {
    if (u.words.empty())
      throw ValidationError("cannot tag empty utterance '" + u.id + "'");
    scores.push_back(detail::word_scores(u, first_lm, second_lm));
  }
  std::vector<SweepPoint> out;
  out.reserve(cfg.lambdas.size());
  for (double lambda : cfg.lambdas) {
    SweepPoint point;
    point.lambda = lambda;
    point.hyps.reserve(ref.utterances.size());
    for (std::size_t i = 0; i < ref.utterances.size(); ++i) {
      TaggedHypothesis hyp;
      hyp.utterance_id = ref.utterances[i].id;
      hyp.lambda = lambda;
      hyp.posteriors = detail::posteriors_from_scores(scores[i], lambda);
      hyp.tags = tags_from_posteriors(hyp.posteriors, ref.tags, cfg.gamma);
      point.hyps.push_back(std::move(hyp));
    }
    out.push_back(std::move(point));
  }
  return out;
}

// Materializes a hypothesis corpus: reference words and timings, hypothesis
// tags.  Tagging never moves word boundaries.
inline Corpus apply_tags(const Corpus& ref, const std::vector<TaggedHypothesis>& hyps) {
  if (hyps.size() != ref.utterances.size())
    throw ValidationError("tagging covers " + std::to_string(hyps.size()) +
                          " utterances, reference has " +
                          std::to_string(ref.utterances.size()));
  Corpus out;
  out.tags = ref.tags;
  out.utterances.reserve(ref.utterances.size());
  for (std::size_t i = 0; i < ref.utterances.size(); ++i) {
    const Utterance& r = ref.utterances[i];
    const TaggedHypothesis& h = hyps[i];
    if (h.utterance_id != r.id)
      throw ValidationError("tagging for '" + h.utterance_id +
                            "' does not match reference utterance '" + r.id + "'");
    if (h.tags.size() != r.words.size())
      throw ValidationError("tag count mismatch for utterance '" + r.id + "'");
    Utterance u;
    u.id = r.id;
    u.words = r.words;
    for (std::size_t k = 0; k < u.words.size(); ++k) u.words[k].tag = h.tags[k];
    out.utterances.push_back(std::move(u));
  }
  return out;
}

}  // namespace csdet
