// csdet/analysis.hpp

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

// Diagnostic analyses over tagged transcripts.
//
// Word error rates come from a minimum-edit alignment with unit costs and a
// deterministic backtrace (match preferred over substitution over deletion
// over insertion), computed either on (word, tag) pairs or on words alone;
// the gap between the two modes is exactly the mass of tag-only confusions.
// Switch counts, monolingual-segment duration histograms, and ranked
// word-tag confusion tables support the same diagnosis from different
// angles: how often and for how long the tag stream changes language, and
// which surface forms drive the errors.

#pragma once

#include <algorithm>
#include <array>
#include <cstdio>
#include <map>
#include <optional>
#include <ostream>
#include <span>
#include <string>
#include <vector>

#include "csdet/common.hpp"
#include "csdet/corpus.hpp"

namespace csdet {

enum class OpKind : unsigned char { Match, Substitution, Deletion, Insertion };

struct Token {
  std::string word;
  LanguageTag tag;

  friend auto operator<=>(const Token&, const Token&) = default;
};

struct AlignmentOp {
  OpKind kind = OpKind::Match;
  std::optional<Token> ref;  // present for match, substitution, deletion
  std::optional<Token> hyp;  // present for match, substitution, insertion
};

enum class TokenEq { WithTags, WordsOnly };

inline bool tokens_equal(const Token& a, const Token& b, TokenEq mode) {
  return a.word == b.word && (mode == TokenEq::WordsOnly || a.tag == b.tag);
}

inline std::vector<Token> utterance_tokens(const Utterance& u) {
  std::vector<Token> toks;
  toks.reserve(u.words.size());
  for (const TimedWord& w : u.words) toks.push_back(Token{w.surface, w.tag});
  return toks;
}

// Minimum-edit alignment, unit costs.  When several paths are optimal the
// backtrace prefers match, then substitution, then deletion, then insertion
// at each step from the end, so the op sequence is a pure function of the
// inputs.
inline std::vector<AlignmentOp> align(std::span<const Token> ref,
                                      std::span<const Token> hyp, TokenEq mode) {
  std::size_t n = ref.size(), m = hyp.size();
  std::vector<std::vector<int>> cost(n + 1, std::vector<int>(m + 1));
  for (std::size_t i = 0; i <= n; ++i) cost[i][0] = static_cast<int>(i);
  for (std::size_t j = 0; j <= m; ++j) cost[0][j] = static_cast<int>(j);
  for (std::size_t i = 1; i <= n; ++i)
    for (std::size_t j = 1; j <= m; ++j) {
      int diag = cost[i - 1][j - 1] + (tokens_equal(ref[i - 1], hyp[j - 1], mode) ? 0 : 1);
      cost[i][j] = std::min({diag, cost[i - 1][j] + 1, cost[i][j - 1] + 1});
    }

  std::vector<AlignmentOp> ops;
  ops.reserve(n + m);
  std::size_t i = n, j = m;
  while (i > 0 || j > 0) {
    if (i > 0 && j > 0 && tokens_equal(ref[i - 1], hyp[j - 1], mode) &&
        cost[i][j] == cost[i - 1][j - 1]) {
      ops.push_back(AlignmentOp{OpKind::Match, ref[i - 1], hyp[j - 1]});
      --i, --j;
    } else if (i > 0 && j > 0 && cost[i][j] == cost[i - 1][j - 1] + 1 &&
               !tokens_equal(ref[i - 1], hyp[j - 1], mode)) {
      ops.push_back(AlignmentOp{OpKind::Substitution, ref[i - 1], hyp[j - 1]});
      --i, --j;
    } else if (i > 0 && cost[i][j] == cost[i - 1][j] + 1) {
      ops.push_back(AlignmentOp{OpKind::Deletion, ref[i - 1], std::nullopt});
      --i;
    } else {
      ops.push_back(AlignmentOp{OpKind::Insertion, std::nullopt, hyp[j - 1]});
      --j;
    }
  }
  std::reverse(ops.begin(), ops.end());
  return ops;
}

inline int edit_distance(std::span<const Token> ref, std::span<const Token> hyp,
                         TokenEq mode) {
  int d = 0;
  for (const AlignmentOp& op : align(ref, hyp, mode)) d += op.kind != OpKind::Match;
  return d;
}

struct ErrorCounts {
  long long subs = 0;
  long long dels = 0;
  long long ins = 0;
  long long ref_tokens = 0;

  double wer() const {
    return ref_tokens ? static_cast<double>(subs + dels + ins) / ref_tokens : 0.0;
  }
  ErrorCounts& operator+=(const ErrorCounts& o) {
    subs += o.subs;
    dels += o.dels;
    ins += o.ins;
    ref_tokens += o.ref_tokens;
    return *this;
  }
};

struct WerReport {
  std::array<ErrorCounts, 3> by_class;  // indexed by UtteranceClass of the reference
  ErrorCounts overall;
};

inline ErrorCounts count_ops(std::span<const AlignmentOp> ops) {
  ErrorCounts ec;
  for (const AlignmentOp& op : ops) {
    switch (op.kind) {
      case OpKind::Match: ++ec.ref_tokens; break;
      case OpKind::Substitution: ++ec.subs, ++ec.ref_tokens; break;
      case OpKind::Deletion: ++ec.dels, ++ec.ref_tokens; break;
      case OpKind::Insertion: ++ec.ins; break;
    }
  }
  return ec;
}

inline WerReport wer(const Corpus& ref, const Corpus& hyp, TokenEq mode) {
  if (ref.utterances.size() != hyp.utterances.size())
    throw ValidationError("reference has " + std::to_string(ref.utterances.size()) +
                          " utterances, hypothesis " +
                          std::to_string(hyp.utterances.size()));
  WerReport rep;
  for (std::size_t k = 0; k < ref.utterances.size(); ++k) {
    const Utterance& r = ref.utterances[k];
    const Utterance& h = hyp.utterances[k];
    if (r.id != h.id)
      throw ValidationError("utterance id mismatch: '" + r.id + "' vs '" + h.id + "'");
    ErrorCounts ec =
        count_ops(align(utterance_tokens(r), utterance_tokens(h), mode));
    rep.by_class[class_index(classify_utterance(r, ref.tags))] += ec;
    rep.overall += ec;
  }
  return rep;
}

struct SwitchStats {
  long long total = 0;
  std::vector<std::pair<std::string, long long>> per_utterance;  // (id, switches)
};

inline long long count_switches(const Utterance& u) {
  long long n = 0;
  for (std::size_t i = 1; i < u.words.size(); ++i)
    n += u.words[i].tag != u.words[i - 1].tag;
  return n;
}

// Adjacent-word tag changes, counted within utterances only.
inline SwitchStats switch_stats(const Corpus& c) {
  SwitchStats st;
  st.per_utterance.reserve(c.utterances.size());
  for (const Utterance& u : c.utterances) {
    long long n = count_switches(u);
    st.per_utterance.emplace_back(u.id, n);
    st.total += n;
  }
  return st;
}

struct Segment {
  LanguageTag tag;
  Millis start_ms = 0;
  Millis end_ms = 0;  // last word's end; interior silence is part of the segment

  Millis duration_ms() const { return end_ms - start_ms; }
};

// Maximal runs of consecutive same-tag words within one utterance.
inline std::vector<Segment> monolingual_segments(const Utterance& u) {
  std::vector<Segment> segs;
  for (const TimedWord& w : u.words) {
    if (segs.empty() || !(segs.back().tag == w.tag))
      segs.push_back(Segment{w.tag, w.start_ms, w.end_ms()});
    else
      segs.back().end_ms = w.end_ms();
  }
  return segs;
}

struct DurationHistogram {
  std::vector<Millis> edges_ms;     // ascending from 0; a final open bin is implied
  std::vector<long long> counts;    // counts.size() == edges_ms.size()
  long long total_segments = 0;

  std::size_t bin_of(Millis d) const {
    std::size_t b = 0;
    while (b + 1 < edges_ms.size() && d >= edges_ms[b + 1]) ++b;
    return b;
  }
};

// Seconds 0..10 in unit steps, then 15, 20, 30, with the open tail above 30.
inline std::vector<Millis> default_histogram_edges() {
  std::vector<Millis> e;
  for (int s = 0; s <= 10; ++s) e.push_back(1000 * s);
  e.push_back(15000);
  e.push_back(20000);
  e.push_back(30000);
  return e;
}

inline DurationHistogram duration_histogram(const Corpus& c,
                                            std::span<const Millis> edges_ms) {
  if (edges_ms.size() < 1 || edges_ms[0] != 0)
    throw ValidationError("histogram edges must start at 0");
  for (std::size_t i = 1; i < edges_ms.size(); ++i)
    if (edges_ms[i] <= edges_ms[i - 1])
      throw ValidationError("histogram edges must be strictly increasing");
  DurationHistogram h;
  h.edges_ms.assign(edges_ms.begin(), edges_ms.end());
  h.counts.assign(edges_ms.size(), 0);
  for (const Utterance& u : c.utterances)
    for (const Segment& s : monolingual_segments(u)) {
      ++h.counts[h.bin_of(s.duration_ms())];
      ++h.total_segments;
    }
  return h;
}

inline DurationHistogram duration_histogram(const Corpus& c) {
  std::vector<Millis> e = default_histogram_edges();
  return duration_histogram(c, e);
}

struct ConfusionEntry {
  std::string ref_word;
  LanguageTag ref_tag;
  std::string hyp_word;
  LanguageTag hyp_tag;
  long long count = 0;
};

// (word, tag) substitution pairs ranked by count, ties in lexicographic key
// order.  top_k = 0 keeps the whole table.
inline std::vector<ConfusionEntry> confusions(
    std::span<const std::vector<AlignmentOp>> alignments, std::size_t top_k = 0) {
  std::map<std::tuple<std::string, std::string, std::string, std::string>, long long> tally;
  for (const auto& ops : alignments)
    for (const AlignmentOp& op : ops)
      if (op.kind == OpKind::Substitution)
        ++tally[{op.ref->word, op.ref->tag.code, op.hyp->word, op.hyp->tag.code}];
  std::vector<ConfusionEntry> entries;
  entries.reserve(tally.size());
  for (const auto& [key, n] : tally)
    entries.push_back(ConfusionEntry{std::get<0>(key), LanguageTag{std::get<1>(key)},
                                     std::get<2>(key), LanguageTag{std::get<3>(key)}, n});
  std::stable_sort(entries.begin(), entries.end(),
                   [](const ConfusionEntry& a, const ConfusionEntry& b) {
                     return a.count > b.count;
                   });
  if (top_k > 0 && entries.size() > top_k) entries.resize(top_k);
  return entries;
}

inline std::string confusion_label(const std::string& word, const LanguageTag& tag) {
  return word + "-" + tag.code;
}

// ---------------------------------------------------------------------------
// Report writers.

namespace detail {

inline std::string wer_pct(double wer) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.2f", 100.0 * wer);
  return buf;
}

}  // namespace detail

inline void write_wer_tsv(std::ostream& out, const TagPair& tags,
                          const WerReport& with_tags, const WerReport& words_only) {
  out << "class\tmode\tsubs\tdels\tins\tref_tokens\twer_pct\n";
  auto rows = [&](const char* mode, const WerReport& rep) {
    for (int c = 0; c < 3; ++c) {
      const ErrorCounts& ec = rep.by_class[c];
      out << class_label(static_cast<UtteranceClass>(c), tags) << '\t' << mode << '\t'
          << ec.subs << '\t' << ec.dels << '\t' << ec.ins << '\t' << ec.ref_tokens << '\t'
          << detail::wer_pct(ec.wer()) << '\n';
    }
    out << "all\t" << mode << '\t' << rep.overall.subs << '\t' << rep.overall.dels << '\t'
        << rep.overall.ins << '\t' << rep.overall.ref_tokens << '\t'
        << detail::wer_pct(rep.overall.wer()) << '\n';
  };
  rows("with_tags", with_tags);
  rows("words_only", words_only);
}

inline void write_switches_tsv(std::ostream& out, const SwitchStats& ref,
                               const SwitchStats& hyp) {
  if (ref.per_utterance.size() != hyp.per_utterance.size())
    throw ValidationError("switch tables cover different utterance sets");
  out << "utterance\tref_switches\thyp_switches\n";
  for (std::size_t i = 0; i < ref.per_utterance.size(); ++i) {
    if (ref.per_utterance[i].first != hyp.per_utterance[i].first)
      throw ValidationError("switch tables cover different utterance sets");
    out << ref.per_utterance[i].first << '\t' << ref.per_utterance[i].second << '\t'
        << hyp.per_utterance[i].second << '\n';
  }
  out << "total\t" << ref.total << '\t' << hyp.total << '\n';
}

inline void write_durations_tsv(std::ostream& out, const DurationHistogram& ref,
                                const DurationHistogram& hyp) {
  if (ref.edges_ms != hyp.edges_ms)
    throw ValidationError("duration histograms use different bin edges");
  out << "bin_lo_s\tbin_hi_s\tref_count\thyp_count\n";
  for (std::size_t b = 0; b < ref.counts.size(); ++b) {
    out << format_seconds(ref.edges_ms[b]) << '\t';
    if (b + 1 < ref.edges_ms.size())
      out << format_seconds(ref.edges_ms[b + 1]);
    else
      out << "inf";
    out << '\t' << ref.counts[b] << '\t' << hyp.counts[b] << '\n';
  }
}

inline void write_confusions_tsv(std::ostream& out,
                                 std::span<const ConfusionEntry> entries) {
  out << "ref_word\tref_tag\thyp_word\thyp_tag\tcount\n";
  for (const ConfusionEntry& e : entries)
    out << e.ref_word << '\t' << e.ref_tag.code << '\t' << e.hyp_word << '\t'
        << e.hyp_tag.code << '\t' << e.count << '\n';
}

}  // namespace csdet
