// csdet/corpus.hpp

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

// Time-aligned, language-tagged corpora.
//
// The exchange format is six-column CTM:
//
//   <utterance_id> <channel> <start_seconds> <duration_seconds> <word> <tag>
//
// Lines starting with ";;" are comments.  The channel column is accepted and
// ignored.  Words inside one utterance must not overlap in time; gaps between
// words are non-speech.  A companion line-oriented text format carries
// LM training data: one sentence per line, tokens optionally suffixed "|tag".

#pragma once

#include <algorithm>
#include <array>
#include <cstdint>
#include <istream>
#include <map>
#include <optional>
#include <ostream>
#include <set>
#include <string>
#include <string_view>
#include <vector>

#include "csdet/common.hpp"

namespace csdet {

// A language tag is 2-8 lowercase ASCII letters ("fy", "nl", ...).
struct LanguageTag {
  std::string code;

  static bool valid(std::string_view s) {
    if (s.size() < 2 || s.size() > 8) return false;
    for (char c : s)
      if (c < 'a' || c > 'z') return false;
    return true;
  }

  friend auto operator<=>(const LanguageTag&, const LanguageTag&) = default;
};

// The two languages a detection corpus distinguishes, in a fixed order; all
// "first"/"second" terminology downstream refers to this pair.
struct TagPair {
  LanguageTag first;
  LanguageTag second;

  TagPair() = default;
  TagPair(LanguageTag a, LanguageTag b) : first(std::move(a)), second(std::move(b)) {
    if (!LanguageTag::valid(first.code) || !LanguageTag::valid(second.code))
      throw ValidationError("invalid language tag in pair: '" + first.code + "', '" +
                            second.code + "'");
    if (first == second) throw ValidationError("tag pair must name two distinct tags");
  }

  bool contains(const LanguageTag& t) const { return t == first || t == second; }
  // 0 for the first tag, 1 for the second.
  int index_of(const LanguageTag& t) const {
    if (t == first) return 0;
    if (t == second) return 1;
    throw ValidationError("tag '" + t.code + "' is not in the declared pair");
  }

  friend auto operator<=>(const TagPair&, const TagPair&) = default;
};

struct TimedWord {
  std::string surface;
  Millis start_ms = 0;
  Millis duration_ms = 0;
  LanguageTag tag;

  Millis end_ms() const { return start_ms + duration_ms; }

  friend auto operator<=>(const TimedWord&, const TimedWord&) = default;
};

struct Utterance {
  std::string id;
  std::vector<TimedWord> words;  // sorted by start, non-overlapping

  Millis end_ms() const { return words.empty() ? 0 : words.back().end_ms(); }

  friend auto operator<=>(const Utterance&, const Utterance&) = default;
};

struct Corpus {
  std::vector<Utterance> utterances;  // in first-appearance order
  TagPair tags;

  friend bool operator==(const Corpus&, const Corpus&) = default;
};

enum class UtteranceClass { MonoFirst = 0, MonoSecond = 1, Mixed = 2 };

inline constexpr int class_index(UtteranceClass c) { return static_cast<int>(c); }

inline std::string class_label(UtteranceClass c, const TagPair& tags) {
  switch (c) {
    case UtteranceClass::MonoFirst: return tags.first.code;
    case UtteranceClass::MonoSecond: return tags.second.code;
    default: return tags.first.code + "-" + tags.second.code;
  }
}

inline void validate_utterance(const Utterance& u, const TagPair& tags) {
  if (u.id.empty()) throw ValidationError("utterance with empty id");
  for (std::size_t i = 0; i < u.words.size(); ++i) {
    const TimedWord& w = u.words[i];
    if (w.surface.empty())
      throw ValidationError("utterance " + u.id + ": empty word surface");
    if (w.start_ms < 0 || w.duration_ms <= 0)
      throw ValidationError("utterance " + u.id + ": word '" + w.surface +
                            "' must have start >= 0 and duration > 0");
    if (!tags.contains(w.tag))
      throw ValidationError("utterance " + u.id + ": tag '" + w.tag.code +
                            "' is not in the declared pair");
    if (i > 0 && u.words[i - 1].end_ms() > w.start_ms)
      throw ValidationError("utterance " + u.id + ": words '" + u.words[i - 1].surface +
                            "' and '" + w.surface + "' overlap in time");
  }
}

inline UtteranceClass classify_utterance(const Utterance& u, const TagPair& tags) {
  if (u.words.empty())
    throw ValidationError("utterance " + u.id + ": cannot classify an empty utterance");
  bool has_first = false, has_second = false;
  for (const TimedWord& w : u.words) {
    (tags.index_of(w.tag) == 0 ? has_first : has_second) = true;
  }
  if (has_first && has_second) return UtteranceClass::Mixed;
  return has_first ? UtteranceClass::MonoFirst : UtteranceClass::MonoSecond;
}

inline std::array<long long, 3> classify_counts(const Corpus& c) {
  std::array<long long, 3> out{0, 0, 0};
  for (const Utterance& u : c.utterances)
    ++out[class_index(classify_utterance(u, c.tags))];
  return out;
}

// Word totals per tag, partitioned by utterance class; by_class[class][tag].
struct WordCounts {
  std::array<std::array<long long, 2>, 3> by_class{};

  long long tag_total(int tag) const {
    long long s = 0;
    for (const auto& row : by_class) s += row[tag];
    return s;
  }
  long long grand_total() const { return tag_total(0) + tag_total(1); }
};

inline WordCounts word_counts(const Corpus& c) {
  WordCounts out;
  for (const Utterance& u : c.utterances) {
    int cls = class_index(classify_utterance(u, c.tags));
    for (const TimedWord& w : u.words) ++out.by_class[cls][c.tags.index_of(w.tag)];
  }
  return out;
}

// Parses six-column CTM.  When `declared` is given, any other tag is an
// error; otherwise the pair is inferred from the data in first-seen order
// (exactly two distinct tags required).  Words are grouped by utterance id,
// sorted by start time, and validated for overlap and duplicates.
inline Corpus parse_ctm(std::istream& in, std::optional<TagPair> declared = std::nullopt) {
  std::vector<Utterance> utts;
  std::map<std::string, std::size_t, std::less<>> index;
  std::set<std::string> seen_records;
  std::vector<LanguageTag> seen_tags;

  std::string line;
  std::size_t lineno = 0;
  auto fail = [&](const std::string& what) {
    throw ParseError("ctm line " + std::to_string(lineno) + ": " + what);
  };

  while (std::getline(in, line)) {
    ++lineno;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    std::string_view sv(line);
    if (sv.starts_with(";;")) continue;
    std::vector<std::string_view> f = split_fields(sv);
    if (f.empty()) continue;
    if (f.size() != 6)
      fail("expected 6 columns (utt channel start duration word tag), got " +
           std::to_string(f.size()));

    std::optional<Millis> start = parse_seconds_ms(f[2]);
    if (!start) fail("bad start time '" + std::string(f[2]) + "'");
    std::optional<Millis> dur = parse_seconds_ms(f[3]);
    if (!dur) fail("bad duration '" + std::string(f[3]) + "'");
    if (*dur <= 0) fail("duration must be positive, got '" + std::string(f[3]) + "'");
    if (!LanguageTag::valid(f[5])) fail("bad language tag '" + std::string(f[5]) + "'");
    LanguageTag tag{std::string(f[5])};
    if (declared) {
      if (!declared->contains(tag))
        fail("tag '" + tag.code + "' is not in the declared pair " +
             declared->first.code + "," + declared->second.code);
    } else if (std::find(seen_tags.begin(), seen_tags.end(), tag) == seen_tags.end()) {
      seen_tags.push_back(tag);
      if (seen_tags.size() > 2)
        fail("third distinct tag '" + tag.code + "'; detection corpora use exactly two");
    }

    std::string key = std::string(f[0]) + '\x1f' + std::to_string(*start) + '\x1f' +
                      std::string(f[4]);
    if (!seen_records.insert(key).second)
      fail("duplicate record for utterance '" + std::string(f[0]) + "', start " +
           std::string(f[2]) + ", word '" + std::string(f[4]) + "'");

    auto [it, fresh] = index.try_emplace(std::string(f[0]), utts.size());
    if (fresh) utts.push_back(Utterance{std::string(f[0]), {}});
    utts[it->second].words.push_back(
        TimedWord{std::string(f[4]), *start, *dur, std::move(tag)});
  }

  TagPair tags;
  if (declared) {
    tags = *declared;
  } else {
    if (seen_tags.size() != 2)
      throw ValidationError(
          "corpus uses " + std::to_string(seen_tags.size()) +
          " distinct tag(s); pass the tag pair explicitly for non-mixed data");
    tags = TagPair(seen_tags[0], seen_tags[1]);
  }

  for (Utterance& u : utts) {
    std::stable_sort(u.words.begin(), u.words.end(),
                     [](const TimedWord& a, const TimedWord& b) {
                       return a.start_ms < b.start_ms;
                     });
    validate_utterance(u, tags);
  }
  return Corpus{std::move(utts), tags};
}

inline void write_ctm(std::ostream& out, const Corpus& c) {
  for (const Utterance& u : c.utterances)
    for (const TimedWord& w : u.words)
      out << u.id << " 1 " << format_seconds(w.start_ms) << ' '
          << format_seconds(w.duration_ms) << ' ' << w.surface << ' ' << w.tag.code
          << '\n';
}

inline std::string ctm_to_string(const Corpus& c) {
  std::ostringstream out;
  write_ctm(out, c);
  return out.str();
}

// ---------------------------------------------------------------------------
// Tagged / plain text corpora for LM training.

struct TaggedToken {
  std::string surface;
  std::optional<LanguageTag> tag;

  friend auto operator<=>(const TaggedToken&, const TaggedToken&) = default;
};

using TaggedSentence = std::vector<TaggedToken>;

// "wêze|fy" -> {"wêze", fy}.  The split is at the last '|' whose suffix is a
// valid tag; with require_tags every token must carry one.
inline std::vector<TaggedSentence> parse_tagged_text(std::istream& in, bool require_tags) {
  std::vector<TaggedSentence> out;
  std::string line;
  std::size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    std::vector<std::string_view> toks = split_fields(line);
    if (toks.empty()) continue;
    TaggedSentence sent;
    for (std::string_view t : toks) {
      std::size_t bar = t.rfind('|');
      if (bar != std::string_view::npos && bar > 0 && LanguageTag::valid(t.substr(bar + 1))) {
        sent.push_back(TaggedToken{std::string(t.substr(0, bar)),
                                   LanguageTag{std::string(t.substr(bar + 1))}});
      } else if (require_tags) {
        throw ParseError("text line " + std::to_string(lineno) + ": token '" +
                         std::string(t) + "' has no |tag suffix");
      } else {
        sent.push_back(TaggedToken{std::string(t), std::nullopt});
      }
    }
    out.push_back(std::move(sent));
  }
  return out;
}

inline std::vector<std::vector<std::string>> parse_text(std::istream& in) {
  std::vector<std::vector<std::string>> out;
  std::string line;
  while (std::getline(in, line)) {
    if (!line.empty() && line.back() == '\r') line.pop_back();
    std::vector<std::string_view> toks = split_fields(line);
    if (toks.empty()) continue;
    std::vector<std::string> sent;
    sent.reserve(toks.size());
    for (std::string_view t : toks) sent.emplace_back(t);
    out.push_back(std::move(sent));
  }
  return out;
}

inline std::string join_tagged(const TaggedToken& t) {
  return t.tag ? t.surface + "|" + t.tag->code : t.surface;
}

// Token streams for LM training: either the bare surfaces or "w|tag" joints.
inline std::vector<std::vector<std::string>> to_token_sentences(
    const std::vector<TaggedSentence>& sents, bool keep_tags) {
  std::vector<std::vector<std::string>> out;
  out.reserve(sents.size());
  for (const TaggedSentence& s : sents) {
    std::vector<std::string> toks;
    toks.reserve(s.size());
    for (const TaggedToken& t : s) toks.push_back(keep_tags ? join_tagged(t) : t.surface);
    out.push_back(std::move(toks));
  }
  return out;
}

}  // namespace csdet
