// csdet/lm.hpp

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

// Interpolated Kneser-Ney n-gram language models.
//
// Training counts raw n-grams over <s> w1 ... wm </s> at the highest order
// and continuation counts (number of distinct left extensions) below it;
// k-grams starting with <s> keep their raw counts since nothing can ever
// precede them.  Each order k interpolates with the next lower one,
//
//   P_k(w|h) = max(c_k(hw) - D_k, 0) / S(h)  +  D_k N1+(h.) / S(h) * P_{k-1}(w|h'),
//
// where S(h) sums the counts of h's continuations and N1+(h.) is their type
// count.  The recursion bottoms out in a unigram distribution interpolated
// with the uniform distribution over the query vocabulary (all training
// types plus </s> and <unk>; <s> is context-only).  <unk> is a real event:
// it keeps at least a 1e-6 share of the unigram mass, with the rest rescaled.
//
// Models are stored in backoff form (probabilities for seen n-grams plus a
// backoff weight per seen context), which evaluates to exactly the same
// distribution and serializes to the standard text exchange format for
// backoff models.

#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <istream>
#include <map>
#include <optional>
#include <ostream>
#include <random>
#include <span>
#include <string>
#include <string_view>
#include <unordered_map>
#include <unordered_set>
#include <vector>

#include "csdet/common.hpp"

namespace csdet {

inline constexpr const char* kSentBegin = "<s>";
inline constexpr const char* kSentEnd = "</s>";
inline constexpr const char* kUnknown = "<unk>";
inline constexpr double kUnkFloor = 1e-6;
inline constexpr char kGramSep = '\x1f';  // joins tokens into table keys

namespace detail {

inline std::string join_gram(std::span<const std::string> toks) {
  std::string key;
  for (std::size_t i = 0; i < toks.size(); ++i) {
    if (i) key += kGramSep;
    key += toks[i];
  }
  return key;
}

inline std::string extend_gram(std::string_view hist_key, std::string_view word) {
  std::string key;
  key.reserve(hist_key.size() + word.size() + 1);
  if (!hist_key.empty()) {
    key += hist_key;
    key += kGramSep;
  }
  key += word;
  return key;
}

inline std::vector<std::string> split_gram(std::string_view key) {
  std::vector<std::string> out;
  std::size_t start = 0;
  while (true) {
    std::size_t sep = key.find(kGramSep, start);
    if (sep == std::string_view::npos) {
      out.emplace_back(key.substr(start));
      return out;
    }
    out.emplace_back(key.substr(start, sep - start));
    start = sep + 1;
  }
}

}  // namespace detail

struct Perplexity {
  double value = 0.0;
  long long tokens = 0;
};

class NGramModel {
 public:
  int order = 0;
  // Discount per order as used at training time; empty for models loaded
  // from a serialized file (the format does not carry them).
  std::vector<double> discounts;

  const std::vector<std::string>& query_vocab() const { return vocab_; }

  bool has_event(std::string_view token) const {
    return events_.find(std::string(token)) != events_.end();
  }

  // P(word | history); OOV words map to <unk>, histories are truncated to the
  // model order and OOV history tokens map to <unk> as well (<s> is kept).
  double prob(std::string_view word, std::span<const std::string> history) const {
    std::string ev = map_event(word);
    std::size_t keep = std::min<std::size_t>(history.size(), order > 0 ? order - 1 : 0);
    std::vector<std::string> h;
    h.reserve(keep);
    for (std::size_t i = history.size() - keep; i < history.size(); ++i)
      h.push_back(map_context(history[i]));
    double factor = 1.0;
    while (true) {
      std::size_t k = h.size();
      auto it = prob_[k].find(detail::extend_gram(detail::join_gram(h), ev));
      if (it != prob_[k].end()) return factor * it->second;
      if (k == 0) return 0.0;  // only possible for models lacking <unk>
      auto bit = bow_[k - 1].find(detail::join_gram(h));
      if (bit != bow_[k - 1].end()) factor *= bit->second;
      h.erase(h.begin());
    }
  }

  double logprob(std::string_view word, std::span<const std::string> history) const {
    return std::log(prob(word, history));
  }

 private:
  std::vector<std::string> vocab_;  // sorted query vocabulary (no <s>)
  std::unordered_set<std::string> events_;
  // prob_[k]: (k+1)-gram -> probability; bow_[k]: (k+1)-token context -> weight
  std::vector<std::unordered_map<std::string, double>> prob_;
  std::vector<std::unordered_map<std::string, double>> bow_;

  std::string map_event(std::string_view w) const {
    std::string t(w);
    return events_.find(t) != events_.end() ? t : std::string(kUnknown);
  }

  std::string map_context(const std::string& t) const {
    if (t == kSentBegin || events_.find(t) != events_.end()) return t;
    return kUnknown;
  }

  friend NGramModel train_kn(const std::vector<std::vector<std::string>>&, int,
                             std::vector<double>);
  friend void write_arpa(std::ostream&, const NGramModel&);
  friend NGramModel read_arpa(std::istream&);
};

// Trains an interpolated Kneser-Ney model of the given order.  Discounts:
// empty = estimate D_k = n1/(n1 + 2 n2) from the count-of-counts at each
// order (0.75 when n1 or n2 is zero); one value = applied to all orders;
// otherwise one value per order, each in [0, 1).
inline NGramModel train_kn(const std::vector<std::vector<std::string>>& corpus, int order,
                           std::vector<double> fixed_discounts = {}) {
  if (corpus.empty()) throw ValidationError("cannot train on an empty corpus");
  if (order < 1 || order > 9)
    throw ValidationError("model order must be in [1, 9], got " + std::to_string(order));

  std::vector<std::unordered_map<std::string, long long>> raw(order);
  std::vector<std::string> tokens;
  {
    std::unordered_set<std::string> seen;
    for (const auto& sent : corpus) {
      std::vector<std::string> seq;
      seq.reserve(sent.size() + 2);
      seq.emplace_back(kSentBegin);
      for (const auto& t : sent) {
        if (t.empty() || t == kSentBegin || t == kSentEnd || t == kUnknown ||
            t.find(kGramSep) != std::string::npos ||
            t.find_first_of(" \t\r\n") != std::string::npos)
          throw ValidationError("invalid training token: '" + t + "'");
        if (seen.insert(t).second) tokens.push_back(t);
        seq.push_back(t);
      }
      seq.emplace_back(kSentEnd);
      for (int k = 1; k <= order; ++k)
        for (std::size_t i = 0; i + k <= seq.size(); ++i)
          ++raw[k - 1][detail::join_gram(std::span(seq).subspan(i, k))];
    }
  }

  // Counts each order actually uses: raw at the top, continuation below,
  // except <s>-initial grams which keep raw counts.
  std::vector<std::unordered_map<std::string, long long>> used(order);
  used[order - 1] = raw[order - 1];
  for (int k = 1; k < order; ++k) {
    std::unordered_map<std::string, long long> cont;
    for (const auto& [g, c] : raw[k])
      ++cont[g.substr(g.find(kGramSep) + 1)];
    for (const auto& [g, c] : raw[k - 1]) {
      bool bos_initial = g == kSentBegin || g.rfind(std::string(kSentBegin) + kGramSep, 0) == 0;
      long long u = bos_initial ? c : cont[g];
      if (u > 0) used[k - 1][g] = u;
    }
  }
  used[0].erase(kSentBegin);  // never a predicted event

  NGramModel m;
  m.order = order;
  if (!fixed_discounts.empty()) {
    if (fixed_discounts.size() == 1)
      m.discounts.assign(order, fixed_discounts[0]);
    else if (fixed_discounts.size() == static_cast<std::size_t>(order))
      m.discounts = fixed_discounts;
    else
      throw ValidationError("need 1 or " + std::to_string(order) +
                            " discount values, got " +
                            std::to_string(fixed_discounts.size()));
    for (double d : m.discounts)
      if (!(d >= 0.0 && d < 1.0))
        throw ValidationError("discounts must lie in [0, 1)");
  } else {
    for (int k = 1; k <= order; ++k) {
      long long n1 = 0, n2 = 0;
      for (const auto& [g, c] : used[k - 1]) {
        if (c == 1) ++n1;
        if (c == 2) ++n2;
      }
      m.discounts.push_back((n1 > 0 && n2 > 0)
                                ? static_cast<double>(n1) / (n1 + 2.0 * n2)
                                : 0.75);
    }
  }

  m.vocab_ = tokens;
  m.vocab_.emplace_back(kSentEnd);
  m.vocab_.emplace_back(kUnknown);
  std::sort(m.vocab_.begin(), m.vocab_.end());
  m.events_.insert(m.vocab_.begin(), m.vocab_.end());
  m.prob_.resize(order);
  m.bow_.resize(order > 1 ? order - 1 : 0);

  // Unigram distribution, interpolated with uniform, with the <unk> floor.
  {
    long long s1 = 0;
    for (const auto& [g, c] : used[0]) s1 += c;
    long long t1 = static_cast<long long>(used[0].size());
    double base = 1.0 / m.vocab_.size();
    double d = m.discounts[0];
    for (const auto& w : m.vocab_) {
      auto it = used[0].find(w);
      double c = it == used[0].end() ? 0.0 : static_cast<double>(it->second);
      m.prob_[0][w] = std::max(c - d, 0.0) / s1 + d * t1 / s1 * base;
    }
    double pu = m.prob_[0][kUnknown];
    if (pu < kUnkFloor) {
      double scale = (1.0 - kUnkFloor) / (1.0 - pu);
      for (auto& [w, p] : m.prob_[0])
        if (w != kUnknown) p *= scale;
      m.prob_[0][kUnknown] = kUnkFloor;
    }
  }

  for (int k = 2; k <= order; ++k) {
    struct HistAgg {
      long long sum = 0;
      long long types = 0;
    };
    std::unordered_map<std::string, HistAgg> hists;
    for (const auto& [g, c] : used[k - 1]) {
      std::string hist = g.substr(0, g.rfind(kGramSep));
      HistAgg& agg = hists[hist];
      agg.sum += c;
      ++agg.types;
    }
    double d = m.discounts[k - 1];
    for (const auto& [hist, agg] : hists)
      m.bow_[k - 2][hist] = d * agg.types / agg.sum;
    for (const auto& [g, c] : used[k - 1]) {
      std::size_t cut = g.rfind(kGramSep);
      std::string hist = g.substr(0, cut);
      std::string w = g.substr(cut + 1);
      std::vector<std::string> shorter = detail::split_gram(hist);
      shorter.erase(shorter.begin());
      double plower = m.prob(w, shorter);
      const HistAgg& agg = hists[hist];
      m.prob_[k - 1][g] = std::max(static_cast<double>(c) - d, 0.0) / agg.sum +
                          d * agg.types / agg.sum * plower;
    }
  }
  return m;
}

// ---------------------------------------------------------------------------
// Model concept: anything exposing prob() over a query vocabulary.  The
// sampler and perplexity work for n-gram models, interpolations of them, or
// an external generator wrapped in the same shape.

template <class M>
concept LanguageModel = requires(const M& m, std::string_view w,
                                 std::span<const std::string> h) {
  { m.prob(w, h) } -> std::convertible_to<double>;
  { m.query_vocab() } -> std::convertible_to<const std::vector<std::string>&>;
};

// Perplexity exp(-1/N sum ln P); every sentence contributes its </s> and the
// initial <s> is context only.
template <LanguageModel M>
Perplexity perplexity(const M& m, const std::vector<std::vector<std::string>>& text) {
  if (text.empty()) throw ValidationError("perplexity needs a non-empty text");
  double logsum = 0.0;
  long long n = 0;
  for (const auto& sent : text) {
    std::vector<std::string> hist;
    hist.reserve(sent.size() + 1);
    hist.emplace_back(kSentBegin);
    for (std::size_t i = 0; i <= sent.size(); ++i) {
      const std::string& w = i < sent.size() ? sent[i] : kSentEnd;
      logsum += std::log(m.prob(w, hist));
      ++n;
      if (i < sent.size()) hist.push_back(sent[i]);
    }
  }
  return Perplexity{std::exp(-logsum / static_cast<double>(n)), n};
}

// Ancestral sampling starting from <s>; <unk> is excluded from the support
// and the remaining mass renormalized.  Deterministic for a given generator
// state (the uniform draw is derived from raw bits, not a distribution
// adapter, so results do not depend on the standard library).
template <LanguageModel M>
std::vector<std::string> sample_sentence(const M& m, std::size_t max_len,
                                         std::mt19937_64& rng) {
  const std::vector<std::string>& vocab = m.query_vocab();
  std::vector<std::string> hist{kSentBegin};
  std::vector<std::string> out;
  std::vector<double> weight(vocab.size());
  while (out.size() < max_len) {
    double total = 0.0;
    for (std::size_t i = 0; i < vocab.size(); ++i) {
      weight[i] = vocab[i] == kUnknown ? 0.0 : m.prob(vocab[i], hist);
      total += weight[i];
    }
    if (!(total > 0.0))
      throw ValidationError("sampling support is empty for the current history");
    double u = static_cast<double>(rng() >> 11) * 0x1.0p-53;
    double target = u * total;
    double cum = 0.0;
    std::size_t pick = vocab.size() - 1;
    for (std::size_t i = 0; i < vocab.size(); ++i) {
      cum += weight[i];
      if (weight[i] > 0.0 && cum > target) {
        pick = i;
        break;
      }
    }
    if (vocab[pick] == kSentEnd) break;
    out.push_back(vocab[pick]);
    hist.push_back(vocab[pick]);
  }
  return out;
}

template <LanguageModel M>
std::vector<std::string> sample_sentence(const M& m, std::size_t max_len,
                                         std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  return sample_sentence(m, max_len, rng);
}

// ---------------------------------------------------------------------------
// Convex combination of two component models over the merged vocabulary.
//
// A token outside one component's vocabulary takes that component's <unk>
// mass split evenly across the out-of-component tokens plus one residual
// unknown event; this keeps every conditional of the interpolated model
// summing to one over the merged vocabulary.  Histories are mapped per
// component inside the component lookup itself.

class InterpolatedModel {
 public:
  InterpolatedModel(const NGramModel& first, const NGramModel& second, double lambda)
      : first_(&first), second_(&second), lambda_(lambda) {
    if (!(lambda >= 0.0 && lambda <= 1.0))
      throw ValidationError("interpolation weight must lie in [0, 1]");
    vocab_ = first.query_vocab();
    vocab_.insert(vocab_.end(), second.query_vocab().begin(), second.query_vocab().end());
    std::sort(vocab_.begin(), vocab_.end());
    vocab_.erase(std::unique(vocab_.begin(), vocab_.end()), vocab_.end());
    for (const auto& w : vocab_) {
      if (w == kUnknown) continue;
      if (!first.has_event(w)) ++extra_first_;
      if (!second.has_event(w)) ++extra_second_;
    }
  }

  double lambda() const { return lambda_; }
  const NGramModel& first() const { return *first_; }
  const NGramModel& second() const { return *second_; }
  const std::vector<std::string>& query_vocab() const { return vocab_; }

  double prob(std::string_view w, std::span<const std::string> history) const {
    return lambda_ * component_prob(*first_, extra_first_, w, history) +
           (1.0 - lambda_) * component_prob(*second_, extra_second_, w, history);
  }

  double logprob(std::string_view w, std::span<const std::string> history) const {
    return std::log(prob(w, history));
  }

 private:
  static double component_prob(const NGramModel& m, long long extra, std::string_view w,
                               std::span<const std::string> history) {
    if (w != kUnknown && m.has_event(w)) return m.prob(w, history);
    return m.prob(kUnknown, history) / static_cast<double>(extra + 1);
  }

  const NGramModel* first_;
  const NGramModel* second_;
  double lambda_;
  std::vector<std::string> vocab_;
  long long extra_first_ = 0;
  long long extra_second_ = 0;
};

// ---------------------------------------------------------------------------
// Serialization: the standard text exchange format for backoff models.
// Probabilities and backoff weights are written as log10 values with enough
// digits to round-trip; <s> carries the conventional -99 placeholder.

namespace detail {

inline std::string log10_field(double value) {
  double lg = value > 0.0 ? std::log10(value) : -99.0;
  if (lg < -99.0) lg = -99.0;
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", lg);
  return buf;
}

}  // namespace detail

inline void write_arpa(std::ostream& out, const NGramModel& m) {
  std::vector<std::vector<std::string>> keys(m.order);
  keys[0] = m.vocab_;
  keys[0].emplace_back(kSentBegin);
  std::sort(keys[0].begin(), keys[0].end());
  for (int k = 2; k <= m.order; ++k) {
    keys[k - 1].reserve(m.prob_[k - 1].size());
    for (const auto& [g, p] : m.prob_[k - 1]) keys[k - 1].push_back(g);
    std::sort(keys[k - 1].begin(), keys[k - 1].end());
  }

  out << "\\data\\\n";
  for (int k = 1; k <= m.order; ++k)
    out << "ngram " << k << '=' << keys[k - 1].size() << '\n';
  for (int k = 1; k <= m.order; ++k) {
    out << "\n\\" << k << "-grams:\n";
    for (const std::string& g : keys[k - 1]) {
      std::string rendered = g;
      std::replace(rendered.begin(), rendered.end(), kGramSep, ' ');
      if (k == 1 && g == kSentBegin)
        out << "-99\t" << rendered;
      else
        out << detail::log10_field(m.prob_[k - 1].at(g)) << '\t' << rendered;
      if (k < m.order) {
        auto it = m.bow_[k - 1].find(g);
        if (it != m.bow_[k - 1].end()) out << '\t' << detail::log10_field(it->second);
      }
      out << '\n';
    }
  }
  out << "\n\\end\\\n";
}

inline NGramModel read_arpa(std::istream& in) {
  std::string line;
  std::size_t lineno = 0;
  auto next_content = [&]() -> std::optional<std::string> {
    while (std::getline(in, line)) {
      ++lineno;
      if (!line.empty() && line.back() == '\r') line.pop_back();
      if (!split_fields(line).empty()) return line;
    }
    return std::nullopt;
  };
  auto fail = [&](const std::string& what) {
    throw ParseError("model file line " + std::to_string(lineno) + ": " + what);
  };

  auto head = next_content();
  if (!head || *head != "\\data\\") fail("expected \\data\\ header");

  std::vector<long long> declared;
  while (true) {
    auto l = next_content();
    if (!l) fail("unexpected end of file in \\data\\ section");
    if (l->rfind("ngram ", 0) != 0) {
      line = *l;
      break;
    }
    std::size_t eq = l->find('=');
    if (eq == std::string::npos) fail("malformed ngram count line");
    declared.push_back(std::stoll(l->substr(eq + 1)));
  }
  if (declared.empty()) fail("no ngram counts declared");

  NGramModel m;
  m.order = static_cast<int>(declared.size());
  m.prob_.resize(m.order);
  m.bow_.resize(m.order > 1 ? m.order - 1 : 0);

  for (int k = 1; k <= m.order; ++k) {
    std::string expect = "\\" + std::to_string(k) + "-grams:";
    if (line != expect) fail("expected section " + expect);
    long long rows = 0;
    while (true) {
      auto l = next_content();
      if (!l) fail("unexpected end of file in " + expect);
      if (l->front() == '\\') {
        line = *l;
        break;
      }
      std::vector<std::string_view> f = split_fields(*l);
      if (f.size() < static_cast<std::size_t>(k) + 1 ||
          f.size() > static_cast<std::size_t>(k) + 2)
        fail("expected " + std::to_string(k) + " tokens with a probability");
      char* endp = nullptr;
      double lp = std::strtod(std::string(f[0]).c_str(), &endp);
      std::vector<std::string> toks;
      for (int i = 0; i < k; ++i) toks.emplace_back(f[1 + i]);
      std::string key = detail::join_gram(toks);
      if (!(k == 1 && toks[0] == kSentBegin))
        m.prob_[k - 1][key] = std::pow(10.0, lp);
      if (f.size() == static_cast<std::size_t>(k) + 2) {
        if (k >= m.order) fail("backoff weight on a highest-order entry");
        m.bow_[k - 1][key] = std::pow(10.0, std::strtod(std::string(f[k + 1]).c_str(), &endp));
      }
      if (k == 1 && toks[0] != kSentBegin) m.vocab_.push_back(toks[0]);
      ++rows;
    }
    if (rows != declared[k - 1])
      fail("section \\" + std::to_string(k) + "-grams: declared " +
           std::to_string(declared[k - 1]) + " entries, found " + std::to_string(rows));
  }
  if (line != "\\end\\") fail("expected \\end\\");

  std::sort(m.vocab_.begin(), m.vocab_.end());
  m.events_.insert(m.vocab_.begin(), m.vocab_.end());
  return m;
}

}  // namespace csdet
