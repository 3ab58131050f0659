// tests/oracles/kn_oracle.hpp

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

// Reference interpolated Kneser-Ney evaluator, kept deliberately independent
// of the library: literal count tables over token vectors and a direct
// recursive evaluation of
//
//   P_k(w | h) = max(c_k(hw) - D_k, 0) / S(h) + D_k N1+(h.) / S(h) * P_{k-1}(w | h')
//
// with raw counts at the highest order and continuation counts below, except
// that k-grams starting with <s> keep raw counts (nothing can extend them to
// the left).  The unigram base case interpolates with the uniform
// distribution over the query vocabulary and applies the <unk> floor.

#pragma once

#include <algorithm>
#include <cmath>
#include <map>
#include <set>
#include <string>
#include <vector>

namespace kn_oracle {

using Gram = std::vector<std::string>;

struct Oracle {
  int order = 0;
  std::vector<std::map<Gram, long long>> raw;   // raw[k-1]: occurrence counts
  std::vector<std::map<Gram, long long>> used;  // counts the model actually uses
  std::vector<double> discount;
  std::vector<std::string> vocab;  // query vocabulary: tokens + </s> + <unk>
  std::map<std::string, double> unigram;
  double unk_floor = 1e-6;

  Oracle(const std::vector<std::vector<std::string>>& corpus, int n,
         std::vector<double> fixed_discounts = {}) {
    order = n;
    raw.resize(n);
    used.resize(n);

    std::set<std::string> tokens;
    for (const auto& sent : corpus) {
      Gram seq;
      seq.push_back("<s>");
      for (const auto& t : sent) {
        seq.push_back(t);
        tokens.insert(t);
      }
      seq.push_back("</s>");
      for (int k = 1; k <= n; ++k)
        for (std::size_t i = 0; i + k <= seq.size(); ++i)
          ++raw[k - 1][Gram(seq.begin() + i, seq.begin() + i + k)];
    }

    used[n - 1] = raw[n - 1];
    for (int k = 1; k < n; ++k) {
      std::map<Gram, long long> cont;
      for (const auto& [g, c] : raw[k])  // distinct (k+1)-gram types
        ++cont[Gram(g.begin() + 1, g.end())];
      for (const auto& [g, c] : raw[k - 1]) {
        long long u = (g.front() == "<s>") ? c : cont[g];
        if (u > 0) used[k - 1][g] = u;  // every seen k-gram has u > 0; belt and braces
      }
    }
    used[0].erase(Gram{"<s>"});  // <s> is never a predicted event

    if (!fixed_discounts.empty()) {
      discount = fixed_discounts.size() == 1
                     ? std::vector<double>(n, fixed_discounts[0])
                     : fixed_discounts;
    } else {
      for (int k = 1; k <= n; ++k) {
        long long n1 = 0, n2 = 0;
        for (const auto& [g, c] : used[k - 1]) {
          if (c == 1) ++n1;
          if (c == 2) ++n2;
        }
        discount.push_back((n1 > 0 && n2 > 0)
                               ? static_cast<double>(n1) / (n1 + 2.0 * n2)
                               : 0.75);
      }
    }

    vocab.assign(tokens.begin(), tokens.end());
    vocab.push_back("</s>");
    vocab.push_back("<unk>");
    std::sort(vocab.begin(), vocab.end());

    long long s1 = 0, t1 = 0;
    for (const auto& [g, c] : used[0]) {
      s1 += c;
      ++t1;
    }
    double base = 1.0 / vocab.size();
    double d1 = discount[0];
    for (const auto& w : vocab) {
      auto it = used[0].find(Gram{w});
      double c = it == used[0].end() ? 0.0 : static_cast<double>(it->second);
      unigram[w] = std::max(c - d1, 0.0) / s1 + d1 * t1 / s1 * base;
    }
    double pu = unigram["<unk>"];
    if (pu < unk_floor) {
      double scale = (1.0 - unk_floor) / (1.0 - pu);
      for (auto& [w, p] : unigram)
        if (w != "<unk>") p *= scale;
      unigram["<unk>"] = unk_floor;
    }
  }

  std::string map_event(const std::string& w) const {
    return (w != "<s>" && std::binary_search(vocab.begin(), vocab.end(), w)) ? w
                                                                             : "<unk>";
  }

  double prob(const std::string& word, Gram hist) const {
    std::string w = map_event(word);
    if (hist.size() > static_cast<std::size_t>(order - 1))
      hist.erase(hist.begin(), hist.end() - (order - 1));
    for (auto& t : hist)
      if (t != "<s>" && !std::binary_search(vocab.begin(), vocab.end(), t)) t = "<unk>";
    return rec(w, hist);
  }

 private:
  double rec(const std::string& w, const Gram& hist) const {
    if (hist.empty()) return unigram.at(w);
    int k = static_cast<int>(hist.size()) + 1;
    long long s = 0, n1p = 0, c = 0;
    for (const auto& [g, cnt] : used[k - 1]) {
      if (!std::equal(hist.begin(), hist.end(), g.begin())) continue;
      s += cnt;
      ++n1p;
      if (g.back() == w) c = cnt;
    }
    Gram shorter(hist.begin() + 1, hist.end());
    if (s == 0) return rec(w, shorter);
    double d = discount[k - 1];
    return std::max(static_cast<double>(c) - d, 0.0) / s + d * n1p / s * rec(w, shorter);
  }
};

}  // namespace kn_oracle
