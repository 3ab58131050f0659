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

#include "csdet/metrics.hpp"

#include <catch2/catch_amalgamated.hpp>

#include <cmath>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "csdet/corpus.hpp"
#include "csdet/lm.hpp"
#include "csdet/tagger.hpp"
#include "oracles/frame_oracle.hpp"
#include "oracles/probit_oracle.hpp"

using namespace csdet;
using Catch::Approx;

namespace {

const TagPair kPair{LanguageTag{"fy"}, LanguageTag{"nl"}};

Utterance words_utt(const std::string& id,
                    const std::vector<std::tuple<Millis, Millis, const char*>>& spans) {
  Utterance u;
  u.id = id;
  int k = 0;
  for (const auto& [start, dur, tag] : spans)
    u.words.push_back(TimedWord{"w" + std::to_string(k++), start, dur, LanguageTag{tag}});
  return u;
}

// Random utterance with 1 ms resolution timings, random gaps and tags.
Utterance random_utt(std::mt19937_64& rng, const std::string& id, bool grid10 = false) {
  Utterance u;
  u.id = id;
  int n = 1 + static_cast<int>(rng() % 8);
  Millis t = static_cast<Millis>(rng() % 200);
  for (int i = 0; i < n; ++i) {
    Millis dur = 1 + static_cast<Millis>(rng() % 700);
    if (grid10) {
      t = (t + 9) / 10 * 10;
      dur = (dur + 9) / 10 * 10;
    }
    u.words.push_back(TimedWord{"w" + std::to_string(i), t, dur,
                                rng() % 2 ? kPair.first : kPair.second});
    t += dur + static_cast<Millis>(rng() % 150);
  }
  return u;
}

FrameLabelSequence seq(Millis f, const std::vector<FrameValue>& labels) {
  return FrameLabelSequence{f, labels};
}

std::vector<FrameValue> repeat(FrameValue v, int n) {
  return std::vector<FrameValue>(n, v);
}

}  // namespace

TEST_CASE("frame labels for simple constructions") {
  Utterance u = words_utt("u1", {{0, 100, "fy"}});
  FrameLabelSequence s = frame_labels(u, kPair, 10);
  REQUIRE(s.labels.size() == 10);
  for (FrameValue v : s.labels) CHECK(v == FrameValue::First);

  u = words_utt("u2", {{0, 50, "fy"}, {100, 100, "nl"}});
  s = frame_labels(u, kPair, 10);
  REQUIRE(s.labels.size() == 20);
  for (int i = 0; i < 5; ++i) CHECK(s.labels[i] == FrameValue::First);
  for (int i = 5; i < 10; ++i) CHECK(s.labels[i] == FrameValue::NonSpeech);
  for (int i = 10; i < 20; ++i) CHECK(s.labels[i] == FrameValue::Second);
}

TEST_CASE("frame count is ceiling of end over frame length") {
  Utterance u = words_utt("u1", {{0, 95, "fy"}});
  FrameLabelSequence s = frame_labels(u, kPair, 10);
  REQUIRE(s.labels.size() == 10);
  // Frame 9 has midpoint 95 ms, outside [0, 95).
  CHECK(s.labels[9] == FrameValue::NonSpeech);
  CHECK(s.labels[8] == FrameValue::First);

  CHECK(frame_labels(words_utt("u2", {{0, 91, "fy"}}), kPair, 10).labels.size() == 10);
  CHECK(frame_labels(words_utt("u3", {{0, 90, "fy"}}), kPair, 10).labels.size() == 9);
  CHECK_THROWS_AS(frame_labels(u, kPair, 0), ValidationError);
}

TEST_CASE("frame labeling matches the per-millisecond oracle") {
  std::mt19937_64 rng(101);
  for (int iter = 0; iter < 400; ++iter) {
    Utterance u = random_utt(rng, "u");
    Millis f = std::vector<Millis>{1, 3, 10, 25}[rng() % 4];
    FrameLabelSequence got = frame_labels(u, kPair, f);
    std::vector<int> want = frame_oracle::frame_labels(u, kPair, f);
    REQUIRE(got.labels.size() == want.size());
    for (std::size_t i = 0; i < want.size(); ++i)
      REQUIRE(static_cast<int>(got.labels[i]) == want[i]);
  }
}

TEST_CASE("first-language frame time tracks summed word durations") {
  std::mt19937_64 rng(103);
  for (int iter = 0; iter < 200; ++iter) {
    bool grid10 = iter % 2 == 0;
    Utterance u = random_utt(rng, "u", grid10);
    FrameLabelSequence s = frame_labels(u, kPair, 10);
    long long first_frames = 0;
    for (FrameValue v : s.labels) first_frames += v == FrameValue::First;
    Millis first_dur = 0;
    long long first_words = 0;
    for (const TimedWord& w : u.words)
      if (w.tag == kPair.first) {
        first_dur += w.duration_ms;
        ++first_words;
      }
    if (grid10) {
      REQUIRE(first_frames * 10 == first_dur);
    } else {
      REQUIRE(std::llabs(first_frames * 10 - first_dur) <= 10 * first_words);
    }
  }
}

TEST_CASE("detection rates: identity, swap, and a counted example") {
  FrameLabelSequence ref = seq(10, {});
  for (int i = 0; i < 60; ++i) ref.labels.push_back(FrameValue::First);
  for (int i = 0; i < 40; ++i) ref.labels.push_back(FrameValue::Second);

  RateCounts same = detection_rates(ref, ref, kPair, kPair.first);
  CHECK(same.miss_rate() == 0.0);
  CHECK(same.fa_rate() == 0.0);
  CHECK_FALSE(same.degenerate());

  FrameLabelSequence swapped = ref;
  for (FrameValue& v : swapped.labels)
    v = v == FrameValue::First ? FrameValue::Second : FrameValue::First;
  RateCounts anti = detection_rates(ref, swapped, kPair, kPair.first);
  CHECK(anti.miss_rate() == 1.0);
  CHECK(anti.fa_rate() == 1.0);

  // Correct hypothesis except 6 first-frames tagged second and 8 second-frames
  // tagged first.
  FrameLabelSequence hyp = ref;
  for (int i = 54; i < 60; ++i) hyp.labels[i] = FrameValue::Second;
  for (int i = 60; i < 68; ++i) hyp.labels[i] = FrameValue::First;
  RateCounts rc = detection_rates(ref, hyp, kPair, kPair.first);
  CHECK(rc.miss_rate() == Approx(0.10).epsilon(1e-12));
  CHECK(rc.fa_rate() == Approx(0.20).epsilon(1e-12));

  // Independent recount with a plain loop over the arrays.
  long long t = 0, o = 0, m = 0, fa = 0;
  for (std::size_t i = 0; i < ref.labels.size(); ++i) {
    if (ref.labels[i] == FrameValue::First) {
      ++t;
      if (hyp.labels[i] != FrameValue::First) ++m;
    } else if (ref.labels[i] != FrameValue::NonSpeech) {
      ++o;
      if (hyp.labels[i] == FrameValue::First) ++fa;
    }
  }
  CHECK(rc.target_frames == t);
  CHECK(rc.other_frames == o);
  CHECK(rc.misses == m);
  CHECK(rc.false_alarms == fa);
}

TEST_CASE("short hypothesis pads as non-speech; frame length must match") {
  FrameLabelSequence ref = seq(10, {});
  for (int i = 0; i < 6; ++i) ref.labels.push_back(FrameValue::First);
  for (int i = 0; i < 4; ++i) ref.labels.push_back(FrameValue::Second);
  FrameLabelSequence hyp = seq(10, repeat(FrameValue::First, 4));
  RateCounts rc = detection_rates(ref, hyp, kPair, kPair.first);
  CHECK(rc.misses == 2);
  CHECK(rc.false_alarms == 0);
  CHECK(rc.miss_rate() == Approx(2.0 / 6.0));

  FrameLabelSequence wrong = seq(20, repeat(FrameValue::First, 4));
  CHECK_THROWS_AS(detection_rates(ref, wrong, kPair, kPair.first), ValidationError);
}

TEST_CASE("zero denominators flag the result degenerate") {
  FrameLabelSequence ref = seq(10, repeat(FrameValue::First, 20));
  FrameLabelSequence hyp = seq(10, repeat(FrameValue::Second, 20));
  RateCounts rc = detection_rates(ref, hyp, kPair, kPair.second);
  CHECK(rc.degenerate());
  CHECK(rc.miss_rate() == 0.0);
  CHECK(rc.target_frames == 0);
  CHECK(rc.fa_rate() == 1.0);

  FrameLabelSequence empty = seq(10, {});
  RateCounts none = detection_rates(empty, empty, kPair, kPair.first);
  CHECK(none.degenerate());
  CHECK(none.miss_rate() == 0.0);
  CHECK(none.fa_rate() == 0.0);
}

TEST_CASE("detection counts match the per-millisecond oracle on random pairs") {
  std::mt19937_64 rng(107);
  for (int iter = 0; iter < 300; ++iter) {
    Utterance ref = random_utt(rng, "u");
    Utterance hyp = random_utt(rng, "u");
    Millis f = std::vector<Millis>{1, 7, 10}[rng() % 3];
    for (int target = 0; target < 2; ++target) {
      RateCounts got = detection_rates(frame_labels(ref, kPair, f),
                                       frame_labels(hyp, kPair, f),
                                       target == 0 ? FrameValue::First : FrameValue::Second);
      frame_oracle::Counts want = frame_oracle::rates(ref, hyp, kPair, target, f);
      REQUIRE(got.target_frames == want.target);
      REQUIRE(got.other_frames == want.other);
      REQUIRE(got.misses == want.miss);
      REQUIRE(got.false_alarms == want.fa);
    }
  }
}

TEST_CASE("rates are invariant under uniform time scaling") {
  std::mt19937_64 rng(109);
  for (int iter = 0; iter < 100; ++iter) {
    Utterance ref = random_utt(rng, "u");
    Utterance hyp = ref;
    for (TimedWord& w : hyp.words)
      if (rng() % 3 == 0) w.tag = w.tag == kPair.first ? kPair.second : kPair.first;
    Utterance ref3 = ref, hyp3 = hyp;
    for (TimedWord& w : ref3.words) {
      w.start_ms *= 3;
      w.duration_ms *= 3;
    }
    for (TimedWord& w : hyp3.words) {
      w.start_ms *= 3;
      w.duration_ms *= 3;
    }
    RateCounts a = detection_rates(frame_labels(ref, kPair, 10),
                                   frame_labels(hyp, kPair, 10), FrameValue::First);
    RateCounts b = detection_rates(frame_labels(ref3, kPair, 30),
                                   frame_labels(hyp3, kPair, 30), FrameValue::First);
    REQUIRE(a.target_frames == b.target_frames);
    REQUIRE(a.other_frames == b.other_frames);
    REQUIRE(a.misses == b.misses);
    REQUIRE(a.false_alarms == b.false_alarms);
  }
}

TEST_CASE("equal error rate from bracketing, touching, and flat curves") {
  auto pt = [](double l, double fa, double miss) {
    return DetPoint{l, fa, miss, RateCounts{}};
  };
  // Crossing between two grid points, symmetric: midpoint value.
  EerResult r = eer_from_points({pt(0.4, 0.20, 0.10), pt(0.6, 0.10, 0.20)});
  CHECK(r.eer == Approx(0.15).margin(1e-12));
  CHECK(r.exact);

  // An exact touch point on the grid wins outright.
  r = eer_from_points({pt(0.0, 0.0, 0.9), pt(0.5, 0.10, 0.10), pt(1.0, 0.9, 0.0)});
  CHECK(r.eer == 0.10);
  CHECK(r.exact);

  // Flat all-equal curve (the pooled case): best equal-rates point.
  r = eer_from_points({pt(0.0, 0.30, 0.30), pt(0.5, 0.12, 0.12), pt(1.0, 0.25, 0.25)});
  CHECK(r.eer == 0.12);
  CHECK(r.exact);

  // No crossing at all: closest approach, flagged inexact.
  r = eer_from_points({pt(0.0, 0.00, 0.50), pt(0.5, 0.05, 0.30), pt(1.0, 0.10, 0.28)});
  CHECK(r.eer == Approx(0.28));
  CHECK_FALSE(r.exact);

  CHECK_THROWS_AS(eer_from_points({}), ValidationError);
}

TEST_CASE("equal error rate matches analytic crossings of random linear curves") {
  std::mt19937_64 rng(211);
  std::uniform_real_distribution<double> unif(0.05, 0.9);
  for (int iter = 0; iter < 200; ++iter) {
    double a = 0.02 * unif(rng);
    double b = unif(rng);
    double c = unif(rng) * 0.5 + 0.4;
    double d = unif(rng) * c;  // miss stays positive on [0,1]
    double cross = (c - a) / (b + d);
    if (cross <= 0.02 || cross >= 0.98) continue;
    double analytic = a + b * cross;
    std::vector<DetPoint> points;
    for (int i = 0; i <= 50; ++i) {
      double l = i / 50.0;
      points.push_back(DetPoint{l, a + b * l, c - d * l, RateCounts{}});
    }
    if (iter % 2) std::reverse(points.begin(), points.end());
    EerResult r = eer_from_points(points);
    REQUIRE(r.exact);
    REQUIRE(r.eer == Approx(analytic).margin(1e-12));
    // The crossing of monotone curves is bracketed by the best grid point
    // from above and by the largest per-point min rate from below.
    double lo = -1e300, hi = 1e300;
    for (const DetPoint& p : points) {
      lo = std::max(lo, std::min(p.fa_rate, p.miss_rate));
      hi = std::min(hi, std::max(p.fa_rate, p.miss_rate));
    }
    REQUIRE(r.eer >= lo - 1e-12);
    REQUIRE(r.eer <= hi + 1e-12);
  }
}

TEST_CASE("best operating point picks the lowest max rate, earliest lambda") {
  auto pt = [](double l, double fa, double miss) {
    return DetPoint{l, fa, miss, RateCounts{}};
  };
  std::vector<DetPoint> pts{pt(0.0, 0.0, 0.5), pt(0.5, 0.15, 0.2), pt(1.0, 0.3, 0.1)};
  CHECK(eer_optimal_index(pts) == 1);
  std::vector<DetPoint> tie{pt(0.0, 0.2, 0.1), pt(0.5, 0.1, 0.2), pt(1.0, 0.2, 0.2)};
  CHECK(eer_optimal_index(tie) == 0);
  CHECK_THROWS_AS(eer_optimal_index(std::vector<DetPoint>{}), ValidationError);
}

namespace {

// Two disjoint-vocabulary models plus a mixed reference corpus for curve
// tests that exercise the full sweep path.
struct CurveFixture {
  NGramModel ma, mb;
  Corpus ref;

  CurveFixture() {
    std::mt19937_64 rng(301);
    auto text = [&](const std::string& p) {
      std::vector<std::vector<std::string>> t;
      for (int s = 0; s < 50; ++s) {
        std::vector<std::string> sent;
        for (int i = 0; i < 6; ++i) sent.push_back(p + std::to_string(rng() % 8));
        t.push_back(std::move(sent));
      }
      return t;
    };
    ma = train_kn(text("aa"), 2);
    mb = train_kn(text("bb"), 2);
    ref.tags = kPair;
    for (int u = 0; u < 8; ++u) {
      Utterance utt;
      utt.id = "u" + std::to_string(u);
      Millis t = 0;
      int na = 2 + static_cast<int>(rng() % 3);
      int nb = 2 + static_cast<int>(rng() % 3);
      for (int i = 0; i < na + nb; ++i) {
        bool first = i < na;
        utt.words.push_back(TimedWord{
            (first ? "aa" : "bb") + std::to_string(rng() % 8), t,
            200 + static_cast<Millis>(rng() % 300), first ? kPair.first : kPair.second});
        t = utt.words.back().end_ms() + static_cast<Millis>(rng() % 100);
      }
      ref.utterances.push_back(std::move(utt));
    }
  }
};

}  // namespace

TEST_CASE("detection curve spans both axes and pools counts per lambda") {
  CurveFixture fx;
  SweepConfig cfg;
  cfg.lambdas = {0.0, 0.5, 1.0};
  auto points = sweep(fx.ref, fx.ma, fx.mb, cfg);
  DetCurve curve = det_curve(points, fx.ref, kPair.first, 10);
  REQUIRE(curve.points.size() == 3);
  CHECK(curve.points[0].lambda == 0.0);
  CHECK(curve.points[0].miss_rate == 1.0);
  CHECK(curve.points[0].fa_rate == 0.0);
  CHECK(curve.points[2].miss_rate == 0.0);
  CHECK(curve.points[2].fa_rate == 1.0);
  // Disjoint vocabularies separate almost perfectly mid-sweep.
  CHECK(curve.points[1].miss_rate < 0.05);
  CHECK(curve.points[1].fa_rate < 0.05);

  // Pooling equivalence: concatenating all per-utterance frame sequences
  // gives the same counts as the curve's pooled point.
  Corpus hyp = apply_tags(fx.ref, points[1].hyps);
  FrameLabelSequence all_ref{10, {}}, all_hyp{10, {}};
  for (std::size_t u = 0; u < fx.ref.utterances.size(); ++u) {
    auto r = frame_labels(fx.ref.utterances[u], kPair, 10);
    auto h = frame_labels(hyp.utterances[u], kPair, 10);
    h.labels.resize(r.labels.size(), FrameValue::NonSpeech);
    all_ref.labels.insert(all_ref.labels.end(), r.labels.begin(), r.labels.end());
    all_hyp.labels.insert(all_hyp.labels.end(), h.labels.begin(), h.labels.end());
  }
  RateCounts pooled = detection_rates(all_ref, all_hyp, kPair, kPair.first);
  CHECK(pooled.target_frames == curve.points[1].counts.target_frames);
  CHECK(pooled.other_frames == curve.points[1].counts.other_frames);
  CHECK(pooled.misses == curve.points[1].counts.misses);
  CHECK(pooled.false_alarms == curve.points[1].counts.false_alarms);
}

TEST_CASE("swapping the detection target mirrors the curve exactly") {
  CurveFixture fx;
  SweepConfig cfg;
  cfg.lambdas = {0.0, 0.25, 0.5, 0.75, 1.0};
  auto points = sweep(fx.ref, fx.ma, fx.mb, cfg);
  DetCurve first = det_curve(points, fx.ref, kPair.first, 10);
  DetCurve second = det_curve(points, fx.ref, kPair.second, 10);
  REQUIRE(first.points.size() == second.points.size());
  // Hypotheses tag every reference speech frame with one of the two
  // languages, so miss counts for one target are false alarms for the other.
  for (std::size_t i = 0; i < first.points.size(); ++i) {
    CHECK(first.points[i].counts.misses == second.points[i].counts.false_alarms);
    CHECK(first.points[i].counts.false_alarms == second.points[i].counts.misses);
    CHECK(first.points[i].counts.target_frames == second.points[i].counts.other_frames);
    CHECK(first.points[i].miss_rate == second.points[i].fa_rate);
  }
}

TEST_CASE("pooled curve has equal rates everywhere and a finite best point") {
  CurveFixture fx;
  SweepConfig cfg = SweepConfig::defaults();
  auto points = sweep(fx.ref, fx.ma, fx.mb, cfg);
  DetCurve first = det_curve(points, fx.ref, kPair.first, 10);
  DetCurve second = det_curve(points, fx.ref, kPair.second, 10);
  DetCurve pooled = pooled_det_curve(first, second);
  CHECK(pooled.target.code == "all");
  for (const DetPoint& p : pooled.points) CHECK(p.miss_rate == p.fa_rate);
  CHECK(pooled.eer_is_exact);
  double best = 1e300;
  for (const DetPoint& p : pooled.points) best = std::min(best, p.miss_rate);
  CHECK(pooled.eer == best);
  CHECK(pooled.eer < 0.05);

  DetCurve trimmed = first;
  trimmed.points.pop_back();
  CHECK_THROWS_AS(pooled_det_curve(trimmed, second), ValidationError);
}

TEST_CASE("detection curve validates sweep coverage") {
  CurveFixture fx;
  SweepConfig cfg;
  cfg.lambdas = {0.0, 1.0};
  auto points = sweep(fx.ref, fx.ma, fx.mb, cfg);
  auto broken = points;
  broken[1].hyps.pop_back();
  CHECK_THROWS_AS(det_curve(broken, fx.ref, kPair.first, 10), ValidationError);
  broken = points;
  broken[0].hyps[0].utterance_id = "nope";
  CHECK_THROWS_AS(det_curve(broken, fx.ref, kPair.first, 10), ValidationError);
  broken = points;
  broken[0].hyps[2].tags.pop_back();
  CHECK_THROWS_AS(det_curve(broken, fx.ref, kPair.first, 10), ValidationError);
  CHECK_THROWS_AS(det_curve({}, fx.ref, kPair.first, 10), ValidationError);
}

TEST_CASE("probit hits pinned values and is antisymmetric") {
  CHECK(probit(0.5) == 0.0);
  CHECK(probit(0.0013499) == Approx(-3.0).margin(1e-4));
  CHECK(probit(1.0 - 0.0013499) == Approx(3.0).margin(1e-4));
  for (int i = 1; i <= 99; ++i) {
    double p = i / 100.0;
    CHECK(std::abs(probit(p) + probit(1.0 - p)) < 1e-9);
  }
  // Out-of-range inputs clamp rather than blow up.
  CHECK(probit(0.0) == probit(1e-6));
  CHECK(probit(1.0) == probit(1.0 - 1e-6));
  CHECK(std::isfinite(probit(0.0)));
}

TEST_CASE("probit agrees with the bisection oracle") {
  std::vector<double> ps{1e-6, 2e-6, 1e-5, 1e-4, 0.0013499, 0.01, 0.02425,
                         0.1,  0.25, 0.5,  0.75, 0.9,       0.99, 0.999999};
  for (int i = 1; i < 200; ++i) ps.push_back(i / 200.0);
  double worst = 0.0;
  for (double p : ps) {
    double err = std::abs(probit(p) - probit_oracle::inverse_normal_cdf(p));
    worst = std::max(worst, err);
  }
  CHECK(worst < 1.2e-9);
  // Monotone over the whole clamped domain.
  double prev = probit(0.0);
  for (int i = 1; i <= 1000; ++i) {
    double cur = probit(i / 1000.0);
    CHECK(cur >= prev);
    prev = cur;
  }
}

TEST_CASE("det csv layout is stable") {
  DetCurve curve;
  curve.target = kPair.first;
  curve.points.push_back(DetPoint{0.0, 0.0, 1.0, RateCounts{}});
  curve.points.push_back(DetPoint{0.5, 0.125, 0.25, RateCounts{}});
  std::ostringstream out;
  write_det_csv(out, curve);
  char row1[160], row2[160];
  std::snprintf(row1, sizeof row1, "0.000000,0.000000,1.000000,%.6f,%.6f\n", probit(0.0),
                probit(1.0));
  std::snprintf(row2, sizeof row2, "0.500000,0.125000,0.250000,%.6f,%.6f\n", probit(0.125),
                probit(0.25));
  CHECK(out.str() == std::string("lambda,fa,miss,fa_probit,miss_probit\n") + row1 + row2);
}

TEST_CASE("det svg is deterministic and carries the expected elements") {
  CurveFixture fx;
  SweepConfig cfg;
  cfg.lambdas = {0.0, 0.5, 1.0};
  auto points = sweep(fx.ref, fx.ma, fx.mb, cfg);
  DetCurve first = det_curve(points, fx.ref, kPair.first, 10);
  DetCurve second = det_curve(points, fx.ref, kPair.second, 10);
  DetCurve pooled = pooled_det_curve(first, second);
  std::vector<DetCurve> curves{first, second, pooled};

  std::ostringstream s1, s2;
  write_det_svg(s1, curves);
  write_det_svg(s2, curves);
  std::string svg = s1.str();
  REQUIRE(svg == s2.str());
  CHECK(svg.rfind("<svg", 0) == 0);
  CHECK(svg.find("</svg>") != std::string::npos);
  std::size_t polylines = 0, pos = 0;
  while ((pos = svg.find("<polyline", pos)) != std::string::npos) {
    ++polylines;
    pos += 9;
  }
  CHECK(polylines == curves.size());
  for (const char* label : {">0.1<", ">0.5<", ">1<", ">2<", ">5<", ">10<", ">20<", ">40<"})
    CHECK(svg.find(label) != std::string::npos);
  CHECK(svg.find("EER") != std::string::npos);
  CHECK(svg.find("fy") != std::string::npos);
  CHECK(svg.find("all") != std::string::npos);
}
