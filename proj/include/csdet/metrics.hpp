// csdet/metrics.hpp

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

// Time-based detection scoring.
//
// Utterances are discretized into fixed-length frames; frame i takes the tag
// of the word whose span contains the frame midpoint (i + 0.5) * frame_ms,
// or NonSpeech when no word does.  All midpoint comparisons are done on
// doubled integer milliseconds, so labeling is exact.  Miss and false-alarm
// rates for a target language count mis-tagged frames over reference speech
// frames only, which makes an error's cost proportional to how much time it
// covers.  A DET curve collects one (fa, miss) point per swept prior weight
// and reports the equal error rate, interpolated at the first sign change of
// miss - fa; points where the two rates coincide exactly short-circuit that
// scan (a pooled two-language curve has miss = fa everywhere, and the
// interesting value there is the best such operating point).

#pragma once

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <ostream>
#include <span>
#include <string>
#include <vector>

#include "csdet/common.hpp"
#include "csdet/corpus.hpp"
#include "csdet/tagger.hpp"

namespace csdet {

enum class FrameValue : unsigned char { First, Second, NonSpeech };

struct FrameLabelSequence {
  Millis frame_ms = 10;
  std::vector<FrameValue> labels;
};

inline FrameLabelSequence frame_labels(const Utterance& u, const TagPair& pair,
                                       Millis frame_ms = 10) {
  if (frame_ms <= 0) throw ValidationError("frame length must be positive");
  FrameLabelSequence seq;
  seq.frame_ms = frame_ms;
  Millis end = u.end_ms();
  std::size_t frames = static_cast<std::size_t>((end + frame_ms - 1) / frame_ms);
  seq.labels.assign(frames, FrameValue::NonSpeech);
  std::size_t w = 0;
  for (std::size_t i = 0; i < frames; ++i) {
    Millis mid2 = (2 * static_cast<Millis>(i) + 1) * frame_ms;
    while (w < u.words.size() && 2 * u.words[w].end_ms() <= mid2) ++w;
    if (w < u.words.size() && 2 * u.words[w].start_ms <= mid2)
      seq.labels[i] =
          pair.index_of(u.words[w].tag) == 0 ? FrameValue::First : FrameValue::Second;
  }
  return seq;
}

struct RateCounts {
  long long target_frames = 0;  // reference frames carrying the target tag
  long long other_frames = 0;   // reference frames carrying the other language
  long long misses = 0;         // target frames the hypothesis did not tag as target
  long long false_alarms = 0;   // other frames the hypothesis tagged as target

  double miss_rate() const {
    return target_frames ? static_cast<double>(misses) / target_frames : 0.0;
  }
  double fa_rate() const {
    return other_frames ? static_cast<double>(false_alarms) / other_frames : 0.0;
  }
  bool degenerate() const { return target_frames == 0 || other_frames == 0; }

  RateCounts& operator+=(const RateCounts& o) {
    target_frames += o.target_frames;
    other_frames += o.other_frames;
    misses += o.misses;
    false_alarms += o.false_alarms;
    return *this;
  }
};

// Frames past the end of the shorter sequence count as NonSpeech, so a short
// hypothesis misses whatever reference speech it fails to cover.  Frames
// where the reference itself is NonSpeech never enter either rate.
inline RateCounts detection_rates(const FrameLabelSequence& ref,
                                  const FrameLabelSequence& hyp, FrameValue target) {
  if (ref.frame_ms != hyp.frame_ms)
    throw ValidationError("frame length mismatch: " + std::to_string(ref.frame_ms) +
                          " vs " + std::to_string(hyp.frame_ms));
  RateCounts rc;
  std::size_t n = std::max(ref.labels.size(), hyp.labels.size());
  for (std::size_t i = 0; i < n; ++i) {
    FrameValue r = i < ref.labels.size() ? ref.labels[i] : FrameValue::NonSpeech;
    FrameValue h = i < hyp.labels.size() ? hyp.labels[i] : FrameValue::NonSpeech;
    if (r == FrameValue::NonSpeech) continue;
    if (r == target) {
      ++rc.target_frames;
      if (h != target) ++rc.misses;
    } else {
      ++rc.other_frames;
      if (h == target) ++rc.false_alarms;
    }
  }
  return rc;
}

inline RateCounts detection_rates(const FrameLabelSequence& ref,
                                  const FrameLabelSequence& hyp, const TagPair& pair,
                                  const LanguageTag& target) {
  return detection_rates(ref, hyp,
                         pair.index_of(target) == 0 ? FrameValue::First
                                                    : FrameValue::Second);
}

struct DetPoint {
  double lambda = 0.0;
  double fa_rate = 0.0;
  double miss_rate = 0.0;
  RateCounts counts;
};

struct EerResult {
  double eer = 0.0;
  bool exact = false;
};

// Points are canonicalized by ascending lambda first, so the result does not
// depend on grid orientation.  Points where miss equals fa exactly are
// themselves equal-error operating points; when any exist the best one wins.
// Otherwise the first sign change of miss - fa is interpolated linearly; if
// the rates never meet, the closest point is reported and flagged inexact.
inline EerResult eer_from_points(std::vector<DetPoint> points) {
  if (points.empty()) throw ValidationError("equal error rate needs at least one point");
  std::sort(points.begin(), points.end(),
            [](const DetPoint& a, const DetPoint& b) { return a.lambda < b.lambda; });
  EerResult best_touch{1e300, true};
  bool touched = false;
  for (const DetPoint& p : points) {
    if (p.miss_rate == p.fa_rate) {
      touched = true;
      best_touch.eer = std::min(best_touch.eer, p.miss_rate);
    }
  }
  if (touched) return best_touch;
  for (std::size_t i = 0; i + 1 < points.size(); ++i) {
    double d0 = points[i].miss_rate - points[i].fa_rate;
    double d1 = points[i + 1].miss_rate - points[i + 1].fa_rate;
    if ((d0 > 0.0) != (d1 > 0.0)) {
      double t = d0 / (d0 - d1);
      return EerResult{points[i].fa_rate + t * (points[i + 1].fa_rate - points[i].fa_rate),
                       true};
    }
  }
  double closest = 1e300;
  for (const DetPoint& p : points)
    closest = std::min(closest, std::max(p.fa_rate, p.miss_rate));
  return EerResult{closest, false};
}

// Grid point closest to equal rates: argmin of max(fa, miss), ties to the
// lower lambda.  Downstream analyses run at this operating point.
inline std::size_t eer_optimal_index(std::span<const DetPoint> points) {
  if (points.empty()) throw ValidationError("empty detection curve");
  std::size_t best = 0;
  double best_v = std::max(points[0].fa_rate, points[0].miss_rate);
  for (std::size_t i = 1; i < points.size(); ++i) {
    double v = std::max(points[i].fa_rate, points[i].miss_rate);
    if (v < best_v) {
      best_v = v;
      best = i;
    }
  }
  return best;
}

struct DetCurve {
  LanguageTag target;            // one of the pair, or "all" for pooled counts
  std::vector<DetPoint> points;  // ordered by lambda
  double eer = 0.0;
  bool eer_is_exact = false;
};

namespace detail {

template <class TagsOf>
RateCounts pooled_rates_at(const Corpus& ref, const TagsOf& tags_of, FrameValue target,
                           Millis frame_ms) {
  RateCounts rc;
  for (std::size_t u = 0; u < ref.utterances.size(); ++u) {
    FrameLabelSequence rf = frame_labels(ref.utterances[u], ref.tags, frame_ms);
    Utterance hu = ref.utterances[u];
    const std::vector<LanguageTag>& tags = tags_of(u);
    if (tags.size() != hu.words.size())
      throw ValidationError("tag count mismatch for utterance '" + hu.id + "'");
    for (std::size_t i = 0; i < hu.words.size(); ++i) hu.words[i].tag = tags[i];
    FrameLabelSequence hf = frame_labels(hu, ref.tags, frame_ms);
    rc += detection_rates(rf, hf, target);
  }
  return rc;
}

inline void check_coverage(const std::vector<SweepPoint>& sweep_out, const Corpus& ref) {
  if (sweep_out.empty()) throw ValidationError("sweep output is empty");
  for (const SweepPoint& sp : sweep_out) {
    if (sp.hyps.size() != ref.utterances.size())
      throw ValidationError("sweep point lambda=" + std::to_string(sp.lambda) +
                            " covers " + std::to_string(sp.hyps.size()) + " of " +
                            std::to_string(ref.utterances.size()) + " utterances");
    for (std::size_t u = 0; u < sp.hyps.size(); ++u)
      if (sp.hyps[u].utterance_id != ref.utterances[u].id)
        throw ValidationError("sweep hypothesis '" + sp.hyps[u].utterance_id +
                              "' does not match reference utterance '" +
                              ref.utterances[u].id + "'");
  }
}

}  // namespace detail

inline DetCurve det_curve(const std::vector<SweepPoint>& sweep_out, const Corpus& ref,
                          const LanguageTag& target, Millis frame_ms = 10) {
  detail::check_coverage(sweep_out, ref);
  FrameValue tv =
      ref.tags.index_of(target) == 0 ? FrameValue::First : FrameValue::Second;
  DetCurve curve;
  curve.target = target;
  curve.points.reserve(sweep_out.size());
  for (const SweepPoint& sp : sweep_out) {
    RateCounts rc = detail::pooled_rates_at(
        ref, [&](std::size_t u) -> const std::vector<LanguageTag>& { return sp.hyps[u].tags; },
        tv, frame_ms);
    curve.points.push_back(DetPoint{sp.lambda, rc.fa_rate(), rc.miss_rate(), rc});
  }
  EerResult r = eer_from_points(curve.points);
  curve.eer = r.eer;
  curve.eer_is_exact = r.exact;
  return curve;
}

// Combines two per-target curves by summing their counts pointwise.  With two
// languages and a hypothesis that always answers one of them, every mis-tagged
// frame is one pooled miss and one pooled false alarm over the same
// denominator, so the pooled curve has miss = fa at every point.
inline DetCurve pooled_det_curve(const DetCurve& a, const DetCurve& b) {
  if (a.points.size() != b.points.size())
    throw ValidationError("cannot pool curves over different grids");
  DetCurve curve;
  curve.target = LanguageTag{"all"};
  curve.points.reserve(a.points.size());
  for (std::size_t i = 0; i < a.points.size(); ++i) {
    if (a.points[i].lambda != b.points[i].lambda)
      throw ValidationError("cannot pool curves over different grids");
    RateCounts rc = a.points[i].counts;
    rc += b.points[i].counts;
    curve.points.push_back(DetPoint{a.points[i].lambda, rc.fa_rate(), rc.miss_rate(), rc});
  }
  EerResult r = eer_from_points(curve.points);
  curve.eer = r.eer;
  curve.eer_is_exact = r.exact;
  return curve;
}

// ---------------------------------------------------------------------------
// Inverse standard normal CDF.  Rational approximation (Acklam's
// coefficients) refined by one Halley step against the erfc-based CDF, which
// brings the absolute error well under 1.2e-9 on the clamped domain.

inline double probit(double p) {
  p = std::min(std::max(p, 1e-6), 1.0 - 1e-6);

  static constexpr double a[6] = {-3.969683028665376e+01, 2.209460984245205e+02,
                                  -2.759285104469687e+02, 1.383577518672690e+02,
                                  -3.066479806614716e+01, 2.506628277459239e+00};
  static constexpr double b[5] = {-5.447609879822406e+01, 1.615858368580409e+02,
                                  -1.556989798598866e+02, 6.680131188771972e+01,
                                  -1.328068155288572e+01};
  static constexpr double c[6] = {-7.784894002430293e-03, -3.223964580411365e-01,
                                  -2.400758277161838e+00, -2.549732539343734e+00,
                                  4.374664141464968e+00,  2.938163982698783e+00};
  static constexpr double d[4] = {7.784695709041462e-03, 3.224671290700398e-01,
                                  2.445134137142996e+00, 3.754408661907416e+00};
  constexpr double p_low = 0.02425;

  double x;
  if (p < p_low) {
    double q = std::sqrt(-2.0 * std::log(p));
    x = (((((c[0] * q + c[1]) * q + c[2]) * q + c[3]) * q + c[4]) * q + c[5]) /
        ((((d[0] * q + d[1]) * q + d[2]) * q + d[3]) * q + 1.0);
  } else if (p <= 1.0 - p_low) {
    double q = p - 0.5;
    double r = q * q;
    x = (((((a[0] * r + a[1]) * r + a[2]) * r + a[3]) * r + a[4]) * r + a[5]) * q /
        (((((b[0] * r + b[1]) * r + b[2]) * r + b[3]) * r + b[4]) * r + 1.0);
  } else {
    double q = std::sqrt(-2.0 * std::log(1.0 - p));
    x = -(((((c[0] * q + c[1]) * q + c[2]) * q + c[3]) * q + c[4]) * q + c[5]) /
        ((((d[0] * q + d[1]) * q + d[2]) * q + d[3]) * q + 1.0);
  }

  double e = 0.5 * std::erfc(-x / std::sqrt(2.0)) - p;
  double u = e * std::sqrt(2.0 * 3.141592653589793238462643383279503) *
             std::exp(x * x / 2.0);
  return x - u / (1.0 + x * u / 2.0);
}

// ---------------------------------------------------------------------------
// Report writers.

inline void write_det_csv(std::ostream& out, const DetCurve& curve) {
  out << "lambda,fa,miss,fa_probit,miss_probit\n";
  char buf[160];
  for (const DetPoint& p : curve.points) {
    std::snprintf(buf, sizeof buf, "%.6f,%.6f,%.6f,%.6f,%.6f\n", p.lambda, p.fa_rate,
                  p.miss_rate, probit(p.fa_rate), probit(p.miss_rate));
    out << buf;
  }
}

// Self-contained DET plot on probit axes, one polyline per curve with its
// equal-error point marked.  Tick positions follow the conventional percent
// labels for this kind of plot.
inline void write_det_svg(std::ostream& out, std::span<const DetCurve> curves) {
  constexpr double kTicks[] = {0.001, 0.005, 0.01, 0.02, 0.05, 0.10, 0.20, 0.40};
  const char* tick_labels[] = {"0.1", "0.5", "1", "2", "5", "10", "20", "40"};
  constexpr int kSize = 560;
  constexpr int kMargin = 60;
  constexpr int kPlot = kSize - 2 * kMargin;
  const double lo = probit(0.0005);
  const double hi = probit(0.5);
  const char* colors[] = {"#1f77b4", "#d62728", "#2ca02c", "#9467bd", "#8c564b"};

  auto xpix = [&](double rate) {
    double t = (probit(rate) - lo) / (hi - lo);
    t = std::min(std::max(t, 0.0), 1.0);
    return kMargin + t * kPlot;
  };
  auto ypix = [&](double rate) {
    double t = (probit(rate) - lo) / (hi - lo);
    t = std::min(std::max(t, 0.0), 1.0);
    return kMargin + (1.0 - t) * kPlot;
  };
  char buf[256];
  auto num = [&](double v) {
    std::snprintf(buf, sizeof buf, "%.2f", v);
    return std::string(buf);
  };

  out << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << kSize << "\" height=\""
      << kSize << "\" viewBox=\"0 0 " << kSize << ' ' << kSize << "\">\n";
  out << "<rect x=\"" << kMargin << "\" y=\"" << kMargin << "\" width=\"" << kPlot
      << "\" height=\"" << kPlot << "\" fill=\"white\" stroke=\"black\"/>\n";
  for (std::size_t i = 0; i < std::size(kTicks); ++i) {
    std::string x = num(xpix(kTicks[i]));
    std::string y = num(ypix(kTicks[i]));
    out << "<line x1=\"" << x << "\" y1=\"" << kMargin + kPlot << "\" x2=\"" << x
        << "\" y2=\"" << kMargin + kPlot + 6 << "\" stroke=\"black\"/>\n";
    out << "<text x=\"" << x << "\" y=\"" << kMargin + kPlot + 20
        << "\" font-size=\"11\" text-anchor=\"middle\">" << tick_labels[i] << "</text>\n";
    out << "<line x1=\"" << kMargin - 6 << "\" y1=\"" << y << "\" x2=\"" << kMargin
        << "\" y2=\"" << y << "\" stroke=\"black\"/>\n";
    out << "<text x=\"" << kMargin - 10 << "\" y=\"" << y
        << "\" font-size=\"11\" text-anchor=\"end\" dominant-baseline=\"middle\">"
        << tick_labels[i] << "</text>\n";
  }
  out << "<text x=\"" << kMargin + kPlot / 2 << "\" y=\"" << kMargin + kPlot + 40
      << "\" font-size=\"13\" text-anchor=\"middle\">false alarm rate (%)</text>\n";
  out << "<text x=\"16\" y=\"" << kMargin + kPlot / 2
      << "\" font-size=\"13\" text-anchor=\"middle\" transform=\"rotate(-90 16 "
      << kMargin + kPlot / 2 << ")\">miss rate (%)</text>\n";

  for (std::size_t ci = 0; ci < curves.size(); ++ci) {
    const DetCurve& c = curves[ci];
    const char* color = colors[ci % std::size(colors)];
    out << "<polyline fill=\"none\" stroke=\"" << color << "\" stroke-width=\"1.5\" points=\"";
    for (const DetPoint& p : c.points)
      out << num(xpix(p.fa_rate)) << ',' << num(ypix(p.miss_rate)) << ' ';
    out << "\"/>\n";
    out << "<circle cx=\"" << num(xpix(c.eer)) << "\" cy=\"" << num(ypix(c.eer))
        << "\" r=\"4\" fill=\"" << color << "\"/>\n";
    std::snprintf(buf, sizeof buf, "%s: EER %.2f%%%s", c.target.code.c_str(),
                  100.0 * c.eer, c.eer_is_exact ? "" : " (approx)");
    out << "<text x=\"" << kMargin + 12 << "\" y=\"" << kMargin + 18 + 16 * ci
        << "\" font-size=\"12\" fill=\"" << color << "\">" << buf << "</text>\n";
  }
  out << "</svg>\n";
}

}  // namespace csdet
