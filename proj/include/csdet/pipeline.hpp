// csdet/pipeline.hpp

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

// The toolkit pipeline behind the command-line tool: a flat key=value run
// configuration, the five operations (train, tag, evaluate, analyze,
// generate), and a manifest that fingerprints every run.
//
// All outputs are deterministic functions of the configuration and the input
// file bytes.  Every run writes manifest.json with the configuration hash and
// input digests; two runs with identical manifests produce byte-identical
// output files.  Files are written atomically (temporary name, then rename),
// and all randomness flows from the single seed in the configuration.

#pragma once

#include <array>
#include <cstdint>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <map>
#include <optional>
#include <random>
#include <set>
#include <sstream>
#include <string>
#include <string_view>
#include <vector>

#include <json.hpp>

#include "csdet/analysis.hpp"
#include "csdet/common.hpp"
#include "csdet/corpus.hpp"
#include "csdet/lm.hpp"
#include "csdet/metrics.hpp"
#include "csdet/tagger.hpp"
#include "csdet/version.hpp"

namespace csdet {

struct RunConfig {
  // Input and output paths.
  std::string ref_ctm;
  std::string hyp_ctm;  // analyze only
  std::string corpus_first;
  std::string corpus_second;
  std::string model;  // generate only
  std::string model_first;
  std::string model_second;
  std::string out_dir;

  // The language pair; the first tag is the sweep's target prior.
  std::string tag_first = "fy";
  std::string tag_second = "nl";

  // Model training.
  int order = 3;
  std::vector<double> discounts;  // empty = estimate per order
  bool bilingual = false;         // also train a pooled model

  // Tagging sweep and scoring.
  SweepConfig sweep = SweepConfig::defaults();
  Millis frame_ms = 10;
  std::vector<Millis> hist_edges_ms = default_histogram_edges();
  long long top_k = 10;

  // Generation.
  std::uint64_t seed = 1;
  long long gen_count = 100;
  long long gen_max_len = 40;

  TagPair tag_pair() const {
    return TagPair{LanguageTag{tag_first}, LanguageTag{tag_second}};
  }
};

namespace detail {

inline std::string fmt_double(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

template <class T, class Fmt>
std::string join_list(const std::vector<T>& xs, Fmt fmt) {
  std::string out;
  for (std::size_t i = 0; i < xs.size(); ++i) {
    if (i) out += ',';
    out += fmt(xs[i]);
  }
  return out;
}

inline std::string trim(std::string_view s) {
  std::size_t b = s.find_first_not_of(" \t");
  if (b == std::string_view::npos) return "";
  std::size_t e = s.find_last_not_of(" \t");
  return std::string(s.substr(b, e - b + 1));
}

inline double parse_double_value(const std::string& key, const std::string& v) {
  try {
    std::size_t used = 0;
    double d = std::stod(v, &used);
    if (used != v.size()) throw std::invalid_argument(v);
    return d;
  } catch (const std::exception&) {
    throw ValidationError("config key '" + key + "': not a number: '" + v + "'");
  }
}

inline long long parse_int_value(const std::string& key, const std::string& v) {
  try {
    std::size_t used = 0;
    long long n = std::stoll(v, &used);
    if (used != v.size()) throw std::invalid_argument(v);
    return n;
  } catch (const std::exception&) {
    throw ValidationError("config key '" + key + "': not an integer: '" + v + "'");
  }
}

template <class T, class Parse>
std::vector<T> parse_list(const std::string& value, Parse parse) {
  std::vector<T> out;
  std::size_t start = 0;
  if (trim(value).empty()) return out;
  while (true) {
    std::size_t comma = value.find(',', start);
    std::string item = trim(value.substr(start, comma - start));
    out.push_back(parse(item));
    if (comma == std::string::npos) return out;
    start = comma + 1;
  }
}

}  // namespace detail

// Canonical form: every key, fixed order, lossless numeric formatting.
inline std::string serialize_config(const RunConfig& cfg) {
  std::ostringstream out;
  out << "ref_ctm = " << cfg.ref_ctm << '\n';
  out << "hyp_ctm = " << cfg.hyp_ctm << '\n';
  out << "corpus_first = " << cfg.corpus_first << '\n';
  out << "corpus_second = " << cfg.corpus_second << '\n';
  out << "model = " << cfg.model << '\n';
  out << "model_first = " << cfg.model_first << '\n';
  out << "model_second = " << cfg.model_second << '\n';
  out << "out_dir = " << cfg.out_dir << '\n';
  out << "tag_first = " << cfg.tag_first << '\n';
  out << "tag_second = " << cfg.tag_second << '\n';
  out << "order = " << cfg.order << '\n';
  out << "discounts = " << detail::join_list(cfg.discounts, detail::fmt_double) << '\n';
  out << "bilingual = " << (cfg.bilingual ? 1 : 0) << '\n';
  out << "lambdas = " << detail::join_list(cfg.sweep.lambdas, detail::fmt_double) << '\n';
  out << "gamma = " << detail::fmt_double(cfg.sweep.gamma) << '\n';
  out << "frame_ms = " << cfg.frame_ms << '\n';
  out << "hist_edges_ms = "
      << detail::join_list(cfg.hist_edges_ms,
                           [](Millis m) { return std::to_string(m); })
      << '\n';
  out << "top_k = " << cfg.top_k << '\n';
  out << "seed = " << cfg.seed << '\n';
  out << "gen_count = " << cfg.gen_count << '\n';
  out << "gen_max_len = " << cfg.gen_max_len << '\n';
  return out.str();
}

inline void apply_override(RunConfig& cfg, const std::string& key,
                           const std::string& value) {
  auto dbl = [&] { return detail::parse_double_value(key, value); };
  auto num = [&] { return detail::parse_int_value(key, value); };
  if (key == "ref_ctm") cfg.ref_ctm = value;
  else if (key == "hyp_ctm") cfg.hyp_ctm = value;
  else if (key == "corpus_first") cfg.corpus_first = value;
  else if (key == "corpus_second") cfg.corpus_second = value;
  else if (key == "model") cfg.model = value;
  else if (key == "model_first") cfg.model_first = value;
  else if (key == "model_second") cfg.model_second = value;
  else if (key == "out_dir") cfg.out_dir = value;
  else if (key == "tag_first") cfg.tag_first = value;
  else if (key == "tag_second") cfg.tag_second = value;
  else if (key == "order") cfg.order = static_cast<int>(num());
  else if (key == "discounts")
    cfg.discounts = detail::parse_list<double>(
        value, [&](const std::string& v) { return detail::parse_double_value(key, v); });
  else if (key == "bilingual") cfg.bilingual = num() != 0;
  else if (key == "lambdas")
    cfg.sweep.lambdas = detail::parse_list<double>(
        value, [&](const std::string& v) { return detail::parse_double_value(key, v); });
  else if (key == "gamma") cfg.sweep.gamma = dbl();
  else if (key == "frame_ms") cfg.frame_ms = num();
  else if (key == "hist_edges_ms")
    cfg.hist_edges_ms = detail::parse_list<Millis>(
        value, [&](const std::string& v) { return detail::parse_int_value(key, v); });
  else if (key == "top_k") cfg.top_k = num();
  else if (key == "seed") cfg.seed = static_cast<std::uint64_t>(num());
  else if (key == "gen_count") cfg.gen_count = num();
  else if (key == "gen_max_len") cfg.gen_max_len = num();
  else throw ValidationError("unknown config key '" + key + "'");
}

inline RunConfig parse_config(std::istream& in) {
  RunConfig cfg;
  std::string line;
  std::size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    std::string stripped = detail::trim(line);
    if (stripped.empty() || stripped[0] == '#') continue;
    std::size_t eq = stripped.find('=');
    if (eq == std::string::npos)
      throw ParseError("config line " + std::to_string(lineno) +
                       ": expected key = value");
    try {
      apply_override(cfg, detail::trim(stripped.substr(0, eq)),
                     detail::trim(stripped.substr(eq + 1)));
    } catch (const ValidationError& e) {
      throw ParseError("config line " + std::to_string(lineno) + ": " + e.what());
    }
  }
  return cfg;
}

inline RunConfig load_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open config file: " + path);
  try {
    return parse_config(in);
  } catch (const ParseError& e) {
    throw ParseError(path + ": " + e.what());
  }
}

inline std::string config_hash(const RunConfig& cfg) {
  return fnv1a64_hex(serialize_config(cfg));
}

// ---------------------------------------------------------------------------
// Input loading with path context on every failure.

inline std::vector<std::vector<std::string>> load_text(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open text corpus: " + path);
  return parse_text(in);
}

inline Corpus load_ctm(const std::string& path, const TagPair& tags) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open ctm file: " + path);
  try {
    return parse_ctm(in, tags);
  } catch (const InputError& e) {
    throw ParseError(path + ": " + e.what());
  }
}

inline NGramModel load_model(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open model file: " + path);
  try {
    return read_arpa(in);
  } catch (const InputError& e) {
    throw ParseError(path + ": " + e.what());
  }
}

// ---------------------------------------------------------------------------
// Output plumbing.

namespace detail {

inline void write_output(const RunConfig& cfg, const std::string& name,
                         std::string_view content) {
  std::filesystem::create_directories(cfg.out_dir);
  write_file_atomic(std::filesystem::path(cfg.out_dir) / name, content);
}

inline void write_manifest(const RunConfig& cfg, const std::string& command,
                           const std::vector<std::string>& input_paths,
                           const nlohmann::json& extra = nlohmann::json::object()) {
  nlohmann::json m;
  m["command"] = command;
  m["config_hash"] = config_hash(cfg);
  nlohmann::json inputs = nlohmann::json::object();
  for (const std::string& p : input_paths) inputs[p] = fnv1a64_hex(read_file(p));
  m["inputs"] = inputs;
  m["tool"] = kToolName;
  m["version"] = kToolVersion;
  if (!extra.empty()) m["stats"] = extra;
  write_output(cfg, "manifest.json", m.dump(2) + "\n");
}

inline std::string model_to_string(const NGramModel& m) {
  std::ostringstream out;
  write_arpa(out, m);
  return out.str();
}

inline std::string require_path(const std::string& value, const std::string& what) {
  if (value.empty()) throw ValidationError("missing required path: " + what);
  return value;
}

inline std::string pct(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.2f%%", 100.0 * v);
  return buf;
}

}  // namespace detail

// ---------------------------------------------------------------------------
// train: two monolingual models, optionally one pooled model.

struct CorpusStats {
  long long sentences = 0;
  long long tokens = 0;
  long long vocab = 0;
};

struct TrainResult {
  CorpusStats first, second;
  std::vector<std::string> files;
};

namespace detail {

inline CorpusStats text_stats(const std::vector<std::vector<std::string>>& text) {
  CorpusStats st;
  std::set<std::string> vocab;
  st.sentences = static_cast<long long>(text.size());
  for (const auto& sent : text) {
    st.tokens += static_cast<long long>(sent.size());
    vocab.insert(sent.begin(), sent.end());
  }
  st.vocab = static_cast<long long>(vocab.size());
  return st;
}

}  // namespace detail

inline TrainResult run_train(const RunConfig& cfg) {
  detail::require_path(cfg.out_dir, "out_dir");
  auto text_first = load_text(detail::require_path(cfg.corpus_first, "corpus_first"));
  auto text_second = load_text(detail::require_path(cfg.corpus_second, "corpus_second"));
  if (text_first.empty())
    throw ValidationError(cfg.corpus_first + ": corpus has no sentences");
  if (text_second.empty())
    throw ValidationError(cfg.corpus_second + ": corpus has no sentences");

  TrainResult res;
  res.first = detail::text_stats(text_first);
  res.second = detail::text_stats(text_second);

  NGramModel m1 = train_kn(text_first, cfg.order, cfg.discounts);
  NGramModel m2 = train_kn(text_second, cfg.order, cfg.discounts);
  std::string f1 = "lm_" + cfg.tag_first + ".arpa";
  std::string f2 = "lm_" + cfg.tag_second + ".arpa";
  detail::write_output(cfg, f1, detail::model_to_string(m1));
  detail::write_output(cfg, f2, detail::model_to_string(m2));
  res.files = {f1, f2};

  if (cfg.bilingual) {
    auto pooled_text = text_first;
    pooled_text.insert(pooled_text.end(), text_second.begin(), text_second.end());
    NGramModel pooled = train_kn(pooled_text, cfg.order, cfg.discounts);
    detail::write_output(cfg, "lm_pooled.arpa", detail::model_to_string(pooled));
    res.files.push_back("lm_pooled.arpa");
  }

  nlohmann::json stats;
  stats[cfg.tag_first] = {{"sentences", res.first.sentences},
                          {"tokens", res.first.tokens},
                          {"vocab", res.first.vocab}};
  stats[cfg.tag_second] = {{"sentences", res.second.sentences},
                           {"tokens", res.second.tokens},
                           {"vocab", res.second.vocab}};
  detail::write_manifest(cfg, "train", {cfg.corpus_first, cfg.corpus_second}, stats);
  return res;
}

// ---------------------------------------------------------------------------
// tag: one hypothesis CTM per grid point.

struct TagResult {
  std::size_t utterances = 0;
  std::vector<std::string> files;
};

namespace detail {

inline std::string lambda_file_name(double lambda) {
  char buf[48];
  std::snprintf(buf, sizeof buf, "hyp_lambda_%.2f.ctm", lambda);
  return buf;
}

}  // namespace detail

inline TagResult run_tag(const RunConfig& cfg) {
  detail::require_path(cfg.out_dir, "out_dir");
  TagPair pair = cfg.tag_pair();
  Corpus ref = load_ctm(detail::require_path(cfg.ref_ctm, "ref_ctm"), pair);
  NGramModel m1 = load_model(detail::require_path(cfg.model_first, "model_first"));
  NGramModel m2 = load_model(detail::require_path(cfg.model_second, "model_second"));

  std::vector<SweepPoint> points = sweep(ref, m1, m2, cfg.sweep);
  TagResult res;
  res.utterances = ref.utterances.size();
  for (const SweepPoint& p : points) {
    std::string name = detail::lambda_file_name(p.lambda);
    if (!res.files.empty() && res.files.back() == name)
      throw ValidationError("lambda grid points collide at two decimals: " + name);
    detail::write_output(cfg, name, ctm_to_string(apply_tags(ref, p.hyps)));
    res.files.push_back(name);
  }
  detail::write_manifest(cfg, "tag", {cfg.ref_ctm, cfg.model_first, cfg.model_second});
  return res;
}

// ---------------------------------------------------------------------------
// evaluate: sweep, DET curves per target plus pooled, analyses at the best
// pooled operating point, all report files, and a one-screen summary.

struct EvaluateResult {
  DetCurve first, second, pooled;
  std::size_t best_index = 0;
  double best_lambda = 0.0;
  WerReport wer_with_tags, wer_words_only;
  SwitchStats ref_switches, hyp_switches;
  DurationHistogram ref_hist, hyp_hist;
  std::vector<ConfusionEntry> confusion;
  std::string summary;
};

namespace detail {

inline std::string eer_line(const DetCurve& c) {
  std::string s = "EER " + c.target.code + ": " + pct(c.eer);
  if (!c.eer_is_exact) s += " (no crossing; closest point)";
  return s;
}

inline std::string evaluate_summary(const RunConfig& cfg, const Corpus& ref,
                                    const EvaluateResult& r) {
  std::ostringstream out;
  char buf[200];
  long long words = 0;
  for (const Utterance& u : ref.utterances) words += (long long)u.words.size();
  out << kToolName << ' ' << kToolVersion << " evaluate\n";
  out << "reference: " << cfg.ref_ctm << " (" << ref.utterances.size()
      << " utterances, " << words << " words)\n";
  std::snprintf(buf, sizeof buf,
                "sweep: %zu lambda points, gamma %.2f, frame %lld ms\n",
                cfg.sweep.lambdas.size(), cfg.sweep.gamma,
                static_cast<long long>(cfg.frame_ms));
  out << buf << '\n';
  out << eer_line(r.first) << '\n';
  out << eer_line(r.second) << '\n';
  out << eer_line(r.pooled) << '\n';
  std::snprintf(buf, sizeof buf, "operating lambda: %.2f (grid point %zu)\n",
                r.best_lambda, r.best_index);
  out << buf << '\n';
  out << "WER with tags: " << pct(r.wer_with_tags.overall.wer());
  out << " (" << cfg.tag_first << ' '
      << pct(r.wer_with_tags.by_class[0].wer());
  out << ", " << cfg.tag_second << ' '
      << pct(r.wer_with_tags.by_class[1].wer());
  out << ", " << cfg.tag_first << '-' << cfg.tag_second << ' '
      << pct(r.wer_with_tags.by_class[2].wer()) << ")\n";
  out << "WER words only: " << pct(r.wer_words_only.overall.wer()) << '\n';
  out << "switches ref: " << r.ref_switches.total
      << "  hyp: " << r.hyp_switches.total;
  if (r.ref_switches.total > 0) {
    std::snprintf(buf, sizeof buf, "  ratio: %.2f",
                  static_cast<double>(r.hyp_switches.total) / r.ref_switches.total);
    out << buf;
  }
  out << '\n';
  out << "segments ref: " << r.ref_hist.total_segments
      << "  hyp: " << r.hyp_hist.total_segments << '\n';
  if (!r.confusion.empty()) {
    out << "\ntop confusions (ref  hyp  count):\n";
    for (const ConfusionEntry& e : r.confusion)
      out << "  " << confusion_label(e.ref_word, e.ref_tag) << "  "
          << confusion_label(e.hyp_word, e.hyp_tag) << "  " << e.count << '\n';
  }
  return out.str();
}

}  // namespace detail

inline EvaluateResult run_evaluate(const RunConfig& cfg) {
  detail::require_path(cfg.out_dir, "out_dir");
  TagPair pair = cfg.tag_pair();
  Corpus ref = load_ctm(detail::require_path(cfg.ref_ctm, "ref_ctm"), pair);
  NGramModel m1 = load_model(detail::require_path(cfg.model_first, "model_first"));
  NGramModel m2 = load_model(detail::require_path(cfg.model_second, "model_second"));

  std::vector<SweepPoint> points = sweep(ref, m1, m2, cfg.sweep);
  EvaluateResult r;
  r.first = det_curve(points, ref, pair.first, cfg.frame_ms);
  r.second = det_curve(points, ref, pair.second, cfg.frame_ms);
  r.pooled = pooled_det_curve(r.first, r.second);
  r.best_index = eer_optimal_index(r.pooled.points);
  r.best_lambda = r.pooled.points[r.best_index].lambda;

  Corpus hyp = apply_tags(ref, points[r.best_index].hyps);
  r.wer_with_tags = wer(ref, hyp, TokenEq::WithTags);
  r.wer_words_only = wer(ref, hyp, TokenEq::WordsOnly);
  r.ref_switches = switch_stats(ref);
  r.hyp_switches = switch_stats(hyp);
  r.ref_hist = duration_histogram(ref, cfg.hist_edges_ms);
  r.hyp_hist = duration_histogram(hyp, cfg.hist_edges_ms);
  std::vector<std::vector<AlignmentOp>> alignments;
  alignments.reserve(ref.utterances.size());
  for (std::size_t u = 0; u < ref.utterances.size(); ++u)
    alignments.push_back(align(utterance_tokens(ref.utterances[u]),
                               utterance_tokens(hyp.utterances[u]), TokenEq::WithTags));
  r.confusion = confusions(alignments, static_cast<std::size_t>(
                                           cfg.top_k > 0 ? cfg.top_k : 0));
  r.summary = detail::evaluate_summary(cfg, ref, r);

  std::ostringstream s;
  write_det_csv(s, r.pooled);
  detail::write_output(cfg, "det.csv", s.str());
  s.str("");
  write_det_csv(s, r.first);
  detail::write_output(cfg, "det_" + pair.first.code + ".csv", s.str());
  s.str("");
  write_det_csv(s, r.second);
  detail::write_output(cfg, "det_" + pair.second.code + ".csv", s.str());
  s.str("");
  std::vector<DetCurve> curves{r.first, r.second, r.pooled};
  write_det_svg(s, curves);
  detail::write_output(cfg, "det.svg", s.str());
  s.str("");
  write_wer_tsv(s, pair, r.wer_with_tags, r.wer_words_only);
  detail::write_output(cfg, "wer.tsv", s.str());
  s.str("");
  write_switches_tsv(s, r.ref_switches, r.hyp_switches);
  detail::write_output(cfg, "switches.tsv", s.str());
  s.str("");
  write_durations_tsv(s, r.ref_hist, r.hyp_hist);
  detail::write_output(cfg, "durations.tsv", s.str());
  s.str("");
  write_confusions_tsv(s, r.confusion);
  detail::write_output(cfg, "confusions.tsv", s.str());
  detail::write_output(cfg, "summary.txt", r.summary);
  detail::write_manifest(cfg, "evaluate",
                         {cfg.ref_ctm, cfg.model_first, cfg.model_second});
  return r;
}

// ---------------------------------------------------------------------------
// analyze: the same reports for an externally produced hypothesis CTM.

struct AnalyzeResult {
  WerReport wer_with_tags, wer_words_only;
  SwitchStats ref_switches, hyp_switches;
  DurationHistogram ref_hist, hyp_hist;
  std::vector<ConfusionEntry> confusion;
  std::string summary;
};

inline AnalyzeResult run_analyze(const RunConfig& cfg) {
  detail::require_path(cfg.out_dir, "out_dir");
  TagPair pair = cfg.tag_pair();
  Corpus ref = load_ctm(detail::require_path(cfg.ref_ctm, "ref_ctm"), pair);
  Corpus hyp = load_ctm(detail::require_path(cfg.hyp_ctm, "hyp_ctm"), pair);

  AnalyzeResult r;
  r.wer_with_tags = wer(ref, hyp, TokenEq::WithTags);
  r.wer_words_only = wer(ref, hyp, TokenEq::WordsOnly);
  r.ref_switches = switch_stats(ref);
  r.hyp_switches = switch_stats(hyp);
  r.ref_hist = duration_histogram(ref, cfg.hist_edges_ms);
  r.hyp_hist = duration_histogram(hyp, cfg.hist_edges_ms);
  std::vector<std::vector<AlignmentOp>> alignments;
  for (std::size_t u = 0; u < ref.utterances.size(); ++u)
    alignments.push_back(align(utterance_tokens(ref.utterances[u]),
                               utterance_tokens(hyp.utterances[u]), TokenEq::WithTags));
  r.confusion = confusions(alignments, static_cast<std::size_t>(
                                           cfg.top_k > 0 ? cfg.top_k : 0));

  std::ostringstream sum;
  sum << kToolName << ' ' << kToolVersion << " analyze\n";
  sum << "reference: " << cfg.ref_ctm << "\nhypothesis: " << cfg.hyp_ctm << "\n\n";
  sum << "WER with tags: " << detail::pct(r.wer_with_tags.overall.wer()) << '\n';
  sum << "WER words only: " << detail::pct(r.wer_words_only.overall.wer()) << '\n';
  sum << "switches ref: " << r.ref_switches.total << "  hyp: " << r.hyp_switches.total
      << '\n';
  r.summary = sum.str();

  std::ostringstream s;
  write_wer_tsv(s, pair, r.wer_with_tags, r.wer_words_only);
  detail::write_output(cfg, "wer.tsv", s.str());
  s.str("");
  write_switches_tsv(s, r.ref_switches, r.hyp_switches);
  detail::write_output(cfg, "switches.tsv", s.str());
  s.str("");
  write_durations_tsv(s, r.ref_hist, r.hyp_hist);
  detail::write_output(cfg, "durations.tsv", s.str());
  s.str("");
  write_confusions_tsv(s, r.confusion);
  detail::write_output(cfg, "confusions.tsv", s.str());
  detail::write_output(cfg, "summary.txt", r.summary);
  detail::write_manifest(cfg, "analyze", {cfg.ref_ctm, cfg.hyp_ctm});
  return r;
}

// ---------------------------------------------------------------------------
// generate: sample sentences from a serialized model.

struct GenerateResult {
  long long sentences = 0;
  long long tokens = 0;
  long long tagged_tokens = 0;
  long long switches = 0;  // adjacent tagged tokens with different tags
  std::array<long long, 2> tag_tokens{0, 0};
  std::string file = "generated.txt";
};

inline GenerateResult run_generate(const RunConfig& cfg) {
  detail::require_path(cfg.out_dir, "out_dir");
  NGramModel m = load_model(detail::require_path(cfg.model, "model"));
  if (cfg.gen_count < 1) throw ValidationError("gen_count must be at least 1");
  if (cfg.gen_max_len < 1) throw ValidationError("gen_max_len must be at least 1");

  GenerateResult r;
  TagPair pair = cfg.tag_pair();
  std::mt19937_64 rng(cfg.seed);
  std::ostringstream text;
  for (long long i = 0; i < cfg.gen_count; ++i) {
    std::vector<std::string> sent =
        sample_sentence(m, static_cast<std::size_t>(cfg.gen_max_len), rng);
    ++r.sentences;
    r.tokens += static_cast<long long>(sent.size());
    std::optional<LanguageTag> prev;
    for (std::size_t k = 0; k < sent.size(); ++k) {
      if (k) text << ' ';
      text << sent[k];
      std::size_t bar = sent[k].rfind('|');
      std::optional<LanguageTag> tag;
      if (bar != std::string::npos && bar > 0 &&
          LanguageTag::valid(std::string_view(sent[k]).substr(bar + 1)))
        tag = LanguageTag{sent[k].substr(bar + 1)};
      if (tag) {
        ++r.tagged_tokens;
        if (pair.contains(*tag)) ++r.tag_tokens[pair.index_of(*tag)];
        if (prev && !(*prev == *tag)) ++r.switches;
      }
      prev = tag;
    }
    text << '\n';
  }
  detail::write_output(cfg, r.file, text.str());

  nlohmann::json stats;
  stats["sentences"] = r.sentences;
  stats["tokens"] = r.tokens;
  stats["tagged_tokens"] = r.tagged_tokens;
  stats["switches"] = r.switches;
  stats[cfg.tag_first] = r.tag_tokens[0];
  stats[cfg.tag_second] = r.tag_tokens[1];
  detail::write_manifest(cfg, "generate", {cfg.model}, stats);
  return r;
}

}  // namespace csdet
