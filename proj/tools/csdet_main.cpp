// tools/csdet_main.cpp

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

// Command-line front end.  A run is configured by an optional key=value file
// (--config) plus flags; flags always win, regardless of argument order.
// Exit codes: 0 success, 1 internal error, 2 bad input or bad usage.

#include <cstdio>
#include <exception>
#include <string>
#include <string_view>

#include <CLI11.hpp>

#include "csdet/pipeline.hpp"
#include "csdet/version.hpp"

namespace {

// The config file must load before CLI11 assigns any flag values, so the
// --config argument is pulled out of argv by hand first.
std::string prescan_config_path(int argc, char** argv) {
  for (int i = 1; i < argc; ++i) {
    std::string_view a = argv[i];
    if (a == "--config" || a == "-c") {
      if (i + 1 < argc) return argv[i + 1];
    } else if (a.rfind("--config=", 0) == 0) {
      return std::string(a.substr(9));
    }
  }
  return "";
}

void add_tag_flags(CLI::App* cmd, csdet::RunConfig& cfg) {
  cmd->add_option("--tag-first", cfg.tag_first, "language tag of the first model");
  cmd->add_option("--tag-second", cfg.tag_second, "language tag of the second model");
}

void add_out_flag(CLI::App* cmd, csdet::RunConfig& cfg) {
  cmd->add_option("-o,--out", cfg.out_dir, "output directory")->required(false);
}

}  // namespace

int main(int argc, char** argv) {
  csdet::RunConfig cfg;
  std::string config_path = prescan_config_path(argc, argv);

  CLI::App app{"code-switching detection toolkit"};
  app.set_version_flag("--version",
                       std::string(csdet::kToolName) + " " + csdet::kToolVersion);
  app.require_subcommand(1);
  std::string config_dummy;
  app.add_option("-c,--config", config_dummy,
                 "key=value run configuration file; flags override it");

  int lambda_points = 0;

  CLI::App* train = app.add_subcommand("train", "train n-gram models from text");
  train->add_option("--corpus-first,--corpus-fy", cfg.corpus_first,
                    "training text for the first language");
  train->add_option("--corpus-second,--corpus-nl", cfg.corpus_second,
                    "training text for the second language");
  train->add_option("--order", cfg.order, "n-gram order");
  train->add_option("--discount", cfg.discounts,
                    "fixed discount(s); omit to estimate from counts");
  train->add_flag("--bilingual", cfg.bilingual, "also train a pooled model");
  add_tag_flags(train, cfg);
  add_out_flag(train, cfg);

  CLI::App* tag = app.add_subcommand("tag", "tag a reference ctm over the lambda grid");
  tag->add_option("--ref", cfg.ref_ctm, "reference ctm file");
  tag->add_option("--model-first", cfg.model_first, "model for the first language");
  tag->add_option("--model-second", cfg.model_second, "model for the second language");
  tag->add_option("--gamma", cfg.sweep.gamma, "switch penalty");
  tag->add_option("--lambda-points", lambda_points,
                  "evenly spaced lambda grid size (at least 2)");
  add_tag_flags(tag, cfg);
  add_out_flag(tag, cfg);

  CLI::App* evaluate =
      app.add_subcommand("evaluate", "sweep lambda, compute det curves and reports");
  evaluate->add_option("--ref", cfg.ref_ctm, "reference ctm file");
  evaluate->add_option("--model-first", cfg.model_first, "model for the first language");
  evaluate->add_option("--model-second", cfg.model_second,
                       "model for the second language");
  evaluate->add_option("--gamma", cfg.sweep.gamma, "switch penalty");
  evaluate->add_option("--lambda-points", lambda_points,
                       "evenly spaced lambda grid size (at least 2)");
  evaluate->add_option("--frame-ms", cfg.frame_ms, "frame length in milliseconds");
  evaluate->add_option("--top-k", cfg.top_k, "confusion list size, 0 for all");
  add_tag_flags(evaluate, cfg);
  add_out_flag(evaluate, cfg);

  CLI::App* analyze =
      app.add_subcommand("analyze", "compare a hypothesis ctm against a reference");
  analyze->add_option("--ref", cfg.ref_ctm, "reference ctm file");
  analyze->add_option("--hyp", cfg.hyp_ctm, "hypothesis ctm file");
  analyze->add_option("--top-k", cfg.top_k, "confusion list size, 0 for all");
  add_tag_flags(analyze, cfg);
  add_out_flag(analyze, cfg);

  CLI::App* generate = app.add_subcommand("generate", "sample sentences from a model");
  generate->add_option("--model", cfg.model, "model file to sample from");
  generate->add_option("--n", cfg.gen_count, "number of sentences");
  generate->add_option("--max-len", cfg.gen_max_len, "maximum sentence length");
  generate->add_option("--seed", cfg.seed, "random seed");
  add_tag_flags(generate, cfg);
  add_out_flag(generate, cfg);

  for (CLI::App* cmd : {train, tag, evaluate, analyze, generate}) cmd->fallthrough();

  try {
    if (!config_path.empty()) cfg = csdet::load_config(config_path);
    app.parse(argc, argv);
    if (lambda_points != 0) {
      if (lambda_points < 2)
        throw csdet::ValidationError("--lambda-points must be at least 2");
      cfg.sweep.lambdas.clear();
      for (int i = 0; i < lambda_points; ++i)
        cfg.sweep.lambdas.push_back(static_cast<double>(i) / (lambda_points - 1));
    }

    if (*train) {
      csdet::TrainResult r = csdet::run_train(cfg);
      for (const std::string& f : r.files)
        std::printf("wrote %s/%s\n", cfg.out_dir.c_str(), f.c_str());
    } else if (*tag) {
      csdet::TagResult r = csdet::run_tag(cfg);
      std::printf("tagged %zu utterances at %zu lambda points in %s\n",
                  r.utterances, r.files.size(), cfg.out_dir.c_str());
    } else if (*evaluate) {
      csdet::EvaluateResult r = csdet::run_evaluate(cfg);
      std::fputs(r.summary.c_str(), stdout);
      std::printf("reports written to %s\n", cfg.out_dir.c_str());
    } else if (*analyze) {
      csdet::AnalyzeResult r = csdet::run_analyze(cfg);
      std::fputs(r.summary.c_str(), stdout);
      std::printf("reports written to %s\n", cfg.out_dir.c_str());
    } else if (*generate) {
      csdet::GenerateResult r = csdet::run_generate(cfg);
      std::printf("wrote %lld sentences (%lld tokens) to %s/%s\n", r.sentences,
                  r.tokens, cfg.out_dir.c_str(), r.file.c_str());
    }
    return 0;
  } catch (const CLI::CallForHelp& e) {
    app.exit(e);
    return 0;
  } catch (const CLI::CallForVersion& e) {
    app.exit(e);
    return 0;
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return 2;
  } catch (const csdet::InputError& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return 2;
  } catch (const std::exception& e) {
    std::fprintf(stderr, "internal error: %s\n", e.what());
    return 1;
  }
}
