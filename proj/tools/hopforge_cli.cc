// Copyright 2026 The Hopforge Authors
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

// hopforge command line: corpus ingestion, indexing, the iterative retrieval
// pipeline, training-data builders, evaluation and sampling schedules.

#include <cstdlib>
#include <fstream>
#include <iostream>
#include <map>
#include <memory>
#include <random>
#include <string>

#include <spdlog/spdlog.h>

#include "CLI11.hpp"
#include "hopforge/config.h"
#include "hopforge/context_assembly.h"
#include "hopforge/corpus_store.h"
#include "hopforge/dense_index.h"
#include "hopforge/eval_metrics.h"
#include "hopforge/hnsw_index.h"
#include "hopforge/iterator_pipeline.h"
#include "hopforge/multitask_sampler.h"
#include "hopforge/qa_data_factory.h"
#include "hopforge/remote_scorer.h"
#include "hopforge/retrieval_train_builder.h"
#include "hopforge/scorer_service.h"
#include "hopforge/scorers.h"
#include "hopforge/synthetic_numeric.h"
#include "json.hpp"

namespace {

using namespace hopforge;
using nlohmann::json;

std::ifstream open_in(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open " + path);
  return in;
}

std::ofstream open_out(const std::string& path) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot write " + path);
  return out;
}

// Scorer backends: HOPFORGE_SCORER_URL wins, then --scorer.
struct Backends {
  std::unique_ptr<Embedder> embedder;
  std::unique_ptr<ParagraphScorer> reranker;
  std::unique_ptr<EvidenceScorer> evidence;
};

Backends make_backends(const std::string& scorer, std::size_t dim, std::uint64_t seed,
                       const std::string& gold_path) {
  Backends b;
  if (const char* url = std::getenv(kScorerUrlEnv); url && *url) {
    spdlog::info("using remote scorers at {}", url);
    auto client = std::make_shared<const RemoteScorerClient>(url);
    b.embedder = std::make_unique<RemoteEmbedder>(client);
    b.reranker = std::make_unique<RemoteParagraphScorer>(client);
    b.evidence = std::make_unique<RemoteEvidenceScorer>(client);
    return b;
  }
  b.embedder = std::make_unique<StubEmbedder>(dim, seed);
  if (scorer == "oracle") {
    if (gold_path.empty()) throw CLI::ValidationError("--gold", "oracle scorers need --gold");
    auto gold = GoldAnnotations::load_jsonl(gold_path);
    b.reranker = std::make_unique<OracleParagraphScorer>(gold);
    b.evidence = std::make_unique<OracleEvidenceScorer>(gold);
  } else {
    b.reranker = std::make_unique<StubParagraphScorer>();
    b.evidence = std::make_unique<StubEvidenceScorer>();
  }
  return b;
}

LabelledParagraph labelled_from_json(const json& j) {
  LabelledParagraph p;
  p.title = j.value("title", std::string());
  p.sentences = j.at("sentences").get<std::vector<std::string>>();
  if (j.contains("gold")) p.gold = j["gold"].get<std::vector<std::size_t>>();
  return p;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"hopforge: iterative multi-hop retrieval and QA data tooling"};
  app.require_subcommand(1);
  std::string log_level = "info";
  app.add_option("--log-level", log_level, "trace|debug|info|warn|error|off");

  // ingest -----------------------------------------------------------------
  auto* ingest = app.add_subcommand("ingest", "Split and filter a JSONL document dump into a corpus");
  std::string ingest_in, ingest_out;
  ingest->add_option("--input", ingest_in, "Documents JSONL {id,title,paras:[{text,links}]}")->required();
  ingest->add_option("--out", ingest_out, "Corpus directory")->required();

  // index ------------------------------------------------------------------
  auto* index = app.add_subcommand("index", "Embed every paragraph into a vector file");
  std::string index_corpus, index_out;
  std::size_t dim = 64, batch = 64;
  std::uint64_t seed = 0;
  index->add_option("--corpus", index_corpus, "Corpus directory")->required();
  index->add_option("--out", index_out, "Vector file")->required();
  index->add_option("--dim", dim, "Stub embedding dimension");
  index->add_option("--seed", seed, "Stub embedding seed");
  index->add_option("--batch", batch, "Embedding batch size");

  // run --------------------------------------------------------------------
  auto* run = app.add_subcommand("run", "Run the iterative retriever over a question file");
  std::string run_corpus, run_vectors, run_questions, run_out, run_trace, run_config, gold_path;
  std::string scorer = "stub", backend = "flat";
  std::optional<std::size_t> run_k, run_tmax, run_workers;
  run->add_option("--corpus", run_corpus, "Corpus directory")->required();
  run->add_option("--vectors", run_vectors, "Vector file from `index`")->required();
  run->add_option("--questions", run_questions, "Questions JSONL {id,question,initial_paragraph?,answer?}")
      ->required();
  run->add_option("--out", run_out, "Context JSONL output")->required();
  run->add_option("--trace", run_trace, "Per-hop trace JSONL output");
  run->add_option("--config", run_config, "key=value config file");
  run->add_option("--k", run_k, "Paragraphs retrieved per hop (150; 25 in-domain; 60 for RATD)");
  run->add_option("--tmax", run_tmax, "Number of hops");
  run->add_option("--workers", run_workers, "Concurrent queries");
  run->add_option("--scorer", scorer, "stub|oracle (ignored when HOPFORGE_SCORER_URL is set)")
      ->check(CLI::IsMember({"stub", "oracle"}));
  run->add_option("--gold", gold_path, "Gold annotations JSONL for --scorer oracle");
  run->add_option("--index", backend, "flat|hnsw")->check(CLI::IsMember({"flat", "hnsw"}));
  run->add_option("--dim", dim, "Stub embedding dimension");
  run->add_option("--seed", seed, "Stub embedding seed");

  // build-ratd -------------------------------------------------------------
  auto* ratd = app.add_subcommand("build-ratd", "Turn `run` output into RATD QA samples");
  std::string ratd_in, ratd_out, ratd_dataset = "ratd", ratd_variant = "full";
  ratd->add_option("--contexts", ratd_in, "Output of `run` (records need an answer)")->required();
  ratd->add_option("--out", ratd_out, "QA sample JSONL")->required();
  ratd->add_option("--dataset", ratd_dataset, "Dataset name prefix");
  ratd->add_option("--variant", ratd_variant, "full|max4paras")->check(CLI::IsMember({"full", "max4paras"}));

  // build-retrieval-data ---------------------------------------------------
  auto* rdata = app.add_subcommand("build-retrieval-data",
                                   "Expand reasoning paths into retriever, reranker and evidence samples");
  std::string rdata_corpus, rdata_paths, rdata_prefix;
  rdata->add_option("--corpus", rdata_corpus, "Corpus directory")->required();
  rdata->add_option("--paths", rdata_paths, "Paths JSONL {id,question,path,gold_sentences?,negatives?}")
      ->required();
  rdata->add_option("--out-prefix", rdata_prefix, "Writes PREFIX.{retrieval,reranker,evidence}.jsonl")
      ->required();

  // build-qa-data ----------------------------------------------------------
  auto* qa = app.add_subcommand("build-qa-data", "Emit QA training samples");
  std::string qa_mode, qa_in, qa_out, qa_dataset = "qa", qa_corpus;
  std::size_t qa_count = 1000;
  qa->add_option("--mode", qa_mode,
                 "synthetic-numeric|opendomain|goldplusdistractors|unanswerable|selfsupervised")
      ->required()
      ->check(CLI::IsMember(
          {"synthetic-numeric", "opendomain", "goldplusdistractors", "unanswerable", "selfsupervised"}));
  qa->add_option("--input", qa_in, "Input JSONL (opendomain, goldplusdistractors, unanswerable)");
  qa->add_option("--corpus", qa_corpus, "Corpus directory (selfsupervised)");
  qa->add_option("--out", qa_out, "QA sample JSONL")->required();
  qa->add_option("--dataset", qa_dataset, "Dataset name prefix");
  qa->add_option("--count", qa_count, "Samples to generate (synthetic-numeric, selfsupervised)");
  qa->add_option("--seed", seed, "RNG seed");

  // eval -------------------------------------------------------------------
  auto* eval = app.add_subcommand("eval", "Score predictions against gold answers");
  std::string eval_gold, eval_pred, eval_compare;
  bool strict_em = false;
  std::size_t resamples = 10000;
  eval->add_option("--gold", eval_gold, "Gold JSONL {id,gold,type,options?}")->required();
  eval->add_option("--pred", eval_pred, "Predictions JSONL {id,prediction}")->required();
  eval->add_option("--compare", eval_compare, "Second predictions file for a paired bootstrap");
  eval->add_flag("--strict-sentence-em", strict_em, "Sentence EM requires exact set equality");
  eval->add_option("--resamples", resamples, "Bootstrap resamples");
  eval->add_option("--seed", seed, "Bootstrap seed");

  // sample-schedule --------------------------------------------------------
  auto* sched = app.add_subcommand("sample-schedule", "Simulate the multitask sampling schedule");
  std::string sched_tasks, sched_acc, sched_log;
  int stage = 1;
  std::size_t draws = 100000;
  sched->add_option("--tasks", sched_tasks, "Task manifest JSONL {name,group,sample_count?,stage2_only?}")
      ->required();
  sched->add_option("--accuracy", sched_acc, "JSON object of task -> last dev accuracy");
  sched->add_option("--stage", stage, "1 or 2")->check(CLI::IsMember({1, 2}));
  sched->add_option("--draws", draws, "Number of draws");
  sched->add_option("--seed", seed, "RNG seed");
  sched->add_option("--log", sched_log, "Write one drawn task name per line");

  // serve-stub -------------------------------------------------------------
  auto* serve = app.add_subcommand("serve-stub", "Serve the deterministic stub scorers over HTTP");
  std::string host = "127.0.0.1";
  int port = 8008;
  std::size_t max_batch = 256;
  serve->add_option("--host", host);
  serve->add_option("--port", port);
  serve->add_option("--dim", dim, "Embedding dimension");
  serve->add_option("--seed", seed, "Embedding seed");
  serve->add_option("--max-batch", max_batch, "Largest accepted batch (413 above)");

  CLI11_PARSE(app, argc, argv);
  spdlog::set_level(spdlog::level::from_str(log_level));

  try {
    if (*ingest) {
      auto in = open_in(ingest_in);
      auto store = CorpusStore::ingest_jsonl(in);
      store.save(ingest_out);
      spdlog::info("{} documents, {} paragraphs", store.documents().size(), store.size());
    } else if (*index) {
      auto store = CorpusStore::load(index_corpus);
      auto backends = make_backends("stub", dim, seed, "");
      auto matrix = build_index(store, *backends.embedder, batch);
      matrix.save(index_out);
      spdlog::info("indexed {} paragraphs at dim {}", matrix.size(), matrix.dim());
    } else if (*run) {
      auto store = CorpusStore::load(run_corpus);
      auto matrix = std::make_shared<const EmbeddingMatrix>(EmbeddingMatrix::load(run_vectors));
      std::unique_ptr<VectorSearcher> searcher;
      if (backend == "hnsw") {
        searcher = std::make_unique<HnswIndex>(matrix);
      } else {
        searcher = std::make_unique<FlatIndex>(matrix);
      }
      PipelineConfig cfg;
      if (!run_config.empty()) cfg = pipeline_config_from(KeyValueConfig::load(run_config));
      if (run_k) cfg.k = *run_k;
      if (run_tmax) cfg.t_max = *run_tmax;
      if (run_workers) cfg.workers = *run_workers;
      if (!run_config.empty() || run_k || run_tmax || run_workers) cfg.validate();
      auto backends = make_backends(scorer, matrix->dim(), seed, gold_path);
      Iterator it(store, *searcher, *backends.embedder, *backends.reranker, *backends.evidence, cfg);
      auto in = open_in(run_questions);
      auto out = open_out(run_out);
      std::ofstream trace;
      if (!run_trace.empty()) trace = open_out(run_trace);
      const auto failed = it.run_batch(in, out, run_trace.empty() ? nullptr : &trace);
      if (failed) spdlog::warn("{} queries failed", failed);
      return failed ? 2 : 0;
    } else if (*ratd) {
      auto in = open_in(ratd_in);
      auto out = open_out(ratd_out);
      const auto variant = ratd_variant == "full" ? RatdVariant::kFull : RatdVariant::kMax4Paras;
      std::size_t written = 0, skipped = 0;
      for (std::string line; std::getline(in, line);) {
        if (line.empty()) continue;
        const auto j = json::parse(line);
        if (j.contains("error") || !j.contains("answer")) {
          ++skipped;
          continue;
        }
        PackedContext packed;
        packed.context = j.at("context").get<std::string>();
        for (const auto& f : j.at("fragments")) {
          Fragment frag;
          frag.title = f.at("title").get<std::string>();
          frag.text = f.at("text").get<std::string>();
          frag.order_score = f.at("order_score").get<double>();
          packed.fragments.push_back(std::move(frag));
        }
        if (j.contains("initial_paragraph")) {
          packed.initial = InitialParagraph{j["initial_paragraph"].value("title", std::string()),
                                            j["initial_paragraph"].at("text").get<std::string>()};
        }
        try {
          out << qa_sample_record(emit_ratd(j.at("question").get<std::string>(),
                                            j.at("answer").get<std::string>(), packed, variant,
                                            ratd_dataset))
              << '\n';
          ++written;
        } catch (const DataFactoryError& e) {
          spdlog::warn("skipping {}: {}", j.value("id", std::string()), e.what());
          ++skipped;
        }
      }
      spdlog::info("{} RATD samples written, {} skipped", written, skipped);
    } else if (*rdata) {
      auto store = CorpusStore::load(rdata_corpus);
      auto in = open_in(rdata_paths);
      auto retrieval = open_out(rdata_prefix + ".retrieval.jsonl");
      auto reranker = open_out(rdata_prefix + ".reranker.jsonl");
      auto evidence = open_out(rdata_prefix + ".evidence.jsonl");
      std::size_t paths = 0;
      for (std::string line; std::getline(in, line);) {
        if (line.empty()) continue;
        const auto path = parse_path_line(line);
        for (auto& s : expand_path(path, store)) {
          retrieval << retrieval_sample_record(attach_negatives(std::move(s), path, store)) << '\n';
        }
        for (const auto& pair : build_reranker_samples(path, store)) {
          for (const auto& r : pair_records(pair)) reranker << r << '\n';
        }
        for (const auto& pair : build_evidence_samples(path, store)) {
          for (const auto& r : pair_records(pair)) evidence << r << '\n';
        }
        ++paths;
      }
      spdlog::info("expanded {} reasoning paths", paths);
    } else if (*qa) {
      auto out = open_out(qa_out);
      std::mt19937_64 rng(seed);
      if (qa_mode == "synthetic-numeric") {
        const auto& kinds = all_numeric_kinds();
        for (std::size_t i = 0; i < qa_count; ++i) {
          out << qa_sample_record(gen_synthetic_numeric(kinds[i % kinds.size()], rng).sample) << '\n';
        }
      } else if (qa_mode == "selfsupervised") {
        if (qa_corpus.empty()) throw CLI::ValidationError("--corpus", "selfsupervised needs a corpus");
        auto store = CorpusStore::load(qa_corpus);
        if (store.empty()) throw std::runtime_error("corpus is empty");
        std::uniform_int_distribution<std::size_t> pick(0, store.size() - 1);
        for (std::size_t i = 0; i < qa_count; ++i) {
          std::vector<std::string> paras;
          for (std::size_t j = 0, start = pick(rng); j < 16 && j < store.size(); ++j) {
            paras.push_back(store.paragraphs()[(start + j) % store.size()].text);
          }
          out << qa_sample_record(build_selfsupervised(paras, rng, qa_dataset + "_selfsupervised").sample)
              << '\n';
        }
      } else {
        if (qa_in.empty()) throw CLI::ValidationError("--input", qa_mode + " needs --input");
        auto in = open_in(qa_in);
        for (std::string line; std::getline(in, line);) {
          if (line.empty()) continue;
          const auto j = json::parse(line);
          const auto question = j.at("question").get<std::string>();
          std::vector<QaOption> options;
          if (j.contains("options")) options = lettered_options(j["options"].get<std::vector<std::string>>());
          if (qa_mode == "opendomain") {
            out << qa_sample_record(emit_opendomain(question, j.at("answer").get<std::string>(),
                                                    qa_dataset, options))
                << '\n';
            continue;
          }
          std::vector<LabelledParagraph> golds, negatives;
          for (const auto& g : j.at("golds")) golds.push_back(labelled_from_json(g));
          if (j.contains("negatives")) {
            for (const auto& n : j["negatives"]) negatives.push_back(labelled_from_json(n));
          }
          std::mt19937_64 local(text::seed_for(j.value("id", question), qa_mode) ^ seed);
          const auto build =
              qa_mode == "goldplusdistractors"
                  ? build_goldplusdistractors(question, j.at("answer").get<std::string>(), golds,
                                              negatives, local, qa_dataset, {}, options)
                  : build_unanswerable(question, golds, negatives, local, qa_dataset, {}, options);
          out << qa_sample_record(build.sample) << '\n';
        }
      }
    } else if (*eval) {
      auto gin = open_in(eval_gold);
      auto pin = open_in(eval_pred);
      const auto gold = load_gold_jsonl(gin);
      const auto a = evaluate(gold, load_predictions_jsonl(pin), strict_em);
      if (eval_compare.empty()) {
        std::cout << evaluation_report(a) << '\n';
      } else {
        auto cin2 = open_in(eval_compare);
        const auto b = evaluate(gold, load_predictions_jsonl(cin2), strict_em);
        const auto boot = paired_bootstrap(a.scores, b.scores, resamples, seed);
        std::cout << evaluation_report(a, &boot) << '\n';
      }
    } else if (*sched) {
      auto tin = open_in(sched_tasks);
      auto tasks = load_task_manifest(tin);
      if (!sched_acc.empty()) {
        auto ain = open_in(sched_acc);
        apply_accuracies(tasks, ain);
      }
      Schedule schedule;
      schedule.stage = stage;
      std::mt19937_64 rng(seed);
      std::map<std::string, std::size_t> counts;
      std::map<std::string, std::size_t> groups;
      std::ofstream log;
      if (!sched_log.empty()) log = open_out(sched_log);
      for (std::size_t i = 0; i < draws; ++i) {
        const auto& t = next_task(schedule, tasks, rng);
        ++counts[t.name];
        ++groups[std::string(to_string(t.group))];
        if (log) log << t.name << '\n';
      }
      json report{{"stage", stage}, {"draws", draws}};
      for (const auto& [name, n] : counts) report["tasks"][name] = static_cast<double>(n) / draws;
      for (const auto& [name, n] : groups) report["groups"][name] = static_cast<double>(n) / draws;
      std::cout << report.dump(2) << '\n';
    } else if (*serve) {
      StubEmbedder embedder(dim, seed);
      StubParagraphScorer reranker;
      StubEvidenceScorer evidence;
      ScorerService service(embedder, reranker, evidence, max_batch);
      spdlog::info("serving stub scorers on {}:{}", host, port);
      service.serve(host, port);
    }
  } catch (const CLI::Error& e) {
    return app.exit(e);
  } catch (const std::exception& e) {
    spdlog::error("{}", e.what());
    return 1;
  }
  return 0;
}
