// sifkit command-line tool.
//
// Exit codes: 0 success, 1 usage error, 2 data or IO error, 3 validation
// failures present.

#include <chrono>
#include <fstream>
#include <iostream>
#include <memory>

#include "CLI11.hpp"
#include "sifkit/dataset.h"
#include "sifkit/embedding.h"
#include "sifkit/error.h"
#include "sifkit/formula.h"
#include "sifkit/metrics.h"
#include "sifkit/pipeline.h"
#include "sifkit/segment.h"
#include "sifkit/sif.h"
#include "sifkit/tokenizer.h"
#include "sifkit/vocab.h"

namespace {

using nlohmann::json;
using namespace sifkit;

constexpr int kOk = 0;
constexpr int kUsage = 1;
constexpr int kData = 2;
constexpr int kInvalid = 3;

// Writes to a file, or stdout for "" and "-".
class Output {
 public:
  explicit Output(const std::string& path) {
    if (path.empty() || path == "-") return;
    file_ = std::make_unique<std::ofstream>(path, std::ios::binary);
    if (!*file_) throw Error(ErrorCode::IoError, "cannot write " + path);
  }
  std::ostream& os() { return file_ ? *file_ : std::cout; }
  void line(const json& j) { os() << j.dump() << '\n'; }

 private:
  std::unique_ptr<std::ofstream> file_;
};

int exit_code_for(const Error& e) {
  switch (e.code()) {
    case ErrorCode::InvalidArgument:
    case ErrorCode::BadParams:
    case ErrorCode::UnknownStep:
    case ErrorCode::BadPosition:
      return kUsage;
    default:
      return kData;
  }
}

json id_json(const SifItem& it) { return it.id ? json(*it.id) : json(nullptr); }

struct TokOpts {
  std::string tokenizer = "pure_text";
  std::string symbol;
  std::string formula;
  bool distinct_marks = false;
  std::string stopwords;

  void add(CLI::App* cmd) {
    cmd->add_option("--tokenizer", tokenizer, "pure_text, ast_formula or custom")
        ->check(CLI::IsMember({"pure_text", "ast_formula", "custom"}));
    cmd->add_option("--symbol", symbol, "kinds to mask, subset of tfgm");
    cmd->add_option("--formula", formula, "custom mode: linear or ast")->check(CLI::IsMember({"linear", "ast"}));
    cmd->add_flag("--distinct-marks", distinct_marks, "custom mode: keep [BLANK] [CHOICE] [TAG] [SEP] apart");
    cmd->add_option("--stopwords", stopwords, "stopword file");
  }

  TokenizerConfig config() const {
    auto c = TokenizerConfig::named(tokenizer);
    c.symbol = symbol;
    if (formula == "ast") c.formula = FormulaMode::Ast;
    if (formula == "linear") c.formula = FormulaMode::Linear;
    c.distinct_marks = distinct_marks;
    if (!stopwords.empty()) c.text.stopwords = load_stopwords(stopwords);
    return c.normalized();
  }
};

// Token lists from a JSONL file of items, or of {"tokens": [...]} records.
std::vector<std::vector<std::string>> load_token_lists(const std::string& path, const TokenizerConfig& cfg,
                                                       int workers) {
  const auto rows = read_json_lines(path);
  std::vector<std::vector<std::string>> out;
  std::vector<SifItem> items;
  bool pretokenized = !rows.empty() && rows.front().contains("tokens");
  for (std::size_t i = 0; i < rows.size(); ++i) {
    if (pretokenized) {
      try {
        out.push_back(rows[i].at("tokens").get<std::vector<std::string>>());
      } catch (const json::exception& e) {
        throw Error(ErrorCode::MalformedJson, "line " + std::to_string(i + 1) + ": " + e.what(), i + 1);
      }
    } else {
      try {
        items.push_back(item_from_json(rows[i]));
      } catch (const Error& e) {
        throw Error(e.code(), "record " + std::to_string(i + 1) + ": " + e.detail(), i + 1);
      }
    }
  }
  if (pretokenized) return out;
  for (auto& s : tokenize_all(items, cfg, workers)) out.push_back(std::move(s.tokens));
  return out;
}

json report_entry(const ValidationReport& r) { return report_to_json(r); }

int cmd_validate(const std::string& input, const std::string& report_path, bool skip_bad) {
  auto data = read_jsonl(input, skip_bad);
  Output out(report_path);
  std::size_t invalid = 0;
  for (std::size_t i = 0; i < data.items.size(); ++i) {
    const auto& it = data.items[i];
    const auto rep = validate(it.content);
    bool ok = rep.valid;
    json j = {{"id", id_json(it)}, {"line", data.lines[i]}, {"content", report_entry(rep)}};
    if (it.options) {
      json opts = json::array();
      for (const auto& o : *it.options) {
        const auto r = validate(o);
        ok = ok && r.valid;
        opts.push_back(report_entry(r));
      }
      j["options"] = opts;
    }
    j["valid"] = ok;
    invalid += !ok;
    if (!report_path.empty()) out.line(j);
  }
  std::cerr << data.items.size() << " items, " << invalid << " invalid";
  if (!data.rejects.empty()) std::cerr << ", " << data.rejects.size() << " unreadable lines skipped";
  std::cerr << "\n";
  return invalid ? kInvalid : kOk;
}

int cmd_convert(const std::string& input, const std::string& output, bool skip_bad) {
  auto data = read_jsonl(input, skip_bad);
  Output out(output);
  std::size_t failed = 0;
  for (std::size_t i = 0; i < data.items.size(); ++i) {
    auto it = data.items[i];
    try {
      it.content = to_sif(it.content);
      if (it.options)
        for (auto& o : *it.options) o = to_sif(o);
      out.line(item_to_json(it));
    } catch (const Error& e) {
      ++failed;
      std::cerr << "line " << data.lines[i] << ": " << e.what() << "\n";
    }
  }
  std::cerr << data.items.size() - failed << " converted, " << failed << " unconvertible\n";
  return failed ? kInvalid : kOk;
}

int cmd_tokenize(const std::string& input, const std::string& output, const TokOpts& tok, int workers,
                 bool skip_bad) {
  const auto cfg = tok.config();
  auto data = read_jsonl(input, skip_bad);
  const auto seqs = tokenize_all(data.items, cfg, workers);
  Output out(output);
  for (std::size_t i = 0; i < seqs.size(); ++i) out.line({{"id", id_json(data.items[i])}, {"tokens", seqs[i].tokens}});
  return kOk;
}

int cmd_vocab(const std::string& input, const std::string& output, int min_count, const TokOpts& tok, int workers) {
  TokenCounter counter;
  for (const auto& s : load_token_lists(input, tok.config(), workers)) counter.add(s);
  const auto v = build_vocab(counter, min_count);
  if (output.empty() || output == "-") std::cout << vocab_to_string(v);
  else save_vocab(v, output);
  std::cerr << v.size() << " tokens (including 4 specials)\n";
  return kOk;
}

int cmd_train_w2v(const std::string& input, const std::string& output, const TrainConfig& cfg, const TokOpts& tok,
                  int workers) {
  const auto corpus = load_token_lists(input, tok.config(), workers);
  const auto res = train_skipgram(corpus, cfg);
  save_model(res.model, output);
  for (std::size_t e = 0; e < res.epoch_loss.size(); ++e)
    std::cerr << "epoch " << e + 1 << " loss " << res.epoch_loss[e] << "\n";
  std::cerr << "saved " << res.model.rows() << " x " << res.model.dim() << " to " << output << "\n";
  return kOk;
}

int cmd_train_hashed(const std::string& input, const std::string& vocab_path, const std::string& output, int dim,
                     std::uint64_t seed, int min_count, const TokOpts& tok, int workers) {
  Vocab v;
  if (!vocab_path.empty()) {
    v = load_vocab(vocab_path);
  } else if (!input.empty()) {
    TokenCounter counter;
    for (const auto& s : load_token_lists(input, tok.config(), workers)) counter.add(s);
    v = build_vocab(counter, min_count);
  } else {
    throw Error(ErrorCode::InvalidArgument, "train hashed needs --vocab or --input");
  }
  save_model(hashed_baseline(v, dim, seed), output);
  std::cerr << "saved hashed baseline " << v.size() << " x " << dim << " to " << output << "\n";
  return kOk;
}

int cmd_embed(const std::string& model_dir, const std::string& input, const std::string& output, const TokOpts& tok,
              bool skip_bad) {
  const auto model = load_model(model_dir);
  const auto cfg = tok.config();
  auto data = read_jsonl(input, skip_bad);
  Output out(output);
  for (const auto& it : data.items) out.line({{"id", id_json(it)}, {"vector", i2v(model, it, cfg)}});
  return kOk;
}

int cmd_formula_graph(const std::string& input, const std::string& output) {
  std::ifstream in(input);
  if (!in) throw Error(ErrorCode::IoError, "cannot open " + input);
  std::vector<std::string> formulas;
  std::string line;
  while (std::getline(in, line)) {
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (!line.empty()) formulas.push_back(line);
  }
  const auto graph = build_graph(group_parse(formulas));
  Output out(output);
  out.os() << graph_to_json(graph).dump(2) << '\n';
  return kOk;
}

int print_report(const MetricReport& r, const std::string& output) {
  Output out(output);
  out.os() << report_to_json(r).dump(2) << '\n';
  return r.error ? kInvalid : kOk;
}

int cmd_eval_similarity(const std::string& model_dir, const std::string& pairs_path, const TokOpts& tok,
                        const std::string& output) {
  const auto model = load_model(model_dir);
  const auto pairs = load_pairs(pairs_path);
  return print_report(similarity_task(model, pairs.pairs, pairs.gold, tok.config()), output);
}

int cmd_eval_knowledge(const std::string& pred_path, const std::string& gold_path, bool macro,
                       const std::string& output) {
  auto load = [](const std::string& path) {
    std::map<std::string, LabelSet> m;
    for (const auto& j : read_json_lines(path)) {
      const auto& id = j.at("id");
      const std::string key = id.is_string() ? id.get<std::string>() : id.dump();
      const auto& labels = j.contains("knowledge") ? j.at("knowledge") : j.at("labels");
      m[key] = labels.get<LabelSet>();
    }
    return m;
  };
  const auto pred = load(pred_path);
  const auto gold = load(gold_path);
  std::vector<LabelSet> p, g;
  for (const auto& [id, labels] : gold) {
    auto it = pred.find(id);
    if (it == pred.end()) throw Error(ErrorCode::LengthMismatch, "no prediction for id " + id);
    g.push_back(labels);
    p.push_back(it->second);
  }
  if (pred.size() != gold.size()) throw Error(ErrorCode::LengthMismatch, "prediction ids not present in gold");
  const auto prf = multilabel_prf(g, p, macro ? Averaging::Macro : Averaging::Micro);
  MetricReport r;
  r.sample_count = g.size();
  r.values = {{"precision", prf.precision}, {"recall", prf.recall}, {"f1", prf.f1}};
  return print_report(r, output);
}

int cmd_stats(const std::string& which, const std::string& responses, const std::string& output, double fraction) {
  const auto log = load_responses(responses);
  check_responses(log);
  std::set<std::string> ids;
  for (const auto& r : log) ids.insert(r.item_id);
  Output out(output);
  for (const auto& id : ids) {
    if (which == "difficulty") {
      out.line({{"item_id", id}, {"difficulty", round_label(difficulty_from_responses(log, id))}});
    } else {
      try {
        out.line({{"item_id", id}, {"discrimination", round_label(discrimination_from_responses(log, id, fraction))}});
      } catch (const Error& e) {
        if (e.code() != ErrorCode::InsufficientStudents) throw;
        out.line({{"item_id", id}, {"discrimination", nullptr}, {"error", e.detail()}});
      }
    }
  }
  return kOk;
}

int cmd_pipeline(const std::string& config_path, const std::string& input, const std::string& output) {
  std::ifstream in(config_path);
  if (!in) throw Error(ErrorCode::IoError, "cannot open " + config_path);
  json cfg;
  try {
    cfg = json::parse(in);
  } catch (const json::exception& e) {
    throw Error(ErrorCode::BadParams, std::string("pipeline config: ") + e.what());
  }
  const auto p = Pipeline::build(cfg);
  const auto start = std::chrono::steady_clock::now();
  Output out(output);
  if (p.task_name() == "similarity" && !p.config().at("task").at("params").contains("pairs")) {
    if (input.empty()) throw Error(ErrorCode::InvalidArgument, "similarity pipeline needs --input pairs file");
    const auto pairs = load_pairs(input);
    const auto rep = p.run_pairs(pairs.pairs, pairs.gold);
    out.os() << report_to_json(rep).dump(2) << '\n';
    return rep.error ? kInvalid : kOk;
  }
  std::vector<SifItem> items;
  if (!input.empty()) items = read_jsonl(input, p.config().at("on_error") == "skip").items;
  const auto res = p.run(items);
  for (const auto& f : res.failures) std::cerr << f.what() << "\n";
  if (res.task) {
    if (res.task->is_array())
      for (const auto& row : *res.task) out.line(row);
    else
      out.os() << res.task->dump(2) << '\n';
  } else {
    for (const auto& r : res.records) out.line(Pipeline::record_to_json(r));
  }
  const auto ms = std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - start).count();
  std::cerr << res.records.size() << " records, " << res.failures.size() << " failed, " << ms << " ms\n";
  return res.failures.empty() ? kOk : kInvalid;
}

int cmd_figures(const std::string& input, const std::string& asset_dir, const std::string& output, bool skip_bad) {
  auto data = read_jsonl(input, skip_bad);
  Output out(output);
  std::size_t missing = 0;
  for (const auto& it : data.items) {
    const auto content = is_sif(it.content) ? it.content : to_sif(it.content);
    for (const auto& s : seg(content).segments()) {
      if (s.kind != SegmentKind::Figure && s.kind != SegmentKind::FigureFormula) continue;
      json j = {{"id", id_json(it)}, {"kind", to_string(s.kind)},
                {"ref", s.encoding == FigureEncoding::Base64 ? "base64" : s.payload}};
      try {
        j["bytes"] = resolve_figure(s, asset_dir).size();
      } catch (const Error& e) {
        ++missing;
        j["error"] = std::string(to_string(e.code()));
      }
      out.line(j);
    }
  }
  return missing ? kData : kOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Toolkit for educational item text: validation, conversion, tokenization, embeddings, metrics"};
  app.require_subcommand(1);
  std::string input, output, report, model, pairs, pred, gold, vocab_path, config, responses, asset_dir;
  bool skip_bad = false;
  int workers = 1;
  TokOpts tok;

  auto* validate_cmd = app.add_subcommand("validate", "check items against the item format");
  validate_cmd->add_option("--input", input, "items JSONL")->required();
  validate_cmd->add_option("--report", report, "per-item report JSONL");
  validate_cmd->add_flag("--skip-bad", skip_bad, "skip unreadable lines");

  auto* convert_cmd = app.add_subcommand("convert", "rewrite raw items into the item format");
  convert_cmd->add_option("--input", input)->required();
  convert_cmd->add_option("--output", output);
  convert_cmd->add_flag("--skip-bad", skip_bad);

  auto* tokenize_cmd = app.add_subcommand("tokenize", "tokenize item contents");
  tokenize_cmd->add_option("--input", input)->required();
  tokenize_cmd->add_option("--output", output);
  tokenize_cmd->add_option("--workers", workers)->check(CLI::PositiveNumber);
  tokenize_cmd->add_flag("--skip-bad", skip_bad);
  tok.add(tokenize_cmd);

  auto* vocab_cmd = app.add_subcommand("vocab", "vocabulary tools");
  vocab_cmd->require_subcommand(1);
  auto* vocab_build = vocab_cmd->add_subcommand("build", "count tokens and write vocab.txt");
  int min_count = 1;
  vocab_build->add_option("--input", input, "items or {tokens} JSONL")->required();
  vocab_build->add_option("--min-count", min_count)->check(CLI::PositiveNumber);
  vocab_build->add_option("--output", output);
  vocab_build->add_option("--workers", workers)->check(CLI::PositiveNumber);
  tok.add(vocab_build);

  auto* train_cmd = app.add_subcommand("train", "embedding training");
  train_cmd->require_subcommand(1);
  TrainConfig tcfg;
  auto* w2v = train_cmd->add_subcommand("w2v", "skip-gram with negative sampling");
  w2v->add_option("--input", input)->required();
  w2v->add_option("--output", output, "model directory")->required();
  w2v->add_option("--dim", tcfg.dim);
  w2v->add_option("--window", tcfg.window);
  w2v->add_option("--negatives", tcfg.negatives);
  w2v->add_option("--epochs", tcfg.epochs);
  w2v->add_option("--min-count", tcfg.min_count);
  w2v->add_option("--lr", tcfg.learning_rate);
  w2v->add_option("--seed", tcfg.seed);
  w2v->add_option("--workers", workers, "tokenization threads")->check(CLI::PositiveNumber);
  tok.add(w2v);
  int hdim = 128;
  std::uint64_t hseed = 0;
  int hmin = 1;
  auto* hashed = train_cmd->add_subcommand("hashed", "deterministic hashed baseline");
  hashed->add_option("--input", input, "corpus to build the vocabulary from");
  hashed->add_option("--vocab", vocab_path, "existing vocab.txt");
  hashed->add_option("--output", output, "model directory")->required();
  hashed->add_option("--dim", hdim)->check(CLI::PositiveNumber);
  hashed->add_option("--seed", hseed);
  hashed->add_option("--min-count", hmin)->check(CLI::PositiveNumber);
  hashed->add_option("--workers", workers)->check(CLI::PositiveNumber);
  tok.add(hashed);

  auto* embed_cmd = app.add_subcommand("embed", "item vectors");
  embed_cmd->add_option("--model", model)->required();
  embed_cmd->add_option("--input", input)->required();
  embed_cmd->add_option("--output", output);
  embed_cmd->add_flag("--skip-bad", skip_bad);
  tok.add(embed_cmd);

  auto* formula_cmd = app.add_subcommand("formula", "formula tools");
  formula_cmd->require_subcommand(1);
  auto* graph_cmd = formula_cmd->add_subcommand("graph", "formula forest as a typed graph");
  graph_cmd->add_option("--input", input, "one formula per line")->required();
  graph_cmd->add_option("--output", output);

  auto* eval_cmd = app.add_subcommand("eval", "evaluation");
  eval_cmd->require_subcommand(1);
  auto* eval_sim = eval_cmd->add_subcommand("similarity", "zero-shot similarity");
  eval_sim->add_option("--model", model)->required();
  eval_sim->add_option("--pairs", pairs)->required();
  eval_sim->add_option("--output", output);
  tok.add(eval_sim);
  std::string metrics = "mae,mse,rmse,ndcg,pcc,scc";
  auto* eval_reg = eval_cmd->add_subcommand("regression", "mae, mse, rmse, r2, ndcg, pcc, scc");
  eval_reg->add_option("--pred", pred)->required();
  eval_reg->add_option("--gold", gold)->required();
  eval_reg->add_option("--metrics", metrics);
  eval_reg->add_option("--output", output);
  bool macro = false;
  auto* eval_kn = eval_cmd->add_subcommand("knowledge", "multi-label precision / recall / f1");
  eval_kn->add_option("--pred", pred)->required();
  eval_kn->add_option("--gold", gold)->required();
  eval_kn->add_flag("--macro", macro, "macro instead of micro averaging");
  eval_kn->add_option("--output", output);

  auto* stats_cmd = app.add_subcommand("stats", "labels from response logs");
  stats_cmd->require_subcommand(1);
  double fraction = 0.27;
  for (const char* which : {"difficulty", "discrimination"}) {
    auto* s = stats_cmd->add_subcommand(which, std::string(which) + " per item");
    s->add_option("--responses", responses)->required();
    s->add_option("--output", output);
    if (std::string_view(which) == "discrimination") s->add_option("--fraction", fraction)->check(CLI::Range(0.0, 0.5));
  }

  auto* pipeline_cmd = app.add_subcommand("pipeline", "run a configured pipeline");
  pipeline_cmd->add_option("--config", config)->required();
  pipeline_cmd->add_option("--input", input);
  pipeline_cmd->add_option("--output", output);

  auto* figures_cmd = app.add_subcommand("figures", "resolve figure references");
  figures_cmd->add_option("--input", input)->required();
  figures_cmd->add_option("--asset-dir", asset_dir);
  figures_cmd->add_option("--output", output);
  figures_cmd->add_flag("--skip-bad", skip_bad);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    return app.exit(e) == 0 ? kOk : kUsage;
  }

  try {
    if (*validate_cmd) return cmd_validate(input, report, skip_bad);
    if (*convert_cmd) return cmd_convert(input, output, skip_bad);
    if (*tokenize_cmd) return cmd_tokenize(input, output, tok, workers, skip_bad);
    if (*vocab_build) return cmd_vocab(input, output, min_count, tok, workers);
    if (*w2v) return cmd_train_w2v(input, output, tcfg, tok, workers);
    if (*hashed) return cmd_train_hashed(input, vocab_path, output, hdim, hseed, hmin, tok, workers);
    if (*embed_cmd) return cmd_embed(model, input, output, tok, skip_bad);
    if (*graph_cmd) return cmd_formula_graph(input, output);
    if (*eval_sim) return cmd_eval_similarity(model, pairs, tok, output);
    if (*eval_reg) {
      std::vector<std::string> names;
      std::stringstream ss(metrics);
      for (std::string m; std::getline(ss, m, ',');)
        if (!m.empty()) names.push_back(m);
      return print_report(regression_report(load_values(pred), load_values(gold), names), output);
    }
    if (*eval_kn) return cmd_eval_knowledge(pred, gold, macro, output);
    for (auto* s : stats_cmd->get_subcommands())
      if (*s) return cmd_stats(s->get_name(), responses, output, fraction);
    if (*pipeline_cmd) return cmd_pipeline(config, input, output);
    if (*figures_cmd) return cmd_figures(input, asset_dir, output, skip_bad);
  } catch (const AggregateError& e) {
    for (const auto& f : e.failures()) std::cerr << f.what() << "\n";
    return kData;
  } catch (const Error& e) {
    std::cerr << e.what() << "\n";
    return exit_code_for(e);
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kData;
  }
  return kUsage;
}
