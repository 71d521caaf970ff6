#include "sifkit/pipeline.h"

#include <algorithm>
#include <set>

#include "parallel.h"
#include "sifkit/dataset.h"
#include "sifkit/segment.h"
#include "sifkit/sif.h"

namespace sifkit {

using nlohmann::json;

struct Pipeline::Step {
  std::string name;
  json params;
  TokenizerConfig tokenizer;
  std::string symbol;
  std::shared_ptr<const Vocab> vocab;
  bool add_bos_eos = false;
};

struct Pipeline::Task {
  std::string name;
  json params;
  std::shared_ptr<const EmbeddingModel> model;
  TokenizerConfig tokenizer;
  std::optional<PairSet> pairs;
  std::map<std::string, double> pred, gold;
  std::vector<std::string> metrics;
};

namespace {

const std::set<std::string> kStepNames = {"to_sif", "validate", "seg", "tokenize", "encode"};
const std::set<std::string> kTaskNames = {"embed", "similarity", "metrics"};
const std::set<std::string> kMetricNames = {"mae", "mse", "rmse", "r2", "ndcg", "pcc", "scc"};

std::string id_text(const json& v) {
  if (v.is_string()) return v.get<std::string>();
  if (v.is_number_integer()) return std::to_string(v.get<long long>());
  throw Error(ErrorCode::MalformedJson, "id must be a string or integer");
}

// Splits any accepted step/task form into (name, params).
std::pair<std::string, json> split_entry(const json& e, std::size_t index, ErrorCode unknown,
                                         const std::set<std::string>& names) {
  std::string name;
  json params = json::object();
  if (e.is_string()) {
    name = e.get<std::string>();
  } else if (e.is_object() && e.contains("name")) {
    if (!e.at("name").is_string()) throw Error(ErrorCode::BadParams, "name must be a string", index);
    name = e.at("name").get<std::string>();
    for (const auto& [k, v] : e.items())
      if (k != "name" && k != "params") throw Error(ErrorCode::BadParams, "unexpected key '" + k + "'", index);
    if (e.contains("params")) params = e.at("params");
  } else if (e.is_object() && e.size() == 1) {
    name = e.begin().key();
    params = e.begin().value();
  } else {
    throw Error(ErrorCode::BadParams, "entry must be a name, {\"name\",\"params\"} or {name: params}", index);
  }
  if (!names.count(name)) throw Error(unknown, "unknown " + std::string(unknown == ErrorCode::UnknownStep ? "step" : "task") + " '" + name + "'", index);
  if (params.is_null()) params = json::object();
  if (!params.is_object()) throw Error(ErrorCode::BadParams, name + ": params must be an object", index);
  return {name, params};
}

void only_keys(const json& params, const std::set<std::string>& allowed, const std::string& name, std::size_t index) {
  for (const auto& [k, v] : params.items())
    if (!allowed.count(k)) throw Error(ErrorCode::BadParams, name + ": unknown parameter '" + k + "'", index);
}

std::string required_string(const json& params, const char* key, const std::string& name, std::size_t index) {
  if (!params.contains(key) || !params.at(key).is_string() || params.at(key).get<std::string>().empty())
    throw Error(ErrorCode::BadParams, name + ": missing '" + key + "'", index);
  return params.at(key).get<std::string>();
}

TokenizerConfig tokenizer_param(const json& params, const std::string& name, std::size_t index) {
  try {
    if (!params.contains("tokenizer")) return TokenizerConfig::named("pure_text");
    const auto& t = params.at("tokenizer");
    if (t.is_string()) return TokenizerConfig::named(t.get<std::string>());
    return config_from_json(t);
  } catch (const Error& e) {
    throw Error(ErrorCode::BadParams, name + ": " + e.detail(), index);
  }
}

template <typename Fn>
auto as_bad_params(const std::string& name, std::size_t index, Fn fn) {
  try {
    return fn();
  } catch (const Error& e) {
    throw Error(ErrorCode::BadParams, name + ": " + e.detail(), index);
  } catch (const json::exception& e) {
    throw Error(ErrorCode::BadParams, name + ": " + e.what(), index);
  }
}

std::shared_ptr<const Pipeline::Step> make_step(const json& entry, std::size_t index) {
  auto [name, params] = split_entry(entry, index, ErrorCode::UnknownStep, kStepNames);
  auto s = std::make_shared<Pipeline::Step>();
  s->name = name;
  if (name == "to_sif" || name == "validate") {
    only_keys(params, {}, name, index);
    s->params = json::object();
  } else if (name == "seg") {
    only_keys(params, {"symbol"}, name, index);
    s->symbol = as_bad_params(name, index, [&] { return params.value("symbol", std::string()); });
    as_bad_params(name, index, [&] { return symbol_kinds(s->symbol); });
    std::string canonical;
    for (char f : std::string_view("tfgm"))
      if (s->symbol.find(f) != std::string::npos) canonical += f;
    s->symbol = canonical;
    s->params = {{"symbol", s->symbol}};
  } else if (name == "tokenize") {
    s->tokenizer = as_bad_params(name, index, [&] { return config_from_json(params); });
    s->params = config_to_json(s->tokenizer);
  } else {  // encode
    only_keys(params, {"vocab", "add_bos_eos"}, name, index);
    const auto path = required_string(params, "vocab", name, index);
    s->add_bos_eos = as_bad_params(name, index, [&] { return params.value("add_bos_eos", false); });
    s->vocab = as_bad_params(name, index, [&] { return std::make_shared<const Vocab>(load_vocab(path)); });
    s->params = {{"vocab", path}, {"add_bos_eos", s->add_bos_eos}};
  }
  return s;
}

std::shared_ptr<const Pipeline::Task> make_task(const json& entry, std::size_t index) {
  auto [name, params] = split_entry(entry, index, ErrorCode::UnknownStep, kTaskNames);
  auto t = std::make_shared<Pipeline::Task>();
  t->name = name;
  if (name == "embed" || name == "similarity") {
    only_keys(params, name == "embed" ? std::set<std::string>{"model", "tokenizer"}
                                      : std::set<std::string>{"model", "tokenizer", "pairs"},
              name, index);
    const auto model = required_string(params, "model", name, index);
    t->tokenizer = tokenizer_param(params, name, index);
    t->model = as_bad_params(name, index, [&] { return std::make_shared<const EmbeddingModel>(load_model(model)); });
    t->params = {{"model", model}, {"tokenizer", config_to_json(t->tokenizer)}};
    if (params.contains("pairs")) {
      const auto pairs = required_string(params, "pairs", name, index);
      t->pairs = as_bad_params(name, index, [&] { return load_pairs(pairs); });
      t->params["pairs"] = pairs;
    }
  } else {  // metrics
    only_keys(params, {"pred", "gold", "metrics"}, name, index);
    const auto pred = required_string(params, "pred", name, index);
    const auto gold = required_string(params, "gold", name, index);
    t->metrics = {"mae", "mse", "rmse", "ndcg", "pcc", "scc"};
    if (params.contains("metrics"))
      t->metrics = as_bad_params(name, index, [&] { return params.at("metrics").get<std::vector<std::string>>(); });
    if (t->metrics.empty()) throw Error(ErrorCode::BadParams, "metrics: empty metric list", index);
    for (const auto& m : t->metrics)
      if (!kMetricNames.count(m)) throw Error(ErrorCode::BadParams, "metrics: unknown metric '" + m + "'", index);
    t->pred = as_bad_params(name, index, [&] { return load_values(pred); });
    t->gold = as_bad_params(name, index, [&] { return load_values(gold); });
    t->params = {{"pred", pred}, {"gold", gold}, {"metrics", t->metrics}};
  }
  return t;
}

json step_json(const std::string& name, const json& params) { return {{"name", name}, {"params", params}}; }

}  // namespace

Pipeline Pipeline::build(const json& cfg) {
  if (!cfg.is_object()) throw Error(ErrorCode::BadParams, "pipeline config must be an object");
  for (const auto& [k, v] : cfg.items())
    if (k != "preprocess" && k != "task" && k != "on_error" && k != "workers")
      throw Error(ErrorCode::BadParams, "unknown pipeline key '" + k + "'");
  Pipeline p;
  json pre = cfg.value("preprocess", json::array());
  if (!pre.is_array()) throw Error(ErrorCode::BadParams, "preprocess must be a list");
  bool tokenized = false;
  for (std::size_t i = 0; i < pre.size(); ++i) {
    auto s = make_step(pre[i], i);
    if (s->name == "tokenize") tokenized = true;
    if (s->name == "to_sif") tokenized = false;
    if (s->name == "encode" && !tokenized)
      throw Error(ErrorCode::BadParams, "encode: needs a preceding tokenize step", i);
    p.steps_.push_back(std::move(s));
  }
  if (cfg.contains("task") && !cfg.at("task").is_null()) p.task_ = make_task(cfg.at("task"), pre.size());
  const auto on_error = cfg.value("on_error", std::string("fail"));
  if (on_error != "fail" && on_error != "skip") throw Error(ErrorCode::BadParams, "on_error must be 'fail' or 'skip'");
  p.tolerant_ = on_error == "skip";
  if (cfg.contains("workers") && !cfg.at("workers").is_number_integer())
    throw Error(ErrorCode::BadParams, "workers must be an integer");
  p.workers_ = cfg.value("workers", 1);
  if (p.workers_ < 1) throw Error(ErrorCode::BadParams, "workers must be >= 1");

  json steps = json::array();
  for (const auto& s : p.steps_) steps.push_back(step_json(s->name, s->params));
  p.config_ = {{"preprocess", steps},
               {"task", p.task_ ? step_json(p.task_->name, p.task_->params) : json(nullptr)},
               {"on_error", on_error},
               {"workers", p.workers_}};
  return p;
}

Pipeline Pipeline::add_pipe(const json& step, std::optional<std::size_t> position) const {
  const std::size_t pos = position.value_or(steps_.size());
  if (pos > steps_.size())
    throw Error(ErrorCode::BadPosition,
                "position " + std::to_string(pos) + " beyond pipeline length " + std::to_string(steps_.size()));
  json cfg = config_;
  auto& pre = cfg["preprocess"];
  pre.insert(pre.begin() + static_cast<std::ptrdiff_t>(pos), step);
  return build(cfg);
}

std::vector<std::string> Pipeline::step_names() const {
  std::vector<std::string> out;
  for (const auto& s : steps_) out.push_back(s->name);
  return out;
}

std::optional<std::string> Pipeline::task_name() const {
  if (!task_) return std::nullopt;
  return task_->name;
}

Pipeline::Record Pipeline::apply(std::size_t index, const SifItem& item) const {
  Record r{index, item, std::nullopt, std::nullopt};
  for (const auto& s : steps_) {
    try {
      if (s->name == "to_sif") {
        r.item.content = to_sif(r.item.content);
        r.segments.reset();
        r.tokens.reset();
      } else if (s->name == "validate") {
        const auto rep = validate(r.item.content);
        if (!rep.valid) {
          const auto& v = rep.violations.front();
          throw Error(ErrorCode::NotSif, std::string(to_string(v.code)) + ": " + v.message, std::nullopt,
                      v.span.begin);
        }
      } else if (s->name == "seg") {
        r.segments = seg(r.item.content, s->symbol);
      } else if (s->name == "tokenize") {
        r.tokens = tokenize_item(r.item, s->tokenizer);
      } else if (s->name == "encode") {
        r.tokens = encode(TokenSeq{r.tokens->tokens, std::nullopt}, *s->vocab, s->add_bos_eos);
      }
    } catch (const Error& e) {
      throw Error(e.code(), "item " + r.item.id.value_or("#" + std::to_string(index)) + ", step " + s->name + ": " +
                                e.detail(),
                  index, e.offset());
    }
  }
  return r;
}

Pipeline::Result Pipeline::run(const std::vector<SifItem>& items) const {
  std::vector<std::optional<Record>> slots(items.size());
  std::vector<std::optional<Error>> errors(items.size());
  detail::parallel_for(items.size(), workers_, [&](std::size_t i) {
    try {
      slots[i] = apply(i, items[i]);
    } catch (const Error& e) {
      errors[i] = e;
    } catch (const std::exception& e) {
      errors[i] = Error(ErrorCode::TokenizeFailed, e.what(), i);
    }
  });
  Result res;
  for (std::size_t i = 0; i < items.size(); ++i) {
    if (errors[i]) {
      if (!tolerant_) throw *errors[i];
      res.failures.push_back(*errors[i]);
    } else {
      res.records.push_back(std::move(*slots[i]));
    }
  }
  if (!task_) return res;

  if (task_->name == "embed") {
    json out = json::array();
    for (const auto& r : res.records) {
      const auto toks = r.tokens ? TokenSeq{r.tokens->tokens, std::nullopt} : tokenize_item(r.item, task_->tokenizer);
      const auto seq = encode(toks, task_->model->vocab());
      out.push_back({{"id", r.item.id ? json(*r.item.id) : json(nullptr)}, {"vector", mean_pool(*task_->model, *seq.ids)}});
    }
    res.task = std::move(out);
  } else if (task_->name == "similarity") {
    if (!task_->pairs) throw Error(ErrorCode::InvalidArgument, "similarity task has no pairs; use run_pairs");
    res.task = report_to_json(run_pairs(task_->pairs->pairs, task_->pairs->gold));
  } else {
    res.task = report_to_json(regression_report(task_->pred, task_->gold, task_->metrics));
  }
  return res;
}

MetricReport Pipeline::run_pairs(const std::vector<std::pair<SifItem, SifItem>>& pairs,
                                 const std::vector<double>& gold) const {
  if (!task_ || task_->name != "similarity")
    throw Error(ErrorCode::InvalidArgument, "run_pairs needs a similarity task");
  std::vector<SifItem> flat;
  for (const auto& [a, b] : pairs) {
    flat.push_back(a);
    flat.push_back(b);
  }
  std::vector<std::optional<SifItem>> done(flat.size());
  std::vector<std::optional<Error>> errors(flat.size());
  detail::parallel_for(flat.size(), workers_, [&](std::size_t i) {
    try {
      done[i] = apply(i, flat[i]).item;
    } catch (const Error& e) {
      errors[i] = e;
    }
  });
  for (auto& e : errors)
    if (e) throw *e;
  std::vector<std::pair<SifItem, SifItem>> processed;
  for (std::size_t i = 0; i < pairs.size(); ++i) processed.emplace_back(*done[2 * i], *done[2 * i + 1]);
  return similarity_task(*task_->model, processed, gold, task_->tokenizer);
}

json Pipeline::record_to_json(const Record& r) {
  json j = {{"id", r.item.id ? json(*r.item.id) : json(nullptr)}, {"content", r.item.content}};
  if (r.segments) {
    json segs = json::array();
    for (const auto& s : r.segments->segments())
      segs.push_back({{"kind", to_string(s.kind)}, {"payload", s.payload}, {"masked", r.segments->is_masked(s.kind)}});
    j["segments"] = segs;
    j["rendered"] = render(*r.segments);
  }
  if (r.tokens) {
    j["tokens"] = r.tokens->tokens;
    if (r.tokens->ids) j["ids"] = *r.tokens->ids;
  }
  return j;
}

PairSet load_pairs(const std::string& path) {
  PairSet out;
  const auto rows = read_json_lines(path);
  for (std::size_t i = 0; i < rows.size(); ++i) {
    const auto& j = rows[i];
    try {
      SifItem a, b;
      a.id = "pair" + std::to_string(i) + ".1";
      b.id = "pair" + std::to_string(i) + ".2";
      a.content = j.at("content1").get<std::string>();
      b.content = j.at("content2").get<std::string>();
      out.pairs.emplace_back(std::move(a), std::move(b));
      out.gold.push_back(j.at("similarity").get<double>());
    } catch (const json::exception& e) {
      throw Error(ErrorCode::MalformedJson, "pair record " + std::to_string(i + 1) + ": " + e.what(), i + 1);
    }
  }
  return out;
}

std::vector<ResponseRecord> load_responses(const std::string& path) {
  std::vector<ResponseRecord> out;
  const auto rows = read_json_lines(path);
  for (std::size_t i = 0; i < rows.size(); ++i) {
    const auto& j = rows[i];
    try {
      ResponseRecord r;
      r.item_id = id_text(j.at("item_id"));
      r.student_id = id_text(j.at("student_id"));
      const auto& c = j.at("correct");
      if (c.is_boolean()) r.correct = c.get<bool>();
      else if (c.is_number_integer() && (c.get<int>() == 0 || c.get<int>() == 1)) r.correct = c.get<int>() == 1;
      else throw Error(ErrorCode::MalformedJson, "correct must be a boolean");
      out.push_back(std::move(r));
    } catch (const json::exception& e) {
      throw Error(ErrorCode::MalformedJson, "response record " + std::to_string(i + 1) + ": " + e.what(), i + 1);
    } catch (const Error& e) {
      throw Error(e.code(), "response record " + std::to_string(i + 1) + ": " + e.detail(), i + 1);
    }
  }
  return out;
}

std::map<std::string, double> load_values(const std::string& path) {
  std::map<std::string, double> out;
  const auto rows = read_json_lines(path);
  for (std::size_t i = 0; i < rows.size(); ++i) {
    try {
      const auto id = id_text(rows[i].at("id"));
      if (!out.emplace(id, rows[i].at("value").get<double>()).second)
        throw Error(ErrorCode::DuplicateRecord, "duplicate id " + id, i + 1);
    } catch (const json::exception& e) {
      throw Error(ErrorCode::MalformedJson, "value record " + std::to_string(i + 1) + ": " + e.what(), i + 1);
    }
  }
  return out;
}

MetricReport regression_report(const std::map<std::string, double>& pred, const std::map<std::string, double>& gold,
                               const std::vector<std::string>& metrics) {
  for (const auto& m : metrics)
    if (!kMetricNames.count(m)) throw Error(ErrorCode::InvalidArgument, "unknown metric '" + m + "'");
  std::vector<double> p, g;
  for (const auto& [id, v] : gold) {
    auto it = pred.find(id);
    if (it == pred.end()) throw Error(ErrorCode::LengthMismatch, "no prediction for id " + id);
    p.push_back(it->second);
    g.push_back(v);
  }
  if (pred.size() != gold.size()) throw Error(ErrorCode::LengthMismatch, "prediction ids not present in gold");
  MetricReport rep;
  rep.sample_count = g.size();
  std::vector<std::string> problems;
  for (const auto& m : metrics) {
    try {
      if (m == "mae" || m == "mse" || m == "rmse") {
        const auto r = regression_metrics(p, g);
        rep.values[m] = m == "mae" ? r.mae : m == "mse" ? r.mse : r.rmse;
      } else if (m == "r2") {
        rep.values[m] = r2_score(p, g);
      } else if (m == "ndcg") {
        rep.values[m] = ndcg(p, g);
      } else if (m == "pcc") {
        rep.values[m] = pearson(p, g);
      } else {
        rep.values[m] = spearman(p, g);
      }
    } catch (const Error& e) {
      problems.push_back(m + ": " + std::string(to_string(e.code())));
    }
  }
  if (!problems.empty()) {
    std::string msg;
    for (const auto& s : problems) msg += (msg.empty() ? "" : "; ") + s;
    rep.error = msg;
  }
  return rep;
}

}  // namespace sifkit
