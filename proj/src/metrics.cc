#include "sifkit/metrics.h"

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>
#include <numeric>

namespace sifkit {

namespace {

void same_length(std::size_t a, std::size_t b) {
  if (a != b) throw Error(ErrorCode::LengthMismatch, "inputs differ in length");
}

double ratio(double num, double den) { return den == 0 ? 0.0 : num / den; }

double harmonic(double p, double r) { return p + r == 0 ? 0.0 : 2 * p * r / (p + r); }

}  // namespace

Prf multilabel_prf(const std::vector<LabelSet>& gold, const std::vector<LabelSet>& pred, Averaging avg) {
  same_length(gold.size(), pred.size());
  if (gold.empty()) throw Error(ErrorCode::InvalidArgument, "no instances");
  if (avg == Averaging::Micro) {
    double tp = 0, np = 0, ng = 0;
    for (std::size_t i = 0; i < gold.size(); ++i) {
      for (const auto& l : pred[i]) tp += gold[i].count(l);
      np += static_cast<double>(pred[i].size());
      ng += static_cast<double>(gold[i].size());
    }
    const double p = ratio(tp, np), r = ratio(tp, ng);
    return {p, r, harmonic(p, r)};
  }
  std::map<std::string, std::array<double, 3>> per;  // tp, |pred|, |gold|
  for (std::size_t i = 0; i < gold.size(); ++i) {
    for (const auto& l : pred[i]) {
      auto& c = per[l];
      c[1] += 1;
      c[0] += gold[i].count(l);
    }
    for (const auto& l : gold[i]) per[l][2] += 1;
  }
  if (per.empty()) return {};
  Prf out;
  for (const auto& [l, c] : per) {
    const double p = ratio(c[0], c[1]), r = ratio(c[0], c[2]);
    out.precision += p;
    out.recall += r;
    out.f1 += harmonic(p, r);
  }
  const double n = static_cast<double>(per.size());
  out.precision /= n;
  out.recall /= n;
  out.f1 /= n;
  return out;
}

RegressionReport regression_metrics(const std::vector<double>& pred, const std::vector<double>& gold) {
  same_length(pred.size(), gold.size());
  if (pred.empty()) throw Error(ErrorCode::InvalidArgument, "no instances");
  RegressionReport r;
  for (std::size_t i = 0; i < pred.size(); ++i) {
    const double e = pred[i] - gold[i];
    r.mae += std::abs(e);
    r.mse += e * e;
  }
  const double n = static_cast<double>(pred.size());
  r.mae /= n;
  r.mse /= n;
  r.rmse = std::sqrt(r.mse);
  try {
    r.r2 = r2_score(pred, gold);
  } catch (const Error&) {
  }
  return r;
}

double r2_score(const std::vector<double>& pred, const std::vector<double>& gold) {
  same_length(pred.size(), gold.size());
  if (pred.empty()) throw Error(ErrorCode::InvalidArgument, "no instances");
  const double mean = std::accumulate(gold.begin(), gold.end(), 0.0) / static_cast<double>(gold.size());
  double ss_res = 0, ss_tot = 0;
  for (std::size_t i = 0; i < gold.size(); ++i) {
    ss_res += (gold[i] - pred[i]) * (gold[i] - pred[i]);
    ss_tot += (gold[i] - mean) * (gold[i] - mean);
  }
  if (ss_tot == 0) throw Error(ErrorCode::ZeroVariance, "gold values are constant; R2 undefined");
  return 1.0 - ss_res / ss_tot;
}

double ndcg(const std::vector<double>& pred, const std::vector<double>& gold, std::optional<std::size_t> k) {
  same_length(pred.size(), gold.size());
  if (pred.empty()) throw Error(ErrorCode::InvalidArgument, "no instances");
  if (k && *k == 0) throw Error(ErrorCode::InvalidArgument, "k must be >= 1");
  const std::size_t n = pred.size();
  const std::size_t cut = k ? std::min(*k, n) : n;
  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) { return pred[a] > pred[b]; });
  std::vector<double> ideal = gold;
  std::sort(ideal.begin(), ideal.end(), std::greater<>());
  double dcg = 0, idcg = 0;
  for (std::size_t i = 0; i < cut; ++i) {
    const double disc = std::log2(static_cast<double>(i) + 2.0);
    dcg += (std::exp2(gold[order[i]]) - 1.0) / disc;
    idcg += (std::exp2(ideal[i]) - 1.0) / disc;
  }
  if (idcg == 0) return 1.0;
  return dcg / idcg;
}

double pearson(const std::vector<double>& x, const std::vector<double>& y) {
  same_length(x.size(), y.size());
  if (x.size() < 2) throw Error(ErrorCode::InvalidArgument, "correlation needs at least 2 values");
  const double n = static_cast<double>(x.size());
  const double mx = std::accumulate(x.begin(), x.end(), 0.0) / n;
  const double my = std::accumulate(y.begin(), y.end(), 0.0) / n;
  double sxy = 0, sxx = 0, syy = 0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    const double dx = x[i] - mx, dy = y[i] - my;
    sxy += dx * dy;
    sxx += dx * dx;
    syy += dy * dy;
  }
  if (sxx == 0 || syy == 0) throw Error(ErrorCode::ZeroVariance, "correlation of a constant series");
  return std::clamp(sxy / std::sqrt(sxx * syy), -1.0, 1.0);
}

std::vector<double> average_ranks(const std::vector<double>& x) {
  std::vector<std::size_t> order(x.size());
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) { return x[a] < x[b]; });
  std::vector<double> rank(x.size());
  for (std::size_t i = 0; i < order.size();) {
    std::size_t j = i;
    while (j + 1 < order.size() && x[order[j + 1]] == x[order[i]]) ++j;
    const double r = (static_cast<double>(i) + static_cast<double>(j)) / 2.0 + 1.0;
    for (std::size_t k = i; k <= j; ++k) rank[order[k]] = r;
    i = j + 1;
  }
  return rank;
}

double spearman(const std::vector<double>& x, const std::vector<double>& y) {
  same_length(x.size(), y.size());
  return pearson(average_ranks(x), average_ranks(y));
}

double cosine(const std::vector<double>& u, const std::vector<double>& v) {
  if (u.size() != v.size()) throw Error(ErrorCode::DimMismatch, "vectors differ in dimension");
  double uv = 0, uu = 0, vv = 0;
  for (std::size_t i = 0; i < u.size(); ++i) {
    uv += u[i] * v[i];
    uu += u[i] * u[i];
    vv += v[i] * v[i];
  }
  if (uu == 0 || vv == 0) throw Error(ErrorCode::ZeroNorm, "cosine of a zero vector");
  return uv / (std::sqrt(uu) * std::sqrt(vv));
}

nlohmann::json report_to_json(const MetricReport& r) {
  nlohmann::json j = {{"metrics", r.values}, {"sample_count", r.sample_count}, {"excluded", r.excluded}};
  j["error"] = r.error ? nlohmann::json(*r.error) : nlohmann::json(nullptr);
  return j;
}

MetricReport similarity_task(const EmbeddingModel& model, const std::vector<std::pair<SifItem, SifItem>>& pairs,
                             const std::vector<double>& gold, const TokenizerConfig& cfg) {
  same_length(pairs.size(), gold.size());
  if (pairs.size() < 2) throw Error(ErrorCode::InvalidArgument, "similarity needs at least 2 pairs");
  for (std::size_t i = 0; i < gold.size(); ++i)
    if (!(gold[i] >= 0 && gold[i] <= 1)) throw Error(ErrorCode::RangeViolation, "gold similarity outside [0,1]", i);
  MetricReport rep;
  std::vector<double> pred, kept_gold;
  for (std::size_t i = 0; i < pairs.size(); ++i) {
    const auto a = i2v(model, pairs[i].first, cfg);
    const auto b = i2v(model, pairs[i].second, cfg);
    try {
      const double c = cosine(a, b);
      rep.predictions.push_back(c);
      pred.push_back(c);
      kept_gold.push_back(gold[i]);
    } catch (const Error& e) {
      if (e.code() != ErrorCode::ZeroNorm) throw;
      rep.predictions.push_back(std::numeric_limits<double>::quiet_NaN());
      ++rep.excluded;
    }
  }
  rep.sample_count = pred.size();
  try {
    rep.values["pcc"] = pearson(pred, kept_gold);
    rep.values["scc"] = spearman(pred, kept_gold);
  } catch (const Error& e) {
    rep.values.clear();
    rep.error = std::string(to_string(e.code())) + ": " + e.detail();
  }
  return rep;
}

void check_responses(const std::vector<ResponseRecord>& log) {
  std::set<std::pair<std::string, std::string>> seen;
  for (std::size_t i = 0; i < log.size(); ++i)
    if (!seen.emplace(log[i].item_id, log[i].student_id).second)
      throw Error(ErrorCode::DuplicateRecord,
                  "duplicate response of student " + log[i].student_id + " on item " + log[i].item_id, i);
}

double difficulty_from_responses(const std::vector<ResponseRecord>& log, const std::string& item_id) {
  check_responses(log);
  std::size_t n = 0, correct = 0;
  for (const auto& r : log) {
    if (r.item_id != item_id) continue;
    ++n;
    correct += r.correct;
  }
  if (n == 0) throw Error(ErrorCode::NoRecords, "no responses for item " + item_id);
  return 1.0 - static_cast<double>(correct) / static_cast<double>(n);
}

double discrimination_from_responses(const std::vector<ResponseRecord>& log, const std::string& item_id,
                                     double fraction) {
  if (!(fraction > 0 && fraction <= 0.5)) throw Error(ErrorCode::InvalidArgument, "fraction must be in (0, 0.5]");
  check_responses(log);
  std::map<std::string, std::size_t> total;
  std::map<std::string, bool> on_item;
  for (const auto& r : log) {
    total[r.student_id] += r.correct;
    if (r.item_id == item_id) on_item[r.student_id] = r.correct;
  }
  if (on_item.empty()) throw Error(ErrorCode::NoRecords, "no responses for item " + item_id);
  std::vector<std::string> students;
  for (const auto& [s, c] : on_item) students.push_back(s);
  if (students.size() < 2)
    throw Error(ErrorCode::InsufficientStudents, "discrimination needs at least 2 students on item " + item_id);
  std::stable_sort(students.begin(), students.end(), [&](const std::string& a, const std::string& b) {
    return total[a] != total[b] ? total[a] > total[b] : a < b;
  });
  const std::size_t n = students.size();
  // Guard against products such as 0.27 * 100 landing just above an integer.
  const double raw = fraction * static_cast<double>(n);
  std::size_t g = static_cast<std::size_t>(std::ceil(raw - 1e-9 * std::max(1.0, raw)));
  g = std::clamp<std::size_t>(g, 1, n);
  double upper = 0, lower = 0;
  for (std::size_t i = 0; i < g; ++i) {
    upper += on_item[students[i]];
    lower += on_item[students[n - 1 - i]];
  }
  return (upper - lower) / static_cast<double>(g);
}

double round_label(double x, int digits) {
  const double scale = std::pow(10.0, digits);
  return std::round(x * scale) / scale;
}

}  // namespace sifkit
