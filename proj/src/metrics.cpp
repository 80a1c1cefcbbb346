#include "linklab/metrics.hpp"

#include <algorithm>
#include <cstdint>
#include <set>
#include <unordered_map>

#include "linklab/error.hpp"

namespace linklab {

double f1_score(double recall, double precision) {
  double sum = recall + precision;
  return sum > 0.0 ? 2.0 * recall * precision / sum : 0.0;
}

B3Scores b3_scores(const Clustering& truth, const Clustering& predicted,
                   const B3Options& options) {
  B3Scores scores;
  if (truth.instance_count() == 0) throw EvalError("nothing to evaluate: truth is empty");

  // Predicted cluster of every truth instance; -1 when missing.
  std::vector<std::int64_t> assigned;
  assigned.reserve(truth.instance_count());
  std::vector<std::size_t> universe_size(predicted.cluster_count(), 0);
  for (std::size_t c = 0; c < truth.cluster_count(); ++c) {
    for (auto id : truth.members(c)) {
      auto p = predicted.cluster_of(id);
      if (!p) {
        if (options.strict) {
          throw EvalError("instance " + to_string(id) + " has no predicted cluster");
        }
        ++scores.dropped;
        assigned.push_back(-1);
        continue;
      }
      ++universe_size[*p];
      assigned.push_back(static_cast<std::int64_t>(*p));
    }
  }
  scores.n = truth.instance_count() - scores.dropped;
  if (scores.n == 0) throw EvalError("nothing to evaluate: no truth instance is clustered");

  double recall_sum = 0.0;
  double precision_sum = 0.0;
  std::unordered_map<std::int64_t, std::size_t> overlap;
  std::size_t k = 0;
  for (std::size_t c = 0; c < truth.cluster_count(); ++c) {
    overlap.clear();
    std::size_t truth_size = 0;
    for (std::size_t i = 0; i < truth.members(c).size(); ++i, ++k) {
      if (assigned[k] < 0) continue;
      ++overlap[assigned[k]];
      ++truth_size;
    }
    if (truth_size == 0) continue;
    // Members with the same (T, P) pair contribute identical terms, so each
    // cell adds count * (count / |T|) and count * (count / |P|).
    std::vector<std::pair<std::int64_t, std::size_t>> cells(overlap.begin(), overlap.end());
    std::sort(cells.begin(), cells.end());
    for (const auto& [p, count] : cells) {
      double shared = static_cast<double>(count);
      std::size_t p_size = options.restrict_predicted
                               ? universe_size[static_cast<std::size_t>(p)]
                               : predicted.members(static_cast<std::size_t>(p)).size();
      recall_sum += shared * shared / static_cast<double>(truth_size);
      precision_sum += shared * shared / static_cast<double>(p_size);
    }
  }
  scores.recall = recall_sum / static_cast<double>(scores.n);
  scores.precision = precision_sum / static_cast<double>(scores.n);
  scores.f1 = f1_score(scores.recall, scores.precision);
  return scores;
}

PairAccuracy pair_accuracy(const PairSet& pairs, const Clustering& predicted) {
  PairAccuracy out;
  for (const auto& [a, b] : pairs.pairs()) {
    auto ca = predicted.cluster_of(a);
    auto cb = predicted.cluster_of(b);
    if (!ca || !cb) {
      ++out.dropped;
      continue;
    }
    ++out.evaluated;
    if (*ca == *cb) ++out.matched;
  }
  if (out.evaluated == 0) throw EvalError("no evaluable pairs");
  out.accuracy = static_cast<double>(out.matched) / static_cast<double>(out.evaluated);
  return out;
}

std::map<std::string, B3Scores> stratified_eval(const EvalDataset& dataset, Attribute attribute,
                                                const B3Options& options) {
  std::map<std::string, B3Scores> out;
  if (dataset.empty()) return out;
  std::map<std::string, std::pair<ClusteringBuilder, ClusteringBuilder>> strata;
  for (const auto& row : dataset.rows()) {
    auto& [truth, pred] = strata[row.value(attribute)];
    truth.add(row.truth_label, row.instance);
    pred.add(row.predicted_cluster, row.instance);
  }
  for (auto& [value, builders] : strata) {
    Clustering truth = std::move(builders.first).build();
    Clustering pred = std::move(builders.second).build();
    out[value] = b3_scores(truth, pred, options);
  }
  out["ALL"] = b3_scores(dataset.truth(), dataset.predicted(), options);
  return out;
}

std::map<std::string, PairAccuracy> stratified_pair_accuracy(const PairSet& pairs,
                                                             const Clustering& predicted,
                                                             const Corpus& corpus,
                                                             const Annotations& annotations,
                                                             Attribute attribute) {
  auto value_of = [&](InstanceId id) -> std::string {
    if (attribute == Attribute::year) {
      auto y = corpus.year_of(id.pmid);
      return y ? std::to_string(*y) : "UNKNOWN";
    }
    const Annotation* a = annotations.find(id);
    if (a == nullptr) return "UNKNOWN";
    const std::string& v = attribute == Attribute::ethnicity ? a->ethnicity : a->gender;
    return v.empty() ? "UNKNOWN" : v;
  };

  std::map<std::string, PairAccuracy> out;
  for (const auto& [a, b] : pairs.pairs()) {
    auto ca = predicted.cluster_of(a);
    auto cb = predicted.cluster_of(b);
    std::set<std::string> values{value_of(a), value_of(b)};
    for (const auto& v : values) {
      auto& acc = out[v];
      if (!ca || !cb) {
        ++acc.dropped;
        continue;
      }
      ++acc.evaluated;
      if (*ca == *cb) ++acc.matched;
    }
  }
  for (auto& [value, acc] : out) {
    acc.accuracy = acc.evaluated == 0
                       ? 0.0
                       : static_cast<double>(acc.matched) / static_cast<double>(acc.evaluated);
  }
  out["ALL"] = pair_accuracy(pairs, predicted);
  return out;
}

namespace {

nlohmann::ordered_json scores_json(const B3Scores& s) {
  nlohmann::ordered_json j;
  j["recall"] = s.recall;
  j["precision"] = s.precision;
  j["f1"] = s.f1;
  j["n"] = s.n;
  j["dropped"] = s.dropped;
  return j;
}

nlohmann::ordered_json accuracy_json(const PairAccuracy& a) {
  nlohmann::ordered_json j;
  j["accuracy"] = a.accuracy;
  j["evaluated"] = a.evaluated;
  j["matched"] = a.matched;
  j["dropped"] = a.dropped;
  return j;
}

}  // namespace

nlohmann::ordered_json metrics_json(const B3Scores& scores,
                                    const std::map<std::string, B3Scores>* strata) {
  auto j = scores_json(scores);
  j["strata"] = nlohmann::ordered_json::object();
  if (strata != nullptr) {
    for (const auto& [value, s] : *strata) j["strata"][value] = scores_json(s);
  }
  return j;
}

nlohmann::ordered_json pair_metrics_json(const PairAccuracy& accuracy,
                                         const std::map<std::string, PairAccuracy>* strata) {
  auto j = accuracy_json(accuracy);
  j["strata"] = nlohmann::ordered_json::object();
  if (strata != nullptr) {
    for (const auto& [value, a] : *strata) j["strata"][value] = accuracy_json(a);
  }
  return j;
}

}  // namespace linklab
