#pragma once

#include <cstddef>
#include <map>
#include <string>

#include "json.hpp"
#include "linklab/clustering.hpp"
#include "linklab/corpus.hpp"
#include "linklab/linkage.hpp"

namespace linklab {

struct B3Options {
  // Instances in truth but not in predicted: throw (strict) or drop and count.
  bool strict = true;
  // Intersect predicted clusters with the evaluated universe before taking
  // |P(t)|. When false the full predicted cluster size is used.
  bool restrict_predicted = true;
};

struct B3Scores {
  double recall = 0.0;
  double precision = 0.0;
  double f1 = 0.0;
  std::size_t n = 0;        // evaluated instances
  std::size_t dropped = 0;  // truth instances missing from predicted

  friend bool operator==(const B3Scores&, const B3Scores&) = default;
};

// Harmonic mean; 0 when both inputs are 0.
double f1_score(double recall, double precision);

// B-cubed recall/precision averaged over truth instances t:
//   recall    = mean |P(t) ∩ T(t)| / |T(t)|
//   precision = mean |P(t) ∩ T(t)| / |P(t)|
// Linear in the number of instances. Throws EvalError when nothing is left
// to evaluate.
B3Scores b3_scores(const Clustering& truth, const Clustering& predicted,
                   const B3Options& options = {});

struct PairAccuracy {
  double accuracy = 0.0;
  std::size_t evaluated = 0;
  std::size_t matched = 0;
  std::size_t dropped = 0;  // a member is absent from predicted

  friend bool operator==(const PairAccuracy&, const PairAccuracy&) = default;
};

// Share of positive pairs whose members share a predicted cluster.
PairAccuracy pair_accuracy(const PairSet& pairs, const Clustering& predicted);

// Scores per stratum value plus an "ALL" entry for the whole dataset. Rows
// without the attribute fall into "UNKNOWN".
std::map<std::string, B3Scores> stratified_eval(const EvalDataset& dataset, Attribute attribute,
                                                const B3Options& options = {});

// A pair counts toward the stratum of each of its members (once if both
// share a value). Also carries an "ALL" entry.
std::map<std::string, PairAccuracy> stratified_pair_accuracy(const PairSet& pairs,
                                                             const Clustering& predicted,
                                                             const Corpus& corpus,
                                                             const Annotations& annotations,
                                                             Attribute attribute);

// {recall, precision, f1, n, dropped, strata: {...}} in that key order.
nlohmann::ordered_json metrics_json(const B3Scores& scores,
                                    const std::map<std::string, B3Scores>* strata = nullptr);
nlohmann::ordered_json pair_metrics_json(const PairAccuracy& accuracy,
                                         const std::map<std::string, PairAccuracy>* strata = nullptr);

}  // namespace linklab
