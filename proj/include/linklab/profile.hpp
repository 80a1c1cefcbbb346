#pragma once

#include <cstddef>
#include <cstdint>
#include <map>
#include <ostream>
#include <span>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "linklab/baseline.hpp"
#include "linklab/clustering.hpp"
#include "linklab/corpus.hpp"
#include "linklab/linkage.hpp"

namespace linklab {

// value -> percentage of rows (sums to 100)
using Distribution = std::map<std::string, double>;

Distribution distribution(std::span<const std::string> values);
Distribution distribution(const EvalDataset& dataset, Attribute attribute);
// Population view: every corpus instance.
Distribution instance_distribution(const Corpus& corpus, const Annotations& annotations,
                                   Attribute attribute);
// Both members of every pair are counted.
Distribution pair_distribution(const PairSet& pairs, const Corpus& corpus,
                               const Annotations& annotations, Attribute attribute);

// One row per value, one percentage column per named distribution; values
// absent from a distribution print as 0.
void write_distribution_table(std::ostream& out,
                              std::span<const std::pair<std::string, Distribution>> columns);

struct CcdfPoint {
  std::size_t size = 0;
  double fraction_at_least = 0.0;

  friend bool operator==(const CcdfPoint&, const CcdfPoint&) = default;
};

// Fraction of blocks with at least each observed size. Always starts with
// (1, 1.0). Empty input gives an empty curve.
std::vector<CcdfPoint> block_size_ccdf(std::span<const std::size_t> block_sizes);
std::vector<CcdfPoint> block_size_ccdf(const Blocks& blocks);

// Largest vertical gap between two CCDF step functions.
double ks_distance(std::span<const CcdfPoint> a, std::span<const CcdfPoint> b);

void write_ccdf_table(std::ostream& out,
                      std::span<const std::pair<std::string, std::vector<CcdfPoint>>> curves);

// Uniform sample without replacement, returned sorted. Deterministic per
// seed. Throws ConfigError when n exceeds the population.
std::vector<InstanceId> reference_sample(std::span<const InstanceId> population, std::size_t n,
                                         std::uint64_t seed);

enum class SynonymType { flipped_order, surname_variant, initial_variant };

std::string_view to_string(SynonymType type);

struct TypologyCounts {
  std::size_t surname_variant = 0;
  std::size_t initial_variant = 0;
  std::size_t flipped_order = 0;
  std::size_t total_multiform_authors = 0;

  friend bool operator==(const TypologyCounts&, const TypologyCounts&) = default;
};

// How many multiform authors satisfy each rule on its own, so other
// precedence orders can be recomputed.
struct RuleHits {
  std::size_t flipped_pair = 0;
  std::size_t surnames_differ = 0;
  std::size_t initials_differ = 0;  // same surname, different first initial
};

struct TypologyResult {
  TypologyCounts counts;
  RuleHits rule_hits;
  std::size_t multiform_instances = 0;
  std::vector<std::pair<std::string, SynonymType>> assignments;  // by cluster id
};

// Authors (truth clusters) whose names span two or more surname+first-initial
// keys get exactly one type, in priority flipped_order > surname_variant >
// initial_variant. `names` must be sorted by instance.
TypologyResult classify_synonym_types(const Clustering& truth,
                                      std::span<const NamedInstance> names);

void write_typology(std::ostream& out, const TypologyResult& result);
void write_typology_assignments(std::ostream& out, const TypologyResult& result);

struct PerturbStats {
  std::map<std::string, std::size_t> group_size;
  std::map<std::string, std::size_t> changed;
};

// Reassigns floor(fraction * group size) uniformly chosen rows of every
// ethnicity group to a tag drawn uniformly from the other observed tags.
// Rows without an ethnicity are left alone.
EvalDataset perturb_tags(const EvalDataset& dataset, double fraction, std::uint64_t seed,
                         PerturbStats* stats = nullptr);

// Shortest round-trip decimal form of a double.
std::string format_double(double value);

}  // namespace linklab
