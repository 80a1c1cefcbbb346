#pragma once

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "json.hpp"
#include "linklab/clustering.hpp"
#include "linklab/corpus.hpp"
#include "linklab/linkage.hpp"
#include "linklab/normalize.hpp"
#include "linklab/profile.hpp"

namespace linklab {

struct SynthConfig {
  std::size_t n_authors = 1000;
  // papers led per author -> weight; realized with exact quotas
  std::map<int, double> papers_per_author{{1, 0.30}, {2, 0.20}, {3, 0.15}, {5, 0.15}, {8, 0.12}, {15, 0.08}};
  // byline length -> weight
  std::map<int, double> authors_per_paper{{1, 0.10}, {2, 0.20}, {3, 0.30}, {4, 0.20}, {6, 0.20}};
  double middle_name_rate = 0.3;

  double homonym_rate = 0.0;
  std::map<std::string, double> homonym_rate_by_ethnicity;  // overrides homonym_rate per tag

  double synonym_rate = 0.0;
  double surname_variant_share = 0.77;
  double initial_variant_share = 0.15;
  double flipped_order_share = 0.08;

  // Chance that two primary-form instances of one author differ in their
  // all-initials key.
  double aini_variant_pair_rate = 0.0;

  double authority_coverage = 0.5;
  double registry_year_skew = 0.0;  // 1 drops nearly all oldest works
  double grant_coverage = 0.1;
  double grant_paper_share = 0.5;
  double duplicate_title_rate = 0.0;
  double selfcitation_rate = 0.3;
  double citations_per_paper = 2.0;

  int year_min = 1991;
  int year_max = 2009;

  std::map<std::string, double> ethnicity_shares{
      {"English", 0.40}, {"Hispanic", 0.15}, {"Chinese", 0.15}, {"Indian", 0.10},
      {"German", 0.10}, {"Japanese", 0.10}};
  std::map<std::string, double> gender_shares{{"male", 0.6746}, {"female", 0.3254}};

  std::uint64_t seed = 1;

  // Throws ConfigError on the first inconsistency.
  void validate() const;

  nlohmann::ordered_json to_json() const;
  // Missing keys keep their defaults; unknown keys are an error.
  static SynthConfig from_json(const nlohmann::json& j);
};

struct SynthAuthor {
  std::string id;           // truth cluster id
  std::string primary_name;
  std::string alternate_name;  // empty unless multiform
  std::optional<SynonymType> synonym_type;
  std::string ethnicity;
  std::string gender;
  std::string authority_id;  // empty when absent from the registry
  std::string pi_id;         // empty when not a PI
  std::vector<InstanceId> instances;  // sorted
};

struct SynthGroundTruth {
  std::vector<SynthAuthor> authors;                 // sorted by id
  std::vector<LabeledInstance> authority_labels;    // what a sound linker can recover
  std::vector<LabeledInstance> grant_labels;
  std::vector<std::vector<std::string>> homonym_groups;  // author ids sharing a key
  std::vector<std::vector<std::uint32_t>> duplicate_title_groups;
  std::size_t aini_variant_instances = 0;
};

struct SynthBundle {
  SynthConfig config;
  Corpus corpus;
  Registry authority;
  GrantTable grants;
  Citations citations;
  Annotations annotations;
  Clustering truth;
  SynthGroundTruth ground_truth;

  // Realized counts and rates.
  nlohmann::ordered_json manifest() const;
};

SynthBundle generate(const SynthConfig& config);

// papers.tsv, authority.tsv, grants.tsv, citations.tsv, annotations.tsv,
// truth.tsv, planted_labels.tsv, multiform_authors.tsv, homonym_groups.tsv,
// manifest.json. Returns the file names written, in order.
std::vector<std::string> write_bundle(const SynthBundle& bundle, const std::filesystem::path& dir);

// Named instances whose surname+first-initial blocks have exactly the given
// sizes, in order, under shuffled instance ids.
std::vector<NamedInstance> generate_block_population(std::span<const std::size_t> block_sizes,
                                                     std::uint64_t seed);

}  // namespace linklab
