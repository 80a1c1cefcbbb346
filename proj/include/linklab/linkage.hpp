#pragma once

#include <cstddef>
#include <cstdint>
#include <istream>
#include <optional>
#include <ostream>
#include <span>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "linklab/clustering.hpp"
#include "linklab/corpus.hpp"
#include "linklab/normalize.hpp"

namespace linklab {

enum class LabelSource { authority, grant };

std::string_view to_string(LabelSource source);
LabelSource parse_label_source(std::string_view text);

struct LabeledInstance {
  InstanceId instance;
  PersonName name;
  std::string label_id;
  LabelSource source = LabelSource::authority;

  friend bool operator==(const LabeledInstance&, const LabeledInstance&) = default;
};

enum class DuplicateTitlePolicy { drop_all, keep_first };

DuplicateTitlePolicy parse_dup_title_policy(std::string_view text);

struct LinkOptions {
  DuplicateTitlePolicy duplicate_titles = DuplicateTitlePolicy::drop_all;
  HyphenPolicy hyphens = HyphenPolicy::remove;
};

enum class DropReason {
  duplicate_title,    // corpus title shared by several pmids after normalization
  multi_byline,       // one profile matched two or more byline names on a paper
  multi_label,        // one instance matched two or more distinct labels
  unparseable_name,   // registry/PI name yielded no surname
};

std::string_view to_string(DropReason reason);

struct DropRecord {
  DropReason reason = DropReason::multi_label;
  std::uint32_t pmid = 0;  // 0 when not tied to a paper
  std::vector<InstanceId> instances;
  std::vector<std::string> label_ids;

  friend bool operator==(const DropRecord&, const DropRecord&) = default;
};

struct LinkStats {
  std::size_t titles_rejected = 0;       // fewer than five words
  std::size_t titles_duplicate = 0;      // pmids dropped for shared titles
  std::size_t paper_matches = 0;         // (pmid, label) pairs examined
  std::size_t missing_pmids = 0;         // grant pmids absent from the corpus
  std::size_t no_name_match = 0;         // paper matched, no byline name did
  std::size_t conflicts = 0;             // multi_byline + multi_label records

  friend bool operator==(const LinkStats&, const LinkStats&) = default;
};

struct LinkResult {
  std::vector<LabeledInstance> labels;  // sorted by instance
  std::vector<DropRecord> drops;        // deterministic order
  LinkStats stats;
};

// Title match against authority profiles, then name match on full surname
// and first forename initial. Ambiguous cases are dropped, never guessed.
LinkResult link_authority(const Corpus& corpus, const Registry& registry,
                          const LinkOptions& options = {});

// PMID match against funded papers, then the same name match.
LinkResult link_grants(const Corpus& corpus, const GrantTable& grants);

// Unordered positive pairs of instances. No identical instances, no two
// instances of the same paper.
class PairSet {
 public:
  using Pair = std::pair<InstanceId, InstanceId>;

  PairSet() = default;
  // Orients each pair (smaller id first) and removes duplicates. Throws
  // std::invalid_argument on an identical or same-paper pair.
  explicit PairSet(std::vector<Pair> pairs);

  std::span<const Pair> pairs() const { return pairs_; }
  std::size_t size() const { return pairs_.size(); }
  bool empty() const { return pairs_.empty(); }

  friend bool operator==(const PairSet&, const PairSet&) = default;

 private:
  std::vector<Pair> pairs_;
};

struct PairStats {
  std::size_t edges = 0;
  std::size_t edges_missing_paper = 0;
  std::size_t combinations = 0;  // byline combinations examined
};

PairSet extract_selfcitation_pairs(const Corpus& corpus, const Citations& citations,
                                   PairStats* stats = nullptr);

enum class Attribute { ethnicity, gender, year };

Attribute parse_attribute(std::string_view text);
std::string_view to_string(Attribute attribute);

struct EvalRow {
  InstanceId instance;
  std::string truth_label;
  std::string predicted_cluster;
  std::optional<int> year;
  std::optional<std::string> ethnicity;
  std::optional<std::string> gender;

  // Stratum value; "UNKNOWN" when missing.
  std::string value(Attribute attribute) const;

  friend bool operator==(const EvalRow&, const EvalRow&) = default;
};

class EvalDataset {
 public:
  EvalDataset() = default;
  // Sorts by instance. Throws std::invalid_argument on repeated instances
  // or rows lacking a truth label or predicted cluster.
  explicit EvalDataset(std::vector<EvalRow> rows);

  std::span<const EvalRow> rows() const { return rows_; }
  std::size_t size() const { return rows_.size(); }
  bool empty() const { return rows_.empty(); }

  Clustering truth() const;
  Clustering predicted() const;

  friend bool operator==(const EvalDataset&, const EvalDataset&) = default;

 private:
  std::vector<EvalRow> rows_;
};

struct JoinStats {
  std::size_t labels = 0;
  std::size_t joined = 0;
  std::size_t unclustered = 0;  // labeled but absent from the clustering
  std::size_t annotated = 0;
};

// Inner join of labels with a predicted clustering. Labels must hold at
// most one label per instance (filter by source first).
EvalDataset join_labels(std::span<const LabeledInstance> labels, const Clustering& predicted,
                        const Corpus& corpus, const Annotations& annotations,
                        JoinStats* stats = nullptr);

std::vector<LabeledInstance> filter_source(std::span<const LabeledInstance> labels,
                                           LabelSource source);

struct Disagreement {
  InstanceId instance;
  std::string label_a;
  std::string label_b;

  friend bool operator==(const Disagreement&, const Disagreement&) = default;
};

struct AgreementReport {
  std::size_t overlap_count = 0;
  std::size_t agree_count = 0;
  std::vector<Disagreement> disagreements;
};

using LabelAssignment = std::pair<InstanceId, std::string>;

// Compares two labelings on their shared instances. Label namespaces may
// differ: labels are aligned one-to-one by greatest overlap, and an instance
// agrees when its pair of labels is an aligned pair.
AgreementReport label_agreement(std::span<const LabelAssignment> a,
                                std::span<const LabelAssignment> b);
AgreementReport label_agreement(const EvalDataset& a, const EvalDataset& b);

std::vector<LabelAssignment> truth_assignments(const EvalDataset& dataset);
std::vector<LabelAssignment> label_assignments(std::span<const LabeledInstance> labels);

// labels.tsv: instance_id, label_id, source
void write_labels(std::ostream& out, std::span<const LabeledInstance> labels);
// Names are re-derived from the corpus when given; otherwise left empty.
std::vector<LabeledInstance> ingest_labels(std::istream& in, const std::string& source = "labels.tsv",
                                           const Corpus* corpus = nullptr);
std::vector<LabeledInstance> load_labels(const std::string& path, const Corpus* corpus = nullptr);

// pairs.tsv: instance_a, instance_b
void write_pairs(std::ostream& out, const PairSet& pairs);
PairSet ingest_pairs(std::istream& in, const std::string& source = "pairs.tsv");
PairSet load_pairs(const std::string& path);

// eval_dataset.tsv: instance_id, truth_label, predicted_cluster, year,
// ethnicity, gender. Missing values are empty fields.
void write_eval_dataset(std::ostream& out, const EvalDataset& dataset);
EvalDataset ingest_eval_dataset(std::istream& in, const std::string& source = "eval_dataset.tsv");
EvalDataset load_eval_dataset(const std::string& path);

// conflicts.log: reason, pmid, instances (','-joined), labels (','-joined)
void write_drops(std::ostream& out, std::span<const DropRecord> drops);

}  // namespace linklab
