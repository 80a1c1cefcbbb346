#pragma once

#include <cstddef>
#include <cstdint>
#include <istream>
#include <optional>
#include <ostream>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "linklab/clustering.hpp"
#include "linklab/instance_id.hpp"

namespace linklab {

struct PaperRecord {
  std::uint32_t pmid = 0;
  int year = 0;
  std::string title;
  std::vector<std::string> authors;  // byline order; author i has position i+1

  friend bool operator==(const PaperRecord&, const PaperRecord&) = default;
};

// Immutable set of papers keyed by pmid.
class Corpus {
 public:
  Corpus() = default;
  // Throws std::invalid_argument on duplicate pmids or empty bylines.
  explicit Corpus(std::vector<PaperRecord> papers);

  std::span<const PaperRecord> papers() const { return papers_; }
  std::size_t size() const { return papers_.size(); }
  std::size_t instance_count() const { return instance_count_; }

  const PaperRecord* find(std::uint32_t pmid) const;
  bool contains(InstanceId id) const;
  // Raw byline string for an instance, if it exists.
  std::optional<std::string_view> name_of(InstanceId id) const;
  std::optional<int> year_of(std::uint32_t pmid) const;

  std::vector<InstanceId> instances() const;

  friend bool operator==(const Corpus& a, const Corpus& b) { return a.papers_ == b.papers_; }

 private:
  std::vector<PaperRecord> papers_;
  std::size_t instance_count_ = 0;
};

struct AuthorityProfile {
  std::string authority_id;
  std::string person_name;
  std::vector<std::string> work_titles;  // sorted, unique

  friend bool operator==(const AuthorityProfile&, const AuthorityProfile&) = default;
};

using Registry = std::vector<AuthorityProfile>;  // sorted by authority_id

struct GrantRecord {
  std::string pi_id;
  std::string pi_name;
  std::vector<std::uint32_t> funded_pmids;  // sorted, unique

  friend bool operator==(const GrantRecord&, const GrantRecord&) = default;
};

using GrantTable = std::vector<GrantRecord>;  // sorted by pi_id

struct CitationEdge {
  std::uint32_t citing_pmid = 0;
  std::uint32_t cited_pmid = 0;

  friend auto operator<=>(const CitationEdge&, const CitationEdge&) = default;
};

using Citations = std::vector<CitationEdge>;  // sorted, unique

struct Annotation {
  InstanceId instance;
  std::string ethnicity;
  std::string gender;

  friend bool operator==(const Annotation&, const Annotation&) = default;
};

// Demographic tags per instance, stored verbatim.
class Annotations {
 public:
  Annotations() = default;
  // Throws std::invalid_argument when an instance is annotated twice.
  explicit Annotations(std::vector<Annotation> rows);

  const Annotation* find(InstanceId id) const;
  std::span<const Annotation> rows() const { return rows_; }
  std::size_t size() const { return rows_.size(); }

  friend bool operator==(const Annotations&, const Annotations&) = default;

 private:
  std::vector<Annotation> rows_;
};

// papers.tsv: pmid, year, title, authors ('|'-joined byline)
Corpus ingest_corpus(std::istream& in, const std::string& source = "papers.tsv");
// authority.tsv: authority_id, name, title (one row per profile work)
Registry ingest_authority(std::istream& in, const std::string& source = "authority.tsv");
// grants.tsv: pi_id, pi_name, pmid (one row per funded paper)
GrantTable ingest_grants(std::istream& in, const std::string& source = "grants.tsv");
// citations.tsv: citing_pmid, cited_pmid
Citations ingest_citations(std::istream& in, const std::string& source = "citations.tsv");
// annotations.tsv: instance_id, ethnicity, gender
Annotations ingest_annotations(std::istream& in, const std::string& source = "annotations.tsv");

Corpus load_corpus(const std::string& path);
Registry load_authority(const std::string& path);
GrantTable load_grants(const std::string& path);
Citations load_citations(const std::string& path);
Annotations load_annotations(const std::string& path);

void write_corpus(std::ostream& out, const Corpus& corpus);
void write_authority(std::ostream& out, const Registry& registry);
void write_grants(std::ostream& out, const GrantTable& grants);
void write_citations(std::ostream& out, const Citations& citations);
void write_annotations(std::ostream& out, const Annotations& annotations);

// Clusterings and annotations may name instances the corpus does not hold.
// Lenient mode drops them and reports the count; strict mode throws.
enum class ReferenceMode { lenient, strict };

struct Resolved {
  Clustering clustering;
  std::size_t dropped = 0;
};
Resolved resolve_references(const Corpus& corpus, const Clustering& clustering,
                            ReferenceMode mode);

struct ResolvedAnnotations {
  Annotations annotations;
  std::size_t dropped = 0;
};
ResolvedAnnotations resolve_references(const Corpus& corpus, const Annotations& annotations,
                                       ReferenceMode mode);

}  // namespace linklab
