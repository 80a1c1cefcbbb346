#pragma once

#include <cstddef>
#include <cstdint>
#include <functional>
#include <istream>
#include <optional>
#include <ostream>
#include <span>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

#include "linklab/instance_id.hpp"

namespace linklab {

// A partition of instance ids into named clusters. Used for truth labels,
// disambiguation output, and heuristic baselines alike. Clusters are kept
// sorted by id and members sorted by instance, so two clusterings built from
// the same assignments in any order compare equal.
class Clustering {
 public:
  Clustering() = default;

  std::size_t cluster_count() const { return ids_.size(); }
  std::size_t instance_count() const { return index_.size(); }
  bool empty() const { return ids_.empty(); }

  const std::string& cluster_id(std::size_t c) const { return ids_[c]; }
  std::span<const InstanceId> members(std::size_t c) const { return members_[c]; }

  std::optional<std::size_t> cluster_of(InstanceId id) const;
  bool contains(InstanceId id) const { return index_.contains(id); }

  // Keeps only instances for which `keep` holds; clusters left empty vanish.
  Clustering filtered(const std::function<bool(InstanceId)>& keep) const;

  friend bool operator==(const Clustering& a, const Clustering& b) {
    return a.ids_ == b.ids_ && a.members_ == b.members_;
  }

 private:
  friend class ClusteringBuilder;

  std::vector<std::string> ids_;
  std::vector<std::vector<InstanceId>> members_;
  std::unordered_map<InstanceId, std::uint32_t> index_;
};

class ClusteringBuilder {
 public:
  // Returns false (and records nothing) if `id` already belongs to a
  // different cluster. Re-adding the same (cluster, id) pair is a no-op.
  bool add(std::string_view cluster_id, InstanceId id);

  // The cluster `id` was assigned to, if any.
  const std::string* assigned(InstanceId id) const;

  std::size_t size() const { return owner_.size(); }

  Clustering build() &&;

 private:
  std::unordered_map<std::string, std::uint32_t> cluster_index_;
  std::vector<std::string> ids_;
  std::vector<std::vector<InstanceId>> members_;
  std::unordered_map<InstanceId, std::uint32_t> owner_;
};

// clustering.tsv: cluster_id, instance_id.
Clustering ingest_clustering(std::istream& in, const std::string& source = "clustering.tsv");
Clustering load_clustering(const std::string& path);
void write_clustering(std::ostream& out, const Clustering& clustering);

}  // namespace linklab
