#pragma once

#include <cstddef>
#include <map>
#include <ostream>
#include <span>
#include <vector>

#include "linklab/clustering.hpp"
#include "linklab/normalize.hpp"

namespace linklab {

struct BaselineResult {
  Clustering clustering;
  std::size_t unparseable = 0;
};

// Cluster ids are the serialized keys ("surname,i" / "surname,ijk").
// Unparseable names become singletons with id "!<instance_id>".
BaselineResult cluster_fini(std::span<const NamedInstance> instances);
BaselineResult cluster_aini(std::span<const NamedInstance> instances);

// Blocking on full surname + first forename initial. Same partition as
// cluster_fini, with keys kept for size statistics.
struct Blocks {
  std::map<BlockKey, std::vector<InstanceId>> keyed;
  std::vector<InstanceId> unparseable;  // each one is its own block

  std::size_t block_count() const { return keyed.size() + unparseable.size(); }
  std::size_t instance_count() const;
  std::vector<std::size_t> sizes() const;
  // block size -> number of blocks of that size
  std::map<std::size_t, std::size_t> size_histogram() const;
  Clustering to_clustering() const;
};

Blocks build_blocks(std::span<const NamedInstance> instances);

// blocks.tsv: block_key, size
void write_block_sizes(std::ostream& out, const Blocks& blocks);

}  // namespace linklab
