#include "linklab/baseline.hpp"

#include <unordered_map>

#include "linklab/tsv.hpp"

namespace linklab {
namespace {

std::string unparseable_id(InstanceId id) { return "!" + to_string(id); }

template <class KeyFn>
BaselineResult cluster_by(std::span<const NamedInstance> instances, KeyFn key_of) {
  BaselineResult result;
  ClusteringBuilder builder;
  for (const auto& inst : instances) {
    if (inst.name) {
      builder.add(key_of(*inst.name), inst.id);
    } else {
      builder.add(unparseable_id(inst.id), inst.id);
      ++result.unparseable;
    }
  }
  result.clustering = std::move(builder).build();
  return result;
}

}  // namespace

BaselineResult cluster_fini(std::span<const NamedInstance> instances) {
  return cluster_by(instances, [](const PersonName& n) { return fini_key(n).to_string(); });
}

BaselineResult cluster_aini(std::span<const NamedInstance> instances) {
  return cluster_by(instances, [](const PersonName& n) { return aini_key(n).to_string(); });
}

std::size_t Blocks::instance_count() const {
  std::size_t n = unparseable.size();
  for (const auto& [key, members] : keyed) n += members.size();
  return n;
}

std::vector<std::size_t> Blocks::sizes() const {
  std::vector<std::size_t> out;
  out.reserve(block_count());
  for (const auto& [key, members] : keyed) out.push_back(members.size());
  out.insert(out.end(), unparseable.size(), 1);
  return out;
}

std::map<std::size_t, std::size_t> Blocks::size_histogram() const {
  std::map<std::size_t, std::size_t> out;
  for (auto s : sizes()) ++out[s];
  return out;
}

Clustering Blocks::to_clustering() const {
  ClusteringBuilder builder;
  for (const auto& [key, members] : keyed) {
    auto id = key.to_string();
    for (auto m : members) builder.add(id, m);
  }
  for (auto id : unparseable) builder.add(unparseable_id(id), id);
  return std::move(builder).build();
}

Blocks build_blocks(std::span<const NamedInstance> instances) {
  Blocks blocks;
  for (const auto& inst : instances) {
    if (inst.name) {
      blocks.keyed[fini_key(*inst.name)].push_back(inst.id);
    } else {
      blocks.unparseable.push_back(inst.id);
    }
  }
  for (auto& [key, members] : blocks.keyed) std::sort(members.begin(), members.end());
  std::sort(blocks.unparseable.begin(), blocks.unparseable.end());
  return blocks;
}

void write_block_sizes(std::ostream& out, const Blocks& blocks) {
  TsvWriter writer(out, {"block_key", "size"});
  for (const auto& [key, members] : blocks.keyed) {
    writer.row({key.to_string(), std::to_string(members.size())});
  }
  for (auto id : blocks.unparseable) writer.row({unparseable_id(id), "1"});
}

}  // namespace linklab
