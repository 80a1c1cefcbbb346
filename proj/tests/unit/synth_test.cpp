#include "linklab/synth.hpp"

#include <filesystem>
#include <fstream>
#include <sstream>

#include "doctest.h"
#include "linklab/baseline.hpp"
#include "linklab/error.hpp"
#include "linklab/metrics.hpp"

using namespace linklab;
namespace fs = std::filesystem;

namespace {

SynthConfig small(std::uint64_t seed) {
  SynthConfig c;
  c.n_authors = 600;
  c.seed = seed;
  return c;
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::ostringstream s;
  s << in.rdbuf();
  return s.str();
}

fs::path scratch(const std::string& name) {
  auto dir = fs::temp_directory_path() / ("linklab_synth_" + name);
  fs::remove_all(dir);
  return dir;
}

}  // namespace

TEST_CASE("same seed gives the same bundle") {
  auto config = small(5);
  config.synonym_rate = 0.05;
  config.homonym_rate = 0.1;
  config.duplicate_title_rate = 0.02;
  config.aini_variant_pair_rate = 0.05;
  auto a = generate(config);
  auto b = generate(config);
  CHECK(a.corpus == b.corpus);
  CHECK(a.authority == b.authority);
  CHECK(a.grants == b.grants);
  CHECK(a.citations == b.citations);
  CHECK(a.annotations == b.annotations);
  CHECK(a.truth == b.truth);
  CHECK(a.manifest().dump() == b.manifest().dump());

  config.seed = 6;
  CHECK_FALSE(generate(config).corpus == a.corpus);
}

TEST_CASE("written bundles are byte-identical across runs") {
  auto config = small(8);
  config.synonym_rate = 0.05;
  auto d1 = scratch("a"), d2 = scratch("b");
  auto files = write_bundle(generate(config), d1);
  CHECK(write_bundle(generate(config), d2) == files);
  CHECK(files.size() == 10);
  for (const auto& f : files) {
    REQUIRE(fs::exists(d1 / f));
    CHECK(slurp(d1 / f) == slurp(d2 / f));
  }
  CHECK(load_corpus((d1 / "papers.tsv").string()) == generate(config).corpus);
  fs::remove_all(d1);
  fs::remove_all(d2);
}

TEST_CASE("every instance belongs to exactly one planted author") {
  auto config = small(2);
  config.synonym_rate = 0.1;
  config.homonym_rate = 0.2;
  auto b = generate(config);
  CHECK(b.truth.instance_count() == b.corpus.instance_count());
  std::size_t covered = 0;
  for (const auto& a : b.ground_truth.authors) {
    REQUIRE_FALSE(a.instances.empty());
    auto c = b.truth.cluster_of(a.instances.front());
    REQUIRE(c.has_value());
    CHECK(b.truth.cluster_id(*c) == a.id);
    auto members = b.truth.members(*c);
    CHECK(std::vector<InstanceId>(members.begin(), members.end()) == a.instances);
    covered += a.instances.size();
    for (InstanceId i : a.instances) CHECK(b.corpus.contains(i));
  }
  CHECK(covered == b.corpus.instance_count());
  CHECK(b.ground_truth.authors.size() == config.n_authors);
}

TEST_CASE("no homonyms and no synonyms: FINI equals the truth") {
  auto b = generate(small(3));
  auto fini = cluster_fini(name_instances(b.corpus)).clustering;
  auto s = b3_scores(b.truth, fini);
  CHECK(s.recall == 1.0);
  CHECK(s.precision == 1.0);
  CHECK(s.f1 == 1.0);
}

TEST_CASE("flipped-order synonyms cost FINI recall only") {
  auto config = small(4);
  config.synonym_rate = 0.05;
  config.surname_variant_share = 0;
  config.initial_variant_share = 0;
  config.flipped_order_share = 1;
  auto b = generate(config);
  auto s = b3_scores(b.truth, cluster_fini(name_instances(b.corpus)).clustering);
  CHECK(s.recall < 1.0);
  CHECK(s.precision == 1.0);
  for (const auto& a : b.ground_truth.authors) {
    if (a.synonym_type) CHECK(*a.synonym_type == SynonymType::flipped_order);
  }
}

TEST_CASE("homonyms cost FINI precision while the truth still scores 1") {
  auto config = small(6);
  config.homonym_rate = 0.2;
  auto b = generate(config);
  auto names = name_instances(b.corpus);
  auto fini = b3_scores(b.truth, cluster_fini(names).clustering);
  auto aini = b3_scores(b.truth, cluster_aini(names).clustering);
  CHECK(fini.precision < 1.0);
  CHECK(fini.recall == 1.0);
  CHECK(aini.precision >= fini.precision);
  CHECK(b3_scores(b.truth, b.truth).precision == 1.0);
}

TEST_CASE("homonym groups share a surname and first initial") {
  auto config = small(7);
  config.homonym_rate = 0.3;
  auto b = generate(config);
  REQUIRE_FALSE(b.ground_truth.homonym_groups.empty());
  std::map<std::string, const SynthAuthor*> by_id;
  for (const auto& a : b.ground_truth.authors) by_id[a.id] = &a;
  for (const auto& group : b.ground_truth.homonym_groups) {
    REQUIRE(group.size() >= 2);
    auto key = fini_key(*parse_name(by_id[group[0]]->primary_name));
    for (const auto& id : group) CHECK(fini_key(*parse_name(by_id[id]->primary_name)) == key);
  }
}

TEST_CASE("realized rates track the configuration") {
  SynthConfig config;
  config.n_authors = 5000;
  config.homonym_rate = 0.2;
  config.synonym_rate = 0.05;
  config.authority_coverage = 0.4;
  config.seed = 10;
  auto m = generate(config).manifest();
  const auto& r = m["realized"];
  CHECK(r["authors"] == 5000);
  CHECK(r["homonym_rate"].get<double>() == doctest::Approx(0.2).epsilon(0.05));
  CHECK(r["synonym_rate"].get<double>() == doctest::Approx(0.05).epsilon(0.1));
  CHECK(r["authority_coverage"].get<double>() == doctest::Approx(0.4).epsilon(0.1));
  CHECK(m["config"]["seed"] == 10);
}

TEST_CASE("planted gender share is realized by exact quota") {
  SynthConfig config;
  config.n_authors = 10000;
  config.seed = 12;
  auto b = generate(config);
  std::size_t male = 0;
  for (const auto& a : b.ground_truth.authors) male += a.gender == "male";
  CHECK(male == 6746);
}

TEST_CASE("config validation") {
  auto bad = [](auto mutate) {
    SynthConfig c;
    mutate(c);
    return c;
  };
  CHECK_NOTHROW(SynthConfig{}.validate());
  CHECK_THROWS_AS(bad([](SynthConfig& c) { c.n_authors = 1; }).validate(), ConfigError);
  CHECK_THROWS_AS(bad([](SynthConfig& c) { c.homonym_rate = 1.5; }).validate(), ConfigError);
  CHECK_THROWS_AS(bad([](SynthConfig& c) { c.synonym_rate = -0.1; }).validate(), ConfigError);
  CHECK_THROWS_AS(bad([](SynthConfig& c) { c.flipped_order_share = 0.5; }).validate(), ConfigError);
  CHECK_THROWS_AS(bad([](SynthConfig& c) { c.aini_variant_pair_rate = 0.6; }).validate(), ConfigError);
  CHECK_THROWS_AS(bad([](SynthConfig& c) { c.year_min = 2010; }).validate(), ConfigError);
  CHECK_THROWS_AS(bad([](SynthConfig& c) { c.gender_shares = {{"male", 0.5}}; }).validate(), ConfigError);
  CHECK_THROWS_AS(bad([](SynthConfig& c) { c.homonym_rate_by_ethnicity = {{"Klingon", 0.1}}; }).validate(),
                  ConfigError);
  CHECK_THROWS_AS(bad([](SynthConfig& c) { c.papers_per_author = {{0, 1.0}}; }).validate(), ConfigError);
  CHECK_THROWS_AS(generate(bad([](SynthConfig& c) { c.homonym_rate = 2; })), ConfigError);
}

TEST_CASE("config json round trip and unknown keys") {
  SynthConfig c;
  c.n_authors = 77;
  c.synonym_rate = 0.25;
  c.homonym_rate_by_ethnicity = {{"Chinese", 0.5}};
  c.papers_per_author = {{2, 0.5}, {4, 0.5}};
  c.seed = 123456789012345ULL;
  auto j = c.to_json();
  auto back = SynthConfig::from_json(nlohmann::json::parse(j.dump()));
  CHECK(back.to_json() == j);
  CHECK(back.seed == c.seed);

  auto partial = SynthConfig::from_json(nlohmann::json::parse(R"({"n_authors": 50})"));
  CHECK(partial.n_authors == 50);
  CHECK(partial.synonym_rate == SynthConfig{}.synonym_rate);
  CHECK_THROWS_AS(SynthConfig::from_json(nlohmann::json::parse(R"({"n_author": 50})")), ConfigError);
}

TEST_CASE("block population has exactly the requested block sizes") {
  std::vector<std::size_t> sizes{3, 1, 1, 5, 2};
  auto names = generate_block_population(sizes, 4);
  CHECK(names.size() == 12);
  CHECK(std::is_sorted(names.begin(), names.end(),
                       [](const NamedInstance& a, const NamedInstance& b) { return a.id < b.id; }));
  auto hist = build_blocks(names).size_histogram();
  CHECK(hist == std::map<std::size_t, std::size_t>{{1, 2}, {2, 1}, {3, 1}, {5, 1}});
  CHECK(generate_block_population(sizes, 4) == names);
}
