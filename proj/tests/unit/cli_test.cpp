#include "linklab/cli.hpp"

#include <sys/wait.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <map>
#include <sstream>

#include "doctest.h"
#include "json.hpp"
#include "linklab/baseline.hpp"
#include "linklab/metrics.hpp"
#include "linklab/synth.hpp"

using namespace linklab;
namespace fs = std::filesystem;

namespace {

struct Result {
  int code;
  std::string out, err;
};

Result invoke(std::vector<std::string> args) {
  std::ostringstream out, err;
  int code = cli::run(args, out, err);
  return {code, out.str(), err.str()};
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::ostringstream s;
  s << in.rdbuf();
  return s.str();
}

std::map<std::string, std::string> tree(const fs::path& dir) {
  std::map<std::string, std::string> out;
  for (const auto& e : fs::recursive_directory_iterator(dir)) {
    if (e.is_regular_file()) out[fs::relative(e.path(), dir).string()] = slurp(e.path());
  }
  return out;
}

struct Scratch {
  fs::path dir;
  explicit Scratch(const std::string& name) : dir(fs::temp_directory_path() / ("linklab_cli_" + name)) {
    fs::remove_all(dir);
    fs::create_directories(dir);
  }
  ~Scratch() { fs::remove_all(dir); }
  std::string operator/(const std::string& p) const { return (dir / p).string(); }
};

void put(const std::string& path, const std::string& body) {
  std::ofstream(path, std::ios::binary) << body;
}

}  // namespace

TEST_CASE("evaluate on identical partitions prints perfect scores") {
  Scratch s("identical");
  put(s / "truth.tsv", "cluster_id\tinstance_id\nA\t1_1\nA\t2_1\nB\t3_1\n");
  auto r = invoke({"evaluate", "--truth", s / "truth.tsv", "--pred", s / "truth.tsv", "--out", s / "out"});
  CHECK(r.code == 0);
  CHECK(r.out == "evaluate: n=3 recall=1 precision=1 f1=1 dropped=0\n");
  CHECK(fs::exists(s / "out/metrics.json"));
  CHECK(fs::exists(s / "out/run_manifest.json"));
}

TEST_CASE("evaluate against a labels table built from the same partition") {
  Scratch s("labels");
  REQUIRE(invoke({"synth", "--seed", "3", "--authors", "300", "--out", s / "b"}).code == 0);
  REQUIRE(invoke({"link-authority", "--papers", s / "b/papers.tsv", "--authority", s / "b/authority.tsv",
               "--out", s / "l"}).code == 0);
  auto labels = load_labels(s / "l/labels.tsv");
  REQUIRE_FALSE(labels.empty());
  ClusteringBuilder b;
  for (const auto& l : labels) b.add(l.label_id, l.instance);
  {
    std::ofstream f(s / "pred.tsv");
    write_clustering(f, std::move(b).build());
  }
  auto r = invoke({"evaluate", "--truth", s / "l/labels.tsv", "--pred", s / "pred.tsv", "--out", s / "e"});
  CHECK(r.code == 0);
  CHECK(r.out.find("recall=1 precision=1 f1=1 dropped=0") != std::string::npos);
}

TEST_CASE("synth twice gives identical output trees") {
  Scratch s("twice");
  REQUIRE(invoke({"synth", "--seed", "7", "--authors", "400", "--out", s / "run"}).code == 0);
  auto first = tree(s.dir / "run");
  fs::remove_all(s.dir / "run");
  REQUIRE(invoke({"synth", "--seed", "7", "--authors", "400", "--out", s / "run"}).code == 0);
  auto second = tree(s.dir / "run");
  CHECK(first.size() == 11);
  CHECK(first == second);
}

TEST_CASE("run manifest records seed, flags and checksums") {
  Scratch s("manifest");
  REQUIRE(invoke({"synth", "--seed", "11", "--authors", "100", "--out", s / "b"}).code == 0);
  auto m = nlohmann::json::parse(slurp(s / "b/run_manifest.json"));
  CHECK(m["tool"] == "linklab");
  CHECK(m["command"] == "synth");
  CHECK(m["seed"] == 11);
  CHECK(m["flags"]["authors"] == "100");
  REQUIRE(m["outputs"].size() == 10);
  for (const auto& o : m["outputs"]) {
    auto path = s.dir / "b" / o["name"].get<std::string>();
    CHECK(o["crc32"] == cli::file_crc32(path));
    CHECK(o["bytes"] == fs::file_size(path));
  }

  REQUIRE(invoke({"pairs", "--papers", s / "b/papers.tsv", "--citations", s / "b/citations.tsv", "--out",
               s / "p"}).code == 0);
  auto p = nlohmann::json::parse(slurp(s / "p/run_manifest.json"));
  CHECK(p["seed"].is_null());
  REQUIRE(p["inputs"].size() == 2);
  CHECK(p["inputs"][0]["crc32"] == cli::file_crc32(s / "b/papers.tsv"));
}

TEST_CASE("file_crc32 matches the standard check value") {
  Scratch s("crc");
  put(s / "x", "123456789");
  CHECK(cli::file_crc32(s / "x") == "cbf43926");
}

TEST_CASE("exit codes") {
  Scratch s("codes");
  put(s / "bad_papers.tsv", "pmid\tyear\ttitle\tauthors\nx\t1999\tT\tA, B\n");
  put(s / "papers.tsv", "pmid\tyear\ttitle\tauthors\n1\t1999\tOne two three four five\tA, B\n");
  put(s / "c1.tsv", "cluster_id\tinstance_id\nA\t1_1\n");
  put(s / "c2.tsv", "cluster_id\tinstance_id\nA\t9_1\n");
  put(s / "ds.tsv", "instance_id\ttruth_label\tpredicted_cluster\tyear\tethnicity\tgender\n"
                    "1_1\tT\tP\t1999\tE\tmale\n");

  CHECK(invoke({}).code == cli::usage_error);
  CHECK(invoke({"frobnicate"}).code == cli::usage_error);
  CHECK(invoke({"synth", "--out", s / "o"}).code == cli::usage_error);
  CHECK(invoke({"perturb", "--dataset", s / "ds.tsv", "--fraction", "0.1", "--out", s / "o"}).code ==
        cli::usage_error);
  CHECK(invoke({"profile", "--papers", s / "papers.tsv", "--sample", "1", "--out", s / "o"}).code ==
        cli::usage_error);
  CHECK(invoke({"baseline", "--papers", s / "papers.tsv", "--method", "magic", "--out", s / "o"}).code ==
        cli::usage_error);
  CHECK(invoke({"perturb", "--dataset", s / "ds.tsv", "--fraction", "0.1", "--seed", "1", "--out", s / "o"})
            .code == cli::usage_error);  // one tag only

  CHECK(invoke({"baseline", "--papers", s / "missing.tsv", "--out", s / "o"}).code == cli::missing_input);
  CHECK(invoke({"baseline", "--papers", s / "bad_papers.tsv", "--out", s / "o"}).code == cli::format_error);
  CHECK(invoke({"evaluate", "--truth", s / "c1.tsv", "--pred", s / "c2.tsv", "--out", s / "o"}).code ==
        cli::evaluation_error);
  CHECK(invoke({"evaluate", "--truth", s / "c1.tsv", "--pred", s / "c2.tsv", "--strict", "--out", s / "o"})
            .code == cli::evaluation_error);
  CHECK(invoke({"baseline", "--papers", s / "papers.tsv", "--out", s / "papers.tsv/sub"}).code ==
        cli::write_error);

  auto ok = invoke({"baseline", "--papers", s / "papers.tsv", "--out", s / "o"});
  CHECK(ok.code == cli::ok);
  CHECK(ok.out == "baseline: method=fini clusters=1 instances=1 unparseable=0\n");
  CHECK(invoke({"--version"}).code == cli::ok);
}

TEST_CASE("inputs are not modified") {
  Scratch s("readonly");
  REQUIRE(invoke({"synth", "--seed", "2", "--authors", "200", "--out", s / "b"}).code == 0);
  auto before = tree(s.dir / "b");
  REQUIRE(invoke({"link-authority", "--papers", s / "b/papers.tsv", "--authority", s / "b/authority.tsv",
               "--out", s / "l"}).code == 0);
  REQUIRE(invoke({"baseline", "--papers", s / "b/papers.tsv", "--out", s / "f"}).code == 0);
  REQUIRE(invoke({"evaluate", "--truth", s / "b/truth.tsv", "--pred", s / "f/clustering.tsv", "--out",
               s / "e"}).code == 0);
  CHECK(tree(s.dir / "b") == before);
}

TEST_CASE("full pipeline matches the in-process API") {
  Scratch s("pipeline");
  REQUIRE(invoke({"synth", "--seed", "21", "--authors", "800", "--synonym-rate", "0.05", "--homonym-rate",
               "0.1", "--out", s / "b"}).code == 0);
  SynthConfig config;
  config.n_authors = 800;
  config.synonym_rate = 0.05;
  config.homonym_rate = 0.1;
  config.seed = 21;
  auto bundle = generate(config);

  REQUIRE(invoke({"link-authority", "--papers", s / "b/papers.tsv", "--authority", s / "b/authority.tsv",
               "--out", s / "l"}).code == 0);
  auto link = link_authority(bundle.corpus, bundle.authority);
  {
    std::ostringstream api;
    write_labels(api, link.labels);
    CHECK(slurp(s / "l/labels.tsv") == api.str());
  }

  REQUIRE(invoke({"baseline", "--papers", s / "b/papers.tsv", "--method", "fini", "--out", s / "f"}).code == 0);
  auto fini = cluster_fini(name_instances(bundle.corpus)).clustering;
  {
    std::ostringstream api;
    write_clustering(api, fini);
    CHECK(slurp(s / "f/clustering.tsv") == api.str());
  }

  auto r = invoke({"evaluate", "--truth", s / "l/labels.tsv", "--pred", s / "f/clustering.tsv", "--papers",
                s / "b/papers.tsv", "--annotations", s / "b/annotations.tsv", "--stratum", "ethnicity",
                "--out", s / "e"});
  REQUIRE(r.code == 0);
  auto dataset = join_labels(link.labels, fini, bundle.corpus, bundle.annotations);
  auto scores = b3_scores(dataset.truth(), dataset.predicted());
  auto strata = stratified_eval(dataset, Attribute::ethnicity);
  CHECK(slurp(s / "e/metrics.json") == metrics_json(scores, &strata).dump(2) + "\n");
  {
    std::ostringstream api;
    write_eval_dataset(api, dataset);
    CHECK(slurp(s / "e/eval_dataset.tsv") == api.str());
  }
  CHECK(r.out == "evaluate: n=" + std::to_string(scores.n) + " recall=" + format_double(scores.recall) +
                     " precision=" + format_double(scores.precision) + " f1=" + format_double(scores.f1) +
                     " dropped=0\n");

  auto t = invoke({"evaluate", "--truth", s / "b/truth.tsv", "--pred", s / "f/clustering.tsv", "--out", s / "t"});
  REQUIRE(t.code == 0);
  auto full = b3_scores(bundle.truth, fini);
  CHECK(slurp(s / "t/metrics.json") == metrics_json(full).dump(2) + "\n");

  REQUIRE(invoke({"pairs", "--papers", s / "b/papers.tsv", "--citations", s / "b/citations.tsv", "--out",
               s / "p"}).code == 0);
  auto pairs = extract_selfcitation_pairs(bundle.corpus, bundle.citations);
  auto pe = invoke({"evaluate", "--pairs", s / "p/pairs.tsv", "--pred", s / "f/clustering.tsv", "--out", s / "pe"});
  REQUIRE(pe.code == 0);
  CHECK(slurp(s / "pe/metrics.json") == pair_metrics_json(pair_accuracy(pairs, fini)).dump(2) + "\n");

  REQUIRE(invoke({"profile", "--dataset", "AUT=" + (s / "e/eval_dataset.tsv"), "--papers", s / "b/papers.tsv",
               "--annotations", s / "b/annotations.tsv", "--truth", s / "b/truth.tsv", "--sample", "1000", "--seed", "4", "--out", s / "pr"}).code == 0);
  {
    auto names = name_instances(bundle.corpus);
    auto ids = bundle.corpus.instances();
    auto sample = reference_sample(ids, 1000, 4);
    std::vector<NamedInstance> picked;
    for (InstanceId i : sample) picked.push_back({i, *find_name(names, i)});
    std::vector<std::pair<std::string, std::vector<CcdfPoint>>> curves{
        {"corpus", block_size_ccdf(build_blocks(names))}, {"sample", block_size_ccdf(build_blocks(picked))}};
    std::ostringstream api;
    write_ccdf_table(api, curves);
    CHECK(slurp(s / "pr/ccdf.tsv") == api.str());

    std::ostringstream typ;
    write_typology(typ, classify_synonym_types(bundle.truth, names));
    CHECK(slurp(s / "pr/typology.tsv") == typ.str());

    std::vector<std::pair<std::string, Distribution>> cols{
        {"population", instance_distribution(bundle.corpus, bundle.annotations, Attribute::ethnicity)},
        {"AUT", distribution(dataset, Attribute::ethnicity)}};
    std::ostringstream dist;
    write_distribution_table(dist, cols);
    CHECK(slurp(s / "pr/dist_ethnicity.tsv") == dist.str());
  }

  REQUIRE(invoke({"perturb", "--dataset", s / "e/eval_dataset.tsv", "--fraction", "0.1", "--seed", "9", "--out",
               s / "pt"}).code == 0);
  {
    std::ostringstream api;
    write_eval_dataset(api, perturb_tags(dataset, 0.1, 9));
    CHECK(slurp(s / "pt/eval_dataset.tsv") == api.str());
  }
}

TEST_CASE("agree reports a planted single flip") {
  Scratch s("agree");
  put(s / "a.tsv", "instance_id\ttruth_label\tpredicted_cluster\tyear\tethnicity\tgender\n"
                   "1_1\tX\tP\t\t\t\n2_1\tX\tP\t\t\t\n3_1\tX\tP\t\t\t\n4_1\tY\tQ\t\t\t\n5_1\tY\tQ\t\t\t\n");
  put(s / "b.tsv", "instance_id\ttruth_label\tpredicted_cluster\tyear\tethnicity\tgender\n"
                   "1_1\tX\tP\t\t\t\n2_1\tX\tP\t\t\t\n3_1\tY\tP\t\t\t\n4_1\tY\tQ\t\t\t\n5_1\tY\tQ\t\t\t\n");
  auto r = invoke({"agree", "--a", s / "a.tsv", "--b", s / "b.tsv", "--out", s / "o"});
  REQUIRE(r.code == 0);
  CHECK(r.out.find("overlap=5 agree=4") != std::string::npos);
  auto body = slurp(s / "o/disagreements.tsv");
  CHECK(body.find("3_1") != std::string::npos);
  CHECK(std::count(body.begin(), body.end(), '\n') == 2);
}

TEST_CASE("the installed binary runs as a separate process") {
  Scratch s("process");
  std::string cmd = std::string("LINKLAB_THREADS=2 '") + LINKLAB_CLI_PATH + "' synth --seed 5 --authors 50 --out '" +
                    (s / "b") + "' > '" + (s / "stdout") + "' 2>&1";
  int status = std::system(cmd.c_str());
  REQUIRE(WIFEXITED(status));
  CHECK(WEXITSTATUS(status) == 0);
  CHECK(slurp(s / "stdout").rfind("synth: authors=50 ", 0) == 0);

  status = std::system((std::string("'") + LINKLAB_CLI_PATH + "' > /dev/null 2>&1").c_str());
  REQUIRE(WIFEXITED(status));
  CHECK(WEXITSTATUS(status) == cli::usage_error);
  status = std::system((std::string("'") + LINKLAB_CLI_PATH + "' baseline --papers /nonexistent.tsv --out '" +
                        (s / "x") + "' > /dev/null 2>&1").c_str());
  REQUIRE(WIFEXITED(status));
  CHECK(WEXITSTATUS(status) == cli::missing_input);
}
