// Copyright 2026 The z2sim Authors.

// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at

// http://www.apache.org/licenses/LICENSE-2.0

// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "z2sim/records.hpp"

#include <gtest/gtest.h>
#include <unistd.h>

#include <filesystem>
#include <string>
#include <vector>

#include "z2sim/config.hpp"
#include "z2sim/sweep.hpp"

namespace z2sim {
namespace {

namespace fs = std::filesystem;

struct TempDir {
  fs::path path;
  TempDir() {
    static int counter = 0;
    path = fs::temp_directory_path() /
           ("z2sim_rec_" + std::to_string(::getpid()) + "_" +
            std::to_string(counter++));
    fs::create_directories(path);
  }
  ~TempDir() {
    std::error_code ec;
    fs::remove_all(path, ec);
  }
  std::string str() const { return path.string(); }
};

RunParams sample_params() {
  RunParams p;
  p.n = 3;
  p.beta_h = 1.6;
  p.dt = 0.25;
  p.n_steps = 50;
  p.source_site = 4;
  p.epsilon1 = 5e-4;
  p.epsilon2 = 5e-3;
  p.zeta = 3e5;
  p.t_gate = 1e-8;
  p.master_seed = 1;
  p.n_traj = 1000;
  p.sites = {4};
  return p;
}

TEST(RecordsTest, TupleKeyStableAndShardSuffixed) {
  const RunParams p = sample_params();
  const std::string k1 = tuple_key(p, ShardSpec{0, 1}, "source");
  const std::string k2 = tuple_key(p, ShardSpec{0, 1}, "source");
  EXPECT_EQ(k1, k2);
  EXPECT_EQ(k1.size(), 16u);
  EXPECT_EQ(k1.find_first_not_of("0123456789abcdef"), std::string::npos);

  RunParams q = p;
  q.epsilon2 = 4e-3;
  EXPECT_NE(tuple_key(q, ShardSpec{0, 1}, "source"), k1);
  EXPECT_NE(tuple_key(p, ShardSpec{0, 1}, "all"), k1);

  const std::string sharded = tuple_key(p, ShardSpec{2, 8}, "source");
  EXPECT_EQ(sharded, k1 + "-s2of8");
}

ResultRecord sample_record() {
  ResultRecord r;
  r.kind = "ensemble";
  r.params = sample_params();
  r.params.master_seed = 18446744073709551615ull;  // full 64-bit range
  r.site_policy = "source";
  r.threads = 2;
  r.wall_time_s = 1.5;

  r.series.source_site = 4;
  r.series.sites = {4};
  r.series.times = {0.0, 0.25, 0.5, 0.75};
  r.series.values = {{{1.0, 0.0}, {0.5, -0.25}, {-0.125, 1.0 / 3.0}, {0, 0}}};
  r.series.stderr_re = {{0, 0.01, 0.02, 0.03}};
  r.series.stderr_im = {{0, 0.011, 0.021, 0.031}};
  r.series.n_traj_effective = 1000;
  r.series.stderr_defined = true;

  r.keep_samples = true;
  TrajectorySamples t;
  t.index = 7;
  t.values = {{{0.9, 0.1}, {0.4, -0.2}, {-0.1, 0.3}, {0.05, 0}}};
  r.trajectories.push_back(t);

  DftOptions opt;
  r.has_spectrum = true;
  r.spectrum = dft(r.series, 4, opt);
  r.has_mass = true;
  r.mass = MassEstimate{4.2, 0.1, true, 0.8};
  r.has_rel_err = true;
  r.rel_err_pct = -2.5;
  r.baseline_key = "0123456789abcdef";
  r.has_xi = true;
  r.xi_anisotropy = 0.53;
  r.xi_multiple_roots = true;
  r.key = tuple_key(r.params, r.shard, r.site_policy);
  return r;
}

TEST(RecordsTest, JsonRoundTripIsExact) {
  const ResultRecord r = sample_record();
  const json j1 = record_to_json(r);
  const ResultRecord back = record_from_json(j1);
  const json j2 = record_to_json(back);
  EXPECT_EQ(j1, j2);

  EXPECT_EQ(back.params.master_seed, 18446744073709551615ull);
  EXPECT_EQ(j1.at("params").at("master_seed").get<std::string>(),
            "18446744073709551615");
  EXPECT_TRUE(back.keep_samples);
  ASSERT_EQ(back.trajectories.size(), 1u);
  EXPECT_EQ(back.trajectories[0].index, 7u);
  EXPECT_TRUE(back.has_spectrum);
  EXPECT_TRUE(back.has_mass);
  EXPECT_DOUBLE_EQ(back.mass.mass, 4.2);
  EXPECT_TRUE(back.has_rel_err);
  EXPECT_EQ(back.baseline_key, "0123456789abcdef");
  EXPECT_TRUE(back.has_xi);
  EXPECT_TRUE(back.xi_multiple_roots);
  EXPECT_EQ(j1.at("schema").get<std::string>(), kRecordSchema);
}

TEST(RecordsTest, OptionalSectionsStayAbsent) {
  ResultRecord r = sample_record();
  r.keep_samples = false;
  r.trajectories.clear();
  r.has_spectrum = false;
  r.has_mass = false;
  r.has_rel_err = false;
  r.has_xi = false;
  const json j = record_to_json(r);
  EXPECT_FALSE(j.contains("trajectories"));
  EXPECT_FALSE(j.contains("spectrum"));
  EXPECT_FALSE(j.contains("mass"));
  EXPECT_FALSE(j.contains("relative_error_pct"));
  EXPECT_FALSE(j.contains("xi_anisotropy"));
  const ResultRecord back = record_from_json(j);
  EXPECT_FALSE(back.keep_samples);
  EXPECT_FALSE(back.has_spectrum);
  EXPECT_FALSE(back.has_mass);
}

TEST(RecordsTest, UnknownSchemaRejected) {
  json j = record_to_json(sample_record());
  j["schema"] = "z2sim.result.v999";
  EXPECT_THROW(record_from_json(j), IoError);
}

TEST(RecordsTest, CsvViews) {
  const ResultRecord r = sample_record();
  const std::string csv = series_to_csv(r.series);
  std::size_t lines = 0;
  for (char c : csv)
    if (c == '\n') lines++;
  EXPECT_EQ(lines, 1 + r.series.sites.size() * r.series.times.size());
  EXPECT_EQ(csv.rfind("site,k,t,re,im,stderr_re,stderr_im\n", 0), 0u);
  // %.17g keeps non-representable decimals intact.
  EXPECT_NE(csv.find("0.33333333333333331"), std::string::npos);

  const std::string scsv = spectrum_to_csv(r.spectrum);
  lines = 0;
  for (char c : scsv)
    if (c == '\n') lines++;
  EXPECT_EQ(lines, 1 + r.spectrum.frequencies.size());
  EXPECT_EQ(scsv.rfind("omega,magnitude,phase\n", 0), 0u);
}

TEST(RecordsTest, FileRoundTripAndMissingFile) {
  TempDir dir;
  const ResultRecord r = sample_record();
  const std::string path = dir.str() + "/" + r.key + ".json";
  write_record(r, path);
  const ResultRecord back = read_record(path);
  EXPECT_EQ(record_to_json(back), record_to_json(r));
  EXPECT_THROW(read_record(dir.str() + "/absent.json"), IoError);
}

TEST(ConfigTest, DefaultsAreTheStandardGrid) {
  const SweepConfig cfg;
  EXPECT_EQ(cfg.n, std::vector<int>{3});
  EXPECT_EQ(cfg.beta_h, (std::vector<double>{1.4, 1.6, 1.8}));
  EXPECT_EQ(cfg.dt, std::vector<double>{0.25});
  EXPECT_FALSE(cfg.epsilon2_set);
  EXPECT_EQ(cfg.zeta, (std::vector<double>{1.5e5, 3.0e5, 4.5e5, 6.0e5, 7.5e5}));
  EXPECT_EQ(cfg.n_steps, 50);
  EXPECT_EQ(cfg.n_traj, 1000u);
  EXPECT_EQ(cfg.master_seed, 1u);
  EXPECT_EQ(cfg.source_site, -1);
  EXPECT_EQ(cfg.out_dir, "results");
  EXPECT_EQ(cfg.record_sites, SitePolicy::kSource);
}

TEST(ConfigTest, DefaultEpsilonGridsByLatticeSize) {
  EXPECT_EQ(default_epsilon2_grid(3),
            (std::vector<double>{0.0, 1e-3, 2e-3, 3e-3, 4e-3, 5e-3}));
  EXPECT_EQ(default_epsilon2_grid(2),
            (std::vector<double>{0.0, 1e-3, 2e-3, 3e-3, 4e-3, 5e-3}));
  EXPECT_EQ(
      default_epsilon2_grid(4),
      (std::vector<double>{0.0, 0.5e-3, 1.0e-3, 1.5e-3, 2.0e-3, 2.5e-3, 3e-3}));
  EXPECT_EQ(default_epsilon2_grid(6), default_epsilon2_grid(4));
}

TEST(ConfigTest, ParsesFullGrammar) {
  const std::string text =
      "# sweep for the small grid\n"
      "n = [3, 4]\n"
      "beta_h = 1.6          # scalar promotes to a list\n"
      "dt = [0.25, 0.125]\n"
      "epsilon2 = [0, 2e-3]\n"
      "zeta_crosstalk = [0, 3e5]\n"
      "\n"
      "n_steps = 20\n"
      "n_traj = 64\n"
      "master_seed = 99\n"
      "source_site = 4\n"
      "out_dir = sweep_out\n"
      "record_sites = symmetry\n";
  const SweepConfig cfg = parse_config(text);
  EXPECT_EQ(cfg.n, (std::vector<int>{3, 4}));
  EXPECT_EQ(cfg.beta_h, std::vector<double>{1.6});
  EXPECT_EQ(cfg.dt, (std::vector<double>{0.25, 0.125}));
  EXPECT_TRUE(cfg.epsilon2_set);
  EXPECT_EQ(cfg.epsilon2, (std::vector<double>{0.0, 2e-3}));
  EXPECT_EQ(cfg.zeta, (std::vector<double>{0.0, 3e5}));
  EXPECT_EQ(cfg.n_steps, 20);
  EXPECT_EQ(cfg.n_traj, 64u);
  EXPECT_EQ(cfg.master_seed, 99u);
  EXPECT_EQ(cfg.source_site, 4);
  EXPECT_EQ(cfg.out_dir, "sweep_out");
  EXPECT_EQ(cfg.record_sites, SitePolicy::kSymmetry);
}

TEST(ConfigTest, ErrorsNameTheLine) {
  const auto message_of = [](const std::string& text) {
    try {
      parse_config(text);
    } catch (const ConfigError& e) {
      return std::string(e.what());
    }
    return std::string("no error");
  };
  EXPECT_NE(message_of("n = 3\nbogus_key = 1\n").find("line 2"),
            std::string::npos);
  EXPECT_NE(message_of("n = 3\nbogus_key = 1\n").find("bogus_key"),
            std::string::npos);
  EXPECT_NE(message_of("just words\n").find("key = value"), std::string::npos);
  EXPECT_NE(message_of("dt = fast\n").find("not a number"), std::string::npos);
  EXPECT_NE(message_of("n = [3\n").find("unterminated"), std::string::npos);
  EXPECT_NE(message_of("n = [3,,4]\n").find("empty list element"),
            std::string::npos);
  EXPECT_NE(message_of("n_steps = [1, 2]\n").find("single value"),
            std::string::npos);
  EXPECT_NE(message_of("record_sites = everything\n").find("record_sites"),
            std::string::npos);
}

TEST(ConfigTest, ValidationRejectsBadValues) {
  EXPECT_THROW(parse_config("n = 0\n"), ConfigError);
  EXPECT_THROW(parse_config("n = 31\n"), ConfigError);
  EXPECT_THROW(parse_config("beta_h = -1\n"), ConfigError);
  EXPECT_THROW(parse_config("dt = 0\n"), ConfigError);
  EXPECT_THROW(parse_config("epsilon2 = 1.5\n"), ConfigError);
  EXPECT_THROW(parse_config("zeta_crosstalk = -1\n"), ConfigError);
  EXPECT_THROW(parse_config("n_steps = 0\n"), ConfigError);
  EXPECT_THROW(parse_config("n_traj = 0\n"), ConfigError);
  EXPECT_NO_THROW(parse_config("epsilon2 = 0\n"));
}

TEST(SweepTest, DefaultGridExpandsTo93Tuples) {
  const SweepConfig cfg;
  const std::vector<SweepTuple> tuples = expand_tuples(cfg);
  // Per (n, beta_h, dt): one baseline plus 6 epsilon x 5 zeta noisy points
  // (no zeta=0 in the default list, so nothing besides the baseline drops).
  EXPECT_EQ(tuples.size(), 3u * 31u);
  EXPECT_TRUE(tuples[0].baseline);
  EXPECT_EQ(tuples[0].epsilon2, 0.0);
  EXPECT_EQ(tuples[0].zeta, 0.0);

  std::size_t baselines = 0;
  for (const SweepTuple& t : tuples) {
    if (t.baseline) {
      baselines++;
      EXPECT_EQ(t.epsilon2, 0.0);
      EXPECT_EQ(t.zeta, 0.0);
    } else {
      EXPECT_TRUE(t.epsilon2 > 0 || t.zeta > 0);
    }
  }
  EXPECT_EQ(baselines, 3u);
}

TEST(SweepTest, ExplicitZeroZeroPairIsSkipped) {
  SweepConfig cfg;
  cfg.n = {2};
  cfg.beta_h = {1.6};
  cfg.epsilon2 = {0.0, 1e-3};
  cfg.epsilon2_set = true;
  cfg.zeta = {0.0, 3e5};
  const std::vector<SweepTuple> tuples = expand_tuples(cfg);
  // Baseline + {(0,3e5), (1e-3,0), (1e-3,3e5)}.
  EXPECT_EQ(tuples.size(), 4u);
  for (std::size_t i = 1; i < tuples.size(); ++i)
    EXPECT_FALSE(tuples[i].baseline);
}

TEST(SweepTest, PlannedKeyMatchesExecutedKey) {
  SweepTuple t;
  t.n = 2;
  t.beta_h = 1.6;
  t.dt = 0.25;
  t.epsilon2 = 5e-3;
  t.zeta = 1e5;
  TupleRunOptions opt;
  opt.n_steps = 8;
  opt.n_traj = 5;
  opt.master_seed = 7;
  const std::string planned = planned_key(t, opt);
  const TupleOutcome out = run_tuple(t, opt);
  EXPECT_EQ(out.record.key, planned);
  EXPECT_EQ(out.record.kind, "ensemble");
  EXPECT_TRUE(out.record.has_spectrum);
  EXPECT_EQ(out.record.series.times.size(), 9u);
  EXPECT_FALSE(out.record.keep_samples);
}

TEST(SweepTest, ShardedRunKeepsSamplesAndSkipsAnalysis) {
  SweepTuple t;
  t.n = 2;
  t.epsilon2 = 5e-3;
  TupleRunOptions opt;
  opt.n_steps = 4;
  opt.n_traj = 6;
  opt.shard = ShardSpec{0, 2};
  const TupleOutcome out = run_tuple(t, opt);
  EXPECT_TRUE(out.record.keep_samples);
  EXPECT_EQ(out.record.trajectories.size(), 3u);
  EXPECT_FALSE(out.record.has_spectrum);
  EXPECT_FALSE(out.record.has_mass);
  EXPECT_NE(out.record.key.find("-s0of2"), std::string::npos);
}

TEST(SweepTest, ManifestAppendAndRead) {
  TempDir dir;
  const std::string path = manifest_path(dir.str());

  ResultRecord r = sample_record();
  append_manifest(path, manifest_ok_entry(r, r.key + ".json"));
  SweepTuple t;
  append_manifest(path, manifest_error_entry(t, "deadbeef", "boom"));

  const std::vector<json> entries = read_manifest(path);
  ASSERT_EQ(entries.size(), 2u);
  EXPECT_EQ(entries[0].at("status"), "ok");
  EXPECT_EQ(entries[0].at("key"), r.key);
  EXPECT_EQ(entries[0].at("file"), r.key + ".json");
  EXPECT_EQ(entries[0].at("tuple").at("n"), 3);
  EXPECT_EQ(entries[1].at("status"), "error");
  EXPECT_EQ(entries[1].at("error"), "boom");

  EXPECT_TRUE(read_manifest(dir.str() + "/absent.jsonl").empty());
}

TEST(SweepTest, ManifestRejectsGarbageLine) {
  TempDir dir;
  const std::string path = manifest_path(dir.str());
  write_text_file(path, "{\"status\":\"ok\"}\nnot json at all\n");
  try {
    read_manifest(path);
    FAIL() << "expected parse failure";
  } catch (const IoError& e) {
    EXPECT_NE(std::string(e.what()).find("line 2"), std::string::npos);
  }
}

TEST(SweepTest, FsckCleanDirectoryPasses) {
  TempDir dir;
  ResultRecord r = sample_record();
  const std::string file = write_record_files(r, dir.str());
  append_manifest(manifest_path(dir.str()), manifest_ok_entry(r, file));
  const FsckReport rep = fsck_output_dir(dir.str());
  EXPECT_TRUE(rep.ok()) << (rep.problems.empty() ? "" : rep.problems[0]);
  EXPECT_EQ(rep.entries, 1);
  EXPECT_EQ(rep.records, 1);
}

TEST(SweepTest, FsckFlagsMissingOrphanAndMismatch) {
  {
    TempDir dir;  // manifest points at a record that is gone
    ResultRecord r = sample_record();
    append_manifest(manifest_path(dir.str()),
                    manifest_ok_entry(r, r.key + ".json"));
    const FsckReport rep = fsck_output_dir(dir.str());
    ASSERT_FALSE(rep.ok());
    EXPECT_NE(rep.problems[0].find("missing record file"), std::string::npos);
  }
  {
    TempDir dir;  // record on disk that no manifest entry accounts for
    ResultRecord r = sample_record();
    write_record_files(r, dir.str());
    const FsckReport rep = fsck_output_dir(dir.str());
    ASSERT_FALSE(rep.ok());
    EXPECT_NE(rep.problems[0].find("no ok manifest entry"), std::string::npos);
  }
  {
    TempDir dir;  // stored key disagrees with the manifest key
    ResultRecord r = sample_record();
    const std::string file = write_record_files(r, dir.str());
    json entry = manifest_ok_entry(r, file);
    ResultRecord tampered = r;
    tampered.key = "0000000000000000";
    write_record(tampered, dir.str() + "/" + file);
    append_manifest(manifest_path(dir.str()), entry);
    const FsckReport rep = fsck_output_dir(dir.str());
    ASSERT_FALSE(rep.ok());
    bool found = false;
    for (const std::string& p : rep.problems)
      if (p.find("key mismatch") != std::string::npos) found = true;
    EXPECT_TRUE(found);
  }
}

TEST(SweepTest, AnalyzeRecordReportsNoSignal) {
  ResultRecord r = sample_record();
  r.has_spectrum = false;
  r.has_mass = false;
  for (auto& row : r.series.values)
    for (cdouble& v : row) v = cdouble{0.25, 0};  // flat series
  EXPECT_FALSE(analyze_record(r, DftOptions{}, true));
  EXPECT_TRUE(r.has_spectrum);
  EXPECT_FALSE(r.has_mass);
}

}  // namespace
}  // namespace z2sim
