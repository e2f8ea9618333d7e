#include <doctest.h>

#include <unistd.h>

#include <filesystem>
#include <fstream>
#include <sstream>

#include <json.hpp>

#include "spanlab/cli.hpp"
#include "spanlab/group.hpp"
#include "spanlab/store.hpp"

using namespace spanlab;
namespace fs = std::filesystem;
using nlohmann::json;

namespace {

struct TempDir {
  fs::path path;
  TempDir() {
    static int counter = 0;
    path = fs::temp_directory_path() /
           ("spanlab-test-" + std::to_string(::getpid()) + "-" + std::to_string(counter++));
    fs::remove_all(path);
    fs::create_directories(path);
  }
  ~TempDir() {
    std::error_code ec;
    fs::remove_all(path, ec);
  }
  std::string operator/(const std::string& name) const { return (path / name).string(); }
};

struct Run {
  int code;
  std::string out, err;
};

Run cli(std::vector<std::string> args) {
  args.insert(args.begin(), "spanlab");
  std::vector<const char*> argv;
  for (const auto& a : args) argv.push_back(a.c_str());
  std::ostringstream out, err;
  const int code = run_command(static_cast<int>(argv.size()), argv.data(), out, err);
  return {code, out.str(), err.str()};
}

bool contains(const std::string& hay, const std::string& needle) { return hay.find(needle) != std::string::npos; }

}  // namespace

TEST_CASE("sha256 and atomic writes") {
  CHECK(sha256_hex("") == "e3b0c44298fc1c149afbf4c8996fb92427ae41e4649b934ca495991b7852b855");
  CHECK(sha256_hex("abc") == "ba7816bf8f01cfea414140de5dae2223b00361a396177a9cb410ff61f20015ad");
  TempDir d;
  const fs::path p = d.path / "x.json";
  atomic_write(p, "first");
  atomic_write(p, "second");
  CHECK(read_file(p) == "second");
  int files = 0;
  for ([[maybe_unused]] const auto& e : fs::directory_iterator(d.path)) ++files;
  CHECK(files == 1);
  CHECK_THROWS_AS(atomic_write(d.path / "missing" / "x", "y"), Error);
  CHECK(utc_timestamp().size() == 20);
}

TEST_CASE("campaign store: ids, append, verify") {
  TempDir d;
  CampaignStore store(d.path / "store");
  const std::string a = store.new_campaign_id("cr", "Z15");
  const std::string b = store.new_campaign_id("cr", "Z15");
  CHECK(a == "c0001-cr-Z15");
  CHECK(a != b);

  CampaignRecord r;
  r.campaign_id = a;
  r.command = "cr";
  r.group = "Z15";
  r.config = json::object();
  r.status = CampaignStatus::complete;
  r.started = r.finished = utc_timestamp();
  r.artifacts.push_back(store.put_artifact(a, "result.json", "{}\n"));
  store.append(r);
  CHECK_THROWS_AS(store.append(r), Error);

  auto found = store.find(a);
  REQUIRE(found);
  CHECK(found->checksum == combined_checksum(found->artifacts));
  CHECK(store.verify(*found).empty());
  CHECK(to_json(campaign_from_json(to_json(*found))) == to_json(*found));
  CHECK_FALSE(store.find("nope"));

  std::ofstream(store.artifact_dir(a) / "result.json") << "tampered";
  auto bad = store.verify(*found);
  REQUIRE(bad.size() == 1);
  CHECK(contains(bad[0], "checksum mismatch"));
  fs::remove(store.artifact_dir(a) / "result.json");
  CHECK(contains(store.verify(*found)[0], "missing"));
  CHECK_THROWS_AS(campaign_status_from_string("DONE"), Error);
}

TEST_CASE("cli: cr prints both values and stores a campaign") {
  TempDir d;
  auto r = cli({"--store", d / "s", "cr", "--group", "Z15", "--both"});
  CHECK(r.code == 0);
  CHECK(contains(r.out, "formula 7"));
  CHECK(contains(r.out, "searched 7"));
  CHECK(contains(r.out, "case special_case2"));
  CHECK(contains(r.out, "campaign c0001-cr-Z15 COMPLETE"));

  auto rep = cli({"--store", d / "s", "report", "--campaign", "c0001-cr-Z15"});
  CHECK(rep.code == 0);
  CHECK(contains(rep.out, "special_case2"));
  auto md = cli({"--store", d / "s", "report", "--campaign", "c0001-cr-Z15", "--format", "markdown"});
  CHECK(contains(md.out, "| group |"));
  auto list = cli({"--store", d / "s", "report", "--list"});
  CHECK(contains(list.out, "c0001-cr-Z15"));
  auto missing = cli({"--store", d / "s", "report", "--campaign", "c9999"});
  CHECK(missing.code == 1);
  CHECK(contains(missing.err, "unknown campaign"));
}

TEST_CASE("cli: argument and group errors") {
  auto bad_group = cli({"--no-store", "cr", "--group", "Q15"});
  CHECK(bad_group.code == 1);
  CHECK(contains(bad_group.err, "malformed group spec 'Q15'"));
  auto no_sub = cli({});
  CHECK(no_sub.code != 0);
  auto bad_lemma = cli({"--no-store", "fuzz-bounds", "--lemma", "3.1"});
  CHECK(bad_lemma.code != 0);
  auto window = cli({"--no-store", "conjecture", "--which", "1", "--p", "3", "--q", "5"});
  CHECK(window.code == 1);
  CHECK(contains(window.err, "conjecture 1 needs"));
  auto not_extremal = cli({"--no-store", "classify", "--group", "Z15", "--set", "1,2,3"});
  CHECK(not_extremal.code == 1);
  CHECK(contains(not_extremal.err, "not extremal"));
  auto outside = cli({"--no-store", "verify-main", "--group", "Z16"});
  CHECK(outside.code == 1);
  CHECK(contains(outside.err, "outside the theorem's hypothesis"));
  auto unwritable = cli({"--no-store", "enumerate-extremal", "--group", "Z15", "--out", "/nonexistent/dir/x.jsonl"});
  CHECK(unwritable.code == 1);
  CHECK(contains(unwritable.err, "not writable"));
}

TEST_CASE("cli: failed campaigns are recorded") {
  TempDir d;
  auto r = cli({"--store", d / "s", "classify", "--group", "Z15", "--set", "1,2"});
  CHECK(r.code == 1);
  CampaignStore store(d.path / "s");
  auto all = store.list();
  REQUIRE(all.size() == 1);
  CHECK(all[0].status == CampaignStatus::failed);
}

TEST_CASE("cli: classify and conjecture") {
  TempDir d;
  auto c = cli({"--no-store", "classify", "--group", "Z15", "--set", "1,2,3,12,13,14"});
  CHECK(c.code == 0);
  CHECK(contains(c.out, "SHAPE_EX2"));
  auto cert = cli({"--no-store", "conjecture", "--which", "2", "--p", "3", "--q", "5", "--out", d / "cert.json"});
  CHECK(cert.code == 0);
  const json j = json::parse(read_file(d / "cert.json"));
  CHECK((j.at("verdict") == "VERIFIED" || j.at("verdict") == "REFUTED"));
  CHECK(j.at("records").size() == 28);
}

TEST_CASE("cli: enumeration interrupts, resumes and refuses bad checkpoints") {
  TempDir d;
  auto whole = cli({"--no-store", "enumerate-extremal", "--group", "Z21", "--out", d / "full.jsonl"});
  REQUIRE(whole.code == 0);

  const std::string out = d / "part.jsonl";
  auto first = cli({"--no-store", "enumerate-extremal", "--group", "Z21", "--out", out, "--max-nodes", "4000"});
  CHECK(first.code == 2);
  CHECK(fs::exists(out + ".partial"));
  CHECK(fs::exists(out + ".ckpt.json"));
  int legs = 1;
  int code = 2;
  while (code == 2 && legs < 1000) {
    code = cli({"--no-store", "enumerate-extremal", "--group", "Z21", "--out", out, "--resume", out + ".ckpt.json",
                "--max-nodes", "4000"})
               .code;
    ++legs;
  }
  CHECK(code == 0);
  CHECK(legs > 2);
  CHECK(read_file(out) == read_file(d / "full.jsonl"));
  CHECK(sha256_hex(read_file(out)) == sha256_hex(read_file(d / "full.jsonl")));

  auto again = cli({"--no-store", "enumerate-extremal", "--group", "Z21", "--out", out, "--resume", out + ".ckpt.json"});
  CHECK(again.code == 0);
  CHECK(contains(again.out, "nothing to do"));

  std::ofstream(d / "bad.json") << "{\"checkpoint\": {";
  auto corrupt = cli({"--no-store", "enumerate-extremal", "--group", "Z21", "--out", d / "x.jsonl", "--resume",
                      d / "bad.json"});
  CHECK(corrupt.code == 1);
  CHECK(contains(corrupt.err, "corrupt checkpoint"));

  cli({"--no-store", "enumerate-extremal", "--group", "Z21", "--out", d / "y.jsonl", "--max-nodes", "5000"});
  json ck = json::parse(read_file(d / "y.jsonl.ckpt.json"));
  ck["checkpoint"]["engine_version"] = "spanlab-enum-0";
  std::ofstream(d / "old.json") << ck.dump();
  auto old = cli({"--no-store", "enumerate-extremal", "--group", "Z21", "--out", d / "y.jsonl", "--resume",
                  d / "old.json"});
  CHECK(old.code == 1);
  CHECK(contains(old.err, "refusing to resume"));
}

TEST_CASE("cli: fuzz-bounds and verify-main") {
  TempDir d;
  auto f = cli({"--no-store", "--seed", "3", "fuzz-bounds", "--lemma", "2.3", "--trials", "300", "--out", d / "f.json"});
  CHECK(f.code == 0);
  const json j = json::parse(read_file(d / "f.json"));
  CHECK(j.at("seed") == 3);
  CHECK(j.at("reports")[0].at("lemma") == "2.3");

  auto m = cli({"--no-store", "verify-main", "--group", "Z33"});
  CHECK(m.code == 0);
  CHECK(contains(m.out, "VERIFIED"));
}
