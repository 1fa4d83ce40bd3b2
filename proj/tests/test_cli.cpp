#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <sys/wait.h>

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <string>

#include <json.hpp>

using nlohmann::ordered_json;
namespace fs = std::filesystem;

namespace {

struct CliResult {
  int code;
  std::string out;  // stdout and stderr interleaved
};

CliResult run_cli(const std::string& args, const std::string& env = "") {
  std::string cmd = env + (env.empty() ? "" : " ") + HYPERMON_BIN + " " + args +
                    " 2>&1";
  FILE* p = popen(cmd.c_str(), "r");
  REQUIRE(p != nullptr);
  std::string out;
  char buf[4096];
  size_t n;
  while ((n = fread(buf, 1, sizeof buf, p)) > 0) out.append(buf, n);
  int st = pclose(p);
  int code = WIFEXITED(st) ? WEXITSTATUS(st) : -1;
  return {code, out};
}

const fs::path& fixture_dir() {
  static fs::path dir = [] {
    fs::path d = fs::temp_directory_path() / "hypermon_cli_fixtures";
    fs::create_directories(d);
    auto put = [&](const char* name, const std::string& body) {
      std::ofstream(d / name) << body;
    };
    put("phi_a.hml",
        "forall p. max x. (<b@p> x \\/ exists q. (q != p /\\ <a@q> x))\n");
    put("phi_eh.hml",
        "# after every step, an a must follow\n"
        "exists p. max x. ([a@p]<a@p> x /\\ [b@p]<a@p> x)\n");
    put("phi_pair.hml", "exists p. exists q. ([a@p] ff /\\ [b@q] ff)\n");
    put("bad.hml", "max x. x\n");
    put("broken.hml", "max x. (\n");
    put("t1.json", ordered_json{
        {"locations", {"l1", "l2", "l3"}},
        {"actions", {"a", "b"}},
        {"prefix", {{{"l1", "a"}, {"l2", "b"}, {"l3", "b"}}}},
        {"loop", {{{"l1", "a"}, {"l2", "a"}, {"l3", "a"}},
                  {{"l1", "a"}, {"l2", "a"}, {"l3", "b"}}}}}.dump(2));
    put("tprime.json", ordered_json{
        {"locations", {"1", "2"}},
        {"actions", {"a", "b"}},
        {"prefix", ordered_json::array()},
        {"loop", {{{"1", "b"}, {"2", "a"}},
                  {{"1", "b"}, {"2", "b"}}}}}.dump(2));
    put("good12.json", ordered_json{
        {"locations", {"1", "2"}},
        {"actions", {"a", "b"}},
        {"prefix", ordered_json::array()},
        {"loop", {{{"1", "b"}, {"2", "a"}}}}}.dump(2));
    return d;
  }();
  return dir;
}

std::string fx(const char* name) { return (fixture_dir() / name).string(); }

}  // namespace

TEST_CASE("parse normalizes and reports well-formedness problems") {
  auto ok = run_cli("parse -f " + fx("phi_eh.hml"));
  CHECK(ok.code == 0);
  CHECK(ok.out.find("exists") != std::string::npos);

  auto unguarded = run_cli("parse -f " + fx("bad.hml"));
  CHECK(unguarded.code == 1);
  CHECK(unguarded.out.find("problem:") != std::string::npos);

  auto broken = run_cli("parse -f " + fx("broken.hml"));
  CHECK(broken.code == 2);
  CHECK(broken.out.find("error:") != std::string::npos);
}

TEST_CASE("classify prints every fragment the formula lies in") {
  auto r = run_cli("classify -f " + fx("phi_a.hml") + " --json");
  CHECK(r.code == 0);
  auto j = ordered_json::parse(r.out);
  auto& frs = j["fragments"];
  auto has = [&](const char* s) {
    for (const auto& x : frs)
      if (x == s) return true;
    return false;
  };
  CHECK(has("HyperRecHML"));
  CHECK(has("HyperMaxHML"));
  CHECK(!has("PHyperRecHML"));
  CHECK(!has("Qf"));
}

TEST_CASE("eval reports satisfaction and positions") {
  auto unsat = run_cli("eval -f " + fx("phi_a.hml") + " -t " + fx("t1.json"));
  CHECK(unsat.code == 0);
  CHECK(unsat.out == "unsat\n");

  auto sat = run_cli("eval -f " + fx("phi_pair.hml") + " -t " +
                     fx("good12.json") + " --positions --json");
  CHECK(sat.code == 0);
  auto j = ordered_json::parse(sat.out);
  CHECK(j["sat"] == true);
  CHECK(j["positions"].is_array());
}

TEST_CASE("synthesis subcommands print monitors for a standalone context") {
  auto c = run_cli("synth-central -f " + fx("phi_eh.hml") +
                   " --actions a,b --locations 1,2");
  CHECK(c.code == 0);
  CHECK(c.out.find("rec") != std::string::npos);
  CHECK(c.out.find("(+)") != std::string::npos);
  CHECK(c.out.find("a@1.") != std::string::npos);

  auto d = run_cli("synth-dec -f " + fx("phi_pair.hml") +
                   " --actions a,b --locations 1,2 --json");
  CHECK(d.code == 0);
  auto j = ordered_json::parse(d.out);
  std::string m = j["monitor"];
  CHECK(m.find("]@1") != std::string::npos);
  CHECK(m.find("!{2}:a.") != std::string::npos);
  CHECK(m.find("?{1}:") != std::string::npos);

  auto missing = run_cli("synth-dec -f " + fx("phi_pair.hml"));
  CHECK(missing.code == 2);
  CHECK(missing.out.find("--actions") != std::string::npos);
}

TEST_CASE("run-central explores the instrumented runs") {
  std::string args =
      "run-central -f " + fx("phi_eh.hml") + " -t " + fx("tprime.json") +
      " --json";
  auto r = run_cli(args);
  CHECK(r.code == 0);
  auto j = ordered_json::parse(r.out);
  CHECK(j["reachable_no"] == true);
  CHECK(j["steps_to_first_no"] == 2);
  // byte-identical across invocations
  CHECK(run_cli(args).out == r.out);
}

TEST_CASE("run-dec logs multicasts and honors the scheduler flag") {
  std::string base =
      "run-dec -f " + fx("phi_pair.hml") + " -t " + fx("good12.json");
  auto lex = run_cli(base + " --json");
  CHECK(lex.code == 0);
  auto j = ordered_json::parse(lex.out);
  CHECK(j["reachable_yes"] == true);
  CHECK(j["multicast_log"].is_array());
  CHECK(!j["multicast_log"].empty());

  auto seeded = run_cli(base + " --scheduler seed:5 --json");
  CHECK(seeded.code == 0);
  auto js = ordered_json::parse(seeded.out);
  CHECK(js["reachable_yes"] == j["reachable_yes"]);
  CHECK(js["reachable_no"] == j["reachable_no"]);

  auto bad = run_cli(base + " --scheduler sometimes");
  CHECK(bad.code == 2);
}

TEST_CASE("diff compares the two monitors against the semantics") {
  auto r = run_cli("diff -f " + fx("phi_eh.hml") + " -t " + fx("tprime.json"));
  CHECK(r.code == 0);
  CHECK(r.out.find("verdicts match") != std::string::npos);

  auto j = run_cli("diff -f " + fx("phi_pair.hml") + " -t " +
                   fx("good12.json") + " --json");
  CHECK(j.code == 0);
  auto parsed = ordered_json::parse(j.out);
  CHECK(parsed["monitors_agree"] == true);
  CHECK(parsed["oracle_agrees"] == true);
}

TEST_CASE("errors carry machine-readable kinds and exit codes") {
  auto missing = run_cli("eval -f /nonexistent.hml -t " + fx("t1.json") +
                         " --json");
  CHECK(missing.code == 2);
  auto j = ordered_json::parse(missing.out);
  CHECK(j["kind"] == "usage");

  auto budget = run_cli("run-central -f " + fx("phi_eh.hml") + " -t " +
                        fx("tprime.json") + " --json",
                        "HYPERMON_MAX_STATES=2");
  CHECK(budget.code == 3);
  auto jb = ordered_json::parse(budget.out);
  CHECK(jb["kind"] == "budget");
  CHECK(jb["explored"].is_number());

  auto flag = run_cli("run-central -f " + fx("phi_eh.hml") + " -t " +
                      fx("tprime.json") + " --max-states 2");
  CHECK(flag.code == 3);

  auto badenv = run_cli("run-central -f " + fx("phi_eh.hml") + " -t " +
                        fx("tprime.json"),
                        "HYPERMON_MAX_STATES=soon");
  CHECK(badenv.code == 2);
}

TEST_CASE("verify runs a small suite from the command line") {
  auto r = run_cli("verify --suite oracle --samples 20 --seed 1");
  CHECK(r.code == 0);
  CHECK(r.out.find("suite oracle: 20 samples, 0 failures") !=
        std::string::npos);

  auto j = run_cli("verify --suite soundness --samples 10 --json");
  CHECK(j.code == 0);
  auto parsed = ordered_json::parse(j.out);
  CHECK(parsed["name"] == "soundness");
  CHECK(parsed["failures"] == 0);

  auto unknown = run_cli("verify --suite nonsense --samples 1");
  CHECK(unknown.code == 2);
}
