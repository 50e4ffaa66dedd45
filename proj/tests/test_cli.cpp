#include <gtest/gtest.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <sys/wait.h>

#include "cssdh/cli.hpp"
#include "support.hpp"

using namespace cssdh;
namespace fs = std::filesystem;

namespace {

struct Run {
  int status;
  std::string out;
  std::string err;
};

Run run(std::vector<std::string> args) {
  for (auto& a : args)
    if (a.starts_with("@")) a = test::path_of(a.substr(1));
  std::ostringstream out, err;
  const int status = cli::dispatch(args, out, err);
  return {status, out.str(), err.str()};
}

fs::path scratch(const std::string& name) {
  auto dir = fs::temp_directory_path() / "cssdh-cli-tests";
  fs::create_directories(dir);
  return dir / name;
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

}  // namespace

TEST(Cli, MetricsLine) {
  const auto r = run({"metrics", "@data/cssdh.ttl"});
  EXPECT_EQ(r.status, 0);
  EXPECT_EQ(r.out, "classes=171 objectProperties=141 dataProperties=210 sdhDataProperties=171\n");
}

TEST(Cli, ScanBadge) {
  const auto r = run({"scan", "@data/cssdh.ttl"});
  EXPECT_EQ(r.status, 0);
  EXPECT_EQ(r.out, "PITFALLS: 0\n");
  const auto bad = run({"scan", "@tests/fixtures/pitfalls/pf08-sdh-not-boolean.ttl"});
  EXPECT_EQ(bad.status, 1);
  EXPECT_FALSE(bad.err.empty());
}

TEST(Cli, SchemaBuildIsByteStableAndVerifyPasses) {
  const auto out = scratch("schema.ttl");
  const auto r = run({"schema", "build", "--manifest", "@data/cssdh.manifest", "--out", out.string()});
  EXPECT_EQ(r.status, 0) << r.err;
  EXPECT_EQ(slurp(out), test::read_text("data/cssdh.ttl"));
  const auto v = run({"schema", "verify", "--manifest", "@data/cssdh.manifest"});
  EXPECT_EQ(v.status, 0);
  EXPECT_EQ(v.out.find("FAIL"), std::string::npos);
}

TEST(Cli, SchemaVerifyFailureExitsOne) {
  const auto m = scratch("small.manifest");
  std::ofstream(m) << "class SubjectOfCare label=x source=ContSys\n";
  const auto r = run({"schema", "verify", "--manifest", m.string()});
  EXPECT_EQ(r.status, 1);
  EXPECT_NE(r.out.find("FAIL class-count"), std::string::npos);
  EXPECT_FALSE(r.err.empty());
}

TEST(Cli, UngenerateableManifestExitsOne) {
  const auto m = scratch("dangling.manifest");
  std::ofstream(m) << "class A label=a parent=Missing source=ContSys\n";
  const auto r = run({"schema", "build", "--manifest", m.string(), "--out", scratch("dangling.ttl").string()});
  EXPECT_EQ(r.status, 1);
  EXPECT_NE(r.err.find("Missing"), std::string::npos) << r.err;
}

TEST(Cli, MalformedManifestExitsTwo) {
  const auto m = scratch("broken.manifest");
  std::ofstream(m) << "class A label=a source=DOLCE\nwidget B\n";
  const auto r = run({"schema", "verify", "--manifest", m.string()});
  EXPECT_EQ(r.status, 2);
  EXPECT_NE(r.err.find(":2"), std::string::npos) << r.err;
}

TEST(Cli, ValidateConsistentAndInjected) {
  const auto ok = run({"validate", "@data/cssdh.ttl", "--data", "@data/patients-100.ttl"});
  EXPECT_EQ(ok.status, 0);
  EXPECT_EQ(ok.out, "CONSISTENT\n");
  const auto bad = run({"validate", "@data/cssdh.ttl", "--data", "@tests/fixtures/disjointness-violation.ttl"});
  EXPECT_EQ(bad.status, 1);
  EXPECT_NE(bad.out.find("http://purl.org/net/for-coc#case/c1"), std::string::npos) << bad.out;
  EXPECT_NE(bad.out.find("INCONSISTENT: 1 violation"), std::string::npos) << bad.out;
  EXPECT_FALSE(bad.err.empty());
}

TEST(Cli, QueryFormatsAreByteStable) {
  const std::vector<std::string> args{"query",   "--schema", "@data/cssdh.ttl", "--data", "@data/patients-3.ttl",
                                      "--query", "@queries/patient-query.rq", "--format", "tsv"};
  const auto a = run(args);
  const auto b = run(args);
  EXPECT_EQ(a.status, 0);
  EXPECT_EQ(a.out, b.out);
  EXPECT_EQ(a.out.substr(0, a.out.find('\n')), "?subjectOfcare\t?forename\t?Layofffromjob\t?CrowdingAtHome");
  const auto table = run({"query", "--data", "@data/patients-3.ttl", "--query", "@queries/patient-query.rq",
                          "--no-reason"});
  EXPECT_EQ(table.status, 0);
  EXPECT_NE(table.out.find("UNBOUND"), std::string::npos);
  EXPECT_NE(table.out.find("3 rows"), std::string::npos);
}

TEST(Cli, QueryNeedsReasoningForSubjectOfCare) {
  const auto rq = scratch("soc.rq");
  std::ofstream(rq) << "PREFIX coc: <http://purl.org/net/for-coc#>\n"
                       "SELECT ?s WHERE { ?s a coc:HealthcarePerson . }\n";
  const auto reasoned = run({"query", "--schema", "@data/cssdh.ttl", "--data", "@data/patients-3.ttl", "--query",
                             rq.string(), "--format", "tsv"});
  EXPECT_EQ(reasoned.status, 0);
  EXPECT_NE(reasoned.out.find("patient/p3"), std::string::npos);
  const auto plain = run({"query", "--schema", "@data/cssdh.ttl", "--data", "@data/patients-3.ttl", "--query",
                          rq.string(), "--format", "tsv", "--no-reason"});
  EXPECT_EQ(plain.out, "?s\n");
}

TEST(Cli, MalformedQueryReportsLineAndColumn) {
  const auto r = run({"query", "--data", "@data/patients-3.ttl", "--query", "@queries/patient-query-raw.rq"});
  EXPECT_EQ(r.status, 2);
  EXPECT_NE(r.err.find("patient-query-raw.rq:1:8: error:"), std::string::npos) << r.err;
  EXPECT_TRUE(r.out.empty());
}

TEST(Cli, MalformedTurtleReportsLineAndColumn) {
  const auto ttl = scratch("bad.ttl");
  std::ofstream(ttl) << "@prefix ex: <http://x/> .\nex:a ex:b .\n";
  const auto r = run({"metrics", ttl.string()});
  EXPECT_EQ(r.status, 2);
  EXPECT_NE(r.err.find("bad.ttl:2:"), std::string::npos) << r.err;
}

TEST(Cli, DlQuery) {
  const auto r = run({"dlquery", "--schema", "@data/cssdh.ttl", "--data", "@data/patients-3.ttl", "--expr",
                      "SubjectOfCare and Lay-off-from-job value true and Crowding_at_home value true"});
  EXPECT_EQ(r.status, 0);
  EXPECT_EQ(r.out, "<http://purl.org/net/for-coc#patient/p1>\nANSWERS: 1\n");
  const auto bad = run({"dlquery", "--schema", "@data/cssdh.ttl", "--data", "@data/patients-3.ttl", "--expr",
                        "SubjectOfCare and"});
  EXPECT_EQ(bad.status, 2);
  EXPECT_FALSE(bad.err.empty());
}

TEST(Cli, IngestRoundTripAndPrivacyRule) {
  const auto out = scratch("patients.ttl");
  const auto r = run({"ingest", "--records", "@data/patients-100.csv", "--manifest", "@data/cssdh.manifest", "--out",
                      out.string()});
  EXPECT_EQ(r.status, 0) << r.err;
  EXPECT_EQ(slurp(out), test::read_text("data/patients-100.ttl"));
  const auto bad = run({"ingest", "--records", "@tests/fixtures/non-boolean-sdh.csv", "--manifest",
                        "@data/cssdh.manifest", "--out", scratch("never.ttl").string()});
  EXPECT_EQ(bad.status, 1);
  EXPECT_NE(bad.err.find("maybe"), std::string::npos) << bad.err;
}

TEST(Cli, CqRun) {
  const auto r = run({"cq", "run", "--suite", "@cq", "--schema", "@data/cssdh.ttl"});
  EXPECT_EQ(r.status, 0) << r.out;
  EXPECT_NE(r.out.find("PASS CQ1"), std::string::npos);
  EXPECT_NE(r.out.find("failed"), std::string::npos);
  const auto suite = scratch("wrong.cq");
  std::ofstream(suite) << "case: X\nkind: dl\nquery: SubjectOfCare\ndataset: " << test::path_of("data/patients-3.ttl")
                       << "\nexpect: <http://nowhere/>\n";
  const auto bad = run({"cq", "run", "--suite", suite.string(), "--schema", "@data/cssdh.ttl"});
  EXPECT_EQ(bad.status, 1);
  EXPECT_NE(bad.out.find("FAIL X"), std::string::npos);
  EXPECT_FALSE(bad.err.empty());
}

TEST(Cli, UsageErrors) {
  for (const std::vector<std::string>& args :
       {std::vector<std::string>{"frobnicate"}, std::vector<std::string>{"metrics"},
        std::vector<std::string>{"metrics", "@data/cssdh.ttl", "--bogus"},
        std::vector<std::string>{"query", "--data", "@data/patients-3.ttl"}, std::vector<std::string>{}}) {
    const auto r = run(args);
    EXPECT_EQ(r.status, 2) << (args.empty() ? "" : args[0]);
    EXPECT_NE(r.err.find("Usage"), std::string::npos) << r.err;
  }
  const auto missing = run({"metrics", "/nonexistent/x.ttl"});
  EXPECT_EQ(missing.status, 2);
  EXPECT_FALSE(missing.err.empty());
  EXPECT_EQ(run({"--help"}).status, 0);
}

TEST(Cli, BinaryExitStatus) {
  const std::string cli = CSSDH_CLI_PATH;
  auto status = [&](const std::string& args) {
    const int raw = std::system((cli + " " + args + " >/dev/null 2>&1").c_str());
    return WEXITSTATUS(raw);
  };
  EXPECT_EQ(status("metrics " + test::path_of("data/cssdh.ttl")), 0);
  EXPECT_EQ(status("scan " + test::path_of("tests/fixtures/pitfalls/pf01-cycle.ttl")), 1);
  EXPECT_EQ(status("nosuchcommand"), 2);
}
