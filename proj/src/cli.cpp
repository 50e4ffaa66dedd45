#include "cssdh/cli.hpp"

#include <CLI11.hpp>

#include <algorithm>
#include <fstream>
#include <ostream>
#include <sstream>

#include "cssdh/cq.hpp"
#include "cssdh/ingest.hpp"
#include "cssdh/owl.hpp"
#include "cssdh/pitfalls.hpp"
#include "cssdh/reasoner.hpp"
#include "cssdh/schema.hpp"
#include "cssdh/sparql.hpp"
#include "cssdh/turtle.hpp"

namespace cssdh::cli {

namespace {

// Input that could not be read or parsed; always exit status 2.
struct InputError {
  std::string message;
};

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw InputError{path + ": error: cannot open file"};
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void write_file(const std::string& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out || !(out << text)) throw InputError{path + ": error: cannot write file"};
}

std::string at(const std::string& path, const ParseDiagnostic& d) {
  return path + ":" + std::to_string(d.line) + ":" + std::to_string(d.column) + ": error: " + d.message;
}

// Runs `fn` and turns parse errors into `path:line:col: error: msg`.
template <typename Fn>
auto located(const std::string& path, Fn&& fn) {
  try {
    return fn();
  } catch (const SyntaxError& e) {
    throw InputError{at(path, e.diagnostic())};
  } catch (const UndefinedPrefix& e) {
    if (e.diagnostic()) throw InputError{at(path, *e.diagnostic())};
    throw InputError{path + ": error: " + e.what()};
  } catch (const schema::ManifestError& e) {
    if (e.line() > 0) throw InputError{path + ":" + std::to_string(e.line()) + ": error: " + e.detail()};
    throw InputError{path + ": error: " + e.what()};
  }
}

turtle::Document load_ttl(const std::string& path) {
  const std::string text = read_file(path);
  return located(path, [&] { return turtle::parse_turtle(text); });
}

schema::Manifest load_manifest(const std::string& path) {
  const std::string text = read_file(path);
  return located(path, [&] { return schema::parse_manifest(text); });
}

struct Loaded {
  rdf::Graph graph;
  rdf::PrefixMap prefixes;
};

Loaded union_of(const std::string& schema_path, const std::string& data_path) {
  Loaded l;
  l.prefixes = rdf::default_prefixes();
  for (const auto* p : {&schema_path, &data_path}) {
    if (p->empty()) continue;
    auto doc = load_ttl(*p);
    l.graph.insert_all(doc.graph);
    l.prefixes.merge(doc.prefixes);
  }
  return l;
}

class Commands {
 public:
  Commands(std::ostream& out, std::ostream& err) : out_(out), err_(err) {}

  int schema_build(const std::string& manifest_path, const std::string& out_path) {
    const auto m = load_manifest(manifest_path);
    schema::Schema s;
    try {
      s = schema::build_schema(m);
    } catch (const schema::ManifestError& e) {
      err_ << manifest_path << ": error: " << e.what() << '\n';
      return kDomainFailure;
    }
    write_file(out_path, turtle::serialize_turtle(s.graph, s.prefixes));
    out_ << owl::format_summary(owl::metrics(s.graph)) << '\n';
    return kSuccess;
  }

  int schema_verify(const std::string& manifest_path) {
    const auto report = schema::verify_manifest(load_manifest(manifest_path));
    out_ << report.to_string();
    if (report.passed()) return kSuccess;
    err_ << manifest_path << ": error: manifest verification failed\n";
    return kDomainFailure;
  }

  int metrics(const std::string& path) {
    out_ << owl::format_summary(owl::metrics(load_ttl(path).graph)) << '\n';
    return kSuccess;
  }

  int validate(const std::string& schema_path, const std::string& data_path) {
    const auto l = union_of(schema_path, data_path);
    const auto ontology = owl::extract_axioms(l.graph);
    const auto report = reasoner::check_consistency(l.graph, ontology);
    if (report.consistent) {
      out_ << "CONSISTENT\n";
      return kSuccess;
    }
    for (const auto& v : report.violations) {
      out_ << reasoner::to_string(v.kind) << '\t' << v.individual << '\t' << v.detail << '\n';
    }
    out_ << "INCONSISTENT: " << report.violations.size() << (report.violations.size() == 1 ? " violation\n" : " violations\n");
    err_ << "error: knowledge base is inconsistent\n";
    return kDomainFailure;
  }

  int query(const std::string& data_path, const std::string& schema_path, const std::string& query_path,
            const std::string& format, bool no_reason) {
    const std::string text = read_file(query_path);
    const auto q = located(query_path, [&] { return sparql::parse_query(text); });
    auto l = union_of(schema_path, data_path);
    if (!no_reason) l.graph = reasoner::materialize(l.graph, owl::extract_axioms(l.graph));
    const auto table = sparql::execute(q, l.graph);
    if (format == "tsv") {
      out_ << sparql::format_tsv(table);
    } else {
      rdf::PrefixMap display = l.prefixes;
      display.merge(q.prefixes);
      out_ << sparql::format_table(table, display);
    }
    return kSuccess;
  }

  int dlquery(const std::string& data_path, const std::string& schema_path, const std::string& expr_text) {
    auto l = union_of(schema_path, data_path);
    owl::ClassExpression expr = located("<expr>", [&] { return owl::parse_class_expression(expr_text, l.prefixes); });
    const auto ontology = owl::extract_axioms(l.graph);
    std::set<std::string> answers;
    try {
      answers = reasoner::evaluate(expr, reasoner::materialize(l.graph, ontology), ontology);
    } catch (const UndeclaredClass& e) {
      throw InputError{std::string("<expr>: error: ") + e.what()};
    } catch (const UndeclaredProperty& e) {
      throw InputError{std::string("<expr>: error: ") + e.what()};
    }
    for (const auto& a : answers) out_ << '<' << a << ">\n";
    out_ << "ANSWERS: " << answers.size() << '\n';
    return kSuccess;
  }

  int scan(const std::string& path) {
    const auto doc = load_ttl(path);
    const auto report = pitfalls::scan(doc.graph, owl::extract_axioms(doc.graph));
    out_ << report.to_string();
    if (report.clean()) return kSuccess;
    err_ << path << ": error: " << report.findings.size() << " pitfall(s) found\n";
    return kDomainFailure;
  }

  int ingest(const std::string& records_path, const std::string& manifest_path, const std::string& out_path, bool lenient) {
    const auto m = load_manifest(manifest_path);
    const std::string text = read_file(records_path);
    rdf::Graph g;
    std::size_t count = 0;
    try {
      std::optional<std::set<std::string>> known;
      if (!lenient) known = ingest::sdh_property_names(m);
      const auto records = ingest::parse_records(text, known);
      count = records.size();
      g = ingest::to_graph(records, m);
    } catch (const ingest::RecordFormatError& e) {
      throw InputError{records_path + ": error: " + e.what()};
    } catch (const Error& e) {
      err_ << records_path << ": error: " << e.what() << '\n';
      return kDomainFailure;
    }
    write_file(out_path, turtle::serialize_turtle(g, m.resolver()));
    out_ << "records=" << count << " triples=" << g.size() << '\n';
    return kSuccess;
  }

  int cq_run(const std::string& suite_path, const std::string& schema_path) {
    std::vector<cq::CqCase> cases;
    try {
      cases = cq::load_suite(suite_path);
    } catch (const Error& e) {
      throw InputError{std::string("error: ") + e.what()};
    }
    const auto results = cq::run_suite(cases, load_ttl(schema_path).graph);
    out_ << cq::format_results(results);
    const bool ok = std::all_of(results.begin(), results.end(), [](const cq::CqResult& r) { return r.passed; });
    if (ok) return kSuccess;
    err_ << "error: competency questions failed\n";
    return kDomainFailure;
  }

 private:
  std::ostream& out_;
  std::ostream& err_;
};

}  // namespace

int dispatch(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"CSSDH ontology toolkit: schema generation, reasoning, SPARQL, pitfall scan, CQ suites", "cssdh"};
  app.require_subcommand(1);
  Commands cmd(out, err);
  std::function<int()> action;

  auto* schema_cmd = app.add_subcommand("schema", "Generate or verify the schema from its manifest");
  schema_cmd->require_subcommand(1);
  std::string manifest, out_path;
  auto* build = schema_cmd->add_subcommand("build", "Write the generated schema as Turtle");
  build->add_option("--manifest", manifest, "Manifest file")->required();
  build->add_option("--out", out_path, "Output .ttl")->required();
  build->callback([&] { action = [&] { return cmd.schema_build(manifest, out_path); }; });
  auto* verify = schema_cmd->add_subcommand("verify", "Check the manifest against the published structure");
  verify->add_option("--manifest", manifest, "Manifest file")->required();
  verify->callback([&] { action = [&] { return cmd.schema_verify(manifest); }; });

  std::string ttl;
  auto* metrics = app.add_subcommand("metrics", "Print class and property counts");
  metrics->add_option("ttl", ttl, "Schema .ttl")->required();
  metrics->callback([&] { action = [&] { return cmd.metrics(ttl); }; });

  std::string data, schema_path;
  auto* validate = app.add_subcommand("validate", "Materialize and check consistency");
  validate->add_option("schema", schema_path, "Schema .ttl")->required();
  validate->add_option("--data", data, "Instance data .ttl");
  validate->callback([&] { action = [&] { return cmd.validate(schema_path, data); }; });

  std::string query_path, format = "table";
  bool no_reason = false;
  auto* query = app.add_subcommand("query", "Run a SPARQL query");
  query->add_option("--data", data, "Data .ttl")->required();
  query->add_option("--schema", schema_path, "Schema .ttl");
  query->add_option("--query", query_path, "Query .rq")->required();
  query->add_option("--format", format, "table or tsv")->check(CLI::IsMember({"table", "tsv"}));
  query->add_flag("--no-reason", no_reason, "Skip materialization");
  query->callback([&] { action = [&] { return cmd.query(data, schema_path, query_path, format, no_reason); }; });

  std::string expr;
  auto* dl = app.add_subcommand("dlquery", "Retrieve instances of a class expression");
  dl->add_option("--data", data, "Data .ttl")->required();
  dl->add_option("--schema", schema_path, "Schema .ttl")->required();
  dl->add_option("--expr", expr, "Class expression")->required();
  dl->callback([&] { action = [&] { return cmd.dlquery(data, schema_path, expr); }; });

  auto* scan = app.add_subcommand("scan", "Run the pitfall catalog");
  scan->add_option("ttl", ttl, "Schema .ttl")->required();
  scan->callback([&] { action = [&] { return cmd.scan(ttl); }; });

  std::string records;
  bool lenient = false;
  auto* ingest = app.add_subcommand("ingest", "Convert patient records to Turtle");
  ingest->add_option("--records", records, "Records .csv")->required();
  ingest->add_option("--manifest", manifest, "Manifest file")->required();
  ingest->add_option("--out", out_path, "Output .ttl")->required();
  ingest->add_flag("--lenient", lenient, "Accept SDH columns missing from the manifest");
  ingest->callback([&] { action = [&] { return cmd.ingest(records, manifest, out_path, lenient); }; });

  std::string suite;
  auto* cq_cmd = app.add_subcommand("cq", "Competency-question suites");
  cq_cmd->require_subcommand(1);
  auto* run = cq_cmd->add_subcommand("run", "Run a suite");
  run->add_option("--suite", suite, "Suite file or directory")->required();
  run->add_option("--schema", schema_path, "Schema .ttl")->required();
  run->callback([&] { action = [&] { return cmd.cq_run(suite, schema_path); }; });

  try {
    std::vector<std::string> reversed(args.rbegin(), args.rend());
    app.parse(reversed);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e, out, err);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e, out, err);
  } catch (const CLI::ParseError& e) {
    err << "error: " << e.what() << "\n\n" << app.help();
    return kUsageError;
  }
  if (!action) {
    err << app.help();
    return kUsageError;
  }
  try {
    return action();
  } catch (const InputError& e) {
    err << e.message << '\n';
    return kUsageError;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return kUsageError;
  }
}

}  // namespace cssdh::cli
