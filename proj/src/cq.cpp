#include "cssdh/cq.hpp"

#include <algorithm>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "cssdh/owl.hpp"
#include "cssdh/reasoner.hpp"
#include "cssdh/turtle.hpp"

namespace cssdh::cq {

namespace fs = std::filesystem;
using rdf::Term;

SuiteFormatError::SuiteFormatError(const std::string& file, std::size_t line, const std::string& message)
    : Error(file + ":" + std::to_string(line) + ": " + message) {}

namespace {

std::string trim(std::string_view s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string_view::npos) return {};
  const auto e = s.find_last_not_of(" \t\r");
  return std::string(s.substr(b, e - b + 1));
}

std::string read_file(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  if (!in) throw Error("cannot open " + p.string());
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

class SuiteParser {
 public:
  SuiteParser(std::string base, std::string file) : base_(std::move(base)), file_(std::move(file)) {
    suite_prefixes_ = rdf::default_prefixes();
  }

  std::vector<CqCase> run(std::string_view text) {
    std::istringstream in{std::string(text)};
    std::string raw;
    while (std::getline(in, raw)) {
      ++line_;
      const std::string line = trim(raw);
      if (line.empty() || line.front() == '#') continue;
      const auto colon = line.find(':');
      if (colon == std::string::npos) fail("expected 'field: value'");
      const std::string key = trim(std::string_view(line).substr(0, colon));
      const std::string value = trim(std::string_view(line).substr(colon + 1));
      field(key, value);
    }
    finish();
    return std::move(cases_);
  }

 private:
  [[noreturn]] void fail(const std::string& msg) const { throw SuiteFormatError(file_, line_, msg); }

  rdf::PrefixMap& prefixes() { return current_ ? current_->prefixes : suite_prefixes_; }

  void field(const std::string& key, const std::string& value) {
    if (key == "case") {
      finish();
      if (value.empty()) fail("empty case id");
      for (const auto& c : cases_) {
        if (c.id == value) fail("duplicate case id '" + value + "'");
      }
      current_.emplace();
      current_->id = value;
      current_->prefixes = suite_prefixes_;
      seen_.clear();
      case_line_ = line_;
      return;
    }
    if (key == "prefix") {
      const auto c = value.find(':');
      const auto lt = value.find('<');
      if (c == std::string::npos || lt == std::string::npos || c > lt || value.back() != '>') {
        fail("expected 'prefix: label: <IRI>'");
      }
      prefixes().bind(trim(std::string_view(value).substr(0, c)), value.substr(lt + 1, value.size() - lt - 2));
      return;
    }
    if (!current_) fail("field '" + key + "' before the first 'case:'");
    auto& c = *current_;
    const bool repeatable = key == "expect" || key == "row";
    if (!repeatable && !seen_.insert(key).second) fail("duplicate field '" + key + "'");
    if (key == "kind") {
      if (value == "dl") {
        c.kind = Kind::Dl;
      } else if (value == "sparql") {
        c.kind = Kind::Sparql;
      } else {
        fail("kind must be dl or sparql");
      }
    } else if (key == "description") {
      c.description = value;
    } else if (key == "query") {
      c.query = value;
    } else if (key == "query-file") {
      try {
        c.query = read_file(fs::path(base_) / value);
      } catch (const Error& e) {
        fail(e.what());
      }
    } else if (key == "dataset") {
      c.dataset = value.empty() ? "" : (fs::path(base_) / value).string();
    } else if (key == "expect") {
      if (!value.empty()) c.expected_iris.insert(term(value).value());
    } else if (key == "columns") {
      std::istringstream cols(value);
      std::string v;
      while (cols >> v) {
        if (v.size() < 2 || v.front() != '?') fail("columns are written ?name");
        c.expected_columns.push_back(v.substr(1));
      }
    } else if (key == "row") {
      sparql::Row row;
      for (const auto& cell : split_cells(value)) {
        if (cell == "UNDEF") {
          row.push_back(std::nullopt);
        } else {
          row.push_back(term(cell));
        }
      }
      rows_.push_back(std::move(row));
    } else {
      fail("unknown field '" + key + "'");
    }
  }

  std::vector<std::string> split_cells(const std::string& value) {
    std::vector<std::string> out;
    std::string cur;
    bool quoted = false;
    for (std::size_t i = 0; i < value.size(); ++i) {
      const char ch = value[i];
      if (ch == '"' && (i == 0 || value[i - 1] != '\\')) quoted = !quoted;
      if (ch == '|' && !quoted) {
        out.push_back(trim(cur));
        cur.clear();
      } else {
        cur += ch;
      }
    }
    out.push_back(trim(cur));
    return out;
  }

  Term term(const std::string& text) {
    try {
      if (text.front() == '<') {
        if (text.back() != '>') fail("unterminated IRI '" + text + "'");
        return Term::iri(text.substr(1, text.size() - 2));
      }
      if (text == "true" || text == "false") return Term::boolean(text == "true");
      if (text.front() == '"') {
        const auto close = text.rfind('"');
        if (close == 0) fail("unterminated literal " + text);
        std::string lex;
        for (std::size_t i = 1; i < close; ++i) {
          if (text[i] == '\\' && i + 1 < close) ++i;
          lex += text[i];
        }
        const std::string rest = text.substr(close + 1);
        if (rest.empty()) return Term::literal(lex);
        if (!rest.starts_with("^^")) fail("unexpected text after literal: " + rest);
        return Term::literal(lex, term(rest.substr(2)).value());
      }
      return Term::iri(rdf::expand_curie(text, prefixes()));
    } catch (const SuiteFormatError&) {
      throw;
    } catch (const Error& e) {
      fail(e.what());
    }
  }

  void finish() {
    if (!current_) return;
    auto& c = *current_;
    const auto saved = line_;
    line_ = case_line_;
    if (!seen_.contains("kind")) fail("case '" + c.id + "' has no kind");
    if (!seen_.contains("query") && !seen_.contains("query-file")) fail("case '" + c.id + "' has no query");
    if (seen_.contains("query") && seen_.contains("query-file")) fail("case '" + c.id + "' has both query and query-file");
    if (c.kind == Kind::Dl && (!c.expected_columns.empty() || !rows_.empty())) fail("dl case '" + c.id + "' uses columns/row");
    if (c.kind == Kind::Sparql) {
      if (!c.expected_iris.empty()) fail("sparql case '" + c.id + "' uses expect");
      if (c.expected_columns.empty()) fail("sparql case '" + c.id + "' has no columns");
      for (const auto& r : rows_) {
        if (r.size() != c.expected_columns.size()) fail("row width differs from columns in case '" + c.id + "'");
      }
      c.expected_rows = std::move(rows_);
    }
    rows_.clear();
    line_ = saved;
    cases_.push_back(std::move(c));
    current_.reset();
  }

  std::string base_;
  std::string file_;
  std::size_t line_ = 0;
  std::size_t case_line_ = 0;
  rdf::PrefixMap suite_prefixes_;
  std::optional<CqCase> current_;
  std::set<std::string> seen_;
  std::vector<sparql::Row> rows_;
  std::vector<CqCase> cases_;
};

template <typename T>
void diff_sets(const std::set<T>& actual, const std::set<T>& expected, std::vector<T>& unexpected, std::vector<T>& missing) {
  std::set_difference(actual.begin(), actual.end(), expected.begin(), expected.end(), std::back_inserter(unexpected));
  std::set_difference(expected.begin(), expected.end(), actual.begin(), actual.end(), std::back_inserter(missing));
}

CqResult run_case(const CqCase& c, const rdf::Graph& schema) {
  CqResult r;
  r.id = c.id;
  try {
    rdf::Graph g = schema;
    if (!c.dataset.empty()) g.insert_all(turtle::load_turtle_file(c.dataset).graph);
    const auto ontology = owl::extract_axioms(g);
    const auto reasoned = reasoner::materialize(g, ontology);
    if (c.kind == Kind::Dl) {
      const auto expr = owl::parse_class_expression(c.query, c.prefixes);
      const auto actual = reasoner::evaluate(expr, reasoned, ontology);
      for (const auto& a : actual) r.actual.push_back(Term::iri(a).to_string());
      std::vector<std::string> unexpected, missing;
      diff_sets(actual, c.expected_iris, unexpected, missing);
      for (const auto& u : unexpected) r.unexpected.push_back(Term::iri(u).to_string());
      for (const auto& m : missing) r.missing.push_back(Term::iri(m).to_string());
    } else {
      const auto q = sparql::parse_query(c.query, c.prefixes);
      const auto table = sparql::execute(q, reasoned);
      if (table.header != c.expected_columns) {
        std::string got;
        for (const auto& h : table.header) got += (got.empty() ? "?" : " ?") + h;
        r.error = "query projects " + got + ", expected columns differ";
        return r;
      }
      std::set<sparql::Row> actual(table.rows.begin(), table.rows.end());
      std::set<sparql::Row> expected(c.expected_rows.begin(), c.expected_rows.end());
      for (const auto& row : actual) r.actual.push_back(render_row(row));
      std::vector<sparql::Row> unexpected, missing;
      diff_sets(actual, expected, unexpected, missing);
      for (const auto& u : unexpected) r.unexpected.push_back(render_row(u));
      for (const auto& m : missing) r.missing.push_back(render_row(m));
    }
    r.passed = r.unexpected.empty() && r.missing.empty();
  } catch (const SyntaxError& e) {
    r.error = "parse error at " + e.diagnostic().to_string();
  } catch (const std::exception& e) {
    r.error = e.what();
  }
  return r;
}

}  // namespace

std::vector<CqCase> parse_suite(std::string_view text, const std::string& base_dir, const std::string& file_name) {
  return SuiteParser(base_dir, file_name).run(text);
}

std::vector<CqCase> load_suite(const std::string& path) {
  const fs::path p(path);
  std::vector<fs::path> files;
  if (fs::is_directory(p)) {
    for (const auto& entry : fs::directory_iterator(p)) {
      if (entry.is_regular_file() && entry.path().extension() == ".cq") files.push_back(entry.path());
    }
    std::sort(files.begin(), files.end());
    if (files.empty()) throw Error("no .cq files in " + path);
  } else {
    files.push_back(p);
  }
  std::vector<CqCase> out;
  std::set<std::string> ids;
  for (const auto& f : files) {
    auto cases = parse_suite(read_file(f), f.parent_path().string(), f.string());
    for (auto& c : cases) {
      if (!ids.insert(c.id).second) throw SuiteFormatError(f.string(), 0, "duplicate case id '" + c.id + "'");
      out.push_back(std::move(c));
    }
  }
  return out;
}

std::vector<CqResult> run_suite(const std::vector<CqCase>& cases, const rdf::Graph& schema) {
  std::vector<CqResult> results(cases.size());
  const auto n = static_cast<std::ptrdiff_t>(cases.size());
#pragma omp parallel for schedule(dynamic, 1)
  for (std::ptrdiff_t i = 0; i < n; ++i) results[i] = run_case(cases[i], schema);
  return results;
}

std::string render_cell(const sparql::Cell& cell) { return cell ? cell->to_string() : "UNDEF"; }

std::string render_row(const sparql::Row& row) {
  std::string out;
  for (std::size_t i = 0; i < row.size(); ++i) out += (i ? " | " : "") + render_cell(row[i]);
  return out;
}

std::string format_results(const std::vector<CqResult>& results) {
  std::string out;
  std::size_t passed = 0;
  for (const auto& r : results) {
    if (r.passed) {
      ++passed;
      out += "PASS " + r.id + " (" + std::to_string(r.actual.size()) + (r.actual.size() == 1 ? " answer)\n" : " answers)\n");
      continue;
    }
    out += "FAIL " + r.id;
    if (r.error) {
      out += ": " + *r.error + "\n";
      continue;
    }
    out += "\n";
    for (const auto& u : r.unexpected) out += "  unexpected " + u + "\n";
    for (const auto& m : r.missing) out += "  missing    " + m + "\n";
  }
  out += "CQ: " + std::to_string(passed) + " passed, " + std::to_string(results.size() - passed) + " failed\n";
  return out;
}

}  // namespace cssdh::cq
