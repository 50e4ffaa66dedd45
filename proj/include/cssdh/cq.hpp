#pragma once

#include <optional>
#include <set>
#include <string>
#include <string_view>
#include <vector>

#include "cssdh/error.hpp"
#include "cssdh/rdf.hpp"
#include "cssdh/sparql.hpp"

namespace cssdh::cq {

enum class Kind { Sparql, Dl };

struct CqCase {
  std::string id;
  std::string description;
  Kind kind = Kind::Dl;
  std::string query;
  /// Absolute or working-directory-relative path; empty means schema only.
  std::string dataset;
  rdf::PrefixMap prefixes;
  /// Dl: expected individual IRIs.
  std::set<std::string> expected_iris;
  /// Sparql: expected header and rows (order-insensitive).
  std::vector<std::string> expected_columns;
  std::vector<sparql::Row> expected_rows;
};

struct CqResult {
  std::string id;
  bool passed = false;
  /// Set when the dataset or query could not be loaded, parsed or run.
  std::optional<std::string> error;
  /// Rendered answers: IRIs for Dl, `cell | cell` rows for Sparql.
  std::vector<std::string> actual;
  std::vector<std::string> unexpected;
  std::vector<std::string> missing;
};

class SuiteFormatError : public Error {
 public:
  SuiteFormatError(const std::string& file, std::size_t line, const std::string& message);
};

/// Parses one suite file. `base_dir` anchors relative `dataset:` and
/// `query-file:` paths.
std::vector<CqCase> parse_suite(std::string_view text, const std::string& base_dir, const std::string& file_name = "<suite>");

/// A `.cq` file, or every `.cq` file of a directory in name order.
/// Case ids must be unique across the whole suite.
std::vector<CqCase> load_suite(const std::string& path);

/// Per case: dataset + schema, materialize, query, compare as sets.
/// Cases run concurrently; results keep suite order.
std::vector<CqResult> run_suite(const std::vector<CqCase>& cases, const rdf::Graph& schema);

/// `PASS id` / `FAIL id: ...` lines and a `CQ: n passed, m failed` total.
std::string format_results(const std::vector<CqResult>& results);

/// Renderings used in results and diffs.
std::string render_cell(const sparql::Cell& cell);
std::string render_row(const sparql::Row& row);

}  // namespace cssdh::cq
