#pragma once

#include <optional>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include "cssdh/rdf.hpp"

namespace cssdh::sparql {

struct Variable {
  std::string name;
  friend auto operator<=>(const Variable&, const Variable&) = default;
  friend bool operator==(const Variable&, const Variable&) = default;
};

using Slot = std::variant<Variable, rdf::Term>;

struct TriplePattern {
  Slot subject;
  Slot predicate;
  Slot object;
};

/// FILTER expression: variables, constants, `=`, `!=`, `&&`, `||`, `!`.
struct FilterExpr {
  enum class Op { Variable, Constant, Equal, NotEqual, And, Or, Not };
  Op op = Op::Constant;
  std::string variable;
  rdf::Term constant;
  std::vector<FilterExpr> args;
};

struct Query {
  rdf::PrefixMap prefixes;
  bool distinct = false;
  /// SELECT *.
  bool select_all = false;
  std::vector<std::string> projection;
  std::vector<TriplePattern> required;
  std::vector<std::vector<TriplePattern>> optionals;
  std::vector<FilterExpr> filters;

  /// Every pattern variable, in order of first appearance.
  std::vector<std::string> pattern_variables() const;
  /// Projection, or pattern_variables() for SELECT *.
  std::vector<std::string> header() const;
};

/// Throws SyntaxError (with line/column) or UndefinedPrefix.
Query parse_query(std::string_view text);
/// As above with `initial` bound before the query's own PREFIX lines.
Query parse_query(std::string_view text, const rdf::PrefixMap& initial);

using Cell = std::optional<rdf::Term>;
using Row = std::vector<Cell>;

struct SolutionTable {
  std::vector<std::string> header;
  /// One cell per header variable; nullopt is UNBOUND.
  std::vector<Row> rows;
};

/// Joins required patterns, left-joins each OPTIONAL block in order,
/// filters, projects and (optionally) deduplicates. Rows are sorted.
SolutionTable execute(const Query& query, const rdf::Graph& graph);

/// W3C-style TSV: `?var` header, N-Triples cells, empty cell for UNBOUND.
std::string format_tsv(const SolutionTable& table);
/// Aligned text table using `prefixes` for abbreviation; UNBOUND shown explicitly.
std::string format_table(const SolutionTable& table, const rdf::PrefixMap& prefixes);

}  // namespace cssdh::sparql
