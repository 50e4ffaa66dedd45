#pragma once

#include <string>
#include <string_view>

#include "cssdh/rdf.hpp"

namespace cssdh::turtle {

struct Document {
  rdf::Graph graph;
  rdf::PrefixMap prefixes;
};

/// Parses the supported Turtle subset: `@prefix`/`PREFIX`, IRIs, prefixed
/// names, `a`, string literals with optional `^^datatype`, `true`/`false`
/// (typed xsd:boolean), `_:` blank nodes, `;` and `,` lists, `#` comments.
///
/// Throws SyntaxError or UndefinedPrefix, both carrying a diagnostic.
Document parse_turtle(std::string_view text);

/// Deterministic serialization: prefixes by label, triples sorted by
/// (subject, predicate, object), one predicate-object pair per line.
std::string serialize_turtle(const rdf::Graph& graph, const rdf::PrefixMap& prefixes);

/// Reads and parses a `.ttl` file. Parse errors are rethrown unchanged; I/O
/// failures raise cssdh::Error.
Document load_turtle_file(const std::string& path);

}  // namespace cssdh::turtle
