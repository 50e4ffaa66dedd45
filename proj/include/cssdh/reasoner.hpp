#pragma once

#include <set>
#include <string>
#include <string_view>
#include <vector>

#include "cssdh/owl.hpp"
#include "cssdh/rdf.hpp"

namespace cssdh::reasoner {

/// Least fixpoint of the rule fragment over `graph`:
/// subclass transitivity, type inheritance, domain typing, object-property
/// range typing, subproperty propagation, inverse propagation and
/// equivalence as mutual subclass,
/// plus hasValue restrictions in either direction and someValuesFrom
/// restrictions used as subclasses. The subclass and subproperty closures
/// are emitted as rdfs:subClassOf / rdfs:subPropertyOf triples.
///
/// Rule rounds are evaluated in parallel with OpenMP.
rdf::Graph materialize(const rdf::Graph& graph, const owl::Ontology& ontology);

/// Single-threaded worklist evaluation of the same rules. Reference
/// implementation for tests and benchmarks.
rdf::Graph materialize_serial(const rdf::Graph& graph, const owl::Ontology& ontology);

struct Violation {
  enum class Kind { DisjointnessViolation, DatatypeClash };
  Kind kind;
  std::string individual;
  std::string detail;

  friend auto operator<=>(const Violation&, const Violation&) = default;
  friend bool operator==(const Violation&, const Violation&) = default;
};

std::string_view to_string(Violation::Kind kind);

struct ConsistencyReport {
  bool consistent = true;
  /// Sorted by (individual, kind, detail).
  std::vector<Violation> violations;
};

/// Materializes internally, then reports individuals typed by two disjoint
/// classes and data-property values whose datatype differs from the
/// declared range.
ConsistencyReport check_consistency(const rdf::Graph& graph, const owl::Ontology& ontology);

/// Reflexive-transitive closure of SubClassOf, with equivalence counted in
/// both directions. Throws UndeclaredClass for unknown IRIs.
bool subsumes(const owl::Ontology& ontology, std::string_view sub, std::string_view super);

/// Strict superclasses of `cls` (closure, excluding `cls` itself unless it
/// lies on a cycle).
std::set<std::string> superclasses(const owl::Ontology& ontology, std::string_view cls);

/// Subjects of rdf:type triples whose object is a declared class or
/// owl:NamedIndividual.
std::set<rdf::Term> individuals(const rdf::Graph& graph, const owl::Ontology& ontology);

/// Closed-world instance retrieval over an already materialized graph.
/// Returns IRIs only. Throws UndeclaredClass / UndeclaredProperty.
std::set<std::string> evaluate(const owl::ClassExpression& expr, const rdf::Graph& graph,
                               const owl::Ontology& ontology);

}  // namespace cssdh::reasoner
