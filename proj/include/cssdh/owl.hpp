#pragma once

#include <compare>
#include <optional>
#include <set>
#include <string>
#include <string_view>
#include <vector>

#include "cssdh/rdf.hpp"

namespace cssdh::owl {

/// IRI of the annotation property that tags SDH data properties with their
/// category.
std::string sdh_category_property();

/// Value restriction found in an owl:Restriction node.
struct Restriction {
  enum class Kind { SomeValuesFrom, HasValue };
  Kind kind = Kind::HasValue;
  std::string property;
  /// Filler class IRI for SomeValuesFrom, the required value for HasValue.
  rdf::Term filler;

  friend auto operator<=>(const Restriction&, const Restriction&) = default;
  friend bool operator==(const Restriction&, const Restriction&) = default;
};

enum class AxiomKind {
  SubClassOf,
  EquivalentClasses,
  DisjointClasses,
  SubPropertyOf,
  InverseOf,
  ObjectPropertyDomain,
  ObjectPropertyRange,
  DataPropertyDomain,
  DataPropertyRange,
  /// `first` rdfs:subClassOf restriction.
  SubClassOfRestriction,
  /// restriction rdfs:subClassOf `second`.
  RestrictionSubClassOf,
};

std::string_view to_string(AxiomKind kind);

/// Binary OWL axiom. Symmetric kinds (equivalence, disjointness, inverse)
/// store their operands in sorted order.
struct Axiom {
  AxiomKind kind = AxiomKind::SubClassOf;
  std::string first;
  std::string second;
  std::optional<Restriction> restriction;

  static Axiom sub_class_of(std::string sub, std::string super);
  static Axiom equivalent(std::string a, std::string b);
  static Axiom disjoint(std::string a, std::string b);
  static Axiom sub_property_of(std::string sub, std::string super);
  static Axiom inverse_of(std::string p, std::string q);
  static Axiom object_domain(std::string p, std::string c);
  static Axiom object_range(std::string p, std::string c);
  static Axiom data_domain(std::string p, std::string c);
  static Axiom data_range(std::string p, std::string datatype);
  static Axiom sub_class_of_restriction(std::string sub, Restriction r);
  static Axiom restriction_sub_class_of(Restriction r, std::string super);

  std::string to_string() const;

  friend auto operator<=>(const Axiom&, const Axiom&) = default;
  friend bool operator==(const Axiom&, const Axiom&) = default;
};

/// An axiom-bearing triple that names an entity the graph never declares.
struct DanglingReference {
  rdf::Triple triple;
  std::string missing;
  /// What the entity should have been declared as, e.g. "class".
  std::string expected;
};

/// Declarations plus the axioms extracted from a graph.
struct Ontology {
  std::set<std::string> classes;
  std::set<std::string> object_properties;
  std::set<std::string> data_properties;
  std::set<std::string> annotation_properties;
  std::set<std::string> datatypes;
  std::set<Axiom> axioms;
  std::vector<DanglingReference> dangling;
  /// Constructs outside the supported fragment (cardinality restrictions etc.).
  std::vector<std::string> rejected;

  bool is_class(std::string_view iri) const;
  bool is_property(std::string_view iri) const;
  bool is_datatype(std::string_view iri) const;
};

/// xsd:* and rdfs:Literal count as declared datatypes.
bool is_builtin_datatype(std::string_view iri);

Ontology extract_axioms(const rdf::Graph& graph);

struct OntologySummary {
  std::size_t class_count = 0;
  std::size_t object_property_count = 0;
  std::size_t data_property_count = 0;
  std::size_t sdh_data_property_count = 0;

  friend bool operator==(const OntologySummary&, const OntologySummary&) = default;
};

OntologySummary metrics(const rdf::Graph& graph);

/// `classes=.. objectProperties=.. dataProperties=.. sdhDataProperties=..`
std::string format_summary(const OntologySummary& summary);

class ClassExpression {
 public:
  enum class Kind { Named, And, Or, Not, Some, HasValue };

  static ClassExpression named(std::string iri);
  /// Throws std::invalid_argument with fewer than two operands.
  static ClassExpression all_of(std::vector<ClassExpression> operands);
  static ClassExpression any_of(std::vector<ClassExpression> operands);
  static ClassExpression negation(ClassExpression operand);
  static ClassExpression some(std::string property, ClassExpression filler);
  static ClassExpression has_value(std::string property, rdf::Term value);

  Kind kind() const noexcept { return kind_; }
  /// Class IRI (Named) or property IRI (Some, HasValue).
  const std::string& iri() const noexcept { return iri_; }
  const std::vector<ClassExpression>& operands() const noexcept { return operands_; }
  const rdf::Term& value() const noexcept { return value_; }

  std::string to_string() const;

  friend bool operator==(const ClassExpression&, const ClassExpression&) = default;

 private:
  Kind kind_ = Kind::Named;
  std::string iri_;
  std::vector<ClassExpression> operands_;
  rdf::Term value_;
};

/// Parses the small DL syntax used by competency questions:
///
///   expr    := and-expr ("or" and-expr)*
///   and-expr:= unary ("and" unary)*
///   unary   := "not" unary | "some" NAME unary | NAME "value" VALUE | NAME | "(" expr ")"
///   VALUE   := true | false | "string" | NAME
///
/// NAME is a local name in `default_namespace`, a CURIE or an `<IRI>`.
ClassExpression parse_class_expression(std::string_view text, const rdf::PrefixMap& prefixes,
                                       std::string_view default_namespace = rdf::ns::coc);

}  // namespace cssdh::owl
