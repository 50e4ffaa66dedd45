#pragma once

#include <compare>
#include <cstddef>
#include <cstdint>
#include <functional>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <unordered_map>
#include <unordered_set>
#include <utility>
#include <vector>

#include "cssdh/error.hpp"

namespace cssdh::rdf {

namespace ns {
inline constexpr std::string_view rdf = "http://www.w3.org/1999/02/22-rdf-syntax-ns#";
inline constexpr std::string_view rdfs = "http://www.w3.org/2000/01/rdf-schema#";
inline constexpr std::string_view owl = "http://www.w3.org/2002/07/owl#";
inline constexpr std::string_view xsd = "http://www.w3.org/2001/XMLSchema#";
inline constexpr std::string_view coc = "http://purl.org/net/for-coc#";
inline constexpr std::string_view fhir = "http://hl7.org/fhir/";
}  // namespace ns

// Vocabulary IRIs used across modules.
namespace vocab {
std::string rdf(std::string_view local);
std::string rdfs(std::string_view local);
std::string owl(std::string_view local);
std::string xsd(std::string_view local);

extern const std::string type;
extern const std::string sub_class_of;
extern const std::string sub_property_of;
extern const std::string domain;
extern const std::string range;
extern const std::string label;
extern const std::string literal;
extern const std::string owl_class;
extern const std::string object_property;
extern const std::string datatype_property;
extern const std::string annotation_property;
extern const std::string named_individual;
extern const std::string owl_thing;
extern const std::string equivalent_class;
extern const std::string disjoint_with;
extern const std::string inverse_of;
extern const std::string restriction;
extern const std::string on_property;
extern const std::string some_values_from;
extern const std::string has_value;
extern const std::string xsd_string;
extern const std::string xsd_boolean;
}  // namespace vocab

enum class TermKind : std::uint8_t { Iri, Literal, BlankNode };

/// An RDF term. Literals always carry a datatype; equality is
/// datatype-sensitive.
class Term {
 public:
  Term() = default;

  /// Throws InvalidTerm unless `value` is absolute and whitespace-free.
  static Term iri(std::string value);
  static Term literal(std::string lexical, std::string datatype = vocab::xsd_string);
  static Term boolean(bool value);
  static Term blank(std::string label);

  TermKind kind() const noexcept { return kind_; }
  bool is_iri() const noexcept { return kind_ == TermKind::Iri; }
  bool is_literal() const noexcept { return kind_ == TermKind::Literal; }
  bool is_blank() const noexcept { return kind_ == TermKind::BlankNode; }

  /// IRI string, literal lexical form, or blank node label.
  const std::string& value() const noexcept { return value_; }
  /// Empty unless this is a literal.
  const std::string& datatype() const noexcept { return datatype_; }

  /// N-Triples style rendering, e.g. `<http://x>`, `"a"^^<dt>`, `_:b0`.
  std::string to_string() const;

  friend auto operator<=>(const Term&, const Term&) = default;
  friend bool operator==(const Term&, const Term&) = default;

 private:
  Term(TermKind kind, std::string value, std::string datatype)
      : kind_(kind), value_(std::move(value)), datatype_(std::move(datatype)) {}

  TermKind kind_ = TermKind::Iri;
  std::string value_;
  std::string datatype_;
};

bool is_absolute_iri(std::string_view iri);

struct Triple {
  Term subject;
  Term predicate;
  Term object;

  friend auto operator<=>(const Triple&, const Triple&) = default;
  friend bool operator==(const Triple&, const Triple&) = default;
};

/// Slots left empty match anything.
struct TriplePattern {
  std::optional<Term> subject;
  std::optional<Term> predicate;
  std::optional<Term> object;

  bool matches(const Triple& t) const;
};

}  // namespace cssdh::rdf

template <>
struct std::hash<cssdh::rdf::Term> {
  std::size_t operator()(const cssdh::rdf::Term& t) const noexcept;
};

template <>
struct std::hash<cssdh::rdf::Triple> {
  std::size_t operator()(const cssdh::rdf::Triple& t) const noexcept;
};

namespace cssdh::rdf {

/// Set of triples indexed by subject, by predicate and by (predicate, object).
///
/// Safe for concurrent readers once mutation has finished.
class Graph {
 public:
  Graph() = default;
  Graph(std::initializer_list<Triple> triples);

  /// Returns true when the triple was not already present. Throws
  /// InvalidTriple for a literal subject or a non-IRI predicate.
  bool insert(const Triple& triple);
  bool insert(Term s, Term p, Term o) { return insert(Triple{std::move(s), std::move(p), std::move(o)}); }
  void insert_all(const Graph& other);

  bool contains(const Triple& triple) const { return set_.contains(triple); }
  std::size_t size() const noexcept { return triples_.size(); }
  bool empty() const noexcept { return triples_.empty(); }

  std::vector<Triple> match(const TriplePattern& pattern) const;
  /// Calls `fn` for every matching triple without materializing a vector.
  void for_each_match(const TriplePattern& pattern, const std::function<void(const Triple&)>& fn) const;
  bool has_match(const TriplePattern& pattern) const;

  const std::vector<Triple>& triples() const noexcept { return triples_; }
  auto begin() const { return triples_.begin(); }
  auto end() const { return triples_.end(); }
  /// Triples ordered by (subject, predicate, object).
  std::vector<Triple> sorted() const;

  /// Set equality.
  friend bool operator==(const Graph& a, const Graph& b);
  /// Every triple of `this` is in `other`.
  bool subset_of(const Graph& other) const;

 private:
  struct PairHash {
    std::size_t operator()(const std::pair<Term, Term>& p) const noexcept;
  };
  const std::vector<std::size_t>* candidates(const TriplePattern& pattern) const;

  std::vector<Triple> triples_;
  std::unordered_set<Triple> set_;
  std::unordered_map<Term, std::vector<std::size_t>> by_subject_;
  std::unordered_map<Term, std::vector<std::size_t>> by_predicate_;
  std::unordered_map<std::pair<Term, Term>, std::vector<std::size_t>, PairHash> by_predicate_object_;
};

/// Prefix label -> namespace IRI. Rebinding a label replaces it.
class PrefixMap {
 public:
  PrefixMap() = default;
  PrefixMap(std::initializer_list<std::pair<const std::string, std::string>> init) : map_(init) {}

  void bind(std::string label, std::string ns) { map_[std::move(label)] = std::move(ns); }
  std::optional<std::string> lookup(std::string_view label) const;
  bool empty() const noexcept { return map_.empty(); }
  std::size_t size() const noexcept { return map_.size(); }
  const std::map<std::string, std::string>& entries() const noexcept { return map_; }
  void merge(const PrefixMap& other);

  /// Shortest CURIE for `iri` whose local part is a safe Turtle local name,
  /// preferring the longest matching namespace.
  std::optional<std::string> abbreviate(std::string_view iri) const;

  friend bool operator==(const PrefixMap&, const PrefixMap&) = default;

 private:
  std::map<std::string, std::string> map_;
};

/// The standard rdf/rdfs/owl/xsd prefixes plus `coc` and `fhir`.
PrefixMap default_prefixes();

/// Expands `label:local`. Throws MalformedCurie without a colon and
/// UndefinedPrefix for an unbound label.
std::string expand_curie(std::string_view curie, const PrefixMap& prefixes);

/// Local names that the Turtle serializer may emit unescaped in a CURIE.
bool is_safe_local_name(std::string_view local);

/// The part of an IRI after the last '#' or '/'.
std::string_view local_name(std::string_view iri);

}  // namespace cssdh::rdf
