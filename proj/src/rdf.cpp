#include "cssdh/rdf.hpp"

#include <algorithm>

namespace cssdh::rdf {

namespace vocab {
std::string rdf(std::string_view local) { return std::string(ns::rdf) + std::string(local); }
std::string rdfs(std::string_view local) { return std::string(ns::rdfs) + std::string(local); }
std::string owl(std::string_view local) { return std::string(ns::owl) + std::string(local); }
std::string xsd(std::string_view local) { return std::string(ns::xsd) + std::string(local); }

const std::string type = rdf("type");
const std::string sub_class_of = rdfs("subClassOf");
const std::string sub_property_of = rdfs("subPropertyOf");
const std::string domain = rdfs("domain");
const std::string range = rdfs("range");
const std::string label = rdfs("label");
const std::string literal = rdfs("Literal");
const std::string owl_class = owl("Class");
const std::string object_property = owl("ObjectProperty");
const std::string datatype_property = owl("DatatypeProperty");
const std::string annotation_property = owl("AnnotationProperty");
const std::string named_individual = owl("NamedIndividual");
const std::string owl_thing = owl("Thing");
const std::string equivalent_class = owl("equivalentClass");
const std::string disjoint_with = owl("disjointWith");
const std::string inverse_of = owl("inverseOf");
const std::string restriction = owl("Restriction");
const std::string on_property = owl("onProperty");
const std::string some_values_from = owl("someValuesFrom");
const std::string has_value = owl("hasValue");
const std::string xsd_string = xsd("string");
const std::string xsd_boolean = xsd("boolean");
}  // namespace vocab

namespace {

bool is_iri_forbidden(unsigned char c) {
  return c <= 0x20 || c == '<' || c == '>' || c == '"' || c == '{' || c == '}' || c == '|' ||
         c == '^' || c == '`' || c == '\\';
}

bool is_alpha(char c) { return (c >= 'A' && c <= 'Z') || (c >= 'a' && c <= 'z'); }
bool is_digit(char c) { return c >= '0' && c <= '9'; }

std::size_t mix(std::size_t seed, std::size_t h) {
  return seed ^ (h + 0x9e3779b97f4a7c15ULL + (seed << 6) + (seed >> 2));
}

}  // namespace

bool is_absolute_iri(std::string_view iri) {
  const auto colon = iri.find(':');
  if (colon == std::string_view::npos || colon == 0 || !is_alpha(iri[0])) return false;
  for (std::size_t i = 1; i < colon; ++i) {
    const char c = iri[i];
    if (!is_alpha(c) && !is_digit(c) && c != '+' && c != '-' && c != '.') return false;
  }
  return std::none_of(iri.begin(), iri.end(),
                      [](char c) { return is_iri_forbidden(static_cast<unsigned char>(c)); });
}

Term Term::iri(std::string value) {
  if (!is_absolute_iri(value)) throw InvalidTerm("not an absolute IRI: '" + value + "'");
  return Term(TermKind::Iri, std::move(value), {});
}

Term Term::literal(std::string lexical, std::string datatype) {
  if (!is_absolute_iri(datatype)) throw InvalidTerm("literal datatype is not an absolute IRI: '" + datatype + "'");
  return Term(TermKind::Literal, std::move(lexical), std::move(datatype));
}

Term Term::boolean(bool value) { return literal(value ? "true" : "false", vocab::xsd_boolean); }

Term Term::blank(std::string label) {
  if (label.empty()) throw InvalidTerm("empty blank node label");
  return Term(TermKind::BlankNode, std::move(label), {});
}

std::string Term::to_string() const {
  switch (kind_) {
    case TermKind::Iri:
      return "<" + value_ + ">";
    case TermKind::BlankNode:
      return "_:" + value_;
    case TermKind::Literal: {
      std::string out = "\"";
      for (char c : value_) {
        switch (c) {
          case '"': out += "\\\""; break;
          case '\\': out += "\\\\"; break;
          case '\n': out += "\\n"; break;
          case '\r': out += "\\r"; break;
          case '\t': out += "\\t"; break;
          default: out += c;
        }
      }
      out += "\"";
      if (datatype_ != vocab::xsd_string) out += "^^<" + datatype_ + ">";
      return out;
    }
  }
  return {};
}

bool TriplePattern::matches(const Triple& t) const {
  return (!subject || *subject == t.subject) && (!predicate || *predicate == t.predicate) &&
         (!object || *object == t.object);
}

}  // namespace cssdh::rdf

std::size_t std::hash<cssdh::rdf::Term>::operator()(const cssdh::rdf::Term& t) const noexcept {
  std::size_t h = std::hash<std::string>{}(t.value());
  h = cssdh::rdf::mix(h, static_cast<std::size_t>(t.kind()));
  if (t.is_literal()) h = cssdh::rdf::mix(h, std::hash<std::string>{}(t.datatype()));
  return h;
}

std::size_t std::hash<cssdh::rdf::Triple>::operator()(const cssdh::rdf::Triple& t) const noexcept {
  const std::hash<cssdh::rdf::Term> th;
  return cssdh::rdf::mix(cssdh::rdf::mix(th(t.subject), th(t.predicate)), th(t.object));
}

namespace cssdh::rdf {

Graph::Graph(std::initializer_list<Triple> triples) {
  for (const auto& t : triples) insert(t);
}

bool Graph::insert(const Triple& triple) {
  if (triple.subject.is_literal()) throw InvalidTriple("literal in subject position: " + triple.subject.to_string());
  if (!triple.predicate.is_iri()) throw InvalidTriple("predicate must be an IRI: " + triple.predicate.to_string());
  if (!set_.insert(triple).second) return false;
  const std::size_t index = triples_.size();
  triples_.push_back(triple);
  by_subject_[triple.subject].push_back(index);
  by_predicate_[triple.predicate].push_back(index);
  by_predicate_object_[{triple.predicate, triple.object}].push_back(index);
  return true;
}

void Graph::insert_all(const Graph& other) {
  for (const auto& t : other.triples_) insert(t);
}

std::size_t Graph::PairHash::operator()(const std::pair<Term, Term>& p) const noexcept {
  const std::hash<Term> th;
  return mix(th(p.first), th(p.second));
}

namespace {
const std::vector<std::size_t> kNoCandidates;
}

// Smallest index list covering the pattern, or nullptr when a full scan is needed.
const std::vector<std::size_t>* Graph::candidates(const TriplePattern& pattern) const {
  const std::vector<std::size_t>* best = nullptr;
  auto consider = [&best](const std::vector<std::size_t>* list) {
    if (best == nullptr || list->size() < best->size()) best = list;
  };
  if (pattern.subject) {
    auto it = by_subject_.find(*pattern.subject);
    consider(it == by_subject_.end() ? &kNoCandidates : &it->second);
  }
  if (pattern.predicate && pattern.object) {
    auto it = by_predicate_object_.find({*pattern.predicate, *pattern.object});
    consider(it == by_predicate_object_.end() ? &kNoCandidates : &it->second);
  } else if (pattern.predicate) {
    auto it = by_predicate_.find(*pattern.predicate);
    consider(it == by_predicate_.end() ? &kNoCandidates : &it->second);
  }
  return best;
}

void Graph::for_each_match(const TriplePattern& pattern, const std::function<void(const Triple&)>& fn) const {
  if (pattern.subject && pattern.predicate && pattern.object) {
    Triple probe{*pattern.subject, *pattern.predicate, *pattern.object};
    if (contains(probe)) fn(probe);
    return;
  }
  if (const auto* list = candidates(pattern)) {
    for (std::size_t i : *list) {
      if (pattern.matches(triples_[i])) fn(triples_[i]);
    }
    return;
  }
  for (const auto& t : triples_) {
    if (pattern.matches(t)) fn(t);
  }
}

std::vector<Triple> Graph::match(const TriplePattern& pattern) const {
  std::vector<Triple> out;
  for_each_match(pattern, [&out](const Triple& t) { out.push_back(t); });
  return out;
}

bool Graph::has_match(const TriplePattern& pattern) const {
  if (pattern.subject && pattern.predicate && pattern.object) {
    return contains({*pattern.subject, *pattern.predicate, *pattern.object});
  }
  if (const auto* list = candidates(pattern)) {
    return std::any_of(list->begin(), list->end(), [&](std::size_t i) { return pattern.matches(triples_[i]); });
  }
  return std::any_of(triples_.begin(), triples_.end(), [&](const Triple& t) { return pattern.matches(t); });
}

std::vector<Triple> Graph::sorted() const {
  std::vector<Triple> out = triples_;
  std::sort(out.begin(), out.end());
  return out;
}

bool operator==(const Graph& a, const Graph& b) { return a.size() == b.size() && a.subset_of(b); }

bool Graph::subset_of(const Graph& other) const {
  return std::all_of(triples_.begin(), triples_.end(), [&](const Triple& t) { return other.contains(t); });
}

std::optional<std::string> PrefixMap::lookup(std::string_view label) const {
  auto it = map_.find(std::string(label));
  if (it == map_.end()) return std::nullopt;
  return it->second;
}

void PrefixMap::merge(const PrefixMap& other) {
  for (const auto& [label, ns] : other.map_) map_[label] = ns;
}

bool is_safe_local_name(std::string_view local) {
  if (local.empty()) return true;
  if (local.front() == '.' || local.back() == '.' || local.front() == '-') return false;
  return std::all_of(local.begin(), local.end(), [](char c) {
    return is_alpha(c) || is_digit(c) || c == '_' || c == '-' || c == '.' || static_cast<unsigned char>(c) >= 0x80;
  });
}

std::optional<std::string> PrefixMap::abbreviate(std::string_view iri) const {
  const std::pair<const std::string, std::string>* best = nullptr;
  for (const auto& entry : map_) {
    const auto& ns = entry.second;
    if (ns.empty() || !iri.starts_with(ns)) continue;
    if (!is_safe_local_name(iri.substr(ns.size()))) continue;
    if (best == nullptr || ns.size() > best->second.size()) best = &entry;
  }
  if (best == nullptr) return std::nullopt;
  return best->first + ":" + std::string(iri.substr(best->second.size()));
}

PrefixMap default_prefixes() {
  return {{"rdf", std::string(ns::rdf)},   {"rdfs", std::string(ns::rdfs)}, {"owl", std::string(ns::owl)},
          {"xsd", std::string(ns::xsd)},   {"coc", std::string(ns::coc)},   {"fhir", std::string(ns::fhir)}};
}

std::string expand_curie(std::string_view curie, const PrefixMap& prefixes) {
  const auto colon = curie.find(':');
  if (colon == std::string_view::npos) throw MalformedCurie("CURIE without ':' separator: '" + std::string(curie) + "'");
  const auto label = curie.substr(0, colon);
  const auto ns = prefixes.lookup(label);
  if (!ns) throw UndefinedPrefix(std::string(label));
  return *ns + std::string(curie.substr(colon + 1));
}

std::string_view local_name(std::string_view iri) {
  const auto pos = iri.find_last_of("#/");
  return pos == std::string_view::npos ? iri : iri.substr(pos + 1);
}

}  // namespace cssdh::rdf
