#include "cssdh/owl.hpp"

#include <map>
#include <stdexcept>

#include "text_cursor.hpp"

namespace cssdh::owl {

using rdf::Term;
namespace vocab = rdf::vocab;

std::string sdh_category_property() { return std::string(rdf::ns::coc) + "sdhCategory"; }

std::string_view to_string(AxiomKind kind) {
  switch (kind) {
    case AxiomKind::SubClassOf: return "SubClassOf";
    case AxiomKind::EquivalentClasses: return "EquivalentClasses";
    case AxiomKind::DisjointClasses: return "DisjointClasses";
    case AxiomKind::SubPropertyOf: return "SubPropertyOf";
    case AxiomKind::InverseOf: return "InverseOf";
    case AxiomKind::ObjectPropertyDomain: return "ObjectPropertyDomain";
    case AxiomKind::ObjectPropertyRange: return "ObjectPropertyRange";
    case AxiomKind::DataPropertyDomain: return "DataPropertyDomain";
    case AxiomKind::DataPropertyRange: return "DataPropertyRange";
    case AxiomKind::SubClassOfRestriction: return "SubClassOfRestriction";
    case AxiomKind::RestrictionSubClassOf: return "RestrictionSubClassOf";
  }
  return "?";
}

namespace {

Axiom make(AxiomKind kind, std::string a, std::string b) { return Axiom{kind, std::move(a), std::move(b), std::nullopt}; }

Axiom make_symmetric(AxiomKind kind, std::string a, std::string b) {
  if (b < a) std::swap(a, b);
  return make(kind, std::move(a), std::move(b));
}

std::string restriction_string(const Restriction& r) {
  if (r.kind == Restriction::Kind::SomeValuesFrom) return "(" + r.property + " some " + r.filler.value() + ")";
  return "(" + r.property + " value " + r.filler.to_string() + ")";
}

}  // namespace

Axiom Axiom::sub_class_of(std::string sub, std::string super) {
  return make(AxiomKind::SubClassOf, std::move(sub), std::move(super));
}
Axiom Axiom::equivalent(std::string a, std::string b) {
  return make_symmetric(AxiomKind::EquivalentClasses, std::move(a), std::move(b));
}
Axiom Axiom::disjoint(std::string a, std::string b) {
  return make_symmetric(AxiomKind::DisjointClasses, std::move(a), std::move(b));
}
Axiom Axiom::sub_property_of(std::string sub, std::string super) {
  return make(AxiomKind::SubPropertyOf, std::move(sub), std::move(super));
}
Axiom Axiom::inverse_of(std::string p, std::string q) {
  return make_symmetric(AxiomKind::InverseOf, std::move(p), std::move(q));
}
Axiom Axiom::object_domain(std::string p, std::string c) {
  return make(AxiomKind::ObjectPropertyDomain, std::move(p), std::move(c));
}
Axiom Axiom::object_range(std::string p, std::string c) {
  return make(AxiomKind::ObjectPropertyRange, std::move(p), std::move(c));
}
Axiom Axiom::data_domain(std::string p, std::string c) {
  return make(AxiomKind::DataPropertyDomain, std::move(p), std::move(c));
}
Axiom Axiom::data_range(std::string p, std::string datatype) {
  return make(AxiomKind::DataPropertyRange, std::move(p), std::move(datatype));
}
Axiom Axiom::sub_class_of_restriction(std::string sub, Restriction r) {
  return Axiom{AxiomKind::SubClassOfRestriction, std::move(sub), {}, std::move(r)};
}
Axiom Axiom::restriction_sub_class_of(Restriction r, std::string super) {
  return Axiom{AxiomKind::RestrictionSubClassOf, {}, std::move(super), std::move(r)};
}

std::string Axiom::to_string() const {
  std::string out(owl::to_string(kind));
  out += "(";
  if (kind == AxiomKind::RestrictionSubClassOf) {
    out += restriction_string(*restriction) + ", " + second;
  } else if (kind == AxiomKind::SubClassOfRestriction) {
    out += first + ", " + restriction_string(*restriction);
  } else {
    out += first + ", " + second;
  }
  return out + ")";
}

bool is_builtin_datatype(std::string_view iri) {
  return iri.starts_with(rdf::ns::xsd) || iri == vocab::literal || iri == vocab::rdf("langString") ||
         iri == vocab::rdf("PlainLiteral");
}

bool Ontology::is_class(std::string_view iri) const {
  return iri == vocab::owl_thing || classes.contains(std::string(iri));
}

bool Ontology::is_property(std::string_view iri) const {
  const std::string key(iri);
  return object_properties.contains(key) || data_properties.contains(key) || annotation_properties.contains(key);
}

bool Ontology::is_datatype(std::string_view iri) const {
  return is_builtin_datatype(iri) || datatypes.contains(std::string(iri));
}

namespace {

class Extractor {
 public:
  explicit Extractor(const rdf::Graph& graph) : graph_(graph) {}

  Ontology run() {
    declarations();
    restrictions();
    for (const auto& t : graph_) axiom_triple(t);
    return std::move(onto_);
  }

 private:
  void declarations() {
    const Term type = Term::iri(vocab::type);
    graph_.for_each_match({std::nullopt, type, std::nullopt}, [this](const rdf::Triple& t) {
      if (!t.subject.is_iri() || !t.object.is_iri()) return;
      const auto& what = t.object.value();
      const auto& iri = t.subject.value();
      if (what == vocab::owl_class || what == vocab::rdfs("Class")) onto_.classes.insert(iri);
      else if (what == vocab::object_property) onto_.object_properties.insert(iri);
      else if (what == vocab::datatype_property) onto_.data_properties.insert(iri);
      else if (what == vocab::annotation_property) onto_.annotation_properties.insert(iri);
      else if (what == vocab::rdfs("Datatype")) onto_.datatypes.insert(iri);
    });
  }

  void restrictions() {
    static const std::set<std::string> kUnsupported = {
        vocab::owl("allValuesFrom"),     vocab::owl("cardinality"),          vocab::owl("minCardinality"),
        vocab::owl("maxCardinality"),    vocab::owl("qualifiedCardinality"), vocab::owl("minQualifiedCardinality"),
        vocab::owl("maxQualifiedCardinality"), vocab::owl("hasSelf")};
    const Term type = Term::iri(vocab::type);
    const Term restriction_class = Term::iri(vocab::restriction);
    for (const auto& decl : graph_.match({std::nullopt, type, restriction_class})) {
      const Term& node = decl.subject;
      std::optional<std::string> property;
      std::optional<Restriction> parsed;
      bool ok = true;
      for (const auto& t : graph_.match({node, std::nullopt, std::nullopt})) {
        const auto& p = t.predicate.value();
        if (p == vocab::on_property && t.object.is_iri()) {
          ok = ok && !property;
          property = t.object.value();
        } else if (p == vocab::some_values_from || p == vocab::has_value) {
          ok = ok && !parsed;
          parsed = Restriction{p == vocab::has_value ? Restriction::Kind::HasValue : Restriction::Kind::SomeValuesFrom,
                               {}, t.object};
          if (p == vocab::some_values_from && !t.object.is_iri()) ok = false;
        } else if (kUnsupported.contains(p)) {
          onto_.rejected.push_back("restriction " + node.to_string() + " uses unsupported " + std::string(rdf::local_name(p)) +
                                   " (only someValuesFrom and hasValue restrictions are supported)");
          ok = false;
        }
      }
      if (!ok || !property || !parsed) {
        if (ok) onto_.rejected.push_back("restriction " + node.to_string() + " is incomplete");
        broken_.insert(node);
        continue;
      }
      parsed->property = *property;
      if (!onto_.is_property(*property)) {
        onto_.dangling.push_back({decl, *property, "property"});
        broken_.insert(node);
        continue;
      }
      if (parsed->kind == Restriction::Kind::SomeValuesFrom && !onto_.is_class(parsed->filler.value())) {
        onto_.dangling.push_back({decl, parsed->filler.value(), "class"});
        broken_.insert(node);
        continue;
      }
      restrictions_.emplace(node, std::move(*parsed));
    }
  }

  bool require_class(const rdf::Triple& t, const Term& term) {
    if (term.is_iri() && onto_.is_class(term.value())) return true;
    onto_.dangling.push_back({t, term.value(), "class"});
    return false;
  }

  // Named class, restriction, or neither (reported).
  enum class Side { Named, Restriction, Invalid };
  Side classify(const rdf::Triple& t, const Term& term) {
    if (restrictions_.contains(term)) return Side::Restriction;
    if (broken_.contains(term)) return Side::Invalid;
    if (term.is_iri()) return require_class(t, term) ? Side::Named : Side::Invalid;
    onto_.rejected.push_back("anonymous class expression " + term.to_string() + " is not a supported restriction");
    return Side::Invalid;
  }

  void axiom_triple(const rdf::Triple& t) {
    const auto& p = t.predicate.value();
    if (p == vocab::sub_class_of || p == vocab::equivalent_class) {
      const bool equivalence = p == vocab::equivalent_class;
      const Side lhs = classify(t, t.subject);
      const Side rhs = classify(t, t.object);
      if (lhs == Side::Invalid || rhs == Side::Invalid) return;
      if (lhs == Side::Named && rhs == Side::Named) {
        onto_.axioms.insert(equivalence ? Axiom::equivalent(t.subject.value(), t.object.value())
                                        : Axiom::sub_class_of(t.subject.value(), t.object.value()));
      } else if (lhs == Side::Named && rhs == Side::Restriction) {
        onto_.axioms.insert(Axiom::sub_class_of_restriction(t.subject.value(), restrictions_.at(t.object)));
        if (equivalence) onto_.axioms.insert(Axiom::restriction_sub_class_of(restrictions_.at(t.object), t.subject.value()));
      } else if (lhs == Side::Restriction && rhs == Side::Named) {
        onto_.axioms.insert(Axiom::restriction_sub_class_of(restrictions_.at(t.subject), t.object.value()));
        if (equivalence) onto_.axioms.insert(Axiom::sub_class_of_restriction(t.object.value(), restrictions_.at(t.subject)));
      } else {
        onto_.rejected.push_back("axiom between two restrictions is not supported: " + t.subject.to_string() + " " +
                                 t.object.to_string());
      }
    } else if (p == vocab::disjoint_with) {
      const bool a = require_class(t, t.subject);
      const bool b = require_class(t, t.object);
      if (a && b) onto_.axioms.insert(Axiom::disjoint(t.subject.value(), t.object.value()));
    } else if (p == vocab::sub_property_of) {
      const bool a = require_property(t, t.subject);
      const bool b = require_property(t, t.object);
      if (a && b) onto_.axioms.insert(Axiom::sub_property_of(t.subject.value(), t.object.value()));
    } else if (p == vocab::inverse_of) {
      const bool a = require_object_property(t, t.subject);
      const bool b = require_object_property(t, t.object);
      if (a && b) onto_.axioms.insert(Axiom::inverse_of(t.subject.value(), t.object.value()));
    } else if (p == vocab::domain || p == vocab::range) {
      domain_or_range(t, p == vocab::domain);
    }
  }

  bool require_property(const rdf::Triple& t, const Term& term) {
    if (term.is_iri() && onto_.is_property(term.value())) return true;
    onto_.dangling.push_back({t, term.value(), "property"});
    return false;
  }

  bool require_object_property(const rdf::Triple& t, const Term& term) {
    if (term.is_iri() && onto_.object_properties.contains(term.value())) return true;
    onto_.dangling.push_back({t, term.value(), "object property"});
    return false;
  }

  void domain_or_range(const rdf::Triple& t, bool is_domain) {
    if (!t.subject.is_iri() || !onto_.is_property(t.subject.value())) {
      onto_.dangling.push_back({t, t.subject.value(), "property"});
      return;
    }
    const auto& prop = t.subject.value();
    if (onto_.annotation_properties.contains(prop)) return;
    const bool object = onto_.object_properties.contains(prop);
    if (is_domain || object) {
      if (!require_class(t, t.object)) return;
      const auto& c = t.object.value();
      if (is_domain) onto_.axioms.insert(object ? Axiom::object_domain(prop, c) : Axiom::data_domain(prop, c));
      else onto_.axioms.insert(Axiom::object_range(prop, c));
      return;
    }
    if (!t.object.is_iri() || !onto_.is_datatype(t.object.value())) {
      onto_.dangling.push_back({t, t.object.value(), "datatype"});
      return;
    }
    onto_.axioms.insert(Axiom::data_range(prop, t.object.value()));
  }

  const rdf::Graph& graph_;
  Ontology onto_;
  std::map<Term, Restriction> restrictions_;
  std::set<Term> broken_;
};

}  // namespace

Ontology extract_axioms(const rdf::Graph& graph) { return Extractor(graph).run(); }

OntologySummary metrics(const rdf::Graph& graph) {
  std::set<std::string> classes, objects, datas;
  const Term type = Term::iri(vocab::type);
  graph.for_each_match({std::nullopt, type, std::nullopt}, [&](const rdf::Triple& t) {
    if (!t.subject.is_iri() || !t.object.is_iri()) return;
    const auto& what = t.object.value();
    if (what == vocab::owl_class) classes.insert(t.subject.value());
    else if (what == vocab::object_property) objects.insert(t.subject.value());
    else if (what == vocab::datatype_property) datas.insert(t.subject.value());
  });
  const Term category = Term::iri(sdh_category_property());
  std::size_t sdh = 0;
  for (const auto& p : datas) {
    if (graph.has_match({Term::iri(p), category, std::nullopt})) ++sdh;
  }
  return {classes.size(), objects.size(), datas.size(), sdh};
}

std::string format_summary(const OntologySummary& s) {
  return "classes=" + std::to_string(s.class_count) + " objectProperties=" + std::to_string(s.object_property_count) +
         " dataProperties=" + std::to_string(s.data_property_count) +
         " sdhDataProperties=" + std::to_string(s.sdh_data_property_count);
}

ClassExpression ClassExpression::named(std::string iri) {
  ClassExpression e;
  e.kind_ = Kind::Named;
  e.iri_ = std::move(iri);
  return e;
}

ClassExpression ClassExpression::all_of(std::vector<ClassExpression> operands) {
  if (operands.size() < 2) throw std::invalid_argument("intersection needs at least two operands");
  ClassExpression e;
  e.kind_ = Kind::And;
  e.operands_ = std::move(operands);
  return e;
}

ClassExpression ClassExpression::any_of(std::vector<ClassExpression> operands) {
  if (operands.size() < 2) throw std::invalid_argument("union needs at least two operands");
  ClassExpression e;
  e.kind_ = Kind::Or;
  e.operands_ = std::move(operands);
  return e;
}

ClassExpression ClassExpression::negation(ClassExpression operand) {
  ClassExpression e;
  e.kind_ = Kind::Not;
  e.operands_.push_back(std::move(operand));
  return e;
}

ClassExpression ClassExpression::some(std::string property, ClassExpression filler) {
  ClassExpression e;
  e.kind_ = Kind::Some;
  e.iri_ = std::move(property);
  e.operands_.push_back(std::move(filler));
  return e;
}

ClassExpression ClassExpression::has_value(std::string property, rdf::Term value) {
  ClassExpression e;
  e.kind_ = Kind::HasValue;
  e.iri_ = std::move(property);
  e.value_ = std::move(value);
  return e;
}

std::string ClassExpression::to_string() const {
  auto join = [this](std::string_view op) {
    std::string out = "(";
    for (std::size_t i = 0; i < operands_.size(); ++i) {
      if (i > 0) out += " " + std::string(op) + " ";
      out += operands_[i].to_string();
    }
    return out + ")";
  };
  switch (kind_) {
    case Kind::Named: return "<" + iri_ + ">";
    case Kind::And: return join("and");
    case Kind::Or: return join("or");
    case Kind::Not: return "(not " + operands_[0].to_string() + ")";
    case Kind::Some: return "(some <" + iri_ + "> " + operands_[0].to_string() + ")";
    case Kind::HasValue: return "(<" + iri_ + "> value " + value_.to_string() + ")";
  }
  return {};
}

namespace {

class DlParser {
 public:
  DlParser(std::string_view text, const rdf::PrefixMap& prefixes, std::string_view default_ns)
      : in_(text), prefixes_(prefixes), default_ns_(default_ns) {}

  ClassExpression run() {
    in_.skip_space();
    if (in_.at_end()) in_.fail("empty class expression");
    auto e = disjunction();
    in_.skip_space();
    if (!in_.at_end()) in_.fail("unexpected trailing input");
    return e;
  }

 private:
  static bool is_token_char(char c) {
    return detail::TextCursor::is_name_char(c) || c == ':' || c == '.' || c == '/' || c == '%';
  }

  std::string peek_word() {
    std::size_t i = 0;
    std::string out;
    while (is_token_char(in_.peek(i))) out += in_.peek(i++);
    return out;
  }

  bool accept_keyword(std::string_view kw) {
    in_.skip_space();
    const std::string w = peek_word();
    if (w != kw) return false;
    in_.advance(w.size());
    return true;
  }

  ClassExpression disjunction() {
    std::vector<ClassExpression> ops{conjunction()};
    while (accept_keyword("or")) ops.push_back(conjunction());
    return ops.size() == 1 ? std::move(ops.front()) : ClassExpression::any_of(std::move(ops));
  }

  ClassExpression conjunction() {
    std::vector<ClassExpression> ops{unary()};
    while (accept_keyword("and")) ops.push_back(unary());
    return ops.size() == 1 ? std::move(ops.front()) : ClassExpression::all_of(std::move(ops));
  }

  ClassExpression unary() {
    in_.skip_space();
    if (in_.at_end()) in_.fail("unexpected end of class expression");
    if (in_.peek() == '(') {
      in_.advance();
      auto e = disjunction();
      in_.skip_space();
      if (in_.peek() != ')') in_.fail("expected ')'");
      in_.advance();
      return e;
    }
    if (accept_keyword("not")) return ClassExpression::negation(unary());
    if (accept_keyword("some")) {
      in_.skip_space();
      std::string prop = name();
      return ClassExpression::some(std::move(prop), unary());
    }
    std::string n = name();
    if (accept_keyword("value")) return ClassExpression::has_value(std::move(n), value());
    return ClassExpression::named(std::move(n));
  }

  rdf::Term value() {
    in_.skip_space();
    if (in_.peek() == '"' || in_.peek() == '\'') return rdf::Term::literal(in_.read_string());
    const std::string w = peek_word();
    if (w == "true" || w == "false") {
      in_.advance(w.size());
      return rdf::Term::boolean(w == "true");
    }
    return rdf::Term::iri(name());
  }

  std::string name() {
    in_.skip_space();
    const auto at = in_.mark();
    if (in_.peek() == '<') return in_.read_iriref();
    std::string w = peek_word();
    static const std::set<std::string> kKeywords = {"and", "or", "not", "some", "value"};
    if (w.empty()) in_.fail(in_.at_end() ? "unexpected end of class expression" : "expected a class or property name");
    if (kKeywords.contains(w)) detail::TextCursor::fail_at(at, "unexpected keyword '" + w + "'");
    in_.advance(w.size());
    std::string iri;
    if (w.find(':') != std::string::npos) {
      try {
        iri = rdf::expand_curie(w, prefixes_);
      } catch (const UndefinedPrefix& e) {
        throw UndefinedPrefix(e.prefix(), ParseDiagnostic{at.line, at.column, "undefined prefix '" + e.prefix() + "'"});
      }
    } else {
      iri = std::string(default_ns_) + w;
    }
    if (!rdf::is_absolute_iri(iri)) detail::TextCursor::fail_at(at, "not an IRI: '" + w + "'");
    return iri;
  }

  detail::TextCursor in_;
  const rdf::PrefixMap& prefixes_;
  std::string_view default_ns_;
};

}  // namespace

ClassExpression parse_class_expression(std::string_view text, const rdf::PrefixMap& prefixes,
                                       std::string_view default_namespace) {
  return DlParser(text, prefixes, default_namespace).run();
}

}  // namespace cssdh::owl
