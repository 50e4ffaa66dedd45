#include "cssdh/reasoner.hpp"

#include <algorithm>
#include <deque>
#include <map>
#include <tuple>
#include <unordered_map>

#ifdef _OPENMP
#include <omp.h>
#endif

namespace cssdh::reasoner {

using owl::Axiom;
using owl::AxiomKind;
using owl::Restriction;
using rdf::Term;
using rdf::Triple;
namespace vocab = rdf::vocab;

std::string_view to_string(Violation::Kind kind) {
  return kind == Violation::Kind::DisjointnessViolation ? "DisjointnessViolation" : "DatatypeClash";
}

namespace {

using Adjacency = std::map<std::string, std::set<std::string>>;

Adjacency class_edges(const owl::Ontology& onto) {
  Adjacency edges;
  for (const auto& a : onto.axioms) {
    if (a.kind == AxiomKind::SubClassOf) {
      edges[a.first].insert(a.second);
    } else if (a.kind == AxiomKind::EquivalentClasses) {
      edges[a.first].insert(a.second);
      edges[a.second].insert(a.first);
    }
  }
  return edges;
}

Adjacency property_edges(const owl::Ontology& onto) {
  Adjacency edges;
  for (const auto& a : onto.axioms) {
    if (a.kind == AxiomKind::SubPropertyOf) edges[a.first].insert(a.second);
  }
  return edges;
}

// Nodes reachable from `start` in one or more steps.
std::set<std::string> reachable(const Adjacency& edges, const std::string& start) {
  std::set<std::string> seen;
  std::vector<std::string> stack;
  if (auto it = edges.find(start); it != edges.end()) stack.assign(it->second.begin(), it->second.end());
  while (!stack.empty()) {
    std::string n = std::move(stack.back());
    stack.pop_back();
    if (!seen.insert(n).second) continue;
    if (auto it = edges.find(n); it != edges.end()) {
      for (const auto& m : it->second) {
        if (!seen.contains(m)) stack.push_back(m);
      }
    }
  }
  return seen;
}

std::unordered_map<std::string, std::vector<std::string>> closure(const Adjacency& edges) {
  std::unordered_map<std::string, std::vector<std::string>> out;
  for (const auto& [node, _] : edges) {
    auto supers = reachable(edges, node);
    out[node].assign(supers.begin(), supers.end());
  }
  return out;
}

struct PropertyValueHash {
  std::size_t operator()(const std::pair<std::string, Term>& p) const noexcept {
    return std::hash<std::string>{}(p.first) * 31 + std::hash<Term>{}(p.second);
  }
};

// Ontology compiled into lookup tables; derive() applies every rule to one triple.
class RuleSet {
 public:
  explicit RuleSet(const owl::Ontology& onto)
      : type_(Term::iri(vocab::type)),
        sub_class_of_(Term::iri(vocab::sub_class_of)),
        sub_property_of_(Term::iri(vocab::sub_property_of)) {
    class_supers_ = closure(class_edges(onto));
    property_supers_ = closure(property_edges(onto));
    for (const auto& a : onto.axioms) {
      switch (a.kind) {
        case AxiomKind::InverseOf:
          inverses_[a.first].push_back(Term::iri(a.second));
          if (a.first != a.second) inverses_[a.second].push_back(Term::iri(a.first));
          break;
        case AxiomKind::ObjectPropertyDomain:
        case AxiomKind::DataPropertyDomain:
          domains_[a.first].push_back(Term::iri(a.second));
          break;
        case AxiomKind::ObjectPropertyRange:
          ranges_[a.first].push_back(Term::iri(a.second));
          break;
        case AxiomKind::SubClassOfRestriction:
          // Existential superclasses would need fresh individuals; only hasValue is materialized.
          if (a.restriction->kind == Restriction::Kind::HasValue) {
            implied_values_[a.first].emplace_back(Term::iri(a.restriction->property), a.restriction->filler);
          }
          break;
        case AxiomKind::RestrictionSubClassOf: {
          const auto& r = *a.restriction;
          if (r.kind == Restriction::Kind::HasValue) {
            value_classes_[{r.property, r.filler}].push_back(Term::iri(a.second));
          } else {
            some_by_property_[r.property].emplace_back(r.filler, Term::iri(a.second));
            some_by_filler_[r.filler.value()].emplace_back(Term::iri(r.property), Term::iri(a.second));
          }
          break;
        }
        default:
          break;
      }
    }
  }

  // Closure triples for the class and property hierarchies.
  std::vector<Triple> schema_triples() const {
    std::vector<Triple> out;
    for (const auto& [cls, supers] : class_supers_) {
      for (const auto& s : supers) {
        if (s != cls) out.push_back({Term::iri(cls), sub_class_of_, Term::iri(s)});
      }
    }
    for (const auto& [prop, supers] : property_supers_) {
      for (const auto& s : supers) {
        if (s != prop) out.push_back({Term::iri(prop), sub_property_of_, Term::iri(s)});
      }
    }
    return out;
  }

  void derive(const Triple& t, const rdf::Graph& g, std::vector<Triple>& out) const {
    if (t.predicate == type_) {
      if (!t.object.is_iri()) return;
      const auto& cls = t.object.value();
      if (auto it = class_supers_.find(cls); it != class_supers_.end()) {
        for (const auto& s : it->second) out.push_back({t.subject, type_, Term::iri(s)});
      }
      if (auto it = implied_values_.find(cls); it != implied_values_.end()) {
        for (const auto& [p, v] : it->second) out.push_back({t.subject, p, v});
      }
      if (auto it = some_by_filler_.find(cls); it != some_by_filler_.end()) {
        for (const auto& [p, target] : it->second) {
          g.for_each_match({std::nullopt, p, t.subject},
                           [&](const Triple& edge) { out.push_back({edge.subject, type_, target}); });
        }
      }
      return;
    }
    const auto& p = t.predicate.value();
    const bool resource_object = !t.object.is_literal();
    if (auto it = property_supers_.find(p); it != property_supers_.end()) {
      for (const auto& q : it->second) out.push_back({t.subject, Term::iri(q), t.object});
    }
    if (resource_object) {
      if (auto it = inverses_.find(p); it != inverses_.end()) {
        for (const auto& q : it->second) out.push_back({t.object, q, t.subject});
      }
      if (auto it = ranges_.find(p); it != ranges_.end()) {
        for (const auto& c : it->second) out.push_back({t.object, type_, c});
      }
    }
    if (auto it = domains_.find(p); it != domains_.end()) {
      for (const auto& c : it->second) out.push_back({t.subject, type_, c});
    }
    if (!value_classes_.empty()) {
      if (auto it = value_classes_.find({p, t.object}); it != value_classes_.end()) {
        for (const auto& c : it->second) out.push_back({t.subject, type_, c});
      }
    }
    if (auto it = some_by_property_.find(p); it != some_by_property_.end() && resource_object) {
      for (const auto& [filler, target] : it->second) {
        if (filler.value() == vocab::owl_thing || g.contains({t.object, type_, filler})) {
          out.push_back({t.subject, type_, target});
        }
      }
    }
  }

 private:
  Term type_;
  Term sub_class_of_;
  Term sub_property_of_;
  std::unordered_map<std::string, std::vector<std::string>> class_supers_;
  std::unordered_map<std::string, std::vector<std::string>> property_supers_;
  std::unordered_map<std::string, std::vector<Term>> inverses_;
  std::unordered_map<std::string, std::vector<Term>> domains_;
  std::unordered_map<std::string, std::vector<Term>> ranges_;
  std::unordered_map<std::string, std::vector<std::pair<Term, Term>>> implied_values_;
  std::unordered_map<std::pair<std::string, Term>, std::vector<Term>, PropertyValueHash> value_classes_;
  std::unordered_map<std::string, std::vector<std::pair<Term, Term>>> some_by_property_;
  std::unordered_map<std::string, std::vector<std::pair<Term, Term>>> some_by_filler_;
};

}  // namespace

rdf::Graph materialize(const rdf::Graph& graph, const owl::Ontology& ontology) {
  const RuleSet rules(ontology);
  rdf::Graph g = graph;
  for (const auto& t : rules.schema_triples()) g.insert(t);
  std::vector<Triple> frontier = g.triples();
  std::vector<Triple> next;

#ifdef _OPENMP
  const int threads = omp_get_max_threads();
#else
  const int threads = 1;
#endif
  std::vector<std::vector<Triple>> derived(static_cast<std::size_t>(threads));

  while (!frontier.empty()) {
    for (auto& buf : derived) buf.clear();
    const auto n = static_cast<std::ptrdiff_t>(frontier.size());
#pragma omp parallel num_threads(threads)
    {
#ifdef _OPENMP
      auto& buf = derived[static_cast<std::size_t>(omp_get_thread_num())];
#else
      auto& buf = derived[0];
#endif
#pragma omp for schedule(dynamic, 256)
      for (std::ptrdiff_t i = 0; i < n; ++i) rules.derive(frontier[static_cast<std::size_t>(i)], g, buf);
    }
    next.clear();
    for (const auto& buf : derived) {
      for (const auto& t : buf) {
        if (g.insert(t)) next.push_back(t);
      }
    }
    frontier.swap(next);
  }
  return g;
}

rdf::Graph materialize_serial(const rdf::Graph& graph, const owl::Ontology& ontology) {
  const RuleSet rules(ontology);
  rdf::Graph g = graph;
  for (const auto& t : rules.schema_triples()) g.insert(t);
  std::deque<Triple> work(g.begin(), g.end());
  std::vector<Triple> derived;
  while (!work.empty()) {
    const Triple t = std::move(work.front());
    work.pop_front();
    derived.clear();
    rules.derive(t, g, derived);
    for (auto& d : derived) {
      if (g.insert(d)) work.push_back(std::move(d));
    }
  }
  return g;
}

ConsistencyReport check_consistency(const rdf::Graph& graph, const owl::Ontology& ontology) {
  const rdf::Graph g = materialize(graph, ontology);
  const Term type = Term::iri(vocab::type);
  std::set<Violation> found;

  auto extension = [&](const std::string& cls) {
    std::set<Term> out;
    g.for_each_match({std::nullopt, type, Term::iri(cls)}, [&](const Triple& t) { out.insert(t.subject); });
    return out;
  };

  for (const auto& a : ontology.axioms) {
    if (a.kind == AxiomKind::DisjointClasses) {
      const auto left = extension(a.first);
      if (left.empty()) continue;
      for (const auto& x : extension(a.second)) {
        if (left.contains(x)) {
          found.insert({Violation::Kind::DisjointnessViolation, x.value(),
                        "typed by disjoint classes <" + a.first + "> and <" + a.second + ">"});
        }
      }
    } else if (a.kind == AxiomKind::DataPropertyRange) {
      g.for_each_match({std::nullopt, Term::iri(a.first), std::nullopt}, [&](const Triple& t) {
        if (!t.object.is_literal()) {
          found.insert({Violation::Kind::DatatypeClash, t.subject.value(),
                        "<" + a.first + "> has non-literal value " + t.object.to_string()});
        } else if (a.second != vocab::literal && t.object.datatype() != a.second) {
          found.insert({Violation::Kind::DatatypeClash, t.subject.value(),
                        "<" + a.first + "> value " + t.object.to_string() + " is not of range <" + a.second + ">"});
        }
      });
    }
  }

  ConsistencyReport report;
  report.violations.assign(found.begin(), found.end());
  std::sort(report.violations.begin(), report.violations.end(), [](const Violation& x, const Violation& y) {
    return std::tie(x.individual, x.kind, x.detail) < std::tie(y.individual, y.kind, y.detail);
  });
  report.consistent = report.violations.empty();
  return report;
}

std::set<std::string> superclasses(const owl::Ontology& ontology, std::string_view cls) {
  return reachable(class_edges(ontology), std::string(cls));
}

bool subsumes(const owl::Ontology& ontology, std::string_view sub, std::string_view super) {
  if (!ontology.is_class(sub)) throw UndeclaredClass(std::string(sub));
  if (!ontology.is_class(super)) throw UndeclaredClass(std::string(super));
  if (sub == super || super == vocab::owl_thing) return true;
  return superclasses(ontology, sub).contains(std::string(super));
}

std::set<Term> individuals(const rdf::Graph& graph, const owl::Ontology& ontology) {
  std::set<Term> out;
  graph.for_each_match({std::nullopt, Term::iri(vocab::type), std::nullopt}, [&](const Triple& t) {
    if (t.object.is_iri() && (ontology.is_class(t.object.value()) || t.object.value() == vocab::named_individual)) {
      out.insert(t.subject);
    }
  });
  return out;
}

namespace {

std::set<Term> extension(const owl::ClassExpression& e, const rdf::Graph& g, const owl::Ontology& onto) {
  using Kind = owl::ClassExpression::Kind;
  std::set<Term> out;
  switch (e.kind()) {
    case Kind::Named: {
      if (!onto.is_class(e.iri())) throw UndeclaredClass(e.iri());
      if (e.iri() == vocab::owl_thing) return individuals(g, onto);
      g.for_each_match({std::nullopt, Term::iri(vocab::type), Term::iri(e.iri())},
                       [&](const Triple& t) { out.insert(t.subject); });
      return out;
    }
    case Kind::And: {
      out = extension(e.operands().front(), g, onto);
      for (std::size_t i = 1; i < e.operands().size() && !out.empty(); ++i) {
        const auto next = extension(e.operands()[i], g, onto);
        std::erase_if(out, [&](const Term& t) { return !next.contains(t); });
      }
      return out;
    }
    case Kind::Or: {
      for (const auto& op : e.operands()) out.merge(extension(op, g, onto));
      return out;
    }
    case Kind::Not: {
      const auto excluded = extension(e.operands().front(), g, onto);
      for (const auto& x : individuals(g, onto)) {
        if (!excluded.contains(x)) out.insert(x);
      }
      return out;
    }
    case Kind::Some: {
      if (!onto.is_property(e.iri())) throw UndeclaredProperty(e.iri());
      const auto fillers = extension(e.operands().front(), g, onto);
      const Term p = Term::iri(e.iri());
      for (const auto& f : fillers) {
        g.for_each_match({std::nullopt, p, f}, [&](const Triple& t) { out.insert(t.subject); });
      }
      return out;
    }
    case Kind::HasValue: {
      if (!onto.is_property(e.iri())) throw UndeclaredProperty(e.iri());
      g.for_each_match({std::nullopt, Term::iri(e.iri()), e.value()}, [&](const Triple& t) { out.insert(t.subject); });
      return out;
    }
  }
  return out;
}

}  // namespace

std::set<std::string> evaluate(const owl::ClassExpression& expr, const rdf::Graph& graph,
                               const owl::Ontology& ontology) {
  std::set<std::string> out;
  for (const auto& t : extension(expr, graph, ontology)) {
    if (t.is_iri()) out.insert(t.value());
  }
  return out;
}

}  // namespace cssdh::reasoner
