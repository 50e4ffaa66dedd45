#include "cssdh/pitfalls.hpp"

#include <algorithm>
#include <cctype>
#include <functional>
#include <map>

#include "cssdh/reasoner.hpp"

namespace cssdh::pitfalls {

using owl::AxiomKind;
using rdf::Term;

namespace {

bool builtin_vocabulary(std::string_view iri) {
  for (auto ns : {rdf::ns::rdf, rdf::ns::rdfs, rdf::ns::owl, rdf::ns::xsd}) {
    if (iri.starts_with(ns)) return true;
  }
  return false;
}

class Scanner {
 public:
  Scanner(const rdf::Graph& g, const owl::Ontology& o, const ScanOptions& opt) : g_(g), o_(o), opt_(opt) {}

  PitfallReport run() {
    cycles();
    domain_range();
    unconnected();
    labels();
    disjoint_parents();
    naming();
    undeclared();
    sdh_ranges();
    PitfallReport r;
    for (auto& [key, msg] : found_) r.findings.push_back({key.first, severity_of(key.first), key.second, msg});
    return r;
  }

 private:
  void add(Code code, const std::string& subject, const std::string& message) {
    found_.try_emplace({code, subject}, message);
  }

  std::string short_name(const std::string& iri) const { return std::string(rdf::local_name(iri)); }

  // Equivalence is contracted with union-find; the remaining SubClassOf
  // graph is searched for strongly connected components (Tarjan).
  void cycles() {
    std::map<std::string, std::string> parent;
    std::function<std::string(const std::string&)> find = [&](const std::string& x) -> std::string {
      auto it = parent.find(x);
      if (it == parent.end() || it->second == x) return x;
      return it->second = find(it->second);
    };
    for (const auto& ax : o_.axioms) {
      if (ax.kind != AxiomKind::EquivalentClasses) continue;
      const auto a = find(ax.first), b = find(ax.second);
      if (a != b) parent[std::max(a, b)] = std::min(a, b);
    }
    std::map<std::string, std::set<std::string>> edges;
    std::map<std::string, std::set<std::string>> members;
    for (const auto& ax : o_.axioms) {
      if (ax.kind != AxiomKind::SubClassOf) continue;
      const auto a = find(ax.first), b = find(ax.second);
      members[a].insert(ax.first);
      members[b].insert(ax.second);
      if (a != b) edges[a].insert(b);
    }
    std::map<std::string, int> index, low;
    std::vector<std::string> stack;
    std::set<std::string> on_stack;
    int counter = 0;
    std::function<void(const std::string&)> visit = [&](const std::string& v) {
      index[v] = low[v] = counter++;
      stack.push_back(v);
      on_stack.insert(v);
      for (const auto& w : edges[v]) {
        if (!index.contains(w)) {
          visit(w);
          low[v] = std::min(low[v], low[w]);
        } else if (on_stack.contains(w)) {
          low[v] = std::min(low[v], index[w]);
        }
      }
      if (low[v] != index[v]) return;
      std::vector<std::string> scc;
      while (true) {
        auto w = stack.back();
        stack.pop_back();
        on_stack.erase(w);
        scc.push_back(w);
        if (w == v) break;
      }
      if (scc.size() < 2) return;
      std::set<std::string> cls;
      for (const auto& rep : scc) cls.insert(members[rep].begin(), members[rep].end());
      std::string names;
      for (const auto& c : cls) names += (names.empty() ? "" : ", ") + short_name(c);
      for (const auto& c : cls) add(Code::PF01, c, "subclass cycle without declared equivalence: " + names);
    };
    for (const auto& [v, _] : members) {
      if (!index.contains(v)) visit(v);
    }
  }

  void domain_range() {
    std::set<std::string> with_domain, with_range;
    for (const auto& ax : o_.axioms) {
      if (ax.kind == AxiomKind::ObjectPropertyDomain || ax.kind == AxiomKind::DataPropertyDomain) with_domain.insert(ax.first);
      if (ax.kind == AxiomKind::ObjectPropertyRange || ax.kind == AxiomKind::DataPropertyRange) with_range.insert(ax.first);
    }
    auto check = [&](const std::set<std::string>& props) {
      for (const auto& p : props) {
        const bool d = with_domain.contains(p), r = with_range.contains(p);
        if (d && r) continue;
        add(Code::PF02, p, std::string("property has no ") + (!d && !r ? "domain or range" : !d ? "domain" : "range"));
      }
    };
    check(o_.object_properties);
    check(o_.data_properties);
  }

  void unconnected() {
    std::set<std::string> linked;
    for (const auto& ax : o_.axioms) {
      switch (ax.kind) {
        case AxiomKind::SubClassOf:
        case AxiomKind::EquivalentClasses:
        case AxiomKind::ObjectPropertyDomain:
        case AxiomKind::DataPropertyDomain:
          linked.insert(ax.second);
          if (ax.kind == AxiomKind::SubClassOf || ax.kind == AxiomKind::EquivalentClasses) linked.insert(ax.first);
          break;
        case AxiomKind::ObjectPropertyRange:
          linked.insert(ax.second);
          break;
        case AxiomKind::SubClassOfRestriction:
          linked.insert(ax.first);
          if (ax.restriction && ax.restriction->kind == owl::Restriction::Kind::SomeValuesFrom) {
            linked.insert(ax.restriction->filler.value());
          }
          break;
        case AxiomKind::RestrictionSubClassOf:
          linked.insert(ax.second);
          break;
        default:
          break;
      }
    }
    for (const auto& c : o_.classes) {
      if (!linked.contains(c)) add(Code::PF03, c, "class has no subclass link and is not used as a domain or range");
    }
  }

  void labels() {
    const Term label = Term::iri(rdf::vocab::label);
    for (const auto* set : {&o_.classes, &o_.object_properties, &o_.data_properties, &o_.annotation_properties}) {
      for (const auto& e : *set) {
        if (builtin_vocabulary(e)) continue;
        if (!g_.has_match({Term::iri(e), label, std::nullopt})) add(Code::PF04, e, "entity has no rdfs:label");
      }
    }
  }

  void disjoint_parents() {
    std::vector<std::pair<std::string, std::string>> pairs;
    for (const auto& ax : o_.axioms) {
      if (ax.kind == AxiomKind::DisjointClasses) pairs.emplace_back(ax.first, ax.second);
    }
    if (pairs.empty()) return;
    for (const auto& c : o_.classes) {
      auto supers = reasoner::superclasses(o_, c);
      supers.insert(c);
      for (const auto& [a, b] : pairs) {
        if (supers.contains(a) && supers.contains(b)) {
          add(Code::PF05, c, "class is subsumed by disjoint classes " + short_name(a) + " and " + short_name(b));
          break;
        }
      }
    }
  }

  void naming() {
    auto check = [&](const std::set<std::string>& names, bool (*ok)(std::string_view), const char* convention) {
      for (const auto& iri : names) {
        if (builtin_vocabulary(iri)) continue;
        const std::string local = short_name(iri);
        if (opt_.naming_exemptions.contains(local) || ok(local)) continue;
        add(Code::PF06, iri, "local name '" + local + "' does not follow the " + convention + " convention");
      }
    };
    check(o_.classes, is_upper_camel, "UpperCamelCase class");
    check(o_.object_properties, is_lower_camel, "lowerCamelCase object property");
    check(o_.annotation_properties, is_lower_camel, "lowerCamelCase annotation property");
    check(o_.data_properties, is_hyphenated, "hyphen-delimited data property");
  }

  void undeclared() {
    for (const auto& d : o_.dangling) add(Code::PF07, d.missing, "referenced as " + d.expected + " but never declared");
    const std::string type = rdf::vocab::type;
    for (const auto& t : g_) {
      const auto& p = t.predicate.value();
      if (!builtin_vocabulary(p) && !o_.is_property(p)) add(Code::PF07, p, "used as a predicate but not declared as a property");
      if (p == type && t.object.is_iri()) {
        const auto& c = t.object.value();
        if (!builtin_vocabulary(c) && !o_.is_class(c)) add(Code::PF07, c, "used as a type but not declared as a class");
      }
    }
  }

  void sdh_ranges() {
    const Term category = Term::iri(owl::sdh_category_property());
    std::map<std::string, std::set<std::string>> ranges;
    for (const auto& ax : o_.axioms) {
      if (ax.kind == AxiomKind::DataPropertyRange) ranges[ax.first].insert(ax.second);
    }
    for (const auto& p : o_.data_properties) {
      if (!g_.has_match({Term::iri(p), category, std::nullopt})) continue;
      auto it = ranges.find(p);
      if (it == ranges.end()) continue;  // PF02 covers a missing range
      for (const auto& r : it->second) {
        if (r != rdf::vocab::xsd_boolean) {
          add(Code::PF08, p, "SDH data property has range " + short_name(r) + ", expected xsd:boolean");
          break;
        }
      }
    }
  }

  const rdf::Graph& g_;
  const owl::Ontology& o_;
  const ScanOptions& opt_;
  std::map<std::pair<Code, std::string>, std::string> found_;
};

bool alnum(unsigned char c) { return std::isalnum(c) != 0; }

}  // namespace

Severity severity_of(Code code) {
  switch (code) {
    case Code::PF01:
    case Code::PF05:
    case Code::PF08:
      return Severity::Critical;
    case Code::PF02:
    case Code::PF07:
      return Severity::Important;
    case Code::PF03:
    case Code::PF04:
    case Code::PF06:
      return Severity::Minor;
  }
  return Severity::Minor;
}

std::string_view to_string(Code code) {
  static constexpr std::string_view names[] = {"PF01", "PF02", "PF03", "PF04", "PF05", "PF06", "PF07", "PF08"};
  return names[static_cast<int>(code) - 1];
}

std::string_view to_string(Severity severity) {
  switch (severity) {
    case Severity::Critical:
      return "Critical";
    case Severity::Important:
      return "Important";
    case Severity::Minor:
      return "Minor";
  }
  return "?";
}

std::string_view describe(Code code) {
  switch (code) {
    case Code::PF01:
      return "cycle in the class hierarchy";
    case Code::PF02:
      return "property missing domain or range";
    case Code::PF03:
      return "unconnected class";
    case Code::PF04:
      return "entity missing rdfs:label";
    case Code::PF05:
      return "class subsumed by disjoint classes";
    case Code::PF06:
      return "inconsistent naming convention";
    case Code::PF07:
      return "reference to undeclared entity";
    case Code::PF08:
      return "non-boolean SDH data property";
  }
  return "?";
}

std::string PitfallReport::to_string() const {
  std::string out;
  for (const auto& f : findings) {
    out += std::string(pitfalls::to_string(f.code)) + '\t' + std::string(pitfalls::to_string(f.severity)) + '\t' +
           f.subject + '\t' + f.message + '\n';
  }
  out += "PITFALLS: " + std::to_string(findings.size()) + '\n';
  return out;
}

PitfallReport scan(const rdf::Graph& graph, const owl::Ontology& ontology, const ScanOptions& options) {
  return Scanner(graph, ontology, options).run();
}

bool is_upper_camel(std::string_view name) {
  return !name.empty() && std::isupper(static_cast<unsigned char>(name[0])) && std::all_of(name.begin(), name.end(), alnum);
}

bool is_lower_camel(std::string_view name) {
  return !name.empty() && std::islower(static_cast<unsigned char>(name[0])) && std::all_of(name.begin(), name.end(), alnum);
}

bool is_hyphenated(std::string_view name) {
  if (name.empty() || name.front() == '-' || name.back() == '-') return false;
  if (name.find("--") != std::string_view::npos) return false;
  return std::all_of(name.begin(), name.end(), [](unsigned char c) { return alnum(c) || c == '-'; });
}

}  // namespace cssdh::pitfalls
