#include "cssdh/schema.hpp"

#include <algorithm>
#include <array>
#include <fstream>
#include <map>
#include <set>
#include <sstream>

#include "cssdh/reasoner.hpp"

namespace cssdh::schema {

using rdf::Term;

namespace {

constexpr std::array<std::pair<SdhCategory, std::string_view>, 5> kCategories{{
    {SdhCategory::EconomicStability, "EconomicStability"},
    {SdhCategory::EducationAccessQuality, "EducationAccessQuality"},
    {SdhCategory::HealthCareAccessQuality, "HealthCareAccessQuality"},
    {SdhCategory::NeighborhoodBuiltEnvironment, "NeighborhoodBuiltEnvironment"},
    {SdhCategory::SocialCommunityContext, "SocialCommunityContext"},
}};

constexpr std::array<std::pair<Source, std::string_view>, 6> kSources{{
    {Source::ContSys, "ContSys"},
    {Source::DOLCE, "DOLCE"},
    {Source::ICD11, "ICD-11"},
    {Source::SOHO, "SOHO"},
    {Source::SocialPrescribing, "SocialPrescribing"},
    {Source::Gravity, "Gravity"},
}};

// Published CSSDH figures.
constexpr std::size_t kClasses = 171;
constexpr std::size_t kObjectProperties = 141;
constexpr std::size_t kDataProperties = 210;
constexpr std::size_t kSdhProperties = 171;

const std::vector<std::string> kMandatoryClasses = {
    "SubjectOfCare", "CareProfessional", "Observation", "HospitalAppointment", "Referral",
    "TargetCondition", "HealthCondition", "MentalObject", "Stative", "Event",
};

const std::vector<std::string> kMandatorySdh = {
    "Lay-off-from-job",
    "Crowding_at_home",
    "Lives-in-low-income-area",
    "Medical-services-not-available-at-home",
    "Problems-associated-with-exposure-to-radiation",
    "Problems-associated-with-exposure-to-tobacco-smoke",
};

std::string trim(std::string_view s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string_view::npos) return {};
  const auto e = s.find_last_not_of(" \t\r");
  return std::string(s.substr(b, e - b + 1));
}

// Splits `key=value key="quoted value"` into ordered pairs.
std::vector<std::pair<std::string, std::string>> fields(std::string_view rest, std::size_t line) {
  std::vector<std::pair<std::string, std::string>> out;
  std::size_t i = 0;
  while (true) {
    while (i < rest.size() && (rest[i] == ' ' || rest[i] == '\t' || rest[i] == '\r')) ++i;
    if (i >= rest.size()) break;
    const std::size_t eq = rest.find('=', i);
    if (eq == std::string_view::npos) throw ManifestError(line, "expected key=value, got '" + std::string(rest.substr(i)) + "'");
    std::string key(rest.substr(i, eq - i));
    if (key.empty() || key.find_first_of(" \t\"") != std::string::npos) throw ManifestError(line, "malformed field name '" + key + "'");
    i = eq + 1;
    std::string value;
    if (i < rest.size() && rest[i] == '"') {
      ++i;
      bool closed = false;
      while (i < rest.size()) {
        const char c = rest[i++];
        if (c == '"') {
          closed = true;
          break;
        }
        if (c == '\\') {
          if (i >= rest.size() || (rest[i] != '"' && rest[i] != '\\')) throw ManifestError(line, "bad escape in quoted value");
          value += rest[i++];
        } else {
          value += c;
        }
      }
      if (!closed) throw ManifestError(line, "unterminated quoted value for '" + key + "'");
      if (i < rest.size() && rest[i] != ' ' && rest[i] != '\t' && rest[i] != '\r') {
        throw ManifestError(line, "expected whitespace after quoted value for '" + key + "'");
      }
    } else {
      const std::size_t end = rest.find_first_of(" \t\r", i);
      value = std::string(rest.substr(i, end == std::string_view::npos ? std::string_view::npos : end - i));
      i = end == std::string_view::npos ? rest.size() : end;
      if (value.empty()) throw ManifestError(line, "empty value for '" + key + "'");
    }
    for (const auto& [k, v] : out) {
      if (k == key) throw ManifestError(line, "duplicate field '" + key + "'");
    }
    out.emplace_back(std::move(key), std::move(value));
  }
  return out;
}

std::string angle_iri(std::string_view s, std::size_t line) {
  const std::string t = trim(s);
  if (t.size() < 2 || t.front() != '<' || t.back() != '>') throw ManifestError(line, "expected <IRI>");
  std::string iri = t.substr(1, t.size() - 2);
  if (!rdf::is_absolute_iri(iri)) throw ManifestError(line, "namespace must be an absolute IRI");
  return iri;
}

std::vector<std::string> split_list(const std::string& v) {
  std::vector<std::string> out;
  std::stringstream ss(v);
  std::string item;
  while (std::getline(ss, item, ',')) {
    if (!item.empty()) out.push_back(item);
  }
  return out;
}

bool is_datatype_ref(const Manifest& m, const std::string& ref) {
  try {
    return owl::is_builtin_datatype(m.resolve(ref));
  } catch (const Error&) {
    return false;
  }
}

}  // namespace

std::string_view to_string(EntryKind kind) {
  switch (kind) {
    case EntryKind::Class:
      return "class";
    case EntryKind::ObjectProperty:
      return "objectProperty";
    case EntryKind::DataProperty:
      return "dataProperty";
  }
  return "?";
}

std::string_view to_string(SdhCategory category) {
  for (const auto& [c, name] : kCategories) {
    if (c == category) return name;
  }
  return "?";
}

std::string_view to_string(Source source) {
  for (const auto& [s, name] : kSources) {
    if (s == source) return name;
  }
  return "?";
}

std::optional<SdhCategory> parse_sdh_category(std::string_view text) {
  for (const auto& [c, name] : kCategories) {
    if (name == text) return c;
  }
  return std::nullopt;
}

std::optional<Source> parse_source(std::string_view text) {
  for (const auto& [s, name] : kSources) {
    if (name == text) return s;
  }
  return std::nullopt;
}

ManifestError::ManifestError(std::size_t line, const std::string& message)
    : Error("line " + std::to_string(line) + ": " + message), line_(line), detail_(message) {}

rdf::PrefixMap Manifest::resolver() const {
  rdf::PrefixMap p = rdf::default_prefixes();
  p.merge(prefixes);
  return p;
}

std::string Manifest::resolve(std::string_view ref) const {
  if (ref.find(':') != std::string_view::npos) return rdf::expand_curie(ref, resolver());
  return ns + std::string(ref);
}

const CatalogEntry* Manifest::find(std::string_view term) const {
  for (const auto& e : entries) {
    if (e.term == term) return &e;
  }
  return nullptr;
}

Manifest parse_manifest(std::string_view text) {
  Manifest m;
  std::size_t line_no = 0;
  std::size_t pos = 0;
  while (pos <= text.size()) {
    const std::size_t nl = text.find('\n', pos);
    const std::string_view raw = text.substr(pos, nl == std::string_view::npos ? std::string_view::npos : nl - pos);
    pos = nl == std::string_view::npos ? text.size() + 1 : nl + 1;
    ++line_no;
    const std::string line = trim(raw);
    if (line.empty() || line.front() == '#') continue;

    if (line.starts_with("@namespace")) {
      m.ns = angle_iri(std::string_view(line).substr(10), line_no);
      continue;
    }
    if (line.starts_with("@prefix")) {
      const std::string body = trim(std::string_view(line).substr(7));
      const auto colon = body.find(':');
      if (colon == std::string::npos) throw ManifestError(line_no, "expected '@prefix label: <IRI>'");
      const std::string label = body.substr(0, colon);
      if (label.find_first_of(" \t<") != std::string::npos) throw ManifestError(line_no, "malformed prefix label");
      m.prefixes.bind(label, angle_iri(std::string_view(body).substr(colon + 1), line_no));
      continue;
    }

    const auto sp = line.find_first_of(" \t");
    const std::string kind = line.substr(0, sp);
    CatalogEntry e;
    if (kind == "class") {
      e.kind = EntryKind::Class;
    } else if (kind == "objectProperty") {
      e.kind = EntryKind::ObjectProperty;
    } else if (kind == "dataProperty") {
      e.kind = EntryKind::DataProperty;
    } else {
      throw ManifestError(line_no, "unknown entry kind '" + kind + "'");
    }
    if (sp == std::string::npos) throw ManifestError(line_no, "missing term name");
    const std::string rest = trim(std::string_view(line).substr(sp));
    const auto term_end = rest.find_first_of(" \t");
    e.term = rest.substr(0, term_end);
    if (e.term.find('=') != std::string::npos) throw ManifestError(line_no, "missing term name");
    bool have_label = false;
    bool have_source = false;
    for (auto& [key, value] : fields(term_end == std::string::npos ? std::string_view{} : std::string_view(rest).substr(term_end), line_no)) {
      if (key == "label") {
        e.label = std::move(value);
        have_label = true;
      } else if (key == "parent") {
        e.parent = std::move(value);
      } else if (key == "equivalent") {
        e.equivalent = std::move(value);
      } else if (key == "disjoint") {
        e.disjoint = split_list(value);
      } else if (key == "domain") {
        e.domain = std::move(value);
      } else if (key == "range") {
        e.range = std::move(value);
      } else if (key == "inverse") {
        e.inverse = std::move(value);
      } else if (key == "sdh") {
        e.sdh = parse_sdh_category(value);
        if (!e.sdh) throw ManifestError(line_no, "unknown SDH category '" + value + "'");
      } else if (key == "source") {
        const auto s = parse_source(value);
        if (!s) throw ManifestError(line_no, "unknown source '" + value + "'");
        e.source = *s;
        have_source = true;
      } else {
        throw ManifestError(line_no, "unknown field '" + key + "'");
      }
    }
    if (!have_label) throw ManifestError(line_no, "entry " + e.term + " has no label");
    if (!have_source) throw ManifestError(line_no, "entry " + e.term + " has no source");
    if (e.kind != EntryKind::Class && (e.equivalent || !e.disjoint.empty())) {
      throw ManifestError(line_no, "equivalent/disjoint apply to classes only");
    }
    if (e.kind == EntryKind::Class && (e.domain || e.range || e.inverse || e.sdh)) {
      throw ManifestError(line_no, "domain/range/inverse/sdh do not apply to classes");
    }
    if (e.kind != EntryKind::ObjectProperty && e.inverse) throw ManifestError(line_no, "inverse applies to object properties only");
    m.entries.push_back(std::move(e));
  }
  return m;
}

Manifest load_manifest(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error("cannot open " + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return parse_manifest(ss.str());
}

std::vector<std::string> structural_problems(const Manifest& m) {
  std::vector<std::string> problems;
  std::map<std::string, const CatalogEntry*> by_iri;
  for (const auto& e : m.entries) {
    std::string iri;
    try {
      iri = m.resolve(e.term);
    } catch (const Error& err) {
      problems.push_back(e.term + ": " + err.what());
      continue;
    }
    if (!by_iri.emplace(iri, &e).second) problems.push_back(e.term + ": duplicate entry");
  }
  auto kind_of = [&](const std::string& ref) -> std::optional<EntryKind> {
    try {
      auto it = by_iri.find(m.resolve(ref));
      if (it == by_iri.end()) return std::nullopt;
      return it->second->kind;
    } catch (const Error&) {
      return std::nullopt;
    }
  };
  auto expect = [&](const CatalogEntry& e, const char* field, const std::string& ref, EntryKind want) {
    const auto k = kind_of(ref);
    if (!k) {
      problems.push_back(e.term + ": " + field + " " + ref + " does not resolve to an entry");
    } else if (*k != want) {
      problems.push_back(e.term + ": " + field + " " + ref + " is a " + std::string(to_string(*k)) + ", expected " +
                         std::string(to_string(want)));
    }
  };
  for (const auto& e : m.entries) {
    if (e.parent) expect(e, "parent", *e.parent, e.kind);
    if (e.equivalent) expect(e, "equivalent", *e.equivalent, EntryKind::Class);
    for (const auto& d : e.disjoint) expect(e, "disjoint", d, EntryKind::Class);
    if (e.domain) expect(e, "domain", *e.domain, EntryKind::Class);
    if (e.inverse) expect(e, "inverse", *e.inverse, EntryKind::ObjectProperty);
    if (e.range) {
      if (e.kind == EntryKind::ObjectProperty) {
        expect(e, "range", *e.range, EntryKind::Class);
      } else if (!is_datatype_ref(m, *e.range)) {
        problems.push_back(e.term + ": range " + *e.range + " is not a built-in datatype");
      }
    }
    if (e.sdh) {
      if (e.kind != EntryKind::DataProperty) problems.push_back(e.term + ": SDH category on a non-data property");
      if (!e.range || !is_datatype_ref(m, *e.range) || m.resolve(*e.range) != rdf::vocab::xsd_boolean) {
        problems.push_back(e.term + ": SDH data property must have range xsd:boolean");
      }
    }
  }
  return problems;
}

Schema build_schema(const Manifest& m) {
  const auto problems = structural_problems(m);
  if (!problems.empty()) {
    std::string msg = "manifest is not generateable:";
    for (const auto& p : problems) msg += "\n  " + p;
    throw ManifestError(msg);
  }
  Schema s;
  s.prefixes = m.resolver();
  if (m.ns != rdf::ns::coc) s.prefixes.bind("", m.ns);

  auto& g = s.graph;
  const Term type = Term::iri(rdf::vocab::type);
  const Term label = Term::iri(rdf::vocab::label);
  const Term category = Term::iri(owl::sdh_category_property());
  auto iri = [&](const std::string& ref) { return Term::iri(m.resolve(ref)); };
  bool any_sdh = false;

  for (const auto& e : m.entries) {
    const Term t = iri(e.term);
    switch (e.kind) {
      case EntryKind::Class:
        g.insert(t, type, Term::iri(rdf::vocab::owl_class));
        break;
      case EntryKind::ObjectProperty:
        g.insert(t, type, Term::iri(rdf::vocab::object_property));
        break;
      case EntryKind::DataProperty:
        g.insert(t, type, Term::iri(rdf::vocab::datatype_property));
        break;
    }
    g.insert(t, label, Term::literal(e.label));
    if (e.parent) {
      g.insert(t, Term::iri(e.kind == EntryKind::Class ? rdf::vocab::sub_class_of : rdf::vocab::sub_property_of), iri(*e.parent));
    }
    if (e.equivalent) g.insert(t, Term::iri(rdf::vocab::equivalent_class), iri(*e.equivalent));
    for (const auto& d : e.disjoint) g.insert(t, Term::iri(rdf::vocab::disjoint_with), iri(d));
    if (e.domain) g.insert(t, Term::iri(rdf::vocab::domain), iri(*e.domain));
    if (e.range) g.insert(t, Term::iri(rdf::vocab::range), iri(*e.range));
    if (e.inverse) g.insert(t, Term::iri(rdf::vocab::inverse_of), iri(*e.inverse));
    if (e.sdh) {
      g.insert(t, category, Term::literal(std::string(to_string(*e.sdh))));
      any_sdh = true;
    }
  }
  if (any_sdh) {
    g.insert(category, type, Term::iri(rdf::vocab::annotation_property));
    g.insert(category, label, Term::literal("SDH category"));
  }
  s.ontology = owl::extract_axioms(g);
  return s;
}

bool VerificationReport::passed() const {
  return std::all_of(checks.begin(), checks.end(), [](const Check& c) { return c.passed; });
}

std::string VerificationReport::to_string() const {
  std::string out;
  for (const auto& c : checks) out += (c.passed ? "PASS " : "FAIL ") + c.name + ": " + c.detail + "\n";
  return out;
}

VerificationReport verify_manifest(const Manifest& m) {
  VerificationReport r;
  std::size_t classes = 0, objects = 0, datas = 0, sdh = 0;
  for (const auto& e : m.entries) {
    if (e.kind == EntryKind::Class) ++classes;
    if (e.kind == EntryKind::ObjectProperty) ++objects;
    if (e.kind == EntryKind::DataProperty) ++datas;
    if (e.kind == EntryKind::DataProperty && e.sdh) ++sdh;
  }
  auto count_check = [&](const std::string& name, std::size_t got, std::size_t want) {
    r.checks.push_back({name, got == want, std::to_string(got) + " (expected " + std::to_string(want) + ")"});
  };
  count_check("class-count", classes, kClasses);
  count_check("object-property-count", objects, kObjectProperties);
  count_check("data-property-count", datas, kDataProperties);
  count_check("sdh-data-property-count", sdh, kSdhProperties);

  auto missing_of = [&](const std::vector<std::string>& names, auto accept) {
    std::string missing;
    for (const auto& n : names) {
      const auto* e = m.find(n);
      if (e == nullptr || !accept(*e)) missing += (missing.empty() ? "" : ", ") + n;
    }
    return missing;
  };
  const auto missing_classes = missing_of(kMandatoryClasses, [](const CatalogEntry& e) { return e.kind == EntryKind::Class; });
  r.checks.push_back({"mandatory-classes", missing_classes.empty(),
                      missing_classes.empty() ? "all present" : "missing " + missing_classes});
  const auto missing_sdh = missing_of(kMandatorySdh, [](const CatalogEntry& e) { return e.kind == EntryKind::DataProperty && e.sdh; });
  r.checks.push_back({"mandatory-sdh-properties", missing_sdh.empty(),
                      missing_sdh.empty() ? "all present" : "missing " + missing_sdh});

  std::string boolean_bad;
  for (const auto& e : m.entries) {
    if (!e.sdh) continue;
    bool ok = e.kind == EntryKind::DataProperty && e.range && is_datatype_ref(m, *e.range) &&
              m.resolve(*e.range) == rdf::vocab::xsd_boolean;
    if (!ok) boolean_bad += (boolean_bad.empty() ? "" : ", ") + e.term + " (range " + e.range.value_or("none") + ")";
  }
  r.checks.push_back({"sdh-boolean-range", boolean_bad.empty(),
                      boolean_bad.empty() ? "every SDH property has range xsd:boolean"
                                          : "SDH properties must have range xsd:boolean: " + boolean_bad});

  const auto problems = structural_problems(m);
  std::string closure;
  for (const auto& p : problems) {
    if (p.find("SDH") != std::string::npos) continue;  // reported above
    closure += (closure.empty() ? "" : "; ") + p;
  }
  r.checks.push_back({"referential-closure", closure.empty(), closure.empty() ? "all references resolve" : closure});

  Check sub{"target-condition-subsumption", false, ""};
  if (!problems.empty()) {
    sub.detail = "schema cannot be generated";
  } else {
    const Schema s = build_schema(m);
    const std::string tc = m.resolve("TargetCondition");
    const std::string hc = m.resolve("HealthCondition");
    if (!s.ontology.is_class(tc) || !s.ontology.is_class(hc)) {
      sub.detail = "TargetCondition or HealthCondition not declared";
    } else {
      sub.passed = reasoner::subsumes(s.ontology, tc, hc);
      sub.detail = sub.passed ? "TargetCondition subClassOf HealthCondition" : "TargetCondition is not subsumed by HealthCondition";
    }
  }
  r.checks.push_back(std::move(sub));
  return r;
}

}  // namespace cssdh::schema
