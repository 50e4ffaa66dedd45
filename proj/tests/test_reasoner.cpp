#include <gtest/gtest.h>

#include "cssdh/reasoner.hpp"
#include "cssdh/turtle.hpp"
#include "support.hpp"

using namespace cssdh;
using rdf::Term;

namespace {

const std::string kEx = "http://example.org/";
const std::string kHeader = R"(@prefix ex: <http://example.org/> .
@prefix owl: <http://www.w3.org/2002/07/owl#> .
@prefix rdfs: <http://www.w3.org/2000/01/rdf-schema#> .
@prefix xsd: <http://www.w3.org/2001/XMLSchema#> .
)";

struct Kb {
  rdf::Graph graph;
  owl::Ontology ontology;
  rdf::Graph closed;
};

Kb load(const std::string& body) {
  Kb kb;
  kb.graph = turtle::parse_turtle(kHeader + body).graph;
  kb.ontology = owl::extract_axioms(kb.graph);
  kb.closed = reasoner::materialize(kb.graph, kb.ontology);
  EXPECT_EQ(kb.closed, reasoner::materialize_serial(kb.graph, kb.ontology));
  return kb;
}

rdf::Triple type(const std::string& x, const std::string& c) {
  return {Term::iri(kEx + x), Term::iri(rdf::vocab::type), Term::iri(kEx + c)};
}

rdf::Triple edge(const std::string& s, const std::string& p, const std::string& o) {
  return {Term::iri(kEx + s), Term::iri(kEx + p), Term::iri(kEx + o)};
}

struct Shipped {
  rdf::Graph schema = turtle::load_turtle_file(test::path_of("data/cssdh.ttl")).graph;
  owl::Ontology ontology = owl::extract_axioms(schema);
  std::string coc(const std::string& local) const { return "http://purl.org/net/for-coc#" + local; }
};

}  // namespace

TEST(Materialize, SubclassTransitivityAndTypeInheritance) {
  const auto kb = load("ex:A rdfs:subClassOf ex:B . ex:B rdfs:subClassOf ex:C . ex:A a owl:Class . ex:B a owl:Class . ex:C a owl:Class . ex:x a ex:A .");
  EXPECT_TRUE(kb.closed.contains({Term::iri(kEx + "A"), Term::iri(rdf::vocab::sub_class_of), Term::iri(kEx + "C")}));
  EXPECT_TRUE(kb.closed.contains(type("x", "B")));
  EXPECT_TRUE(kb.closed.contains(type("x", "C")));
}

TEST(Materialize, DomainRangeSubpropertyInverse) {
  const auto kb = load(R"(
ex:A a owl:Class . ex:B a owl:Class .
ex:p a owl:ObjectProperty ; rdfs:domain ex:A ; rdfs:range ex:B ; rdfs:subPropertyOf ex:q .
ex:q a owl:ObjectProperty ; owl:inverseOf ex:r .
ex:r a owl:ObjectProperty .
ex:d a owl:DatatypeProperty ; rdfs:domain ex:A ; rdfs:range xsd:string .
ex:x ex:p ex:y .
ex:z ex:d "literal" .
)");
  EXPECT_TRUE(kb.closed.contains(type("x", "A")));
  EXPECT_TRUE(kb.closed.contains(type("y", "B")));
  EXPECT_TRUE(kb.closed.contains(edge("x", "q", "y")));
  EXPECT_TRUE(kb.closed.contains(edge("y", "r", "x")));
  EXPECT_TRUE(kb.closed.contains(type("z", "A")));
  // A literal never becomes a subject.
  for (const auto& t : kb.closed) EXPECT_FALSE(t.subject.is_literal());
}

TEST(Materialize, EquivalenceIsMutualSubclass) {
  const auto kb = load("ex:A a owl:Class ; owl:equivalentClass ex:B . ex:B a owl:Class . ex:x a ex:A . ex:y a ex:B .");
  EXPECT_TRUE(kb.closed.contains(type("x", "B")));
  EXPECT_TRUE(kb.closed.contains(type("y", "A")));
}

TEST(Materialize, HasValueBothDirections) {
  const auto kb = load(R"(
ex:Flagged a owl:Class ; rdfs:subClassOf _:r1 .
ex:Marked a owl:Class .
ex:flag a owl:DatatypeProperty .
_:r1 a owl:Restriction ; owl:onProperty ex:flag ; owl:hasValue true .
_:r2 a owl:Restriction ; owl:onProperty ex:flag ; owl:hasValue false .
_:r2 rdfs:subClassOf ex:Marked .
ex:x a ex:Flagged .
ex:y ex:flag false .
)");
  EXPECT_TRUE(kb.closed.contains({Term::iri(kEx + "x"), Term::iri(kEx + "flag"), Term::boolean(true)}));
  EXPECT_TRUE(kb.closed.contains(type("y", "Marked")));
  EXPECT_FALSE(kb.closed.contains(type("x", "Marked")));
}

TEST(Materialize, SomeValuesFromAsSubclass) {
  const auto kb = load(R"(
ex:Condition a owl:Class . ex:Patient a owl:Class .
ex:has a owl:ObjectProperty .
_:r a owl:Restriction ; owl:onProperty ex:has ; owl:someValuesFrom ex:Condition .
_:r rdfs:subClassOf ex:Patient .
ex:x ex:has ex:c .
ex:y ex:has ex:d .
ex:c a ex:Condition .
)");
  EXPECT_TRUE(kb.closed.contains(type("x", "Patient")));
  EXPECT_FALSE(kb.closed.contains(type("y", "Patient")));
}

TEST(Materialize, ExistentialSuperclassInventsNothing) {
  const auto kb = load(R"(
ex:A a owl:Class ; rdfs:subClassOf _:r . ex:B a owl:Class .
ex:p a owl:ObjectProperty .
_:r a owl:Restriction ; owl:onProperty ex:p ; owl:someValuesFrom ex:B .
ex:x a ex:A .
)");
  EXPECT_FALSE(kb.closed.has_match({Term::iri(kEx + "x"), Term::iri(kEx + "p"), std::nullopt}));
}

TEST(Materialize, ShippedSchemaWithPatientsAgreesSerially) {
  const Shipped s;
  rdf::Graph g = s.schema;
  g.insert_all(turtle::load_turtle_file(test::path_of("data/patients-100.ttl")).graph);
  const auto o = owl::extract_axioms(g);
  EXPECT_EQ(reasoner::materialize(g, o), reasoner::materialize_serial(g, o));
}

TEST(Consistency, ShippedSchemaAndPatients) {
  const Shipped s;
  EXPECT_TRUE(reasoner::check_consistency(s.schema, s.ontology).consistent);
  rdf::Graph g = s.schema;
  g.insert_all(turtle::load_turtle_file(test::path_of("data/patients-100.ttl")).graph);
  EXPECT_TRUE(reasoner::check_consistency(g, owl::extract_axioms(g)).consistent);
}

TEST(Consistency, DisjointnessViolationNamesIndividual) {
  const Shipped s;
  rdf::Graph g = s.schema;
  g.insert_all(turtle::load_turtle_file(test::path_of("tests/fixtures/disjointness-violation.ttl")).graph);
  const auto r = reasoner::check_consistency(g, owl::extract_axioms(g));
  ASSERT_FALSE(r.consistent);
  ASSERT_EQ(r.violations.size(), 1u);
  EXPECT_EQ(r.violations[0].kind, reasoner::Violation::Kind::DisjointnessViolation);
  EXPECT_EQ(r.violations[0].individual, "http://purl.org/net/for-coc#case/c1");
}

TEST(Consistency, DatatypeClashOnNonBooleanSdhValue) {
  const Shipped s;
  rdf::Graph g = s.schema;
  g.insert(Term::iri(s.coc("patient/p9")), Term::iri(s.coc("Lay-off-from-job")), Term::literal("maybe"));
  const auto r = reasoner::check_consistency(g, s.ontology);
  ASSERT_FALSE(r.consistent);
  EXPECT_EQ(r.violations[0].kind, reasoner::Violation::Kind::DatatypeClash);
  EXPECT_EQ(r.violations[0].individual, s.coc("patient/p9"));
}

TEST(Subsumption, ShippedHierarchy) {
  const Shipped s;
  EXPECT_TRUE(reasoner::subsumes(s.ontology, s.coc("TargetCondition"), s.coc("HealthCondition")));
  EXPECT_FALSE(reasoner::subsumes(s.ontology, s.coc("HealthCondition"), s.coc("TargetCondition")));
  EXPECT_TRUE(reasoner::subsumes(s.ontology, s.coc("TargetCondition"), s.coc("Stative")));
  EXPECT_TRUE(reasoner::subsumes(s.ontology, s.coc("HospitalAppointment"), s.coc("Event")));
  EXPECT_TRUE(reasoner::subsumes(s.ontology, s.coc("SubjectOfCare"), "http://hl7.org/fhir/Patient"));
  EXPECT_TRUE(reasoner::subsumes(s.ontology, "http://hl7.org/fhir/Patient", s.coc("SubjectOfCare")));
  EXPECT_TRUE(reasoner::subsumes(s.ontology, s.coc("Event"), s.coc("Event")));
  EXPECT_TRUE(reasoner::subsumes(s.ontology, s.coc("Event"), rdf::vocab::owl_thing));
  EXPECT_THROW(reasoner::subsumes(s.ontology, s.coc("NoSuchClass"), s.coc("Event")), UndeclaredClass);
}

TEST(Evaluate, ClosedWorldOperators) {
  const auto kb = load(R"(
ex:A a owl:Class . ex:B a owl:Class . ex:C a owl:Class .
ex:p a owl:ObjectProperty . ex:flag a owl:DatatypeProperty .
ex:x a ex:A ; ex:flag true ; ex:p ex:y .
ex:y a ex:B .
ex:z a ex:C ; ex:flag false .
)");
  rdf::PrefixMap p = rdf::default_prefixes();
  p.bind("ex", kEx);
  auto eval = [&](const std::string& text) {
    return reasoner::evaluate(owl::parse_class_expression(text, p, kEx), kb.closed, kb.ontology);
  };
  EXPECT_EQ(eval("A or C"), (std::set<std::string>{kEx + "x", kEx + "z"}));
  EXPECT_EQ(eval("not A"), (std::set<std::string>{kEx + "y", kEx + "z"}));
  EXPECT_EQ(eval("some p B"), (std::set<std::string>{kEx + "x"}));
  EXPECT_EQ(eval("flag value true"), (std::set<std::string>{kEx + "x"}));
  EXPECT_EQ(eval("owl:Thing and not flag value true"), (std::set<std::string>{kEx + "y", kEx + "z"}));
  EXPECT_THROW(eval("Nope"), UndeclaredClass);
  EXPECT_THROW(eval("nope value true"), UndeclaredProperty);
}
