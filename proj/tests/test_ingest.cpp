#include <gtest/gtest.h>

#include "cssdh/ingest.hpp"
#include "cssdh/reasoner.hpp"
#include "cssdh/turtle.hpp"
#include "support.hpp"

using namespace cssdh;
using rdf::Term;

namespace {

const std::string kCoc = "http://purl.org/net/for-coc#";

const schema::Manifest& manifest() {
  static const schema::Manifest m = schema::load_manifest(test::path_of("data/cssdh.manifest"));
  return m;
}

std::size_t recorded_cells(const std::vector<ingest::PatientRecord>& records) {
  std::size_t n = 0;
  for (const auto& r : records) n += r.sdh.size();
  return n;
}

}  // namespace

TEST(ParseRecords, LaidOffAndCrowded) {
  const auto r = ingest::parse_records("id,forename,Lay-off-from-job,Crowding_at_home\np001,Ana,true,true\n");
  ASSERT_EQ(r.size(), 1u);
  EXPECT_EQ(r[0].id, "p001");
  EXPECT_EQ(r[0].forename, "Ana");
  EXPECT_FALSE(r[0].surname);
  EXPECT_EQ(r[0].sdh, (std::map<std::string, bool>{{"Lay-off-from-job", true}, {"Crowding_at_home", true}}));
}

TEST(ParseRecords, EmptyCellIsNotRecorded) {
  const auto r = ingest::parse_records("id,forename,Lay-off-from-job,Crowding_at_home\np002,Ben,true,\n");
  EXPECT_EQ(r[0].sdh, (std::map<std::string, bool>{{"Lay-off-from-job", true}}));
}

TEST(ParseRecords, CaseInsensitiveBooleansQuotingBomCrlf) {
  const auto r = ingest::parse_records(
      "\xEF\xBB\xBFid,forename,surname,Food-insecurity\r\n\r\np1,\"O'Neill, Jo\",\"Say \"\"hi\"\"\",FALSE\r\n"
      "p2,Bo,,True\r\n");
  ASSERT_EQ(r.size(), 2u);
  EXPECT_EQ(r[0].forename, "O'Neill, Jo");
  EXPECT_EQ(r[0].surname, "Say \"hi\"");
  EXPECT_EQ(r[0].sdh.at("Food-insecurity"), false);
  EXPECT_FALSE(r[1].surname);
  EXPECT_EQ(r[1].sdh.at("Food-insecurity"), true);
}

TEST(ParseRecords, NonBooleanCellIsRejected) {
  try {
    ingest::parse_records(test::read_text("tests/fixtures/non-boolean-sdh.csv"));
    FAIL();
  } catch (const ingest::NonBooleanSdhValue& e) {
    EXPECT_EQ(e.row(), 4u);
    EXPECT_EQ(e.column(), "Lay-off-from-job");
    EXPECT_EQ(e.value(), "maybe");
  }
  for (const std::string cell : {"yes", "1", "0", "t", " true"}) {
    EXPECT_THROW(ingest::parse_records("id,forename,Food-insecurity\np1,A," + cell + "\n"), ingest::NonBooleanSdhValue)
        << cell;
  }
}

TEST(ParseRecords, OtherErrors) {
  const std::set<std::string> known{"Food-insecurity"};
  EXPECT_THROW(ingest::parse_records("id,forename,Wealth\np1,A,true\n", known), ingest::UnknownSdhColumn);
  EXPECT_NO_THROW(ingest::parse_records("id,forename,Wealth\np1,A,true\n"));
  EXPECT_THROW(ingest::parse_records("id,forename\np1,A\np1,B\n"), ingest::DuplicateId);
  EXPECT_THROW(ingest::parse_records("id,forename\n,A\n"), ingest::InvalidRecordId);
  EXPECT_THROW(ingest::parse_records("id,forename\np 1,A\n"), ingest::InvalidRecordId);
  EXPECT_THROW(ingest::parse_records("name,forename\np1,A\n"), ingest::RecordFormatError);
  EXPECT_THROW(ingest::parse_records("id,forename\np1,A,extra\n"), ingest::RecordFormatError);
  EXPECT_THROW(ingest::parse_records("id,forename\np1,\"A\n"), ingest::RecordFormatError);
  EXPECT_THROW(ingest::parse_records(""), ingest::RecordFormatError);
}

TEST(ToGraph, EmptyRecordList) { EXPECT_TRUE(ingest::to_graph({}, manifest()).empty()); }

TEST(ToGraph, FiveTriplesForLaidOffAndCrowded) {
  const auto r = ingest::parse_records("id,forename,Lay-off-from-job,Crowding_at_home\np001,Ana,true,true\n");
  const auto g = ingest::to_graph(r, manifest());
  EXPECT_EQ(g.size(), 5u);
  const Term s = Term::iri(kCoc + "patient/p001");
  EXPECT_EQ(ingest::patient_iri(manifest(), "p001"), s.value());
  EXPECT_TRUE(g.contains({s, Term::iri(rdf::vocab::type), Term::iri("http://hl7.org/fhir/Patient")}));
  EXPECT_TRUE(g.contains({s, Term::iri(rdf::vocab::type), Term::iri(kCoc + "SubjectOfCare")}));
  EXPECT_TRUE(g.contains({s, Term::iri(kCoc + "forename"), Term::literal("Ana")}));
  EXPECT_TRUE(g.contains({s, Term::iri(kCoc + "Crowding_at_home"), Term::boolean(true)}));
}

TEST(ToGraph, UnknownSdhProperty) {
  ingest::PatientRecord r{"p1", "A", std::nullopt, {{"Wealth", true}}};
  EXPECT_THROW(ingest::to_graph({r}, manifest()), ingest::UnknownSdhProperty);
}

TEST(ToGraph, PrivacyAbsenceAndInjectivity) {
  const auto records = ingest::parse_records(test::read_text("data/patients-100.csv"),
                                             ingest::sdh_property_names(manifest()));
  ASSERT_EQ(records.size(), 100u);
  const auto g = ingest::to_graph(records, manifest());
  const auto sdh = ingest::sdh_property_names(manifest());
  std::size_t sdh_triples = 0;
  std::set<Term> subjects;
  for (const auto& t : g) {
    subjects.insert(t.subject);
    const auto& p = t.predicate.value();
    if (!p.starts_with(kCoc) || !sdh.contains(p.substr(kCoc.size()))) continue;
    ++sdh_triples;
    ASSERT_TRUE(t.object.is_literal());
    EXPECT_EQ(t.object.datatype(), rdf::vocab::xsd_boolean);
  }
  EXPECT_EQ(sdh_triples, recorded_cells(records));
  EXPECT_EQ(subjects.size(), records.size());
}

TEST(ToGraph, ShippedFixturesAreIngestOutput) {
  for (const std::string stem : {"data/patients-100", "data/patients-3", "tests/fixtures/cq1-patients"}) {
    const auto records = ingest::parse_records(test::read_text(stem + ".csv"), ingest::sdh_property_names(manifest()));
    EXPECT_EQ(ingest::to_graph(records, manifest()), turtle::load_turtle_file(test::path_of(stem + ".ttl")).graph)
        << stem;
  }
}

TEST(ToGraph, ConsistentWithSchema) {
  const auto s = schema::build_schema(manifest());
  rdf::Graph g = s.graph;
  g.insert_all(ingest::to_graph(ingest::parse_records(test::read_text("data/patients-100.csv")), manifest()));
  EXPECT_TRUE(reasoner::check_consistency(g, owl::extract_axioms(g)).consistent);
}
