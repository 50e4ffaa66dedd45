#include <gtest/gtest.h>

#include <algorithm>

#include "cssdh/reasoner.hpp"
#include "cssdh/sparql.hpp"
#include "cssdh/turtle.hpp"
#include "oracles.hpp"

using namespace cssdh;
using rdf::Term;

namespace {

rdf::Graph random_dag(std::mt19937& rng, std::size_t n, std::vector<std::pair<int, int>>& edges) {
  rdf::Graph g;
  const Term type = Term::iri(rdf::vocab::type);
  auto name = [](int i) { return Term::iri("http://example.org/dag#K" + std::to_string(i)); };
  for (std::size_t i = 0; i < n; ++i) g.insert(name(static_cast<int>(i)), type, Term::iri(rdf::vocab::owl_class));
  std::bernoulli_distribution keep(2.5 / static_cast<double>(n));
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = i + 1; j < n; ++j) {
      if (!keep(rng)) continue;
      edges.emplace_back(static_cast<int>(i), static_cast<int>(j));
      g.insert(name(static_cast<int>(i)), Term::iri(rdf::vocab::sub_class_of), name(static_cast<int>(j)));
    }
  }
  return g;
}

std::vector<sparql::Row> sorted(std::vector<sparql::Row> rows) {
  std::sort(rows.begin(), rows.end());
  return rows;
}

}  // namespace

TEST(Property, SubsumptionMatchesTransitiveClosure) {
  std::mt19937 rng(11);
  for (int trial = 0; trial < 20; ++trial) {
    const std::size_t n = 2 + rng() % 30;
    std::vector<std::pair<int, int>> edges;
    const auto onto = owl::extract_axioms(random_dag(rng, n, edges));
    const auto reach = oracle::transitive_closure(n, edges);
    for (std::size_t i = 0; i < n; ++i) {
      for (std::size_t j = 0; j < n; ++j) {
        const auto a = "http://example.org/dag#K" + std::to_string(i);
        const auto b = "http://example.org/dag#K" + std::to_string(j);
        ASSERT_EQ(reasoner::subsumes(onto, a, b), static_cast<bool>(reach[i][j])) << trial << " " << i << " " << j;
      }
    }
  }
}

TEST(Property, MaterializeAgreesWithSerialAndNaiveFixpoint) {
  std::mt19937 rng(23);
  const auto v = oracle::small_vocabulary(6, 4, 8);
  for (int trial = 0; trial < 30; ++trial) {
    const auto g = oracle::random_ontology_graph(rng, v, 10 + rng() % 80);
    const auto onto = owl::extract_axioms(g);
    const auto m = reasoner::materialize(g, onto);
    ASSERT_EQ(m, reasoner::materialize_serial(g, onto)) << trial;
    ASSERT_EQ(m, oracle::fixpoint(g, onto)) << trial;
  }
}

TEST(Property, MaterializeIsIdempotentAndMonotone) {
  std::mt19937 rng(29);
  const auto v = oracle::small_vocabulary(6, 4, 8);
  for (int trial = 0; trial < 30; ++trial) {
    const auto g = oracle::random_ontology_graph(rng, v, 10 + rng() % 80);
    const auto onto = owl::extract_axioms(g);
    const auto m = reasoner::materialize(g, onto);
    EXPECT_TRUE(g.subset_of(m));
    EXPECT_EQ(reasoner::materialize(m, owl::extract_axioms(m)), m) << trial;

    rdf::Graph bigger = g;
    bigger.insert_all(oracle::random_data(rng, v, 1 + rng() % 40));
    EXPECT_TRUE(m.subset_of(reasoner::materialize(bigger, owl::extract_axioms(bigger)))) << trial;
  }
}

TEST(Property, SparqlMatchesBruteForce) {
  std::mt19937 rng(31);
  const auto v = oracle::small_vocabulary(3, 3, 6);
  for (int trial = 0; trial < 60; ++trial) {
    const auto g = oracle::random_data(rng, v, rng() % 120);
    auto q = oracle::random_query(rng, g);
    const auto text = q.to_sparql();
    const auto table = sparql::execute(sparql::parse_query(text), g);
    ASSERT_EQ(table.rows, oracle::brute_force(q, g)) << text;
  }
}

TEST(Property, OptionalNeverRemovesRows) {
  std::mt19937 rng(37);
  const auto v = oracle::small_vocabulary(3, 3, 6);
  int checked = 0;
  for (int trial = 0; trial < 200 && checked < 40; ++trial) {
    const auto g = oracle::random_data(rng, v, rng() % 120);
    auto q = oracle::random_query(rng, g);
    if (q.optional.empty()) continue;
    ++checked;
    q.filter.reset();
    q.distinct = false;
    std::set<int> required_vars;
    for (const auto& p : q.required)
      for (const auto* s : {&p.s, &p.p, &p.o})
        if (s->var >= 0) required_vars.insert(s->var);
    if (required_vars.empty()) continue;
    q.projection.assign(required_vars.begin(), required_vars.end());
    auto without = q;
    without.optional.clear();
    const auto with_rows = sparql::execute(sparql::parse_query(q.to_sparql()), g).rows;
    const auto without_rows = sparql::execute(sparql::parse_query(without.to_sparql()), g).rows;
    EXPECT_GE(with_rows.size(), without_rows.size()) << q.to_sparql();
    EXPECT_EQ(std::set<sparql::Row>(with_rows.begin(), with_rows.end()),
              std::set<sparql::Row>(without_rows.begin(), without_rows.end()))
        << q.to_sparql();
  }
  EXPECT_GT(checked, 0);
}

TEST(Property, DistinctHasNoDuplicatesAndKeepsSupport) {
  std::mt19937 rng(41);
  const auto v = oracle::small_vocabulary(3, 3, 6);
  for (int trial = 0; trial < 40; ++trial) {
    const auto g = oracle::random_data(rng, v, rng() % 120);
    auto q = oracle::random_query(rng, g);
    q.distinct = false;
    const auto all = sparql::execute(sparql::parse_query(q.to_sparql()), g).rows;
    q.distinct = true;
    const auto distinct = sparql::execute(sparql::parse_query(q.to_sparql()), g).rows;
    EXPECT_EQ(std::adjacent_find(distinct.begin(), distinct.end()), distinct.end());
    EXPECT_EQ(std::set<sparql::Row>(all.begin(), all.end()),
              std::set<sparql::Row>(distinct.begin(), distinct.end()));
    EXPECT_EQ(sorted(distinct), distinct);
  }
}

TEST(Property, TurtleRoundTripOnRandomGraphs) {
  std::mt19937 rng(43);
  for (int trial = 0; trial < 30; ++trial) {
    const auto g = oracle::random_plain_graph(rng, rng() % 200);
    const auto text = turtle::serialize_turtle(g, rdf::default_prefixes());
    ASSERT_EQ(turtle::parse_turtle(text).graph, g) << text;
    EXPECT_EQ(turtle::serialize_turtle(turtle::parse_turtle(text).graph, rdf::default_prefixes()), text);
  }
}
