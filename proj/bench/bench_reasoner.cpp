#include <benchmark/benchmark.h>

#include <fstream>
#include <iterator>
#include <string>

#include "cssdh/reasoner.hpp"
#include "cssdh/sparql.hpp"
#include "cssdh/turtle.hpp"

using namespace cssdh;

namespace {

std::string path_of(const std::string& rel) { return std::string(CSSDH_SOURCE_DIR) + "/" + rel; }

struct Workload {
  rdf::Graph graph;
  owl::Ontology ontology;

  Workload() {
    graph = turtle::load_turtle_file(path_of("data/cssdh.ttl")).graph;
    graph.insert_all(turtle::load_turtle_file(path_of("data/patients-100.ttl")).graph);
    ontology = owl::extract_axioms(graph);
  }
};

const Workload& workload() {
  static const Workload w;
  return w;
}

void BM_MaterializeParallel(benchmark::State& state) {
  const auto& w = workload();
  for (auto _ : state) benchmark::DoNotOptimize(reasoner::materialize(w.graph, w.ontology));
}

void BM_MaterializeSerial(benchmark::State& state) {
  const auto& w = workload();
  for (auto _ : state) benchmark::DoNotOptimize(reasoner::materialize_serial(w.graph, w.ontology));
}

void BM_ExtractAxioms(benchmark::State& state) {
  const auto& w = workload();
  for (auto _ : state) benchmark::DoNotOptimize(owl::extract_axioms(w.graph));
}

void BM_PatientQuery(benchmark::State& state) {
  const auto& w = workload();
  const auto closed = reasoner::materialize(w.graph, w.ontology);
  std::ifstream in(path_of("queries/patient-query.rq"));
  const std::string text((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
  const auto q = sparql::parse_query(text);
  for (auto _ : state) benchmark::DoNotOptimize(sparql::execute(q, closed));
}

}  // namespace

BENCHMARK(BM_MaterializeParallel)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_MaterializeSerial)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_ExtractAxioms)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_PatientQuery)->Unit(benchmark::kMicrosecond);

BENCHMARK_MAIN();
