#include <gtest/gtest.h>

#include <filesystem>

#include "cssdh/turtle.hpp"
#include "support.hpp"

using namespace cssdh;
using rdf::Term;

namespace {

ParseDiagnostic diagnostic_of(const std::string& text) {
  try {
    turtle::parse_turtle(text);
  } catch (const SyntaxError& e) {
    return e.diagnostic();
  }
  ADD_FAILURE() << "no SyntaxError for: " << text;
  return {};
}

}  // namespace

TEST(TurtleParse, PrefixesListsAndKeywords) {
  const auto doc = turtle::parse_turtle(R"(@prefix ex: <http://example.org/> .
PREFIX xsd: <http://www.w3.org/2001/XMLSchema#>
# comment
ex:a a ex:C , ex:D ;
     ex:flag true ;
     ex:name "Ana" ;
     ex:n "5"^^xsd:integer .
<http://example.org/b> ex:knows ex:a ; .
)");
  const auto& g = doc.graph;
  EXPECT_EQ(g.size(), 6u);
  const auto a = Term::iri("http://example.org/a");
  EXPECT_TRUE(g.contains({a, Term::iri(rdf::vocab::type), Term::iri("http://example.org/D")}));
  EXPECT_TRUE(g.contains({a, Term::iri("http://example.org/flag"), Term::boolean(true)}));
  EXPECT_TRUE(g.contains({a, Term::iri("http://example.org/n"), Term::literal("5", "http://www.w3.org/2001/XMLSchema#integer")}));
  EXPECT_EQ(doc.prefixes.lookup("xsd"), "http://www.w3.org/2001/XMLSchema#");
}

TEST(TurtleParse, StringsAndEscapes) {
  const auto doc = turtle::parse_turtle(R"(<http://x/s> <http://x/p> "a\"b\\c\né" , 'single' , """long "quoted"
text""" , '''x''' .)");
  const auto p = Term::iri("http://x/p");
  const auto s = Term::iri("http://x/s");
  EXPECT_TRUE(doc.graph.contains({s, p, Term::literal("a\"b\\c\n\xC3\xA9")}));
  EXPECT_TRUE(doc.graph.contains({s, p, Term::literal("single")}));
  EXPECT_TRUE(doc.graph.contains({s, p, Term::literal("long \"quoted\"\ntext")}));
  EXPECT_TRUE(doc.graph.contains({s, p, Term::literal("x")}));
}

TEST(TurtleParse, LocalNamesWithHyphenAndUnderscore) {
  const auto doc = turtle::parse_turtle(
      "@prefix coc: <http://purl.org/net/for-coc#> .\ncoc:p1 coc:Lay-off-from-job true ; coc:Crowding_at_home false .\n");
  EXPECT_TRUE(doc.graph.contains({Term::iri("http://purl.org/net/for-coc#p1"),
                                  Term::iri("http://purl.org/net/for-coc#Crowding_at_home"), Term::boolean(false)}));
}

TEST(TurtleParse, BlankNodeLabels) {
  const auto doc = turtle::parse_turtle("_:r <http://x/p> <http://x/o> .\n");
  EXPECT_TRUE(doc.graph.triples().front().subject.is_blank());
}

TEST(TurtleParse, DiagnosticsCarryLineAndColumn) {
  auto d = diagnostic_of("<http://x/s> <http://x/p> \"unterminated .\n");
  EXPECT_EQ(d.line, 1u);
  d = diagnostic_of("<http://x/s> <http://x/p> <http://x/o>\n<http://x/t> <http://x/p> <http://x/o> .\n");
  EXPECT_EQ(d.line, 2u);
  EXPECT_EQ(d.column, 1u);
  d = diagnostic_of("<http://x/s> <http://x/p> ");
  EXPECT_NE(d.message.find("end of input"), std::string::npos);
}

TEST(TurtleParse, UndefinedPrefixHasPosition) {
  try {
    turtle::parse_turtle("<http://x/s> <http://x/p>\n  zz:o .\n");
    FAIL();
  } catch (const UndefinedPrefix& e) {
    EXPECT_EQ(e.prefix(), "zz");
    ASSERT_TRUE(e.diagnostic().has_value());
    EXPECT_EQ(e.diagnostic()->line, 2u);
    EXPECT_EQ(e.diagnostic()->column, 3u);
  }
}

TEST(TurtleParse, UnsupportedFeaturesAreNamed) {
  for (const std::string text : {
           "<http://x/s> <http://x/p> [ <http://x/q> <http://x/o> ] .",
           "<http://x/s> <http://x/p> ( <http://x/o> ) .",
           "<http://x/s> <http://x/p> 42 .",
           "<http://x/s> <http://x/p> \"a\"@en .",
           "@base <http://x/> .",
           "<s> <http://x/p> <http://x/o> .",
       }) {
    const auto d = diagnostic_of(text);
    EXPECT_NE(d.message.find("unsupported Turtle feature"), std::string::npos) << text << " -> " << d.message;
  }
}

TEST(TurtleParse, InvalidUtf8IsRejected) {
  const auto d = diagnostic_of("<http://x/s> <http://x/p> \"\xFF\" .");
  EXPECT_NE(d.message.find("UTF-8"), std::string::npos);
  EXPECT_EQ(d.column, 28u);
}

TEST(TurtleSerialize, ExactLayout) {
  rdf::Graph g;
  const auto ex = std::string("http://example.org/");
  g.insert(Term::iri(ex + "b"), Term::iri(ex + "name"), Term::literal("B"));
  g.insert(Term::iri(ex + "a"), Term::iri(ex + "flag"), Term::boolean(true));
  g.insert(Term::iri(ex + "a"), Term::iri(rdf::vocab::type), Term::iri(ex + "C"));
  g.insert(Term::iri(ex + "a"), Term::iri(ex + "n"), Term::literal("5", "http://www.w3.org/2001/XMLSchema#integer"));
  g.insert(Term::iri(ex + "patient/p1"), Term::iri(ex + "name"), Term::literal("P"));
  const rdf::PrefixMap p{{"ex", ex}, {"xsd", "http://www.w3.org/2001/XMLSchema#"}};
  EXPECT_EQ(turtle::serialize_turtle(g, p),
            "@prefix ex: <http://example.org/> .\n"
            "@prefix xsd: <http://www.w3.org/2001/XMLSchema#> .\n"
            "\n"
            "ex:a a ex:C ;\n"
            "    ex:flag true ;\n"
            "    ex:n \"5\"^^xsd:integer .\n"
            "\n"
            "ex:b ex:name \"B\" .\n"
            "\n"
            "<http://example.org/patient/p1> ex:name \"P\" .\n");
}

TEST(TurtleRoundTrip, ShippedTurtleFiles) {
  std::size_t files = 0;
  for (const char* dir : {"data", "tests/fixtures", "tests/fixtures/pitfalls"}) {
    for (const auto& entry : std::filesystem::directory_iterator(test::source_dir() / dir)) {
      if (entry.path().extension() != ".ttl") continue;
      ++files;
      const auto doc = turtle::load_turtle_file(entry.path().string());
      const auto text = turtle::serialize_turtle(doc.graph, doc.prefixes);
      const auto again = turtle::parse_turtle(text);
      EXPECT_EQ(again.graph, doc.graph) << entry.path();
      EXPECT_EQ(turtle::serialize_turtle(again.graph, again.prefixes), text) << entry.path();
    }
  }
  EXPECT_GE(files, 12u);
}
