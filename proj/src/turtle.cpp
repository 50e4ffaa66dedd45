#include "cssdh/turtle.hpp"

#include <algorithm>
#include <fstream>
#include <sstream>

#include "text_cursor.hpp"

namespace cssdh::turtle {

namespace {

using detail::TextCursor;
using rdf::Term;

bool iequals(std::string_view a, std::string_view b) {
  if (a.size() != b.size()) return false;
  for (std::size_t i = 0; i < a.size(); ++i) {
    if (std::tolower(static_cast<unsigned char>(a[i])) != std::tolower(static_cast<unsigned char>(b[i]))) return false;
  }
  return true;
}

class Parser {
 public:
  explicit Parser(std::string_view text) : in_(text) {}

  Document run() {
    while (true) {
      in_.skip_space();
      if (in_.at_end()) break;
      statement();
    }
    return std::move(doc_);
  }

 private:
  void statement() {
    if (in_.peek() == '@') {
      const auto at = in_.mark();
      in_.advance();
      const std::string word = in_.read_word();
      if (word == "prefix") {
        prefix_directive();
        in_.skip_space();
        expect('.', "expected '.' after @prefix directive");
        return;
      }
      if (word == "base") TextCursor::fail_at(at, "unsupported Turtle feature: @base");
      TextCursor::fail_at(at, "unknown directive '@" + word + "'");
    }
    if (TextCursor::is_name_start(in_.peek())) {
      const auto at = in_.mark();
      const std::string word = in_.read_word();
      if (in_.peek() != ':') {
        if (iequals(word, "prefix")) {
          prefix_directive();
          return;
        }
        if (iequals(word, "base")) TextCursor::fail_at(at, "unsupported Turtle feature: BASE");
        TextCursor::fail_at(at, "unexpected token '" + word + "', expected subject");
      }
      // A prefixed name: the label is already consumed.
      triples(prefixed_name_after_label(word, at));
      return;
    }
    triples(subject());
  }

  void prefix_directive() {
    in_.skip_space();
    const auto at = in_.mark();
    std::string label;
    if (TextCursor::is_name_start(in_.peek())) label = in_.read_word();
    if (in_.peek() != ':') TextCursor::fail_at(at, "expected prefix label followed by ':'");
    in_.advance();
    in_.skip_space();
    if (in_.peek() != '<') in_.fail("expected namespace IRI in angle brackets");
    doc_.prefixes.bind(label, in_.read_iriref());
  }

  void expect(char c, const std::string& message) {
    if (in_.peek() != c) in_.fail(message);
    in_.advance();
  }

  [[noreturn]] void unsupported_or_fail(const std::string& expected) {
    const char c = in_.peek();
    if (in_.at_end()) in_.fail("unexpected end of input, expected " + expected);
    if (c == '[') in_.fail("unsupported Turtle feature: blank node property list '[ ]'");
    if (c == '(') in_.fail("unsupported Turtle feature: collection '( )'");
    if ((c >= '0' && c <= '9') || c == '+' || c == '-' || c == '.') {
      if (c != '.' || (in_.peek(1) >= '0' && in_.peek(1) <= '9')) in_.fail("unsupported Turtle feature: numeric literal");
    }
    in_.fail(std::string("unexpected character '") + c + "', expected " + expected);
  }

  Term prefixed_name_after_label(const std::string& label, TextCursor::Mark at) {
    in_.advance();  // ':'
    const std::string local = in_.read_local_name();
    const auto ns = doc_.prefixes.lookup(label);
    if (!ns) {
      throw UndefinedPrefix(label, ParseDiagnostic{at.line, at.column, "undefined prefix '" + label + "'"});
    }
    return make_iri(*ns + local, at);
  }

  Term make_iri(std::string value, TextCursor::Mark at) {
    try {
      return Term::iri(std::move(value));
    } catch (const InvalidTerm& e) {
      TextCursor::fail_at(at, e.what());
    }
  }

  // IRI, prefixed name, or nullopt when the next token is neither.
  std::optional<Term> try_iri() {
    const auto at = in_.mark();
    if (in_.peek() == '<') return make_iri(in_.read_iriref(), at);
    if (in_.peek() == ':' || TextCursor::is_name_start(in_.peek())) {
      std::string label;
      if (in_.peek() != ':') label = in_.read_word();
      if (in_.peek() != ':') {
        if (label == "a" || label == "true" || label == "false") {
          pending_word_ = label;
          pending_at_ = at;
          return std::nullopt;
        }
        TextCursor::fail_at(at, "unexpected token '" + label + "'");
      }
      return prefixed_name_after_label(label, at);
    }
    return std::nullopt;
  }

  Term blank_node() {
    const auto at = in_.mark();
    in_.advance(2);  // "_:"
    const std::string label = in_.read_local_name();
    if (label.empty()) TextCursor::fail_at(at, "empty blank node label");
    try {
      return Term::blank(label);
    } catch (const InvalidTerm& e) {
      TextCursor::fail_at(at, e.what());
    }
  }

  Term subject() {
    if (in_.starts_with("_:")) return blank_node();
    const auto at = in_.mark();
    if (auto t = try_iri()) return *t;
    if (pending_word_) {
      pending_word_.reset();
      TextCursor::fail_at(at, "keyword cannot be used as a subject");
    }
    unsupported_or_fail("subject");
  }

  Term verb() {
    const auto at = in_.mark();
    if (auto t = try_iri()) return *t;
    if (pending_word_) {
      const std::string w = *pending_word_;
      pending_word_.reset();
      if (w == "a") return Term::iri(rdf::vocab::type);
      TextCursor::fail_at(at, "'" + w + "' cannot be used as a predicate");
    }
    unsupported_or_fail("predicate");
  }

  Term object() {
    if (in_.starts_with("_:")) return blank_node();
    const char c = in_.peek();
    if (c == '"' || c == '\'') return literal();
    const auto at = in_.mark();
    if (auto t = try_iri()) return *t;
    if (pending_word_) {
      const std::string w = *pending_word_;
      pending_word_.reset();
      if (w == "true" || w == "false") return Term::boolean(w == "true");
      TextCursor::fail_at(at, "'a' cannot be used as an object");
    }
    unsupported_or_fail("object");
  }

  Term literal() {
    const auto at = in_.mark();
    std::string lexical = in_.read_string();
    if (in_.peek() == '@') in_.fail("unsupported Turtle feature: language-tagged literal");
    if (in_.starts_with("^^")) {
      in_.advance(2);
      const auto dt_at = in_.mark();
      auto dt = try_iri();
      if (!dt) {
        pending_word_.reset();
        TextCursor::fail_at(dt_at, "expected datatype IRI after '^^'");
      }
      return Term::literal(std::move(lexical), dt->value());
    }
    (void)at;
    return Term::literal(std::move(lexical));
  }

  void triples(Term subj) {
    while (true) {
      in_.skip_space();
      const Term pred = verb();
      while (true) {
        in_.skip_space();
        Term obj = object();
        doc_.graph.insert(subj, pred, std::move(obj));
        in_.skip_space();
        if (in_.peek() == ',') {
          in_.advance();
          continue;
        }
        break;
      }
      if (in_.peek() == ';') {
        while (in_.peek() == ';') {
          in_.advance();
          in_.skip_space();
        }
        if (in_.peek() == '.') break;
        continue;
      }
      break;
    }
    if (in_.at_end()) in_.fail("unexpected end of input, expected '.'");
    expect('.', std::string("expected '.', ';' or ',' but found '") + in_.peek() + "'");
  }

  TextCursor in_;
  Document doc_;
  std::optional<std::string> pending_word_;
  TextCursor::Mark pending_at_{1, 1};
};

std::string render_term(const Term& t, const rdf::PrefixMap& prefixes) {
  switch (t.kind()) {
    case rdf::TermKind::Iri:
      if (auto curie = prefixes.abbreviate(t.value())) return *curie;
      return "<" + t.value() + ">";
    case rdf::TermKind::BlankNode:
      return "_:" + t.value();
    case rdf::TermKind::Literal: {
      if (t.datatype() == rdf::vocab::xsd_boolean && (t.value() == "true" || t.value() == "false")) return t.value();
      std::string out = "\"";
      for (char c : t.value()) {
        switch (c) {
          case '"': out += "\\\""; break;
          case '\\': out += "\\\\"; break;
          case '\n': out += "\\n"; break;
          case '\r': out += "\\r"; break;
          case '\t': out += "\\t"; break;
          case '\b': out += "\\b"; break;
          case '\f': out += "\\f"; break;
          default: out += c;
        }
      }
      out += '"';
      if (t.datatype() != rdf::vocab::xsd_string) out += "^^" + render_term(Term::iri(t.datatype()), prefixes);
      return out;
    }
  }
  return {};
}

}  // namespace

Document parse_turtle(std::string_view text) { return Parser(text).run(); }

std::string serialize_turtle(const rdf::Graph& graph, const rdf::PrefixMap& prefixes) {
  std::ostringstream out;
  for (const auto& [label, ns] : prefixes.entries()) out << "@prefix " << label << ": <" << ns << "> .\n";
  auto triples = graph.sorted();
  // rdf:type leads each subject block.
  std::stable_sort(triples.begin(), triples.end(), [](const rdf::Triple& a, const rdf::Triple& b) {
    if (a.subject != b.subject) return a.subject < b.subject;
    return a.predicate.value() == rdf::vocab::type && b.predicate.value() != rdf::vocab::type;
  });
  if (!prefixes.empty() && !triples.empty()) out << '\n';
  for (std::size_t i = 0; i < triples.size(); ++i) {
    const auto& t = triples[i];
    const bool same_subject = i > 0 && triples[i - 1].subject == t.subject;
    if (!same_subject) {
      if (i > 0) out << '\n';
      out << render_term(t.subject, prefixes) << ' ';
    } else {
      out << "    ";
    }
    const std::string pred = t.predicate.value() == rdf::vocab::type ? "a" : render_term(t.predicate, prefixes);
    out << pred << ' ' << render_term(t.object, prefixes);
    const bool last_of_subject = i + 1 == triples.size() || triples[i + 1].subject != t.subject;
    out << (last_of_subject ? " .\n" : " ;\n");
  }
  return out.str();
}

Document load_turtle_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error("cannot open '" + path + "'");
  std::ostringstream buf;
  buf << in.rdbuf();
  return parse_turtle(buf.str());
}

}  // namespace cssdh::turtle
