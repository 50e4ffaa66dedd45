#include "cssdh/sparql.hpp"

#include <algorithm>
#include <map>
#include <set>
#include <sstream>
#include <unordered_map>

#include "text_cursor.hpp"

namespace cssdh::sparql {

using detail::TextCursor;
using rdf::Term;

namespace {

std::string upper(std::string s) {
  std::transform(s.begin(), s.end(), s.begin(), [](unsigned char c) { return static_cast<char>(std::toupper(c)); });
  return s;
}

void collect_variables(const TriplePattern& p, std::vector<std::string>& out) {
  for (const Slot* s : {&p.subject, &p.predicate, &p.object}) {
    if (const auto* v = std::get_if<Variable>(s)) {
      if (std::find(out.begin(), out.end(), v->name) == out.end()) out.push_back(v->name);
    }
  }
}

bool is_var_start(char c) { return (c >= 'A' && c <= 'Z') || (c >= 'a' && c <= 'z') || c == '_' ||
                                   static_cast<unsigned char>(c) >= 0x80; }
bool is_var_char(char c) { return is_var_start(c) || (c >= '0' && c <= '9'); }

class QueryParser {
 public:
  QueryParser(std::string_view text, const rdf::PrefixMap& initial) : in_(text) { q_.prefixes = initial; }

  Query run() {
    prologue();
    const auto form_at = in_.mark();
    const std::string form = upper(word());
    if (form == "CONSTRUCT" || form == "ASK" || form == "DESCRIBE") {
      TextCursor::fail_at(form_at, "unsupported SPARQL feature: " + form + " queries");
    }
    if (form != "SELECT") TextCursor::fail_at(form_at, "expected SELECT");
    select_clause();
    in_.skip_space();
    if (is_word_ahead()) {
      const auto at = in_.mark();
      const std::string w = upper(word());
      if (w == "FROM") TextCursor::fail_at(at, "unsupported SPARQL feature: FROM");
      if (w != "WHERE") TextCursor::fail_at(at, "expected WHERE or '{'");
    }
    in_.skip_space();
    if (in_.peek() != '{') in_.fail("expected '{'");
    group();
    in_.skip_space();
    if (!in_.at_end()) {
      const auto at = in_.mark();
      const std::string w = upper(word());
      if (w == "ORDER" || w == "LIMIT" || w == "OFFSET" || w == "GROUP" || w == "HAVING" || w == "VALUES") {
        TextCursor::fail_at(at, "unsupported SPARQL feature: " + (w == "ORDER" || w == "GROUP" ? w + " BY" : w));
      }
      TextCursor::fail_at(at, "unexpected input after query");
    }
    check_projection();
    return std::move(q_);
  }

 private:
  bool is_word_ahead() const { return TextCursor::is_name_start(in_.peek()); }

  std::string word() {
    std::string out;
    while (TextCursor::is_name_char(in_.peek())) out += in_.advance();
    return out;
  }

  void prologue() {
    while (true) {
      in_.skip_space();
      if (!is_word_ahead()) return;
      // Lookahead for PREFIX/BASE without consuming other keywords.
      std::string ahead;
      for (std::size_t i = 0; TextCursor::is_name_char(in_.peek(i)); ++i) ahead += in_.peek(i);
      const std::string kw = upper(ahead);
      if (kw == "BASE") in_.fail("unsupported SPARQL feature: BASE");
      if (kw != "PREFIX") return;
      in_.advance(ahead.size());
      in_.skip_space();
      const auto at = in_.mark();
      std::string label;
      if (TextCursor::is_name_start(in_.peek())) label = in_.read_word();
      if (in_.peek() != ':') TextCursor::fail_at(at, "expected prefix name ending in ':'");
      in_.advance();
      in_.skip_space();
      if (in_.peek() != '<') in_.fail("expected namespace IRI in angle brackets");
      q_.prefixes.bind(label, in_.read_iriref());
    }
  }

  void select_clause() {
    in_.skip_space();
    if (is_word_ahead()) {
      std::string ahead;
      for (std::size_t i = 0; TextCursor::is_name_char(in_.peek(i)); ++i) ahead += in_.peek(i);
      const std::string kw = upper(ahead);
      if (kw == "DISTINCT") {
        in_.advance(ahead.size());
        q_.distinct = true;
      } else if (kw == "REDUCED") {
        in_.fail("unsupported SPARQL feature: REDUCED");
      }
    }
    in_.skip_space();
    if (in_.peek() == '*') {
      in_.advance();
      q_.select_all = true;
      return;
    }
    while (true) {
      in_.skip_space();
      if (in_.peek() == '(') in_.fail("unsupported SPARQL feature: projection expression");
      if (in_.peek() != '?' && in_.peek() != '$') break;
      const auto at = in_.mark();
      const std::string name = variable();
      q_.projection.push_back(name);
      projection_at_.push_back(at);
    }
    if (q_.projection.empty()) in_.fail("expected '*' or at least one variable after SELECT");
  }

  std::string variable() {
    in_.advance();  // '?' or '$'
    if (!is_var_start(in_.peek())) in_.fail("expected variable name");
    std::string name;
    while (is_var_char(in_.peek())) name += in_.advance();
    return name;
  }

  void group() {
    in_.advance();  // '{'
    while (true) {
      in_.skip_space();
      if (in_.at_end()) in_.fail("unexpected end of input, unclosed '{'");
      const char c = in_.peek();
      if (c == '}') {
        in_.advance();
        return;
      }
      if (c == '.') {
        in_.advance();
        continue;
      }
      if (c == '{') in_.fail("unsupported SPARQL feature: nested group");
      if (is_word_ahead() && keyword_ahead()) continue;
      triples_block(q_.required);
    }
  }

  // Handles OPTIONAL / FILTER / unsupported keywords; returns false for other words.
  bool keyword_ahead() {
    std::string ahead;
    for (std::size_t i = 0; TextCursor::is_name_char(in_.peek(i)); ++i) ahead += in_.peek(i);
    if (in_.peek(ahead.size()) == ':') return false;  // prefixed name
    const std::string kw = upper(ahead);
    static const std::set<std::string> kUnsupported = {"UNION", "MINUS", "GRAPH", "BIND", "VALUES", "SERVICE"};
    if (kUnsupported.contains(kw)) in_.fail("unsupported SPARQL feature: " + kw);
    if (kw == "OPTIONAL") {
      in_.advance(ahead.size());
      in_.skip_space();
      if (in_.peek() != '{') in_.fail("expected '{' after OPTIONAL");
      optional_group();
      return true;
    }
    if (kw == "FILTER") {
      in_.advance(ahead.size());
      in_.skip_space();
      if (in_.peek() != '(') {
        const std::string fn = word();
        in_.fail(fn.empty() ? "expected '(' after FILTER" : "unsupported SPARQL feature: function " + upper(fn));
      }
      in_.advance();
      q_.filters.push_back(filter_or());
      in_.skip_space();
      if (in_.peek() != ')') in_.fail("expected ')' to close FILTER");
      in_.advance();
      return true;
    }
    return false;
  }

  void optional_group() {
    in_.advance();  // '{'
    std::vector<TriplePattern> block;
    while (true) {
      in_.skip_space();
      if (in_.at_end()) in_.fail("unexpected end of input, unclosed OPTIONAL block");
      const char c = in_.peek();
      if (c == '}') {
        in_.advance();
        break;
      }
      if (c == '.') {
        in_.advance();
        continue;
      }
      if (c == '{') in_.fail("unsupported SPARQL feature: nested group");
      if (is_word_ahead()) {
        std::string ahead;
        for (std::size_t i = 0; TextCursor::is_name_char(in_.peek(i)); ++i) ahead += in_.peek(i);
        const std::string kw = upper(ahead);
        if (in_.peek(ahead.size()) != ':' && (kw == "OPTIONAL" || kw == "FILTER")) {
          in_.fail("unsupported SPARQL feature: " + kw + " inside OPTIONAL");
        }
      }
      triples_block(block);
    }
    if (block.empty()) in_.fail("empty OPTIONAL block");
    q_.optionals.push_back(std::move(block));
  }

  void triples_block(std::vector<TriplePattern>& out) {
    const Slot subj = term_or_var("subject");
    while (true) {
      in_.skip_space();
      const Slot pred = verb();
      while (true) {
        in_.skip_space();
        out.push_back({subj, pred, term_or_var("object")});
        in_.skip_space();
        if (in_.peek() != ',') break;
        in_.advance();
      }
      if (in_.peek() != ';') break;
      while (in_.peek() == ';') {
        in_.advance();
        in_.skip_space();
      }
      if (in_.peek() == '.' || in_.peek() == '}') break;
    }
    in_.skip_space();
    const char c = in_.peek();
    if (c == '.') {
      in_.advance();
      return;
    }
    if (c == '}' || is_word_ahead()) return;
    if (in_.at_end()) in_.fail("unexpected end of input, unclosed '{'");
    in_.fail(std::string("expected '.', ';', ',' or '}' but found '") + c + "'");
  }

  Slot verb() {
    const auto at = in_.mark();
    const char c = in_.peek();
    if (c == '^' || c == '!' || c == '(') TextCursor::fail_at(at, "unsupported SPARQL feature: property path");
    Slot s;
    if (c == 'a' && !is_var_char(in_.peek(1)) && in_.peek(1) != ':') {
      in_.advance();
      s = Term::iri(rdf::vocab::type);
    } else {
      s = term_or_var("predicate");
      if (const auto* t = std::get_if<Term>(&s); t && !t->is_iri()) TextCursor::fail_at(at, "predicate must be an IRI or variable");
    }
    const char after = in_.peek();
    if (after == '/' || after == '|' || after == '*' || after == '+') {
      in_.fail("unsupported SPARQL feature: property path");
    }
    return s;
  }

  [[noreturn]] void expected(const std::string& what) {
    if (in_.at_end()) in_.fail("unexpected end of input, expected " + what);
    const char c = in_.peek();
    if (c == '}') in_.fail("expected " + what + " before '}'");
    if ((c >= '0' && c <= '9') || c == '-' || c == '+') in_.fail("unsupported SPARQL feature: numeric literal");
    if (c == '[' || c == '(') in_.fail("unsupported SPARQL feature: blank node syntax");
    in_.fail(std::string("unexpected '") + c + "', expected " + what);
  }

  Term iri_at(std::string value, TextCursor::Mark at) {
    try {
      return Term::iri(std::move(value));
    } catch (const InvalidTerm& e) {
      TextCursor::fail_at(at, e.what());
    }
  }

  // IRI, prefixed name, literal, boolean; nullopt if none starts here.
  std::optional<Term> constant() {
    const auto at = in_.mark();
    const char c = in_.peek();
    if (c == '<') return iri_at(in_.read_iriref(), at);
    if (c == '"' || c == '\'') {
      std::string lex = in_.read_string();
      if (in_.peek() == '@') in_.fail("unsupported SPARQL feature: language-tagged literal");
      if (in_.starts_with("^^")) {
        in_.advance(2);
        const auto dt_at = in_.mark();
        auto dt = constant();
        if (!dt || !dt->is_iri()) TextCursor::fail_at(dt_at, "expected datatype IRI after '^^'");
        return Term::literal(std::move(lex), dt->value());
      }
      return Term::literal(std::move(lex));
    }
    if (c == '_' && in_.peek(1) == ':') in_.fail("unsupported SPARQL feature: blank nodes in patterns");
    if (c == ':' || TextCursor::is_name_start(c)) {
      std::string label;
      if (c != ':') label = in_.read_word();
      if (in_.peek() != ':') {
        if (label == "true" || label == "false") return Term::boolean(label == "true");
        TextCursor::fail_at(at, "unexpected token '" + label + "'");
      }
      in_.advance();
      const std::string local = in_.read_local_name();
      const auto ns = q_.prefixes.lookup(label);
      if (!ns) throw UndefinedPrefix(label, ParseDiagnostic{at.line, at.column, "undefined prefix '" + label + "'"});
      return iri_at(*ns + local, at);
    }
    return std::nullopt;
  }

  Slot term_or_var(const std::string& what) {
    in_.skip_space();
    if (in_.peek() == '?' || in_.peek() == '$') return Variable{variable()};
    if (auto t = constant()) return *t;
    expected(what);
  }

  FilterExpr filter_or() {
    FilterExpr lhs = filter_and();
    while (true) {
      in_.skip_space();
      if (!in_.starts_with("||")) return lhs;
      in_.advance(2);
      FilterExpr e{FilterExpr::Op::Or, {}, {}, {}};
      e.args.push_back(std::move(lhs));
      e.args.push_back(filter_and());
      lhs = std::move(e);
    }
  }

  FilterExpr filter_and() {
    FilterExpr lhs = filter_relational();
    while (true) {
      in_.skip_space();
      if (!in_.starts_with("&&")) return lhs;
      in_.advance(2);
      FilterExpr e{FilterExpr::Op::And, {}, {}, {}};
      e.args.push_back(std::move(lhs));
      e.args.push_back(filter_relational());
      lhs = std::move(e);
    }
  }

  FilterExpr filter_relational() {
    FilterExpr lhs = filter_unary();
    in_.skip_space();
    FilterExpr::Op op;
    if (in_.starts_with("!=")) {
      in_.advance(2);
      op = FilterExpr::Op::NotEqual;
    } else if (in_.peek() == '=') {
      in_.advance();
      op = FilterExpr::Op::Equal;
    } else {
      if (in_.peek() == '<' || in_.peek() == '>') in_.fail("unsupported SPARQL feature: ordering comparison");
      return lhs;
    }
    FilterExpr e{op, {}, {}, {}};
    e.args.push_back(std::move(lhs));
    e.args.push_back(filter_unary());
    return e;
  }

  FilterExpr filter_unary() {
    in_.skip_space();
    if (in_.peek() == '!' && in_.peek(1) != '=') {
      in_.advance();
      FilterExpr e{FilterExpr::Op::Not, {}, {}, {}};
      e.args.push_back(filter_unary());
      return e;
    }
    return filter_primary();
  }

  FilterExpr filter_primary() {
    in_.skip_space();
    const char c = in_.peek();
    if (c == '(') {
      in_.advance();
      FilterExpr e = filter_or();
      in_.skip_space();
      if (in_.peek() != ')') in_.fail("expected ')'");
      in_.advance();
      return e;
    }
    if (c == '?' || c == '$') return FilterExpr{FilterExpr::Op::Variable, variable(), {}, {}};
    if (c == '<' && (in_.peek(1) == ' ' || in_.peek(1) == '=')) in_.fail("unsupported SPARQL feature: ordering comparison");
    if (TextCursor::is_name_start(c)) {
      std::string ahead;
      std::size_t i = 0;
      for (; TextCursor::is_name_char(in_.peek(i)); ++i) ahead += in_.peek(i);
      std::size_t j = i;
      while (in_.peek(j) == ' ') ++j;
      if (in_.peek(i) != ':' && in_.peek(j) == '(') in_.fail("unsupported SPARQL feature: function " + upper(ahead));
    }
    if (auto t = constant()) return FilterExpr{FilterExpr::Op::Constant, {}, *t, {}};
    expected("filter operand");
  }

  void check_projection() {
    const auto vars = q_.pattern_variables();
    for (std::size_t i = 0; i < q_.projection.size(); ++i) {
      if (std::find(vars.begin(), vars.end(), q_.projection[i]) == vars.end()) {
        TextCursor::fail_at(projection_at_[i], "projected variable ?" + q_.projection[i] + " does not appear in any pattern");
      }
    }
  }

  TextCursor in_;
  Query q_;
  std::vector<TextCursor::Mark> projection_at_;
};

// ---- evaluation ----

using Bindings = std::vector<Cell>;

class Evaluator {
 public:
  Evaluator(const Query& q, const rdf::Graph& g) : q_(q), g_(g) {
    for (const auto& v : q.pattern_variables()) index_.emplace(v, index_.size());
  }

  std::size_t width() const { return index_.size(); }

  std::optional<std::size_t> index_of(const std::string& name) const {
    auto it = index_.find(name);
    if (it == index_.end()) return std::nullopt;
    return it->second;
  }

  // All extensions of `seed` satisfying every pattern.
  std::vector<Bindings> join(const std::vector<TriplePattern>& patterns, const Bindings& seed) const {
    std::vector<Bindings> rows{seed};
    std::vector<bool> done(patterns.size(), false);
    for (std::size_t step = 0; step < patterns.size() && !rows.empty(); ++step) {
      const std::size_t pick = most_bound(patterns, done, rows.front());
      done[pick] = true;
      std::vector<Bindings> next;
      for (const auto& row : rows) extend(patterns[pick], row, next);
      rows.swap(next);
    }
    return rows;
  }

  bool accept(const Bindings& row) const {
    for (const auto& f : q_.filters) {
      const auto v = eval(f, row);
      const auto b = v ? truth(*v) : std::nullopt;
      if (!b || !*b) return false;
    }
    return true;
  }

 private:
  std::optional<Term> resolve(const Slot& s, const Bindings& row) const {
    if (const auto* t = std::get_if<Term>(&s)) return *t;
    return row[index_.at(std::get<Variable>(s).name)];
  }

  // Picks the pending pattern with the most constant or already bound slots.
  std::size_t most_bound(const std::vector<TriplePattern>& patterns, const std::vector<bool>& done,
                         const Bindings& sample) const {
    std::size_t best = patterns.size();
    int best_score = -1;
    for (std::size_t i = 0; i < patterns.size(); ++i) {
      if (done[i]) continue;
      int score = 0;
      for (const Slot* s : {&patterns[i].subject, &patterns[i].predicate, &patterns[i].object}) {
        if (resolve(*s, sample)) ++score;
      }
      if (score > best_score) {
        best_score = score;
        best = i;
      }
    }
    return best;
  }

  void extend(const TriplePattern& p, const Bindings& row, std::vector<Bindings>& out) const {
    rdf::TriplePattern probe{resolve(p.subject, row), resolve(p.predicate, row), resolve(p.object, row)};
    if (probe.subject && probe.subject->is_literal()) return;
    if (probe.predicate && !probe.predicate->is_iri()) return;
    g_.for_each_match(probe, [&](const rdf::Triple& t) {
      Bindings next = row;
      if (bind(p.subject, t.subject, next) && bind(p.predicate, t.predicate, next) && bind(p.object, t.object, next)) {
        out.push_back(std::move(next));
      }
    });
  }

  bool bind(const Slot& s, const Term& value, Bindings& row) const {
    const auto* v = std::get_if<Variable>(&s);
    if (v == nullptr) return true;
    auto& cell = row[index_.at(v->name)];
    if (cell) return *cell == value;
    cell = value;
    return true;
  }

  // Effective boolean value; nullopt is a type error.
  static std::optional<bool> truth(const Term& t) {
    if (!t.is_literal()) return std::nullopt;
    if (t.datatype() == rdf::vocab::xsd_boolean) {
      if (t.value() == "true" || t.value() == "1") return true;
      if (t.value() == "false" || t.value() == "0") return false;
      return std::nullopt;
    }
    if (t.datatype() == rdf::vocab::xsd_string) return !t.value().empty();
    return std::nullopt;
  }

  std::optional<Term> eval(const FilterExpr& e, const Bindings& row) const {
    using Op = FilterExpr::Op;
    switch (e.op) {
      case Op::Variable: {
        const auto i = index_of(e.variable);
        if (!i) return std::nullopt;
        return row[*i];
      }
      case Op::Constant:
        return e.constant;
      case Op::Equal:
      case Op::NotEqual: {
        const auto a = eval(e.args[0], row);
        const auto b = eval(e.args[1], row);
        if (!a || !b) return std::nullopt;
        return Term::boolean((*a == *b) == (e.op == Op::Equal));
      }
      case Op::Not: {
        const auto a = eval(e.args[0], row);
        const auto b = a ? truth(*a) : std::nullopt;
        if (!b) return std::nullopt;
        return Term::boolean(!*b);
      }
      case Op::And:
      case Op::Or: {
        const auto a = eval(e.args[0], row);
        const auto b = eval(e.args[1], row);
        const auto x = a ? truth(*a) : std::nullopt;
        const auto y = b ? truth(*b) : std::nullopt;
        const bool is_and = e.op == Op::And;
        // A decisive operand wins over an error.
        if ((x && *x != is_and) || (y && *y != is_and)) return Term::boolean(!is_and);
        if (!x || !y) return std::nullopt;
        return Term::boolean(is_and);
      }
    }
    return std::nullopt;
  }

  const Query& q_;
  const rdf::Graph& g_;
  std::map<std::string, std::size_t> index_;
};

std::string cell_tsv(const Cell& c) {
  if (!c) return {};
  return c->to_string();
}

std::string cell_table(const Cell& c, const rdf::PrefixMap& prefixes) {
  if (!c) return "UNBOUND";
  if (c->is_iri()) {
    const auto& iri = c->value();
    // Local parts like "patient/p1" are fine for display even though Turtle would escape them.
    for (const auto& [label, ns] : prefixes.entries()) {
      if (!ns.empty() && iri.starts_with(ns) && iri.size() > ns.size()) return label + ":" + iri.substr(ns.size());
    }
    return c->to_string();
  }
  if (c->is_literal() && c->datatype() == rdf::vocab::xsd_boolean) return c->value();
  if (c->is_literal() && c->datatype() != rdf::vocab::xsd_string) {
    if (auto dt = prefixes.abbreviate(c->datatype())) {
      return Term::literal(c->value()).to_string() + "^^" + *dt;
    }
  }
  return c->to_string();
}

}  // namespace

std::vector<std::string> Query::pattern_variables() const {
  std::vector<std::string> out;
  for (const auto& p : required) collect_variables(p, out);
  for (const auto& block : optionals) {
    for (const auto& p : block) collect_variables(p, out);
  }
  return out;
}

std::vector<std::string> Query::header() const { return select_all ? pattern_variables() : projection; }

Query parse_query(std::string_view text) { return QueryParser(text, {}).run(); }

Query parse_query(std::string_view text, const rdf::PrefixMap& initial) { return QueryParser(text, initial).run(); }

SolutionTable execute(const Query& query, const rdf::Graph& graph) {
  const Evaluator ev(query, graph);
  std::vector<Bindings> rows = ev.join(query.required, Bindings(ev.width()));
  for (const auto& block : query.optionals) {
    std::vector<Bindings> next;
    for (const auto& row : rows) {
      auto ext = ev.join(block, row);
      if (ext.empty()) {
        next.push_back(row);
      } else {
        for (auto& e : ext) next.push_back(std::move(e));
      }
    }
    rows.swap(next);
  }

  SolutionTable table;
  table.header = query.header();
  std::vector<std::size_t> columns;
  for (const auto& v : table.header) columns.push_back(*ev.index_of(v));
  for (const auto& row : rows) {
    if (!ev.accept(row)) continue;
    Row projected;
    projected.reserve(columns.size());
    for (std::size_t c : columns) projected.push_back(row[c]);
    table.rows.push_back(std::move(projected));
  }
  std::sort(table.rows.begin(), table.rows.end());
  if (query.distinct) table.rows.erase(std::unique(table.rows.begin(), table.rows.end()), table.rows.end());
  return table;
}

std::string format_tsv(const SolutionTable& table) {
  std::ostringstream out;
  for (std::size_t i = 0; i < table.header.size(); ++i) out << (i ? "\t" : "") << '?' << table.header[i];
  out << '\n';
  for (const auto& row : table.rows) {
    for (std::size_t i = 0; i < row.size(); ++i) out << (i ? "\t" : "") << cell_tsv(row[i]);
    out << '\n';
  }
  return out.str();
}

std::string format_table(const SolutionTable& table, const rdf::PrefixMap& prefixes) {
  std::vector<std::vector<std::string>> cells;
  std::vector<std::string> head;
  for (const auto& h : table.header) head.push_back("?" + h);
  cells.push_back(head);
  for (const auto& row : table.rows) {
    std::vector<std::string> line;
    for (const auto& c : row) line.push_back(cell_table(c, prefixes));
    cells.push_back(std::move(line));
  }
  std::vector<std::size_t> width(table.header.size(), 0);
  for (const auto& line : cells) {
    for (std::size_t i = 0; i < line.size(); ++i) width[i] = std::max(width[i], line[i].size());
  }
  std::ostringstream out;
  for (std::size_t r = 0; r < cells.size(); ++r) {
    const auto& line = cells[r];
    for (std::size_t i = 0; i < line.size(); ++i) {
      out << (i ? " | " : "") << line[i];
      if (i + 1 < line.size()) out << std::string(width[i] - line[i].size(), ' ');
    }
    out << '\n';
    if (r == 0) {
      for (std::size_t i = 0; i < width.size(); ++i) out << (i ? "-+-" : "") << std::string(width[i], '-');
      out << '\n';
    }
  }
  out << table.rows.size() << (table.rows.size() == 1 ? " row\n" : " rows\n");
  return out.str();
}

}  // namespace cssdh::sparql
