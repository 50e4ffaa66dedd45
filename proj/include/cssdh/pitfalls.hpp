#pragma once

#include <set>
#include <string>
#include <string_view>
#include <vector>

#include "cssdh/owl.hpp"
#include "cssdh/rdf.hpp"

namespace cssdh::pitfalls {

enum class Code { PF01 = 1, PF02, PF03, PF04, PF05, PF06, PF07, PF08 };
enum class Severity { Critical, Important, Minor };

/// Fixed by the catalog.
Severity severity_of(Code code);
std::string_view to_string(Code code);
std::string_view to_string(Severity severity);
/// One-line description of what the code checks.
std::string_view describe(Code code);

struct Pitfall {
  Code code;
  Severity severity;
  std::string subject;
  std::string message;

  friend auto operator<=>(const Pitfall&, const Pitfall&) = default;
  friend bool operator==(const Pitfall&, const Pitfall&) = default;
};

struct PitfallReport {
  /// Sorted by (code, subject), at most one finding per pair.
  std::vector<Pitfall> findings;
  bool clean() const noexcept { return findings.empty(); }
  /// `code\tseverity\tsubject\tmessage` lines, then `PITFALLS: <n>`.
  std::string to_string() const;
};

struct ScanOptions {
  /// Local names exempt from the PF06 naming conventions.
  std::set<std::string> naming_exemptions{"Crowding_at_home"};
};

/// PF01 subclass cycle not explained by equivalence
/// PF02 property without domain or range
/// PF03 class with no subclass link and no domain/range use
/// PF04 declared entity without rdfs:label
/// PF05 class below two disjoint classes
/// PF06 local name off the convention for its kind
/// PF07 reference to an undeclared class or property
/// PF08 SDH data property whose range is not xsd:boolean
PitfallReport scan(const rdf::Graph& graph, const owl::Ontology& ontology, const ScanOptions& options = {});

/// Per-kind naming conventions used by PF06.
bool is_upper_camel(std::string_view name);
bool is_lower_camel(std::string_view name);
bool is_hyphenated(std::string_view name);

}  // namespace cssdh::pitfalls
