#pragma once

#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "cssdh/error.hpp"
#include "cssdh/owl.hpp"
#include "cssdh/rdf.hpp"

namespace cssdh::schema {

enum class EntryKind { Class, ObjectProperty, DataProperty };
enum class SdhCategory {
  EconomicStability,
  EducationAccessQuality,
  HealthCareAccessQuality,
  NeighborhoodBuiltEnvironment,
  SocialCommunityContext,
};
enum class Source { ContSys, DOLCE, ICD11, SOHO, SocialPrescribing, Gravity };

std::string_view to_string(EntryKind kind);
std::string_view to_string(SdhCategory category);
std::string_view to_string(Source source);
std::optional<SdhCategory> parse_sdh_category(std::string_view text);
std::optional<Source> parse_source(std::string_view text);

/// One manifest record. Term references are local names in the manifest
/// namespace or CURIEs over the manifest prefixes.
struct CatalogEntry {
  std::string term;
  EntryKind kind = EntryKind::Class;
  std::string label;
  std::optional<std::string> parent;
  std::optional<std::string> domain;
  std::optional<std::string> range;
  std::optional<SdhCategory> sdh;
  Source source = Source::ContSys;
  std::optional<std::string> equivalent;
  std::vector<std::string> disjoint;
  std::optional<std::string> inverse;
};

struct Manifest {
  std::string ns{rdf::ns::coc};
  /// `@prefix` declarations of the file (the standard prefixes are implicit).
  rdf::PrefixMap prefixes;
  std::vector<CatalogEntry> entries;

  /// Standard prefixes plus the declared ones.
  rdf::PrefixMap resolver() const;
  /// Full IRI of a term reference.
  std::string resolve(std::string_view ref) const;
  const CatalogEntry* find(std::string_view term) const;
};

class ManifestError : public Error {
 public:
  ManifestError(std::size_t line, const std::string& message);
  explicit ManifestError(const std::string& message) : Error(message), detail_(message) {}
  /// 0 when the problem is not tied to one line.
  std::size_t line() const noexcept { return line_; }
  /// The message without the line prefix.
  const std::string& detail() const noexcept { return detail_; }

 private:
  std::size_t line_ = 0;
  std::string detail_;
};

/// Throws ManifestError with the offending line.
Manifest parse_manifest(std::string_view text);
Manifest load_manifest(const std::string& path);

struct Schema {
  rdf::Graph graph;
  owl::Ontology ontology;
  rdf::PrefixMap prefixes;
};

/// Problems that make a manifest ungenerateable (duplicates, unresolved
/// references, SDH entries that are not boolean data properties).
std::vector<std::string> structural_problems(const Manifest& manifest);

/// Deterministic generation. Throws ManifestError listing structural problems.
Schema build_schema(const Manifest& manifest);

struct Check {
  std::string name;
  bool passed = false;
  std::string detail;
};

struct VerificationReport {
  std::vector<Check> checks;
  bool passed() const;
  /// One `PASS|FAIL <name>: <detail>` line per check.
  std::string to_string() const;
};

/// CSSDH conformance: published counts, mandatory entries, TargetCondition
/// subsumption, boolean SDH ranges, referential closure.
VerificationReport verify_manifest(const Manifest& manifest);

}  // namespace cssdh::schema
