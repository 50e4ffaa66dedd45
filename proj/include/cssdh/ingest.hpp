#pragma once

#include <map>
#include <optional>
#include <set>
#include <string>
#include <string_view>
#include <vector>

#include "cssdh/error.hpp"
#include "cssdh/rdf.hpp"
#include "cssdh/schema.hpp"

namespace cssdh::ingest {

struct PatientRecord {
  std::string id;
  std::string forename;
  std::optional<std::string> surname;
  /// SDH data-property local name -> value; absent key means not recorded.
  std::map<std::string, bool> sdh;

  friend bool operator==(const PatientRecord&, const PatientRecord&) = default;
};

class NonBooleanSdhValue : public Error {
 public:
  NonBooleanSdhValue(std::size_t row, std::string column, std::string value);
  std::size_t row() const noexcept { return row_; }
  const std::string& column() const noexcept { return column_; }
  const std::string& value() const noexcept { return value_; }

 private:
  std::size_t row_;
  std::string column_;
  std::string value_;
};

class UnknownSdhColumn : public Error {
 public:
  explicit UnknownSdhColumn(std::string column);
  const std::string& column() const noexcept { return column_; }

 private:
  std::string column_;
};

class DuplicateId : public Error {
 public:
  DuplicateId(std::size_t row, std::string id);
  const std::string& id() const noexcept { return id_; }

 private:
  std::string id_;
};

class InvalidRecordId : public Error {
 public:
  InvalidRecordId(std::size_t row, const std::string& id);
};

/// Malformed table: bad header, wrong field count, unterminated quote.
class RecordFormatError : public Error {
 public:
  RecordFormatError(std::size_t line, const std::string& message);
};

class UnknownSdhProperty : public Error {
 public:
  explicit UnknownSdhProperty(std::string name);
  const std::string& name() const noexcept { return name_; }

 private:
  std::string name_;
};

/// Local names of the manifest's SDH data properties.
std::set<std::string> sdh_property_names(const schema::Manifest& manifest);

/// Parses a comma-separated table with header `id,forename[,surname],<sdh>...`.
/// When `known_sdh` is given (strict mode) every SDH column must be in it.
/// Row numbers in errors are 1-based physical line numbers.
std::vector<PatientRecord> parse_records(std::string_view text,
                                         const std::optional<std::set<std::string>>& known_sdh = std::nullopt);

/// Subject IRI for a record id.
std::string patient_iri(const schema::Manifest& manifest, std::string_view id);

/// Type, name and boolean SDH triples per record. Throws UnknownSdhProperty.
rdf::Graph to_graph(const std::vector<PatientRecord>& records, const schema::Manifest& manifest);

}  // namespace cssdh::ingest
