#include "cssdh/ingest.hpp"

#include <algorithm>
#include <cctype>

namespace cssdh::ingest {

using rdf::Term;

NonBooleanSdhValue::NonBooleanSdhValue(std::size_t row, std::string column, std::string value)
    : Error("row " + std::to_string(row) + ", column " + column + ": SDH value '" + value +
            "' is not boolean (expected true, false or empty)"),
      row_(row),
      column_(std::move(column)),
      value_(std::move(value)) {}

UnknownSdhColumn::UnknownSdhColumn(std::string column)
    : Error("unknown SDH column '" + column + "'"), column_(std::move(column)) {}

DuplicateId::DuplicateId(std::size_t row, std::string id)
    : Error("row " + std::to_string(row) + ": duplicate record id '" + id + "'"), id_(std::move(id)) {}

InvalidRecordId::InvalidRecordId(std::size_t row, const std::string& id)
    : Error("row " + std::to_string(row) + ": record id '" + id + "' must be non-empty and use only A-Z a-z 0-9 . _ ~ -") {}

RecordFormatError::RecordFormatError(std::size_t line, const std::string& message)
    : Error("line " + std::to_string(line) + ": " + message) {}

UnknownSdhProperty::UnknownSdhProperty(std::string name)
    : Error("'" + name + "' is not an SDH data property of the manifest"), name_(std::move(name)) {}

namespace {

struct CsvRow {
  std::size_t line;
  std::vector<std::string> cells;
};

// Quoted fields may hold commas, doubled quotes and line breaks.
std::vector<CsvRow> read_csv(std::string_view text) {
  if (text.starts_with("\xEF\xBB\xBF")) text.remove_prefix(3);
  std::vector<CsvRow> rows;
  std::size_t line = 1;
  std::size_t i = 0;
  while (i < text.size()) {
    CsvRow row{line, {}};
    std::string cell;
    bool row_done = false;
    while (!row_done) {
      if (i < text.size() && text[i] == '"') {
        const std::size_t open_line = line;
        ++i;
        while (true) {
          if (i >= text.size()) throw RecordFormatError(open_line, "unterminated quoted field");
          const char c = text[i++];
          if (c == '"') {
            if (i < text.size() && text[i] == '"') {
              cell += '"';
              ++i;
              continue;
            }
            break;
          }
          if (c == '\n') ++line;
          cell += c;
        }
        if (i < text.size() && text[i] != ',' && text[i] != '\n' && text[i] != '\r') {
          throw RecordFormatError(line, "unexpected character after closing quote");
        }
      } else {
        while (i < text.size() && text[i] != ',' && text[i] != '\n' && text[i] != '\r') {
          if (text[i] == '"') throw RecordFormatError(line, "quote inside unquoted field");
          cell += text[i++];
        }
      }
      row.cells.push_back(std::move(cell));
      cell.clear();
      if (i >= text.size()) {
        row_done = true;
      } else if (text[i] == ',') {
        ++i;
      } else {
        if (text[i] == '\r') ++i;
        if (i < text.size() && text[i] == '\n') ++i;
        ++line;
        row_done = true;
      }
    }
    // Skip blank lines.
    if (!(row.cells.size() == 1 && row.cells[0].empty())) rows.push_back(std::move(row));
  }
  return rows;
}

std::string lower(std::string s) {
  std::transform(s.begin(), s.end(), s.begin(), [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
  return s;
}

bool valid_id(std::string_view id) {
  return !id.empty() && std::all_of(id.begin(), id.end(), [](unsigned char c) {
    return std::isalnum(c) || c == '.' || c == '_' || c == '~' || c == '-';
  });
}

}  // namespace

std::set<std::string> sdh_property_names(const schema::Manifest& manifest) {
  std::set<std::string> out;
  for (const auto& e : manifest.entries) {
    if (e.kind == schema::EntryKind::DataProperty && e.sdh) out.insert(e.term);
  }
  return out;
}

std::vector<PatientRecord> parse_records(std::string_view text, const std::optional<std::set<std::string>>& known_sdh) {
  const auto rows = read_csv(text);
  if (rows.empty()) throw RecordFormatError(1, "missing header row");
  const auto& header = rows.front().cells;
  const std::size_t hline = rows.front().line;
  if (header.size() < 2 || header[0] != "id" || header[1] != "forename") {
    throw RecordFormatError(hline, "header must start with id,forename");
  }
  const bool has_surname = header.size() > 2 && header[2] == "surname";
  const std::size_t first_sdh = has_surname ? 3 : 2;
  std::set<std::string> seen_cols;
  for (std::size_t c = 0; c < header.size(); ++c) {
    if (header[c].empty()) throw RecordFormatError(hline, "empty column name at position " + std::to_string(c + 1));
    if (!seen_cols.insert(header[c]).second) throw RecordFormatError(hline, "duplicate column '" + header[c] + "'");
    if (c >= first_sdh) {
      if (header[c] == "id" || header[c] == "forename" || header[c] == "surname") {
        throw RecordFormatError(hline, "column '" + header[c] + "' out of place");
      }
      if (known_sdh && !known_sdh->contains(header[c])) throw UnknownSdhColumn(header[c]);
    }
  }

  std::vector<PatientRecord> out;
  std::set<std::string> ids;
  for (std::size_t r = 1; r < rows.size(); ++r) {
    const auto& row = rows[r];
    if (row.cells.size() != header.size()) {
      throw RecordFormatError(row.line, "expected " + std::to_string(header.size()) + " fields, got " +
                                            std::to_string(row.cells.size()));
    }
    PatientRecord rec;
    rec.id = row.cells[0];
    if (!valid_id(rec.id)) throw InvalidRecordId(row.line, rec.id);
    if (!ids.insert(rec.id).second) throw DuplicateId(row.line, rec.id);
    rec.forename = row.cells[1];
    if (has_surname && !row.cells[2].empty()) rec.surname = row.cells[2];
    for (std::size_t c = first_sdh; c < header.size(); ++c) {
      const std::string v = lower(row.cells[c]);
      if (v.empty()) continue;
      if (v == "true") {
        rec.sdh[header[c]] = true;
      } else if (v == "false") {
        rec.sdh[header[c]] = false;
      } else {
        throw NonBooleanSdhValue(row.line, header[c], row.cells[c]);
      }
    }
    out.push_back(std::move(rec));
  }
  return out;
}

std::string patient_iri(const schema::Manifest& manifest, std::string_view id) {
  return manifest.ns + "patient/" + std::string(id);
}

rdf::Graph to_graph(const std::vector<PatientRecord>& records, const schema::Manifest& manifest) {
  const auto known = sdh_property_names(manifest);
  rdf::Graph g;
  const Term type = Term::iri(rdf::vocab::type);
  const Term patient = Term::iri(std::string(rdf::ns::fhir) + "Patient");
  const Term subject_of_care = Term::iri(manifest.ns + "SubjectOfCare");
  const Term forename = Term::iri(manifest.ns + "forename");
  const Term surname = Term::iri(manifest.ns + "surname");
  for (const auto& rec : records) {
    for (const auto& [key, value] : rec.sdh) {
      if (!known.contains(key)) throw UnknownSdhProperty(key);
    }
    const Term s = Term::iri(patient_iri(manifest, rec.id));
    g.insert(s, type, patient);
    g.insert(s, type, subject_of_care);
    g.insert(s, forename, Term::literal(rec.forename));
    if (rec.surname) g.insert(s, surname, Term::literal(*rec.surname));
    for (const auto& [key, value] : rec.sdh) g.insert(s, Term::iri(manifest.resolve(key)), Term::boolean(value));
  }
  return g;
}

}  // namespace cssdh::ingest
