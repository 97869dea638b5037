#pragma once

#include "cascadeho/autonomous.hpp"
#include "cascadeho/exactalg.hpp"
#include "cascadeho/mbs.hpp"
#include "cascadeho/morphism.hpp"
#include "cascadeho/scenarios.hpp"

#include <json.hpp>

#include <string>

namespace cascadeho::io {

using json = nlohmann::json;

inline constexpr int schema_version = 1;

// A document is a fixture without a name: one of the three payload kinds.
using Document = Fixture;

// Strict parse: unknown keys, wrong types and non-reduced rationals raise SchemaError.
Document parse_document(const std::string& text);
// Canonical form: sorted keys, two-space indent, trailing newline.
std::string dump_document(const Document& doc);

json to_json(const MorseBottSystem& sys);
json to_json(const AutonomousData& data);
json to_json(const MorphismData& m);

// "-" reads stdin / writes stdout. I/O failures raise IoError.
std::string read_text(const std::string& path);
void write_text(const std::string& path, const std::string& text);
Document load_document(const std::string& path);

class IoError : public std::runtime_error {
public:
  using std::runtime_error::runtime_error;
};

// Report fragments.
json homology_json(const HomologyResult& h);
json ranks_json(const std::map<HomologyKey, std::size_t>& ranks);
json checks_json(const CheckList& c);
json violations_json(const ValidationReport& r);
json matrix_json(const IntMatrix& m, const std::vector<std::string>& rows, const std::vector<std::string>& cols);

// Plain-text rendering of a JSON report; carries the same numbers.
std::string render_text(const json& report);

} // namespace cascadeho::io
