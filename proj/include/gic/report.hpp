#pragma once

// Serialization of run results: JSON (sparse Laurent encodings) and CSV
// tables of the f-matrix and weight dimensions.

#include <string>
#include <vector>

#include "gic/engine.hpp"
#include "json.hpp"

namespace gic {

using ojson = nlohmann::ordered_json;

// [[exp, coeff], ...] ascending; big coefficients are written as strings.
ojson laurent_to_json(const LaurentPoly& p);
// Accepts the pair list, a polynomial string such as "v^-1+v", or an integer.
LaurentPoly laurent_from_json(const nlohmann::json& j);
LaurentPoly laurent_from_json(const ojson& j);
// Laurent entries as pair lists, others as {"num": ..., "den": ...}.
ojson ratfunc_to_json(const RatFunc& r);

struct ReportOptions {
  std::vector<int> only_n;  // empty: both signs
};

ojson run_to_json(const RunResult& r, const ReportOptions& opt = {});
std::string run_to_csv(const RunResult& r, const ReportOptions& opt = {});

// Generic reader for the CSV produced above.
struct CsvTable {
  std::string title;                 // e.g. "f n=1"
  std::vector<std::string> columns;  // column labels
  std::vector<std::string> row_labels;
  std::vector<std::vector<std::string>> cells;
};
std::vector<CsvTable> parse_csv(const std::string& text);

}  // namespace gic
