#ifndef OMRING_SWEEP_TABLE_HPP
#define OMRING_SWEEP_TABLE_HPP

#include <iosfwd>
#include <string>
#include <utility>
#include <variant>
#include <vector>

namespace omring
{

using Cell = std::variant<double, std::string>;

// Ordered rows of named columns plus a metadata block. Rows whose
// computation failed carry a non-empty status and NaN numeric cells.
struct SweepTable
{
    std::vector<std::pair<std::string, std::string>> metadata;
    std::vector<std::string> columns;
    std::vector<std::vector<Cell>> rows;

    void add_metadata(std::string key, std::string value);
    std::size_t column_index(const std::string &name) const;
    double number(std::size_t row, const std::string &column) const;
    const std::string &text(std::size_t row, const std::string &column) const;
};

// Shortest round-trip decimal representation; "nan"/"inf"/"-inf" otherwise.
std::string format_number(double value);

// '#'-prefixed "key = value" metadata lines, a header row, then data rows.
// LF line endings, numbers formatted by format_number.
void write_csv(std::ostream &os, const SweepTable &table);

// {"metadata": {...}, "columns": [...], "rows": [[...], ...]}; non-finite
// numbers are emitted as null.
void write_json(std::ostream &os, const SweepTable &table);

} // namespace omring

#endif
