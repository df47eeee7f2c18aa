#include "omring/sweep_table.hpp"

#include <json.hpp>

#include <charconv>
#include <cmath>
#include <ostream>
#include <stdexcept>

namespace omring
{

void SweepTable::add_metadata(std::string key, std::string value)
{
    metadata.emplace_back(std::move(key), std::move(value));
}

std::size_t SweepTable::column_index(const std::string &name) const
{
    for (std::size_t k = 0; k < columns.size(); ++k)
        if (columns[k] == name)
            return k;
    throw std::out_of_range("no column named " + name);
}

double SweepTable::number(std::size_t row, const std::string &column) const
{
    return std::get<double>(rows.at(row).at(column_index(column)));
}

const std::string &SweepTable::text(std::size_t row, const std::string &column) const
{
    return std::get<std::string>(rows.at(row).at(column_index(column)));
}

std::string format_number(double value)
{
    if (std::isnan(value))
        return "nan";
    if (std::isinf(value))
        return value > 0 ? "inf" : "-inf";
    if (value == 0.0)
        return "0"; // folds -0
    char buf[64];
    auto [end, ec] = std::to_chars(buf, buf + sizeof buf, value);
    if (ec != std::errc{})
        throw std::runtime_error("number formatting failed");
    return std::string(buf, end);
}

namespace
{

std::string csv_cell(const Cell &cell)
{
    if (const double *v = std::get_if<double>(&cell))
        return format_number(*v);
    const std::string &s = std::get<std::string>(cell);
    if (s.find_first_of(",\"\n") == std::string::npos)
        return s;
    std::string quoted = "\"";
    for (char c : s)
    {
        if (c == '"')
            quoted += '"';
        quoted += c;
    }
    return quoted + '"';
}

} // namespace

void write_csv(std::ostream &os, const SweepTable &table)
{
    for (const auto &[key, value] : table.metadata)
        os << "# " << key << " = " << value << '\n';
    for (std::size_t k = 0; k < table.columns.size(); ++k)
        os << (k ? "," : "") << table.columns[k];
    os << '\n';
    for (const auto &row : table.rows)
    {
        for (std::size_t k = 0; k < row.size(); ++k)
            os << (k ? "," : "") << csv_cell(row[k]);
        os << '\n';
    }
}

void write_json(std::ostream &os, const SweepTable &table)
{
    // ordered_json keeps metadata in insertion order
    nlohmann::ordered_json doc;
    doc["metadata"] = nlohmann::ordered_json::object();
    for (const auto &[key, value] : table.metadata)
        doc["metadata"][key] = value;
    doc["columns"] = table.columns;
    auto rows = nlohmann::ordered_json::array();
    for (const auto &row : table.rows)
    {
        auto jrow = nlohmann::ordered_json::array();
        for (const auto &cell : row)
        {
            if (const double *v = std::get_if<double>(&cell))
            {
                if (std::isfinite(*v))
                    jrow.push_back(*v);
                else
                    jrow.push_back(nullptr);
            }
            else
            {
                jrow.push_back(std::get<std::string>(cell));
            }
        }
        rows.push_back(std::move(jrow));
    }
    doc["rows"] = std::move(rows);
    os << doc.dump(2) << '\n';
}

} // namespace omring
