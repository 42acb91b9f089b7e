#include "lrdual/format.hpp"

#include <charconv>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <istream>
#include <ostream>
#include <sstream>

#include "lrdual/errors.hpp"

namespace lrdual {

namespace {

std::string trim(const std::string& s) {
    const auto first = s.find_first_not_of(" \t\r");
    if (first == std::string::npos) return "";
    const auto last = s.find_last_not_of(" \t\r");
    return s.substr(first, last - first + 1);
}

std::vector<std::string> split(const std::string& line) {
    std::vector<std::string> fields;
    std::stringstream ss(line);
    std::string field;
    while (std::getline(ss, field, ',')) fields.push_back(trim(field));
    if (!line.empty() && line.back() == ',') fields.emplace_back();
    return fields;
}

}  // namespace

std::string format_double(double value) {
    if (std::isnan(value)) return "nan";
    if (std::isinf(value)) return value > 0 ? "inf" : "-inf";
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.17g", value);
    return buf;
}

std::size_t CsvTable::column(const std::string& name) const {
    for (std::size_t i = 0; i < header.size(); ++i)
        if (header[i] == name) return i;
    throw ValidationError("csv", "missing column '" + name + "'");
}

std::vector<double> CsvTable::values(const std::string& name) const {
    const std::size_t col = column(name);
    std::vector<double> out;
    out.reserve(rows.size());
    for (const auto& row : rows) out.push_back(row[col]);
    return out;
}

CsvTable parse_csv(std::istream& in, const std::string& source) {
    CsvTable table;
    std::string line;
    std::size_t line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        const std::string body = trim(line);
        if (body.empty() || body.front() == '#') continue;
        auto fields = split(body);
        if (table.header.empty()) {
            table.header = std::move(fields);
            continue;
        }
        if (fields.size() != table.header.size())
            throw ValidationError("csv", source + ":" + std::to_string(line_no) + ": expected " +
                                             std::to_string(table.header.size()) + " fields");
        std::vector<double> row;
        row.reserve(fields.size());
        for (const auto& f : fields) {
            try {
                std::size_t used = 0;
                const double v = std::stod(f, &used);
                if (used != f.size()) throw std::invalid_argument(f);
                row.push_back(v);
            } catch (const std::exception&) {
                throw ValidationError("csv", source + ":" + std::to_string(line_no) + ": '" + f + "' is not a number");
            }
        }
        table.rows.push_back(std::move(row));
    }
    if (table.header.empty()) throw ValidationError("csv", source + ": missing header");
    return table;
}

CsvTable read_csv(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw IoError("cannot open " + path.string());
    return parse_csv(in, path.string());
}

void write_schedule_csv(std::ostream& out, std::span<const double> lrs, std::span<const double> alphas,
                        long long first_step) {
    out << "step,lr,alpha\n";
    for (std::size_t i = 0; i < lrs.size(); ++i)
        out << first_step + static_cast<long long>(i) << ',' << format_double(lrs[i]) << ','
            << format_double(alphas[i]) << '\n';
}

}  // namespace lrdual
