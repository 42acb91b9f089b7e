#pragma once

#include <filesystem>
#include <iosfwd>
#include <span>
#include <string>
#include <vector>

namespace lrdual {

/// Shortest-safe round-trip representation: 17 significant digits.
std::string format_double(double value);

struct CsvTable {
    std::vector<std::string> header;
    std::vector<std::vector<double>> rows;

    /// Column index by name; throws ValidationError when absent.
    std::size_t column(const std::string& name) const;
    std::vector<double> values(const std::string& name) const;
};

/// Numeric CSV with a header line. Lines starting with '#' and blank lines are skipped.
CsvTable parse_csv(std::istream& in, const std::string& source = "<stream>");
/// Throws IoError if the file cannot be opened.
CsvTable read_csv(const std::filesystem::path& path);

/// "step,lr,alpha" rows for steps first_step, first_step+1, ...
void write_schedule_csv(std::ostream& out, std::span<const double> lrs, std::span<const double> alphas,
                        long long first_step = 1);

}  // namespace lrdual
