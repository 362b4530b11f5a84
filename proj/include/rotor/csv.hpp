#pragma once

// CSV is the sole data interchange format: header row, comma separators, dot
// decimals, UTF-8. Optional '# key = value' metadata lines precede the
// header. Files are written to a .tmp sibling and renamed on close so
// readers never observe partial output.

#include <filesystem>
#include <fstream>
#include <map>
#include <span>
#include <string>
#include <vector>

namespace rotor {

struct CsvTable {
    std::vector<std::string> header;
    std::vector<std::vector<double>> rows;
    std::map<std::string, double> meta;

    // Column index by name; throws MalformedCsv when absent.
    std::size_t col(const std::string& name) const;
    std::vector<double> column(const std::string& name) const;
};

CsvTable read_csv(const std::filesystem::path& path);

// Locale-independent shortest-ish representation, stable across runs.
std::string format_num(double v);

class CsvWriter {
  public:
    CsvWriter(std::filesystem::path path, std::span<const std::string> header,
              const std::map<std::string, double>& meta = {});
    ~CsvWriter();

    CsvWriter(const CsvWriter&) = delete;
    CsvWriter& operator=(const CsvWriter&) = delete;

    void row(std::span<const double> values);
    void close(); // flush and atomically rename into place

  private:
    std::filesystem::path path_;
    std::filesystem::path tmp_;
    std::ofstream out_;
    bool open_ = false;
};

} // namespace rotor
