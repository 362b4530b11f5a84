#include "rotor/csv.hpp"

#include <cstdio>
#include <cstdlib>
#include <sstream>

#include "rotor/errors.hpp"

namespace rotor {

namespace {

std::string trim(const std::string& s) {
    const auto b = s.find_first_not_of(" \t\r\n");
    if (b == std::string::npos) {
        return {};
    }
    const auto e = s.find_last_not_of(" \t\r\n");
    return s.substr(b, e - b + 1);
}

std::vector<std::string> split(const std::string& line, char sep) {
    std::vector<std::string> out;
    std::string cur;
    for (char c : line) {
        if (c == sep) {
            out.push_back(cur);
            cur.clear();
        } else {
            cur += c;
        }
    }
    out.push_back(cur);
    return out;
}

double parse_num(const std::string& text, const std::filesystem::path& path, int line_no) {
    const std::string t = trim(text);
    char* end = nullptr;
    const double v = std::strtod(t.c_str(), &end);
    if (t.empty() || end != t.c_str() + t.size()) {
        throw MalformedCsv(path.string() + ":" + std::to_string(line_no) +
                           ": not a number: '" + t + "'");
    }
    return v;
}

} // namespace

std::size_t CsvTable::col(const std::string& name) const {
    for (std::size_t i = 0; i < header.size(); ++i) {
        if (header[i] == name) {
            return i;
        }
    }
    throw MalformedCsv("missing column '" + name + "'");
}

std::vector<double> CsvTable::column(const std::string& name) const {
    const std::size_t i = col(name);
    std::vector<double> out;
    out.reserve(rows.size());
    for (const auto& r : rows) {
        out.push_back(r[i]);
    }
    return out;
}

CsvTable read_csv(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) {
        throw MalformedCsv("cannot open '" + path.string() + "'");
    }
    CsvTable t;
    std::string line;
    int line_no = 0;
    bool have_header = false;
    while (std::getline(in, line)) {
        ++line_no;
        const std::string s = trim(line);
        if (s.empty()) {
            continue;
        }
        if (s[0] == '#') {
            const auto eq = s.find('=');
            if (eq != std::string::npos) {
                const std::string key = trim(s.substr(1, eq - 1));
                if (!key.empty()) {
                    t.meta[key] = parse_num(s.substr(eq + 1), path, line_no);
                }
            }
            continue;
        }
        if (!have_header) {
            for (auto& c : split(s, ',')) {
                t.header.push_back(trim(c));
            }
            have_header = true;
            continue;
        }
        const auto cells = split(s, ',');
        if (cells.size() != t.header.size()) {
            throw MalformedCsv(path.string() + ":" + std::to_string(line_no) +
                               ": expected " + std::to_string(t.header.size()) +
                               " cells, got " + std::to_string(cells.size()));
        }
        std::vector<double> row;
        row.reserve(cells.size());
        for (const auto& c : cells) {
            row.push_back(parse_num(c, path, line_no));
        }
        t.rows.push_back(std::move(row));
    }
    if (!have_header) {
        throw MalformedCsv(path.string() + ": no header row");
    }
    return t;
}

std::string format_num(double v) {
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.12g", v);
    return buf;
}

CsvWriter::CsvWriter(std::filesystem::path path, std::span<const std::string> header,
                     const std::map<std::string, double>& meta)
    : path_(std::move(path)), tmp_(path_.string() + ".tmp"), out_(tmp_, std::ios::trunc) {
    if (!out_) {
        throw DataError("cannot write '" + tmp_.string() + "'");
    }
    open_ = true;
    for (const auto& [k, v] : meta) {
        out_ << "# " << k << " = " << format_num(v) << "\n";
    }
    for (std::size_t i = 0; i < header.size(); ++i) {
        out_ << (i ? "," : "") << header[i];
    }
    out_ << "\n";
}

CsvWriter::~CsvWriter() {
    if (open_) {
        try {
            close();
        } catch (...) {
        }
    }
}

void CsvWriter::row(std::span<const double> values) {
    for (std::size_t i = 0; i < values.size(); ++i) {
        out_ << (i ? "," : "") << format_num(values[i]);
    }
    out_ << "\n";
}

void CsvWriter::close() {
    if (!open_) {
        return;
    }
    out_.flush();
    if (!out_) {
        throw DataError("write failed: '" + tmp_.string() + "'");
    }
    out_.close();
    std::filesystem::rename(tmp_, path_);
    open_ = false;
}

} // namespace rotor
