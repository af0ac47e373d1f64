#include "rbnet/io.hpp"

#include <cstdio>
#include <fstream>
#include <filesystem>
#include <sstream>
#include <stdexcept>

namespace rbnet::io {

std::string fmt_double(double v) {
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    return buf;
}

static std::ofstream open_out(const std::string& path) {
    std::ofstream f(path);
    if (!f) throw std::runtime_error("cannot open for writing: " + path);
    return f;
}

static std::ifstream open_in(const std::string& path) {
    std::ifstream f(path);
    if (!f) throw std::runtime_error("cannot open for reading: " + path);
    return f;
}

void write_matrix_csv(const std::string& path, const Mat& m, const std::vector<std::string>& header) {
    auto f = open_out(path);
    if (!header.empty()) {
        for (size_t j = 0; j < header.size(); ++j) f << (j ? "," : "") << header[j];
        f << "\n";
    }
    for (int i = 0; i < m.rows; ++i) {
        const double* r = m.row(i);
        for (int j = 0; j < m.cols; ++j) f << (j ? "," : "") << fmt_double(r[j]);
        f << "\n";
    }
}

static std::vector<std::string> split_csv_line(const std::string& line) {
    std::vector<std::string> out;
    std::string cur;
    for (char c : line) {
        if (c == ',') {
            out.push_back(cur);
            cur.clear();
        } else if (c != '\r') {
            cur += c;
        }
    }
    out.push_back(cur);
    return out;
}

Mat read_matrix_csv(const std::string& path, bool expect_header, std::vector<std::string>* header_out) {
    auto f = open_in(path);
    std::string line;
    std::vector<std::vector<double>> rows;
    int cols = -1;
    bool first = true;
    while (std::getline(f, line)) {
        if (line.empty() || line[0] == '#') continue;
        auto cells = split_csv_line(line);
        if (first && expect_header) {
            if (header_out) *header_out = cells;
            first = false;
            continue;
        }
        first = false;
        std::vector<double> r;
        r.reserve(cells.size());
        for (auto& c : cells) {
            size_t pos = 0;
            double v = std::stod(c, &pos);
            r.push_back(v);
        }
        if (cols < 0) cols = static_cast<int>(r.size());
        if (static_cast<int>(r.size()) != cols)
            throw std::runtime_error(path + ": ragged csv row (" + std::to_string(r.size()) + " vs " +
                                     std::to_string(cols) + " columns)");
        rows.push_back(std::move(r));
    }
    Mat m(static_cast<int>(rows.size()), cols < 0 ? 0 : cols);
    for (int i = 0; i < m.rows; ++i)
        for (int j = 0; j < m.cols; ++j) m(i, j) = rows[i][j];
    return m;
}

void write_kv(const std::string& path, const KvList& kv) {
    auto f = open_out(path);
    for (auto& [k, v] : kv) f << k << "=" << v << "\n";
}

KvList read_kv(const std::string& path) {
    auto f = open_in(path);
    KvList out;
    std::string line;
    while (std::getline(f, line)) {
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (line.empty() || line[0] == '#') continue;
        auto eq = line.find('=');
        if (eq == std::string::npos) throw std::runtime_error(path + ": malformed line: " + line);
        std::string k = line.substr(0, eq);
        std::string v = line.substr(eq + 1);
        auto trim = [](std::string& s) {
            while (!s.empty() && (s.front() == ' ' || s.front() == '\t')) s.erase(s.begin());
            while (!s.empty() && (s.back() == ' ' || s.back() == '\t')) s.pop_back();
        };
        trim(k);
        trim(v);
        out.emplace_back(std::move(k), std::move(v));
    }
    return out;
}

void write_lines(const std::string& path, const std::vector<std::string>& lines) {
    auto f = open_out(path);
    for (auto& l : lines) f << l << "\n";
}

std::vector<std::string> read_lines(const std::string& path) {
    auto f = open_in(path);
    std::vector<std::string> out;
    std::string line;
    while (std::getline(f, line)) {
        if (!line.empty() && line.back() == '\r') line.pop_back();
        out.push_back(line);
    }
    return out;
}

bool file_exists(const std::string& path) { return std::filesystem::exists(path); }

void ensure_dir(const std::string& path) { std::filesystem::create_directories(path); }

}  // namespace rbnet::io
