#pragma once

#include <string>
#include <utility>
#include <vector>

#include "rbnet/mat.hpp"

namespace rbnet::io {

// All text output of doubles goes through this (%.17g): parses back to the
// same bits, which the round-trip and determinism contracts rely on.
std::string fmt_double(double v);

void write_matrix_csv(const std::string& path, const Mat& m, const std::vector<std::string>& header = {});
Mat read_matrix_csv(const std::string& path, bool expect_header, std::vector<std::string>* header_out = nullptr);

// Line-oriented "key = value" files. Keys may repeat; order is preserved.
using KvList = std::vector<std::pair<std::string, std::string>>;
void write_kv(const std::string& path, const KvList& kv);
KvList read_kv(const std::string& path);

void write_lines(const std::string& path, const std::vector<std::string>& lines);
std::vector<std::string> read_lines(const std::string& path);

bool file_exists(const std::string& path);
void ensure_dir(const std::string& path);

}  // namespace rbnet::io
