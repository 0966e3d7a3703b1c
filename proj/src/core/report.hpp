#pragma once

#include <string>
#include <vector>

#include <nlohmann/json.hpp>

namespace fractrace {

using json = nlohmann::ordered_json;

// number formatting used for every CSV/JSON we emit: %.12g, locale-free,
// so a fixed seed reproduces files byte for byte
std::string fmt_num(double x);

class CsvWriter {
 public:
  CsvWriter(std::string path, std::vector<std::string> columns);
  void row(const std::vector<double>& values);
  void row_mixed(const std::vector<std::string>& values);
  void close();
  const std::string& path() const { return path_; }

 private:
  std::string path_;
  std::size_t n_cols_;
  std::string buffer_;
  bool closed_ = false;
};

// creates the directory, writes <out>/summary.json
void write_summary(const std::string& out_dir, const json& summary);

void ensure_dir(const std::string& dir);

}  // namespace fractrace
