#pragma once

#include <charconv>
#include <cstdint>
#include <fstream>
#include <stdexcept>
#include <string>
#include <vector>

namespace pal {

// Shortest round-trip formatting so reruns with identical values produce
// byte-identical files.
inline std::string format_double(double v) {
  char buf[64];
  auto res = std::to_chars(buf, buf + sizeof(buf), v);
  return std::string(buf, res.ptr);
}

class CsvWriter {
 public:
  CsvWriter(const std::string& path, const std::vector<std::string>& columns)
      : out_(path), ncols_(columns.size()) {
    if (!out_) throw std::runtime_error("cannot open " + path);
    for (size_t i = 0; i < columns.size(); ++i) {
      if (i) out_ << ',';
      out_ << columns[i];
    }
    out_ << '\n';
  }

  void begin_row() { col_ = 0; }

  CsvWriter& field(double v) { return raw(format_double(v)); }
  CsvWriter& field(int64_t v) { return raw(std::to_string(v)); }
  CsvWriter& field(int v) { return raw(std::to_string(v)); }
  CsvWriter& field(const std::string& v) { return raw(v); }

  void end_row() {
    if (col_ != ncols_) throw std::runtime_error("csv row has wrong arity");
    out_ << '\n';
    out_.flush();
  }

 private:
  CsvWriter& raw(const std::string& s) {
    if (col_) out_ << ',';
    out_ << s;
    ++col_;
    return *this;
  }

  std::ofstream out_;
  size_t ncols_ = 0;
  size_t col_ = 0;
};

}  // namespace pal
