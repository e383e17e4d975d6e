#pragma once

#include <cstddef>
#include <fstream>
#include <functional>
#include <iosfwd>
#include <memory>
#include <string>

#include "json.hpp"

namespace absa {

using json = nlohmann::json;

// Every writer may emit a single provenance line "#<json>" before the data.
// Readers skip lines starting with '#' and blank lines.
void write_header(std::ostream& out, const json& config);

// Compact single-line serialization; invalid UTF-8 is replaced, not thrown.
std::string to_line(const json& value);

// Calls fn(line_number, value) for each data line. Throws ValidationError
// naming the line when a line is not valid JSON.
void for_each_json_line(std::istream& in,
                        const std::function<void(std::size_t, const json&)>& fn);

// "-" maps to stdin / stdout.
class InputFile {
 public:
  explicit InputFile(const std::string& path);
  std::istream& stream() { return *in_; }
  const std::string& path() const { return path_; }

 private:
  std::string path_;
  std::unique_ptr<std::ifstream> file_;
  std::istream* in_;
};

class OutputFile {
 public:
  explicit OutputFile(const std::string& path);
  ~OutputFile();
  std::ostream& stream() { return *out_; }
  // Flushes and reports write failures; the destructor swallows them.
  void close();

 private:
  std::string path_;
  std::unique_ptr<std::ofstream> file_;
  std::ostream* out_;
};

}  // namespace absa
