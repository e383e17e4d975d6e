#include "jsonl.hpp"

#include <iostream>

#include "error.hpp"

namespace absa {

void write_header(std::ostream& out, const json& config) {
  if (config.is_null()) return;
  out << '#' << to_line(config) << '\n';
}

std::string to_line(const json& value) {
  return value.dump(-1, ' ', false, json::error_handler_t::replace);
}

void for_each_json_line(std::istream& in,
                        const std::function<void(std::size_t, const json&)>& fn) {
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty() || line[0] == '#') continue;
    if (line.find_first_not_of(" \t") == std::string::npos) continue;
    json value;
    try {
      value = json::parse(line);
    } catch (const json::parse_error& e) {
      throw ValidationError("line " + std::to_string(line_no) +
                            ": invalid JSON: " + e.what());
    }
    fn(line_no, value);
  }
}

InputFile::InputFile(const std::string& path) : path_(path) {
  if (path == "-") {
    in_ = &std::cin;
    return;
  }
  file_ = std::make_unique<std::ifstream>(path, std::ios::binary);
  if (!*file_) throw IoError("cannot open " + path + " for reading");
  in_ = file_.get();
}

OutputFile::OutputFile(const std::string& path) : path_(path) {
  if (path == "-") {
    out_ = &std::cout;
    return;
  }
  file_ = std::make_unique<std::ofstream>(path, std::ios::binary | std::ios::trunc);
  if (!*file_) throw IoError("cannot open " + path + " for writing");
  out_ = file_.get();
}

OutputFile::~OutputFile() {
  if (out_) out_->flush();
}

void OutputFile::close() {
  out_->flush();
  if (!*out_) throw IoError("write to " + path_ + " failed");
  if (file_) file_->close();
}

}  // namespace absa
