#pragma once

#include <fstream>
#include <iostream>
#include <optional>
#include <string>

namespace dkcli {

/// stdout, or a file opened in binary mode so bytes are identical on every platform.
class Output {
 public:
  explicit Output(const std::string& path);

  std::ostream& stream() { return file_ ? *file_ : std::cout; }
  bool to_file() const noexcept { return file_.has_value(); }
  void close();

 private:
  std::string path_;
  std::optional<std::ofstream> file_;
};

void write_text_file(const std::string& path, const std::string& text);

}  // namespace dkcli
