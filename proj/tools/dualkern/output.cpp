#include "output.hpp"

#include "dualkern/error.hpp"

namespace dkcli {

Output::Output(const std::string& path) : path_(path) {
  if (path.empty() || path == "-") return;
  file_.emplace(path, std::ios::binary | std::ios::trunc);
  if (!*file_) throw dualkern::InvalidArgument("cannot write '" + path + "'");
}

void Output::close() {
  if (file_) {
    file_->close();
    if (!*file_) throw std::runtime_error("failed writing '" + path_ + "'");
  } else {
    std::cout.flush();
  }
}

void write_text_file(const std::string& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw dualkern::InvalidArgument("cannot write '" + path + "'");
  out << text;
  if (!out) throw std::runtime_error("failed writing '" + path + "'");
}

}  // namespace dkcli
