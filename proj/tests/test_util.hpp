#pragma once

#include <fstream>
#include <sstream>
#include <stdexcept>
#include <string>

namespace arrabs::testing {

inline std::string corpus_path(const std::string& name) {
  return std::string(ARRABS_CORPUS_DIR) + "/" + name;
}

inline std::string read_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open " + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

inline std::string corpus(const std::string& name) { return read_file(corpus_path(name)); }

inline const char* const kCorpusPrograms[] = {
    "init.arr",     "matrix_init.arr", "slice_init.arr", "copy.arr",
    "reversal.arr", "sentinel.arr",    "dutch_flag.arr", "zero_test_zero.arr",
};

}  // namespace arrabs::testing
