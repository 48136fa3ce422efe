#pragma once

#include <fstream>
#include <stdexcept>
#include <string>
#include <vector>

namespace pixi::testing {

struct OracleRow {
  std::string password;
  int score = 0;
  double log10_guesses = 0;
};

// Reads tests/fixtures/zxcvbn_oracle.tsv (see tests/oracle/zxcvbn_oracle.py).
inline std::vector<OracleRow> load_zxcvbn_oracle(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open " + path);
  std::vector<OracleRow> rows;
  std::string line;
  while (std::getline(in, line)) {
    if (line.empty() || line[0] == '#') continue;
    const auto a = line.find('\t');
    const auto b = line.find('\t', a + 1);
    rows.push_back({line.substr(0, a), std::stoi(line.substr(a + 1, b - a - 1)),
                    std::stod(line.substr(b + 1))});
  }
  return rows;
}

}  // namespace pixi::testing
