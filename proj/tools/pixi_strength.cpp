// pixi-strength: strength reports for a file of passwords, one per line.
#include <fstream>
#include <iostream>
#include <sstream>

#include "CLI11.hpp"
#include "pixi/common/error.hpp"
#include "pixi/strength/strength.hpp"

int main(int argc, char** argv) {
  CLI::App app{"Estimate password strength (zxcvbn-style) and keyword usage"};
  std::string password_file;
  std::string keywords_arg;
  bool as_json = false;
  bool keyword_dictionary = false;
  app.add_option("--password-file", password_file, "One password per line")->required();
  app.add_option("--keywords", keywords_arg, "Comma-separated keywords (at most 3)");
  app.add_flag("--json", as_json, "Emit one JSON report per line");
  app.add_flag("--keyword-dictionary", keyword_dictionary,
               "Also treat the keywords as rank-1 dictionary words");
  CLI11_PARSE(app, argc, argv);

  std::vector<std::string> keywords;
  {
    std::stringstream ss(keywords_arg);
    std::string k;
    while (std::getline(ss, k, ',')) {
      if (!k.empty()) keywords.push_back(k);
    }
  }
  if (keywords.size() > 3) {
    std::cerr << "at most 3 keywords\n";
    return 2;
  }

  std::ifstream in(password_file);
  if (!in) {
    std::cerr << "cannot open " << password_file << "\n";
    return 1;
  }
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    try {
      const auto report = pixi::strength::estimate_guesses(
          line, keyword_dictionary ? std::span<const std::string>(keywords) : std::span<const std::string>{});
      const auto cls = pixi::strength::classify_log10(report.log10_guesses);
      const auto usage = pixi::strength::detect_keyword_usage(line, keywords);
      if (as_json) {
        auto j = pixi::strength::to_json(report);
        j["line"] = line_no;
        j["class"] = pixi::strength::to_string(cls);
        if (!keywords.empty()) {
          nlohmann::ordered_json flags = nlohmann::ordered_json::object();
          for (std::size_t k = 0; k < keywords.size(); ++k) {
            flags[keywords[k]] = pixi::strength::to_string(usage.flags[k]);
          }
          j["keyword_usage"] = {{"flags", flags}, {"any_used", usage.any_used}};
        }
        std::cout << j.dump() << "\n";
      } else {
        std::cout << line_no << "\tscore=" << report.score << "\tlog10=" << report.log10_guesses
                  << "\t" << pixi::strength::to_string(cls)
                  << (keywords.empty() ? "" : usage.any_used ? "\tkeywords" : "\tno-keywords") << "\n";
      }
    } catch (const pixi::Error& e) {
      std::cerr << "line " << line_no << ": " << e.what() << "\n";
      return 1;
    }
  }
  return 0;
}
