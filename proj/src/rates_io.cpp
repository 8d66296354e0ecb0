#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include "fracbd/errors.hpp"
#include "fracbd/model.hpp"

namespace fracbd {

namespace {

std::string trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string::npos) return {};
  const auto e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

std::vector<std::string> split(const std::string& line) {
  std::vector<std::string> out;
  std::stringstream ss(line);
  std::string cell;
  while (std::getline(ss, cell, ',')) out.push_back(trim(cell));
  return out;
}

double to_number(const std::string& cell, std::size_t line_no) {
  try {
    std::size_t used = 0;
    const double v = std::stod(cell, &used);
    if (used != cell.size()) throw std::invalid_argument(cell);
    return v;
  } catch (const std::exception&) {
    throw DomainError("rates csv line " + std::to_string(line_no) + ": bad number '" + cell + "'");
  }
}

}  // namespace

RateSchedule parse_rates_csv(const std::string& text) {
  std::istringstream in(text);
  std::string line;
  std::size_t line_no = 0;
  bool header_seen = false;
  std::vector<double> birth;
  std::vector<double> death;
  while (std::getline(in, line)) {
    ++line_no;
    line = trim(line);
    if (line.empty() || line[0] == '#') continue;
    const auto cells = split(line);
    if (!header_seen) {
      if (cells != std::vector<std::string>{"i", "birth", "death"}) {
        throw DomainError("rates csv: header must be 'i,birth,death'");
      }
      header_seen = true;
      continue;
    }
    if (cells.size() != 3) {
      throw DomainError("rates csv line " + std::to_string(line_no) + ": expected 3 columns");
    }
    const double idx = to_number(cells[0], line_no);
    if (idx != static_cast<double>(birth.size())) {
      throw DomainError("rates csv line " + std::to_string(line_no) +
                        ": indices must start at 0 and be consecutive");
    }
    birth.push_back(to_number(cells[1], line_no));
    death.push_back(to_number(cells[2], line_no));
  }
  if (!header_seen) throw DomainError("rates csv: empty input");
  return RateSchedule::table(std::move(birth), std::move(death));
}

RateSchedule load_rates_csv(const std::filesystem::path& path) {
  std::ifstream f(path);
  if (!f) throw DomainError("cannot open rates file " + path.string());
  std::stringstream buf;
  buf << f.rdbuf();
  return parse_rates_csv(buf.str());
}

}  // namespace fracbd
