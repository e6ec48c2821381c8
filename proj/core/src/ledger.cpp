#include "nemato/ledger.hpp"

#include <cstdio>
#include <fstream>
#include <istream>
#include <ostream>
#include <sstream>
#include <stdexcept>

namespace nemato {

const char* const kLedgerHeader =
    "t,elastic,nematic,loads,total,dissipation_step,variation,power,aux_power,min_det";

namespace {
std::array<double, 10> row_of(const StepRecord& s) {
  return {s.t,
          s.energy.elastic.value_or(1e300),
          s.energy.nematic.value_or(1e300),
          s.energy.loads,
          s.energy.total().value_or(1e300),
          s.step_dissipation,
          s.variation,
          s.power,
          s.aux_power,
          s.min_det};
}
}  // namespace

void write_ledger(const Trajectory& tr, std::ostream& os) {
  os << kLedgerHeader << "\n";
  char buf[64];
  for (const auto& step : tr.steps) {
    const auto row = row_of(step);
    for (size_t i = 0; i < row.size(); ++i) {
      std::snprintf(buf, sizeof buf, "%.17g", row[i]);
      os << buf << (i + 1 < row.size() ? "," : "\n");
    }
  }
}

void write_ledger_file(const Trajectory& tr, const std::string& path) {
  std::ofstream os(path, std::ios::binary);  // binary: LF endings everywhere
  if (!os) throw std::runtime_error("write_ledger: cannot open " + path);
  write_ledger(tr, os);
}

std::vector<std::array<double, 10>> read_ledger(std::istream& is) {
  std::vector<std::array<double, 10>> rows;
  std::string line;
  if (!std::getline(is, line)) throw std::runtime_error("read_ledger: empty stream");
  if (line != kLedgerHeader) throw std::runtime_error("read_ledger: unexpected header");
  while (std::getline(is, line)) {
    if (line.empty()) continue;
    std::array<double, 10> row{};
    std::istringstream ls(line);
    std::string cell;
    for (size_t i = 0; i < row.size(); ++i) {
      if (!std::getline(ls, cell, ',')) throw std::runtime_error("read_ledger: short row");
      row[i] = std::strtod(cell.c_str(), nullptr);
    }
    rows.push_back(row);
  }
  return rows;
}

}  // namespace nemato
