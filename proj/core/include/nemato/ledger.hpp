#pragma once

#include <array>
#include <iosfwd>
#include <string>
#include <vector>

#include "nemato/solver.hpp"

namespace nemato {

// One CSV row per step:
//   t, elastic, nematic, loads, total, dissipation_step, variation, power,
//   aux_power, min_det
// LF line endings, 17-significant-digit floats; byte-stable for a fixed
// config and seed.
extern const char* const kLedgerHeader;

void write_ledger(const Trajectory& tr, std::ostream& os);
void write_ledger_file(const Trajectory& tr, const std::string& path);

// Reads back a ledger written by write_ledger (used by round-trip checks).
std::vector<std::array<double, 10>> read_ledger(std::istream& is);

}  // namespace nemato
