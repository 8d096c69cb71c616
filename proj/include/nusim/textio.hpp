#pragma once

#include <iosfwd>
#include <string>

#include "nusim/codebook.hpp"
#include "nusim/prob.hpp"
#include "nusim/seeded.hpp"

namespace nusim {

// Plain-text tabular formats. Values are printed with enough digits to
// round-trip doubles exactly.
//
// pmf:      one header line of symbols, one line of probabilities
// channel:  "in:" and "out:" symbol lines, then one probability row per input
// joint:    one "var:" symbol line per variable, then dim(0) rows of dim(1)
//           values (three-variable joints emit one row block per first index,
//           separated by blank lines)
// codebook: one line per word: row col symbols...
// emulator: one line per (condition, seed): condition seed output

void write_pmf(std::ostream& os, const Pmf& p);
Pmf read_pmf(std::istream& is);

void write_channel(std::ostream& os, const Channel& ch);
Channel read_channel(std::istream& is);

void write_joint(std::ostream& os, const JointPmf& j);
JointPmf read_joint(std::istream& is);

void write_codebook(std::ostream& os, const Codebook& cb);

void write_emulator(std::ostream& os, const ConditionalEmulator& em);

std::string format_real(Real v);  // shortest exact round-trip decimal

}  // namespace nusim
