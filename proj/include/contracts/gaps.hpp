#ifndef CONTRACTS_GAPS_HPP
#define CONTRACTS_GAPS_HPP

#include <array>
#include <string>

#include "contracts/benchmarks.hpp"
#include "contracts/instance.hpp"

namespace contracts {

/// One entry of the pairwise benchmark ratio grid.
struct GapsCell {
  enum Kind { Finite, Infinite, Undefined } kind = Finite;
  Rat value;  // meaningful only when kind == Finite
};

/// All five benchmark values of an instance side by side, the dispersion of
/// its cost gaps, and every pairwise ratio row / column.  Values are ordered
/// by strength: welfare >= type_aware >= menu >= single >= linear.
struct GapsReport {
  static constexpr int kCount = 5;
  static const char* name(int index);

  std::array<Rat, kCount> values{};
  /// Sum of ln(multiplicity) over the distinct cost gap values (0 when the
  /// instance has a single action and therefore no gaps).
  double log_gap_multiplicity = 0.0;
  std::array<std::array<GapsCell, kCount>, kCount> ratios{};
};

/// Solves all five benchmarks exactly and fills the report.
GapsReport gaps_table(const Instance& instance, const SolveOptions& options = {});

/// Human-readable rendering: exact fractions with decimal approximations and
/// a compact ratio grid ("inf" for x/0 with x > 0, "undef" for 0/0).
std::string to_text(const GapsReport& report);

/// Machine-readable rendering: "quantity,exact,decimal" rows for the values
/// and the gap statistic, then one "ratio_<row>_<column>" row per cell.
std::string to_csv(const GapsReport& report);

}  // namespace contracts

#endif  // CONTRACTS_GAPS_HPP
