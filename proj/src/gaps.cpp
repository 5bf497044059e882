#include "contracts/gaps.hpp"

#include <cstdio>
#include <iomanip>
#include <sstream>

#include "contracts/errors.hpp"

namespace contracts {
namespace {

constexpr const char* kNames[GapsReport::kCount] = {"welfare", "type_aware", "menu",
                                                    "single", "linear"};

std::string format_double(double value) {
  char buffer[64];
  std::snprintf(buffer, sizeof(buffer), "%.17g", value);
  return buffer;
}

std::string cell_text(const GapsCell& cell, int digits) {
  switch (cell.kind) {
    case GapsCell::Infinite:
      return "inf";
    case GapsCell::Undefined:
      return "undef";
    case GapsCell::Finite:
      break;
  }
  return to_decimal_string(cell.value, digits);
}

}  // namespace

const char* GapsReport::name(int index) {
  if (index < 0 || index >= kCount) throw InternalError("benchmark index out of range");
  return kNames[index];
}

GapsReport gaps_table(const Instance& instance, const SolveOptions& options) {
  GapsReport report;
  report.values[0] = welfare(instance).value;
  report.values[1] = opt_typeaware(instance, options).value;
  report.values[2] = opt_menu(instance, options).value;
  report.values[3] = opt_single(instance, options).value;
  report.values[4] = opt_linear(instance).value;
  report.log_gap_multiplicity =
      instance.actions >= 2 ? cost_gap_statistic(instance).log_multiplicity_sum : 0.0;
  for (int i = 0; i < GapsReport::kCount; ++i) {
    for (int j = 0; j < GapsReport::kCount; ++j) {
      GapsCell& cell = report.ratios[i][j];
      if (report.values[j] == 0) {
        cell.kind = report.values[i] == 0 ? GapsCell::Undefined : GapsCell::Infinite;
      } else {
        cell.kind = GapsCell::Finite;
        cell.value = report.values[i] / report.values[j];
      }
    }
  }
  return report;
}

std::string to_text(const GapsReport& report) {
  std::ostringstream out;
  out << "benchmark values:\n";
  for (int i = 0; i < GapsReport::kCount; ++i) {
    out << "  " << std::left << std::setw(11) << GapsReport::name(i) << " = "
        << to_fraction_string(report.values[i]) << "  (~"
        << to_decimal_string(report.values[i]) << ")\n";
  }
  out << "cost gap dispersion (sum of ln multiplicity): "
      << format_double(report.log_gap_multiplicity) << "\n";
  out << "ratio grid (row / column):\n";
  out << "  " << std::left << std::setw(11) << "";
  for (int j = 0; j < GapsReport::kCount; ++j) {
    out << std::right << std::setw(12) << GapsReport::name(j);
  }
  out << "\n";
  for (int i = 0; i < GapsReport::kCount; ++i) {
    out << "  " << std::left << std::setw(11) << GapsReport::name(i);
    for (int j = 0; j < GapsReport::kCount; ++j) {
      out << std::right << std::setw(12) << cell_text(report.ratios[i][j], 6);
    }
    out << "\n";
  }
  return out.str();
}

std::string to_csv(const GapsReport& report) {
  std::ostringstream out;
  out << "quantity,exact,decimal\n";
  for (int i = 0; i < GapsReport::kCount; ++i) {
    out << GapsReport::name(i) << "," << to_fraction_string(report.values[i]) << ","
        << to_decimal_string(report.values[i]) << "\n";
  }
  out << "log_gap_multiplicity,," << format_double(report.log_gap_multiplicity) << "\n";
  for (int i = 0; i < GapsReport::kCount; ++i) {
    for (int j = 0; j < GapsReport::kCount; ++j) {
      const GapsCell& cell = report.ratios[i][j];
      out << "ratio_" << GapsReport::name(i) << "_" << GapsReport::name(j) << ",";
      switch (cell.kind) {
        case GapsCell::Infinite:
          out << "inf,inf";
          break;
        case GapsCell::Undefined:
          out << "undefined,undefined";
          break;
        case GapsCell::Finite:
          out << to_fraction_string(cell.value) << "," << to_decimal_string(cell.value);
          break;
      }
      out << "\n";
    }
  }
  return out.str();
}

}  // namespace contracts
