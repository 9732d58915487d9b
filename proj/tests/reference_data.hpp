#pragma once

// Reference period table for C = R = 600 s, D = 60 s, 125-year units.

#include <array>
#include <cstdint>

namespace ckpt::reference {

struct PeriodTableRow {
  int log2_processors;
  double mtbf;
  double young;
  double daly;
  double rfo;
  double optimal;
};

inline constexpr std::array<PeriodTableRow, 10> kPeriodTable{{
    {10, 3849609, 68567, 68573, 67961, 68240},
    {11, 1924805, 48660, 48668, 48052, 48320},
    {12, 962402, 34584, 34595, 33972, 34189},
    {13, 481201, 24630, 24646, 24014, 24231},
    {14, 240601, 17592, 17615, 16968, 17194},
    {15, 120300, 12615, 12648, 11982, 12218},
    {16, 60150, 9096, 9142, 8449, 8701},
    {17, 30075, 6608, 6673, 5941, 6214},
    {18, 15038, 4848, 4940, 4154, 4458},
    {19, 7519, 3604, 3733, 2869, 3218},
}};

}  // namespace ckpt::reference
