#pragma once

#include <vector>

#include "mdsc/patterns.hpp"

namespace testutil {

// Reference dominant-stratum pattern multipliers of the two-cycle configurations.
inline const std::vector<mdsc::PatternCensusRow>& census_table() {
    using mdsc::ConcatKind;
    static const std::vector<mdsc::PatternCensusRow> rows = {
        {ConcatKind::c66, 8, 3, 3, 9},      {ConcatKind::c66, 9, 3, 4, 72},     {ConcatKind::c66, 10, 4, 3, 36},
        {ConcatKind::c66, 10, 4, 4, 288},   {ConcatKind::c68, 10, 4, 4, 576},   {ConcatKind::c68, 11, 4, 3, 144},
        {ConcatKind::c68, 11, 4, 4, 2880},  {ConcatKind::c68, 12, 4, 4, 1152},  {ConcatKind::c68, 12, 5, 3, 360},
        {ConcatKind::c68, 12, 5, 4, 11520}, {ConcatKind::c88, 12, 4, 3, 198},   {ConcatKind::c88, 12, 4, 4, 2952},
        {ConcatKind::c88, 12, 5, 3, 1080},  {ConcatKind::c88, 12, 5, 4, 10080}, {ConcatKind::c88, 13, 4, 4, 1728},
        {ConcatKind::c88, 13, 5, 3, 2520},  {ConcatKind::c88, 13, 5, 4, 53280}, {ConcatKind::c88, 14, 4, 4, 864},
        {ConcatKind::c88, 14, 5, 4, 17280}, {ConcatKind::c88, 14, 6, 3, 5400},  {ConcatKind::c88, 14, 6, 4, 120960},
    };
    return rows;
}

}  // namespace testutil
