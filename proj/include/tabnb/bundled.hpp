#pragma once

#include <string_view>

#include "tabnb/grid.hpp"
#include "tabnb/model.hpp"
#include "tabnb/schema.hpp"

namespace tabnb::bundled {

// Training counts of the replicated study: 40 rows covering the medium,
// caste and stream blocks (grand totals 590/600/600 in schema order).
std::string_view table1_csv();

// The study's published 30-row prediction grid, transcribed verbatim.
std::string_view table2_reference_csv();

MarginalTableSet table1();
ReferenceGrid table2_reference();

// reference:stream with alpha 0 — the configuration that reproduces the
// published grid from the published counts.
ClassTotalsPolicy replication_policy();
NBModel replication_model();

}  // namespace tabnb::bundled
