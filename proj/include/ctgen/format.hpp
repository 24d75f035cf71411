#pragma once

#include <string>
#include <vector>

#include "ctgen/multigraph.hpp"

namespace ctgen {

/// One table per block, rows as comma lists, blocks separated by a blank
/// line.
std::string tables_csv(const std::vector<Matrix>& tables);

/// {"format":1,"tables":[[[...]]...]}
std::string tables_json(const std::vector<Matrix>& tables);

/// Upper-triangular adjacency rows (row i lists cells i+1..n-1), one
/// graph per block.
std::string multigraphs_csv(const std::vector<Matrix>& adjacency);

/// {"format":1,"graphs":[{"n":..,"edges":[[a,b,k],...]}...]}
std::string multigraphs_json(const std::vector<Matrix>& adjacency);

}  // namespace ctgen
