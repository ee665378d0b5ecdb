#pragma once

#include <fstream>
#include <random>
#include <string>
#include <vector>

#include "safe/molecule.hpp"

namespace testutil {

inline std::vector<std::string> corpus() {
  std::ifstream in(std::string(SAFE_DATA_DIR) + "/corpus.smi");
  std::vector<std::string> lines;
  std::string line;
  while (std::getline(in, line)) {
    if (!line.empty() && line[0] != '#') lines.push_back(line);
  }
  return lines;
}

inline safe::MolecularGraph shuffled(const safe::MolecularGraph& mol, std::mt19937_64& rng) {
  std::vector<int> order(mol.size());
  for (std::size_t i = 0; i < order.size(); ++i) order[i] = static_cast<int>(i);
  std::shuffle(order.begin(), order.end(), rng);
  return safe::permute_atoms(mol, order);
}

}  // namespace testutil
