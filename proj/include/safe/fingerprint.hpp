#pragma once

#include <cstdint>
#include <vector>

#include "safe/molecule.hpp"

namespace safe {

class Fingerprint {
 public:
  explicit Fingerprint(std::size_t width = 2048, int radius = 2);

  std::size_t width() const { return width_; }
  int radius() const { return radius_; }
  bool test(std::size_t bit) const { return (words_[bit / 64] >> (bit % 64)) & 1U; }
  void set(std::size_t bit) { words_[bit / 64] |= std::uint64_t{1} << (bit % 64); }
  std::size_t count() const;
  std::vector<std::size_t> on_bits() const;
  const std::vector<std::uint64_t>& words() const { return words_; }

  bool operator==(const Fingerprint& other) const = default;

 private:
  std::size_t width_;
  int radius_;
  std::vector<std::uint64_t> words_;
};

std::uint64_t fnv1a64(const void* data, std::size_t size,
                      std::uint64_t seed = 0xcbf29ce484222325ULL);

// Morgan-style circular fingerprint: each atom's environment identifier at
// radius 0..radius is hashed (FNV-1a) and folded into the bit vector.
Fingerprint circular_fingerprint(const MolecularGraph& mol, int radius = 2,
                                 std::size_t width = 2048);

// |a & b| / |a | b|, 1.0 when both are empty.
double tanimoto(const Fingerprint& a, const Fingerprint& b);

}  // namespace safe
