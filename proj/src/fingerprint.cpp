#include "safe/fingerprint.hpp"

#include <algorithm>
#include <bit>

#include "safe/error.hpp"

namespace safe {

Fingerprint::Fingerprint(std::size_t width, int radius)
    : width_(width), radius_(radius), words_((width + 63) / 64, 0) {
  if (width == 0 || !std::has_single_bit(width)) {
    throw SafeError(ErrorCode::kInvalidArgument, "fingerprint width must be a power of two");
  }
  if (radius < 0) throw SafeError(ErrorCode::kInvalidArgument, "negative radius");
}

std::size_t Fingerprint::count() const {
  std::size_t total = 0;
  for (auto w : words_) total += static_cast<std::size_t>(std::popcount(w));
  return total;
}

std::vector<std::size_t> Fingerprint::on_bits() const {
  std::vector<std::size_t> bits;
  for (std::size_t i = 0; i < width_; ++i) {
    if (test(i)) bits.push_back(i);
  }
  return bits;
}

std::uint64_t fnv1a64(const void* data, std::size_t size, std::uint64_t seed) {
  const auto* bytes = static_cast<const unsigned char*>(data);
  std::uint64_t h = seed;
  for (std::size_t i = 0; i < size; ++i) {
    h ^= bytes[i];
    h *= 0x100000001b3ULL;
  }
  return h;
}

namespace {

std::uint64_t hash_ints(const std::vector<std::int64_t>& values) {
  return fnv1a64(values.data(), values.size() * sizeof(std::int64_t));
}

}  // namespace

Fingerprint circular_fingerprint(const MolecularGraph& mol, int radius, std::size_t width) {
  Fingerprint fp(width, radius);
  const int n = static_cast<int>(mol.size());
  std::vector<std::uint64_t> ids(static_cast<std::size_t>(n));
  for (int a = 0; a < n; ++a) {
    const Atom& atom = mol.atom(a);
    ids[a] = hash_ints({0, atom.element, atom.aromatic ? 1 : 0, atom.formal_charge,
                        mol.degree(a), mol.total_h(a), mol.atom_in_ring(a) ? 1 : 0,
                        atom.isotope.value_or(-1)});
    fp.set(ids[a] & (width - 1));
  }
  std::vector<std::uint64_t> next(ids.size());
  for (int r = 1; r <= radius; ++r) {
    for (int a = 0; a < n; ++a) {
      std::vector<std::pair<int, std::uint64_t>> env;
      for (const auto& nb : mol.neighbors(a)) {
        env.emplace_back(static_cast<int>(mol.bond(nb.bond).order), ids[nb.atom]);
      }
      std::sort(env.begin(), env.end());
      std::vector<std::int64_t> tuple{r, static_cast<std::int64_t>(ids[a])};
      for (const auto& [order, id] : env) {
        tuple.push_back(order);
        tuple.push_back(static_cast<std::int64_t>(id));
      }
      next[a] = hash_ints(tuple);
      fp.set(next[a] & (width - 1));
    }
    ids.swap(next);
  }
  return fp;
}

double tanimoto(const Fingerprint& a, const Fingerprint& b) {
  if (a.width() != b.width()) {
    throw SafeError(ErrorCode::kWidthMismatch, "fingerprint widths differ");
  }
  std::size_t both = 0;
  std::size_t either = 0;
  for (std::size_t i = 0; i < a.words().size(); ++i) {
    both += static_cast<std::size_t>(std::popcount(a.words()[i] & b.words()[i]));
    either += static_cast<std::size_t>(std::popcount(a.words()[i] | b.words()[i]));
  }
  if (either == 0) return 1.0;
  return static_cast<double>(both) / static_cast<double>(either);
}

}  // namespace safe
