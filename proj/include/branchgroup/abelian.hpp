#pragma once

#include <vector>

#include "group.hpp"

namespace branchgroup {

/// Image in the abelianization, an exponent vector mod `modulus`.
struct AbelianImage {
  std::vector<int> coords;
  int modulus = 0;

  bool is_zero() const {
    for (int c : coords)
      if (c != 0)
        return false;
    return true;
  }

  AbelianImage operator+(const AbelianImage &o) const {
    AbelianImage r = *this;
    for (std::size_t i = 0; i < coords.size(); ++i)
      r.coords[i] = mod_floor(coords[i] + o.coords[i], modulus);
    return r;
  }

  friend bool operator==(const AbelianImage &, const AbelianImage &) = default;
};

/// Gupta-Sidki groups: (a-exponent sum, b-exponent sum) mod p. Grigorchuk
/// group: (e_a, e_b + e_d, e_c + e_d) mod 2, using d = bc in the abelianization.
inline AbelianImage abelianization_image(const Group &group, const Word &g) {
  const GroupPreset &preset = group.preset();
  AbelianImage image;
  if (preset.is_gupta_sidki()) {
    image.modulus = preset.degree;
    image.coords = {0, 0};
    for (const Letter &l : g.letters())
      image.coords[l.symbol] = mod_floor(image.coords[l.symbol] + l.exponent, image.modulus);
    return image;
  }
  if (preset.is_grigorchuk()) {
    image.modulus = 2;
    image.coords = {0, 0, 0};
    for (const Letter &l : g.letters()) {
      const int e = l.exponent;
      switch (l.symbol) {
      case 0: image.coords[0] += e; break;
      case 1: image.coords[1] += e; break;
      case 2: image.coords[2] += e; break;
      default: image.coords[1] += e; image.coords[2] += e; break;
      }
    }
    for (int &c : image.coords)
      c = mod_floor(c, 2);
    return image;
  }
  throw Error("no abelianization map for preset '" + preset.name + "'");
}

/// Exact test for membership in the derived subgroup.
inline bool in_derived_subgroup_image(const Group &group, const Word &g) {
  return abelianization_image(group, g).is_zero();
}

} // namespace branchgroup
