#pragma once

#include <string>
#include <vector>

#include "cscoh/model.hpp"
#include "cscoh/parse.hpp"

namespace cscoh {

struct CatalogEntry {
  std::string name;
  std::string document;    // spec document text, emitted verbatim on request
  std::string provenance;  // construction and expected behavior, one line
  std::vector<std::string> parameters;
};

namespace catalog_detail {

// Kodaira-Thurston surface: nilmanifold quotient of R^4 with
// d phi2 = -(i/2) phi1 ^ conj(phi1) and the real (1,1)-symplectic form
// (1/2)(phi1 ^ conj(phi2) + conj(phi1) ^ phi2). Weights give the canonical
// admissible metric (i/2)(phi1 ^ conj(phi1) + phi2 ^ conj(phi2)).
inline const char* kKodairaThurston = R"([manifold]
name = kodaira-thurston
n = 2
generators_10 = phi1, phi2
generators_01 = phib1, phib2

[dbar]
phi2 = (-1/2*i) * phi1^phib1

[del]
phib2 = (-1/2*i) * phi1^phib1

[omega]
(1/2)*phi1^phib2 + (1/2)*phib1^phi2

[metric]
weights = 2, 2

[conjugation]
phib1 = 1 * phi1
phib2 = 1 * phi2
)";

// The same surface in the frame xi1 = phi1 + i phi2, xi2 = phi1 - i phi2,
// which diagonalizes omega to (i/4)(xi1 ^ conj(xi1) - xi2 ^ conj(xi2)).
// Weights give the canonical admissible metric (i/4)(xi1 conj(xi1) + xi2 conj(xi2)).
inline const char* kKodairaThurstonXi = R"([manifold]
name = kodaira-thurston-xi
n = 2
generators_10 = xi1, xi2
generators_01 = xib1, xib2

[dbar]
xi1 = (1/8)*xi1^xib1 + (1/8)*xi1^xib2 + (1/8)*xi2^xib1 + (1/8)*xi2^xib2
xi2 = (-1/8)*xi1^xib1 - (1/8)*xi1^xib2 - (1/8)*xi2^xib1 - (1/8)*xi2^xib2

[del]
xib1 = (-1/8)*xi1^xib1 - (1/8)*xi1^xib2 - (1/8)*xi2^xib1 - (1/8)*xi2^xib2
xib2 = (1/8)*xi1^xib1 + (1/8)*xi1^xib2 + (1/8)*xi2^xib1 + (1/8)*xi2^xib2

[omega]
(1/4*i)*xi1^xib1 - (1/4*i)*xi2^xib2

[metric]
weights = 4, 4

[conjugation]
xib1 = 1 * xi1
xib2 = 1 * xi2
)";

// Iwasawa threefold: quotient of the complex Heisenberg group with
// d psi3 = -conj(psi1) ^ psi2 and omega = i psi2 conj(psi2) +
// psi1 conj(psi3) - psi3 conj(psi1). Unit weights give the canonical
// admissible metric i(psi1 conj(psi1) + psi2 conj(psi2) + psi3 conj(psi3)).
inline const char* kIwasawa = R"([manifold]
name = iwasawa
n = 3
generators_10 = psi1, psi2, psi3
generators_01 = psib1, psib2, psib3

[dbar]
psi3 = 1 * psi2^psib1

[del]
psib3 = -1 * psi1^psib2

[omega]
(i)*psi2^psib2 + 1*psi1^psib3 - 1*psi3^psib1

[metric]
weights = 1, 1, 1

[conjugation]
psib1 = 1 * psi1
psib2 = 1 * psi2
psib3 = 1 * psi3
)";

// Holomorphically parallelizable Nakamura threefold, deformed: the only
// nonzero rule is dbar Phi3 = 2t Phi1 ^ Phib2, and omega is t-independent.
// The deformed frame has no constant-coefficient conjugation or del data, so
// star cross-checks are skipped here. Weights give the canonical admissible
// metric (i/2) sum Phi_j ^ conj(Phi_j).
inline const char* kNakamura = R"([manifold]
name = nakamura
n = 3
generators_10 = Phi1, Phi2, Phi3
generators_01 = Phib1, Phib2, Phib3

[parameters]
t = 0

[dbar]
Phi3 = (2*t) * Phi1^Phib2

[omega]
(1/2*i)*Phi1^Phib1 + (1/2)*Phib2^Phi3 + (1/2)*Phi2^Phib3

[metric]
weights = 2, 2, 2
)";

}  // namespace catalog_detail

inline const std::vector<CatalogEntry>& catalog_entries() {
  static const std::vector<CatalogEntry> entries = {
      {"kodaira-thurston", catalog_detail::kKodairaThurston,
       "Kodaira-Thurston surface (invariant complex, phi-frame); the "
       "dbar-dbar^Lambda-Lemma fails, Bott-Chern dimensions 1,1,2,1,3,1,1,2,1",
       {}},
      {"kodaira-thurston-xi", catalog_detail::kKodairaThurstonXi,
       "Kodaira-Thurston surface in the omega-diagonalizing frame; same "
       "cohomology tables and verdicts as the phi-frame",
       {}},
      {"iwasawa", catalog_detail::kIwasawa,
       "Iwasawa threefold (complex Heisenberg quotient); Hard Lefschetz fails "
       "at k = 2 and the dbar-dbar^Lambda-Lemma fails",
       {}},
      {"nakamura", catalog_detail::kNakamura,
       "Nakamura threefold deformation family; the dbar-dbar^Lambda-Lemma "
       "holds at t = 0 only, with a non-vanishing Massey triple product for "
       "t != 0",
       {"t"}},
  };
  return entries;
}

inline const CatalogEntry& catalog_find(const std::string& name) {
  for (const auto& e : catalog_entries())
    if (e.name == name) return e;
  throw SpecError("unknown catalog entry '" + name + "'");
}

inline ManifoldSpec catalog_spec(const std::string& name) {
  return parse_spec(catalog_find(name).document);
}

inline ComplexInstance catalog_get(const std::string& name,
                                   const std::map<std::string, Gaussian>& params = {}) {
  ManifoldSpec spec = catalog_spec(name);
  auto assignment = default_assignment(spec);
  for (const auto& [k, v] : params) {
    if (!spec.find_param(k))
      throw SpecError("unknown parameter '" + k + "' for catalog entry '" + name + "'");
    assignment[k] = v;
  }
  return instantiate(spec, assignment);
}

}  // namespace cscoh
