#pragma once

#include <map>
#include <string>
#include <vector>

#include "cscoh/operators.hpp"

namespace cscoh {

enum class Flavor { Dolbeault, DbarLambda, BottChern, Aeppli };

inline const std::vector<Flavor>& all_flavors() {
  static const std::vector<Flavor> v{Flavor::Dolbeault, Flavor::DbarLambda,
                                     Flavor::BottChern, Flavor::Aeppli};
  return v;
}

inline std::string flavor_name(Flavor f) {
  switch (f) {
    case Flavor::Dolbeault: return "dolbeault";
    case Flavor::DbarLambda: return "dbar-lambda";
    case Flavor::BottChern: return "bott-chern";
    default: return "aeppli";
  }
}

struct CohomCell {
  Subspace numerator, denominator;  // in the coordinates of A^{p,q}
  std::size_t dim = 0;
  std::vector<Form> reps;
  Subspace harmonic;
  std::vector<Form> harmonic_basis;
};

struct CohomologyTable {
  int n = 0;
  std::map<Flavor, std::map<Bidegree, CohomCell>> cells;
  std::map<int, std::size_t> hd_dims;  // total D-cohomology, k in [-n, n]

  const CohomCell& cell(Flavor f, Bidegree bd) const { return cells.at(f).at(bd); }
  std::size_t dim(Flavor f, Bidegree bd) const {
    if (!bd.valid(n)) return 0;
    return cells.at(f).at(bd).dim;
  }
};

// Numerator and denominator of one cohomology flavor at one bidegree,
// straight from the defining quotients.
inline std::pair<Subspace, Subspace> quotient_parts(Flavor f, const ComplexInstance& inst,
                                                    const Sl2Data& s, Bidegree bd) {
  const OperatorFamily& d = inst.dbar;
  const OperatorFamily& dl = s.dbar_lambda;
  switch (f) {
    case Flavor::Dolbeault:
      return {kernel(d.block(bd)), image(d.block({bd.p, bd.q - 1}))};
    case Flavor::DbarLambda:
      return {kernel(dl.block(bd)), image(dl.block({bd.p + 1, bd.q}))};
    case Flavor::BottChern: {
      Subspace num = subspace_intersect(kernel(d.block(bd)), kernel(dl.block(bd)));
      Subspace den = image(compose(d, dl).block({bd.p + 1, bd.q - 1}));
      return {std::move(num), std::move(den)};
    }
    default: {  // Aeppli
      Subspace num = kernel(compose(d, dl).block(bd));
      Subspace den =
          subspace_sum(image(dl.block({bd.p + 1, bd.q})), image(d.block({bd.p, bd.q - 1})));
      return {std::move(num), std::move(den)};
    }
  }
}

inline const OperatorFamily& laplacian_of(Flavor f, const Laplacians& laps) {
  switch (f) {
    case Flavor::Dolbeault: return laps.box_dbar;
    case Flavor::DbarLambda: return laps.box_dbar_lambda;
    case Flavor::BottChern: return laps.delta_bc;
    default: return laps.delta_a;
  }
}

// Kernel characterization of the harmonic space, independent of the Laplacian
// matrix itself.
inline Subspace harmonic_characterization(Flavor f, const ComplexInstance& inst,
                                          const Sl2Data& s, const Laplacians& laps,
                                          Bidegree bd) {
  const OperatorFamily& d = inst.dbar;
  const OperatorFamily& dl = s.dbar_lambda;
  const OperatorFamily& ds = laps.dbar_adj;
  const OperatorFamily& dls = laps.dbar_lambda_adj;
  switch (f) {
    case Flavor::Dolbeault:
      return subspace_intersect(kernel(d.block(bd)), kernel(ds.block(bd)));
    case Flavor::DbarLambda:
      return subspace_intersect(kernel(dl.block(bd)), kernel(dls.block(bd)));
    case Flavor::BottChern:
      return subspace_intersect(
          subspace_intersect(kernel(d.block(bd)), kernel(dl.block(bd))),
          kernel(compose(dls, ds).block(bd)));
    default:
      return subspace_intersect(
          subspace_intersect(kernel(compose(d, dl).block(bd)), kernel(ds.block(bd))),
          kernel(dls.block(bd)));
  }
}

// Both the Laplacian-kernel route and the intersection-of-kernels route; a
// mismatch is an engine inconsistency, never a property of the input.
inline Subspace harmonic_space(Flavor f, const ComplexInstance& inst, const Sl2Data& s,
                               const Laplacians& laps, Bidegree bd) {
  Subspace lap_kernel = kernel(laplacian_of(f, laps).block(bd));
  Subspace chart = harmonic_characterization(f, inst, s, laps, bd);
  if (!(lap_kernel == chart))
    throw EngineError("harmonic space of " + flavor_name(f) + " at (" +
                      std::to_string(bd.p) + "," + std::to_string(bd.q) +
                      "): Laplacian kernel disagrees with its kernel characterization");
  return lap_kernel;
}

namespace detail {

inline std::vector<Form> forms_from_rows(int n, Bidegree bd, const std::vector<Vec>& rows) {
  std::vector<Form> out;
  out.reserve(rows.size());
  for (const auto& v : rows) out.push_back(from_vector(n, v, bd));
  return out;
}

inline std::vector<Form> forms_from_subspace(int n, Bidegree bd, const Subspace& s) {
  std::vector<Vec> rows;
  for (std::size_t k = 0; k < s.dim(); ++k) rows.push_back(s.basis().row(k));
  return forms_from_rows(n, bd, rows);
}

}  // namespace detail

// Anti-diagonal total spaces T^k = direct sum of A^{p,q} with q - p = k, and
// the total differential D = dbar + dbar^Lambda acting T^k -> T^{k+1}.
struct DComplex {
  int n = 0;
  std::map<int, std::vector<Bidegree>> strands;    // k -> bidegrees, ascending p
  std::map<int, std::vector<std::size_t>> offsets;  // per strand, matching order
  std::map<int, std::size_t> dims;
  std::map<int, ExactMatrix> d_blocks;  // D restricted to T^k
};

inline DComplex build_d_complex(const ComplexInstance& inst, const Sl2Data& s) {
  DComplex dc;
  const int n = inst.n();
  dc.n = n;
  for (int k = -n; k <= n; ++k) {
    std::vector<Bidegree> strand;
    for (int p = 0; p <= n; ++p) {
      int q = p + k;
      if (q < 0 || q > n) continue;
      strand.push_back({p, q});
    }
    std::vector<std::size_t> offs;
    std::size_t dim = 0;
    for (Bidegree bd : strand) {
      offs.push_back(dim);
      dim += space_dim(n, bd);
    }
    dc.strands[k] = strand;
    dc.offsets[k] = offs;
    dc.dims[k] = dim;
  }
  for (int k = -n; k < n; ++k) {
    ExactMatrix m(dc.dims.at(k + 1), dc.dims.at(k));
    const auto& src = dc.strands.at(k);
    const auto& src_off = dc.offsets.at(k);
    const auto& tgt = dc.strands.at(k + 1);
    const auto& tgt_off = dc.offsets.at(k + 1);
    auto target_offset = [&](Bidegree bd) -> std::optional<std::size_t> {
      for (std::size_t t = 0; t < tgt.size(); ++t)
        if (tgt[t] == bd) return tgt_off[t];
      return std::nullopt;
    };
    for (std::size_t si = 0; si < src.size(); ++si) {
      Bidegree bd = src[si];
      struct Piece {
        ExactMatrix blk;
        Bidegree to;
      };
      for (const Piece& piece : {Piece{inst.dbar.block(bd), {bd.p, bd.q + 1}},
                                 Piece{s.dbar_lambda.block(bd), {bd.p - 1, bd.q}}}) {
        auto off = target_offset(piece.to);
        if (!off) continue;
        for (std::size_t r = 0; r < piece.blk.rows(); ++r)
          for (std::size_t c = 0; c < piece.blk.cols(); ++c)
            m.at(*off + r, src_off[si] + c) += piece.blk.at(r, c);
      }
    }
    dc.d_blocks.emplace(k, std::move(m));
  }
  return dc;
}

inline std::map<int, std::size_t> d_cohomology(const ComplexInstance& inst,
                                               const Sl2Data& s) {
  DComplex dc = build_d_complex(inst, s);
  const int n = inst.n();
  std::map<int, std::size_t> dims;
  for (int k = -n; k <= n; ++k) {
    Subspace ker_k = (k < n) ? kernel(dc.d_blocks.at(k)) : Subspace::full(dc.dims.at(k));
    Subspace im_k = (k > -n) ? image(dc.d_blocks.at(k - 1)) : Subspace::zero(dc.dims.at(k));
    dims[k] = quotient_dim(ker_k, im_k);
  }
  return dims;
}

// Full table: every flavor through both the quotient and the harmonic route,
// plus the D-complex dimensions, with all structural cross-checks asserted.
inline CohomologyTable compute_table(const ComplexInstance& inst, const Sl2Data& s,
                                     const MetricData& metric, const Laplacians& laps) {
  (void)metric;
  CohomologyTable table;
  const int n = inst.n();
  table.n = n;

  for (Flavor f : all_flavors()) {
    for (Bidegree bd : all_bidegrees(n)) {
      CohomCell cell;
      auto [num, den] = quotient_parts(f, inst, s, bd);
      if (!num.contains(den))
        throw EngineError("denominator of " + flavor_name(f) + " at (" +
                          std::to_string(bd.p) + "," + std::to_string(bd.q) +
                          ") is not contained in its numerator");
      cell.numerator = std::move(num);
      cell.denominator = std::move(den);
      cell.dim = quotient_dim(cell.numerator, cell.denominator);
      cell.reps = detail::forms_from_rows(n, bd,
                                          quotient_basis(cell.numerator, cell.denominator));
      cell.harmonic = harmonic_space(f, inst, s, laps, bd);
      cell.harmonic_basis = detail::forms_from_subspace(n, bd, cell.harmonic);
      if (cell.harmonic.dim() != cell.dim)
        throw EngineError("quotient and harmonic dimensions of " + flavor_name(f) +
                          " differ at (" + std::to_string(bd.p) + "," +
                          std::to_string(bd.q) + ")");
      table.cells[f][bd] = std::move(cell);
    }
  }

  table.hd_dims = d_cohomology(inst, s);
  for (int k = -n; k <= n; ++k) {
    std::size_t sum = 0;
    for (int p = 0; p <= n; ++p) {
      int q = p + k;
      if (q < 0 || q > n) continue;
      sum += table.dim(Flavor::Dolbeault, {p, q});
    }
    if (sum != table.hd_dims.at(k))
      throw EngineError("D-complex dimension at k=" + std::to_string(k) +
                        " disagrees with the Dolbeault anti-diagonal sum");
  }

  for (Bidegree bd : all_bidegrees(n)) {
    std::size_t lhs = table.dim(Flavor::BottChern, bd) + table.dim(Flavor::Aeppli, bd);
    std::size_t rhs = table.dim(Flavor::Dolbeault, bd) + table.dim(Flavor::DbarLambda, bd);
    if (lhs < rhs)
      throw EngineError("Bott-Chern + Aeppli < Dolbeault + dbar-Lambda at (" +
                        std::to_string(bd.p) + "," + std::to_string(bd.q) + ")");
  }

  if (inst.has_conjugation()) {
    for (Bidegree bd : all_bidegrees(n)) {
      Bidegree dual{n - bd.q, n - bd.p};
      if (table.dim(Flavor::DbarLambda, dual) != table.dim(Flavor::Dolbeault, bd))
        throw EngineError("star duality between Dolbeault and dbar-Lambda fails at (" +
                          std::to_string(bd.p) + "," + std::to_string(bd.q) + ")");
    }
  }

  // Representatives are exactly as closed as their flavor requires.
  for (Flavor f : all_flavors()) {
    for (Bidegree bd : all_bidegrees(n)) {
      for (const Form& r : table.cells[f][bd].reps) {
        Vec v = to_vector(r, bd);
        bool ok = true;
        switch (f) {
          case Flavor::Dolbeault: ok = cscoh::is_zero(inst.dbar.block(bd) * v); break;
          case Flavor::DbarLambda: ok = cscoh::is_zero(s.dbar_lambda.block(bd) * v); break;
          case Flavor::BottChern:
            ok = cscoh::is_zero(inst.dbar.block(bd) * v) &&
                 cscoh::is_zero(s.dbar_lambda.block(bd) * v);
            break;
          case Flavor::Aeppli:
            ok = cscoh::is_zero(compose(inst.dbar, s.dbar_lambda).block(bd) * v);
            break;
        }
        if (!ok)
          throw EngineError("representative of " + flavor_name(f) +
                            " fails its closedness condition at (" + std::to_string(bd.p) +
                            "," + std::to_string(bd.q) + ")");
      }
    }
  }

  return table;
}

// Per-operation views matching the module surface.
inline std::map<Bidegree, std::pair<std::size_t, std::vector<Form>>> dolbeault(
    const ComplexInstance& inst) {
  Sl2Data s = build_sl2(inst);
  std::map<Bidegree, std::pair<std::size_t, std::vector<Form>>> out;
  for (Bidegree bd : all_bidegrees(inst.n())) {
    auto [num, den] = quotient_parts(Flavor::Dolbeault, inst, s, bd);
    out[bd] = {quotient_dim(num, den),
               detail::forms_from_rows(inst.n(), bd, quotient_basis(num, den))};
  }
  return out;
}

}  // namespace cscoh
