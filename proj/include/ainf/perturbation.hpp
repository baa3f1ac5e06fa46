#pragma once

#include <cstddef>
#include <optional>

#include "ainf/contraction.hpp"
#include "ainf/dgalg.hpp"

namespace ainf {

/// A perturbation δ (shift -1) of the big differential of a contraction.
struct Perturbation {
    ChainMap delta;
    /// Largest power of φδ allowed to be nonzero on a basis element; defaults to
    /// the number of degrees of the big complex.
    std::optional<std::size_t> nil_bound;
};

/// Passes iff (∂ + δ)^2 = 0 and (φδ)^n kills every basis element for some n <= nil bound.
CheckResult check_perturbation(const Contraction& c, const Perturbation& p);

struct BplResult {
    /// Contraction of (N, ∂ + δ) onto (M, ∂_M + ∂_δ).
    Contraction contraction;
    /// ∂_δ = f δ Σ (-1)^i (φδ)^i g, as a map M -> M of shift -1.
    ChainMap small_delta;
};

/// Basic perturbation lemma, with S = Σ_{i>=0} (-1)^i (φδ)^i evaluated per basis element:
/// g_δ = S g, φ_δ = S φ, f_δ = f (1 - δ S φ), ∂_δ = f δ S g.
/// Throws InvariantViolation when the contraction fails check_contraction or
/// (∂ + δ)^2 != 0, and NilpotenceExceeded when a series does not stop in time.
BplResult bpl(const Contraction& c, const Perturbation& p);

/// Transfers a dg-coalgebra structure on c.big through the contraction onto c.small,
/// returning Δ_1 = ∂_M and
///   Δ_i = (-1)^{[i/2]+i+1} f^{⊗i} Δ^{[i]} φ^{[⊗(i-1)]} ... φ^{[⊗2]} Δ^{[2]} g,
/// Δ^{[k]} = Σ_r (-1)^r 1^{⊗r} ⊗ Δ ⊗ 1^{⊗(k-r-2)}, φ^{[⊗k]} = Σ_j (gf)^{⊗j} ⊗ φ ⊗ 1^{⊗(k-j-1)}
/// (Koszul signs when φ passes the first j factors), for 2 <= i <= max_arity.
/// Computed as the perturbed differential f δ Σ (-1)^j (φ^⊗ δ)^j g on the tensor module
/// of the desuspension, where δ is Δ extended as a derivation and φ^⊗ extends φ as
/// above; its component M -> M^{⊗i} is the derivation form of Δ_i (see coalgebra_term_sign).
/// Throws InvariantViolation when c fails check_contraction or the coalgebra fails check_dgc.
AInfinityStructure tensor_trick(const DGCoalgebra& coalgebra, const Contraction& c, std::size_t max_arity);

}  // namespace ainf
