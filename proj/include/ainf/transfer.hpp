#pragma once

#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "ainf/contraction.hpp"
#include "ainf/dgalg.hpp"

namespace ainf {

struct TransferOptions {
    std::size_t max_arity = 8;
    /// When set, only classes of cohomological degree >= 1 are inputs and m_{max_arity}
    /// is computed on every tuple whose output has cohomological degree <= window_top
    /// (see TupleWindow). The algebra must then reach homological degree
    /// -(window_top + max_arity).
    std::optional<int> window_top;
    bool gap_search = true;
    /// Cycles taken first as homology representatives (see homology_contraction).
    std::vector<PreferredCycle> representatives;
};

/// Kadeishvili transfer in progress. In the contraction of A onto H, g is the
/// cycle chooser ι = f_1, f the projection π and phi the homotopy h.
struct TransferState {
    std::shared_ptr<const DGAlgebra> algebra;
    HomologyContraction homology;
    AInfinityStructure structure;   // m_n on H, m_1 = 0
    AInfinityMorphism morphism;     // f_n : H^{⊗n} -> A
    std::size_t frontier = 2;       // next arity to build
    std::size_t max_arity = 8;
};

/// Runs homology_contraction and builds m_1 = 0, f_1 = ι, and arity 2
/// (m_2([x],[y]) = (-1)^{|x|+1}[xy], f_2 = -h(U_2)). Frontier is 3 afterwards.
/// Throws InvariantViolation when the algebra fails check_dga, and
/// std::invalid_argument when a window lacks the required degree slack.
TransferState begin_transfer(std::shared_ptr<const DGAlgebra> a, const TransferOptions& options);

/// U_n = Σ_{i=1}^{n-1} m^A_2(f_i ⊗ f_{n-i})
///     - Σ_{s=2}^{n-1} Σ_r (-1)^{Σ_{l<=r}(|x_l|+1)} f_{n-s+1}(1^r ⊗ m_s ⊗ 1^{n-r-s})
/// on admitted tuples, with m^A_2(a,b) = (-1)^{|a|+1} ab. Defined for 2 <= n <= frontier;
/// throws std::invalid_argument otherwise.
MultilinearMap u_map(const TransferState& st, std::size_t n);

/// Builds arity n = frontier: m_n = π(U_n) and f_n = h(ι m_n - U_n) = -h(U_n), so that
/// ∂ f_n = ι m_n - U_n. Throws InvariantViolation if some U_n(tuple) is not a cycle.
TransferState extend_step(const TransferState& st);

/// ∂ f_n + U_n - ι m_n on admitted tuples; identically zero for a correct state.
MultilinearMap morphism_defect(const TransferState& st, std::size_t n);

/// True iff the stored m_k and f_k are identically zero for q <= k <= 2q - 2.
/// Throws std::invalid_argument when q < 2 or the certified arity is below 2q - 2.
bool gap_check(const TransferState& st, std::size_t q);

struct TransferResult {
    TransferState state;
    bool complete = false;
    std::optional<std::size_t> gap_q;
};

/// begin_transfer, then extend_step up to max_arity; with gap search, stops at the
/// first arity where gap_check holds for some q (the smallest such q is reported).
TransferResult transfer_full(std::shared_ptr<const DGAlgebra> a, const TransferOptions& options);

/// A candidate central class z of even degree with a k[z]-basis of the homology window.
struct CentralElement {
    BasisRef z;
    /// Cycle representing z; the chosen representative ι(z) when empty.
    std::optional<Chain> z_chain;
    std::vector<BasisRef> basis;
};

struct KzExtension {
    AInfinityStructure structure;
    /// Admitted tuples on which the extension differs from the directly transferred value.
    std::vector<std::string> overlap_mismatches;
    bool overlap_ok() const { return overlap_mismatches.empty(); }
};

/// Checks that z is non-torsion on the window, that {z^j b_i} is a basis of every
/// window degree, and that z_chain commutes with every stored f_k value on tuples of
/// basis elements; then defines m_n by k[z]-linear extension of those basis-tuple
/// values, m_n(.., z^j b, ..) = z^j m_n(.., b, ..), and compares with the direct values.
/// Throws TorsionFailure, FreenessFailure or CommutativityFailure naming the witness.
KzExtension kz_extend(const TransferState& st, const CentralElement& z);

}  // namespace ainf
