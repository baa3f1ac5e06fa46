#pragma once

#include <cstddef>
#include <limits>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "ainf/contraction.hpp"
#include "ainf/dgalg.hpp"

namespace ainf {

using Point = std::vector<double>;

struct Simplex {
    std::vector<std::size_t> vertices;  // strictly increasing
    double value = 0;

    int dim() const { return static_cast<int>(vertices.size()) - 1; }
};

/// Simplices with filtration values, kept in declaration order.
class FilteredComplex {
public:
    FilteredComplex() = default;

    /// Sorts the vertices; throws std::invalid_argument on an empty, repeated or
    /// duplicate simplex or a non-finite value.
    void add(std::vector<std::size_t> vertices, double value);

    const std::vector<Simplex>& simplices() const { return simplices_; }
    std::size_t size() const { return simplices_.size(); }
    int max_dim() const;

    /// Declaration indices ordered by (value, dimension, declaration).
    std::vector<std::size_t> filtration_order() const;
    /// Distinct filtration values, increasing.
    std::vector<double> critical_values() const;
    /// Declaration index of a simplex, if present.
    std::optional<std::size_t> find(const std::vector<std::size_t>& vertices) const;

private:
    std::vector<Simplex> simplices_;
    std::map<std::vector<std::size_t>, std::size_t> index_;
};

/// Every face present with a value no larger than the simplex's.
CheckResult check_filtration(const FilteredComplex& f);

/// Vietoris-Rips: a simplex enters at the largest pairwise distance among its
/// vertices; simplices of dimension <= max_dim with value <= max_eps. Throws
/// std::invalid_argument on an empty point set, points of unequal dimension or max_eps <= 0.
FilteredComplex rips(const std::vector<Point>& points, double max_eps, int max_dim);

/// Radius of the smallest ball containing one, two or three points of dimension <= 3.
double enclosing_radius(const std::vector<Point>& points);

/// Čech filtration by smallest enclosing balls, for points of dimension <= 3 and
/// max_dim <= 2; throws std::invalid_argument otherwise.
FilteredComplex cech(const std::vector<Point>& points, double max_eps, int max_dim);

inline constexpr double infinity = std::numeric_limits<double>::infinity();

struct Interval {
    int degree = 0;
    double birth = 0;
    double death = infinity;

    friend bool operator==(const Interval&, const Interval&) = default;
};

/// dim of the Δ_n-persistence group between critical stages i <= j.
struct RankEntry {
    int degree = 0;
    double from = 0;
    double to = 0;
    std::size_t rank = 0;

    friend bool operator==(const RankEntry&, const RankEntry&) = default;
};

enum class DiagramKind { classical, delta };

struct PersistenceDiagram {
    DiagramKind kind = DiagramKind::classical;
    std::size_t arity = 0;  // n for Δ_n diagrams
    std::vector<Interval> intervals;
    std::vector<RankEntry> ranks;  // Δ_n diagrams only
    /// Zero-length intervals dropped from `intervals`.
    std::size_t zero_length = 0;
    std::vector<std::string> warnings;

    /// Intervals of one degree.
    std::vector<Interval> in_degree(int k) const;
};

/// Column reduction of the boundary matrix over `field`, simplices ordered by
/// (value, dimension, declaration). Intervals of degree k, sorted by (birth, death).
PersistenceDiagram barcode(const FilteredComplex& f, Field field, int k);
/// All degrees up to the top simplex dimension.
PersistenceDiagram barcode(const FilteredComplex& f, Field field);

/// Rank of H_k(K_i) -> H_k(K_j), K_t the simplices of value <= t, computed as
/// dim(Z_k(K_i) + B_k(K_j)) - dim B_k(K_j). Throws std::invalid_argument if i > j.
std::size_t persistent_rank(const FilteredComplex& f, Field field, int k, double i, double j);

/// Bottleneck distance between the degree-k parts of two diagrams under the
/// ∞-norm, points matched to each other or to the diagonal. Infinite bars are
/// matched among themselves by birth; different numbers of them give +∞.
double bottleneck(const PersistenceDiagram& a, const PersistenceDiagram& b, int k);

/// The subcomplex K_t as a chain complex over `field`: basis ordered by filtration
/// order within each degree, labels joining the vertices with '.'.
ComplexPtr stage_complex(const FilteredComplex& f, Field field, double t);

/// Simplicial chains on K_t with the Alexander-Whitney diagonal.
DGCoalgebra chain_coalgebra(const FilteredComplex& f, Field field, double t);

struct StageStructure {
    double value = 0;
    DGCoalgebra coalgebra;
    HomologyContraction homology;
    AInfinityStructure structure;  // Δ_1 .. Δ_max_arity on homology
};

/// Chain coalgebra of K_t over ℚ, contracted onto its homology, with the
/// transferred A∞-coalgebra through max_arity. Throws InvariantViolation when a
/// co-Stasheff identity fails.
StageStructure ainfty_stage(const FilteredComplex& f, double t, std::size_t max_arity);

/// Δ_n-persistence in degree k over ℚ at the critical stages: for stages i <= j the
/// rank of H_k(K_i) -> H_k(K_j) restricted to the classes x with Δ_n(ι_i^l x) = 0 for
/// every stage l in [i, j]. Intervals come from Möbius inversion of the rank table,
/// births and deaths in filtration values; negative multiplicities (ranks that no
/// interval multiset reproduces) and stages whose structure does not restrict from
/// the next are reported in `warnings`. Throws std::invalid_argument when n < 2 or
/// max_arity < n.
PersistenceDiagram delta_barcode(const FilteredComplex& f, std::size_t n, int k, std::size_t max_arity);

}  // namespace ainf
