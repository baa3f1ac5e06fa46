#include "ainf/persistence.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <stdexcept>

#include <boost/graph/adjacency_list.hpp>
#include <boost/graph/max_cardinality_matching.hpp>

#include "ainf/errors.hpp"
#include "ainf/linalg.hpp"
#include "ainf/perturbation.hpp"

namespace ainf {

// ------------------------------------------------------------ filtered complexes

void FilteredComplex::add(std::vector<std::size_t> vertices, double value) {
    if (vertices.empty()) throw std::invalid_argument("simplex without vertices");
    if (!std::isfinite(value)) throw std::invalid_argument("filtration values must be finite");
    std::sort(vertices.begin(), vertices.end());
    if (std::adjacent_find(vertices.begin(), vertices.end()) != vertices.end())
        throw std::invalid_argument("simplex with a repeated vertex");
    if (index_.count(vertices)) throw std::invalid_argument("simplex declared twice");
    index_.emplace(vertices, simplices_.size());
    simplices_.push_back(Simplex{std::move(vertices), value});
}

int FilteredComplex::max_dim() const {
    int top = -1;
    for (const auto& s : simplices_) top = std::max(top, s.dim());
    return top;
}

std::vector<std::size_t> FilteredComplex::filtration_order() const {
    std::vector<std::size_t> order(simplices_.size());
    for (std::size_t i = 0; i < order.size(); ++i) order[i] = i;
    std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
        const Simplex& x = simplices_[a];
        const Simplex& y = simplices_[b];
        if (x.value != y.value) return x.value < y.value;
        return x.dim() < y.dim();
    });
    return order;
}

std::vector<double> FilteredComplex::critical_values() const {
    std::vector<double> v;
    for (const auto& s : simplices_) v.push_back(s.value);
    std::sort(v.begin(), v.end());
    v.erase(std::unique(v.begin(), v.end()), v.end());
    return v;
}

std::optional<std::size_t> FilteredComplex::find(const std::vector<std::size_t>& vertices) const {
    auto it = index_.find(vertices);
    if (it == index_.end()) return std::nullopt;
    return it->second;
}

namespace {

std::string simplex_label(const std::vector<std::size_t>& v) {
    std::string out;
    for (std::size_t i = 0; i < v.size(); ++i) out += (i ? "." : "") + std::to_string(v[i]);
    return out;
}

std::vector<std::size_t> drop(const std::vector<std::size_t>& v, std::size_t i) {
    std::vector<std::size_t> face = v;
    face.erase(face.begin() + static_cast<std::ptrdiff_t>(i));
    return face;
}

}  // namespace

CheckResult check_filtration(const FilteredComplex& f) {
    for (const auto& s : f.simplices()) {
        if (s.dim() == 0) continue;
        for (std::size_t i = 0; i < s.vertices.size(); ++i) {
            const auto face = drop(s.vertices, i);
            const auto at = f.find(face);
            if (!at) return CheckResult::fail("face " + simplex_label(face) + " of " + simplex_label(s.vertices) + " is missing");
            if (f.simplices()[*at].value > s.value)
                return CheckResult::fail("face " + simplex_label(face) + " enters after " + simplex_label(s.vertices));
        }
    }
    return CheckResult::pass();
}

// ------------------------------------------------------------ point clouds

namespace {

double distance(const Point& a, const Point& b) {
    double s = 0;
    for (std::size_t i = 0; i < a.size(); ++i) s += (a[i] - b[i]) * (a[i] - b[i]);
    return std::sqrt(s);
}

void check_points(const std::vector<Point>& points, double max_eps) {
    if (points.empty()) throw std::invalid_argument("empty point set");
    for (const auto& p : points)
        if (p.size() != points.front().size()) throw std::invalid_argument("points of unequal dimension");
    if (!(max_eps > 0)) throw std::invalid_argument("max_eps must be positive");
}

// Grows vertex sets in increasing order while `admit` accepts them.
void enumerate(std::size_t n, int max_dim, const std::function<std::optional<double>(const std::vector<std::size_t>&)>& admit,
               FilteredComplex& out) {
    std::vector<std::size_t> current;
    std::function<void(std::size_t)> grow = [&](std::size_t from) {
        for (std::size_t v = from; v < n; ++v) {
            current.push_back(v);
            if (auto value = admit(current)) {
                out.add(current, *value);
                if (static_cast<int>(current.size()) <= max_dim) grow(v + 1);
            }
            current.pop_back();
        }
    };
    grow(0);
}

}  // namespace

FilteredComplex rips(const std::vector<Point>& points, double max_eps, int max_dim) {
    check_points(points, max_eps);
    if (max_dim < 0) throw std::invalid_argument("max_dim must be non-negative");
    FilteredComplex out;
    enumerate(points.size(), max_dim, [&](const std::vector<std::size_t>& s) -> std::optional<double> {
        double value = 0;
        for (std::size_t i = 0; i < s.size(); ++i)
            for (std::size_t j = i + 1; j < s.size(); ++j) value = std::max(value, distance(points[s[i]], points[s[j]]));
        if (value > max_eps) return std::nullopt;
        return value;
    }, out);
    return out;
}

double enclosing_radius(const std::vector<Point>& points) {
    if (points.empty() || points.size() > 3) throw std::invalid_argument("enclosing_radius takes one to three points");
    if (points.front().size() > 3) throw std::invalid_argument("enclosing_radius supports dimension <= 3");
    if (points.size() == 1) return 0;
    if (points.size() == 2) return distance(points[0], points[1]) / 2;
    double a = distance(points[1], points[2]), b = distance(points[0], points[2]), c = distance(points[0], points[1]);
    if (a < b) std::swap(a, b);
    if (a < c) std::swap(a, c);
    // a is now the longest side; a right or obtuse angle opposite it puts the ball on a
    if (a * a >= b * b + c * c) return a / 2;
    double u[3] = {0, 0, 0}, v[3] = {0, 0, 0};
    for (std::size_t i = 0; i < points[0].size(); ++i) {
        u[i] = points[1][i] - points[0][i];
        v[i] = points[2][i] - points[0][i];
    }
    const double cx = u[1] * v[2] - u[2] * v[1], cy = u[2] * v[0] - u[0] * v[2], cz = u[0] * v[1] - u[1] * v[0];
    const double area = std::sqrt(cx * cx + cy * cy + cz * cz) / 2;
    return a * b * c / (4 * area);
}

FilteredComplex cech(const std::vector<Point>& points, double max_eps, int max_dim) {
    check_points(points, max_eps);
    if (points.front().size() > 3) throw std::invalid_argument("cech supports points of dimension <= 3");
    if (max_dim < 0 || max_dim > 2) throw std::invalid_argument("cech supports max_dim in [0, 2]");
    FilteredComplex out;
    enumerate(points.size(), max_dim, [&](const std::vector<std::size_t>& s) -> std::optional<double> {
        std::vector<Point> sub;
        for (auto i : s) sub.push_back(points[i]);
        const double r = enclosing_radius(sub);
        if (r > max_eps) return std::nullopt;
        return r;
    }, out);
    return out;
}

// ------------------------------------------------------------ barcodes

std::vector<Interval> PersistenceDiagram::in_degree(int k) const {
    std::vector<Interval> out;
    for (const auto& i : intervals)
        if (i.degree == k) out.push_back(i);
    return out;
}

namespace {

void sort_intervals(std::vector<Interval>& v) {
    std::sort(v.begin(), v.end(), [](const Interval& a, const Interval& b) {
        if (a.degree != b.degree) return a.degree < b.degree;
        if (a.birth != b.birth) return a.birth < b.birth;
        return a.death < b.death;
    });
}

PersistenceDiagram reduce(const FilteredComplex& f, Field field, std::optional<int> only) {
    if (auto r = check_filtration(f); !r) throw InvariantViolation("barcode: " + r.failure);
    const auto order = f.filtration_order();
    const auto& simplices = f.simplices();
    std::vector<std::size_t> position(simplices.size());
    for (std::size_t p = 0; p < order.size(); ++p) position[order[p]] = p;

    using Column = std::map<std::size_t, Scalar>;
    std::vector<Column> columns(order.size());
    for (std::size_t p = 0; p < order.size(); ++p) {
        const Simplex& s = simplices[order[p]];
        if (s.dim() == 0) continue;
        for (std::size_t i = 0; i < s.vertices.size(); ++i)
            columns[p].emplace(position[*f.find(drop(s.vertices, i))], Scalar::sign(field, i % 2 != 0));
    }
    std::map<std::size_t, std::size_t> owner;  // low row -> reduced column
    std::vector<bool> killed(order.size(), false), paired(order.size(), false);
    PersistenceDiagram out;
    for (std::size_t p = 0; p < order.size(); ++p) {
        Column& col = columns[p];
        while (!col.empty()) {
            const auto low = col.rbegin()->first;
            auto it = owner.find(low);
            if (it == owner.end()) break;
            const Column& other = columns[it->second];
            const Scalar factor = col.rbegin()->second / other.rbegin()->second;
            for (const auto& [row, v] : other) {
                auto at = col.try_emplace(row, Scalar::zero(field)).first;
                at->second -= factor * v;
                if (at->second.is_zero()) col.erase(at);
            }
        }
        if (col.empty()) continue;
        const auto low = col.rbegin()->first;
        owner.emplace(low, p);
        paired[low] = true;
        killed[p] = true;
        const Simplex& born = simplices[order[low]];
        if (only && born.dim() != *only) continue;
        const double b = born.value, d = simplices[order[p]].value;
        if (b == d)
            ++out.zero_length;
        else
            out.intervals.push_back(Interval{born.dim(), b, d});
    }
    for (std::size_t p = 0; p < order.size(); ++p) {
        if (paired[p] || killed[p]) continue;
        const Simplex& s = simplices[order[p]];
        if (only && s.dim() != *only) continue;
        out.intervals.push_back(Interval{s.dim(), s.value, infinity});
    }
    sort_intervals(out.intervals);
    return out;
}

}  // namespace

PersistenceDiagram barcode(const FilteredComplex& f, Field field, int k) { return reduce(f, field, k); }
PersistenceDiagram barcode(const FilteredComplex& f, Field field) { return reduce(f, field, std::nullopt); }

namespace {

// K_t with its basis, and the position of each declared simplex in it.
struct Stage {
    ComplexPtr complex;
    std::map<std::size_t, BasisRef> ref_of;  // declaration index -> basis element
};

Stage build_stage(const FilteredComplex& f, Field field, double t) {
    const auto& simplices = f.simplices();
    std::vector<std::size_t> members;
    for (auto i : f.filtration_order())
        if (simplices[i].value <= t) members.push_back(i);
    int top = 0;
    for (auto i : members) top = std::max(top, simplices[i].dim());
    GradedBasis basis(0, top);
    Stage st;
    for (auto i : members) st.ref_of.emplace(i, basis.add(simplices[i].dim(), simplex_label(simplices[i].vertices)));
    std::map<int, SparseMatrix> d;
    for (int n = 1; n <= top; ++n) d.emplace(n, SparseMatrix(field, basis.dim(n - 1), basis.dim(n)));
    for (auto i : members) {
        const Simplex& s = simplices[i];
        if (s.dim() == 0) continue;
        for (std::size_t v = 0; v < s.vertices.size(); ++v) {
            const auto face = f.find(drop(s.vertices, v));
            if (!face || !st.ref_of.count(*face))
                throw InvariantViolation("face " + simplex_label(drop(s.vertices, v)) + " of " + simplex_label(s.vertices) +
                                         " is missing at stage " + std::to_string(t));
            d.at(s.dim()).set(st.ref_of.at(*face).index, st.ref_of.at(i).index, Scalar::sign(field, v % 2 != 0));
        }
    }
    st.complex = std::make_shared<ChainComplex>(field, std::move(basis), std::move(d));
    return st;
}

}  // namespace

std::size_t persistent_rank(const FilteredComplex& f, Field field, int k, double i, double j) {
    if (i > j) throw std::invalid_argument("persistent_rank needs i <= j");
    if (k < 0) return 0;
    const Stage big = build_stage(f, field, j);
    const ChainComplex& c = *big.complex;
    const std::size_t n = c.dim(k);
    // columns of ∂_k for the k-simplices of K_i
    std::vector<std::size_t> small_cols;
    for (const auto& [idx, ref] : big.ref_of)
        if (ref.degree == k && f.simplices()[idx].value <= i) small_cols.push_back(ref.index);
    std::sort(small_cols.begin(), small_cols.end());
    const SparseMatrix dk = c.differential(k);
    std::vector<Vec> cols;
    for (auto col : small_cols) cols.push_back(dk.column_vec(col));
    std::vector<Vec> span;
    for (const auto& z : kernel_basis(SparseMatrix::from_columns(field, dk.rows(), cols))) {
        Vec full = zero_vec(field, n);
        for (std::size_t r = 0; r < small_cols.size(); ++r) full[small_cols[r]] = z[r];
        span.push_back(std::move(full));
    }
    const SparseMatrix up = c.differential(k + 1);
    std::vector<Vec> boundaries;
    for (std::size_t col = 0; col < up.cols(); ++col) boundaries.push_back(up.column_vec(col));
    const std::size_t b = span_rank(field, n, boundaries);
    span.insert(span.end(), boundaries.begin(), boundaries.end());
    return span_rank(field, n, span) - b;
}

// ------------------------------------------------------------ bottleneck

namespace {

double cost(const Interval& a, const Interval& b) { return std::max(std::abs(a.birth - b.birth), std::abs(a.death - b.death)); }
double to_diagonal(const Interval& a) { return (a.death - a.birth) / 2; }

bool perfect_matching(const std::vector<Interval>& a, const std::vector<Interval>& b, double eps) {
    // left: a_0..a_{n-1}, diagonal copies of b; right: b_0..b_{m-1}, diagonal copies of a
    const std::size_t n = a.size(), m = b.size(), half = n + m;
    using Graph = boost::adjacency_list<boost::vecS, boost::vecS, boost::undirectedS>;
    Graph g(2 * half);
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = 0; j < m; ++j)
            if (cost(a[i], b[j]) <= eps) boost::add_edge(i, half + j, g);
        if (to_diagonal(a[i]) <= eps) boost::add_edge(i, half + m + i, g);
    }
    for (std::size_t j = 0; j < m; ++j) {
        if (to_diagonal(b[j]) <= eps) boost::add_edge(n + j, half + j, g);
        for (std::size_t i = 0; i < n; ++i) boost::add_edge(n + j, half + m + i, g);
    }
    std::vector<boost::graph_traits<Graph>::vertex_descriptor> mate(2 * half);
    boost::edmonds_maximum_cardinality_matching(g, &mate[0]);
    return boost::matching_size(g, &mate[0]) == half;
}

}  // namespace

double bottleneck(const PersistenceDiagram& da, const PersistenceDiagram& db, int k) {
    std::vector<Interval> a, b;
    std::vector<double> ia, ib;
    for (const auto& i : da.in_degree(k)) (std::isinf(i.death) ? ia.push_back(i.birth) : a.push_back(i));
    for (const auto& i : db.in_degree(k)) (std::isinf(i.death) ? ib.push_back(i.birth) : b.push_back(i));
    if (ia.size() != ib.size()) return infinity;
    std::sort(ia.begin(), ia.end());
    std::sort(ib.begin(), ib.end());
    double essential = 0;
    for (std::size_t i = 0; i < ia.size(); ++i) essential = std::max(essential, std::abs(ia[i] - ib[i]));

    std::vector<double> candidates{0};
    for (const auto& x : a) {
        candidates.push_back(to_diagonal(x));
        for (const auto& y : b) candidates.push_back(cost(x, y));
    }
    for (const auto& y : b) candidates.push_back(to_diagonal(y));
    std::sort(candidates.begin(), candidates.end());
    candidates.erase(std::unique(candidates.begin(), candidates.end()), candidates.end());
    std::size_t lo = 0, hi = candidates.size() - 1;  // the largest candidate always admits a matching
    while (lo < hi) {
        const std::size_t mid = (lo + hi) / 2;
        if (perfect_matching(a, b, candidates[mid]))
            hi = mid;
        else
            lo = mid + 1;
    }
    return std::max(essential, candidates[lo]);
}

// ------------------------------------------------------------ A∞ stages

ComplexPtr stage_complex(const FilteredComplex& f, Field field, double t) { return build_stage(f, field, t).complex; }

namespace {

DGCoalgebra stage_coalgebra(const FilteredComplex& f, const Stage& st) {
    const Field field = st.complex->field();
    DGCoalgebra co(st.complex);
    for (const auto& [idx, ref] : st.ref_of) {
        const auto& v = f.simplices()[idx].vertices;
        TensorTerms t;
        for (std::size_t k = 0; k < v.size(); ++k) {
            const std::vector<std::size_t> front(v.begin(), v.begin() + static_cast<std::ptrdiff_t>(k + 1));
            const std::vector<std::size_t> back(v.begin() + static_cast<std::ptrdiff_t>(k), v.end());
            add_term(t, {st.ref_of.at(*f.find(front)), st.ref_of.at(*f.find(back))}, Scalar::one(field));
        }
        co.set_coproduct(ref, t);
    }
    return co;
}

StageStructure make_stage(const FilteredComplex& f, const Stage& st, double t, std::size_t max_arity) {
    DGCoalgebra co = stage_coalgebra(f, st);
    HomologyContraction hc = homology_contraction(co.complex());
    AInfinityStructure s = tensor_trick(co, hc.contraction, max_arity);
    for (std::size_t n = 1; n <= max_arity; ++n)
        if (const auto d = stasheff_defect(s, n); !d.is_zero())
            throw InvariantViolation("co-Stasheff identity " + std::to_string(n) + " fails at stage " + std::to_string(t) +
                                     " on " + d.witness());
    return StageStructure{t, std::move(co), std::move(hc), std::move(s)};
}

}  // namespace

DGCoalgebra chain_coalgebra(const FilteredComplex& f, Field field, double t) {
    return stage_coalgebra(f, build_stage(f, field, t));
}

StageStructure ainfty_stage(const FilteredComplex& f, double t, std::size_t max_arity) {
    return make_stage(f, build_stage(f, Field::rationals(), t), t, max_arity);
}

namespace {

// Chain map K_a -> K_b (a <= b) in one degree, by declaration index.
Vec include_chain(const Stage& from, const Stage& to, const Chain& c) {
    const std::size_t n = to.complex->dim(c.degree);
    Vec out = zero_vec(to.complex->field(), n);
    for (const auto& [idx, ref] : from.ref_of)
        if (ref.degree == c.degree && !c.coeffs[ref.index].is_zero()) out[to.ref_of.at(idx).index] = c.coeffs[ref.index];
    return out;
}

// H_k(K_a) -> H_k(K_b): f_b ∘ inclusion ∘ g_a, as a matrix.
SparseMatrix homology_map(const Stage& sa, const StageStructure& a, const Stage& sb, const StageStructure& b, int k) {
    const auto& ha = *a.homology.homology;
    const auto& hb = *b.homology.homology;
    const Field field = ha.field();
    std::vector<Vec> cols;
    for (std::size_t x = 0; x < ha.dim(k); ++x) {
        const Chain rep = a.homology.contraction.g.apply(BasisRef{k, x});
        const Chain moved{k, include_chain(sa, sb, rep)};
        cols.push_back(b.homology.contraction.f.apply(moved).coeffs);
    }
    return SparseMatrix::from_columns(field, hb.dim(k), cols);
}

TensorTerms apply_coop(const CoOperation& op, const Vec& x, int degree) {
    TensorTerms out;
    for (std::size_t i = 0; i < x.size(); ++i) {
        if (x[i].is_zero()) continue;
        for (const auto& [t, c] : op.at({degree, i})) add_term(out, t, x[i] * c);
    }
    return out;
}

}  // namespace

PersistenceDiagram delta_barcode(const FilteredComplex& f, std::size_t n, int k, std::size_t max_arity) {
    if (n < 2) throw std::invalid_argument("delta_barcode: arity must be at least 2");
    if (max_arity < n) throw std::invalid_argument("delta_barcode: arity limit below the requested arity");
    if (auto r = check_filtration(f); !r) throw InvariantViolation("delta_barcode: " + r.failure);
    const Field q = Field::rationals();
    const auto values = f.critical_values();
    const std::size_t m = values.size();
    std::vector<Stage> stages;
    std::vector<StageStructure> structures;
    for (double t : values) {
        stages.push_back(build_stage(f, q, t));
        structures.push_back(make_stage(f, stages.back(), t, max_arity));
    }
    PersistenceDiagram out;
    out.kind = DiagramKind::delta;
    out.arity = n;

    auto hdim = [&](std::size_t s) { return structures[s].homology.homology->dim(k); };
    // rank[i][j] for i <= j
    std::vector<std::vector<std::size_t>> rank_table(m, std::vector<std::size_t>(m, 0));
    for (std::size_t i = 0; i < m; ++i) {
        if (hdim(i) == 0) continue;
        // rows: coordinates of Δ_n ι_i^l on the classes of stage i, stacked over l
        std::vector<Vec> rows;
        for (std::size_t j = i; j < m; ++j) {
            const SparseMatrix iota = homology_map(stages[i], structures[i], stages[j], structures[j], k);
            std::map<Tuple, Vec> block;
            for (std::size_t x = 0; x < hdim(i); ++x) {
                const Vec image = iota.column_vec(x);
                for (const auto& [t, c] : apply_coop(structures[j].structure.coops.at(n), image, k)) {
                    auto it = block.try_emplace(t, zero_vec(q, hdim(i))).first;
                    it->second[x] = c;
                }
            }
            for (auto& [t, row] : block) rows.push_back(std::move(row));
            const auto kernel = kernel_basis(SparseMatrix::from_rows(q, hdim(i), rows));
            std::vector<Vec> images;
            for (const auto& z : kernel) images.push_back(iota.apply(z));
            rank_table[i][j] = span_rank(q, structures[j].homology.homology->dim(k), images);
            out.ranks.push_back(RankEntry{k, values[i], values[j], rank_table[i][j]});
        }
    }
    for (std::size_t i = 0; i < m; ++i)
        if (hdim(i) == 0)
            for (std::size_t j = i; j < m; ++j) out.ranks.push_back(RankEntry{k, values[i], values[j], 0});
    std::sort(out.ranks.begin(), out.ranks.end(), [](const RankEntry& a, const RankEntry& b) {
        return a.from != b.from ? a.from < b.from : a.to < b.to;
    });

    auto r = [&](long i, long j) -> long {
        if (i < 0 || j >= static_cast<long>(m) || i > j) return 0;
        return static_cast<long>(rank_table[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)]);
    };
    for (long b = 0; b < static_cast<long>(m); ++b)
        for (long d = b; d < static_cast<long>(m); ++d) {
            const long mult = r(b, d) - r(b - 1, d) - r(b, d + 1) + r(b - 1, d + 1);
            const double birth = values[static_cast<std::size_t>(b)];
            const double death = d + 1 < static_cast<long>(m) ? values[static_cast<std::size_t>(d + 1)] : infinity;
            for (long c = 0; c < mult; ++c) out.intervals.push_back(Interval{k, birth, death});
            if (mult < 0)
                out.warnings.push_back("negative multiplicity " + std::to_string(mult) + " for [" + std::to_string(birth) + ", " +
                                       std::to_string(death) + ")");
        }
    sort_intervals(out.intervals);

    // a posteriori compatibility: where a representative cycle survives unchanged to
    // the next stage, Δ_n there should be the image of Δ_n here
    for (std::size_t s = 0; s + 1 < m; ++s) {
        const auto& a = structures[s];
        const auto& b = structures[s + 1];
        for (std::size_t x = 0; x < hdim(s); ++x) {
            const Vec moved = include_chain(stages[s], stages[s + 1], a.homology.contraction.g.apply(BasisRef{k, x}));
            std::optional<std::size_t> match;
            for (std::size_t y = 0; y < hdim(s + 1); ++y)
                if (b.homology.contraction.g.apply(BasisRef{k, y}).coeffs == moved) match = y;
            if (!match) continue;
            TensorTerms pushed;
            for (const auto& [t, c] : a.structure.coops.at(n).at({k, x})) {
                std::vector<std::vector<std::pair<BasisRef, Scalar>>> factors;
                for (const auto& y : t) {
                    const Chain rep = a.homology.contraction.g.apply(y);
                    const Chain img = b.homology.contraction.f.apply(Chain{y.degree, include_chain(stages[s], stages[s + 1], rep)});
                    std::vector<std::pair<BasisRef, Scalar>> terms;
                    for (std::size_t i = 0; i < img.coeffs.size(); ++i)
                        if (!img.coeffs[i].is_zero()) terms.emplace_back(BasisRef{y.degree, i}, img.coeffs[i]);
                    factors.push_back(std::move(terms));
                }
                Tuple tu(factors.size());
                std::function<void(std::size_t, Scalar)> rec = [&](std::size_t l, Scalar coef) {
                    if (l == factors.size()) return add_term(pushed, tu, coef);
                    for (const auto& [ref, v] : factors[l]) {
                        tu[l] = ref;
                        rec(l + 1, coef * v);
                    }
                };
                rec(0, c);
            }
            if (pushed != b.structure.coops.at(n).at({k, *match}))
                out.warnings.push_back("Delta_" + std::to_string(n) + " of " + a.homology.homology->basis().label({k, x}) +
                                       " at " + std::to_string(values[s]) + " does not restrict from " + std::to_string(values[s + 1]));
        }
    }
    return out;
}

}  // namespace ainf
