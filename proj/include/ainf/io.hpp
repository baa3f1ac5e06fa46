#pragma once

#include <string>
#include <vector>

#include "ainf/contraction.hpp"
#include "ainf/dgalg.hpp"
#include "ainf/persistence.hpp"
#include "ainf/perturbation.hpp"

/// Line-oriented text formats. `#` starts a comment. Linear combinations are
/// written `c1*x1 + c2*x2 - x3`, coefficients integers or fractions, a bare term
/// meaning coefficient 1; tensors are written `(a,b,c)`. Labels are unique within a
/// complex and may not contain whitespace, `* ( ) , = : #` or start with `+`/`-`.
///
///   degree n: l1 l2 ...        basis of degree n (may be empty)
///   d x = ...                  differential
///   m a b = ...                product (dg-algebras)
///   delta x = c*(l1,l2) + ...  coproduct (dg-coalgebras)
///
/// Every parser throws ParseError naming the source and line.
namespace ainf::io {

ComplexPtr parse_complex(const std::string& text, Field f, const std::string& source = "<input>");
std::string write_complex(const ChainComplex& c);

DGAlgebra parse_dga(const std::string& text, Field f, const std::string& source = "<input>");
std::string write_dga(const DGAlgebra& a);

DGCoalgebra parse_coalgebra(const std::string& text, Field f, const std::string& source = "<input>");
std::string write_coalgebra(const DGCoalgebra& c);

/// Big complex as above, then `small degree n: ...`, `small d x = ...` and the maps
/// `f x = ...`, `g y = ...`, `phi x = ...`. When `big` is given the file may omit the
/// big complex; if it declares one, it must agree with `big`.
Contraction parse_contraction(const std::string& text, Field f, const std::string& source = "<input>",
                              const ComplexPtr& big = nullptr);
std::string write_contraction(const Contraction& c);

/// `perturb x = ...` on labels of c.big, optionally `nil_bound N`.
Perturbation parse_perturbation(const std::string& text, const Contraction& c, const std::string& source = "<input>");
std::string write_perturbation(const Perturbation& p);

/// Carrier complex, `kind algebra|coalgebra`, `arity N` (operations 1..N are
/// present), `certified N`, optional `window T` (TupleWindow::min_total), then
/// `m n a1 .. an = ...` or `Delta n x = c*(l1,..,ln) + ...` for n >= 2, and
/// `status complete (gap q=Q)` or `status incomplete`.
AInfinityStructure parse_structure(const std::string& text, Field f, const std::string& source = "<input>");
std::string write_structure(const AInfinityStructure& s);

/// One point per line, coordinates separated by whitespace.
std::vector<Point> parse_points(const std::string& text, const std::string& source = "<input>");
std::string write_points(const std::vector<Point>& points);

/// One simplex per line: `value v0 v1 ...`.
FilteredComplex parse_filtration(const std::string& text, const std::string& source = "<input>");
std::string write_filtration(const FilteredComplex& f);

/// Intervals `k birth death` (death may be `inf`). Header comments carry the rest:
/// `# barcode` or `# delta n`, `# zero_length N`, `# rank k from to r`, `# warning ...`.
PersistenceDiagram parse_diagram(const std::string& text, const std::string& source = "<input>");
std::string write_diagram(const PersistenceDiagram& d);

/// 12 significant digits; `inf` for +∞.
std::string format_value(double v);

}  // namespace ainf::io
