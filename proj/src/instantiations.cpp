// Canonical instantiations of the hot header templates. Keeping exactly one
// out-of-line copy in the library makes their performance identical in every
// binary that links it.

#include "mexpr/compile.hpp"
#include "mexpr/eval.hpp"

namespace mexpr {

template double interpret<double>(const Mst&, const AlgebraContext<double>&,
                                  const Bindings<double>&);

namespace detail {

template double exec_generic<double>(const GenericProgram<double>&,
                                     const Bindings<double>&, double*);

} // namespace detail
} // namespace mexpr
