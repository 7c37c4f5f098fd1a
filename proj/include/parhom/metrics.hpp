#pragma once

#include <ostream>
#include <vector>

#include "parhom/mesh.hpp"

namespace parhom {

struct ErrorNorms {
    double l1 = 0.0;
    double l2 = 0.0;
    double linf = 0.0;
    double h1 = 0.0;
};

// Absolute norms of a P1 nodal field: L1/L2 by mesh quadrature, Linf over
// nodes, H1 the gradient seminorm.
ErrorNorms absolute_norms(const Mesh& mesh, std::span<const double> full_nodal);

// Relative errors of u_rec against u_ref on the fine mesh.
// Throws DegenerateReferenceError when a reference norm vanishes.
ErrorNorms relative_errors_fine(const Mesh& mesh, std::span<const double> u_ref,
                                std::span<const double> u_rec);

// Coarse-mesh variant: both fields are interpolated at the coarse node
// positions and compared as coarse P1 functions.
ErrorNorms relative_errors_coarse(const Mesh& coarse, const Mesh& fine,
                                  std::span<const double> u_ref, std::span<const double> u_rec);

struct ConvergenceTable {
    std::vector<int> dofs;
    std::vector<double> h;  // 2 / n_c
    std::vector<ErrorNorms> errors;
    ErrorNorms slopes;  // least-squares log-log slope per norm
};

ConvergenceTable convergence_table(const std::vector<std::pair<int, ErrorNorms>>& by_coarse_n);

// CSV `dof,L1,Linf,L2,H1`
void write_error_table_csv(const ConvergenceTable& table, std::ostream& out);

}  // namespace parhom
