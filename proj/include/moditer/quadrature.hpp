#pragma once

#include "moditer/numerics.hpp"

#include <functional>
#include <span>
#include <utility>
#include <vector>

namespace moditer::quad {

/// Gauss-Legendre rule on [-1, 1] plus the spectral integration matrix
/// S[i][j] = integral_{-1}^{x_i} l_j(x) dx of the Lagrange basis on the nodes,
/// which gives indefinite integrals at the nodes themselves.
struct GaussLegendre {
    explicit GaussLegendre(int n);
    int size() const { return static_cast<int>(x.size()); }

    std::vector<double> x;
    std::vector<double> w;
    std::vector<double> S;  // row-major n x n
};

/// Cached rule; the cache is process-wide and guarded.
const GaussLegendre& rule(int n);

/// Breakpoints of a mesh on [0, 1] in the path parameter.
std::vector<double> uniform_mesh(int panels);
/// Geometric grading towards parameter 0: breakpoints 0, r^L, ..., r, 1 with
/// r = 2^(-64/P) and the first panel of width 2^(-depth_bits). Doubling P
/// halves every panel in log scale. Weak singularities u^(a-1) with small a
/// need a large depth, since the first panel carries about 2^(-a depth_bits).
std::vector<double> graded_mesh_start(int panels, int depth_bits = 64);
// No end-graded variant: 1 - t loses everything below 1e-16, so callers needing
// resolution at the far end reverse the parametrisation instead.

/// Discretised path: quadrature nodes in path order with the Jacobian dz/dx
/// already folded in, so sum_i w_i f(z_i) jac_i approximates the path integral.
struct PathNodes {
    int per_panel = 0;
    std::vector<double> param;  // path parameter at each node
    std::vector<cplx> z;
    std::vector<cplx> jac;
    std::vector<double> weight;  // Gauss weights (repeated per panel)
    std::size_t size() const { return z.size(); }
    int panels() const { return per_panel == 0 ? 0 : static_cast<int>(z.size()) / per_panel; }
};

/// Parametrised path t in [0, 1] -> (z(t), z'(t)).
using Parametrisation = std::function<std::pair<cplx, cplx>(double)>;

PathNodes discretise(const Parametrisation& path, std::span<const double> mesh, const GaussLegendre& gl);

/// Straight segment from a to b.
Parametrisation segment(cplx a, cplx b);
/// Ray from infinity (t = 0) down to b (t = 1): z = b / t.
Parametrisation ray_from_infinity(cplx b);

/// Iterated integrals along a discretised path. letters[r][i] is the value of
/// the r-th 1-form coefficient at node i, letters[0] innermost (closest to the
/// path start). Returns the full-path values of the prefixes
/// int eta_1, int eta_1 eta_2, ..., int eta_1 ... eta_k.
std::vector<cplx> iterated(const PathNodes& nodes, const std::vector<std::vector<cplx>>& letters);

/// Indefinite version: cumulative values of int eta_1 ... eta_k at every node.
std::vector<cplx> cumulative(const PathNodes& nodes, const std::vector<std::vector<cplx>>& letters);

struct Refined {
    std::vector<cplx> values;
    double error = 0.0;
    int panels = 0;
};

/// Panel-doubling driver: evaluates `eval(P)` for P = start, 2 start, ... until
/// successive results agree to rel_tol (relative to max(|value|, abs_floor)).
/// Throws AccuracyError when max_panels is reached first.
Refined refine(const std::function<std::vector<cplx>(int)>& eval, int start, int max_panels, double rel_tol,
               double abs_floor = 1e-300);

}  // namespace moditer::quad
