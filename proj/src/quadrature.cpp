#include "moditer/quadrature.hpp"

#include "moditer/errors.hpp"

#include <cmath>
#include <map>
#include <memory>
#include <mutex>
#include <string>

namespace moditer::quad {

namespace {

// P_0..P_{n} at x
void legendre_all(int n, double x, std::vector<double>& p) {
    p.assign(static_cast<std::size_t>(n) + 1, 0.0);
    p[0] = 1.0;
    if (n >= 1) p[1] = x;
    for (int k = 2; k <= n; ++k) p[k] = ((2.0 * k - 1.0) * x * p[k - 1] - (k - 1.0) * p[k - 2]) / k;
}

}  // namespace

GaussLegendre::GaussLegendre(int n) {
    if (n < 1) throw DomainError("Gauss-Legendre needs n >= 1");
    x.resize(n);
    w.resize(n);
    for (int i = 0; i < n; ++i) {
        double xi = -std::cos(kPi * (i + 0.75) / (n + 0.5));
        double dp = 0.0;
        for (int it = 0; it < 100; ++it) {
            double p0 = 1.0, p1 = xi;
            for (int k = 2; k <= n; ++k) {
                const double p2 = ((2.0 * k - 1.0) * xi * p1 - (k - 1.0) * p0) / k;
                p0 = p1;
                p1 = p2;
            }
            if (n == 1) p0 = 1.0, p1 = xi;
            dp = n * (xi * p1 - p0) / (xi * xi - 1.0);
            const double dx = p1 / dp;
            xi -= dx;
            if (std::abs(dx) < 1e-16) break;
        }
        x[i] = xi;
        {
            double p0 = 1.0, p1 = xi;
            for (int k = 2; k <= n; ++k) {
                const double p2 = ((2.0 * k - 1.0) * xi * p1 - (k - 1.0) * p0) / k;
                p0 = p1;
                p1 = p2;
            }
            dp = n * (xi * p1 - p0) / (xi * xi - 1.0);
        }
        w[i] = 2.0 / ((1.0 - xi * xi) * dp * dp);
    }
    // integral_{-1}^{x_i} l_j = w_j [ (x_i + 1)/2 + 1/2 sum_{m=1}^{n-1} P_m(x_j) (P_{m+1}(x_i) - P_{m-1}(x_i)) ]
    S.assign(static_cast<std::size_t>(n) * n, 0.0);
    std::vector<std::vector<double>> P(n);
    for (int i = 0; i < n; ++i) legendre_all(n, x[i], P[i]);
    for (int i = 0; i < n; ++i) {
        for (int j = 0; j < n; ++j) {
            double acc = 0.5 * (x[i] + 1.0);
            for (int m = 1; m <= n - 1; ++m) acc += 0.5 * P[j][m] * (P[i][m + 1] - P[i][m - 1]);
            S[static_cast<std::size_t>(i) * n + j] = w[j] * acc;
        }
    }
}

const GaussLegendre& rule(int n) {
    static std::mutex mu;
    static std::map<int, std::unique_ptr<GaussLegendre>> cache;
    std::lock_guard lock(mu);
    auto& slot = cache[n];
    if (!slot) slot = std::make_unique<GaussLegendre>(n);
    return *slot;
}

std::vector<double> uniform_mesh(int panels) {
    if (panels < 1) throw DomainError("mesh needs at least one panel");
    std::vector<double> m(static_cast<std::size_t>(panels) + 1);
    for (int k = 0; k <= panels; ++k) m[k] = static_cast<double>(k) / panels;
    return m;
}

std::vector<double> graded_mesh_start(int panels, int depth_bits) {
    if (panels < 1) throw DomainError("mesh needs at least one panel");
    if (depth_bits < 1 || depth_bits > 1000) throw DomainError("grading depth must be in [1, 1000] bits");
    const double step = 64.0 / panels;
    const int levels = static_cast<int>(std::ceil(depth_bits / step));
    std::vector<double> m;
    m.reserve(static_cast<std::size_t>(levels) + 2);
    m.push_back(0.0);
    for (int k = levels; k >= 1; --k) m.push_back(std::exp2(-step * k));
    m.push_back(1.0);
    return m;
}

PathNodes discretise(const Parametrisation& path, std::span<const double> mesh, const GaussLegendre& gl) {
    PathNodes out;
    const int n = gl.size();
    out.per_panel = n;
    const std::size_t total = (mesh.size() - 1) * static_cast<std::size_t>(n);
    out.param.reserve(total);
    out.z.reserve(total);
    out.jac.reserve(total);
    out.weight.reserve(total);
    for (std::size_t k = 0; k + 1 < mesh.size(); ++k) {
        const double t0 = mesh[k], t1 = mesh[k + 1];
        const double half = 0.5 * (t1 - t0);
        for (int i = 0; i < n; ++i) {
            const double t = t0 + half * (gl.x[i] + 1.0);
            auto [z, dz] = path(t);
            out.param.push_back(t);
            out.z.push_back(z);
            out.jac.push_back(dz * half);
            out.weight.push_back(gl.w[i]);
        }
    }
    return out;
}

Parametrisation segment(cplx a, cplx b) {
    return [a, b](double t) { return std::pair<cplx, cplx>{a + (b - a) * t, b - a}; };
}

Parametrisation ray_from_infinity(cplx b) {
    return [b](double t) { return std::pair<cplx, cplx>{b / t, -b / (t * t)}; };
}

namespace {

// One pass of cumulative integration: out[i] = integral from path start to node i
// of f, where f[i] already contains the Jacobian. Returns the full-path total.
cplx cumulative_pass(const PathNodes& nodes, const GaussLegendre& gl, const std::vector<cplx>& f,
                     std::vector<cplx>& out) {
    const int n = nodes.per_panel;
    const int panels = nodes.panels();
    out.resize(nodes.size());
    cplx running{0.0, 0.0};
    for (int p = 0; p < panels; ++p) {
        const std::size_t base = static_cast<std::size_t>(p) * n;
        for (int i = 0; i < n; ++i) {
            cplx acc{0.0, 0.0};
            const double* row = gl.S.data() + static_cast<std::size_t>(i) * n;
            for (int j = 0; j < n; ++j) acc += row[j] * f[base + j];
            out[base + i] = running + acc;
        }
        cplx total{0.0, 0.0};
        for (int j = 0; j < n; ++j) total += gl.w[j] * f[base + j];
        running += total;
    }
    return running;
}

}  // namespace

std::vector<cplx> iterated(const PathNodes& nodes, const std::vector<std::vector<cplx>>& letters) {
    const GaussLegendre& gl = rule(nodes.per_panel);
    std::vector<cplx> inner(nodes.size(), cplx{1.0, 0.0});
    std::vector<cplx> f(nodes.size());
    std::vector<cplx> next;
    std::vector<cplx> prefixes;
    prefixes.reserve(letters.size());
    for (const auto& letter : letters) {
        if (letter.size() != nodes.size()) throw DomainError("letter values do not match the path nodes");
        for (std::size_t i = 0; i < nodes.size(); ++i) f[i] = letter[i] * inner[i] * nodes.jac[i];
        prefixes.push_back(cumulative_pass(nodes, gl, f, next));
        inner.swap(next);
    }
    return prefixes;
}

std::vector<cplx> cumulative(const PathNodes& nodes, const std::vector<std::vector<cplx>>& letters) {
    const GaussLegendre& gl = rule(nodes.per_panel);
    std::vector<cplx> inner(nodes.size(), cplx{1.0, 0.0});
    std::vector<cplx> f(nodes.size());
    std::vector<cplx> next;
    for (const auto& letter : letters) {
        for (std::size_t i = 0; i < nodes.size(); ++i) f[i] = letter[i] * inner[i] * nodes.jac[i];
        cumulative_pass(nodes, gl, f, next);
        inner.swap(next);
    }
    return inner;
}

Refined refine(const std::function<std::vector<cplx>(int)>& eval, int start, int max_panels, double rel_tol,
               double abs_floor) {
    int P = start;
    std::vector<cplx> prev = eval(P);
    double last_err = 0.0;
    while (2 * P <= max_panels) {
        P *= 2;
        std::vector<cplx> cur = eval(P);
        double err = 0.0;
        bool ok = true;
        for (std::size_t k = 0; k < cur.size(); ++k) {
            const double d = std::abs(cur[k] - prev[k]);
            err = std::max(err, d);
            if (d > rel_tol * std::max(std::abs(cur[k]), abs_floor)) ok = false;
        }
        last_err = err;
        prev = std::move(cur);
        if (ok) return {std::move(prev), err, P};
    }
    throw AccuracyError("quadrature did not reach relative tolerance " + std::to_string(rel_tol) + " with " +
                        std::to_string(P) + " panels (last change " + std::to_string(last_err) + ")");
}

}  // namespace moditer::quad
