#include "psad/problems.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "psad/adcore.hpp"

namespace psad {

namespace {

// ---------------------------------------------------------------------------
// 2-D element-sum problems: unknowns on an interior q×q grid, one component
// per cell of the surrounding (q+1)×(q+1) cell mesh. Interior cells touch
// four unknowns; cells on the boundary ring touch fewer, with the missing
// corners supplied by the boundary function.
// ---------------------------------------------------------------------------

int grid_side(int n) {
    const int q = std::max(3, static_cast<int>(std::lround(std::sqrt(static_cast<double>(n)))));
    return q;
}

struct GridGeometry {
    int q;
    double h;

    bool interior(int a, int b) const { return a >= 1 && a <= q && b >= 1 && b <= q; }
    int index(int a, int b) const { return (a - 1) * q + (b - 1); }
};

template <class S, class Boundary>
S corner_value(std::span<const S> x, const GridGeometry& g, const Boundary& boundary, int a,
               int b) {
    if (g.interior(a, b)) return x[g.index(a, b)];
    return S(boundary(a * g.h, b * g.h));
}

// Shared element loop: `cell` maps the four corner scalars plus the cell
// coordinates to one component value.
template <class S, class Boundary, class Cell>
void grid_components(std::span<const S> x, std::vector<S>& out, int q, const Boundary& boundary,
                     const Cell& cell) {
    const GridGeometry g{q, 1.0 / (q + 1)};
    out.reserve((q + 1) * (q + 1));
    for (int i = 0; i <= q; ++i) {
        for (int j = 0; j <= q; ++j) {
            S va = corner_value(x, g, boundary, i, j);
            S vb = corner_value(x, g, boundary, i + 1, j);
            S vc = corner_value(x, g, boundary, i, j + 1);
            S vd = corner_value(x, g, boundary, i + 1, j + 1);
            out.push_back(cell(va, vb, vc, vd, i, j));
        }
    }
}

SparsityPattern grid_cell_pattern(int q) {
    const GridGeometry g{q, 1.0 / (q + 1)};
    std::vector<std::vector<std::int32_t>> rows;
    rows.reserve((q + 1) * (q + 1));
    for (int i = 0; i <= q; ++i) {
        for (int j = 0; j <= q; ++j) {
            std::vector<std::int32_t> row;
            for (int a : {i, i + 1})
                for (int b : {j, j + 1})
                    if (g.interior(a, b)) row.push_back(g.index(a, b));
            std::sort(row.begin(), row.end());
            rows.push_back(std::move(row));
        }
    }
    return SparsityPattern::from_rows(q * q, rows);
}

std::vector<double> grid_boundary_start(int q, double (*boundary)(double, double)) {
    const double h = 1.0 / (q + 1);
    std::vector<double> x0(q * q);
    for (int a = 1; a <= q; ++a)
        for (int b = 1; b <= q; ++b) x0[(a - 1) * q + (b - 1)] = boundary(a * h, b * h);
    return x0;
}

double msa_boundary(double s, double t) { return 1.0 + s * s + t * t * t + 0.5 * s * t; }
double odc_boundary(double s, double t) { return 0.5 + s * t; }
double ssc_boundary(double, double) { return 0.0; }

// ---------------------------------------------------------------------------
// 5-point star problem (journal-bearing style): one component per unknown,
// coupling the center and its four grid neighbors; zero boundary data and a
// nonnegativity bound on the unknowns.
// ---------------------------------------------------------------------------

template <class S>
void bearing_components(std::span<const S> x, std::vector<S>& out, int q) {
    const double h = 1.0 / (q + 1);
    auto point = [&](int i, int j) -> S {
        if (i >= 0 && i < q && j >= 0 && j < q) return x[i * q + j];
        return S(0.0);
    };
    out.reserve(q * q);
    for (int i = 0; i < q; ++i) {
        const double s = 3.141592653589793 * (i + 1) * h;
        const double wq = std::pow(1.0 + 0.5 * std::cos(s), 3);
        const double wl = 0.5 * std::sin(s);
        for (int j = 0; j < q; ++j) {
            S de = (point(i + 1, j) - point(i - 1, j)) / (2.0 * h);
            S dn = (point(i, j + 1) - point(i, j - 1)) / (2.0 * h);
            out.push_back(h * h * (wq * (de * de) + wq * (dn * dn) + wl * point(i, j)));
        }
    }
}

SparsityPattern bearing_pattern(int q) {
    std::vector<std::vector<std::int32_t>> rows;
    rows.reserve(q * q);
    for (int i = 0; i < q; ++i) {
        for (int j = 0; j < q; ++j) {
            std::vector<std::int32_t> row;
            auto add = [&](int a, int b) {
                if (a >= 0 && a < q && b >= 0 && b < q)
                    row.push_back(static_cast<std::int32_t>(a * q + b));
            };
            add(i - 1, j);
            add(i, j - 1);
            add(i, j);
            add(i, j + 1);
            add(i + 1, j);
            std::sort(row.begin(), row.end());
            rows.push_back(std::move(row));
        }
    }
    return SparsityPattern::from_rows(q * q, rows);
}

std::vector<double> bearing_start(int q) {
    const double h = 1.0 / (q + 1);
    std::vector<double> x0(q * q);
    for (int i = 0; i < q; ++i) {
        const double s = (i + 1) * h;
        for (int j = 0; j < q; ++j) {
            const double t = (j + 1) * h;
            x0[i * q + j] = 4.0 * s * (1.0 - s) * t * (1.0 - t) + 0.1 * s;
        }
    }
    return x0;
}

// ---------------------------------------------------------------------------
// Chain systems: m = n - w + 1 residuals over sliding windows of width w,
// squared into component functions (f = ½‖r‖² for the system r(x) = 0).
// Each residual mixes weighted window sums, so every window variable enters
// every partial with coefficients bounded away from zero at the start.
// ---------------------------------------------------------------------------

struct ChainWeights {
    std::vector<double> alpha, beta, gamma;
};

ChainWeights chain_weights(int width) {
    ChainWeights w;
    for (int j = 0; j < width; ++j) {
        w.alpha.push_back(1.0 / (1.0 + j));
        w.beta.push_back(((j % 2) == 0 ? 1.0 : -1.0) / (2.0 + j));
        w.gamma.push_back(1.0 / (3.0 + j));
    }
    return w;
}

enum class ChainKind { quadratic, bilinear, sine, rational };

template <class S>
void chain_components(std::span<const S> x, std::vector<S>& out, int width, ChainKind kind) {
    const ChainWeights w = chain_weights(width);
    const int m = static_cast<int>(x.size()) - width + 1;
    out.reserve(m);
    for (int k = 0; k < m; ++k) {
        S s1 = 0.0, s2 = 0.0, s3 = 0.0;
        for (int j = 0; j < width; ++j) {
            s1 = s1 + w.alpha[j] * x[k + j];
            s2 = s2 + w.beta[j] * x[k + j];
            s3 = s3 + w.gamma[j] * x[k + j];
        }
        S r = 0.0;
        switch (kind) {
            case ChainKind::quadratic: r = s1 + s2 * s2 - 1.0; break;
            case ChainKind::bilinear: r = s1 + s2 * s3 - 1.0; break;
            case ChainKind::sine: r = s1 + sin(s2) + 0.5 * (s3 * s3) - 1.0; break;
            case ChainKind::rational: r = s1 * (1.0 + s2 * s2) - 1.0; break;
        }
        out.push_back(0.5 * (r * r));
    }
}

SparsityPattern chain_pattern(int n, int width) {
    const int m = n - width + 1;
    std::vector<std::int32_t> offsets{0};
    std::vector<std::int32_t> indices;
    for (int k = 0; k < m; ++k) {
        for (int j = 0; j < width; ++j) indices.push_back(k + j);
        offsets.push_back(static_cast<std::int32_t>(indices.size()));
    }
    return SparsityPattern(m, n, std::move(offsets), std::move(indices));
}

int require_chain_n(int n, int width, const std::string& name) {
    if (n < width)
        throw std::invalid_argument(name + " requires n >= " + std::to_string(width));
    return n;
}

// ---------------------------------------------------------------------------
// Structural cases.
// ---------------------------------------------------------------------------

template <class S>
void arrowhead_components(std::span<const S> x, std::vector<S>& out) {
    const int n = static_cast<int>(x.size());
    out.reserve(2 * n - 1);
    for (int k = 0; k < n; ++k) out.push_back(0.5 * (x[k] * x[k]));
    for (int k = 1; k < n; ++k) {
        S t = x[0] * x[k];
        out.push_back(0.5 * (t * t));
    }
}

SparsityPattern arrowhead_pattern(int n) {
    std::vector<std::vector<std::int32_t>> rows;
    rows.reserve(2 * n - 1);
    for (int k = 0; k < n; ++k) rows.push_back({static_cast<std::int32_t>(k)});
    for (int k = 1; k < n; ++k) rows.push_back({0, static_cast<std::int32_t>(k)});
    return SparsityPattern::from_rows(n, rows);
}

template <class S>
void quartic_chain_components(std::span<const S> x, std::vector<S>& out) {
    const int n = static_cast<int>(x.size());
    out.reserve(n - 1);
    for (int k = 0; k + 1 < n; ++k) {
        S d = x[k] - x[k + 1];
        S s = x[k] + x[k + 1];
        S d2 = d * d;
        out.push_back(0.25 * (d2 * d2) + 0.5 * (s * s));
    }
}

template <class S>
void diag_components(std::span<const S> x, std::vector<S>& out) {
    out.reserve(x.size());
    for (const S& xi : x) out.push_back(0.5 * (xi * xi));
}

SparsityPattern banded_pattern(int m, int n, int width) {
    std::vector<std::vector<std::int32_t>> rows(m);
    for (int k = 0; k < m; ++k)
        for (int j = 0; j < width; ++j) rows[k].push_back(k + j);
    return SparsityPattern::from_rows(n, rows);
}

ProblemSpec grid_problem(std::string name, int rho, double (*boundary)(double, double),
                         ExtendedFunction (*build)(int), std::vector<double> (*start)(int)) {
    ProblemSpec spec;
    spec.name = std::move(name);
    spec.family = ProblemFamily::variational;
    spec.declared_rho_max = rho;
    spec.adjusted_n = [](int n) {
        const int q = grid_side(n);
        return q * q;
    };
    spec.constructor = [build](int n) { return build(grid_side(n)); };
    spec.reference_pattern = [](int n) { return grid_cell_pattern(grid_side(n)); };
    spec.standard_start = [boundary, start](int n) {
        StandardStart s;
        s.x0 = start ? start(grid_side(n)) : grid_boundary_start(grid_side(n), boundary);
        return s;
    };
    return spec;
}

ExtendedFunction build_msa(int q) {
    return make_extended_function(q * q, [q](auto x, auto& out) {
        const double h = 1.0 / (q + 1);
        grid_components(x, out, q, msa_boundary, [h](const auto& a, const auto& b, const auto& c, const auto& d, int, int) {
            auto dx = ((b - a) + (d - c)) / (2.0 * h);
            auto dy = ((c - a) + (d - b)) / (2.0 * h);
            return (h * h) * sqrt(1.0 + dx * dx + dy * dy);
        });
    });
}

ExtendedFunction build_odc(int q) {
    return make_extended_function(q * q, [q](auto x, auto& out) {
        const double h = 1.0 / (q + 1);
        grid_components(x, out, q, odc_boundary, [h](const auto& a, const auto& b, const auto& c, const auto& d, int i, int j) {
            auto dx = ((b - a) + (d - c)) / (2.0 * h);
            auto dy = ((c - a) + (d - b)) / (2.0 * h);
            auto r = dx * dx + dy * dy;
            const double sc = (i + 0.5) * h;
            const double tc = (j + 0.5) * h;
            const double load = 1.0 + 0.25 * std::sin(3.0 * sc + tc);
            auto vavg = 0.25 * (a + b + c + d);
            return (h * h) * (r + 0.25 * (r * r) - load * vavg);
        });
    });
}

ExtendedFunction build_ssc(int q) {
    return make_extended_function(q * q, [q](auto x, auto& out) {
        const double h = 1.0 / (q + 1);
        grid_components(x, out, q, ssc_boundary, [h](const auto& a, const auto& b, const auto& c, const auto& d, int, int) {
            auto dx = ((b - a) + (d - c)) / (2.0 * h);
            auto dy = ((c - a) + (d - b)) / (2.0 * h);
            auto vavg = 0.25 * (a + b + c + d);
            return (h * h) * (0.5 * (dx * dx + dy * dy) - exp(vavg));
        });
    });
}

std::vector<double> ssc_start(int q) {
    const double h = 1.0 / (q + 1);
    std::vector<double> x0(q * q);
    for (int a = 1; a <= q; ++a) {
        const double s = a * h;
        for (int b = 1; b <= q; ++b) {
            const double t = b * h;
            x0[(a - 1) * q + (b - 1)] = 2.0 * s * (1.0 - s) * t * (1.0 - t);
        }
    }
    return x0;
}

ProblemSpec chain_problem(std::string name, int width, ChainKind kind, double start_value) {
    ProblemSpec spec;
    const std::string label = name;
    spec.name = std::move(name);
    spec.family = ProblemFamily::nonlinear_equations;
    spec.declared_rho_max = width;
    spec.adjusted_n = [width, label](int n) { return require_chain_n(n, width, label); };
    spec.constructor = [width, kind, label](int n) {
        require_chain_n(n, width, label);
        return make_extended_function(
            n, [width, kind](auto x, auto& out) { chain_components(x, out, width, kind); });
    };
    spec.reference_pattern = [width, label](int n) {
        return chain_pattern(require_chain_n(n, width, label), width);
    };
    spec.standard_start = [width, label, start_value](int n) {
        StandardStart s;
        s.x0.assign(require_chain_n(n, width, label), start_value);
        return s;
    };
    return spec;
}

} // namespace

const std::vector<ProblemSpec>& catalog() {
    static const std::vector<ProblemSpec> problems = [] {
        std::vector<ProblemSpec> list;

        list.push_back(grid_problem("minimal-surface-like", 4, msa_boundary, build_msa, nullptr));
        list.push_back(grid_problem("optimal-design-like", 4, odc_boundary, build_odc, nullptr));
        list.push_back(grid_problem("combustion-like", 4, ssc_boundary, build_ssc, ssc_start));

        {
            ProblemSpec spec;
            spec.name = "journal-bearing-like";
            spec.family = ProblemFamily::variational;
            spec.declared_rho_max = 5;
            spec.adjusted_n = [](int n) {
                const int q = grid_side(n);
                return q * q;
            };
            spec.constructor = [](int n) {
                const int q = grid_side(n);
                return make_extended_function(
                    q * q, [q](auto x, auto& out) { bearing_components(x, out, q); },
                    std::vector<double>(q * q, 0.0), {});
            };
            spec.reference_pattern = [](int n) { return bearing_pattern(grid_side(n)); };
            spec.standard_start = [](int n) {
                const int q = grid_side(n);
                StandardStart s;
                s.x0 = bearing_start(q);
                s.lower.assign(q * q, 0.0);
                return s;
            };
            list.push_back(std::move(spec));
        }

        list.push_back(chain_problem("channel-like", 9, ChainKind::quadratic, 0.5));
        list.push_back(chain_problem("cavity-like", 13, ChainKind::bilinear, 0.5));
        list.push_back(chain_problem("swirl-like", 14, ChainKind::sine, 0.2));
        list.push_back(chain_problem("rod-like", 17, ChainKind::rational, 0.3));

        {
            ProblemSpec spec;
            spec.name = "arrowhead";
            spec.family = ProblemFamily::variational;
            spec.declared_rho_max = 2;
            spec.adjusted_n = [](int n) { return std::max(n, 2); };
            spec.constructor = [](int n) {
                n = std::max(n, 2);
                return make_extended_function(
                    n, [](auto x, auto& out) { arrowhead_components(x, out); });
            };
            spec.reference_pattern = [](int n) { return arrowhead_pattern(std::max(n, 2)); };
            spec.standard_start = [](int n) {
                StandardStart s;
                s.x0.assign(std::max(n, 2), 0.5);
                return s;
            };
            list.push_back(std::move(spec));
        }
        {
            ProblemSpec spec;
            spec.name = "quartic-chain";
            spec.family = ProblemFamily::variational;
            spec.declared_rho_max = 2;
            spec.adjusted_n = [](int n) { return std::max(n, 2); };
            spec.constructor = [](int n) {
                n = std::max(n, 2);
                return make_extended_function(
                    n, [](auto x, auto& out) { quartic_chain_components(x, out); });
            };
            spec.reference_pattern = [](int n) {
                n = std::max(n, 2);
                return banded_pattern(n - 1, n, 2);
            };
            spec.standard_start = [](int n) {
                StandardStart s;
                s.x0.assign(std::max(n, 2), 1.0);
                return s;
            };
            list.push_back(std::move(spec));
        }
        {
            ProblemSpec spec;
            spec.name = "diag";
            spec.family = ProblemFamily::variational;
            spec.declared_rho_max = 1;
            spec.adjusted_n = [](int n) { return std::max(n, 1); };
            spec.constructor = [](int n) {
                n = std::max(n, 1);
                return make_extended_function(n,
                                              [](auto x, auto& out) { diag_components(x, out); });
            };
            spec.reference_pattern = [](int n) { return banded_pattern(std::max(n, 1), std::max(n, 1), 1); };
            spec.standard_start = [](int n) {
                StandardStart s;
                s.x0.assign(std::max(n, 1), 1.0);
                return s;
            };
            list.push_back(std::move(spec));
        }
        return list;
    }();
    return problems;
}

const ProblemSpec& find_problem(const std::string& name) {
    for (const ProblemSpec& spec : catalog())
        if (spec.name == name) return spec;
    throw std::invalid_argument("unknown problem: " + name);
}

std::vector<double> dense_gradient(const ExtendedFunction& F, std::span<const double> x) {
    const int n = F.n();
    std::vector<double> g(n, 0.0);
    for (int j = 0; j < n; ++j) {
        Matrix ej(n, 1);
        ej(j, 0) = 1.0;
        const CompressedMatrix col = eval_compressed_jacobian(F, x, ej);
        double sum = 0.0;
        for (int i = 0; i < col.rows(); ++i) sum += col(i, 0);
        g[j] = sum;
    }
    return g;
}

Matrix dense_hessian(const ExtendedFunction& F, std::span<const double> x) {
    const int n = F.n();
    Matrix H(n, n);
    std::vector<double> ej(n, 0.0);
    for (int j = 0; j < n; ++j) {
        ej[j] = 1.0;
        const std::vector<double> column = eval_hessian_vector(F, x, ej, HvpMode::exact);
        for (int i = 0; i < n; ++i) H(i, j) = column[i];
        ej[j] = 0.0;
    }
    return H;
}

} // namespace psad
