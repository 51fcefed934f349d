#pragma once

#include <algorithm>
#include <array>
#include <cmath>
#include <numbers>
#include <random>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

namespace floc {

// Euclidean locations. Everything in this header is double precision by
// design; there is no lattice to be exact over.
using PlanePoint = std::array<double, 2>;
using PlaneProfile = std::vector<PlanePoint>;

inline double plane_dist(const PlanePoint& p, const PlanePoint& q) {
    return std::hypot(p[0] - q[0], p[1] - q[1]);
}

inline double plane_sc(const PlaneProfile& prof, const PlanePoint& f) {
    double s = 0;
    for (const auto& p : prof) s += plane_dist(p, f);
    return s;
}

// General-dimension points for the sqrt(D) bound experiment.
using DimPoint = std::vector<double>;

inline double dim_dist(const DimPoint& p, const DimPoint& q) {
    double s = 0;
    for (std::size_t k = 0; k < p.size(); k++) s += (p[k] - q[k]) * (p[k] - q[k]);
    return std::sqrt(s);
}

inline double dim_sc(const std::vector<DimPoint>& prof, const DimPoint& f) {
    double s = 0;
    for (const auto& p : prof) s += dim_dist(p, f);
    return s;
}

// Coordinatewise median; the lower middle element breaks even-count ties.
inline DimPoint multi_median(const std::vector<DimPoint>& prof) {
    if (prof.empty()) throw std::invalid_argument("multi_median: empty profile");
    std::size_t d = prof[0].size();
    DimPoint out(d);
    std::vector<double> col(prof.size());
    for (std::size_t k = 0; k < d; k++) {
        for (std::size_t i = 0; i < prof.size(); i++) col[i] = prof[i][k];
        std::sort(col.begin(), col.end());
        out[k] = col[(col.size() - 1) / 2];
    }
    return out;
}

inline PlanePoint multi_median(const PlaneProfile& prof) {
    std::vector<DimPoint> pts;
    pts.reserve(prof.size());
    for (const auto& p : prof) pts.push_back({p[0], p[1]});
    DimPoint m = multi_median(pts);
    return {m[0], m[1]};
}

namespace detail {

// Cosine of the angle at `at` toward p and q. A vertex with a zero-length
// incident edge counts as folded flat (cos = -1), which routes degenerate
// triangles to the vertex rule where the answer is still correct.
inline double cos_at(const PlanePoint& at, const PlanePoint& p, const PlanePoint& q) {
    double ux = p[0] - at[0], uy = p[1] - at[1];
    double vx = q[0] - at[0], vy = q[1] - at[1];
    double nu = std::hypot(ux, uy), nv = std::hypot(vx, vy);
    if (nu == 0 || nv == 0) return -1.0;
    return (ux * vx + uy * vy) / (nu * nv);
}

}  // namespace detail

// Minimum over facilities of the total distance to three vertices.
// A vertex whose angle reaches 120 degrees hosts the facility, so the cost
// is the sum of its two incident edges; otherwise the closed form in the
// edge lengths applies. The two expressions agree at exactly 120 degrees,
// so inside a small boundary band both are evaluated and the smaller kept.
inline double fermat_sc(const PlanePoint& u, const PlanePoint& v, const PlanePoint& w) {
    double duv = plane_dist(u, v), duw = plane_dist(u, w), dvw = plane_dist(v, w);
    if (std::max({duv, duw, dvw}) == 0) return 0;
    double cu = detail::cos_at(u, v, w);
    double cv = detail::cos_at(v, u, w);
    double cw = detail::cos_at(w, u, v);
    double worst = cu, incident = duv + duw;
    if (cv < worst) { worst = cv; incident = duv + dvw; }
    if (cw < worst) { worst = cw; incident = duw + dvw; }
    auto closed_form = [&] {
        double t = 3.0 * (duv + duw + dvw) * (-duv + duw + dvw) * (duv - duw + dvw) *
                   (duv + duw - dvw);
        return std::sqrt(0.5 * (duv * duv + duw * duw + dvw * dvw + std::sqrt(std::max(0.0, t))));
    };
    const double tol = 1e-12;
    if (worst <= -0.5 + tol) {
        if (worst >= -0.5 - tol) return std::min(incident, closed_form());
        return incident;
    }
    return closed_form();
}

// Weiszfeld iteration for the point minimizing total distance, started at
// the centroid. An iterate landing within 1e-13 of an input point triggers
// the standard optimality test there; a pinned non-optimal iterate steps
// off along the remaining pull instead of dividing by zero.
inline DimPoint geometric_median(const std::vector<DimPoint>& prof, double tol = 1e-12,
                                 long long max_iters = 100000) {
    if (prof.empty()) throw std::invalid_argument("geometric_median: empty profile");
    std::size_t d = prof[0].size(), n = prof.size();
    DimPoint y(d, 0.0);
    for (const auto& p : prof)
        for (std::size_t k = 0; k < d; k++) y[k] += p[k] / (double)n;
    DimPoint pull(d), next(d);
    for (long long iter = 0; iter < max_iters; iter++) {
        double wsum = 0;
        int pinned = 0;
        std::fill(pull.begin(), pull.end(), 0.0);
        std::fill(next.begin(), next.end(), 0.0);
        for (const auto& p : prof) {
            double dist = dim_dist(p, y);
            if (dist < 1e-13) {
                pinned++;
                continue;
            }
            wsum += 1.0 / dist;
            for (std::size_t k = 0; k < d; k++) {
                next[k] += p[k] / dist;
                pull[k] -= (y[k] - p[k]) / dist;
            }
        }
        if (wsum == 0) return y;  // every input point sits at y
        double pn = 0;
        for (std::size_t k = 0; k < d; k++) pn += pull[k] * pull[k];
        pn = std::sqrt(pn);
        if (pinned > 0) {
            if (pn <= (double)pinned) return y;  // pinned point is optimal
            double keep = (double)pinned / pn;
            for (std::size_t k = 0; k < d; k++)
                next[k] = (1 - keep) * (next[k] / wsum) + keep * y[k];
        } else {
            for (std::size_t k = 0; k < d; k++) next[k] /= wsum;
        }
        double step = dim_dist(next, y);
        y = next;
        if (step < tol) return y;
    }
    std::ostringstream os;
    os << "geometric_median: no convergence after " << max_iters << " iterations, last iterate (";
    for (std::size_t k = 0; k < d; k++) os << (k ? ", " : "") << y[k];
    os << ")";
    throw std::runtime_error(os.str());
}

// Facility minimizing total distance in the plane. Three locations check
// the 120 degree vertex rule first; everything else runs Weiszfeld.
inline PlanePoint fermat_point(const PlaneProfile& prof, double tol = 1e-12,
                               long long max_iters = 100000) {
    if (prof.empty()) throw std::invalid_argument("fermat_point: empty profile");
    if (prof.size() == 1) return prof[0];
    if (prof.size() == 3) {
        for (int i = 0; i < 3; i++) {
            double c = detail::cos_at(prof[i], prof[(i + 1) % 3], prof[(i + 2) % 3]);
            if (c <= -0.5 + 1e-12) return prof[i];
        }
    }
    std::vector<DimPoint> pts;
    pts.reserve(prof.size());
    for (const auto& p : prof) pts.push_back({p[0], p[1]});
    DimPoint g = geometric_median(pts, tol, max_iters);
    return {g[0], g[1]};
}

// Triangle family with the comparison baked into the coordinates: C at the
// origin, B at (1, x), A at (1 + y, -z). For x, y, z >= 0 the coordinatewise
// median of the three vertices is exactly (1, 0).
struct TriangleInstance {
    double x = 0, y = 0, z = 0;
    PlanePoint A{}, B{}, C{};
    double a = 0, b = 0, c = 0;             // edge lengths: a spans BC, b spans AB, c spans AC
    double alpha = 0, beta = 0, gamma = 0;  // tan alpha = 1/x, tan beta = y/(x+z), tan gamma = z/(1+y)

    static TriangleInstance from_xyz(double x, double y, double z) {
        TriangleInstance t;
        t.x = x;
        t.y = y;
        t.z = z;
        t.C = {0, 0};
        t.B = {1, x};
        t.A = {1 + y, -z};
        t.a = std::sqrt(1 + x * x);
        t.b = std::sqrt(y * y + (z + x) * (z + x));
        t.c = std::sqrt(z * z + (1 + y) * (1 + y));
        t.alpha = std::atan2(1.0, x);
        t.beta = std::atan2(y, x + z);
        t.gamma = std::atan2(z, 1 + y);
        return t;
    }

    PlaneProfile profile() const { return {A, B, C}; }
};

// Total distance from the three vertices to the median point (1, 0),
// in closed form.
inline double mm_sc(const TriangleInstance& t) { return std::hypot(t.y, t.z) + t.x + 1; }

inline double mm_ratio(const TriangleInstance& t) {
    return mm_sc(t) / fermat_sc(t.A, t.B, t.C);
}

// Angle constraints carving out the instances whose cost minimizer stays
// interior: alpha + beta <= 120 degrees and (90 - alpha) + gamma <= 120.
inline bool non_obtuse_region(const TriangleInstance& t) {
    const double limit = 2.0 * std::numbers::pi / 3.0 + 1e-12;
    return t.alpha + t.beta <= limit && (std::numbers::pi / 2 - t.alpha) + t.gamma <= limit;
}

struct PlaneSearchResult {
    double ratio = 0;
    TriangleInstance witness;
};

// Grid maximization of mm_ratio over the family box [0,2]^3, then halved-step
// refinement boxes around the incumbent. Cells are scanned in lexicographic
// (x,y,z) order and only strict improvements move the incumbent, so the
// result is the lexicographically first maximizer regardless of evaluation
// order. The box with z >= 0 suffices: an instance with z < 0 maps to one
// in the box with the same ratio by reflecting and rescaling so that the
// median vertex pattern is restored.
inline PlaneSearchResult mm_worst_ratio_search(double grid_step = 0.01, int refinement_levels = 3,
                                               bool restrict_non_obtuse = false) {
    if (!(grid_step > 0))
        throw std::invalid_argument("mm_worst_ratio_search: grid_step must be positive");
    PlaneSearchResult best;
    best.ratio = -1;
    auto scan = [&](double lo0, double hi0, double lo1, double hi1, double lo2, double hi2,
                    double h) {
        long long n0 = std::llround(std::floor((hi0 - lo0) / h + 1e-9));
        long long n1 = std::llround(std::floor((hi1 - lo1) / h + 1e-9));
        long long n2 = std::llround(std::floor((hi2 - lo2) / h + 1e-9));
        for (long long i = 0; i <= n0; i++) {
            double x = lo0 + (double)i * h;
            for (long long j = 0; j <= n1; j++) {
                double y = lo1 + (double)j * h;
                for (long long k = 0; k <= n2; k++) {
                    double z = lo2 + (double)k * h;
                    auto t = TriangleInstance::from_xyz(x, y, z);
                    if (restrict_non_obtuse && !non_obtuse_region(t)) continue;
                    double r = mm_ratio(t);
                    if (r > best.ratio) {
                        best.ratio = r;
                        best.witness = t;
                    }
                }
            }
        }
    };
    scan(0, 2, 0, 2, 0, 2, grid_step);
    double h = grid_step;
    for (int lvl = 0; lvl < refinement_levels; lvl++) {
        double nh = h / 2;
        const auto& w = best.witness;
        scan(std::max(0.0, w.x - h), std::min(2.0, w.x + h), std::max(0.0, w.y - h),
             std::min(2.0, w.y + h), std::max(0.0, w.z - h), std::min(2.0, w.z + h), nh);
        h = nh;
    }
    return best;
}

// Max observed ratio of the coordinatewise median's total distance to a
// numeric geometric median's, over random profiles in [0,1]^D with
// n drawn from {3, 5, 7}.
inline double mm_ratio_bound_check(int D, long long trials, unsigned seed = 991) {
    if (D < 1 || D > 4)
        throw std::invalid_argument("mm_ratio_bound_check: D must be between 1 and 4");
    std::mt19937 rng(seed + (unsigned)D);
    std::uniform_real_distribution<double> coord(0.0, 1.0);
    std::uniform_int_distribution<int> pick(0, 2);
    const int sizes[3] = {3, 5, 7};
    double worst = 0;
    for (long long t = 0; t < trials; t++) {
        int n = sizes[pick(rng)];
        std::vector<DimPoint> prof(n, DimPoint(D));
        for (auto& p : prof)
            for (int k = 0; k < D; k++) p[k] = coord(rng);
        DimPoint mm = multi_median(prof);
        DimPoint gm = geometric_median(prof);
        double denom = dim_sc(prof, gm);
        if (denom <= 1e-12) continue;
        worst = std::max(worst, dim_sc(prof, mm) / denom);
    }
    return worst;
}

// Report of a profitable misreport against the exact cost minimizer.
struct ManipulationDemo {
    PlaneProfile profile;  // true locations
    int agent = 2;
    PlanePoint deviation{};
    double truthful_cost = 0;
    double deviating_cost = 0;
    double gain = 0;
};

// The cost-minimizing facility rule invites manipulation. On an isosceles
// triangle whose apex angle is exactly 120 degrees the facility sits on the
// apex; the agent opposite the apex can drag it along the 120 degree arc
// toward itself by reporting from further out. Scans candidate reports on
// a grid, refines around the best, and demands a strict improvement.
inline ManipulationDemo demo_optimal_not_sp() {
    const PlanePoint A{6, 0}, B{3, std::sqrt(3.0)}, C{0, 0};
    ManipulationDemo out;
    out.profile = {A, B, C};
    out.agent = 2;
    out.truthful_cost = plane_dist(C, fermat_point({A, B, C}));
    double best_gain = 0;
    PlanePoint best_q{0, 0};
    auto eval = [&](double qx, double qy) {
        PlanePoint f = fermat_point({A, B, PlanePoint{qx, qy}});
        double g = out.truthful_cost - plane_dist(C, f);
        if (g > best_gain) {
            best_gain = g;
            best_q = {qx, qy};
        }
    };
    double h = 0.1;
    for (long long i = 0; i <= 100; i++)
        for (long long j = 0; j <= 100; j++) eval(-2 + (double)i * h, -8 + (double)j * h);
    for (int lvl = 0; lvl < 3; lvl++) {
        double nh = h / 5;
        PlanePoint q0 = best_q;
        for (long long i = 0; i <= 10; i++)
            for (long long j = 0; j <= 10; j++)
                eval(q0[0] - h + (double)i * nh, q0[1] - h + (double)j * nh);
        h = nh;
    }
    if (best_gain <= 1e-6)
        throw std::runtime_error("demo_optimal_not_sp: no improving report found on the grid");
    out.deviation = best_q;
    out.gain = best_gain;
    out.deviating_cost = out.truthful_cost - best_gain;
    return out;
}

}  // namespace floc
