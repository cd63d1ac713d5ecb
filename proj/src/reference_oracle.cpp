#include "zonosvm/reference_oracle.hpp"

#include <Eigen/Geometry>
#include <Eigen/QR>

#include <algorithm>
#include <cmath>
#include <limits>
#include <random>
#include <set>
#include <stdexcept>
#include <vector>

namespace zonosvm {

namespace {

void require(bool ok, const char* message) {
    if (!ok) throw std::invalid_argument(message);
}

std::vector<Vec> candidate_directions(const Mat& pts, const OracleConfig& cfg,
                                      const std::vector<Vec>& extra) {
    const Index m = pts.rows();
    const Index d = pts.cols();
    std::vector<Vec> dirs;

    std::vector<Vec> diffs;
    for (Index i = 0; i < m; ++i) {
        for (Index j = i + 1; j < m; ++j) {
            Vec diff = (pts.row(i) - pts.row(j)).transpose();
            if (diff.norm() > 0.0) diffs.push_back(std::move(diff));
        }
    }
    for (const Vec& diff : diffs) {
        dirs.push_back(diff);
        dirs.push_back(-diff);
        if (d == 2) {
            Vec normal(2);
            normal << -diff[1], diff[0];
            dirs.push_back(normal);
            dirs.push_back(-normal);
        }
    }
    if (d == 3) {
        for (std::size_t i = 0; i < diffs.size(); ++i) {
            for (std::size_t j = i + 1; j < diffs.size(); ++j) {
                Vec c = diffs[i].head<3>().cross(diffs[j].head<3>());
                if (c.norm() > 0.0) {
                    dirs.push_back(c);
                    dirs.push_back(-c);
                }
            }
        }
    }

    std::mt19937_64 rng(cfg.seed);
    std::normal_distribution<double> gauss(0.0, 1.0);
    for (int s = 0; s < cfg.direction_samples; ++s) {
        Vec w(d);
        for (Index i = 0; i < d; ++i) w[i] = gauss(rng);
        if (w.norm() > 0.0) dirs.push_back(std::move(w));
    }
    for (const Vec& w : extra) {
        if (w.size() == d && w.norm() > 0.0) {
            dirs.push_back(w);
            dirs.push_back(-w);
        }
    }
    return dirs;
}

}  // namespace

std::vector<HullVertexWitness> enumerate_hull_vertices(const ReducedHull& h,
                                                       const OracleConfig& cfg,
                                                       const std::vector<Vec>& extra_directions) {
    const Index m = h.count();
    require(m <= cfg.max_n, "enumerate_hull_vertices: too many points for the brute oracle.");
    require(m <= 63, "enumerate_hull_vertices: subset masks need m <= 63.");
    const double k_real = 1.0 / h.mu;
    const Index k = static_cast<Index>(std::llround(k_real));
    require(k >= 1 && std::abs(static_cast<double>(k) * h.mu - 1.0) <= 1e-9,
            "enumerate_hull_vertices: cap must be 1/k for an integer k.");

    std::set<std::uint64_t> masks;
    if (k >= m) {
        masks.insert((std::uint64_t{1} << m) - 1);
    } else {
        const auto dirs = candidate_directions(h.points, cfg, extra_directions);
        std::vector<Index> order(static_cast<std::size_t>(m));
        for (const Vec& w : dirs) {
            const Vec proj = h.points * w;
            for (Index i = 0; i < m; ++i) order[static_cast<std::size_t>(i)] = i;
            std::sort(order.begin(), order.end(), [&](Index a, Index b) {
                if (proj[a] != proj[b]) return proj[a] > proj[b];
                return a < b;
            });
            // Strict separation of the top-k set from the rest certifies a vertex.
            if (proj[order[static_cast<std::size_t>(k - 1)]] <=
                proj[order[static_cast<std::size_t>(k)]]) {
                continue;
            }
            std::uint64_t mask = 0;
            for (Index r = 0; r < k; ++r) {
                mask |= std::uint64_t{1} << order[static_cast<std::size_t>(r)];
            }
            masks.insert(mask);
        }
    }

    std::vector<HullVertexWitness> vertices;
    vertices.reserve(masks.size());
    for (std::uint64_t mask : masks) {
        HullVertexWitness v;
        v.weights = Vec::Zero(m);
        v.point = Vec::Zero(h.dim());
        for (Index i = 0; i < m; ++i) {
            if (mask & (std::uint64_t{1} << i)) {
                v.weights[i] = h.mu;
                v.point += h.mu * h.points.row(i).transpose();
            }
        }
        vertices.push_back(std::move(v));
    }
    return vertices;
}

double brute_lmo(const Zonotope& z, const Vec& w, const OracleConfig& cfg) {
    require(z.count() <= cfg.max_n, "brute_lmo: too many generators for the brute oracle.");
    require(w.size() == z.dim(), "brute_lmo: direction dimension mismatch.");
    const Index m = z.count();
    const Vec proj = z.generators * w;
    double best = -std::numeric_limits<double>::infinity();
    for (std::uint64_t mask = 0; mask < (std::uint64_t{1} << m); ++mask) {
        double value = 0.0;
        for (Index i = 0; i < m; ++i) {
            if (mask & (std::uint64_t{1} << i)) value += z.upper[i] * proj[i];
        }
        best = std::max(best, value);
    }
    return best;
}

double brute_lmo(const ReducedHull& h, const Vec& w, const OracleConfig& cfg) {
    require(w.size() == h.dim(), "brute_lmo: direction dimension mismatch.");
    const auto vertices = enumerate_hull_vertices(h, cfg, {w});
    double best = -std::numeric_limits<double>::infinity();
    for (const auto& v : vertices) {
        best = std::max(best, w.dot(v.point));
    }
    return best;
}

namespace {

enum class Slot { zero, capped, free_weight };

struct ClassAssignment {
    std::vector<Index> capped;  // positions within the class
    std::vector<Index> free;
    double total_free = 0.0;    // mass the free weights must supply
};

// All {0, mu, free} assignments of one class with at most max_free free
// weights whose mass requirement is satisfiable.
std::vector<ClassAssignment> class_assignments(Index m, double mu, Index max_free) {
    std::vector<ClassAssignment> out;
    std::vector<Slot> slot(static_cast<std::size_t>(m), Slot::zero);
    const double slack = 1e-9;
    while (true) {
        ClassAssignment a;
        for (Index i = 0; i < m; ++i) {
            if (slot[static_cast<std::size_t>(i)] == Slot::capped) a.capped.push_back(i);
            if (slot[static_cast<std::size_t>(i)] == Slot::free_weight) a.free.push_back(i);
        }
        if (static_cast<Index>(a.free.size()) <= max_free) {
            a.total_free = 1.0 - mu * static_cast<double>(a.capped.size());
            const double capacity = mu * static_cast<double>(a.free.size());
            const bool feasible = a.free.empty()
                                      ? std::abs(a.total_free) <= slack
                                      : (a.total_free >= -slack &&
                                         a.total_free <= capacity + slack);
            if (feasible) out.push_back(std::move(a));
        }
        // Advance the base-3 counter.
        Index pos = 0;
        while (pos < m) {
            auto& s = slot[static_cast<std::size_t>(pos)];
            if (s == Slot::zero) {
                s = Slot::capped;
                break;
            }
            if (s == Slot::capped) {
                s = Slot::free_weight;
                break;
            }
            s = Slot::zero;
            ++pos;
        }
        if (pos == m) break;
    }
    return out;
}

}  // namespace

BruteNearestResult brute_nearest(const LabeledDataset& ds, double mu,
                                 const OracleConfig& cfg) {
    require(ds.size() <= cfg.max_n, "brute_nearest: too many samples for the brute oracle.");
    const double min_class = static_cast<double>(
        std::min(ds.positives().size(), ds.negatives().size()));
    require(std::isfinite(mu) && mu > 0.0 && mu <= 1.0 + 1e-12 &&
                mu * min_class >= 1.0 - 1e-9,
            "brute_nearest: cap is infeasible for this dataset.");

    const Index d = ds.dim();
    const Mat& xp = ds.class_points(+1);
    const Mat& xm = ds.class_points(-1);
    const Index mp = xp.rows();
    const Index mm = xm.rows();
    const Index max_free = d + 2;

    const auto plus_assignments = class_assignments(mp, mu, max_free);
    const auto minus_assignments = class_assignments(mm, mu, max_free);

    BruteNearestResult best;
    best.squared_norm = std::numeric_limits<double>::infinity();

    for (const auto& pa : plus_assignments) {
        Vec fixed = Vec::Zero(d);
        for (Index i : pa.capped) fixed += mu * xp.row(i).transpose();
        for (const auto& na : minus_assignments) {
            Vec base = fixed;
            for (Index i : na.capped) base -= mu * xm.row(i).transpose();
            const Index fp = static_cast<Index>(pa.free.size());
            const Index fm = static_cast<Index>(na.free.size());
            const Index f = fp + fm;

            Vec free_weights(f);
            if (f > 0) {
                // Equality-constrained least squares via its stationarity
                // system; a rank-revealing solve tolerates degenerate faces.
                Mat a(d, f);
                for (Index c = 0; c < fp; ++c) a.col(c) = xp.row(pa.free[c]).transpose();
                for (Index c = 0; c < fm; ++c) a.col(fp + c) = -xm.row(na.free[c]).transpose();
                Mat constraints = Mat::Zero(2, f);
                constraints.row(0).head(fp).setOnes();
                constraints.row(1).tail(fm).setOnes();

                Mat kkt = Mat::Zero(f + 2, f + 2);
                kkt.topLeftCorner(f, f) = 2.0 * a.transpose() * a;
                kkt.topRightCorner(f, 2) = constraints.transpose();
                kkt.bottomLeftCorner(2, f) = constraints;
                Vec rhs(f + 2);
                rhs.head(f) = -2.0 * a.transpose() * base;
                rhs[f] = pa.total_free;
                rhs[f + 1] = na.total_free;

                const Vec sol = kkt.completeOrthogonalDecomposition().solve(rhs);
                const double residual = (kkt * sol - rhs).norm();
                if (!(residual <= 1e-8 * (1.0 + rhs.norm()))) continue;
                free_weights = sol.head(f);
                if ((free_weights.array() < -1e-9).any() ||
                    (free_weights.array() > mu + 1e-9).any()) {
                    continue;
                }
                free_weights = free_weights.cwiseMax(0.0).cwiseMin(mu);
            } else if (std::abs(pa.total_free) > 1e-9 || std::abs(na.total_free) > 1e-9) {
                continue;
            }

            Vec alpha = Vec::Zero(ds.size());
            for (Index i : pa.capped) alpha[ds.positives()[static_cast<std::size_t>(i)]] = mu;
            for (Index i : na.capped) alpha[ds.negatives()[static_cast<std::size_t>(i)]] = mu;
            for (Index c = 0; c < fp; ++c) {
                alpha[ds.positives()[static_cast<std::size_t>(pa.free[c])]] = free_weights[c];
            }
            for (Index c = 0; c < fm; ++c) {
                alpha[ds.negatives()[static_cast<std::size_t>(na.free[c])]] =
                    free_weights[fp + c];
            }

            Vec point = Vec::Zero(d);
            for (Index i = 0; i < ds.size(); ++i) {
                point += static_cast<double>(ds.label(i)) * alpha[i] * ds.point(i);
            }
            const double value = point.squaredNorm();
            if (value < best.squared_norm) {
                best.squared_norm = value;
                best.alpha = std::move(alpha);
                best.point = std::move(point);
            }
        }
    }
    return best;
}

}  // namespace zonosvm
