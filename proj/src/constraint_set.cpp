#include "ezbsde/constraint_set.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>
#include <stdexcept>

#include <Eigen/Dense>

namespace ezbsde {

namespace {

void check_dim(const ConstraintSet& set, const std::vector<double>& u) {
    if (static_cast<int>(u.size()) != set.dim)
        throw std::invalid_argument("constraint set: point dimension " +
                                    std::to_string(u.size()) +
                                    " does not match set dimension " +
                                    std::to_string(set.dim));
}

double clamp(double x, double lo, double hi) {
    return std::min(std::max(x, lo), hi);
}

}  // namespace

std::string ConstraintSet::describe() const {
    std::ostringstream os;
    switch (kind) {
        case Kind::FullSpace:
            os << "full";
            break;
        case Kind::Interval:
            os << "interval " << ivals[0][0] << " " << ivals[0][1];
            break;
        case Kind::Box:
            os << "box";
            for (const auto& iv : ivals) os << " [" << iv[0] << " " << iv[1] << "]";
            break;
        case Kind::UnionOfIntervals:
            os << "union";
            for (const auto& iv : ivals) os << " [" << iv[0] << " " << iv[1] << "]";
            break;
        case Kind::FiniteSet:
            os << "finite";
            for (double p : points) os << " " << p;
            break;
    }
    return os.str();
}

ConstraintSet make_full_space(int dim) {
    if (dim < 1) throw std::invalid_argument("constraint set: dim must be >= 1");
    ConstraintSet s;
    s.kind = ConstraintSet::Kind::FullSpace;
    s.dim = dim;
    return s;
}

ConstraintSet make_interval(double lo, double hi) {
    if (!(lo <= hi))
        throw std::invalid_argument("constraint set: interval needs lo <= hi");
    ConstraintSet s;
    s.kind = ConstraintSet::Kind::Interval;
    s.dim = 1;
    s.ivals = {{lo, hi}};
    return s;
}

ConstraintSet make_box(const std::vector<std::array<double, 2>>& per_coord) {
    if (per_coord.empty())
        throw std::invalid_argument("constraint set: box needs >= 1 coordinate");
    for (const auto& iv : per_coord)
        if (!(iv[0] <= iv[1]))
            throw std::invalid_argument("constraint set: box interval needs lo <= hi");
    ConstraintSet s;
    s.kind = ConstraintSet::Kind::Box;
    s.dim = static_cast<int>(per_coord.size());
    s.ivals = per_coord;
    return s;
}

ConstraintSet make_union_of_intervals(
    const std::vector<std::array<double, 2>>& intervals) {
    if (intervals.empty())
        throw std::invalid_argument("constraint set: union needs >= 1 interval");
    for (const auto& iv : intervals)
        if (!(iv[0] <= iv[1]))
            throw std::invalid_argument("constraint set: union interval needs lo <= hi");
    ConstraintSet s;
    s.kind = ConstraintSet::Kind::UnionOfIntervals;
    s.dim = 1;
    s.ivals = intervals;
    std::sort(s.ivals.begin(), s.ivals.end(),
              [](const auto& a, const auto& b) { return a[0] < b[0]; });
    return s;
}

ConstraintSet make_finite_set(const std::vector<double>& pts, int dim) {
    if (pts.empty() || dim < 1 || pts.size() % dim != 0)
        throw std::invalid_argument("constraint set: finite set needs k*dim points");
    ConstraintSet s;
    s.kind = ConstraintSet::Kind::FiniteSet;
    s.dim = dim;
    s.points = pts;
    if (dim == 1) std::sort(s.points.begin(), s.points.end());
    return s;
}

std::vector<double> project(const ConstraintSet& set,
                            const std::vector<double>& u) {
    check_dim(set, u);
    switch (set.kind) {
        case ConstraintSet::Kind::FullSpace:
            return u;
        case ConstraintSet::Kind::Interval:
            return {clamp(u[0], set.ivals[0][0], set.ivals[0][1])};
        case ConstraintSet::Kind::Box: {
            std::vector<double> p(u.size());
            for (size_t i = 0; i < u.size(); ++i)
                p[i] = clamp(u[i], set.ivals[i][0], set.ivals[i][1]);
            return p;
        }
        case ConstraintSet::Kind::UnionOfIntervals: {
            // Candidate per interval is the clamp; pick smallest distance,
            // ties broken by the smaller point (intervals are sorted).
            double best = std::numeric_limits<double>::infinity();
            double bestp = 0.0;
            for (const auto& iv : set.ivals) {
                const double c = clamp(u[0], iv[0], iv[1]);
                const double d = std::abs(u[0] - c);
                if (d < best || (d == best && c < bestp)) {
                    best = d;
                    bestp = c;
                }
            }
            return {bestp};
        }
        case ConstraintSet::Kind::FiniteSet: {
            const int k = static_cast<int>(set.points.size()) / set.dim;
            double best = std::numeric_limits<double>::infinity();
            int besti = 0;
            for (int i = 0; i < k; ++i) {
                double d2 = 0.0;
                for (int j = 0; j < set.dim; ++j) {
                    const double diff = u[j] - set.points[i * set.dim + j];
                    d2 += diff * diff;
                }
                if (d2 < best) {
                    best = d2;
                    besti = i;
                } else if (d2 == best) {
                    // lexicographic tie-break
                    for (int j = 0; j < set.dim; ++j) {
                        const double a = set.points[i * set.dim + j];
                        const double b = set.points[besti * set.dim + j];
                        if (a < b) {
                            besti = i;
                            break;
                        }
                        if (a > b) break;
                    }
                }
            }
            return std::vector<double>(set.points.begin() + besti * set.dim,
                                       set.points.begin() + (besti + 1) * set.dim);
        }
    }
    throw std::logic_error("constraint set: unknown kind");
}

double distance(const ConstraintSet& set, const std::vector<double>& u) {
    const std::vector<double> p = project(set, u);
    double d2 = 0.0;
    for (size_t i = 0; i < u.size(); ++i) d2 += (u[i] - p[i]) * (u[i] - p[i]);
    return std::sqrt(d2);
}

double distance1(const ConstraintSet& set, double u) {
    return distance(set, std::vector<double>{u});
}

double project1(const ConstraintSet& set, double u) {
    return project(set, std::vector<double>{u})[0];
}

bool contains(const ConstraintSet& set, const std::vector<double>& u) {
    check_dim(set, u);
    switch (set.kind) {
        case ConstraintSet::Kind::FullSpace:
            return true;
        case ConstraintSet::Kind::Interval:
            return u[0] >= set.ivals[0][0] && u[0] <= set.ivals[0][1];
        case ConstraintSet::Kind::Box:
            for (size_t i = 0; i < u.size(); ++i)
                if (u[i] < set.ivals[i][0] || u[i] > set.ivals[i][1]) return false;
            return true;
        case ConstraintSet::Kind::UnionOfIntervals:
            for (const auto& iv : set.ivals)
                if (u[0] >= iv[0] && u[0] <= iv[1]) return true;
            return false;
        case ConstraintSet::Kind::FiniteSet: {
            const int k = static_cast<int>(set.points.size()) / set.dim;
            for (int i = 0; i < k; ++i) {
                bool eq = true;
                for (int j = 0; j < set.dim; ++j)
                    if (u[j] != set.points[i * set.dim + j]) {
                        eq = false;
                        break;
                    }
                if (eq) return true;
            }
            return false;
        }
    }
    return false;
}

BoundedElement bounded_element(const ConstraintSet& set) {
    // Projection of the origin *is* the minimum-norm element for every
    // variant we support (clamp of 0 per interval / coordinate, or the
    // closest point of a finite set).
    BoundedElement be;
    be.point = project(set, std::vector<double>(set.dim, 0.0));
    double n2 = 0.0;
    for (double x : be.point) n2 += x * x;
    be.C_p = std::sqrt(n2);
    if (be.C_p == 0.0) be.point.assign(set.dim, 0.0);
    return be;
}

std::vector<double> pi_to_p(const std::vector<std::vector<double>>& sigma,
                            const std::vector<double>& pi) {
    const size_t n = pi.size();
    if (sigma.size() != n)
        throw std::invalid_argument("pi_to_p: sigma must be n x n");
    std::vector<double> p(n, 0.0);
    for (size_t i = 0; i < n; ++i) {
        if (sigma[i].size() != n)
            throw std::invalid_argument("pi_to_p: sigma must be n x n");
        for (size_t j = 0; j < n; ++j) p[i] += sigma[j][i] * pi[j];  // sigma' pi
    }
    return p;
}

std::vector<double> p_to_pi(const std::vector<std::vector<double>>& sigma,
                            const std::vector<double>& p) {
    const size_t n = p.size();
    if (sigma.size() != n)
        throw std::invalid_argument("p_to_pi: sigma must be n x n");
    Eigen::MatrixXd st(n, n);  // sigma transposed, so st * pi = p
    for (size_t i = 0; i < n; ++i) {
        if (sigma[i].size() != n)
            throw std::invalid_argument("p_to_pi: sigma must be n x n");
        for (size_t j = 0; j < n; ++j) st(j, i) = sigma[i][j];
    }
    Eigen::FullPivLU<Eigen::MatrixXd> lu(st);
    if (!lu.isInvertible())
        throw std::invalid_argument("p_to_pi: singular sigma");
    Eigen::VectorXd rhs(n);
    for (size_t i = 0; i < n; ++i) rhs(i) = p[i];
    Eigen::VectorXd pi = lu.solve(rhs);
    return std::vector<double>(pi.data(), pi.data() + n);
}

double p_to_pi(double sigma, double p) {
    if (sigma == 0.0)
        throw std::invalid_argument("p_to_pi: singular sigma");
    return p / sigma;
}

double project1_scaled(const ConstraintSet& set, double sigma, double u) {
    if (set.dim != 1)
        throw std::invalid_argument("project1_scaled: 1-D sets only");
    switch (set.kind) {
        case ConstraintSet::Kind::FullSpace:
            return u;
        case ConstraintSet::Kind::Interval: {
            const double a = set.ivals[0][0] * sigma;
            const double b = set.ivals[0][1] * sigma;
            return clamp(u, std::min(a, b), std::max(a, b));
        }
        case ConstraintSet::Kind::Box:
            return clamp(u, std::min(set.ivals[0][0] * sigma,
                                     set.ivals[0][1] * sigma),
                         std::max(set.ivals[0][0] * sigma,
                                  set.ivals[0][1] * sigma));
        case ConstraintSet::Kind::UnionOfIntervals: {
            double best = std::numeric_limits<double>::infinity();
            double bestp = 0.0;
            for (const auto& iv : set.ivals) {
                const double a = iv[0] * sigma, b = iv[1] * sigma;
                const double c = clamp(u, std::min(a, b), std::max(a, b));
                const double d = std::abs(u - c);
                if (d < best || (d == best && c < bestp)) {
                    best = d;
                    bestp = c;
                }
            }
            return bestp;
        }
        case ConstraintSet::Kind::FiniteSet: {
            double best = std::numeric_limits<double>::infinity();
            double bestp = 0.0;
            for (double q : set.points) {
                const double c = q * sigma;
                const double d = std::abs(u - c);
                if (d < best || (d == best && c < bestp)) {
                    best = d;
                    bestp = c;
                }
            }
            return bestp;
        }
    }
    throw std::logic_error("project1_scaled: unknown kind");
}

ConstraintSet scale_set(const ConstraintSet& set, double sigma) {
    if (set.dim != 1)
        throw std::invalid_argument("scale_set: 1-D sets only");
    ConstraintSet s = set;
    switch (set.kind) {
        case ConstraintSet::Kind::FullSpace:
            return s;
        case ConstraintSet::Kind::Interval:
        case ConstraintSet::Kind::Box:
        case ConstraintSet::Kind::UnionOfIntervals:
            for (auto& iv : s.ivals) {
                double a = iv[0] * sigma, b = iv[1] * sigma;
                iv = {std::min(a, b), std::max(a, b)};
            }
            if (s.kind == ConstraintSet::Kind::UnionOfIntervals)
                std::sort(s.ivals.begin(), s.ivals.end(),
                          [](const auto& a, const auto& b) { return a[0] < b[0]; });
            return s;
        case ConstraintSet::Kind::FiniteSet:
            for (auto& p : s.points) p *= sigma;
            std::sort(s.points.begin(), s.points.end());
            return s;
    }
    throw std::logic_error("scale_set: unknown kind");
}

}  // namespace ezbsde
