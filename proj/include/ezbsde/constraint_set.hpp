#pragma once

// Closed (possibly non-convex) constraint sets with Euclidean distance and
// nearest-point projection.  Variants: the full space, a closed interval, a
// box (per-coordinate intervals), a finite union of closed 1-D intervals and
// a finite point set.
//
// Projection onto a non-convex set can have several minimizers; we always
// return the lexicographically smallest one so results are deterministic.

#include <array>
#include <string>
#include <vector>

namespace ezbsde {

struct ConstraintSet {
    enum class Kind { FullSpace, Interval, Box, UnionOfIntervals, FiniteSet };

    Kind kind = Kind::FullSpace;
    int dim = 1;

    // Interval: ivals.size() == 1 (1-D).  Box: one entry per coordinate.
    // UnionOfIntervals: any number of 1-D intervals (kept sorted by lo).
    std::vector<std::array<double, 2>> ivals;
    // FiniteSet: flat list of points, dim doubles per point (kept sorted).
    std::vector<double> points;

    bool is_convex() const {
        return kind == Kind::FullSpace || kind == Kind::Interval ||
               kind == Kind::Box;
    }
    std::string describe()/* for reports / error messages */ const;
};

ConstraintSet make_full_space(int dim = 1);
ConstraintSet make_interval(double lo, double hi);
ConstraintSet make_box(const std::vector<std::array<double, 2>>& per_coord);
ConstraintSet make_union_of_intervals(
    const std::vector<std::array<double, 2>>& intervals);
ConstraintSet make_finite_set(const std::vector<double>& pts, int dim = 1);

// inf_{p in set} |u - p|; zero iff u is in the set.
double distance(const ConstraintSet& set, const std::vector<double>& u);
double distance1(const ConstraintSet& set, double u);  // 1-D convenience

// Nearest point in the set (lexicographically smallest on ties).
std::vector<double> project(const ConstraintSet& set,
                            const std::vector<double>& u);
double project1(const ConstraintSet& set, double u);  // 1-D convenience

// Minimum-norm element and its norm C_p.  Returns (0, 0) whenever the set
// contains the origin.
struct BoundedElement {
    std::vector<double> point;
    double C_p = 0.0;
};
BoundedElement bounded_element(const ConstraintSet& set);

// Membership test via exact interval arithmetic (endpoints inclusive).
bool contains(const ConstraintSet& set, const std::vector<double>& u);

// p = sigma' pi and its inverse.  Volatility is n x n; the built-in models
// are one-dimensional so a scalar overload is provided as well.
std::vector<double> pi_to_p(const std::vector<std::vector<double>>& sigma,
                            const std::vector<double>& pi);
std::vector<double> p_to_pi(const std::vector<std::vector<double>>& sigma,
                            const std::vector<double>& p);
inline double pi_to_p(double sigma, double pi) { return sigma * pi; }
double p_to_pi(double sigma, double p);  // throws on sigma == 0

// The p-space constraint A = {sigma' pi : pi in Lambda} for scalar sigma:
// every interval endpoint / point is scaled by sigma (order flips when
// sigma < 0).  FullSpace is invariant.
ConstraintSet scale_set(const ConstraintSet& set, double sigma);

// project1(scale_set(set, sigma), u) without building the scaled set — the
// BSDE driver calls this once per path per Picard pass, so no allocation.
// Tie-breaking matches project1 on the scaled set exactly.
double project1_scaled(const ConstraintSet& set, double sigma, double u);
inline double distance1_scaled(const ConstraintSet& set, double sigma,
                               double u) {
    const double p = project1_scaled(set, sigma, u);
    return u > p ? u - p : p - u;
}

}  // namespace ezbsde
