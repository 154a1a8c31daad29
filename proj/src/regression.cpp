#include "ezbsde/regression.hpp"

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace ezbsde {

double PolyFit::operator()(double x) const {
    const double xc = std::min(std::max(x, x_lo), x_hi);
    const double u = (xc - center) / halfwidth;
    // Horner
    double acc = 0.0;
    for (size_t k = coef.size(); k-- > 0;) acc = acc * u + coef[k];
    return acc;
}

double mean_of(const std::vector<double>& v) {
    if (v.empty()) return 0.0;
    double s = 0.0;
    for (double x : v) s += x;
    return s / static_cast<double>(v.size());
}

double sd_of(const std::vector<double>& v) {
    const size_t n = v.size();
    if (n < 2) return 0.0;
    const double m = mean_of(v);
    double s = 0.0;
    for (double x : v) s += (x - m) * (x - m);
    return std::sqrt(s / static_cast<double>(n - 1));
}

PolyFit fit_poly(const std::vector<double>& x, const std::vector<double>& y,
                 int degree, double ridge) {
    if (x.size() != y.size() || x.empty())
        throw std::invalid_argument("fit_poly: mismatched or empty samples");
    if (degree < 0) throw std::invalid_argument("fit_poly: degree < 0");

    const size_t M = x.size();
    PolyFit fit;
    fit.x_lo = *std::min_element(x.begin(), x.end());
    fit.x_hi = *std::max_element(x.begin(), x.end());
    fit.center = 0.5 * (fit.x_lo + fit.x_hi);
    fit.halfwidth = 0.5 * (fit.x_hi - fit.x_lo);

    const double ymean = mean_of(y);
    double ss_tot = 0.0;
    for (double v : y) ss_tot += (v - ymean) * (v - ymean);

    // constant state (or degree 0): conditional mean is just the mean;
    // R^2 = 1 for a noiseless (constant) target, 0 otherwise
    if (fit.halfwidth < 1e-12 || degree == 0) {
        fit.halfwidth = 1.0;
        fit.coef = {ymean};
        fit.r2 = ss_tot > 1e-300 ? 0.0 : 1.0;
        return fit;
    }

    const int K = degree + 1;
    // Gram-matrix normal equations in standardized u; K is small (<= ~6) so
    // accumulate A = B'B and rhs = B'y in one pass without storing B.
    Eigen::MatrixXd A = Eigen::MatrixXd::Zero(K, K);
    Eigen::VectorXd rhs = Eigen::VectorXd::Zero(K);
    std::vector<double> pw(K);
    for (size_t m = 0; m < M; ++m) {
        const double u = (x[m] - fit.center) / fit.halfwidth;
        pw[0] = 1.0;
        for (int k = 1; k < K; ++k) pw[k] = pw[k - 1] * u;
        for (int i = 0; i < K; ++i) {
            rhs(i) += pw[i] * y[m];
            for (int j = i; j < K; ++j) A(i, j) += pw[i] * pw[j];
        }
    }
    for (int i = 0; i < K; ++i)
        for (int j = 0; j < i; ++j) A(i, j) = A(j, i);
    A.diagonal().array() += ridge * static_cast<double>(M);

    Eigen::VectorXd beta = A.ldlt().solve(rhs);
    if (!beta.allFinite())
        throw std::runtime_error("fit_poly: singular normal equations");
    fit.coef.assign(beta.data(), beta.data() + K);

    if (ss_tot > 1e-300) {
        double ss_res = 0.0;
        for (size_t m = 0; m < M; ++m) {
            const double e = y[m] - fit(x[m]);
            ss_res += e * e;
        }
        fit.r2 = 1.0 - ss_res / ss_tot;
    }
    return fit;
}

}  // namespace ezbsde
