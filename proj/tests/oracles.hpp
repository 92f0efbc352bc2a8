// Test-only oracles, kept independent of the library's own solvers:
// dense eigen/SVD routes go through Eigen, quadrature oracles through
// extended precision, derivatives through central differences.
#pragma once

#include <complex>
#include <random>
#include <vector>

#include <Eigen/Dense>

#include "schottky/measure.hpp"

namespace oracle {

struct PerronData {
    double lambda;
    std::vector<double> left;
};

// leading eigenvalue and left vector of a dense nonnegative matrix
inline PerronData dense_perron(const std::vector<std::vector<double>>& m) {
    const int n = static_cast<int>(m.size());
    Eigen::MatrixXd a(n, n);
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) a(i, j) = m[i][j];
    Eigen::EigenSolver<Eigen::MatrixXd> solver(a.transpose());
    int arg = 0;
    double best = -1;
    for (int i = 0; i < n; ++i) {
        const double mod = std::abs(solver.eigenvalues()(i));
        if (mod > best) {
            best = mod;
            arg = i;
        }
    }
    PerronData out;
    out.lambda = solver.eigenvalues()(arg).real();
    Eigen::VectorXcd v = solver.eigenvectors().col(arg);
    out.left.resize(n);
    double sum = 0;
    for (int i = 0; i < n; ++i) sum += v(i).real();
    for (int i = 0; i < n; ++i) out.left[i] = v(i).real() / sum;
    return out;
}

inline double dense_sigma_max(const std::vector<std::complex<double>>& entries, int n) {
    Eigen::MatrixXcd a(n, n);
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) a(i, j) = entries[i * n + j];
    return a.jacobiSvd().singularValues()(0);
}

// extended-precision oscillatory sum
inline std::complex<double> long_double_integral(const std::vector<schottky::Atom>& atoms,
                                                 double xi) {
    long double re = 0, im = 0;
    for (const auto& a : atoms) {
        const long double phase = static_cast<long double>(xi) * a.center;
        re += cosl(phase) * a.mass;
        im += sinl(phase) * a.mass;
    }
    return {static_cast<double>(re), static_cast<double>(im)};
}

inline double central_diff_xy(const std::function<double(double, double)>& f, double x,
                              double y, double step) {
    return (f(x + step, y + step) - f(x + step, y - step) - f(x - step, y + step) +
            f(x - step, y - step)) /
           (4 * step * step);
}

} // namespace oracle
