// spectral.hpp - dense symmetric eigendecomposition grouped into eigenprojectors,
// exact integer characteristic polynomials, transition amplitudes and the
// determinant / coronal identities used to validate them.

#pragma once

#include "graph.hpp"

#include <Eigen/Dense>
#include <boost/multiprecision/cpp_int.hpp>

#include <algorithm>
#include <cmath>
#include <complex>
#include <cstddef>
#include <istream>
#include <limits>
#include <optional>
#include <ostream>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace vcc {

using BigInt = boost::multiprecision::cpp_int;

inline constexpr double kDefaultGroupTol = 1e-7;
inline constexpr double kIntegerTol = 1e-6;

// ------------------------------ Jacobi solver ------------------------------

struct Eigensystem {
    Eigen::VectorXd values;   // ascending
    Eigen::MatrixXd vectors;  // orthonormal columns, vectors.col(i) <-> values(i)
    int sweeps{0};
};

inline bool is_exactly_symmetric(const Eigen::MatrixXd& m) {
    if (m.rows() != m.cols()) return false;
    for (Eigen::Index i = 0; i < m.rows(); ++i)
        for (Eigen::Index j = i + 1; j < m.cols(); ++j)
            if (m(i, j) != m(j, i)) return false;
    return true;
}

// Cyclic Jacobi rotations until the off-diagonal Frobenius norm falls below
// rel_tol * ||m||_F.
inline Eigensystem jacobi_eigensystem(const Eigen::MatrixXd& m, double rel_tol = 1e-12, int max_sweeps = 100) {
    if (!is_exactly_symmetric(m)) {
        throw std::invalid_argument("jacobi_eigensystem: matrix is not symmetric");
    }
    const Eigen::Index n = m.rows();
    Eigen::MatrixXd a = m;
    Eigen::MatrixXd v = Eigen::MatrixXd::Identity(n, n);

    auto off_norm = [&] {
        double s = 0.0;
        for (Eigen::Index i = 0; i < n; ++i)
            for (Eigen::Index j = i + 1; j < n; ++j) s += 2.0 * a(i, j) * a(i, j);
        return std::sqrt(s);
    };

    const double threshold = rel_tol * m.norm();
    int sweep = 0;
    while (off_norm() > threshold) {
        if (++sweep > max_sweeps) {
            throw std::runtime_error("jacobi_eigensystem: no convergence after " + std::to_string(max_sweeps) +
                                     " sweeps");
        }
        for (Eigen::Index p = 0; p < n; ++p) {
            for (Eigen::Index q = p + 1; q < n; ++q) {
                const double apq = a(p, q);
                if (apq == 0.0) continue;
                const double theta = (a(q, q) - a(p, p)) / (2.0 * apq);
                const double t = (theta >= 0 ? 1.0 : -1.0) / (std::abs(theta) + std::sqrt(theta * theta + 1.0));
                const double c = 1.0 / std::sqrt(t * t + 1.0);
                const double s = t * c;
                for (Eigen::Index r = 0; r < n; ++r) {
                    const double arp = a(r, p);
                    const double arq = a(r, q);
                    a(r, p) = c * arp - s * arq;
                    a(r, q) = s * arp + c * arq;
                }
                for (Eigen::Index r = 0; r < n; ++r) {
                    const double apr = a(p, r);
                    const double aqr = a(q, r);
                    a(p, r) = c * apr - s * aqr;
                    a(q, r) = s * apr + c * aqr;
                }
                a(p, q) = 0.0;
                a(q, p) = 0.0;
                for (Eigen::Index r = 0; r < n; ++r) {
                    const double vrp = v(r, p);
                    const double vrq = v(r, q);
                    v(r, p) = c * vrp - s * vrq;
                    v(r, q) = s * vrp + c * vrq;
                }
            }
        }
    }

    std::vector<Eigen::Index> order(static_cast<std::size_t>(n));
    for (Eigen::Index i = 0; i < n; ++i) order[static_cast<std::size_t>(i)] = i;
    std::stable_sort(order.begin(), order.end(), [&](Eigen::Index x, Eigen::Index y) { return a(x, x) < a(y, y); });

    Eigensystem out;
    out.values.resize(n);
    out.vectors.resize(n, n);
    for (Eigen::Index i = 0; i < n; ++i) {
        const auto src = order[static_cast<std::size_t>(i)];
        out.values(i) = a(src, src);
        out.vectors.col(i) = v.col(src);
    }
    out.sweeps = sweep;
    return out;
}

// ------------------------- spectral decomposition --------------------------

// Distinct eigenvalues (strictly increasing) with their orthogonal projectors.
struct SpectralDecomposition {
    std::vector<double> eigenvalues;
    std::vector<Eigen::MatrixXd> projectors;
    std::vector<int> multiplicities;

    std::size_t distinct() const noexcept { return eigenvalues.size(); }
    Eigen::Index order() const noexcept { return projectors.empty() ? 0 : projectors.front().rows(); }
};

// Multiplicity is round(trace F); a trace that is not close to an integer
// means the matrix is not a projector.
inline int projector_rank(const Eigen::MatrixXd& f) {
    const double tr = f.trace();
    const double r = std::round(tr);
    if (std::abs(tr - r) >= kIntegerTol) {
        throw std::logic_error("projector_rank: trace " + std::to_string(tr) + " is not an integer");
    }
    return static_cast<int>(r);
}

// Sorts (value, projector) pairs and merges values closer than group_tol,
// summing their projectors and averaging the values.
inline SpectralDecomposition assemble_decomposition(std::vector<std::pair<double, Eigen::MatrixXd>> terms,
                                                    double group_tol) {
    std::stable_sort(terms.begin(), terms.end(),
                     [](const auto& x, const auto& y) { return x.first < y.first; });
    SpectralDecomposition d;
    std::size_t i = 0;
    while (i < terms.size()) {
        double sum = terms[i].first;
        Eigen::MatrixXd proj = terms[i].second;
        std::size_t count = 1;
        std::size_t j = i + 1;
        while (j < terms.size() && terms[j].first - terms[j - 1].first < group_tol) {
            sum += terms[j].first;
            proj += terms[j].second;
            ++count;
            ++j;
        }
        d.eigenvalues.push_back(sum / static_cast<double>(count));
        d.multiplicities.push_back(projector_rank(proj));
        d.projectors.push_back(std::move(proj));
        i = j;
    }
    return d;
}

inline SpectralDecomposition eigendecompose(const Eigen::MatrixXd& m, double group_tol = kDefaultGroupTol) {
    if (!(group_tol > 0.0)) {
        throw std::invalid_argument("eigendecompose: group_tol must be positive");
    }
    const Eigensystem es = jacobi_eigensystem(m);
    std::vector<std::pair<double, Eigen::MatrixXd>> terms;
    terms.reserve(static_cast<std::size_t>(es.values.size()));
    for (Eigen::Index i = 0; i < es.values.size(); ++i) {
        terms.emplace_back(es.values(i), es.vectors.col(i) * es.vectors.col(i).transpose());
    }
    return assemble_decomposition(std::move(terms), group_tol);
}

inline SpectralDecomposition laplacian_decomposition(const Graph& g, double group_tol = kDefaultGroupTol) {
    return eigendecompose(laplacian(g).cast<double>(), group_tol);
}

// Max-norm residuals of the projector axioms; `reconstruction` is measured
// against `m` when one is supplied.
struct ProjectorAxioms {
    double resolution{0.0};      // ||sum F - I||
    double idempotence{0.0};     // max ||F^2 - F||
    double orthogonality{0.0};   // max ||F_r F_s||, r != s
    double reconstruction{0.0};  // ||sum lambda F - m||
    double symmetry{0.0};        // max ||F - F^T||

    double worst() const { return std::max({resolution, idempotence, orthogonality, reconstruction, symmetry}); }
};

inline double max_abs(const Eigen::MatrixXd& x) { return x.size() == 0 ? 0.0 : x.cwiseAbs().maxCoeff(); }

inline ProjectorAxioms check_projector_axioms(const SpectralDecomposition& d,
                                              const std::optional<Eigen::MatrixXd>& m = std::nullopt) {
    ProjectorAxioms ax;
    const auto n = d.order();
    Eigen::MatrixXd sum = Eigen::MatrixXd::Zero(n, n);
    Eigen::MatrixXd recon = Eigen::MatrixXd::Zero(n, n);
    for (std::size_t r = 0; r < d.distinct(); ++r) {
        const auto& f = d.projectors[r];
        sum += f;
        recon += d.eigenvalues[r] * f;
        ax.idempotence = std::max(ax.idempotence, max_abs(f * f - f));
        ax.symmetry = std::max(ax.symmetry, max_abs(f - f.transpose()));
        for (std::size_t s = r + 1; s < d.distinct(); ++s) {
            ax.orthogonality = std::max(ax.orthogonality, max_abs(f * d.projectors[s]));
        }
    }
    ax.resolution = max_abs(sum - Eigen::MatrixXd::Identity(n, n));
    if (m) ax.reconstruction = max_abs(recon - *m);
    return ax;
}

// ------------------------- exact characteristic polynomial -----------------

// Coefficients c_0..c_N of det(xI - A), c_N = 1.
struct IntegerCharPoly {
    std::vector<BigInt> coefficients;

    int degree() const noexcept { return static_cast<int>(coefficients.size()) - 1; }

    BigInt evaluate(const BigInt& x) const {
        BigInt acc = 0;
        for (auto it = coefficients.rbegin(); it != coefficients.rend(); ++it) acc = acc * x + *it;
        return acc;
    }

    double evaluate(double x) const {
        double acc = 0.0;
        for (auto it = coefficients.rbegin(); it != coefficients.rend(); ++it) {
            acc = acc * x + it->convert_to<double>();
        }
        return acc;
    }

    friend bool operator==(const IntegerCharPoly&, const IntegerCharPoly&) = default;
};

// Faddeev-LeVerrier over BigInt:
//   M_1 = I, c_{N-1} = -tr(A);  M_k = A M_{k-1} + c_{N-k+1} I,  c_{N-k} = -tr(A M_k) / k.
// For an integer matrix every M_k is integral and each division is exact.
inline IntegerCharPoly char_poly_exact(const IntMatrix& m) {
    if (m.rows() != m.cols()) throw std::invalid_argument("char_poly_exact: matrix is not square");
    const auto n = static_cast<std::size_t>(m.rows());
    std::vector<BigInt> a(n * n);
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j)
            a[i * n + j] = m(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j));

    IntegerCharPoly p;
    p.coefficients.assign(n + 1, BigInt(0));
    p.coefficients[n] = 1;
    if (n == 0) return p;

    std::vector<BigInt> mk(n * n, BigInt(0));  // M_k
    std::vector<BigInt> am(n * n);             // A * M_k
    for (std::size_t i = 0; i < n; ++i) mk[i * n + i] = 1;
    for (std::size_t k = 1; k <= n; ++k) {
        for (std::size_t i = 0; i < n; ++i) {
            for (std::size_t j = 0; j < n; ++j) {
                BigInt s = 0;
                for (std::size_t l = 0; l < n; ++l) {
                    if (!a[i * n + l].is_zero()) s += a[i * n + l] * mk[l * n + j];
                }
                am[i * n + j] = std::move(s);
            }
        }
        BigInt tr = 0;
        for (std::size_t i = 0; i < n; ++i) tr += am[i * n + i];
        if (tr % k != 0) throw std::logic_error("char_poly_exact: inexact division (non-integer input?)");
        const BigInt c = -tr / k;
        p.coefficients[n - k] = c;
        if (k == n) break;
        mk = am;
        for (std::size_t i = 0; i < n; ++i) mk[i * n + i] += c;
    }
    return p;
}

inline bool is_integer_eigenvalue(const BigInt& candidate, const IntegerCharPoly& p) {
    return p.evaluate(candidate).is_zero();
}

// A numeric eigenvalue is an integer only if it rounds within kIntegerTol and
// the exact characteristic polynomial vanishes at the rounded value.
inline std::optional<long long> certify_integer(double lambda, const IntegerCharPoly& p) {
    const double r = std::round(lambda);
    if (std::abs(lambda - r) >= kIntegerTol) return std::nullopt;
    const auto candidate = static_cast<long long>(r);
    if (!is_integer_eigenvalue(BigInt(candidate), p)) return std::nullopt;
    return candidate;
}

// --------------------------- transition amplitudes -------------------------

inline std::complex<double> transition_amplitude(const SpectralDecomposition& d, Eigen::Index u, Eigen::Index v,
                                                 double t) {
    const auto n = d.order();
    if (u < 0 || v < 0 || u >= n || v >= n) {
        throw std::out_of_range("transition_amplitude: vertex index out of range");
    }
    std::complex<double> acc{0.0, 0.0};
    for (std::size_t r = 0; r < d.distinct(); ++r) {
        acc += std::polar(1.0, -t * d.eigenvalues[r]) * d.projectors[r](u, v);
    }
    return acc;
}

// exp(-itL) = sum_r e^{-i t lambda_r} F_r
inline Eigen::MatrixXcd transition_matrix(const SpectralDecomposition& d, double t) {
    const auto n = d.order();
    Eigen::MatrixXcd h = Eigen::MatrixXcd::Zero(n, n);
    for (std::size_t r = 0; r < d.distinct(); ++r) {
        h += std::polar(1.0, -t * d.eigenvalues[r]) * d.projectors[r].cast<std::complex<double>>();
    }
    return h;
}

// ------------------------------- identities --------------------------------

// j^T (xI - M)^{-1} j.
inline double coronal(const Eigen::MatrixXd& m, double x) {
    if (m.rows() != m.cols()) throw std::invalid_argument("coronal: matrix is not square");
    const auto n = m.rows();
    const Eigen::MatrixXd shifted = x * Eigen::MatrixXd::Identity(n, n) - m;
    Eigen::FullPivLU<Eigen::MatrixXd> lu(shifted);
    lu.setThreshold(1e-12);
    if (!lu.isInvertible()) {
        throw std::domain_error("coronal: xI - M is singular (x is an eigenvalue)");
    }
    const Eigen::VectorXd ones = Eigen::VectorXd::Ones(n);
    return ones.dot(lu.solve(ones));
}

// det(M4) * det(M1 - M2 M4^{-1} M3)
inline double schur_block_determinant(const Eigen::MatrixXd& m1, const Eigen::MatrixXd& m2,
                                      const Eigen::MatrixXd& m3, const Eigen::MatrixXd& m4) {
    Eigen::PartialPivLU<Eigen::MatrixXd> lu(m4);
    return m4.determinant() * (m1 - m2 * lu.solve(m3)).determinant();
}

// (1 - alpha * Gamma_A(x)) * det(xI - A), which equals det(xI - A - alpha J).
inline double rank_one_shift_determinant(const Eigen::MatrixXd& a, double alpha, double x) {
    const auto n = a.rows();
    return (1.0 - alpha * coronal(a, x)) * (x * Eigen::MatrixXd::Identity(n, n) - a).determinant();
}

// ------------------------------ matrix text --------------------------------

// First line N, then N rows of N space-separated values.
inline void write_matrix(std::ostream& out, const Eigen::MatrixXd& m) {
    const auto old = out.precision(17);
    out << m.rows() << '\n';
    for (Eigen::Index i = 0; i < m.rows(); ++i) {
        for (Eigen::Index j = 0; j < m.cols(); ++j) {
            if (j) out << ' ';
            out << m(i, j);
        }
        out << '\n';
    }
    out.precision(old);
}

inline Eigen::MatrixXd read_matrix(std::istream& in) {
    long long n = 0;
    if (!(in >> n) || n < 0) throw std::invalid_argument("read_matrix: missing or invalid order");
    Eigen::MatrixXd m(n, n);
    for (Eigen::Index i = 0; i < n; ++i)
        for (Eigen::Index j = 0; j < n; ++j)
            if (!(in >> m(i, j))) throw std::invalid_argument("read_matrix: truncated matrix data");
    return m;
}

}  // namespace vcc
