// corona_spectra.hpp - closed-form Laplacian eigenvalues, eigenprojectors and
// backbone transition amplitudes of a vertex complemented corona G o~ (H_1..H_n)
// with |V(H_i)| = k for every i. Everything here is assembled from the
// decompositions of G and of the H_i; the N x N corona Laplacian is never
// diagonalised.

#pragma once

#include "graph.hpp"
#include "spectral.hpp"

#include <Eigen/Dense>
#include <boost/multiprecision/cpp_int.hpp>

#include <algorithm>
#include <cmath>
#include <complex>
#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace vcc {

// ------------------------------- theta pairs -------------------------------

// The two corona eigenvalues spawned by a base eigenvalue theta > 0:
// roots of x^2 - ((n-1)(1+k) + theta) x + ((n-1)^2 k - k + (n-1) theta).
struct ThetaPair {
    int n{0};
    int k{0};
    double theta{0.0};
    double plus{0.0};
    double minus{0.0};
    double delta{0.0};  // sqrt(((n-1)(k-1) + theta)^2 + 4k) = plus - minus
};

inline ThetaPair theta_pair(int n, int k, double theta) {
    if (n < 2) throw std::invalid_argument("theta_pair: n must be >= 2");
    if (k < 1) throw std::invalid_argument("theta_pair: k must be >= 1");
    if (!(theta > 0.0)) throw std::invalid_argument("theta_pair: theta must be positive");
    const double nm1 = n - 1;
    const double sum = nm1 * (1 + k) + theta;
    const double shifted = nm1 * (k - 1) + theta;
    const double delta = std::sqrt(shifted * shifted + 4.0 * k);
    const double product = nm1 * nm1 * k - k + nm1 * theta;
    ThetaPair tp{n, k, theta, 0.0, 0.0, delta};
    tp.plus = 0.5 * (sum + delta);
    tp.minus = product / tp.plus;  // avoids cancellation in (sum - delta) / 2
    return tp;
}

// ------------------------------ exact values -------------------------------

// Eigenvalue as an exact descriptor where one is available:
//   integer: the value itself
//   surd:    (p + sign * sqrt(q)) / 2 with q not a perfect square
//   inexact: the base eigenvalue was not a certified integer
struct EigenvalueDescriptor {
    enum class Kind { integer, surd, inexact };
    Kind kind{Kind::inexact};
    BigInt integer{0};
    BigInt p{0};
    BigInt q{0};
    int sign{+1};

    static EigenvalueDescriptor exact_integer(BigInt value) {
        EigenvalueDescriptor d;
        d.kind = Kind::integer;
        d.integer = std::move(value);
        return d;
    }

    // (p + sign sqrt(q)) / 2, reduced to an integer when q is a square.
    static EigenvalueDescriptor half_surd(BigInt p_, BigInt q_, int sign_) {
        const BigInt r = boost::multiprecision::sqrt(q_);
        if (r * r == q_) {
            const BigInt twice = p_ + sign_ * r;
            if (twice % 2 == 0) return exact_integer(twice / 2);
        }
        EigenvalueDescriptor d;
        d.kind = Kind::surd;
        d.p = std::move(p_);
        d.q = std::move(q_);
        d.sign = sign_;
        return d;
    }

    std::string to_string() const {
        switch (kind) {
        case Kind::integer:
            return integer.str();
        case Kind::surd:
            return "(" + p.str() + (sign > 0 ? " + " : " - ") + "sqrt(" + q.str() + "))/2";
        case Kind::inexact:
            break;
        }
        return "inexact";
    }
};

// Bit set over the five eigenvalue families (a)..(e).
struct FamilySet {
    enum : unsigned { a = 1u, b = 2u, c = 4u, d = 8u, e = 16u };
    unsigned bits{0};

    bool has(unsigned f) const noexcept { return (bits & f) != 0; }
    FamilySet& operator|=(FamilySet o) noexcept {
        bits |= o.bits;
        return *this;
    }

    std::string to_string() const {
        std::string s;
        const char* names = "abcde";
        for (unsigned i = 0; i < 5; ++i)
            if (bits & (1u << i)) s += names[i];
        return s;
    }
};

struct ClosedFormEntry {
    double value{0.0};
    int multiplicity{0};
    FamilySet families;
    EigenvalueDescriptor exact;
};

struct ClosedFormSpectrum {
    int n{0};
    int k{0};
    std::vector<ClosedFormEntry> entries;  // increasing by value

    int total_multiplicity() const {
        int s = 0;
        for (const auto& e : entries) s += e.multiplicity;
        return s;
    }
};

// ----------------------------- input checking ------------------------------

// Returns the common satellite size k after checking the hypotheses the
// closed forms rely on.
inline int uniform_satellite_size(const Graph& g, const std::vector<Graph>& hs) {
    if (g.order() < 2) throw std::invalid_argument("closed form: base graph needs at least 2 vertices");
    if (!is_connected(g)) throw std::invalid_argument("closed form: base graph is disconnected");
    if (static_cast<int>(hs.size()) != g.order()) {
        throw std::invalid_argument("closed form: satellite count does not match base graph order");
    }
    const int k = hs.front().order();
    for (const auto& h : hs) {
        if (h.order() != k) throw std::invalid_argument("closed form: satellite sizes are not uniform");
    }
    if (k < 1) throw std::invalid_argument("closed form: satellites must have at least one vertex");
    return k;
}

namespace detail {

struct SatelliteSpectrum {
    SpectralDecomposition decomposition;
    IntegerCharPoly poly;
};

// One decomposition per distinct satellite graph; coronas usually repeat one H.
inline std::vector<const SatelliteSpectrum*> satellite_spectra(const std::vector<Graph>& hs, double tol,
                                                               std::vector<std::pair<Graph, SatelliteSpectrum>>& cache) {
    cache.reserve(hs.size());
    std::vector<const SatelliteSpectrum*> out;
    for (const auto& h : hs) {
        auto it = std::find_if(cache.begin(), cache.end(), [&](const auto& e) { return e.first == h; });
        if (it == cache.end()) {
            cache.emplace_back(h, SatelliteSpectrum{laplacian_decomposition(h, tol), char_poly_exact(laplacian(h))});
            it = std::prev(cache.end());
        }
        out.push_back(&it->second);
    }
    return out;
}

inline EigenvalueDescriptor describe(double value, const IntegerCharPoly& poly, long long offset) {
    if (auto v = certify_integer(value, poly)) return EigenvalueDescriptor::exact_integer(BigInt(*v) + offset);
    return {};
}

inline Eigen::MatrixXd all_ones_minus_identity(Eigen::Index n) {
    return Eigen::MatrixXd::Ones(n, n) - Eigen::MatrixXd::Identity(n, n);
}

}  // namespace detail

// --------------------------- closed-form spectrum --------------------------

inline ClosedFormSpectrum closed_form_spectrum(const Graph& g, const std::vector<Graph>& hs,
                                               double group_tol = kDefaultGroupTol) {
    const int k = uniform_satellite_size(g, hs);
    const int n = g.order();
    const long long nm1 = n - 1;

    std::vector<ClosedFormEntry> raw;

    // (a) n-1, one copy per extra component of each satellite
    int components = 0;
    for (const auto& h : hs) components += component_count(h);
    if (components - n > 0) {
        raw.push_back({double(nm1), components - n, FamilySet{FamilySet::a},
                       EigenvalueDescriptor::exact_integer(BigInt(nm1))});
    }

    // (b) n-1+mu for each nonzero satellite eigenvalue mu
    std::vector<std::pair<Graph, detail::SatelliteSpectrum>> cache;
    for (const auto* sat : detail::satellite_spectra(hs, group_tol, cache)) {
        const auto& sd = sat->decomposition;
        for (std::size_t r = 0; r < sd.distinct(); ++r) {
            const double mu = sd.eigenvalues[r];
            if (std::abs(mu) < group_tol) continue;
            raw.push_back({double(nm1) + mu, sd.multiplicities[r], FamilySet{FamilySet::b},
                           detail::describe(mu, sat->poly, nm1)});
        }
    }

    // (c) theta_+- for each nonzero base eigenvalue theta
    const auto gd = laplacian_decomposition(g, group_tol);
    const auto gpoly = char_poly_exact(laplacian(g));
    for (std::size_t r = 0; r < gd.distinct(); ++r) {
        const double theta = gd.eigenvalues[r];
        if (std::abs(theta) < group_tol) continue;
        const auto tp = theta_pair(n, k, theta);
        EigenvalueDescriptor plus;
        EigenvalueDescriptor minus;
        if (auto t = certify_integer(theta, gpoly)) {
            const BigInt p = BigInt(nm1 * (1 + k)) + *t;
            const BigInt s = BigInt(nm1 * (k - 1)) + *t;
            const BigInt q = s * s + 4 * k;
            plus = EigenvalueDescriptor::half_surd(p, q, +1);
            minus = EigenvalueDescriptor::half_surd(p, q, -1);
        }
        raw.push_back({tp.minus, gd.multiplicities[r], FamilySet{FamilySet::c}, minus});
        raw.push_back({tp.plus, gd.multiplicities[r], FamilySet{FamilySet::c}, plus});
    }

    // (d) and (e)
    raw.push_back({double(nm1 * (1 + k)), 1, FamilySet{FamilySet::d},
                   EigenvalueDescriptor::exact_integer(BigInt(nm1 * (1 + k)))});
    raw.push_back({0.0, 1, FamilySet{FamilySet::e}, EigenvalueDescriptor::exact_integer(BigInt(0))});

    // Families can coincide (e.g. (b) and (d) when G = K_2 and H = K_k); such
    // values are merged and carry every family that produced them.
    std::stable_sort(raw.begin(), raw.end(), [](const auto& x, const auto& y) { return x.value < y.value; });
    ClosedFormSpectrum out{n, k, {}};
    for (auto& e : raw) {
        if (!out.entries.empty() && e.value - out.entries.back().value < group_tol) {
            auto& last = out.entries.back();
            last.multiplicity += e.multiplicity;
            last.families |= e.families;
            if (last.exact.kind == EigenvalueDescriptor::Kind::inexact) last.exact = e.exact;
            continue;
        }
        out.entries.push_back(std::move(e));
    }
    return out;
}

// ------------------------- closed-form eigenprojectors ---------------------

inline SpectralDecomposition closed_form_projectors(const Graph& g, const std::vector<Graph>& hs,
                                                    double group_tol = kDefaultGroupTol) {
    const int k = uniform_satellite_size(g, hs);
    const Eigen::Index n = g.order();
    const Eigen::Index N = n * (k + 1);
    const double nm1 = static_cast<double>(n - 1);

    auto satellite_block = [&](Eigen::Index l) { return n + l * k; };
    std::vector<std::pair<double, Eigen::MatrixXd>> terms;

    std::vector<std::pair<Graph, detail::SatelliteSpectrum>> cache;
    const auto sats = detail::satellite_spectra(hs, group_tol, cache);

    // (a) blocks F_0(H_l) - J_k / k; zero for every connected H_l
    int components = 0;
    for (const auto& h : hs) components += component_count(h);
    if (components > static_cast<int>(n)) {
        Eigen::MatrixXd f = Eigen::MatrixXd::Zero(N, N);
        for (Eigen::Index l = 0; l < n; ++l) {
            const auto& sd = sats[static_cast<std::size_t>(l)]->decomposition;
            const Eigen::MatrixXd block = sd.projectors.front() - Eigen::MatrixXd::Constant(k, k, 1.0 / k);
            f.block(satellite_block(l), satellite_block(l), k, k) = block;
        }
        terms.emplace_back(nm1, std::move(f));
    }

    // (b) one term per (l, mu); equal values from different H_l are summed by
    // the final grouping.
    for (Eigen::Index l = 0; l < n; ++l) {
        const auto& sd = sats[static_cast<std::size_t>(l)]->decomposition;
        for (std::size_t r = 0; r < sd.distinct(); ++r) {
            if (std::abs(sd.eigenvalues[r]) < group_tol) continue;
            Eigen::MatrixXd f = Eigen::MatrixXd::Zero(N, N);
            f.block(satellite_block(l), satellite_block(l), k, k) = sd.projectors[r];
            terms.emplace_back(nm1 + sd.eigenvalues[r], std::move(f));
        }
    }

    // (c) theta_+- blocks built from F_theta(G) and M = J_n - I_n
    const auto gd = laplacian_decomposition(g, group_tol);
    const Eigen::MatrixXd M = detail::all_ones_minus_identity(n);
    for (std::size_t r = 0; r < gd.distinct(); ++r) {
        const double theta = gd.eigenvalues[r];
        if (std::abs(theta) < group_tol) continue;
        const auto tp = theta_pair(static_cast<int>(n), k, theta);
        const Eigen::MatrixXd& ft = gd.projectors[r];
        const Eigen::MatrixXd ftm = ft * M;
        const Eigen::MatrixXd mtfm = M.transpose() * ft * M;
        for (const double value : {tp.minus, tp.plus}) {
            const double gap = nm1 - value;
            const double scale = gap * gap / (gap * gap + k);
            Eigen::MatrixXd f(N, N);
            f.topLeftCorner(n, n) = ft;
            for (Eigen::Index l = 0; l < n; ++l) {
                for (Eigen::Index w = 0; w < k; ++w) {
                    f.block(0, satellite_block(l) + w, n, 1) = ftm.col(l) / gap;
                    f.block(satellite_block(l) + w, 0, 1, n) = ftm.col(l).transpose() / gap;
                }
                for (Eigen::Index l2 = 0; l2 < n; ++l2) {
                    f.block(satellite_block(l), satellite_block(l2), k, k).setConstant(mtfm(l, l2) / (gap * gap));
                }
            }
            terms.emplace_back(value, scale * f);
        }
    }

    // (d) eigenvector (-k j_n ; j_{nk})
    {
        Eigen::VectorXd y(N);
        y.head(n).setConstant(-static_cast<double>(k));
        y.tail(N - n).setOnes();
        terms.emplace_back(nm1 * (1 + k), y * y.transpose() / static_cast<double>(n * k * (k + 1)));
    }

    // (e)
    terms.emplace_back(0.0, Eigen::MatrixXd::Constant(N, N, 1.0 / static_cast<double>(N)));

    return assemble_decomposition(std::move(terms), group_tol);
}

// --------------------------- backbone amplitudes ---------------------------

// e_(u,0)^T exp(-itL) e_(v,0) evaluated from the base graph's spectrum alone:
//   e^{-it(n-1)(1+k)/2} sum_theta e^{-it theta/2} (F_theta)_uv
//       (cos(Delta t/2) + i ((n-1)(1-k) - theta)/Delta sin(Delta t/2))
//   + k/(n(k+1)) e^{-it(n-1)(1+k)} + 1/(n(k+1))
class BackboneAmplitude {
public:
    BackboneAmplitude(const SpectralDecomposition& base, int k, int u, int v, double group_tol = kDefaultGroupTol)
        : k_(k) {
        n_ = static_cast<int>(base.order());
        if (n_ < 2) throw std::invalid_argument("backbone_amplitude: base graph needs at least 2 vertices");
        if (k < 1) throw std::invalid_argument("backbone_amplitude: k must be >= 1");
        if (u < 0 || v < 0 || u >= n_ || v >= n_) {
            throw std::out_of_range("backbone_amplitude: vertex out of range");
        }
        const double nm1 = n_ - 1;
        for (std::size_t r = 0; r < base.distinct(); ++r) {
            const double theta = base.eigenvalues[r];
            if (std::abs(theta) < group_tol) continue;
            const auto tp = theta_pair(n_, k, theta);
            terms_.push_back({theta, base.projectors[r](u, v), tp.delta, (nm1 * (1 - k) - theta) / tp.delta});
        }
        top_ = nm1 * (1 + k);
    }

    std::complex<double> operator()(double t) const {
        using namespace std::complex_literals;
        std::complex<double> sum{0.0, 0.0};
        for (const auto& term : terms_) {
            const double half = 0.5 * term.delta * t;
            sum += std::polar(1.0, -0.5 * t * term.theta) * term.entry *
                   std::complex<double>(std::cos(half), term.ratio * std::sin(half));
        }
        const double denom = static_cast<double>(n_) * (k_ + 1);
        return std::polar(1.0, -0.5 * t * top_) * sum + (k_ / denom) * std::polar(1.0, -t * top_) + 1.0 / denom;
    }

    int base_order() const noexcept { return n_; }
    int satellite_size() const noexcept { return k_; }

private:
    struct Term {
        double theta;
        double entry;  // (F_theta)_{u,v}
        double delta;
        double ratio;  // ((n-1)(1-k) - theta) / delta
    };
    int n_{0};
    int k_{0};
    double top_{0.0};
    std::vector<Term> terms_;
};

inline std::complex<double> backbone_amplitude(const Graph& g, int k, int u, int v, double t) {
    if (!is_connected(g)) throw std::invalid_argument("backbone_amplitude: base graph is disconnected");
    return BackboneAmplitude(laplacian_decomposition(g), k, u, v)(t);
}

// Index of a base eigenvalue theta > 0 for which (F_theta (J - I)) e_j is
// nonzero (norm > tol), picking the one with the largest norm.
inline std::optional<std::size_t> satellite_coupling_eigenvalue(const SpectralDecomposition& base, Eigen::Index j,
                                                                double tol = 1e-8,
                                                                double group_tol = kDefaultGroupTol) {
    const auto n = base.order();
    if (j < 0 || j >= n) throw std::out_of_range("satellite_coupling_eigenvalue: vertex out of range");
    const Eigen::MatrixXd M = detail::all_ones_minus_identity(n);
    std::optional<std::size_t> best;
    double best_norm = tol;
    for (std::size_t r = 0; r < base.distinct(); ++r) {
        if (std::abs(base.eigenvalues[r]) < group_tol) continue;
        const double norm = (base.projectors[r] * M.col(j)).norm();
        if (norm > best_norm) {
            best_norm = norm;
            best = r;
        }
    }
    return best;
}

}  // namespace vcc
