// state_transfer.hpp - eigenvalue supports, strong cospectrality, Laplacian
// perfect state transfer certification and the structured pretty-good state
// transfer time search for vertex complemented coronas.

#pragma once

#include "corona_spectra.hpp"
#include "graph.hpp"
#include "spectral.hpp"

#include <Eigen/Dense>
#include <boost/multiprecision/cpp_int.hpp>

#include <algorithm>
#include <cmath>
#include <complex>
#include <cstdint>
#include <numbers>
#include <numeric>
#include <optional>
#include <ostream>
#include <set>
#include <stdexcept>
#include <string>
#include <thread>
#include <utility>
#include <vector>

namespace vcc {

inline constexpr double kDefaultSupportTol = 1e-8;
inline constexpr double kDefaultCospectralTol = 1e-8;

// --------------------------------- support ---------------------------------

struct EigenvalueSupport {
    Eigen::Index vertex{0};
    std::vector<std::size_t> indices;  // into the decomposition
    std::vector<double> eigenvalues;
};

inline EigenvalueSupport eigenvalue_support(const SpectralDecomposition& d, Eigen::Index u,
                                            double support_tol = kDefaultSupportTol) {
    if (u < 0 || u >= d.order()) throw std::out_of_range("eigenvalue_support: vertex out of range");
    if (!(support_tol > 0.0)) throw std::invalid_argument("eigenvalue_support: tolerance must be positive");
    EigenvalueSupport s{u, {}, {}};
    for (std::size_t r = 0; r < d.distinct(); ++r) {
        if (d.projectors[r].col(u).norm() > support_tol) {
            s.indices.push_back(r);
            s.eigenvalues.push_back(d.eigenvalues[r]);
        }
    }
    return s;
}

// ---------------------------- strong cospectrality -------------------------

struct Cospectrality {
    bool cospectral{false};
    std::vector<int> signs;         // sigma_lambda per distinct eigenvalue
    std::vector<double> residuals;  // min_sigma ||F e_u - sigma F e_v||
};

inline Cospectrality strong_cospectrality(const SpectralDecomposition& d, Eigen::Index u, Eigen::Index v,
                                          double tol = kDefaultCospectralTol) {
    if (u == v) throw std::invalid_argument("strong_cospectrality: u and v must differ");
    if (u < 0 || v < 0 || u >= d.order() || v >= d.order()) {
        throw std::out_of_range("strong_cospectrality: vertex out of range");
    }
    Cospectrality c;
    c.cospectral = true;
    for (const auto& f : d.projectors) {
        const double plus = (f.col(u) - f.col(v)).norm();
        const double minus = (f.col(u) + f.col(v)).norm();
        const int sign = minus < plus ? -1 : +1;
        const double res = std::min(plus, minus);
        c.signs.push_back(sign);
        c.residuals.push_back(res);
        if (!(res < tol)) c.cospectral = false;
    }
    return c;
}

// ------------------------------ LPST certificate ---------------------------

struct LpstOptions {
    double support_tol{kDefaultSupportTol};
    double cospectral_tol{kDefaultCospectralTol};
};

struct LpstVerdict {
    Eigen::Index u{0};
    Eigen::Index v{0};
    std::vector<double> support;

    bool cospectral{false};
    std::vector<int> signs;  // per support eigenvalue

    bool all_integer{false};
    std::optional<double> non_integer_witness;
    std::vector<long long> integer_support;

    // Parity is only evaluated on an integral support.
    bool parity_evaluated{false};
    bool parity_ok{false};
    std::optional<double> parity_witness;
    std::optional<long long> support_gcd;

    bool has_lpst{false};
    std::optional<double> min_time;
};

inline LpstVerdict certify_lpst(const SpectralDecomposition& d, const IntegerCharPoly& p, Eigen::Index u,
                                Eigen::Index v, const LpstOptions& opt = {}) {
    if (u == v) throw std::invalid_argument("certify_lpst: u and v must differ");
    if (d.order() != p.degree()) {
        throw std::invalid_argument("certify_lpst: characteristic polynomial does not match the decomposition");
    }
    const auto supp = eigenvalue_support(d, u, opt.support_tol);
    const auto cos = strong_cospectrality(d, u, v, opt.cospectral_tol);

    LpstVerdict out;
    out.u = u;
    out.v = v;
    out.support = supp.eigenvalues;
    out.cospectral = cos.cospectral;

    out.all_integer = true;
    for (std::size_t i = 0; i < supp.indices.size(); ++i) {
        out.signs.push_back(cos.signs[supp.indices[i]]);
        const auto cert = certify_integer(supp.eigenvalues[i], p);
        if (!cert) {
            if (out.all_integer) out.non_integer_witness = supp.eigenvalues[i];
            out.all_integer = false;
        } else {
            out.integer_support.push_back(*cert);
        }
    }

    if (out.all_integer) {
        long long g = 0;
        for (auto x : out.integer_support) g = std::gcd(g, x);
        out.support_gcd = g;
        out.parity_evaluated = true;
        out.parity_ok = g != 0;
        for (std::size_t i = 0; i < supp.indices.size() && g != 0; ++i) {
            const double entry = d.projectors[supp.indices[i]](u, v);
            // With strong cospectrality the sign of e_u^T F e_v is sigma; fall
            // back to the raw entry otherwise.
            const bool positive = out.cospectral ? out.signs[i] > 0 : entry > 0.0;
            const bool even = (out.integer_support[i] / g) % 2 == 0;
            if (positive != even) {
                out.parity_ok = false;
                out.parity_witness = supp.eigenvalues[i];
                break;
            }
        }
    }

    out.has_lpst = out.cospectral && out.all_integer && out.parity_ok;
    if (out.has_lpst) out.min_time = std::numbers::pi / static_cast<double>(*out.support_gcd);
    return out;
}

// ---------------------------- exact integer helpers ------------------------

inline bool is_perfect_square(const BigInt& q) {
    if (q < 0) throw std::invalid_argument("is_perfect_square: negative input");
    const BigInt r = boost::multiprecision::sqrt(q);
    return r * r == q;
}

// q = a^2 b with b square-free, by trial division.
inline std::pair<BigInt, BigInt> square_free_part(BigInt q) {
    if (q < 1) throw std::invalid_argument("square_free_part: input must be positive");
    BigInt a = 1;
    BigInt b = 1;
    for (BigInt f = 2; f * f <= q; ++f) {
        int power = 0;
        while (q % f == 0) {
            q /= f;
            ++power;
        }
        for (int i = 0; i + 1 < power; i += 2) a *= f;
        if (power % 2) b *= f;
    }
    b *= q;  // leftover prime (or 1)
    return {a, b};
}

// For theta > 0 the pair theta_+- can only be integral when
// ((n-1)(k-1) + theta)^2 + 4k is a perfect square, which never happens.
struct NoLpstWitness {
    int n{0};
    int k{0};
    long long theta{0};
    BigInt q{0};
    BigInt floor_sqrt{0};
    bool perfect_square{false};
};

inline NoLpstWitness corona_no_lpst_witness(int n, int k, long long theta) {
    if (n < 2 || k < 1 || theta < 1) {
        throw std::invalid_argument("corona_no_lpst_witness: need n >= 2, k >= 1, theta >= 1");
    }
    NoLpstWitness w{n, k, theta, 0, 0, false};
    const BigInt s = BigInt(n - 1) * (k - 1) + theta;
    w.q = s * s + 4 * BigInt(k);
    w.floor_sqrt = boost::multiprecision::sqrt(w.q);
    w.perfect_square = w.floor_sqrt * w.floor_sqrt == w.q;
    return w;
}

// ------------------------------ fidelity sweep -----------------------------

struct FidelityPoint {
    double t{0.0};
    double fidelity{0.0};
};

inline std::vector<FidelityPoint> fidelity_sweep(const SpectralDecomposition& d, Eigen::Index u, Eigen::Index v,
                                                 const std::vector<double>& t_grid) {
    if (t_grid.empty()) throw std::invalid_argument("fidelity_sweep: empty time grid");
    std::vector<FidelityPoint> out;
    out.reserve(t_grid.size());
    for (double t : t_grid) out.push_back({t, std::abs(transition_amplitude(d, u, v, t))});
    return out;
}

inline void write_fidelity_csv(std::ostream& out, const std::vector<FidelityPoint>& rows) {
    const auto old = out.precision(12);
    out << "t,fidelity\n";
    for (const auto& r : rows) out << r.t << ',' << r.fidelity << '\n';
    out.precision(old);
}

// ------------------------------ continued fractions ------------------------

struct Convergent {
    long long p{0};
    long long q{0};
};

// Convergents p/q of sqrt(b) (b not a square) with q <= q_max.
inline std::vector<Convergent> sqrt_convergents(long long b, long long q_max) {
    const auto a0 = static_cast<long long>(boost::multiprecision::sqrt(BigInt(b)));
    if (a0 * a0 == b) throw std::invalid_argument("sqrt_convergents: argument is a perfect square");
    std::vector<Convergent> out;
    long long m = 0;
    long long den = 1;
    long long a = a0;
    // p_{-1} = 1, q_{-1} = 0; p_0 = a0, q_0 = 1
    __int128 p_prev = 1;
    __int128 q_prev = 0;
    __int128 p_cur = a0;
    __int128 q_cur = 1;
    while (q_cur <= q_max) {
        out.push_back({static_cast<long long>(p_cur), static_cast<long long>(q_cur)});
        m = den * a - m;
        den = (b - m * m) / den;
        a = (a0 + m) / den;
        const __int128 p_next = a * p_cur + p_prev;
        const __int128 q_next = a * q_cur + q_prev;
        p_prev = p_cur;
        q_prev = q_cur;
        p_cur = p_next;
        q_cur = q_next;
    }
    return out;
}

// ------------------------------- LPGST search ------------------------------

struct PgstSample {
    long long kappa{0};
    double time{0.0};  // (4 kappa + 2^{1-e}) pi
    double fidelity{0.0};
};

// Support eigenvalues theta > 0 sharing the square-free part b of Delta_theta^2.
struct SurdGroup {
    long long b{0};
    std::vector<long long> thetas;
    std::vector<long long> a;  // Delta_theta = a sqrt(b)
};

struct PgstOptions {
    double support_tol{kDefaultSupportTol};
    double cospectral_tol{kDefaultCospectralTol};
    double group_tol{kDefaultGroupTol};
    long long exhaustive_limit{5000};
    unsigned threads{1};
    bool override_hypotheses{false};
};

struct PgstReport {
    enum class Status { completed, refused };
    Status status{Status::completed};
    std::vector<std::string> refusals;

    int n{0};
    int k{0};
    int u{0};
    int v{0};
    long long kappa_max{0};
    double target{0.0};

    bool base_has_lpst{false};
    LpstVerdict base_verdict;
    std::optional<int> e;
    long long corona_top{0};  // (n-1)(1+k)
    bool divisibility_ok{false};
    std::vector<SurdGroup> groups;

    std::vector<PgstSample> samples;  // every evaluated kappa, in search order
    std::optional<PgstSample> best;
    bool reached_target{false};
};

namespace detail {

inline int two_adic_valuation(long long x) {
    int e = 0;
    while (x % 2 == 0) {
        x /= 2;
        ++e;
    }
    return e;
}

// kappa values whose X = m kappa + 1 (m = 2^{e+1}) is a small combination of
// consecutive convergents q_i, q_{i+1} of sqrt(b) with Y = j1 p_i + j2 p_{i+1}
// divisible by m, so that sqrt(b) X ~ Y = 0 (mod m) for every theta sharing b.
inline std::vector<long long> convergent_kappas(long long b, int e, long long kappa_max) {
    const long long m = 1LL << (e + 1);
    const long long x_max = m * kappa_max + 1;
    auto cs = sqrt_convergents(b, x_max);
    std::vector<long long> out;
    auto consider = [&](__int128 x, __int128 y) {
        if (x <= 0 || x > x_max) return;
        if ((x % m + m) % m != 1 || (y % m + m) % m != 0) return;
        out.push_back(static_cast<long long>((x - 1) / m));
    };
    for (std::size_t i = 0; i < cs.size(); ++i) {
        const auto& c1 = cs[i];
        const Convergent c2 = i + 1 < cs.size() ? cs[i + 1] : Convergent{0, 0};
        for (long long j1 = -m + 1; j1 < m; ++j1) {
            for (long long j2 = -m + 1; j2 < m; ++j2) {
                consider(static_cast<__int128>(j1) * c1.q + static_cast<__int128>(j2) * c2.q,
                         static_cast<__int128>(j1) * c1.p + static_cast<__int128>(j2) * c2.p);
            }
        }
    }
    return out;
}

}  // namespace detail

inline PgstReport pgst_search(const Graph& g, const std::vector<Graph>& hs, int u, int v, long long kappa_max,
                              double target, const PgstOptions& opt = {}) {
    PgstReport rep;
    rep.u = u;
    rep.v = v;
    rep.kappa_max = kappa_max;
    rep.target = target;
    rep.n = g.order();
    auto refuse = [&](std::string why) {
        rep.status = PgstReport::Status::refused;
        rep.refusals.push_back(std::move(why));
    };

    if (kappa_max < 1) refuse("kappa_max must be >= 1");
    if (!(target > 0.0 && target < 1.0)) refuse("target must lie in (0, 1)");
    if (u == v) refuse("u and v must be distinct backbone vertices");
    if (u < 0 || v < 0 || u >= g.order() || v >= g.order()) refuse("u and v must be backbone vertices");
    int k = 0;
    try {
        k = uniform_satellite_size(g, hs);
    } catch (const std::invalid_argument& err) {
        refuse(err.what());
    }
    if (rep.status == PgstReport::Status::refused) return rep;
    rep.k = k;
    rep.corona_top = static_cast<long long>(g.order() - 1) * (1 + k);

    const auto gd = laplacian_decomposition(g, opt.group_tol);
    const auto gpoly = char_poly_exact(laplacian(g));
    rep.base_verdict = certify_lpst(gd, gpoly, u, v, {opt.support_tol, opt.cospectral_tol});
    rep.base_has_lpst = rep.base_verdict.has_lpst;
    if (!rep.base_has_lpst) {
        const std::string why = "base graph has no Laplacian perfect state transfer between u and v";
        if (opt.override_hypotheses) {
            rep.refusals.push_back("overridden: " + why);
        } else {
            refuse(why);
        }
    }
    if (!rep.base_verdict.all_integer) {
        refuse("support of u in the base graph is not integral; e is undefined");
        return rep;
    }

    int e = -1;
    for (auto x : rep.base_verdict.integer_support)
        if (x != 0) e = e < 0 ? detail::two_adic_valuation(x) : std::min(e, detail::two_adic_valuation(x));
    if (e < 0) {
        refuse("support of u in the base graph has no nonzero eigenvalue");
        return rep;
    }
    rep.e = e;
    const long long modulus = 1LL << (e + 1);
    rep.divisibility_ok = rep.corona_top % modulus == 0;
    if (!rep.divisibility_ok) {
        const std::string why = "2^(e+1) = " + std::to_string(modulus) + " does not divide (n-1)(1+k) = " +
                                std::to_string(rep.corona_top);
        if (opt.override_hypotheses) {
            rep.refusals.push_back("overridden: " + why);
        } else {
            refuse(why);
        }
    }
    if (rep.status == PgstReport::Status::refused) return rep;

    // Group support eigenvalues by the square-free part of Delta^2.
    for (auto theta : rep.base_verdict.integer_support) {
        if (theta == 0) continue;
        const auto w = corona_no_lpst_witness(g.order(), k, theta);
        const auto [a, b] = square_free_part(w.q);
        const auto bb = static_cast<long long>(b);
        auto it = std::find_if(rep.groups.begin(), rep.groups.end(), [&](const auto& s) { return s.b == bb; });
        if (it == rep.groups.end()) {
            rep.groups.push_back({bb, {}, {}});
            it = std::prev(rep.groups.end());
        }
        it->thetas.push_back(theta);
        it->a.push_back(static_cast<long long>(a));
    }

    // Candidate order: 0..min(kappa_max, limit), then convergent-derived kappas
    // in increasing order. A larger kappa_max only appends to this list.
    std::vector<long long> candidates;
    const long long exhaustive = std::min(kappa_max, opt.exhaustive_limit);
    for (long long kappa = 0; kappa <= exhaustive; ++kappa) candidates.push_back(kappa);
    std::set<long long> extra;
    for (const auto& grp : rep.groups) {
        if (grp.b == 1) continue;  // cannot happen for a corona; nothing to approximate
        for (auto kappa : detail::convergent_kappas(grp.b, e, kappa_max))
            if (kappa > exhaustive) extra.insert(kappa);
    }
    candidates.insert(candidates.end(), extra.begin(), extra.end());

    const BackboneAmplitude amp(gd, k, u, v, opt.group_tol);
    const double offset = std::ldexp(1.0, 1 - e);
    auto time_of = [&](long long kappa) { return (4.0 * static_cast<double>(kappa) + offset) * std::numbers::pi; };

    // Evaluate in blocks; each block may be split across threads, then
    // scanned in order so the result does not depend on the thread count.
    const std::size_t block = 2048;
    const unsigned workers = std::max(1u, opt.threads);
    std::vector<double> fid;
    for (std::size_t start = 0; start < candidates.size() && !rep.reached_target; start += block) {
        const std::size_t stop = std::min(candidates.size(), start + block);
        fid.assign(stop - start, 0.0);
        auto work = [&](std::size_t lo, std::size_t hi) {
            for (std::size_t i = lo; i < hi; ++i) fid[i - start] = std::abs(amp(time_of(candidates[i])));
        };
        if (workers == 1) {
            work(start, stop);
        } else {
            std::vector<std::jthread> pool;
            const std::size_t per = (stop - start + workers - 1) / workers;
            for (std::size_t lo = start; lo < stop; lo += per) pool.emplace_back(work, lo, std::min(stop, lo + per));
        }
        for (std::size_t i = start; i < stop; ++i) {
            const PgstSample s{candidates[i], time_of(candidates[i]), fid[i - start]};
            rep.samples.push_back(s);
            if (!rep.best || s.fidelity > rep.best->fidelity) rep.best = s;
            if (s.fidelity >= target) {
                rep.reached_target = true;
                break;
            }
        }
    }
    return rep;
}

}  // namespace vcc
