// serialize.hpp - nlohmann::json conversions for graphs, decompositions and reports.

#pragma once

#include "corona_spectra.hpp"
#include "graph.hpp"
#include "spectral.hpp"
#include "state_transfer.hpp"

#include <json.hpp>

#include <limits>
#include <string>

namespace vcc {

using nlohmann::json;

// Integers that fit in 64 bits are emitted as numbers, larger ones as strings.
inline json bigint_json(const BigInt& x) {
    if (x >= std::numeric_limits<long long>::min() && x <= std::numeric_limits<long long>::max()) {
        return json(static_cast<long long>(x));
    }
    return json(x.str());
}

template <class T>
json optional_json(const std::optional<T>& x) {
    return x ? json(*x) : json(nullptr);
}

inline void to_json(json& j, const Graph& g) {
    j = json{{"vertices", g.order()}, {"edges", g.edges()}};
}

inline void to_json(json& j, const CoronaLabeling& lab) {
    json verts = json::array();
    for (int i = 0; i < lab.total(); ++i) {
        const auto [owner, w] = lab.composite(i);
        verts.push_back({{"index", i}, {"owner", owner}, {"w", w}});
    }
    j = json{{"backbone", lab.backbone_size()}, {"satellite_sizes", lab.satellite_sizes()}, {"vertices", verts}};
}

inline void to_json(json& j, const Corona& c) { j = json{{"graph", c.graph}, {"labeling", c.labeling}}; }

inline void to_json(json& j, const SpectralDecomposition& d) {
    j = json::array();
    for (std::size_t r = 0; r < d.distinct(); ++r) {
        const auto& f = d.projectors[r];
        std::vector<double> flat;
        flat.reserve(static_cast<std::size_t>(f.size()));
        for (Eigen::Index a = 0; a < f.rows(); ++a)
            for (Eigen::Index b = 0; b < f.cols(); ++b) flat.push_back(f(a, b));
        j.push_back({{"eigenvalue", d.eigenvalues[r]}, {"multiplicity", d.multiplicities[r]}, {"projector", flat}});
    }
}

inline void to_json(json& j, const EigenvalueDescriptor& e) {
    switch (e.kind) {
    case EigenvalueDescriptor::Kind::integer:
        j = json{{"kind", "integer"}, {"value", bigint_json(e.integer)}};
        return;
    case EigenvalueDescriptor::Kind::surd:
        j = json{{"kind", "surd"}, {"p", bigint_json(e.p)}, {"q", bigint_json(e.q)}, {"sign", e.sign}};
        return;
    case EigenvalueDescriptor::Kind::inexact:
        j = json{{"kind", "inexact"}};
        return;
    }
}

inline void to_json(json& j, const ClosedFormSpectrum& s) {
    json entries = json::array();
    for (const auto& e : s.entries) {
        entries.push_back({{"value", e.value},
                           {"multiplicity", e.multiplicity},
                           {"families", e.families.to_string()},
                           {"exact", e.exact}});
    }
    j = json{{"n", s.n}, {"k", s.k}, {"total_multiplicity", s.total_multiplicity()}, {"entries", entries}};
}

inline void to_json(json& j, const LpstVerdict& v) {
    j = json{{"u", v.u},
             {"v", v.v},
             {"support", v.support},
             {"cospectral", {{"ok", v.cospectral}, {"signs", v.signs}}},
             {"all_integer", {{"ok", v.all_integer}, {"witness", optional_json(v.non_integer_witness)}}},
             {"parity",
              {{"evaluated", v.parity_evaluated},
               {"ok", v.parity_ok},
               {"witness", optional_json(v.parity_witness)},
               {"gcd", optional_json(v.support_gcd)}}},
             {"has_lpst", v.has_lpst},
             {"min_time", optional_json(v.min_time)}};
}

inline void to_json(json& j, const NoLpstWitness& w) {
    j = json{{"n", w.n},
             {"k", w.k},
             {"theta", w.theta},
             {"q", bigint_json(w.q)},
             {"floor_sqrt", bigint_json(w.floor_sqrt)},
             {"perfect_square", w.perfect_square}};
}

inline void to_json(json& j, const PgstSample& s) {
    j = json{{"kappa", s.kappa}, {"time", s.time}, {"fidelity", s.fidelity}};
}

inline void to_json(json& j, const PgstReport& r) {
    json groups = json::array();
    for (const auto& g : r.groups) groups.push_back({{"b", g.b}, {"thetas", g.thetas}, {"a", g.a}});
    j = json{{"status", r.status == PgstReport::Status::completed ? "completed" : "refused"},
             {"refusals", r.refusals},
             {"n", r.n},
             {"k", r.k},
             {"u", r.u},
             {"v", r.v},
             {"kappa_max", r.kappa_max},
             {"target", r.target},
             {"base_has_lpst", r.base_has_lpst},
             {"e", optional_json(r.e)},
             {"corona_top", r.corona_top},
             {"divisibility_ok", r.divisibility_ok},
             {"groups", groups},
             {"reached_target", r.reached_target},
             {"best", r.best ? json(*r.best) : json(nullptr)},
             {"samples", r.samples}};
}

}  // namespace vcc
