// Copyright 2026 The relcollapse Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#pragma once

#include <sstream>
#include <string>
#include <vector>

#include <Eigen/SVD>

#include "relcollapse/collapse.hpp"
#include "relcollapse/exact.hpp"
#include "relcollapse/gadgets.hpp"
#include "relcollapse/hilbert.hpp"
#include "relcollapse/scenario.hpp"

namespace relcollapse {

enum class AttributionRule {
    GhirardiSplit,  ///< local properties from sigma(P), joint ones from sigma(P,P')
    UniformSigmaP,  ///< everything from sigma(P)
};

inline const char *to_string(AttributionRule r) {
    return r == AttributionRule::GhirardiSplit ? "ghirardi" : "uniform";
}

inline AttributionRule parse_rule(const std::string &text) {
    if (text == "ghirardi") return AttributionRule::GhirardiSplit;
    if (text == "uniform") return AttributionRule::UniformSigmaP;
    throw ValidationError("unknown attribution rule '" + text + "' (expected ghirardi or uniform)");
}

struct Verdict {
    bool definite = false;
    double eigenvalue = 0.0;  ///< Rayleigh quotient; the value when definite
    double residual = 0.0;
    CausalSurface surface;
    double weight = 0.0;
    std::vector<std::string> warnings;
};

namespace detail {

inline Verdict verdict_on(const Scenario &s, const LocalOperator &o, const CausalSurface &surf,
                          const OutcomeAssignment &oa, double tol) {
    const auto st = surface_state(s, surf, oa);
    if (st.impossible) {
        std::ostringstream os;
        os << "surface state on " << surf << " has zero weight for the given outcomes";
        throw NumericalError(os.str());
    }
    const auto ec = eigencheck(o, st.state, tol);
    Verdict v;
    v.definite = ec.definite;
    v.eigenvalue = ec.eigenvalue;
    v.residual = ec.residual;
    v.surface = surf;
    v.weight = st.weight;
    return v;
}

inline bool on_worldline_of(const Scenario &s, const std::string &subsystem, const Event &p) {
    const auto *wl = s.worldline(subsystem);
    return wl && exact::on_polyline(wl->vertices, p);
}

}  // namespace detail

/// Value of a one-subsystem observable at P. Both rules read it off
/// Psi(sigma(P)); the split rule additionally wants P on that subsystem's
/// world-line.
inline Verdict attribute_local(const Scenario &s, const Event &p, const LocalOperator &o, const OutcomeAssignment &oa,
                               AttributionRule rule, double tol = kEigenTolerance) {
    if (o.targets().size() != 1) throw ValidationError("local observable '" + o.name() + "' must act on one subsystem");
    const auto &target = o.targets().front().name;
    if (rule == AttributionRule::GhirardiSplit && !detail::on_worldline_of(s, target, p)) {
        std::ostringstream os;
        os << "point " << p << " is not on the world-line of '" << target << "'";
        throw ValidationError(os.str());
    }
    return detail::verdict_on(s, o, sigma(p), oa, tol);
}

/// Value of a two-subsystem observable for the pair (P, P'), P on the first
/// target's world-line and P' on the second's.
inline Verdict attribute_joint(const Scenario &s, const Event &p, const Event &pp, const LocalOperator &o,
                               const OutcomeAssignment &oa, AttributionRule rule, double tol = kEigenTolerance) {
    if (o.targets().size() != 2) throw ValidationError("joint observable '" + o.name() + "' must act on two subsystems");
    std::vector<std::string> warnings;
    if (causal_relation(p, pp) != CausalRelation::Spacelike) {
        std::ostringstream os;
        os << "points " << p << " and " << pp << " are not spacelike separated";
        warnings.push_back(os.str());
    }
    Verdict v;
    if (rule == AttributionRule::GhirardiSplit) {
        const auto &a = o.targets()[0].name;
        const auto &b = o.targets()[1].name;
        if (!detail::on_worldline_of(s, a, p) || !detail::on_worldline_of(s, b, pp)) {
            std::ostringstream os;
            os << "points " << p << ", " << pp << " are not on the world-lines of '" << a << "' and '" << b << "'";
            throw ValidationError(os.str());
        }
        v = detail::verdict_on(s, o, sigma(std::vector<Event>{p, pp}), oa, tol);
    } else {
        v = detail::verdict_on(s, o, sigma(p), oa, tol);
    }
    v.warnings = std::move(warnings);
    return v;
}

struct CuriousReport {
    struct RuleRow {
        AttributionRule rule;
        Verdict isospin_sq;  ///< total I^2 of A and B
        Verdict type_a;      ///< pion projector of A
    };
    std::vector<RuleRow> rows;  ///< GhirardiSplit, then UniformSigmaP
    double no_k_norm_a = 0.0;   ///< operator norm of Pi_{I^2=6} Pi_K^A
    double no_k_norm_b = 0.0;
};

inline double operator_norm(const Matrix &m) {
    Eigen::JacobiSVD<Matrix> svd(m);
    return svd.singularValues().size() ? svd.singularValues()(0) : 0.0;
}

/// The meson pair read from (P on A, P' on B): joint isospin and A's particle
/// type under both rules, plus the state-independent check that the I = 2
/// sector holds no kaon on either side.
inline CuriousReport curious_report(const Scenario &s, const Event &p, const Event &pp, const OutcomeAssignment &oa,
                                    double tol = kEigenTolerance) {
    const auto i2 = gadgets::builtin_operator("builtin.meson_isospin_sq", {"A", "B"});
    const auto type_a = gadgets::builtin_operator("builtin.pi_projector", {"A"});
    CuriousReport r;
    for (auto rule : {AttributionRule::GhirardiSplit, AttributionRule::UniformSigmaP}) {
        r.rows.push_back({rule, attribute_joint(s, p, pp, i2, oa, rule, tol), attribute_local(s, p, type_a, oa, rule, tol)});
    }
    const Matrix pi6 = gadgets::spectral_projector(gadgets::meson_isospin_sq(), 6.0);
    const Matrix id5 = Matrix::Identity(5, 5);
    r.no_k_norm_a = operator_norm(pi6 * kron(gadgets::k_projector(), id5));
    r.no_k_norm_b = operator_norm(pi6 * kron(id5, gadgets::k_projector()));
    return r;
}

}  // namespace relcollapse
