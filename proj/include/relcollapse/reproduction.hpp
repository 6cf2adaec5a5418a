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

#include <cmath>
#include <random>
#include <string>
#include <vector>

#include "relcollapse/attribution.hpp"
#include "relcollapse/gadgets.hpp"
#include "relcollapse/oracle.hpp"

namespace relcollapse::reproduce {

/// Singlet first, then the three triplets (+1, 0, -1).
inline std::vector<std::pair<std::string, Vector>> coupled_inputs() {
    const auto cs = gadgets::coupled_states();
    return {{"singlet", cs.singlet}, {"triplet_p1", cs.triplet_p1}, {"triplet_0", cs.triplet_0}, {"triplet_m1", cs.triplet_m1}};
}

/// Normalized two-qubit state with complex Gaussian amplitudes.
inline Vector random_pair_state(std::mt19937_64 &rng) {
    std::normal_distribution<double> g;
    Vector v(4);
    for (Eigen::Index i = 0; i < 4; ++i) v(i) = cplx(g(rng), g(rng));
    return v / v.norm();
}

struct AlphaResult {
    std::vector<std::pair<std::string, double>> phi1;  ///< P(Phi found in round 1) per input
    double max_error = 0.0;  ///< against 1 for the singlet, 0 for triplets
    bool pass(double tol = 1e-12) const { return max_error < tol; }
};

inline AlphaResult feature_alpha() {
    AlphaResult r;
    for (const auto &[name, psi] : coupled_inputs()) {
        const auto s = gadgets::fig1(psi);
        const auto d = enumerate(s);
        const double p = d.probability(s.predicate("phi1"));
        r.phi1.emplace_back(name, p);
        r.max_error = std::max(r.max_error, std::abs(p - (name == "singlet" ? 1.0 : 0.0)));
    }
    return r;
}

struct BetaResult {
    std::size_t samples = 0;
    double max_error = 0.0;  ///< |P(Phi2 | Phi1) - 1|
    double min_phi1 = 1.0;
    bool pass(double tol = 1e-9) const { return samples > 0 && max_error < tol; }
};

/// P(Phi2 found | Phi1 found) for `n` random input pairs, in both isospin
/// geometries.
inline BetaResult feature_beta(std::size_t n = 20, std::uint64_t seed = 20260101) {
    std::mt19937_64 rng(seed);
    BetaResult r;
    for (std::size_t i = 0; i < n; ++i) {
        const Vector psi = random_pair_state(rng);
        for (const auto &s : {gadgets::fig1(psi), gadgets::fig2(psi)}) {
            const auto d = enumerate(s);
            const double p1 = d.probability(s.predicate("phi1"));
            r.min_phi1 = std::min(r.min_phi1, p1);
            const double c = conditional(d, s.predicate("phi1"), s.predicate("phi2"));
            r.max_error = std::max(r.max_error, std::abs(c - 1.0));
            ++r.samples;
        }
    }
    return r;
}

struct PipelineResult {
    double max_difference = 0.0;
    std::size_t cases = 0;
    bool pass(double tol = 1e-12) const { return cases > 0 && max_difference < tol; }
};

/// Both orderings of the two gadget rounds and the I_z measurement of A:
/// the standard one (round 1, round 2, then M) against the one seen along
/// A's backward light cones (A-side operators, M, then B-side operators).
/// Compared as unnormalized vectors for every coupled input and M outcome.
inline PipelineResult pipelines_agree() {
    PipelineResult r;
    for (const auto &[name, psi] : coupled_inputs()) {
        const auto s = gadgets::fig1(psi);
        auto op = [&](const std::string &id) -> const LocalOperator & { return s.event(id).interaction().unitary; };
        for (const auto &o : s.event("M").measurement().outcomes) {
            Vector standard = s.initial.amplitudes();
            for (const auto *id : {"L1", "R1", "L2", "R2"}) standard = apply_local(op(id), s.space, standard);
            standard = apply_local(o.projector, s.space, standard);

            Vector cones = s.initial.amplitudes();
            for (const auto *id : {"L1", "L2"}) cones = apply_local(op(id), s.space, cones);
            cones = apply_local(o.projector, s.space, cones);
            for (const auto *id : {"R1", "R2"}) cones = apply_local(op(id), s.space, cones);

            r.max_difference = std::max(r.max_difference, (standard - cones).norm());
            ++r.cases;
        }
    }
    return r;
}

struct CuriousCheck {
    CuriousReport report;
    bool pass(double tol = 1e-12) const {
        if (report.rows.size() != 2) return false;
        const auto &g = report.rows[0];
        const auto &u = report.rows[1];
        return g.isospin_sq.definite && std::abs(g.isospin_sq.eigenvalue - 6.0) < 1e-9 && !g.type_a.definite &&
               !u.isospin_sq.definite && !u.type_a.definite && report.no_k_norm_a < tol && report.no_k_norm_b < tol;
    }
};

inline CuriousCheck curious_check() {
    const auto s = gadgets::fig3();
    return {curious_report(s, *s.lookup_point("P"), *s.lookup_point("Pp"), {{"M", "pi"}})};
}

}  // namespace relcollapse::reproduce
