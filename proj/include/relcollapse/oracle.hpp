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

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <functional>
#include <future>
#include <ostream>
#include <string>
#include <thread>
#include <vector>

#include "relcollapse/collapse.hpp"
#include "relcollapse/hilbert.hpp"
#include "relcollapse/scenario.hpp"
#include "relcollapse/spacetime.hpp"

namespace relcollapse {

/// Branches below this probability are not followed further; they are
/// reported with their (tiny) probability and a zero post-state.
inline constexpr double kPruneProbability = 1e-28;
/// enumerate() keeps every post-state only up to this many branches.
inline constexpr std::size_t kMaterializeLimit = 4096;

struct Branch {
    OutcomeAssignment outcomes;
    double probability = 0.0;
    StateVector post_state;  ///< normalized; zero vector when the branch is impossible
};

struct OutcomeDistribution {
    std::vector<std::string> measurement_ids;  ///< scenario order
    std::vector<Branch> branches;  ///< mixed radix over measurement_ids, last fastest

    double total() const {
        double t = 0.0;
        for (const auto &b : branches) t += b.probability;
        return t;
    }

    double probability(const std::function<bool(const OutcomeAssignment &)> &pred) const {
        double p = 0.0;
        for (const auto &b : branches) {
            if (pred(b.outcomes)) p += b.probability;
        }
        return p;
    }
};

namespace detail {

struct BranchPlan {
    std::vector<std::size_t> lin;
    std::vector<std::size_t> measurement_slot;  ///< per event, index into measurements or npos
    std::vector<std::vector<OperatorPlan>> ops;  ///< per event: [unitary] or one per outcome
    std::vector<std::size_t> radix;  ///< per measurement slot
    std::vector<std::size_t> weight;  ///< mixed-radix place value per slot
    std::size_t count = 1;
};

inline BranchPlan branch_plan(const Scenario &s, std::span<const std::size_t> lin) {
    const auto order = s.causal_order();
    if (lin.size() != s.events.size() || !order.is_linearization(lin)) {
        throw ValidationError("event order is not a linearization of the causal order");
    }
    BranchPlan plan;
    plan.lin.assign(lin.begin(), lin.end());
    plan.measurement_slot.assign(s.events.size(), static_cast<std::size_t>(-1));
    const auto ms = s.measurement_indices();
    for (std::size_t k = 0; k < ms.size(); ++k) {
        plan.measurement_slot[ms[k]] = k;
        plan.radix.push_back(s.events[ms[k]].measurement().outcomes.size());
    }
    plan.weight.assign(ms.size(), 1);
    for (std::size_t k = ms.size(); k-- > 0;) {
        plan.weight[k] = plan.count;
        plan.count *= plan.radix[k];
    }
    for (const auto &e : s.events) {
        std::vector<OperatorPlan> v;
        if (e.is_measurement()) {
            for (const auto &o : e.measurement().outcomes) v.emplace_back(o.projector, s.space);
        } else {
            v.emplace_back(e.interaction().unitary, s.space);
        }
        plan.ops.push_back(std::move(v));
    }
    return plan;
}

}  // namespace detail

/// Depth-first over the outcomes of every measurement, applying the events in
/// the order `lin`. Calls `visit(index, outcome digits, unnormalized final
/// vector)` once per branch; index is the branch's mixed-radix position.
/// Pruned branches are visited with an empty vector.
inline void for_each_branch(const Scenario &s, std::span<const std::size_t> lin,
                            const std::function<void(std::size_t, const std::vector<std::size_t> &, const Vector &)> &visit) {
    const auto plan = detail::branch_plan(s, lin);
    std::vector<std::size_t> digits(plan.radix.size(), 0);
    const Vector empty;

    std::function<void(std::size_t, const Vector &, std::size_t)> rec = [&](std::size_t depth, const Vector &amps,
                                                                            std::size_t index) {
        if (depth == plan.lin.size()) {
            visit(index, digits, amps);
            return;
        }
        const auto ev = plan.lin[depth];
        const auto slot = plan.measurement_slot[ev];
        if (slot == static_cast<std::size_t>(-1)) {
            rec(depth + 1, plan.ops[ev][0].apply(amps), index);
            return;
        }
        for (std::size_t o = 0; o < plan.radix[slot]; ++o) {
            digits[slot] = o;
            const std::size_t next = index + o * plan.weight[slot];
            Vector projected = plan.ops[ev][o].apply(amps);
            if (projected.squaredNorm() < kPruneProbability) {
                // every completion of this prefix is (near) impossible
                std::function<void(std::size_t, std::size_t)> fill = [&](std::size_t d, std::size_t idx) {
                    if (d == plan.lin.size()) {
                        visit(idx, digits, empty);
                        return;
                    }
                    const auto s2 = plan.measurement_slot[plan.lin[d]];
                    if (s2 == static_cast<std::size_t>(-1)) {
                        fill(d + 1, idx);
                        return;
                    }
                    for (std::size_t o2 = 0; o2 < plan.radix[s2]; ++o2) {
                        digits[s2] = o2;
                        fill(d + 1, idx + o2 * plan.weight[s2]);
                    }
                    digits[s2] = 0;
                };
                fill(depth + 1, next);
                digits[slot] = o;
                continue;
            }
            rec(depth + 1, projected, next);
        }
        digits[slot] = 0;
    };
    rec(0, s.initial.amplitudes(), 0);
}

inline OutcomeAssignment assignment_from_digits(const Scenario &s, const std::vector<std::size_t> &digits) {
    OutcomeAssignment oa;
    const auto ms = s.measurement_indices();
    for (std::size_t k = 0; k < ms.size(); ++k) {
        oa[s.events[ms[k]].id] = s.events[ms[k]].measurement().outcomes[digits[k]].name;
    }
    return oa;
}

/// Full joint distribution of all measurement outcomes for the event order
/// `lin`, with normalized post-states.
inline OutcomeDistribution enumerate(const Scenario &s, std::span<const std::size_t> lin) {
    OutcomeDistribution d;
    for (auto i : s.measurement_indices()) d.measurement_ids.push_back(s.events[i].id);
    const auto plan = detail::branch_plan(s, lin);
    if (plan.count > kMaterializeLimit) {
        throw ValidationError("scenario has " + std::to_string(plan.count) + " branches; use for_each_branch");
    }
    d.branches.resize(plan.count);
    for_each_branch(s, lin, [&](std::size_t index, const std::vector<std::size_t> &digits, const Vector &amps) {
        Branch &b = d.branches[index];
        b.outcomes = assignment_from_digits(s, digits);
        if (amps.size() == 0) {
            b.probability = 0.0;
            b.post_state = StateVector(s.space, Vector::Zero(static_cast<Eigen::Index>(s.space.total_dim())));
            return;
        }
        b.probability = amps.squaredNorm();
        if (b.probability >= kPruneProbability) {
            b.post_state = StateVector(s.space, amps / std::sqrt(b.probability));
        } else {
            b.post_state = StateVector(s.space, Vector::Zero(amps.size()));
        }
    });
    return d;
}

/// Branch probabilities only, in mixed-radix order; no size limit.
inline std::vector<double> branch_probabilities(const Scenario &s, std::span<const std::size_t> lin) {
    std::vector<double> p;
    for_each_branch(s, lin, [&](std::size_t index, const std::vector<std::size_t> &, const Vector &amps) {
        if (p.size() <= index) p.resize(index + 1, 0.0);
        p[index] = amps.size() == 0 ? 0.0 : amps.squaredNorm();
    });
    return p;
}

/// Deterministic order used as the reference: lexicographically first
/// linearization.
inline std::vector<std::size_t> reference_order(const Scenario &s) {
    std::vector<std::size_t> all(s.events.size());
    for (std::size_t i = 0; i < all.size(); ++i) all[i] = i;
    return stable_topological_order(s.causal_order(), all);
}

inline OutcomeDistribution enumerate(const Scenario &s) {
    const auto lin = reference_order(s);
    return enumerate(s, lin);
}

inline double max_discrepancy(const std::vector<double> &a, const std::vector<double> &b) {
    if (a.size() != b.size()) throw ValidationError("distributions have different supports");
    double m = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) m = std::max(m, std::abs(a[i] - b[i]));
    return m;
}

struct OrderComparison {
    double max_discrepancy = 0.0;
    std::uint64_t total_linearizations = 0;  ///< saturates at the counting limit
    std::size_t checked = 0;
    bool exhaustive = true;
};

/// Enumerates the distribution under every linearization of the causal order
/// (a seeded sample of `cap` when there are more) and reports the largest
/// probability difference from the reference order.
inline OrderComparison compare_orders(const Scenario &s, std::size_t cap = 1024) {
    const auto order = s.causal_order();
    OrderComparison out;
    constexpr std::uint64_t count_limit = std::uint64_t{1} << 62;
    out.total_linearizations = count_linearizations(order, count_limit);
    const auto lins = linearizations(order, cap);
    out.exhaustive = out.total_linearizations <= cap;
    const auto ref = branch_probabilities(s, reference_order(s));
    std::vector<double> worst(lins.size(), 0.0);
    const std::size_t workers = std::max<std::size_t>(1, std::min<std::size_t>(std::thread::hardware_concurrency(), 8));
    std::vector<std::future<void>> jobs;
    for (std::size_t w = 0; w < workers; ++w) {
        jobs.push_back(std::async(std::launch::async, [&, w] {
            for (std::size_t k = w; k < lins.size(); k += workers) {
                worst[k] = max_discrepancy(ref, branch_probabilities(s, lins[k]));
            }
        }));
    }
    for (auto &j : jobs) j.get();
    for (double v : worst) out.max_discrepancy = std::max(out.max_discrepancy, v);
    out.checked = lins.size();
    return out;
}

struct CommutationCertificate {
    std::size_t incomparable_pairs = 0;
    std::size_t overlapping_pairs = 0;  ///< incomparable pairs sharing a subsystem
    double max_commutator = 0.0;  ///< Frobenius norm, over every operator pair of every such event pair
};

namespace detail {

inline std::vector<const LocalOperator *> event_operators(const EventSpec &e) {
    std::vector<const LocalOperator *> out;
    if (e.is_measurement()) {
        for (const auto &o : e.measurement().outcomes) out.push_back(&o.projector);
    } else {
        out.push_back(&e.interaction().unitary);
    }
    return out;
}

/// ||[a, b]|| on the joint support of the two operators.
inline double commutator_norm(const LocalOperator &a, const LocalOperator &b) {
    std::vector<SubsystemLabel> support = a.targets();
    for (const auto &t : b.targets()) {
        if (std::find(support.begin(), support.end(), t) == support.end()) support.push_back(t);
    }
    const SpaceDescriptor space(support);
    const OperatorPlan pa(a, space);
    const OperatorPlan pb(b, space);
    const auto dim = static_cast<Eigen::Index>(space.total_dim());
    double sum = 0.0;
    for (Eigen::Index k = 0; k < dim; ++k) {
        Vector e = Vector::Zero(dim);
        e(k) = 1.0;
        sum += (pa.apply(pb.apply(e)) - pb.apply(pa.apply(e))).squaredNorm();
    }
    return std::sqrt(sum);
}

}  // namespace detail

/// Any two linearizations differ by swaps of adjacent causally unordered
/// events, so when every such pair commutes (for every outcome) all orders
/// give the same branch vectors.
inline CommutationCertificate commutation_certificate(const Scenario &s) {
    const auto order = s.causal_order();
    CommutationCertificate c;
    for (std::size_t i = 0; i < s.events.size(); ++i) {
        for (std::size_t j = i + 1; j < s.events.size(); ++j) {
            if (order.precedes(i, j) || order.precedes(j, i)) continue;
            ++c.incomparable_pairs;
            const auto ti = s.events[i].targets();
            const auto tj = s.events[j].targets();
            const bool overlap =
                std::any_of(ti.begin(), ti.end(), [&](const auto &t) { return std::find(tj.begin(), tj.end(), t) != tj.end(); });
            if (!overlap) continue;
            ++c.overlapping_pairs;
            for (const auto *a : detail::event_operators(s.events[i])) {
                for (const auto *b : detail::event_operators(s.events[j])) {
                    c.max_commutator = std::max(c.max_commutator, detail::commutator_norm(*a, *b));
                }
            }
        }
    }
    return c;
}

struct PrescriptionComparison {
    struct Row {
        std::string prescription;
        std::string worldline;
        std::vector<std::string> order;  ///< event ids
        double discrepancy = 0.0;
    };
    std::vector<Row> rows;
    double max_discrepancy = 0.0;
};

inline std::vector<Prescription> standard_prescriptions() {
    return {HKPrescription{}, ForwardConePrescription{}, FlatFramePrescription{0.0}, FlatFramePrescription{1.0},
            FlatFramePrescription{-1.0}};
}

/// For each prescription and each world-line, the order in which the events
/// are incorporated along that world-line, and the distribution it yields
/// compared with the reference order.
inline PrescriptionComparison compare_prescriptions(const Scenario &s,
                                                    const std::vector<Prescription> &prescs = standard_prescriptions()) {
    PrescriptionComparison out;
    const auto ref = branch_probabilities(s, reference_order(s));
    for (const auto &p : prescs) {
        for (const auto &wl : s.worldlines) {
            PrescriptionComparison::Row row;
            row.prescription = to_string(p);
            row.worldline = wl.subsystem;
            const auto lin = prescription_order(s, wl.vertices, p);
            for (auto i : lin) row.order.push_back(s.events[i].id);
            row.discrepancy = max_discrepancy(ref, branch_probabilities(s, lin));
            out.max_discrepancy = std::max(out.max_discrepancy, row.discrepancy);
            out.rows.push_back(std::move(row));
        }
    }
    return out;
}

/// P(target | given).
inline double conditional(const OutcomeDistribution &d, const std::function<bool(const OutcomeAssignment &)> &given,
                          const std::function<bool(const OutcomeAssignment &)> &target) {
    const double pg = d.probability(given);
    if (pg < kZeroNorm) throw NumericalError("conditioning on an outcome of probability zero");
    const double pj = d.probability([&](const OutcomeAssignment &oa) { return given(oa) && target(oa); });
    return pj / pg;
}

inline std::string format_probability(double p, int digits = 17) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.*g", digits, p);
    return buf;
}

/// One row per branch: the outcome name of each measurement, then the
/// probability.
inline void write_csv(std::ostream &os, const OutcomeDistribution &d) {
    for (const auto &id : d.measurement_ids) os << id << ',';
    os << "probability\n";
    for (const auto &b : d.branches) {
        for (const auto &id : d.measurement_ids) os << b.outcomes.at(id) << ',';
        os << format_probability(b.probability) << '\n';
    }
}

}  // namespace relcollapse
