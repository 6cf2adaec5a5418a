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
#include <cstdlib>
#include <map>
#include <optional>
#include <sstream>
#include <string>
#include <variant>
#include <vector>

#include "relcollapse/error.hpp"
#include "relcollapse/exact.hpp"
#include "relcollapse/hilbert.hpp"
#include "relcollapse/spacetime.hpp"

namespace relcollapse {

/// Event id -> outcome name, for any subset of the measurement events.
using OutcomeAssignment = std::map<std::string, std::string>;

struct WorldLine {
    std::string subsystem;
    std::vector<Event> vertices;  ///< strictly increasing t, piecewise linear

    friend bool operator==(const WorldLine &, const WorldLine &) = default;
};

struct Outcome {
    std::string name;
    LocalOperator projector;
};

struct Interaction {
    LocalOperator unitary;
};

struct Measurement {
    std::vector<Outcome> outcomes;

    const Outcome *find(const std::string &name) const {
        for (const auto &o : outcomes) {
            if (o.name == name) return &o;
        }
        return nullptr;
    }
};

struct EventSpec {
    std::string id;
    Event at;
    std::variant<Interaction, Measurement> kind;

    bool is_measurement() const { return std::holds_alternative<Measurement>(kind); }
    const Measurement &measurement() const { return std::get<Measurement>(kind); }
    const Interaction &interaction() const { return std::get<Interaction>(kind); }

    std::vector<std::string> targets() const {
        if (is_measurement()) {
            const auto &m = measurement();
            return m.outcomes.empty() ? std::vector<std::string>{} : m.outcomes.front().projector.target_names();
        }
        return interaction().unitary.target_names();
    }
};

/// Parity constraint on measurement outcomes named "0" / "1".
struct ParityClause {
    std::vector<std::string> events;
    int parity = 0;

    friend bool operator==(const ParityClause &, const ParityClause &) = default;
};

/// Named conjunction of parity clauses, e.g. "phi1": the first gadget
/// round's probes were found back in their prepared state.
struct OutcomePredicate {
    std::string name;
    std::vector<ParityClause> clauses;

    /// False when any referenced event is unassigned.
    bool operator()(const OutcomeAssignment &oa) const {
        for (const auto &c : clauses) {
            int p = 0;
            for (const auto &id : c.events) {
                auto it = oa.find(id);
                if (it == oa.end()) return false;
                p ^= it->second == "1" ? 1 : 0;
            }
            if (p != c.parity) return false;
        }
        return true;
    }

    friend bool operator==(const OutcomePredicate &, const OutcomePredicate &) = default;
};

struct NamedPoint {
    std::string id;
    Event at;

    friend bool operator==(const NamedPoint &, const NamedPoint &) = default;
};

/// A request stored in a scenario file, consumed by the command-line tool.
struct QuerySpec {
    std::vector<std::pair<std::string, std::string>> params;

    std::optional<std::string> get(const std::string &key) const {
        for (const auto &[k, v] : params) {
            if (k == key) return v;
        }
        return std::nullopt;
    }

    friend bool operator==(const QuerySpec &, const QuerySpec &) = default;
};

struct Scenario {
    std::string name;
    SpaceDescriptor space;
    std::vector<WorldLine> worldlines;
    std::vector<EventSpec> events;
    StateVector initial;
    FlatSurface initial_surface;
    std::vector<NamedPoint> points;
    std::vector<OutcomePredicate> predicates;
    std::vector<QuerySpec> queries;

    std::optional<std::size_t> event_index(const std::string &id) const {
        for (std::size_t i = 0; i < events.size(); ++i) {
            if (events[i].id == id) return i;
        }
        return std::nullopt;
    }

    const EventSpec &event(const std::string &id) const {
        auto i = event_index(id);
        if (!i) throw ValidationError("unknown event '" + id + "'");
        return events[*i];
    }

    const WorldLine *worldline(const std::string &subsystem) const {
        for (const auto &w : worldlines) {
            if (w.subsystem == subsystem) return &w;
        }
        return nullptr;
    }

    const OutcomePredicate &predicate(const std::string &name) const {
        for (const auto &p : predicates) {
            if (p.name == name) return p;
        }
        throw ValidationError("unknown predicate '" + name + "'");
    }

    std::vector<Event> event_points() const {
        std::vector<Event> out;
        for (const auto &e : events) out.push_back(e.at);
        return out;
    }

    std::vector<std::size_t> measurement_indices() const {
        std::vector<std::size_t> out;
        for (std::size_t i = 0; i < events.size(); ++i) {
            if (events[i].is_measurement()) out.push_back(i);
        }
        return out;
    }

    PartialOrder causal_order() const {
        const auto pts = event_points();
        return causal_partial_order(pts);
    }

    /// Resolves a named point or event id to its location.
    std::optional<Event> lookup_point(const std::string &id) const {
        for (const auto &p : points) {
            if (p.id == id) return p.at;
        }
        if (auto i = event_index(id)) return events[*i].at;
        return std::nullopt;
    }
};

// ---------------------------------------------------------------------------
// Textual points and surfaces (shared by the file format and the CLI)
// ---------------------------------------------------------------------------

namespace detail {

inline std::string trim(const std::string &s) {
    const auto b = s.find_first_not_of(" \t\r");
    if (b == std::string::npos) return {};
    const auto e = s.find_last_not_of(" \t\r");
    return s.substr(b, e - b + 1);
}

/// Splits on `sep` at parenthesis/bracket depth zero.
inline std::vector<std::string> split_top(const std::string &s, char sep) {
    std::vector<std::string> out;
    int depth = 0;
    std::string cur;
    for (char c : s) {
        if (c == '(' || c == '[') ++depth;
        if (c == ')' || c == ']') --depth;
        if (c == sep && depth == 0) {
            out.push_back(cur);
            cur.clear();
        } else {
            cur += c;
        }
    }
    out.push_back(cur);
    return out;
}

inline double parse_real(const std::string &text) {
    const std::string s = trim(text);
    char *end = nullptr;
    const double v = std::strtod(s.c_str(), &end);
    if (s.empty() || end != s.c_str() + s.size() || !std::isfinite(v)) {
        throw ValidationError("expected a finite number, got '" + s + "'");
    }
    return v;
}

}  // namespace detail

/// "(t,x)" literal.
inline Event parse_event_literal(const std::string &text) {
    const std::string s = detail::trim(text);
    if (s.size() < 2 || s.front() != '(' || s.back() != ')') {
        throw ValidationError("expected a point '(t,x)', got '" + s + "'");
    }
    const auto parts = detail::split_top(s.substr(1, s.size() - 2), ',');
    if (parts.size() != 2) {
        throw ValidationError("expected a point '(t,x)', got '" + s + "'");
    }
    return {detail::parse_real(parts[0]), detail::parse_real(parts[1])};
}

/// A literal "(t,x)" or the id of a named point or event of `s`.
inline Event parse_point(const std::string &text, const Scenario &s) {
    const std::string t = detail::trim(text);
    if (!t.empty() && t.front() == '(') return parse_event_literal(t);
    if (auto p = s.lookup_point(t)) return *p;
    throw ValidationError("unknown point '" + t + "'");
}

/// flat(t0[,rapidity]) | sigma(P[,P2,...]) | eta(P), points as in parse_point.
inline CausalSurface parse_surface(const std::string &text, const Scenario &s) {
    const std::string t = detail::trim(text);
    const auto open = t.find('(');
    if (open == std::string::npos || t.back() != ')') {
        throw ValidationError("malformed surface '" + t + "'");
    }
    const std::string head = t.substr(0, open);
    const auto args = detail::split_top(t.substr(open + 1, t.size() - open - 2), ',');
    if (head == "flat") {
        if (args.size() > 2) throw ValidationError("flat(t0[,rapidity]) takes at most two arguments");
        return flat(detail::parse_real(args[0]), args.size() == 2 ? detail::parse_real(args[1]) : 0.0);
    }
    std::vector<Event> pts;
    for (const auto &a : args) pts.push_back(parse_point(a, s));
    if (head == "sigma") {
        if (pts.size() == 1) return sigma(pts.front());
        return sigma(std::move(pts));
    }
    if (head == "eta") {
        if (pts.size() != 1) throw ValidationError("eta(P) takes one point");
        return eta(pts.front());
    }
    throw ValidationError("unknown surface kind '" + head + "'");
}

/// "M=pi,zL1=0" (empty string allowed).
inline OutcomeAssignment parse_outcomes(const std::string &text) {
    OutcomeAssignment oa;
    const std::string t = detail::trim(text);
    if (t.empty()) return oa;
    for (const auto &item : detail::split_top(t, ',')) {
        const auto eq = item.find('=');
        if (eq == std::string::npos) throw ValidationError("expected event=outcome, got '" + item + "'");
        const auto id = detail::trim(item.substr(0, eq));
        if (oa.count(id)) throw ValidationError("outcome for '" + id + "' given twice");
        oa[id] = detail::trim(item.substr(eq + 1));
    }
    return oa;
}

// ---------------------------------------------------------------------------
// Validation
// ---------------------------------------------------------------------------

namespace detail {

inline Matrix identity_on(const std::vector<SubsystemLabel> &targets) {
    std::size_t d = 1;
    for (const auto &t : targets) d *= t.dim;
    return Matrix::Identity(static_cast<Eigen::Index>(d), static_cast<Eigen::Index>(d));
}

}  // namespace detail

/// The surfaces declared by queries of `s` (those with a `surface=` key).
inline std::vector<CausalSurface> declared_surfaces(const Scenario &s) {
    std::vector<CausalSurface> out;
    for (const auto &q : s.queries) {
        if (auto surf = q.get("surface")) out.push_back(parse_surface(*surf, s));
    }
    return out;
}

/// Every invariant violation found; empty means valid.
inline std::vector<std::string> validate(const Scenario &s) {
    std::vector<std::string> v;
    auto str = [](const Event &e) {
        std::ostringstream os;
        os << e;
        return os.str();
    };

    for (const auto &l : s.space.labels()) {
        if (l.dim < 2) v.push_back("subsystem '" + l.name + "' has dimension " + std::to_string(l.dim) + " < 2");
    }

    // world-lines
    for (const auto &l : s.space.labels()) {
        const auto n = std::count_if(s.worldlines.begin(), s.worldlines.end(),
                                     [&](const WorldLine &w) { return w.subsystem == l.name; });
        if (n != 1) v.push_back("subsystem '" + l.name + "' has " + std::to_string(n) + " world-lines, expected 1");
    }
    for (const auto &w : s.worldlines) {
        if (!s.space.position(w.subsystem)) {
            v.push_back("world-line for unknown subsystem '" + w.subsystem + "'");
        }
        if (w.vertices.empty()) v.push_back("world-line of '" + w.subsystem + "' has no points");
        for (std::size_t k = 0; k + 1 < w.vertices.size(); ++k) {
            const auto &a = w.vertices[k];
            const auto &b = w.vertices[k + 1];
            if (!(a.t < b.t)) {
                v.push_back("world-line of '" + w.subsystem + "' is not strictly increasing in t at " + str(b));
            } else if (!exact::within_light_speed(a, b)) {
                v.push_back("world-line of '" + w.subsystem + "' is superluminal between " + str(a) + " and " + str(b));
            }
        }
    }

    // initial state
    if (!(s.initial.space() == s.space)) {
        v.push_back("initial state is not defined on the scenario space");
    } else if (std::abs(s.initial.norm() - 1.0) > 1e-10) {
        v.push_back("initial state is not normalized (norm " + std::to_string(s.initial.norm()) + ")");
    }

    // events
    for (std::size_t i = 0; i < s.events.size(); ++i) {
        const auto &e = s.events[i];
        if (e.id.empty()) v.push_back("event with empty id");
        for (std::size_t j = 0; j < i; ++j) {
            if (s.events[j].id == e.id) v.push_back("duplicate event id '" + e.id + "'");
            if (s.events[j].at == e.at) {
                v.push_back("events '" + s.events[j].id + "' and '" + e.id + "' are coincident");
            }
        }
        if (side_of_surface(e.at, s.initial_surface) != SurfaceSide::After) {
            v.push_back("event '" + e.id + "' is not after the initial surface");
        }

        std::vector<SubsystemLabel> targets;
        if (e.is_measurement()) {
            const auto &m = e.measurement();
            if (m.outcomes.empty()) {
                v.push_back("measurement '" + e.id + "' has no outcomes");
                continue;
            }
            targets = m.outcomes.front().projector.targets();
            Matrix sum = Matrix::Zero(m.outcomes.front().projector.matrix().rows(),
                                      m.outcomes.front().projector.matrix().cols());
            bool shape_ok = true;
            for (std::size_t a = 0; a < m.outcomes.size(); ++a) {
                const auto &pa = m.outcomes[a].projector;
                if (pa.kind() != OperatorKind::Projector) {
                    v.push_back("measurement '" + e.id + "' outcome '" + m.outcomes[a].name + "' is not a projector");
                }
                if (pa.targets() != targets) {
                    v.push_back("measurement '" + e.id + "' outcomes act on different subsystems");
                    shape_ok = false;
                    continue;
                }
                sum += pa.matrix();
                for (std::size_t b = 0; b < a; ++b) {
                    if (m.outcomes[b].name == m.outcomes[a].name) {
                        v.push_back("measurement '" + e.id + "' repeats outcome '" + m.outcomes[a].name + "'");
                    }
                    if (m.outcomes[b].projector.targets() == targets &&
                        (m.outcomes[b].projector.matrix() * pa.matrix()).cwiseAbs().maxCoeff() > kOperatorTolerance) {
                        v.push_back("measurement '" + e.id + "' outcomes '" + m.outcomes[b].name + "' and '" +
                                    m.outcomes[a].name + "' are not orthogonal");
                    }
                }
            }
            if (shape_ok && (sum - detail::identity_on(targets)).cwiseAbs().maxCoeff() > kOperatorTolerance) {
                v.push_back("measurement '" + e.id + "' projectors do not sum to the identity");
            }
        } else {
            const auto &u = e.interaction().unitary;
            if (u.kind() != OperatorKind::Unitary) v.push_back("interaction '" + e.id + "' operator is not unitary");
            targets = u.targets();
        }

        for (const auto &t : targets) {
            const auto pos = s.space.position(t.name);
            if (!pos) {
                v.push_back("event '" + e.id + "' targets unknown subsystem '" + t.name + "'");
                continue;
            }
            if (s.space.labels()[*pos].dim != t.dim) {
                v.push_back("event '" + e.id + "' expects dimension " + std::to_string(t.dim) + " for '" + t.name +
                            "'");
            }
            const auto *w = s.worldline(t.name);
            if (w && !w->vertices.empty() && !exact::on_polyline(w->vertices, e.at)) {
                v.push_back("locality: event '" + e.id + "' at " + str(e.at) + " targets '" + t.name +
                            "', whose world-line does not pass through that point");
            }
        }
    }

    // predicates
    for (const auto &p : s.predicates) {
        for (const auto &c : p.clauses) {
            for (const auto &id : c.events) {
                auto i = s.event_index(id);
                if (!i || !s.events[*i].is_measurement()) {
                    v.push_back("predicate '" + p.name + "' references '" + id + "', which is not a measurement");
                    continue;
                }
                for (const auto &o : s.events[*i].measurement().outcomes) {
                    if (o.name != "0" && o.name != "1") {
                        v.push_back("predicate '" + p.name + "' needs outcomes named 0/1 on '" + id + "'");
                        break;
                    }
                }
            }
        }
    }

    // points and query surfaces
    for (std::size_t i = 0; i < s.points.size(); ++i) {
        for (std::size_t j = 0; j < i; ++j) {
            if (s.points[i].id == s.points[j].id) v.push_back("duplicate point id '" + s.points[i].id + "'");
        }
        if (s.event_index(s.points[i].id)) v.push_back("point id '" + s.points[i].id + "' clashes with an event id");
    }
    try {
        for (const auto &surf : declared_surfaces(s)) {
            for (const auto &e : s.events) {
                if (side_of_surface(e.at, surf) == SurfaceSide::On) {
                    std::ostringstream os;
                    os << "event '" << e.id << "' lies on query surface " << surf;
                    v.push_back(os.str());
                }
            }
        }
    } catch (const ValidationError &err) {
        v.push_back(std::string("query: ") + err.what());
    }
    return v;
}

inline void require_valid(const Scenario &s) {
    const auto v = validate(s);
    if (!v.empty()) {
        std::string msg = "invalid scenario";
        if (!s.name.empty()) msg += " '" + s.name + "'";
        for (const auto &line : v) msg += "\n  " + line;
        throw ValidationError(msg);
    }
}

/// Checks outcome names against the scenario's measurement events.
inline void check_assignment(const Scenario &s, const OutcomeAssignment &oa) {
    for (const auto &[id, outcome] : oa) {
        auto i = s.event_index(id);
        if (!i) throw ValidationError("outcome given for unknown event '" + id + "'");
        if (!s.events[*i].is_measurement()) throw ValidationError("event '" + id + "' is not a measurement");
        if (!s.events[*i].measurement().find(outcome)) {
            throw ValidationError("measurement '" + id + "' has no outcome '" + outcome + "'");
        }
    }
}

/// Lexicographically-first linearization of `order` restricted to `subset`.
inline std::vector<std::size_t> stable_topological_order(const PartialOrder &order,
                                                         const std::vector<std::size_t> &subset) {
    std::vector<std::size_t> out;
    std::vector<bool> placed(order.size(), false);
    std::vector<bool> member(order.size(), false);
    for (auto i : subset) member[i] = true;
    while (out.size() < subset.size()) {
        bool progressed = false;
        for (auto i : subset) {
            if (placed[i]) continue;
            bool ready = true;
            for (auto j : subset) {
                if (!placed[j] && order.precedes(j, i)) {
                    ready = false;
                    break;
                }
            }
            if (ready) {
                placed[i] = true;
                out.push_back(i);
                progressed = true;
                break;
            }
        }
        if (!progressed) throw ValidationError("order contains a cycle");
    }
    return out;
}

/// Indices of the events Before `surf`, in a deterministic linearization of
/// the causal order. Refuses surfaces passing through an event.
inline std::vector<std::size_t> events_before(const Scenario &s, const CausalSurface &surf) {
    std::vector<std::size_t> subset;
    for (std::size_t i = 0; i < s.events.size(); ++i) {
        const auto side = side_of_surface(s.events[i].at, surf);
        if (side == SurfaceSide::On) {
            std::ostringstream os;
            os << "event '" << s.events[i].id << "' lies on surface " << surf;
            throw ValidationError(os.str());
        }
        if (side == SurfaceSide::Before) subset.push_back(i);
    }
    std::sort(subset.begin(), subset.end());
    return stable_topological_order(s.causal_order(), subset);
}


/// Incremental construction of a Scenario. Subsystems are ordered as added;
/// the initial state is the tensor product of the supplied factors,
/// rearranged into that order.
class ScenarioBuilder {
  public:
    explicit ScenarioBuilder(std::string name = {}) { scenario_.name = std::move(name); }

    ScenarioBuilder &subsystem(const std::string &name, std::size_t dim, std::vector<Event> worldline) {
        labels_.push_back({name, dim});
        scenario_.worldlines.push_back({name, std::move(worldline)});
        return *this;
    }

    /// Adds a subsystem whose world-line is supplied later.
    ScenarioBuilder &subsystem(const std::string &name, std::size_t dim) { return subsystem(name, dim, {}); }

    bool has_subsystem(const std::string &name) const {
        return std::any_of(labels_.begin(), labels_.end(), [&](const auto &l) { return l.name == name; });
    }

    /// Replaces the world-line of an existing subsystem.
    ScenarioBuilder &worldline(const std::string &name, std::vector<Event> vertices) {
        for (auto &w : scenario_.worldlines) {
            if (w.subsystem == name) {
                w.vertices = std::move(vertices);
                return *this;
            }
        }
        throw ValidationError("world-line for unknown subsystem '" + name + "'");
    }

    ScenarioBuilder &name(std::string n) {
        scenario_.name = std::move(n);
        return *this;
    }

    ScenarioBuilder &initial_factor(std::vector<std::string> targets, Vector amplitudes) {
        factors_.push_back({std::move(targets), std::move(amplitudes)});
        return *this;
    }

    ScenarioBuilder &initial_surface(FlatSurface surf) {
        scenario_.initial_surface = surf;
        return *this;
    }

    ScenarioBuilder &event(EventSpec e) {
        scenario_.events.push_back(std::move(e));
        return *this;
    }

    ScenarioBuilder &point(std::string id, Event at) {
        scenario_.points.push_back({std::move(id), at});
        return *this;
    }

    ScenarioBuilder &predicate(OutcomePredicate p) {
        scenario_.predicates.push_back(std::move(p));
        return *this;
    }

    ScenarioBuilder &query(QuerySpec q) {
        scenario_.queries.push_back(std::move(q));
        return *this;
    }

    const std::vector<SubsystemLabel> &labels() const { return labels_; }

    /// Assembles the scenario without validating it.
    Scenario build_unchecked(std::size_t cap = kDefaultDimCap) const {
        Scenario s = scenario_;
        s.space = SpaceDescriptor(labels_, cap);
        std::vector<StateVector> parts;
        std::vector<std::string> covered;
        for (const auto &[targets, amps] : factors_) {
            std::vector<SubsystemLabel> fl;
            for (const auto &t : targets) {
                fl.push_back(s.space.labels()[s.space.require_position(t)]);
                if (std::find(covered.begin(), covered.end(), t) != covered.end()) {
                    throw ValidationError("subsystem '" + t + "' appears in two initial factors");
                }
                covered.push_back(t);
            }
            parts.emplace_back(SpaceDescriptor(std::move(fl), cap), amps);
        }
        if (covered.size() != labels_.size()) {
            for (const auto &l : labels_) {
                if (std::find(covered.begin(), covered.end(), l.name) == covered.end()) {
                    throw ValidationError("initial state does not cover subsystem '" + l.name + "'");
                }
            }
        }
        s.initial = reorder(kron_state(parts), s.space);
        return s;
    }

    /// Assembles and validates.
    Scenario build(std::size_t cap = kDefaultDimCap) const {
        Scenario s = build_unchecked(cap);
        require_valid(s);
        return s;
    }

  private:
    Scenario scenario_;
    std::vector<SubsystemLabel> labels_;
    std::vector<std::pair<std::vector<std::string>, Vector>> factors_;
};

}  // namespace relcollapse
