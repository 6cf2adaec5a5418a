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

// Reading and writing .scn scenario files.
//
// One record per line: a section tag followed by whitespace-separated
// key=value tokens. '#' starts a comment. Recognised sections:
//
//   [scenario]        name=<text>
//   [initial_surface] t0=<real> rapidity=<real>
//   [subsystem]       name=<id> dim=<int>
//   [worldline]       subsystem=<id> points=(t,x);(t,x);...
//   [initial]         targets=<id>,<id>,... expr=<builtin state | amplitude list>
//   [event]           id=<id> at=(t,x) kind=interaction targets=... unitary=<op>
//   [event]           id=<id> at=(t,x) kind=measurement targets=... outcomes=<name>:<op>,...
//                                                             | outcomes=<builtin measurement>
//   [gadget]          name=builtin.gadget_round<k> left=<id> right=<id> at_left=(t,x) at_right=(t,x)
//                     [source=(t,x)]
//   [point]           id=<id> at=(t,x)
//   [predicate]       name=<id> clauses=<ev>^<ev>=<0|1>;...
//   [query]           kind=<kind> <key>=<value> ...
//
// <op> is a builtin operator name or a bracketed row-major complex list.
// Complex numbers are written re+imi (e.g. 0.5-0.25i); a bare real is
// accepted. Amplitude lists may omit the brackets.

#include <charconv>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include "relcollapse/error.hpp"
#include "relcollapse/gadgets.hpp"
#include "relcollapse/scenario.hpp"

namespace relcollapse {

namespace io_detail {

/// Shortest text that parses back to exactly `v`.
inline std::string format_real(double v) {
    char buf[64];
    auto res = std::to_chars(buf, buf + sizeof buf, v);
    return std::string(buf, res.ptr);
}

inline std::string format_complex(cplx c) {
    std::string im = format_real(c.imag());
    if (im.front() != '-') im = "+" + im;
    return format_real(c.real()) + im + "i";
}

inline cplx parse_complex(const std::string &text) {
    const std::string s = detail::trim(text);
    if (s.empty()) throw ValidationError("empty complex number");
    if (s.back() != 'i') return {detail::parse_real(s), 0.0};
    std::size_t split = std::string::npos;
    for (std::size_t k = s.size() - 1; k-- > 1;) {
        if ((s[k] == '+' || s[k] == '-') && s[k - 1] != 'e' && s[k - 1] != 'E') {
            split = k;
            break;
        }
    }
    if (split == std::string::npos) {
        // pure imaginary such as "0.5i"
        return {0.0, detail::parse_real(s.substr(0, s.size() - 1))};
    }
    return {detail::parse_real(s.substr(0, split)), detail::parse_real(s.substr(split, s.size() - 1 - split))};
}

inline std::vector<cplx> parse_complex_list(const std::string &text) {
    std::string s = detail::trim(text);
    if (!s.empty() && s.front() == '[') {
        if (s.back() != ']') throw ValidationError("unterminated '[' in list");
        s = s.substr(1, s.size() - 2);
    }
    std::vector<cplx> out;
    for (const auto &item : detail::split_top(s, ',')) out.push_back(parse_complex(item));
    return out;
}

inline std::string format_complex_list(const Vector &v) {
    std::string out = "[";
    for (Eigen::Index i = 0; i < v.size(); ++i) out += (i ? "," : "") + format_complex(v(i));
    return out + "]";
}

inline std::string format_matrix(const Matrix &m) {
    std::string out = "[";
    for (Eigen::Index r = 0; r < m.rows(); ++r) {
        for (Eigen::Index c = 0; c < m.cols(); ++c) out += (r || c ? "," : "") + format_complex(m(r, c));
    }
    return out + "]";
}

inline std::string format_event(const Event &e) { return "(" + format_real(e.t) + "," + format_real(e.x) + ")"; }

inline std::vector<std::string> split_list(const std::string &s, char sep) {
    std::vector<std::string> out;
    for (auto &item : detail::split_top(s, sep)) {
        item = detail::trim(item);
        if (!item.empty()) out.push_back(item);
    }
    return out;
}

struct Token {
    std::string key;
    std::string value;
    std::size_t column;
};

struct Record {
    std::string section;
    std::vector<Token> tokens;
    std::size_t line;
    std::size_t column;

    [[noreturn]] void fail(const std::string &msg, std::size_t col = 0) const {
        throw ParseError(msg, line, col ? col : column);
    }

    const Token *find(const std::string &key) const {
        for (const auto &t : tokens) {
            if (t.key == key) return &t;
        }
        return nullptr;
    }

    const Token &require(const std::string &key) const {
        if (const auto *t = find(key)) return *t;
        fail("[" + section + "] is missing '" + key + "='");
    }

    std::string value_or(const std::string &key, const std::string &fallback) const {
        const auto *t = find(key);
        return t ? t->value : fallback;
    }

    /// Runs `f`, turning a ValidationError into a ParseError at the token.
    template <typename F>
    auto at(const Token &tok, F &&f) const {
        try {
            return f(tok.value);
        } catch (const ValidationError &e) {
            throw ParseError(std::string("'") + tok.key + "': " + e.what(), line, tok.column);
        }
    }
};

inline std::vector<Record> tokenize(std::istream &in) {
    std::vector<Record> out;
    std::string raw;
    std::size_t lineno = 0;
    while (std::getline(in, raw)) {
        ++lineno;
        const auto hash = raw.find('#');
        const std::string line = hash == std::string::npos ? raw : raw.substr(0, hash);
        std::size_t pos = line.find_first_not_of(" \t\r");
        if (pos == std::string::npos) continue;
        if (line[pos] != '[') throw ParseError("expected a section tag such as [event]", lineno, pos + 1);
        const auto close = line.find(']', pos);
        if (close == std::string::npos) throw ParseError("unterminated section tag", lineno, pos + 1);
        Record rec{line.substr(pos + 1, close - pos - 1), {}, lineno, pos + 1};
        pos = close + 1;
        while (true) {
            pos = line.find_first_not_of(" \t\r", pos);
            if (pos == std::string::npos) break;
            auto end = line.find_first_of(" \t\r", pos);
            if (end == std::string::npos) end = line.size();
            const std::string tok = line.substr(pos, end - pos);
            const auto eq = tok.find('=');
            if (eq == std::string::npos || eq == 0) {
                throw ParseError("expected key=value, got '" + tok + "'", lineno, pos + 1);
            }
            for (const auto &t : rec.tokens) {
                if (t.key == tok.substr(0, eq)) {
                    throw ParseError("duplicate key '" + t.key + "'", lineno, pos + 1);
                }
            }
            rec.tokens.push_back({tok.substr(0, eq), tok.substr(eq + 1), pos + 1});
            pos = end;
        }
        out.push_back(std::move(rec));
    }
    return out;
}

inline LocalOperator parse_operator(const std::string &text, const std::vector<std::string> &targets,
                                    const SpaceDescriptor &dims_from, OperatorKind kind) {
    if (text.rfind("builtin.", 0) == 0) {
        auto op = gadgets::builtin_operator(text, targets);
        if (op.kind() != kind && !(kind == OperatorKind::Hermitian && op.kind() == OperatorKind::Projector)) {
            throw ValidationError("'" + text + "' is a " + to_string(op.kind()) + ", expected a " + to_string(kind));
        }
        return op;
    }
    std::vector<SubsystemLabel> labels;
    std::size_t dim = 1;
    for (const auto &t : targets) {
        labels.push_back(dims_from.labels()[dims_from.require_position(t)]);
        dim *= labels.back().dim;
    }
    const auto entries = parse_complex_list(text);
    if (entries.size() != dim * dim) {
        throw ValidationError("matrix has " + std::to_string(entries.size()) + " entries, expected " +
                              std::to_string(dim * dim));
    }
    Matrix m(static_cast<Eigen::Index>(dim), static_cast<Eigen::Index>(dim));
    for (std::size_t r = 0; r < dim; ++r) {
        for (std::size_t c = 0; c < dim; ++c) m(static_cast<Eigen::Index>(r), static_cast<Eigen::Index>(c)) = entries[r * dim + c];
    }
    return {std::move(labels), std::move(m), kind};
}

inline std::string format_operator(const LocalOperator &op) {
    if (op.name().rfind("builtin.", 0) == 0) return op.name();
    return format_matrix(op.matrix());
}

}  // namespace io_detail

/// Parses scenario text. Throws ParseError (with line and column) on syntax
/// or reference errors and ValidationError if the result violates any
/// scenario invariant.
inline Scenario parse_scenario(std::istream &in, const std::string &default_name = {}) {
    using namespace io_detail;
    const auto records = tokenize(in);
    ScenarioBuilder b(default_name);
    std::vector<std::string> seen_worldlines;
    // Operators need subsystem dimensions, which are known only once the
    // declarations above them are read; records are processed in order.
    auto dims = [&] { return SpaceDescriptor(b.labels()); };

    for (const auto &r : records) {
        if (r.section == "scenario") {
            b.name(r.require("name").value);
        } else if (r.section == "initial_surface") {
            const auto t0 = r.at(r.require("t0"), detail::parse_real);
            const double phi = r.find("rapidity") ? r.at(*r.find("rapidity"), detail::parse_real) : 0.0;
            b.initial_surface({t0, phi});
        } else if (r.section == "subsystem") {
            const auto &name_tok = r.require("name");
            if (b.has_subsystem(name_tok.value)) r.fail("duplicate subsystem '" + name_tok.value + "'", name_tok.column);
            const auto &dim_tok = r.require("dim");
            const double d = r.at(dim_tok, detail::parse_real);
            if (d < 1 || d != std::floor(d) || d > 1e6) r.fail("dim must be a positive integer", dim_tok.column);
            b.subsystem(name_tok.value, static_cast<std::size_t>(d));
        } else if (r.section == "worldline") {
            const auto &sub = r.require("subsystem");
            if (!b.has_subsystem(sub.value)) r.fail("world-line for undeclared subsystem '" + sub.value + "'", sub.column);
            if (std::find(seen_worldlines.begin(), seen_worldlines.end(), sub.value) != seen_worldlines.end()) {
                r.fail("second world-line for '" + sub.value + "'", sub.column);
            }
            seen_worldlines.push_back(sub.value);
            const auto &pts = r.require("points");
            auto vertices = r.at(pts, [](const std::string &v) {
                std::vector<Event> out;
                for (const auto &p : split_list(v, ';')) out.push_back(parse_event_literal(p));
                return out;
            });
            b.worldline(sub.value, std::move(vertices));
        } else if (r.section == "initial") {
            const auto targets = split_list(r.require("targets").value, ',');
            const auto &expr = r.require("expr");
            Vector amps = r.at(expr, [&](const std::string &v) {
                if (v.rfind("builtin.", 0) == 0) return gadgets::builtin_state(v);
                const auto list = parse_complex_list(v);
                Vector out(static_cast<Eigen::Index>(list.size()));
                for (std::size_t i = 0; i < list.size(); ++i) out(static_cast<Eigen::Index>(i)) = list[i];
                return out;
            });
            for (const auto &t : targets) {
                if (!b.has_subsystem(t)) r.fail("[initial] targets undeclared subsystem '" + t + "'");
            }
            b.initial_factor(targets, std::move(amps));
        } else if (r.section == "event") {
            const auto &id = r.require("id").value;
            const Event at = r.at(r.require("at"), parse_event_literal);
            const auto &targets_tok = r.require("targets");
            const auto targets = split_list(targets_tok.value, ',');
            const auto space = dims();
            for (const auto &t : targets) {
                if (!space.position(t)) r.fail("event targets undeclared subsystem '" + t + "'", targets_tok.column);
            }
            const auto &kind = r.require("kind");
            if (kind.value == "interaction") {
                const auto &u = r.require("unitary");
                auto op = r.at(u, [&](const std::string &v) {
                    return parse_operator(v, targets, space, OperatorKind::Unitary);
                });
                b.event({id, at, Interaction{std::move(op)}});
            } else if (kind.value == "measurement") {
                const auto &oc = r.require("outcomes");
                auto m = r.at(oc, [&](const std::string &v) {
                    if (v.rfind("builtin.", 0) == 0 && v.find(':') == std::string::npos) {
                        return gadgets::builtin_measurement(v, targets);
                    }
                    Measurement out;
                    for (const auto &item : split_list(v, ',')) {
                        const auto colon = item.find(':');
                        if (colon == std::string::npos) throw ValidationError("expected outcome:operator, got '" + item + "'");
                        out.outcomes.push_back({item.substr(0, colon),
                                                parse_operator(item.substr(colon + 1), targets, space,
                                                               OperatorKind::Projector)});
                    }
                    return out;
                });
                b.event({id, at, std::move(m)});
            } else {
                r.fail("kind must be 'interaction' or 'measurement'", kind.column);
            }
        } else if (r.section == "gadget") {
            const auto &name = r.require("name");
            const std::string prefix = "builtin.gadget_round";
            if (name.value.rfind(prefix, 0) != 0) r.fail("unknown gadget '" + name.value + "'", name.column);
            const int round = r.at(name, [&](const std::string &v) {
                return static_cast<int>(detail::parse_real(v.substr(prefix.size())));
            });
            gadgets::GadgetGeometry g;
            g.left_system = r.require("left").value;
            g.right_system = r.require("right").value;
            g.left = r.at(r.require("at_left"), parse_event_literal);
            g.right = r.at(r.require("at_right"), parse_event_literal);
            g.source = r.find("source") ? r.at(*r.find("source"), parse_event_literal) : Event{};
            for (const auto &sys : {g.left_system, g.right_system}) {
                if (!b.has_subsystem(sys)) r.fail("gadget refers to undeclared subsystem '" + sys + "'");
            }
            gadgets::gadget_round(b, round, g);
            for (const auto &p : {"zL", "zR", "xL", "xR"}) seen_worldlines.push_back(p + std::to_string(round));
        } else if (r.section == "point") {
            b.point(r.require("id").value, r.at(r.require("at"), parse_event_literal));
        } else if (r.section == "predicate") {
            OutcomePredicate p;
            p.name = r.require("name").value;
            const auto &cl = r.require("clauses");
            p.clauses = r.at(cl, [](const std::string &v) {
                std::vector<ParityClause> out;
                for (const auto &c : split_list(v, ';')) {
                    const auto eq = c.find('=');
                    if (eq == std::string::npos) throw ValidationError("expected ev^ev=parity, got '" + c + "'");
                    ParityClause clause;
                    clause.events = split_list(c.substr(0, eq), '^');
                    const auto parity = detail::trim(c.substr(eq + 1));
                    if (parity != "0" && parity != "1") throw ValidationError("parity must be 0 or 1");
                    clause.parity = parity == "1" ? 1 : 0;
                    out.push_back(std::move(clause));
                }
                return out;
            });
            b.predicate(std::move(p));
        } else if (r.section == "query") {
            QuerySpec q;
            for (const auto &t : r.tokens) q.params.emplace_back(t.key, t.value);
            if (!q.get("kind")) r.fail("[query] is missing 'kind='");
            b.query(std::move(q));
        } else {
            r.fail("unknown section [" + r.section + "]");
        }
    }
    Scenario s;
    try {
        s = b.build_unchecked();
    } catch (const ValidationError &e) {
        throw ValidationError(std::string("scenario: ") + e.what());
    }
    require_valid(s);
    return s;
}

inline Scenario parse_scenario(const std::string &text, const std::string &default_name = {}) {
    std::istringstream in(text);
    return parse_scenario(in, default_name);
}

inline Scenario load(const std::string &path) {
    std::ifstream in(path);
    if (!in) throw ValidationError("cannot open scenario file '" + path + "'");
    auto stem = path.substr(path.find_last_of('/') == std::string::npos ? 0 : path.find_last_of('/') + 1);
    if (auto dot = stem.rfind('.'); dot != std::string::npos) stem = stem.substr(0, dot);
    return parse_scenario(in, stem);
}

/// Fully expanded text form; parse_scenario(emit(s)) reproduces s exactly.
inline std::string emit(const Scenario &s) {
    using namespace io_detail;
    std::ostringstream os;
    os << "# relcollapse scenario\n";
    if (!s.name.empty()) os << "[scenario] name=" << s.name << "\n";
    os << "[initial_surface] t0=" << format_real(s.initial_surface.t0)
       << " rapidity=" << format_real(s.initial_surface.rapidity) << "\n\n";
    for (const auto &l : s.space.labels()) os << "[subsystem] name=" << l.name << " dim=" << l.dim << "\n";
    os << "\n";
    for (const auto &w : s.worldlines) {
        os << "[worldline] subsystem=" << w.subsystem << " points=";
        for (std::size_t k = 0; k < w.vertices.size(); ++k) os << (k ? ";" : "") << format_event(w.vertices[k]);
        os << "\n";
    }
    os << "\n[initial] targets=";
    for (std::size_t i = 0; i < s.space.size(); ++i) os << (i ? "," : "") << s.space.labels()[i].name;
    os << " expr=" << format_complex_list(s.initial.amplitudes()) << "\n\n";
    for (const auto &e : s.events) {
        os << "[event] id=" << e.id << " at=" << format_event(e.at) << " kind="
           << (e.is_measurement() ? "measurement" : "interaction") << " targets=";
        const auto targets = e.targets();
        for (std::size_t i = 0; i < targets.size(); ++i) os << (i ? "," : "") << targets[i];
        if (e.is_measurement()) {
            os << " outcomes=";
            const auto &outs = e.measurement().outcomes;
            for (std::size_t i = 0; i < outs.size(); ++i) {
                os << (i ? "," : "") << outs[i].name << ":" << format_operator(outs[i].projector);
            }
        } else {
            os << " unitary=" << format_operator(e.interaction().unitary);
        }
        os << "\n";
    }
    if (!s.points.empty()) os << "\n";
    for (const auto &p : s.points) os << "[point] id=" << p.id << " at=" << format_event(p.at) << "\n";
    if (!s.predicates.empty()) os << "\n";
    for (const auto &p : s.predicates) {
        os << "[predicate] name=" << p.name << " clauses=";
        for (std::size_t c = 0; c < p.clauses.size(); ++c) {
            os << (c ? ";" : "");
            for (std::size_t k = 0; k < p.clauses[c].events.size(); ++k) os << (k ? "^" : "") << p.clauses[c].events[k];
            os << "=" << p.clauses[c].parity;
        }
        os << "\n";
    }
    if (!s.queries.empty()) os << "\n";
    for (const auto &q : s.queries) {
        os << "[query]";
        for (const auto &[k, v] : q.params) os << " " << k << "=" << v;
        os << "\n";
    }
    return os.str();
}

}  // namespace relcollapse
