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

// Command-line front end. Exit codes: 0 ok, 1 usage, 2 invalid input,
// 3 a numerical check failed.

#include <algorithm>
#include <cstdio>
#include <fstream>
#include <functional>
#include <ostream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "relcollapse/attribution.hpp"
#include "relcollapse/collapse.hpp"
#include "relcollapse/gadgets.hpp"
#include "relcollapse/oracle.hpp"
#include "relcollapse/reproduction.hpp"
#include "relcollapse/scenario_io.hpp"

namespace relcollapse::cli {

enum ExitCode : int { kOk = 0, kUsage = 1, kInvalid = 2, kCheckFailed = 3 };

inline constexpr double kCompareTolerance = 1e-9;
inline constexpr std::size_t kDefaultCompareCap = 512;

inline std::string fmt6(double v) {
    char buf[48];
    std::snprintf(buf, sizeof buf, "%.6g", v == 0.0 ? 0.0 : v);
    return buf;
}

inline std::string fmt6(cplx c) {
    char buf[96];
    const double re = std::abs(c.real()) < 5e-16 ? 0.0 : c.real();
    const double im = std::abs(c.imag()) < 5e-16 ? 0.0 : c.imag();
    std::snprintf(buf, sizeof buf, "%.6g%+.6gi", re, im);
    return buf;
}

inline std::string surface_text(const CausalSurface &s) {
    std::ostringstream os;
    os << s;
    return os.str();
}

/// `builtin:fig1` style names or a .scn path.
inline Scenario load_scenario(const std::string &source) {
    if (source.rfind("builtin:", 0) == 0) return gadgets::builtin_scenario(source.substr(8));
    return load(source);
}

inline Prescription parse_prescription(const std::string &text) {
    if (text == "hk") return HKPrescription{};
    if (text == "forward") return ForwardConePrescription{};
    if (text == "flat") return FlatFramePrescription{0.0};
    if (text.rfind("flat:", 0) == 0) return FlatFramePrescription{detail::parse_real(text.substr(5))};
    throw ValidationError("unknown prescription '" + text + "' (expected hk, forward, flat or flat:<rapidity>)");
}

inline std::string basis_label(const SpaceDescriptor &space, std::size_t index) {
    std::string out;
    for (std::size_t k = 0; k < space.size(); ++k) {
        if (k) out += ' ';
        out += space.labels()[k].name + "=" + std::to_string((index / space.stride(k)) % space.labels()[k].dim);
    }
    return out;
}

inline void print_amplitudes(std::ostream &out, const StateVector &psi) {
    const auto &a = psi.amplitudes();
    for (Eigen::Index i = 0; i < a.size(); ++i) {
        if (std::abs(a(i)) > 1e-12) {
            out << "  " << basis_label(psi.space(), static_cast<std::size_t>(i)) << "  " << fmt6(a(i)) << '\n';
        }
    }
}

inline std::string join(const std::vector<std::string> &v, const std::string &sep = " ") {
    std::string out;
    for (std::size_t i = 0; i < v.size(); ++i) out += (i ? sep : "") + v[i];
    return out;
}

/// Mixed-radix branch index back to an outcome assignment.
inline std::vector<std::string> outcomes_of_index(const Scenario &s, std::size_t index) {
    const auto ms = s.measurement_indices();
    std::vector<std::string> out(ms.size());
    for (std::size_t k = ms.size(); k-- > 0;) {
        const auto &outs = s.events[ms[k]].measurement().outcomes;
        out[k] = outs[index % outs.size()].name;
        index /= outs.size();
    }
    return out;
}

inline void write_distribution_csv(std::ostream &os, const Scenario &s, const std::vector<double> &probs) {
    for (auto i : s.measurement_indices()) os << s.events[i].id << ',';
    os << "probability\n";
    for (std::size_t b = 0; b < probs.size(); ++b) {
        for (const auto &o : outcomes_of_index(s, b)) os << o << ',';
        os << format_probability(probs[b]) << '\n';
    }
}

inline void print_verdict(std::ostream &out, const std::string &label, const Verdict &v, bool kv) {
    if (kv) {
        out << label << ".definite=" << (v.definite ? "true" : "false") << '\n'
            << label << ".eigenvalue=" << fmt6(v.eigenvalue) << '\n'
            << label << ".residual=" << fmt6(v.residual) << '\n'
            << label << ".surface=" << surface_text(v.surface) << '\n'
            << label << ".weight=" << fmt6(v.weight) << '\n';
        for (const auto &w : v.warnings) out << label << ".warning=" << w << '\n';
        return;
    }
    out << label << ": " << (v.definite ? "definite (" + fmt6(v.eigenvalue) + ")" : "indefinite")
        << "  residual " << fmt6(v.residual) << "  on " << surface_text(v.surface) << "  weight " << fmt6(v.weight)
        << '\n';
    for (const auto &w : v.warnings) out << "  warning: " << w << '\n';
}

inline void print_curious(std::ostream &out, const CuriousReport &r, bool kv) {
    for (const auto &row : r.rows) {
        const std::string rule = to_string(row.rule);
        if (!kv) out << "rule " << rule << '\n';
        print_verdict(out, kv ? rule + ".I^2" : "  I^2", row.isospin_sq, kv);
        print_verdict(out, kv ? rule + ".type(A)" : "  type(A) pion projector", row.type_a, kv);
    }
    if (kv) {
        out << "no_k.A=" << fmt6(r.no_k_norm_a) << "\nno_k.B=" << fmt6(r.no_k_norm_b) << '\n';
    } else {
        out << "||Pi_{I^2=6} Pi_K^A|| = " << fmt6(r.no_k_norm_a) << '\n'
            << "||Pi_{I^2=6} Pi_K^B|| = " << fmt6(r.no_k_norm_b) << '\n';
    }
}

struct Demo {
    std::vector<std::string> lines;
    bool pass = true;
};

inline Demo demo_figs(std::size_t cap) {
    Demo d;
    auto mark = [&](bool ok) {
        d.pass = d.pass && ok;
        return ok ? "PASS" : "FAIL";
    };
    const auto alpha = reproduce::feature_alpha();
    d.lines.push_back(std::string("feature alpha: ") + mark(alpha.pass()) + " (max error " + fmt6(alpha.max_error) + ")");
    const auto beta = reproduce::feature_beta();
    d.lines.push_back(std::string("feature beta: ") + mark(beta.pass()) + " (" + std::to_string(beta.samples) +
                      " inputs, max error " + fmt6(beta.max_error) + ")");
    const auto eq = reproduce::pipelines_agree();
    d.lines.push_back(std::string("eq3=eq5: ") + mark(eq.pass()) + " (max difference " + fmt6(eq.max_difference) + ")");
    for (const auto &s : gadgets::builtin_scenarios()) {
        const auto orders = compare_orders(s, cap);
        const auto prescs = compare_prescriptions(s);
        const auto cert = commutation_certificate(s);
        const double worst = std::max(orders.max_discrepancy, prescs.max_discrepancy);
        d.lines.push_back("prescription equivalence " + s.name + ": " + mark(worst < 1e-12 && cert.max_commutator < 1e-12) +
                          " (" + std::to_string(orders.checked) + " of " + std::to_string(orders.total_linearizations) +
                          " orders, max discrepancy " + fmt6(worst) + ", max commutator " + fmt6(cert.max_commutator) + ")");
    }
    const auto cur = reproduce::curious_check();
    const bool cur_ok = cur.pass();
    d.pass = d.pass && cur_ok;
    d.lines.push_back(cur_ok ? "curious attribution: I^2 definite (6), type(A) indefinite"
                             : "curious attribution: FAIL");
    return d;
}

/// Runs one command line; `args` excludes the program name.
inline int run(const std::vector<std::string> &args, std::ostream &out, std::ostream &err) {
    CLI::App app{"Relativistic state-vector collapse simulator", "relcollapse"};
    app.require_subcommand(1);

    std::string file;
    std::string out_path;
    std::string surface_arg;
    std::string outcomes_arg;
    std::string worldline_arg;
    std::string prescription_arg = "hk";
    std::string rule_arg = "ghirardi";
    std::string observable_arg;
    std::string targets_arg;
    std::string point_arg;
    std::string point2_arg;
    std::string format_arg = "text";
    std::string demo_what;
    std::string emit_what;
    std::size_t cap = kDefaultCompareCap;
    bool amplitudes = false;

    auto *validate_cmd = app.add_subcommand("validate", "Check a scenario file");
    validate_cmd->add_option("file", file, "scenario file or builtin:<name>")->required();

    auto *simulate_cmd = app.add_subcommand("simulate", "Joint outcome distribution as CSV");
    simulate_cmd->add_option("file", file)->required();
    simulate_cmd->add_option("--out", out_path, "write CSV here instead of stdout");

    auto *compare_cmd = app.add_subcommand("compare", "Compare distributions across orders and prescriptions");
    compare_cmd->add_option("file", file)->required();
    compare_cmd->add_option("--cap", cap, "maximum number of causal orders to check")->check(CLI::PositiveNumber);

    auto *state_cmd = app.add_subcommand("state", "State carried by a surface");
    state_cmd->add_option("file", file)->required();
    state_cmd->add_option("--surface", surface_arg, "flat(t0[,rapidity]) | sigma(P[,P2...]) | eta(P)")->required();
    state_cmd->add_option("--outcomes", outcomes_arg, "id=outcome,...");

    auto *trace_cmd = app.add_subcommand("trace", "Point states along a world-line");
    trace_cmd->add_option("file", file)->required();
    trace_cmd->add_option("--worldline", worldline_arg, "subsystem whose world-line is traced")->required();
    trace_cmd->add_option("--prescription", prescription_arg, "hk | forward | flat | flat:<rapidity>");
    trace_cmd->add_option("--outcomes", outcomes_arg);
    trace_cmd->add_flag("--amplitudes", amplitudes, "print the state of every segment");

    auto *attribute_cmd = app.add_subcommand("attribute", "Definite-value verdict for an observable");
    attribute_cmd->add_option("file", file)->required();
    attribute_cmd->add_option("--rule", rule_arg, "ghirardi | uniform");
    attribute_cmd->add_option("--observable", observable_arg, "builtin operator or matrix literal")->required();
    attribute_cmd->add_option("--targets", targets_arg, "one or two comma-separated subsystems")->required();
    attribute_cmd->add_option("--at", point_arg, "point id or (t,x)")->required();
    attribute_cmd->add_option("--at2", point2_arg, "second point, for two-subsystem observables");
    attribute_cmd->add_option("--outcomes", outcomes_arg);
    attribute_cmd->add_option("--format", format_arg, "text | kv")->check(CLI::IsMember({"text", "kv"}));

    auto *curious_cmd = app.add_subcommand("curious", "Joint isospin against particle type for the meson pair");
    std::string curious_file = "builtin:fig3";
    curious_cmd->add_option("file", curious_file, "meson scenario (default builtin:fig3)");
    curious_cmd->add_option("--at", point_arg, "point on A (default P)");
    curious_cmd->add_option("--at2", point2_arg, "point on B (default Pp)");
    curious_cmd->add_option("--outcomes", outcomes_arg, "default M=pi");
    curious_cmd->add_option("--format", format_arg, "text | kv")->check(CLI::IsMember({"text", "kv"}));

    auto *demo_cmd = app.add_subcommand("demo", "Reproduce the built-in figure checks");
    demo_cmd->add_option("what", demo_what, "figs")->required()->check(CLI::IsMember({"figs"}));
    demo_cmd->add_option("--cap", cap, "maximum number of causal orders per scenario")->check(CLI::PositiveNumber);

    auto *emit_cmd = app.add_subcommand("emit", "Write a built-in scenario in .scn form");
    emit_cmd->add_option("name", emit_what, "fig1 | fig2 | fig3")->required();
    emit_cmd->add_option("--out", out_path);

    std::vector<std::string> reversed(args.rbegin(), args.rend());
    try {
        app.parse(reversed);
    } catch (const CLI::ParseError &e) {
        const int code = app.exit(e, out, err);
        return code == 0 ? kOk : kUsage;
    }

    try {
        if (*validate_cmd) {
            Scenario s = load_scenario(file);
            out << "ok: " << s.name << " (" << s.space.size() << " subsystems, " << s.events.size() << " events, "
                << s.measurement_indices().size() << " measurements)\n";
            return kOk;
        }
        if (*simulate_cmd) {
            const Scenario s = load_scenario(file);
            const auto probs = branch_probabilities(s, reference_order(s));
            if (out_path.empty()) {
                write_distribution_csv(out, s, probs);
            } else {
                std::ofstream f(out_path);
                if (!f) throw ValidationError("cannot write '" + out_path + "'");
                write_distribution_csv(f, s, probs);
            }
            double total = 0.0;
            for (double p : probs) total += p;
            if (std::abs(total - 1.0) > kCompareTolerance) {
                err << "distribution sums to " << format_probability(total) << '\n';
                return kCheckFailed;
            }
            return kOk;
        }
        if (*compare_cmd) {
            const Scenario s = load_scenario(file);
            const auto orders = compare_orders(s, cap);
            out << "scenario " << s.name << '\n';
            out << "causal orders: " << orders.total_linearizations << " total, " << orders.checked << " checked"
                << (orders.exhaustive ? "" : " (seeded sample)") << ", max discrepancy "
                << fmt6(orders.max_discrepancy) << '\n';
            const auto cert = commutation_certificate(s);
            out << "unordered event pairs: " << cert.incomparable_pairs << " (" << cert.overlapping_pairs
                << " sharing a subsystem), max commutator " << fmt6(cert.max_commutator) << '\n';
            const auto prescs = compare_prescriptions(s);
            for (const auto &row : prescs.rows) {
                out << row.prescription << " along " << row.worldline << ": " << fmt6(row.discrepancy) << "  ["
                    << join(row.order) << "]\n";
            }
            const double worst = std::max(orders.max_discrepancy, prescs.max_discrepancy);
            const bool ok = worst < kCompareTolerance && cert.max_commutator < kCompareTolerance;
            out << "max discrepancy " << fmt6(worst) << ": " << (ok ? "PASS" : "FAIL") << '\n';
            return ok ? kOk : kCheckFailed;
        }
        if (*state_cmd) {
            const Scenario s = load_scenario(file);
            const auto st = surface_state(s, parse_surface(surface_arg, s), parse_outcomes(outcomes_arg));
            out << "surface " << surface_text(st.surface) << '\n';
            out << "events before: " << (st.applied.empty() ? "(none)" : join(st.applied)) << '\n';
            out << "weight " << fmt6(st.weight) << (st.impossible ? " (impossible)" : "") << '\n';
            if (!st.impossible) {
                out << "amplitudes\n";
                print_amplitudes(out, st.state);
            }
            return kOk;
        }
        if (*trace_cmd) {
            const Scenario s = load_scenario(file);
            const auto presc = parse_prescription(prescription_arg);
            const auto segs = worldline_trace(s, worldline_arg, presc, parse_outcomes(outcomes_arg));
            out << "world-line " << worldline_arg << " under " << to_string(presc) << '\n';
            for (const auto &seg : segs) {
                out << "[" << fmt6(seg.t_begin) << ", " << fmt6(seg.t_end) << ")";
                if (!seg.crossings.empty()) out << " crossing " << join(seg.crossings, ",");
                out << "  collapsed: ";
                std::vector<std::string> ms;
                for (const auto &id : seg.state.applied) {
                    if (s.event(id).is_measurement()) ms.push_back(id);
                }
                out << (ms.empty() ? "(none)" : join(ms, ",")) << "  weight " << fmt6(seg.state.weight) << '\n';
                if (amplitudes && !seg.state.impossible) print_amplitudes(out, seg.state.state);
            }
            return kOk;
        }
        if (*attribute_cmd) {
            const Scenario s = load_scenario(file);
            const auto targets = io_detail::split_list(targets_arg, ',');
            const auto o = io_detail::parse_operator(observable_arg, targets, s.space, OperatorKind::Hermitian);
            const auto rule = parse_rule(rule_arg);
            const auto oa = parse_outcomes(outcomes_arg);
            const Event p = parse_point(point_arg, s);
            Verdict v;
            if (targets.size() == 1) {
                v = attribute_local(s, p, o, oa, rule);
            } else {
                if (point2_arg.empty()) throw ValidationError("--at2 is required for a two-subsystem observable");
                v = attribute_joint(s, p, parse_point(point2_arg, s), o, oa, rule);
            }
            print_verdict(out, observable_arg, v, format_arg == "kv");
            return kOk;
        }
        if (*curious_cmd) {
            const Scenario s = load_scenario(curious_file);
            const Event p = parse_point(point_arg.empty() ? "P" : point_arg, s);
            const Event pp = parse_point(point2_arg.empty() ? "Pp" : point2_arg, s);
            const auto oa = parse_outcomes(outcomes_arg.empty() ? "M=pi" : outcomes_arg);
            print_curious(out, curious_report(s, p, pp, oa), format_arg == "kv");
            return kOk;
        }
        if (*demo_cmd) {
            const auto d = demo_figs(cap);
            for (const auto &l : d.lines) out << l << '\n';
            return d.pass ? kOk : kCheckFailed;
        }
        if (*emit_cmd) {
            const std::string text = emit(gadgets::builtin_scenario(emit_what));
            if (out_path.empty()) {
                out << text;
            } else {
                std::ofstream f(out_path);
                if (!f) throw ValidationError("cannot write '" + out_path + "'");
                f << text;
            }
            return kOk;
        }
    } catch (const ParseError &e) {
        err << file << ": " << e.what() << '\n';
        return kInvalid;
    } catch (const ValidationError &e) {
        err << "error: " << e.what() << '\n';
        return kInvalid;
    } catch (const NumericalError &e) {
        err << "numerical error: " << e.what() << '\n';
        return kCheckFailed;
    }
    return kUsage;
}

}  // namespace relcollapse::cli
