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

#include <Eigen/Eigenvalues>

#include <array>
#include <cmath>
#include <map>
#include <string>
#include <utility>
#include <variant>
#include <vector>

#include "relcollapse/hilbert.hpp"
#include "relcollapse/scenario.hpp"
#include "relcollapse/spacetime.hpp"

namespace relcollapse::gadgets {

// ---------------------------------------------------------------------------
// Isospin multiplets
// ---------------------------------------------------------------------------

/// One basis state of a subsystem in the (I, I_z) labelling. States with the
/// same `multiplet` form one irreducible block.
struct IsoState {
    const char *name;
    double isospin;
    double iz;
    double hypercharge;
    int multiplet;
};

/// Qubit basis: index 0 = up (I_z = +1/2), index 1 = down.
inline const std::vector<IsoState> &qubit_basis() {
    static const std::vector<IsoState> basis = {
        {"up", 0.5, 0.5, 0.0, 0},
        {"down", 0.5, -0.5, 0.0, 0},
    };
    return basis;
}

/// Particle A: K+, K0, pi+, pi0, pi-.
inline const std::vector<IsoState> &meson_basis_a() {
    static const std::vector<IsoState> basis = {
        {"K+", 0.5, 0.5, 1.0, 0}, {"K0", 0.5, -0.5, 1.0, 0}, {"pi+", 1.0, 1.0, 0.0, 1},
        {"pi0", 1.0, 0.0, 0.0, 1}, {"pi-", 1.0, -1.0, 0.0, 1},
    };
    return basis;
}

/// Particle B: K-, anti-K0, pi+, pi0, pi-.
inline const std::vector<IsoState> &meson_basis_b() {
    static const std::vector<IsoState> basis = {
        {"K-", 0.5, -0.5, -1.0, 0}, {"K0bar", 0.5, 0.5, -1.0, 0}, {"pi+", 1.0, 1.0, 0.0, 1},
        {"pi0", 1.0, 0.0, 0.0, 1},   {"pi-", 1.0, -1.0, 0.0, 1},
    };
    return basis;
}

struct IsospinGenerators {
    Matrix iz;
    Matrix raise;
    Matrix lower;
    Matrix casimir;  ///< I^2 of the single subsystem
};

/// Condon-Shortley generators: <m+1| I+ |m> = sqrt(I(I+1) - m(m+1)).
inline IsospinGenerators generators(const std::vector<IsoState> &basis) {
    const auto n = static_cast<Eigen::Index>(basis.size());
    IsospinGenerators g{Matrix::Zero(n, n), Matrix::Zero(n, n), Matrix::Zero(n, n), Matrix::Zero(n, n)};
    for (Eigen::Index i = 0; i < n; ++i) {
        const auto &si = basis[static_cast<std::size_t>(i)];
        g.iz(i, i) = si.iz;
        for (Eigen::Index k = 0; k < n; ++k) {
            const auto &sk = basis[static_cast<std::size_t>(k)];
            if (si.multiplet == sk.multiplet && si.iz == sk.iz + 1.0) {
                g.raise(i, k) = std::sqrt(sk.isospin * (sk.isospin + 1.0) - sk.iz * (sk.iz + 1.0));
            }
        }
    }
    g.lower = g.raise.adjoint();
    g.casimir = g.iz * g.iz + 0.5 * (g.raise * g.lower + g.lower * g.raise);
    return g;
}

/// (I_A + I_B)^2 on the pair space, A most significant.
inline Matrix total_isospin_sq(const std::vector<IsoState> &a, const std::vector<IsoState> &b) {
    const auto ga = generators(a);
    const auto gb = generators(b);
    const Matrix ia = Matrix::Identity(ga.iz.rows(), ga.iz.cols());
    const Matrix ib = Matrix::Identity(gb.iz.rows(), gb.iz.cols());
    return kron(ga.casimir, ib) + kron(ia, gb.casimir) + 2.0 * kron(ga.iz, gb.iz) + kron(ga.raise, gb.lower) +
           kron(ga.lower, gb.raise);
}

inline Matrix total_iz(const std::vector<IsoState> &a, const std::vector<IsoState> &b) {
    const auto ga = generators(a);
    const auto gb = generators(b);
    return kron(ga.iz, Matrix::Identity(gb.iz.rows(), gb.iz.cols())) +
           kron(Matrix::Identity(ga.iz.rows(), ga.iz.cols()), gb.iz);
}

// ---------------------------------------------------------------------------
// Two isospin-1/2 particles
// ---------------------------------------------------------------------------

namespace detail {

inline Vector vec(std::initializer_list<cplx> values) {
    Vector v(static_cast<Eigen::Index>(values.size()));
    Eigen::Index i = 0;
    for (auto c : values) v(i++) = c;
    return v;
}

inline Matrix diag(std::initializer_list<double> values) {
    Matrix m = Matrix::Zero(static_cast<Eigen::Index>(values.size()), static_cast<Eigen::Index>(values.size()));
    Eigen::Index i = 0;
    for (auto d : values) {
        m(i, i) = d;
        ++i;
    }
    return m;
}

}  // namespace detail

/// Coupled basis of two isospin-1/2 particles (amplitudes over up/down x up/down).
struct CoupledStates {
    Vector singlet;     ///< |0,0>
    Vector triplet_m1;  ///< |1,-1>
    Vector triplet_0;   ///< |1,0>
    Vector triplet_p1;  ///< |1,+1>
};

inline CoupledStates coupled_states() {
    const double r = 1.0 / std::sqrt(2.0);
    return {
        detail::vec({0.0, r, -r, 0.0}),
        detail::vec({0.0, 0.0, 0.0, 1.0}),
        detail::vec({0.0, r, r, 0.0}),
        detail::vec({1.0, 0.0, 0.0, 0.0}),
    };
}

inline Matrix isospin_sq_pair() { return total_isospin_sq(qubit_basis(), qubit_basis()); }

/// (|00> + |11>)/sqrt(2): the prepared state of each probe pair.
inline Vector bell_pair() {
    const double r = 1.0 / std::sqrt(2.0);
    return detail::vec({r, 0.0, 0.0, r});
}

// ---------------------------------------------------------------------------
// Meson pair
// ---------------------------------------------------------------------------

inline std::size_t meson_index(std::size_t a, std::size_t b) { return a * 5 + b; }

struct MesonStates {
    Vector kkbar_i0;    ///< |K Kbar, I=0>
    Vector pipi_i2;     ///< |pi pi, I=2, I_z=0>
    Vector superposed;  ///< (|K Kbar, I=0> + |pi pi, I=2, I_z=0>)/sqrt(2)
};

inline MesonStates meson_states() {
    enum { Kp = 0, K0 = 1, PiP = 2, Pi0 = 3, PiM = 4 };
    enum { Km = 0, K0bar = 1 };
    Vector kk = Vector::Zero(25);
    kk(static_cast<Eigen::Index>(meson_index(Kp, Km))) = 1.0 / std::sqrt(2.0);
    kk(static_cast<Eigen::Index>(meson_index(K0, K0bar))) = -1.0 / std::sqrt(2.0);
    Vector pp = Vector::Zero(25);
    pp(static_cast<Eigen::Index>(meson_index(PiP, PiM))) = 1.0 / std::sqrt(6.0);
    pp(static_cast<Eigen::Index>(meson_index(Pi0, Pi0))) = std::sqrt(2.0 / 3.0);
    pp(static_cast<Eigen::Index>(meson_index(PiM, PiP))) = 1.0 / std::sqrt(6.0);
    Vector init = (kk + pp) / std::sqrt(2.0);
    return {kk, pp, init};
}

inline Matrix meson_isospin_sq() { return total_isospin_sq(meson_basis_a(), meson_basis_b()); }

/// Pion-sector projector on one meson (same matrix for either side).
inline Matrix pi_projector() { return detail::diag({0, 0, 1, 1, 1}); }

/// Kaon (A side) or anti-kaon (B side) sector projector.
inline Matrix k_projector() { return detail::diag({1, 1, 0, 0, 0}); }

inline Matrix hypercharge(const std::vector<IsoState> &basis) {
    Matrix m = Matrix::Zero(static_cast<Eigen::Index>(basis.size()), static_cast<Eigen::Index>(basis.size()));
    for (std::size_t i = 0; i < basis.size(); ++i) m(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(i)) = basis[i].hypercharge;
    return m;
}

/// Projector onto the eigenspace of hermitian `op` for `eigenvalue`, from a
/// full diagonalization.
inline Matrix spectral_projector(const Matrix &op, double eigenvalue, double tol = 1e-9) {
    Eigen::SelfAdjointEigenSolver<Matrix> solver(op);
    Matrix proj = Matrix::Zero(op.rows(), op.cols());
    for (Eigen::Index k = 0; k < op.rows(); ++k) {
        if (std::abs(solver.eigenvalues()(k) - eigenvalue) < tol) {
            const Vector v = solver.eigenvectors().col(k);
            proj += v * v.adjoint();
        }
    }
    return proj;
}

// ---------------------------------------------------------------------------
// Local two-site parity gadget
// ---------------------------------------------------------------------------
//
// Each round uses two probe pairs, (zL, zR) and (xL, xR), both prepared in
// (|00> + |11>)/sqrt(2). At the left site the system qubit flips zL unless it
// is up, and (in the Hadamard basis) flips xL unless it is |+>; the right
// site applies plain controlled flips onto zR and xR. Together the probe
// pairs acquire X^(1 + ZZ parity) and X^(1 + XX parity), so a singlet (odd
// in both) leaves them untouched and every triplet component flips at least
// one pair into an orthogonal state. Measuring each probe qubit locally and
// finding both pair parities even is "Phi found".

namespace detail {

inline Matrix hadamard() {
    const double r = 1.0 / std::sqrt(2.0);
    Matrix h(2, 2);
    h << r, r, r, -r;
    return h;
}

inline Matrix pauli_x() {
    Matrix x(2, 2);
    x << 0, 1, 1, 0;
    return x;
}

inline Matrix id2() { return Matrix::Identity(2, 2); }

/// Controlled flip on three qubits [system, a, b]: flips `target` (1 = a,
/// 2 = b) when the system is |1>.
inline Matrix controlled_flip(int target) {
    Matrix u = Matrix::Zero(8, 8);
    for (int s = 0; s < 2; ++s) {
        for (int a = 0; a < 2; ++a) {
            for (int b = 0; b < 2; ++b) {
                const int in = s * 4 + a * 2 + b;
                const int na = (target == 1 && s == 1) ? 1 - a : a;
                const int nb = (target == 2 && s == 1) ? 1 - b : b;
                u(na * 2 + nb + s * 4, in) = 1.0;
            }
        }
    }
    return u;
}

inline Matrix gadget_side(bool left) {
    const Matrix h_sys = kron(kron(hadamard(), id2()), id2());
    const Matrix flip_z = kron(kron(id2(), pauli_x()), id2());
    const Matrix flip_x = kron(kron(id2(), id2()), pauli_x());
    Matrix z_part = controlled_flip(1);
    Matrix x_part = h_sys * controlled_flip(2) * h_sys;
    if (left) {
        z_part = flip_z * z_part;
        x_part = flip_x * x_part;
    }
    return x_part * z_part;
}

}  // namespace detail

/// Left-site unitary on [system, zL, xL].
inline Matrix gadget_left() { return detail::gadget_side(true); }

/// Right-site unitary on [system, zR, xR].
inline Matrix gadget_right() { return detail::gadget_side(false); }

inline Matrix projector0() { return detail::diag({1, 0}); }
inline Matrix projector1() { return detail::diag({0, 1}); }
inline Matrix iz_qubit() { return detail::diag({0.5, -0.5}); }

// ---------------------------------------------------------------------------
// Builtin registry (names usable in scenario files)
// ---------------------------------------------------------------------------

struct BuiltinState {
    std::vector<std::size_t> dims;
    Vector amplitudes;
};

struct BuiltinOperator {
    std::vector<std::size_t> dims;
    Matrix matrix;
    OperatorKind kind;
};

/// Outcome name -> builtin operator name.
struct BuiltinMeasurement {
    std::vector<std::pair<std::string, std::string>> outcomes;
};

using Builtin = std::variant<BuiltinState, BuiltinOperator, BuiltinMeasurement>;

inline const std::map<std::string, Builtin> &builtins() {
    static const std::map<std::string, Builtin> table = [] {
        std::map<std::string, Builtin> t;
        const auto cs = coupled_states();
        const auto ms = meson_states();
        t["builtin.singlet"] = BuiltinState{{2, 2}, cs.singlet};
        t["builtin.triplet_p1"] = BuiltinState{{2, 2}, cs.triplet_p1};
        t["builtin.triplet_0"] = BuiltinState{{2, 2}, cs.triplet_0};
        t["builtin.triplet_m1"] = BuiltinState{{2, 2}, cs.triplet_m1};
        t["builtin.bell_pair"] = BuiltinState{{2, 2}, bell_pair()};
        t["builtin.up"] = BuiltinState{{2}, detail::vec({1.0, 0.0})};
        t["builtin.down"] = BuiltinState{{2}, detail::vec({0.0, 1.0})};
        t["builtin.kkbar_i0"] = BuiltinState{{5, 5}, ms.kkbar_i0};
        t["builtin.pipi_i2"] = BuiltinState{{5, 5}, ms.pipi_i2};
        t["builtin.eq6_initial"] = BuiltinState{{5, 5}, ms.superposed};

        t["builtin.isospin_sq_pair"] = BuiltinOperator{{2, 2}, isospin_sq_pair(), OperatorKind::Hermitian};
        t["builtin.meson_isospin_sq"] = BuiltinOperator{{5, 5}, meson_isospin_sq(), OperatorKind::Hermitian};
        t["builtin.meson_iz"] =
            BuiltinOperator{{5, 5}, total_iz(meson_basis_a(), meson_basis_b()), OperatorKind::Hermitian};
        t["builtin.pi_projector"] = BuiltinOperator{{5}, pi_projector(), OperatorKind::Projector};
        t["builtin.kbar_projector"] = BuiltinOperator{{5}, k_projector(), OperatorKind::Projector};
        t["builtin.k_projector"] = BuiltinOperator{{5}, k_projector(), OperatorKind::Projector};
        t["builtin.hypercharge_A"] = BuiltinOperator{{5}, hypercharge(meson_basis_a()), OperatorKind::Hermitian};
        t["builtin.hypercharge_B"] = BuiltinOperator{{5}, hypercharge(meson_basis_b()), OperatorKind::Hermitian};
        t["builtin.identity_meson"] = BuiltinOperator{{5}, Matrix::Identity(5, 5), OperatorKind::Hermitian};
        t["builtin.identity_qubit"] = BuiltinOperator{{2}, Matrix::Identity(2, 2), OperatorKind::Hermitian};
        t["builtin.iz"] = BuiltinOperator{{2}, iz_qubit(), OperatorKind::Hermitian};
        t["builtin.iz_up"] = BuiltinOperator{{2}, projector0(), OperatorKind::Projector};
        t["builtin.iz_down"] = BuiltinOperator{{2}, projector1(), OperatorKind::Projector};
        t["builtin.proj0"] = BuiltinOperator{{2}, projector0(), OperatorKind::Projector};
        t["builtin.proj1"] = BuiltinOperator{{2}, projector1(), OperatorKind::Projector};
        t["builtin.gadget_left"] = BuiltinOperator{{2, 2, 2}, gadget_left(), OperatorKind::Unitary};
        t["builtin.gadget_left_z_x"] = BuiltinOperator{{2, 2, 2}, gadget_left(), OperatorKind::Unitary};
        t["builtin.gadget_right"] = BuiltinOperator{{2, 2, 2}, gadget_right(), OperatorKind::Unitary};
        t["builtin.gadget_right_z_x"] = BuiltinOperator{{2, 2, 2}, gadget_right(), OperatorKind::Unitary};

        t["builtin.iz_A_measurement"] = BuiltinMeasurement{{{"up", "builtin.iz_up"}, {"down", "builtin.iz_down"}}};
        t["builtin.z_measurement"] = BuiltinMeasurement{{{"0", "builtin.proj0"}, {"1", "builtin.proj1"}}};
        t["builtin.hypercharge_B_measurement"] =
            BuiltinMeasurement{{{"pi", "builtin.pi_projector"}, {"K", "builtin.kbar_projector"}}};
        return t;
    }();
    return table;
}

inline const Builtin &builtin(const std::string &name) {
    auto it = builtins().find(name);
    if (it == builtins().end()) throw ValidationError("unknown builtin '" + name + "'");
    return it->second;
}

inline Vector builtin_state(const std::string &name) {
    const auto *s = std::get_if<BuiltinState>(&builtin(name));
    if (!s) throw ValidationError("'" + name + "' is not a builtin state");
    return s->amplitudes;
}

/// Builtin operator bound to the named subsystems.
inline LocalOperator builtin_operator(const std::string &name, const std::vector<std::string> &targets) {
    const auto *op = std::get_if<BuiltinOperator>(&builtin(name));
    if (!op) throw ValidationError("'" + name + "' is not a builtin operator");
    if (targets.size() != op->dims.size()) {
        throw ValidationError("'" + name + "' acts on " + std::to_string(op->dims.size()) + " subsystems, got " +
                              std::to_string(targets.size()));
    }
    std::vector<SubsystemLabel> labels;
    for (std::size_t i = 0; i < targets.size(); ++i) labels.push_back({targets[i], op->dims[i]});
    return {std::move(labels), op->matrix, op->kind, name};
}

inline Measurement builtin_measurement(const std::string &name, const std::vector<std::string> &targets) {
    const auto *m = std::get_if<BuiltinMeasurement>(&builtin(name));
    if (!m) throw ValidationError("'" + name + "' is not a builtin measurement");
    Measurement out;
    for (const auto &[outcome, op] : m->outcomes) out.outcomes.push_back({outcome, builtin_operator(op, targets)});
    return out;
}

// ---------------------------------------------------------------------------
// Scenario fragments and the figure scenarios
// ---------------------------------------------------------------------------

struct GadgetGeometry {
    std::string left_system = "A";
    std::string right_system = "B";
    Event left;    ///< interaction point on the left system's world-line
    Event right;   ///< interaction point on the right system's world-line
    Event source;  ///< where the probe pairs are prepared
};

/// Probe ids of a round: zL<k>, zR<k>, xL<k>, xR<k>; events L<k>, R<k> and
/// the probe measurements <probe>m; predicate phi<k>.
struct GadgetRound {
    int round = 1;
    std::string zl, zr, xl, xr;
    std::string left_event, right_event;
    std::array<std::string, 4> measurement_events;
    OutcomePredicate phi_found;
};

/// Adds one gadget round to `b`: probe subsystems with world-lines from the
/// source to their interaction point and on to a local measurement point,
/// the two prepared probe pairs, both interaction events, four single-probe
/// measurements and the Phi-found predicate.
inline GadgetRound gadget_round(ScenarioBuilder &b, int round, const GadgetGeometry &g) {
    const std::string k = std::to_string(round);
    GadgetRound r;
    r.round = round;
    r.zl = "zL" + k;
    r.zr = "zR" + k;
    r.xl = "xL" + k;
    r.xr = "xR" + k;
    r.left_event = "L" + k;
    r.right_event = "R" + k;

    const Event zl_meas{g.left.t + 0.5, g.left.x - 0.25};
    const Event xl_meas{g.left.t + 0.5, g.left.x + 0.25};
    const Event zr_meas{g.right.t + 0.5, g.right.x + 0.25};
    const Event xr_meas{g.right.t + 0.5, g.right.x - 0.25};

    b.subsystem(r.zl, 2, {g.source, g.left, zl_meas});
    b.subsystem(r.zr, 2, {g.source, g.right, zr_meas});
    b.subsystem(r.xl, 2, {g.source, g.left, xl_meas});
    b.subsystem(r.xr, 2, {g.source, g.right, xr_meas});
    b.initial_factor({r.zl, r.zr}, bell_pair());
    b.initial_factor({r.xl, r.xr}, bell_pair());

    b.event({r.left_event, g.left, Interaction{builtin_operator("builtin.gadget_left", {g.left_system, r.zl, r.xl})}});
    b.event({r.right_event, g.right,
             Interaction{builtin_operator("builtin.gadget_right", {g.right_system, r.zr, r.xr})}});
    const std::array<std::pair<std::string, Event>, 4> probes = {
        std::pair{r.zl, zl_meas}, std::pair{r.zr, zr_meas}, std::pair{r.xl, xl_meas}, std::pair{r.xr, xr_meas}};
    for (std::size_t i = 0; i < probes.size(); ++i) {
        r.measurement_events[i] = probes[i].first + "m";
        b.event({r.measurement_events[i], probes[i].second, builtin_measurement("builtin.z_measurement", {probes[i].first})});
    }
    r.phi_found = {"phi" + k,
                   {{{r.measurement_events[0], r.measurement_events[1]}, 0},
                    {{r.measurement_events[2], r.measurement_events[3]}, 0}}};
    b.predicate(r.phi_found);
    return r;
}

/// Coordinates of the two-round isospin experiment.
struct IsospinGeometry {
    Event a_end;  ///< A's world-line runs from the origin to here
    Event b_end;  ///< B's world-line runs from the origin to here
    Event l1, r1, l2, r2, m;
};

/// R1 and R2 spacelike to M; L1, L2 in M's causal past.
inline IsospinGeometry fig1_geometry() {
    return {{8.0, -6.0}, {8.0, 6.0}, {2.0, -1.5}, {2.0, 1.5}, {4.0, -3.0}, {4.0, 3.0}, {6.0, -4.5}};
}

/// R1 and R2 in the timelike future of M.
inline IsospinGeometry fig2_geometry() {
    return {{8.0, -2.0}, {16.0, 4.0}, {1.0, -0.25}, {6.0, 1.5}, {2.0, -0.5}, {8.0, 2.0}, {3.0, -0.75}};
}

inline Scenario isospin_scenario(const std::string &name, const IsospinGeometry &g, const Vector &ab_state) {
    const Event origin{0.0, 0.0};
    ScenarioBuilder b(name);
    b.initial_surface({0.0, 0.0});
    b.subsystem("A", 2, {origin, g.a_end});
    b.subsystem("B", 2, {origin, g.b_end});
    b.initial_factor({"A", "B"}, ab_state);
    gadget_round(b, 1, {"A", "B", g.l1, g.r1, origin});
    gadget_round(b, 2, {"A", "B", g.l2, g.r2, origin});
    b.event({"M", g.m, builtin_measurement("builtin.iz_A_measurement", {"A"})});
    return b.build();
}

inline Scenario fig1(const Vector &ab_state = coupled_states().singlet) {
    return isospin_scenario("fig1", fig1_geometry(), ab_state);
}

inline Scenario fig2(const Vector &ab_state = coupled_states().singlet) {
    return isospin_scenario("fig2", fig2_geometry(), ab_state);
}

struct MesonGeometry {
    Event a_end{4.0, -3.0};
    Event b_end{4.0, 3.0};
    Event m{1.0, 0.75};   ///< hypercharge measurement on B
    Event p{3.0, -2.25};  ///< on A, spacelike to M
    Event pp{3.0, 2.25};  ///< on B, M in its causal past
};

inline Scenario fig3(const Vector &ab_state = meson_states().superposed, const MesonGeometry &g = {}) {
    const Event origin{0.0, 0.0};
    ScenarioBuilder b("fig3");
    b.initial_surface({0.0, 0.0});
    b.subsystem("A", 5, {origin, g.a_end});
    b.subsystem("B", 5, {origin, g.b_end});
    b.initial_factor({"A", "B"}, ab_state);
    b.event({"M", g.m, builtin_measurement("builtin.hypercharge_B_measurement", {"B"})});
    b.point("P", g.p);
    b.point("Pp", g.pp);
    b.query({{{"kind", "surface-state"}, {"surface", "sigma(P)"}}});
    b.query({{{"kind", "surface-state"}, {"surface", "sigma(P,Pp)"}, {"outcomes", "M=pi"}}});
    b.query({{{"kind", "curious"}, {"P", "P"}, {"Pp", "Pp"}, {"outcomes", "M=pi"}}});
    return b.build();
}

inline std::vector<Scenario> builtin_scenarios() { return {fig1(), fig2(), fig3()}; }

inline Scenario builtin_scenario(const std::string &name) {
    if (name == "fig1") return fig1();
    if (name == "fig2") return fig2();
    if (name == "fig3") return fig3();
    throw ValidationError("unknown builtin scenario '" + name + "' (expected fig1, fig2 or fig3)");
}

}  // namespace relcollapse::gadgets
