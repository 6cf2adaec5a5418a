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

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>
#include <complex>
#include <cstddef>
#include <optional>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "relcollapse/error.hpp"

namespace relcollapse {

using cplx = std::complex<double>;
using Matrix = Eigen::MatrixXcd;
using Vector = Eigen::VectorXcd;

inline constexpr std::size_t kDefaultDimCap = std::size_t{1} << 20;
inline constexpr double kOperatorTolerance = 1e-10;
inline constexpr double kZeroNorm = 1e-14;
inline constexpr double kEigenTolerance = 1e-9;

struct SubsystemLabel {
    std::string name;
    std::size_t dim = 2;

    friend bool operator==(const SubsystemLabel &, const SubsystemLabel &) = default;
};

/// Ordered tensor-product structure. Amplitudes are indexed row-major: the
/// last label varies fastest.
class SpaceDescriptor {
  public:
    SpaceDescriptor() = default;

    explicit SpaceDescriptor(std::vector<SubsystemLabel> labels, std::size_t cap = kDefaultDimCap)
        : labels_(std::move(labels)) {
        for (std::size_t i = 0; i < labels_.size(); ++i) {
            if (labels_[i].name.empty()) {
                throw ValidationError("subsystem name must be non-empty");
            }
            if (labels_[i].dim == 0) {
                throw ValidationError("subsystem '" + labels_[i].name + "' has zero dimension");
            }
            for (std::size_t j = 0; j < i; ++j) {
                if (labels_[j].name == labels_[i].name) {
                    throw ValidationError("duplicate subsystem '" + labels_[i].name + "'");
                }
            }
            if (total_dim_ > cap / labels_[i].dim) {
                throw ValidationError("total dimension exceeds cap of " + std::to_string(cap));
            }
            total_dim_ *= labels_[i].dim;
        }
        strides_.assign(labels_.size(), 1);
        for (std::size_t i = labels_.size(); i-- > 1;) {
            strides_[i - 1] = strides_[i] * labels_[i].dim;
        }
    }

    const std::vector<SubsystemLabel> &labels() const { return labels_; }
    std::size_t size() const { return labels_.size(); }
    std::size_t total_dim() const { return total_dim_; }
    std::size_t stride(std::size_t pos) const { return strides_[pos]; }

    std::optional<std::size_t> position(const std::string &name) const {
        for (std::size_t i = 0; i < labels_.size(); ++i) {
            if (labels_[i].name == name) return i;
        }
        return std::nullopt;
    }

    std::size_t require_position(const std::string &name) const {
        auto pos = position(name);
        if (!pos) throw ValidationError("unknown subsystem '" + name + "'");
        return *pos;
    }

    friend bool operator==(const SpaceDescriptor &a, const SpaceDescriptor &b) { return a.labels_ == b.labels_; }

  private:
    std::vector<SubsystemLabel> labels_;
    std::vector<std::size_t> strides_;
    std::size_t total_dim_ = 1;
};

class StateVector {
  public:
    StateVector() = default;

    StateVector(SpaceDescriptor space, Vector amplitudes) : space_(std::move(space)), amps_(std::move(amplitudes)) {
        if (static_cast<std::size_t>(amps_.size()) != space_.total_dim()) {
            throw ValidationError("amplitude count " + std::to_string(amps_.size()) + " does not match dimension " +
                                  std::to_string(space_.total_dim()));
        }
        norm2_ = amps_.squaredNorm();
    }

    static StateVector basis(SpaceDescriptor space, std::size_t index) {
        Vector v = Vector::Zero(static_cast<Eigen::Index>(space.total_dim()));
        v(static_cast<Eigen::Index>(index)) = 1.0;
        return {std::move(space), std::move(v)};
    }

    const SpaceDescriptor &space() const { return space_; }
    const Vector &amplitudes() const { return amps_; }
    cplx amplitude(std::size_t i) const { return amps_(static_cast<Eigen::Index>(i)); }
    double norm_squared() const { return norm2_; }
    double norm() const { return std::sqrt(norm2_); }
    std::size_t dim() const { return space_.total_dim(); }

  private:
    SpaceDescriptor space_;
    Vector amps_;
    double norm2_ = 0.0;
};

enum class OperatorKind { Unitary, Projector, Hermitian };

inline const char *to_string(OperatorKind k) {
    switch (k) {
        case OperatorKind::Unitary: return "unitary";
        case OperatorKind::Projector: return "projector";
        case OperatorKind::Hermitian: return "hermitian";
    }
    return "?";
}

/// Dense operator acting on a subset of subsystems. The matrix is indexed
/// row-major over `targets` in the order given here, which need not match
/// the order of any particular space.
class LocalOperator {
  public:
    LocalOperator() = default;

    LocalOperator(std::vector<SubsystemLabel> targets, Matrix matrix, OperatorKind kind, std::string name = {})
        : targets_(std::move(targets)), matrix_(std::move(matrix)), kind_(kind), name_(std::move(name)) {
        std::size_t dim = 1;
        for (std::size_t i = 0; i < targets_.size(); ++i) {
            for (std::size_t j = 0; j < i; ++j) {
                if (targets_[i].name == targets_[j].name) {
                    throw ValidationError("operator targets '" + targets_[i].name + "' twice");
                }
            }
            dim *= targets_[i].dim;
        }
        if (targets_.empty()) {
            throw ValidationError("operator needs at least one target");
        }
        if (static_cast<std::size_t>(matrix_.rows()) != dim || static_cast<std::size_t>(matrix_.cols()) != dim) {
            throw ValidationError("operator matrix is " + std::to_string(matrix_.rows()) + "x" +
                                  std::to_string(matrix_.cols()) + ", targets need " + std::to_string(dim));
        }
        const Matrix identity = Matrix::Identity(matrix_.rows(), matrix_.cols());
        const std::string what = name_.empty() ? std::string("operator") : "operator '" + name_ + "'";
        switch (kind_) {
            case OperatorKind::Unitary:
                if ((matrix_.adjoint() * matrix_ - identity).cwiseAbs().maxCoeff() > kOperatorTolerance) {
                    throw ValidationError(what + " is not unitary");
                }
                break;
            case OperatorKind::Projector:
                if ((matrix_ * matrix_ - matrix_).cwiseAbs().maxCoeff() > kOperatorTolerance ||
                    (matrix_.adjoint() - matrix_).cwiseAbs().maxCoeff() > kOperatorTolerance) {
                    throw ValidationError(what + " is not an orthogonal projector");
                }
                break;
            case OperatorKind::Hermitian:
                if ((matrix_.adjoint() - matrix_).cwiseAbs().maxCoeff() > kOperatorTolerance) {
                    throw ValidationError(what + " is not hermitian");
                }
                break;
        }
    }

    const std::vector<SubsystemLabel> &targets() const { return targets_; }
    const Matrix &matrix() const { return matrix_; }
    OperatorKind kind() const { return kind_; }
    const std::string &name() const { return name_; }

    std::vector<std::string> target_names() const {
        std::vector<std::string> out;
        for (const auto &t : targets_) out.push_back(t.name);
        return out;
    }

    /// Same matrix on differently named subsystems of equal dimensions.
    LocalOperator retarget(const std::vector<std::string> &names) const {
        if (names.size() != targets_.size()) {
            throw ValidationError("retarget: expected " + std::to_string(targets_.size()) + " names");
        }
        auto labels = targets_;
        for (std::size_t i = 0; i < names.size(); ++i) labels[i].name = names[i];
        return {std::move(labels), matrix_, kind_, name_};
    }

    LocalOperator renamed(std::string name) const { return {targets_, matrix_, kind_, std::move(name)}; }

  private:
    std::vector<SubsystemLabel> targets_;
    Matrix matrix_;
    OperatorKind kind_ = OperatorKind::Hermitian;
    std::string name_;
};

// ---------------------------------------------------------------------------

inline StateVector kron_state(std::span<const StateVector> factors) {
    std::vector<SubsystemLabel> labels;
    Vector amps = Vector::Ones(1);
    for (const auto &f : factors) {
        for (const auto &l : f.space().labels()) {
            if (std::any_of(labels.begin(), labels.end(), [&](const auto &o) { return o.name == l.name; })) {
                throw ValidationError("kron_state: subsystem '" + l.name + "' appears in two factors");
            }
            labels.push_back(l);
        }
        Vector next(amps.size() * f.amplitudes().size());
        for (Eigen::Index i = 0; i < amps.size(); ++i) {
            next.segment(i * f.amplitudes().size(), f.amplitudes().size()) = amps(i) * f.amplitudes();
        }
        amps = std::move(next);
    }
    return {SpaceDescriptor(std::move(labels)), std::move(amps)};
}

inline StateVector kron_state(std::initializer_list<StateVector> factors) {
    return kron_state(std::span<const StateVector>(factors.begin(), factors.size()));
}

namespace detail {

/// Offsets (into the full amplitude array) of every target-subspace basis
/// state relative to a base index whose target digits are all zero.
struct Embedding {
    std::vector<std::size_t> offsets;
    std::vector<std::size_t> bases;
};

inline Embedding embedding(const SpaceDescriptor &space, const std::vector<SubsystemLabel> &targets) {
    std::vector<std::size_t> pos;
    for (const auto &t : targets) {
        const auto p = space.require_position(t.name);
        if (space.labels()[p].dim != t.dim) {
            throw ValidationError("subsystem '" + t.name + "' has dimension " + std::to_string(space.labels()[p].dim) +
                                  ", operator expects " + std::to_string(t.dim));
        }
        pos.push_back(p);
    }
    Embedding emb;
    emb.offsets.push_back(0);
    for (std::size_t k = 0; k < pos.size(); ++k) {
        std::vector<std::size_t> next;
        next.reserve(emb.offsets.size() * targets[k].dim);
        for (auto off : emb.offsets) {
            for (std::size_t d = 0; d < targets[k].dim; ++d) next.push_back(off + d * space.stride(pos[k]));
        }
        emb.offsets = std::move(next);
    }
    for (std::size_t idx = 0; idx < space.total_dim(); ++idx) {
        bool zero = true;
        for (auto p : pos) {
            if ((idx / space.stride(p)) % space.labels()[p].dim != 0) {
                zero = false;
                break;
            }
        }
        if (zero) emb.bases.push_back(idx);
    }
    return emb;
}

}  // namespace detail

/// `op` bound to one space, with its index pattern computed once.
class OperatorPlan {
  public:
    OperatorPlan(const LocalOperator &op, const SpaceDescriptor &space)
        : matrix_(op.matrix()), emb_(detail::embedding(space, op.targets())) {}

    Vector apply(const Vector &amps) const {
        const auto d = static_cast<Eigen::Index>(emb_.offsets.size());
        Vector out(amps.size());
        Vector in(d);
        Vector res(d);
        for (auto base : emb_.bases) {
            for (Eigen::Index k = 0; k < d; ++k) in(k) = amps(static_cast<Eigen::Index>(base + emb_.offsets[k]));
            res.noalias() = matrix_ * in;
            for (Eigen::Index k = 0; k < d; ++k) out(static_cast<Eigen::Index>(base + emb_.offsets[k])) = res(k);
        }
        return out;
    }

  private:
    Matrix matrix_;
    detail::Embedding emb_;
};

/// Applies the matrix of `op` on its targets, identity elsewhere, without
/// building the full-dimension matrix.
inline Vector apply_local(const LocalOperator &op, const SpaceDescriptor &space, const Vector &amps) {
    return OperatorPlan(op, space).apply(amps);
}

inline StateVector apply_local(const LocalOperator &op, const StateVector &psi) {
    return {psi.space(), apply_local(op, psi.space(), psi.amplitudes())};
}

struct Projection {
    StateVector state;  ///< unnormalized
    double probability = 0.0;
};

inline Projection project(const LocalOperator &p, const StateVector &psi) {
    if (p.kind() != OperatorKind::Projector) {
        throw ValidationError("project: operator is a " + std::string(to_string(p.kind())) + ", not a projector");
    }
    StateVector out = apply_local(p, psi);
    const double prob = out.norm_squared();
    return {std::move(out), prob};
}

inline StateVector normalize(const StateVector &psi) {
    const double n = psi.norm();
    if (!(n >= kZeroNorm)) {
        throw NumericalError("cannot normalize a vector of norm " + std::to_string(n));
    }
    return {psi.space(), psi.amplitudes() / n};
}

inline cplx inner(const StateVector &phi, const StateVector &psi) {
    if (!(phi.space() == psi.space())) {
        throw ValidationError("inner: states live on different spaces");
    }
    return phi.amplitudes().dot(psi.amplitudes());
}

inline double expectation(const LocalOperator &o, const StateVector &psi) {
    if (o.kind() == OperatorKind::Unitary) {
        throw ValidationError("expectation needs a hermitian operator");
    }
    return psi.amplitudes().dot(apply_local(o, psi.space(), psi.amplitudes())).real();
}

struct EigenCheck {
    bool definite = false;
    double eigenvalue = 0.0;  ///< Rayleigh quotient; meaningful when definite
    double residual = 0.0;    ///< |O psi - lambda psi|
};

/// Definite iff psi is an eigenvector of `o` to within `tol`.
inline EigenCheck eigencheck(const LocalOperator &o, const StateVector &psi, double tol = kEigenTolerance) {
    if (o.kind() == OperatorKind::Unitary) {
        throw ValidationError("eigencheck needs a hermitian operator");
    }
    const Vector opsi = apply_local(o, psi.space(), psi.amplitudes());
    const double lambda = psi.amplitudes().dot(opsi).real() / psi.norm_squared();
    const double residual = (opsi - lambda * psi.amplitudes()).norm();
    return {residual < tol, lambda, residual};
}

/// Re-expresses `psi` over `target`, which must hold the same labels in a
/// different order.
inline StateVector reorder(const StateVector &psi, const SpaceDescriptor &target) {
    const auto &src = psi.space();
    if (src.size() != target.size()) {
        throw ValidationError("reorder: label sets differ");
    }
    std::vector<std::size_t> src_pos;
    for (const auto &l : target.labels()) {
        const auto p = src.require_position(l.name);
        if (src.labels()[p].dim != l.dim) throw ValidationError("reorder: dimension mismatch for '" + l.name + "'");
        src_pos.push_back(p);
    }
    Vector out(psi.amplitudes().size());
    for (std::size_t idx = 0; idx < target.total_dim(); ++idx) {
        std::size_t src_idx = 0;
        for (std::size_t k = 0; k < target.size(); ++k) {
            const std::size_t digit = (idx / target.stride(k)) % target.labels()[k].dim;
            src_idx += digit * src.stride(src_pos[k]);
        }
        out(static_cast<Eigen::Index>(idx)) = psi.amplitudes()(static_cast<Eigen::Index>(src_idx));
    }
    return {target, std::move(out)};
}

inline double distance(const StateVector &a, const StateVector &b) {
    if (!(a.space() == b.space())) {
        throw ValidationError("distance: states live on different spaces");
    }
    return (a.amplitudes() - b.amplitudes()).norm();
}

/// Kronecker product of matrices, first factor most significant.
inline Matrix kron(const Matrix &a, const Matrix &b) {
    Matrix out(a.rows() * b.rows(), a.cols() * b.cols());
    for (Eigen::Index i = 0; i < a.rows(); ++i) {
        for (Eigen::Index j = 0; j < a.cols(); ++j) {
            out.block(i * b.rows(), j * b.cols(), b.rows(), b.cols()) = a(i, j) * b;
        }
    }
    return out;
}

}  // namespace relcollapse
