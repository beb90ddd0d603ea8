// statevector.hpp
// Exact small-register statevector engine: preparation, the protocol's gates,
// basis measurements, Bell-pair operations, and phase-insensitive comparison.
//
// Qubit order: qubit 0 is the first qubit of the register and the most
// significant bit of the amplitude index, so from_states({Zero, One}) has
// amplitude 1 at index 0b01.

#pragma once

#include <cmath>
#include <cstddef>
#include <span>
#include <stdexcept>
#include <utility>
#include <vector>

#include "qsa/rng.hpp"
#include "qsa/states.hpp"

namespace qsa {

class StateVector {
public:
    // |00...0> over n qubits
    explicit StateVector(std::size_t n_qubits)
        : n_qubits_(check_qubit_count(n_qubits)),
          amps_(std::size_t{1} << n_qubits, Complex{0, 0}) {
        amps_[0] = Complex{1, 0};
    }

    StateVector(std::size_t n_qubits, std::vector<Complex> amplitudes)
        : n_qubits_(check_qubit_count(n_qubits)), amps_(std::move(amplitudes)) {
        if (amps_.size() != (std::size_t{1} << n_qubits_)) {
            throw std::invalid_argument("amplitude vector size must be 2^n_qubits");
        }
    }

    std::size_t n_qubits() const { return n_qubits_; }
    std::size_t dim() const { return amps_.size(); }

    const Complex& operator[](std::size_t i) const { return amps_[i]; }
    Complex& operator[](std::size_t i) { return amps_[i]; }

    const std::vector<Complex>& amplitudes() const { return amps_; }

    double norm_squared() const {
        double s = 0.0;
        for (const auto& a : amps_) s += std::norm(a);
        return s;
    }

    // amplitude-index bit position of a qubit
    std::size_t stride(std::size_t qubit) const {
        if (qubit >= n_qubits_) throw std::out_of_range("qubit index out of range");
        return std::size_t{1} << (n_qubits_ - 1 - qubit);
    }

private:
    static std::size_t check_qubit_count(std::size_t n) {
        if (n == 0) throw std::invalid_argument("register needs at least one qubit");
        if (n > 20) throw std::invalid_argument("register too large for this simulator");
        return n;
    }

    std::size_t n_qubits_;
    std::vector<Complex> amps_;
};

inline Complex inner_product(const StateVector& a, const StateVector& b) {
    if (a.n_qubits() != b.n_qubits()) {
        throw std::invalid_argument("inner product dimension mismatch");
    }
    Complex r{0, 0};
    for (std::size_t i = 0; i < a.dim(); ++i) r += std::conj(a[i]) * b[i];
    return r;
}

// true iff |<a|b>| >= 1 - tol (both states assumed normalized)
inline bool equal_up_to_phase(const StateVector& a, const StateVector& b,
                              double tol = 1e-12) {
    return std::abs(inner_product(a, b)) >= 1.0 - tol;
}

// Canonical phase form: first amplitude with nonzero magnitude becomes real
// and positive. Used for serialization and transcript payloads.
inline StateVector canonical_phase(StateVector sv) {
    for (std::size_t i = 0; i < sv.dim(); ++i) {
        const double mag = std::abs(sv[i]);
        if (mag > 1e-9) {
            const Complex factor = std::conj(sv[i]) / mag;
            for (std::size_t j = 0; j < sv.dim(); ++j) sv[j] *= factor;
            break;
        }
    }
    return sv;
}

inline StateVector tensor(const StateVector& a, const StateVector& b) {
    std::vector<Complex> out(a.dim() * b.dim());
    for (std::size_t i = 0; i < a.dim(); ++i) {
        for (std::size_t j = 0; j < b.dim(); ++j) {
            out[i * b.dim() + j] = a[i] * b[j];
        }
    }
    return StateVector(a.n_qubits() + b.n_qubits(), std::move(out));
}

// Tensor product of canonical states, qubit order matching sequence order.
inline StateVector from_states(std::span<const CanonicalState> states) {
    if (states.empty()) {
        throw std::invalid_argument("from_states: empty sequence");
    }
    std::vector<Complex> amps{Complex{1, 0}};
    for (const CanonicalState s : states) {
        const auto q = state_amplitudes(s);
        std::vector<Complex> next(amps.size() * 2);
        for (std::size_t i = 0; i < amps.size(); ++i) {
            next[2 * i] = amps[i] * q[0];
            next[2 * i + 1] = amps[i] * q[1];
        }
        amps = std::move(next);
    }
    return StateVector(states.size(), std::move(amps));
}

inline StateVector from_states(std::initializer_list<CanonicalState> states) {
    return from_states(std::span<const CanonicalState>(states.begin(), states.size()));
}

inline StateVector apply_single(const StateVector& sv, const Gate& gate,
                                std::size_t index) {
    if (!gate.single_qubit()) {
        throw std::invalid_argument("apply_single: gate is not single-qubit");
    }
    const std::size_t step = sv.stride(index);
    StateVector out = sv;
    for (std::size_t base = 0; base < sv.dim(); base += 2 * step) {
        for (std::size_t off = 0; off < step; ++off) {
            const std::size_t i0 = base + off;
            const std::size_t i1 = i0 + step;
            const Complex a = sv[i0], b = sv[i1];
            out[i0] = gate.m(0, 0) * a + gate.m(0, 1) * b;
            out[i1] = gate.m(1, 0) * a + gate.m(1, 1) * b;
        }
    }
    return out;
}

inline StateVector apply_cnot(const StateVector& sv, std::size_t control,
                              std::size_t target) {
    if (control == target) {
        throw std::invalid_argument("apply_cnot: control equals target");
    }
    const std::size_t cstep = sv.stride(control);
    const std::size_t tstep = sv.stride(target);
    StateVector out = sv;
    for (std::size_t i = 0; i < sv.dim(); ++i) {
        if ((i & cstep) && !(i & tstep)) {
            std::swap(out[i], out[i + tstep]);
        }
    }
    return out;
}

struct MeasureResult {
    int outcome;
    StateVector state;
};

// Probability of getting `outcome` when measuring one qubit in `basis`.
inline double measure_probability(const StateVector& sv, std::size_t index,
                                  Basis basis, int outcome) {
    const auto eig = state_amplitudes(basis_eigenstate(basis, outcome));
    const std::size_t step = sv.stride(index);
    double p = 0.0;
    for (std::size_t base = 0; base < sv.dim(); base += 2 * step) {
        for (std::size_t off = 0; off < step; ++off) {
            const std::size_t i0 = base + off;
            p += std::norm(std::conj(eig[0]) * sv[i0] + std::conj(eig[1]) * sv[i0 + step]);
        }
    }
    return p;
}

// Projective single-qubit measurement. Outcome sampled by the Born rule;
// the returned state is the normalized post-measurement state.
inline MeasureResult measure(const StateVector& sv, std::size_t index,
                             Basis basis, RngStream& rng) {
    const double p0 = measure_probability(sv, index, basis, 0);
    const double p1 = measure_probability(sv, index, basis, 1);
    const int outcome = rng.uniform_double() * (p0 + p1) < p0 ? 0 : 1;
    const double p = outcome == 0 ? p0 : p1;

    const auto eig = state_amplitudes(basis_eigenstate(basis, outcome));
    const std::size_t step = sv.stride(index);
    StateVector out = sv;
    const double inv = 1.0 / std::sqrt(p);
    for (std::size_t base = 0; base < sv.dim(); base += 2 * step) {
        for (std::size_t off = 0; off < step; ++off) {
            const std::size_t i0 = base + off;
            const std::size_t i1 = i0 + step;
            const Complex c =
                (std::conj(eig[0]) * sv[i0] + std::conj(eig[1]) * sv[i1]) * inv;
            out[i0] = eig[0] * c;
            out[i1] = eig[1] * c;
        }
    }
    return {outcome, std::move(out)};
}

// psi+- = (|00> +- |11>)/sqrt2, phi+- = (|01> +- |10>)/sqrt2
inline StateVector prepare_bell(BellLabel label) {
    std::vector<Complex> amps(4, Complex{0, 0});
    switch (label) {
        case BellLabel::PsiPlus:
            amps[0] = Complex{kInvSqrt2, 0}; amps[3] = Complex{kInvSqrt2, 0};
            break;
        case BellLabel::PsiMinus:
            amps[0] = Complex{kInvSqrt2, 0}; amps[3] = Complex{-kInvSqrt2, 0};
            break;
        case BellLabel::PhiPlus:
            amps[1] = Complex{kInvSqrt2, 0}; amps[2] = Complex{kInvSqrt2, 0};
            break;
        case BellLabel::PhiMinus:
            amps[1] = Complex{kInvSqrt2, 0}; amps[2] = Complex{-kInvSqrt2, 0};
            break;
    }
    return StateVector(2, std::move(amps));
}

struct BellMeasureResult {
    BellLabel label;
    StateVector state;
};

// Probabilities of the four Bell outcomes on qubits (i, j), indexed by
// the order of kBellLabels. Qubit i is the first qubit of the Bell state.
inline std::array<double, 4> bell_probabilities(const StateVector& sv,
                                                std::size_t i, std::size_t j) {
    if (i == j) throw std::invalid_argument("bell_probabilities: equal indices");
    const std::size_t si = sv.stride(i);
    const std::size_t sj = sv.stride(j);
    std::array<double, 4> p{0.0, 0.0, 0.0, 0.0};
    for (std::size_t idx = 0; idx < sv.dim(); ++idx) {
        if ((idx & si) || (idx & sj)) continue;
        const Complex a00 = sv[idx];
        const Complex a01 = sv[idx + sj];
        const Complex a10 = sv[idx + si];
        const Complex a11 = sv[idx + si + sj];
        p[0] += std::norm((a00 + a11) * kInvSqrt2);  // psi+
        p[1] += std::norm((a00 - a11) * kInvSqrt2);  // psi-
        p[2] += std::norm((a01 + a10) * kInvSqrt2);  // phi+
        p[3] += std::norm((a01 - a10) * kInvSqrt2);  // phi-
    }
    return p;
}

// Projective measurement onto the Bell basis of qubits (i, j).
inline BellMeasureResult bell_measure(const StateVector& sv, std::size_t i,
                                      std::size_t j, RngStream& rng) {
    const auto p = bell_probabilities(sv, i, j);
    const double total = p[0] + p[1] + p[2] + p[3];
    const double r = rng.uniform_double() * total;
    std::size_t pick = 4;
    double cum = 0.0;
    for (std::size_t k = 0; k < 4; ++k) {
        cum += p[k];
        if (r < cum) {
            pick = k;
            break;
        }
    }
    if (pick == 4) {  // float drift at the tail: take the likeliest outcome
        pick = 0;
        for (std::size_t k = 1; k < 4; ++k) {
            if (p[k] > p[pick]) pick = k;
        }
    }
    const BellLabel label = kBellLabels[pick];

    // component pair of the Bell vector on (00,11) or (01,10), with sign
    const bool psi_family =
        label == BellLabel::PsiPlus || label == BellLabel::PsiMinus;
    const double sign =
        (label == BellLabel::PsiMinus || label == BellLabel::PhiMinus) ? -1.0 : 1.0;

    const std::size_t si = sv.stride(i);
    const std::size_t sj = sv.stride(j);
    StateVector out = sv;
    const double inv = 1.0 / std::sqrt(p[pick]);
    for (std::size_t idx = 0; idx < sv.dim(); ++idx) {
        if ((idx & si) || (idx & sj)) continue;
        const std::size_t i00 = idx;
        const std::size_t i01 = idx + sj;
        const std::size_t i10 = idx + si;
        const std::size_t i11 = idx + si + sj;
        Complex c;
        if (psi_family) {
            c = (sv[i00] + sign * sv[i11]) * kInvSqrt2 * inv;
            out[i00] = c * kInvSqrt2;
            out[i11] = sign * c * kInvSqrt2;
            out[i01] = Complex{0, 0};
            out[i10] = Complex{0, 0};
        } else {
            c = (sv[i01] + sign * sv[i10]) * kInvSqrt2 * inv;
            out[i01] = c * kInvSqrt2;
            out[i10] = sign * c * kInvSqrt2;
            out[i00] = Complex{0, 0};
            out[i11] = Complex{0, 0};
        }
    }
    return {label, std::move(out)};
}

} // namespace qsa
