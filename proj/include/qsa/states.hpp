// states.hpp
// The six single-qubit states the protocol works with, the three measurement
// bases, the encoding gates, and the Bell-state labels with their 2-bit codes.

#pragma once

#include <array>
#include <complex>
#include <cstddef>
#include <stdexcept>
#include <string>
#include <string_view>

namespace qsa {

using Complex = std::complex<double>;

inline constexpr double kInvSqrt2 = 0.70710678118654752440;

// |0>, |1>, |+>, |->, |+y>, |-y>
enum class CanonicalState { Zero, One, Plus, Minus, PlusY, MinusY };

inline constexpr std::array<CanonicalState, 4> kCarrierStates = {
    CanonicalState::Zero, CanonicalState::One, CanonicalState::Plus,
    CanonicalState::Minus};

inline constexpr std::array<CanonicalState, 4> kDecoyStates = {
    CanonicalState::Plus, CanonicalState::Minus, CanonicalState::PlusY,
    CanonicalState::MinusY};

// amplitudes (a0, a1) with respect to the computational basis
inline std::array<Complex, 2> state_amplitudes(CanonicalState s) {
    switch (s) {
        case CanonicalState::Zero:   return {Complex{1, 0}, Complex{0, 0}};
        case CanonicalState::One:    return {Complex{0, 0}, Complex{1, 0}};
        case CanonicalState::Plus:   return {Complex{kInvSqrt2, 0}, Complex{kInvSqrt2, 0}};
        case CanonicalState::Minus:  return {Complex{kInvSqrt2, 0}, Complex{-kInvSqrt2, 0}};
        case CanonicalState::PlusY:  return {Complex{kInvSqrt2, 0}, Complex{0, kInvSqrt2}};
        case CanonicalState::MinusY: return {Complex{kInvSqrt2, 0}, Complex{0, -kInvSqrt2}};
    }
    throw std::invalid_argument("unknown canonical state");
}

inline std::string to_label(CanonicalState s) {
    switch (s) {
        case CanonicalState::Zero:   return "0";
        case CanonicalState::One:    return "1";
        case CanonicalState::Plus:   return "+";
        case CanonicalState::Minus:  return "-";
        case CanonicalState::PlusY:  return "+y";
        case CanonicalState::MinusY: return "-y";
    }
    throw std::invalid_argument("unknown canonical state");
}

inline CanonicalState canonical_state_from_label(std::string_view label) {
    if (label == "0") return CanonicalState::Zero;
    if (label == "1") return CanonicalState::One;
    if (label == "+") return CanonicalState::Plus;
    if (label == "-") return CanonicalState::Minus;
    if (label == "+y") return CanonicalState::PlusY;
    if (label == "-y") return CanonicalState::MinusY;
    throw std::invalid_argument("unknown state label: " + std::string(label));
}

// Measurement bases. Outcome 0 corresponds to the first eigenstate
// (Z: |0>/|1>, X: |+>/|->, Y: |+y>/|-y>).
enum class Basis { Z, X, Y };

inline CanonicalState basis_eigenstate(Basis b, int outcome) {
    switch (b) {
        case Basis::Z: return outcome == 0 ? CanonicalState::Zero : CanonicalState::One;
        case Basis::X: return outcome == 0 ? CanonicalState::Plus : CanonicalState::Minus;
        case Basis::Y: return outcome == 0 ? CanonicalState::PlusY : CanonicalState::MinusY;
    }
    throw std::invalid_argument("unknown basis");
}

// The basis a canonical state is an eigenstate of.
inline Basis basis_of(CanonicalState s) {
    switch (s) {
        case CanonicalState::Zero:
        case CanonicalState::One:    return Basis::Z;
        case CanonicalState::Plus:
        case CanonicalState::Minus:  return Basis::X;
        case CanonicalState::PlusY:
        case CanonicalState::MinusY: return Basis::Y;
    }
    throw std::invalid_argument("unknown canonical state");
}

// Eigenvalue index of a canonical state within its own basis (0 or 1).
inline int eigen_index(CanonicalState s) {
    switch (s) {
        case CanonicalState::Zero:
        case CanonicalState::Plus:
        case CanonicalState::PlusY:  return 0;
        case CanonicalState::One:
        case CanonicalState::Minus:
        case CanonicalState::MinusY: return 1;
    }
    throw std::invalid_argument("unknown canonical state");
}

inline std::string to_label(Basis b) {
    switch (b) {
        case Basis::Z: return "Z";
        case Basis::X: return "X";
        case Basis::Y: return "Y";
    }
    throw std::invalid_argument("unknown basis");
}

inline Basis basis_from_label(std::string_view label) {
    if (label == "Z") return Basis::Z;
    if (label == "X") return Basis::X;
    if (label == "Y") return Basis::Y;
    throw std::invalid_argument("unknown basis label: " + std::string(label));
}

// Single-qubit encoding gates plus the CNOT used by the ancilla attack.
class Gate {
public:
    enum class Kind { I, ISigmaY, Cnot };

    static Gate identity() {
        return Gate(Kind::I, {Complex{1, 0}, Complex{0, 0}, Complex{0, 0}, Complex{1, 0}});
    }

    // i*sigma_y = |0><1| - |1><0|
    static Gate i_sigma_y() {
        return Gate(Kind::ISigmaY, {Complex{0, 0}, Complex{1, 0}, Complex{-1, 0}, Complex{0, 0}});
    }

    static Gate cnot() { return Gate(Kind::Cnot, {}); }

    Kind kind() const { return kind_; }
    bool single_qubit() const { return kind_ != Kind::Cnot; }

    // row-major 2x2, m(i, j) = <i|U|j>
    Complex m(int i, int j) const { return u_[static_cast<std::size_t>(i * 2 + j)]; }

private:
    Gate(Kind k, std::array<Complex, 4> u) : kind_(k), u_(u) {}
    Kind kind_;
    std::array<Complex, 4> u_;
};

// Bell states with their classical 2-bit codes:
// 00 <-> psi+, 01 <-> psi-, 10 <-> phi+, 11 <-> phi-.
// Amplitude convention: psi+- = (|00> +- |11>)/sqrt2, phi+- = (|01> +- |10>)/sqrt2.
enum class BellLabel { PsiPlus, PsiMinus, PhiPlus, PhiMinus };

inline constexpr std::array<BellLabel, 4> kBellLabels = {
    BellLabel::PsiPlus, BellLabel::PsiMinus, BellLabel::PhiPlus,
    BellLabel::PhiMinus};

inline std::string bell_code(BellLabel l) {
    switch (l) {
        case BellLabel::PsiPlus:  return "00";
        case BellLabel::PsiMinus: return "01";
        case BellLabel::PhiPlus:  return "10";
        case BellLabel::PhiMinus: return "11";
    }
    throw std::invalid_argument("unknown bell label");
}

inline BellLabel bell_from_code(std::string_view code) {
    if (code == "00") return BellLabel::PsiPlus;
    if (code == "01") return BellLabel::PsiMinus;
    if (code == "10") return BellLabel::PhiPlus;
    if (code == "11") return BellLabel::PhiMinus;
    throw std::invalid_argument("unknown bell code: " + std::string(code));
}

inline std::string to_label(BellLabel l) {
    switch (l) {
        case BellLabel::PsiPlus:  return "psi+";
        case BellLabel::PsiMinus: return "psi-";
        case BellLabel::PhiPlus:  return "phi+";
        case BellLabel::PhiMinus: return "phi-";
    }
    throw std::invalid_argument("unknown bell label");
}

} // namespace qsa
