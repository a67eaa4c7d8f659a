#pragma once

// Polynomials in two-mode ladder operators, evaluated against truncated Fock
// states by direct action on number-basis kets.

#include <complex>
#include <cstdint>
#include <vector>

#include "hbtamp/fock_space.hpp"

namespace hbtamp::fock {

enum class Letter : std::uint8_t { Annihilate, Create, Number };

struct Ladder {
    int mode = 0;  // 0 = a, 1 = b
    Letter letter = Letter::Annihilate;

    friend bool operator==(const Ladder&, const Ladder&) = default;
};

inline Ladder annihilate(int mode) { return {mode, Letter::Annihilate}; }
inline Ladder create(int mode) { return {mode, Letter::Create}; }
inline Ladder number(int mode) { return {mode, Letter::Number}; }

using Word = std::vector<Ladder>;

struct Term {
    std::complex<double> coefficient;
    Word word;  // operators act right to left
};

class OperatorPolynomial {
public:
    OperatorPolynomial() = default;
    explicit OperatorPolynomial(std::vector<Term> terms) : terms_(std::move(terms)) {}

    static OperatorPolynomial identity();
    static OperatorPolynomial monomial(std::complex<double> coefficient, Word word);

    const std::vector<Term>& terms() const noexcept { return terms_; }

    OperatorPolynomial operator+(const OperatorPolynomial& other) const;
    OperatorPolynomial operator*(const OperatorPolynomial& other) const;
    OperatorPolynomial scaled(std::complex<double> factor) const;

    /// Formal normal ordering :P: -- every creation operator moved left of
    /// every annihilation operator without commutator corrections. Number
    /// letters are first expanded to a^dag a.
    OperatorPolynomial normal_ordered() const;

    /// Intensity-as-photon-number rule: in each term, a mode whose creation and
    /// annihilation counts are both p is replaced by n^p (number letters count
    /// as one of each). Unbalanced modes are normal ordered.
    OperatorPolynomial number_substituted() const;

    /// Operators of different modes commute: regroup each word as all mode-0
    /// letters then all mode-1 letters, and merge identical words.
    OperatorPolynomial simplified() const;

private:
    std::vector<Term> terms_;
};

/// Applies `word` to |n_a, n_b>. Returns false when the result vanishes.
bool apply_word(const Word& word, int& na, int& nb, double& amplitude);

/// Tr[rho P] for a one- or two-mode state. Kets leaving the truncated box
/// contribute nothing.
std::complex<double> expectation(const FockState& state, const OperatorPolynomial& op);

}  // namespace hbtamp::fock
