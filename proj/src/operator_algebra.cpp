#include "hbtamp/operator_algebra.hpp"

#include <algorithm>
#include <cmath>
#include <map>

#include "hbtamp/errors.hpp"

namespace hbtamp::fock {

namespace {

Word expand_numbers(const Word& word) {
    Word out;
    out.reserve(word.size() * 2);
    for (const auto& l : word) {
        if (l.letter == Letter::Number) {
            out.push_back(create(l.mode));
            out.push_back(annihilate(l.mode));
        } else {
            out.push_back(l);
        }
    }
    return out;
}

Word normal_order_word(const Word& word) {
    Word w = expand_numbers(word);
    std::stable_partition(w.begin(), w.end(),
                          [](const Ladder& l) { return l.letter == Letter::Create; });
    return w;
}

}  // namespace

OperatorPolynomial OperatorPolynomial::identity() { return monomial(1.0, {}); }

OperatorPolynomial OperatorPolynomial::monomial(std::complex<double> coefficient, Word word) {
    return OperatorPolynomial({Term{coefficient, std::move(word)}});
}

OperatorPolynomial OperatorPolynomial::operator+(const OperatorPolynomial& other) const {
    std::vector<Term> t = terms_;
    t.insert(t.end(), other.terms_.begin(), other.terms_.end());
    return OperatorPolynomial(std::move(t)).simplified();
}

OperatorPolynomial OperatorPolynomial::operator*(const OperatorPolynomial& other) const {
    std::vector<Term> t;
    t.reserve(terms_.size() * other.terms_.size());
    for (const auto& lhs : terms_) {
        for (const auto& rhs : other.terms_) {
            Word w = lhs.word;
            w.insert(w.end(), rhs.word.begin(), rhs.word.end());
            t.push_back({lhs.coefficient * rhs.coefficient, std::move(w)});
        }
    }
    return OperatorPolynomial(std::move(t)).simplified();
}

OperatorPolynomial OperatorPolynomial::scaled(std::complex<double> factor) const {
    std::vector<Term> t = terms_;
    for (auto& term : t) term.coefficient *= factor;
    return OperatorPolynomial(std::move(t));
}

OperatorPolynomial OperatorPolynomial::normal_ordered() const {
    std::vector<Term> t;
    t.reserve(terms_.size());
    for (const auto& term : terms_) t.push_back({term.coefficient, normal_order_word(term.word)});
    return OperatorPolynomial(std::move(t)).simplified();
}

OperatorPolynomial OperatorPolynomial::number_substituted() const {
    std::vector<Term> t;
    t.reserve(terms_.size());
    for (const auto& term : terms_) {
        Word out;
        for (int mode = 0; mode < 2; ++mode) {
            Word part;
            int creates = 0;
            int annihilates = 0;
            for (const auto& l : term.word) {
                if (l.mode != mode) continue;
                part.push_back(l);
                if (l.letter == Letter::Create) ++creates;
                if (l.letter == Letter::Annihilate) ++annihilates;
                if (l.letter == Letter::Number) {
                    ++creates;
                    ++annihilates;
                }
            }
            if (creates == annihilates) {
                out.insert(out.end(), static_cast<std::size_t>(creates), number(mode));
            } else {
                const Word ordered = normal_order_word(part);
                out.insert(out.end(), ordered.begin(), ordered.end());
            }
        }
        t.push_back({term.coefficient, std::move(out)});
    }
    return OperatorPolynomial(std::move(t)).simplified();
}

OperatorPolynomial OperatorPolynomial::simplified() const {
    // Key words by (mode, letter) sequence.
    std::map<std::vector<int>, std::pair<Word, std::complex<double>>> merged;
    for (const auto& term : terms_) {
        Word w;
        w.reserve(term.word.size());
        for (int mode = 0; mode < 2; ++mode) {
            for (const auto& l : term.word) {
                if (l.mode == mode) w.push_back(l);
            }
        }
        if (w.size() != term.word.size()) throw DomainError("mode index must be 0 or 1");
        std::vector<int> key;
        key.reserve(w.size());
        for (const auto& l : w) key.push_back(l.mode * 3 + static_cast<int>(l.letter));
        auto [it, inserted] = merged.try_emplace(std::move(key), w, std::complex<double>{});
        it->second.second += term.coefficient;
    }
    std::vector<Term> out;
    out.reserve(merged.size());
    for (auto& [key, value] : merged) {
        if (value.second != 0.0) out.push_back({value.second, std::move(value.first)});
    }
    return OperatorPolynomial(std::move(out));
}

bool apply_word(const Word& word, int& na, int& nb, double& amplitude) {
    for (auto it = word.rbegin(); it != word.rend(); ++it) {
        int& n = it->mode == 0 ? na : nb;
        switch (it->letter) {
            case Letter::Annihilate:
                if (n == 0) return false;
                amplitude *= std::sqrt(static_cast<double>(n));
                --n;
                break;
            case Letter::Create:
                ++n;
                amplitude *= std::sqrt(static_cast<double>(n));
                break;
            case Letter::Number:
                if (n == 0) return false;
                amplitude *= static_cast<double>(n);
                break;
        }
    }
    return true;
}

std::complex<double> expectation(const FockState& state, const OperatorPolynomial& op) {
    const int dim = state.dim();
    std::complex<double> total = 0.0;
    if (state.modes() == 1) {
        const auto& rho = state.matrix();
        for (const auto& term : op.terms()) {
            for (const auto& l : term.word) {
                if (l.mode != 0) throw DomainError("single-mode state cannot evaluate mode-b operators");
            }
            for (int n = 0; n < dim; ++n) {
                int na = n, nb = 0;
                double amp = 1.0;
                if (!apply_word(term.word, na, nb, amp) || na >= dim) continue;
                total += term.coefficient * amp * rho(n, na);
            }
        }
        return total;
    }
    // Tr[rho W] = sum_x <x|rho|W x>; W maps a basis ket to a multiple of one ket.
    for (const auto& term : op.terms()) {
        for (int n = 0; n < dim; ++n) {
            for (int m = 0; m < dim; ++m) {
                int na = n, nb = m;
                double amp = 1.0;
                if (!apply_word(term.word, na, nb, amp)) continue;
                if (na >= dim || nb >= dim) continue;
                const auto rho = state.element(n, m, na, nb);
                if (rho != 0.0) total += term.coefficient * amp * rho;
            }
        }
    }
    return total;
}

}  // namespace hbtamp::fock
