#pragma once

#include <map>
#include <string>
#include <vector>

#include "dbar/field.hpp"

namespace dbar {

// Polynomial in z_1..z_n and their conjugates. A monomial key holds the
// exponents (a_0, b_0, a_1, b_1, ...) of z_v^{a_v} conj(z_v)^{b_v}.
class Polynomial {
public:
    using Key = std::vector<int>;

    explicit Polynomial(int n = 1);
    static Polynomial constant(int n, cplx c);
    static Polynomial z(int n, int v);
    static Polynomial zbar(int n, int v);

    // "(re,im)*zb1^2*z2 - 3*z1 + i*zb2", variables numbered from 1
    static Polynomial parse(const std::string& text, int n);

    int arity() const { return n_; }
    const std::map<Key, cplx>& terms() const { return terms_; }
    bool is_zero() const { return terms_.empty(); }
    unsigned depends() const;

    void add(const Key& key, cplx c);
    cplx operator()(std::span<const cplx> z) const;
    Polynomial dbar(int v) const;
    Polynomial dz(int v) const;

    Polynomial operator+(const Polynomial& o) const;
    Polynomial operator-(const Polynomial& o) const;
    Polynomial operator*(const Polynomial& o) const;
    Polynomial operator*(cplx c) const;

    std::string to_string() const;
    // field with every mixed dbar partial and its separable decomposition
    ScalarFieldN to_field() const;

private:
    int n_;
    std::map<Key, cplx> terms_;
};

// f_j = d f / d conj(z_j)
ZeroOneForm dbar_form(const Polynomial& f);
ZeroOneForm polynomial_form(const std::vector<Polynomial>& components);
// "f1; f2; ..." with one polynomial per component
ZeroOneForm parse_polynomial_form(const std::string& text, int n);

}  // namespace dbar
