#include "dbar/polynomial.hpp"

#include <cctype>
#include <charconv>
#include <sstream>

#include "dbar/error.hpp"

namespace dbar {

namespace {

cplx ipow(cplx x, int k) {
    cplx r = 1.0;
    for (int i = 0; i < k; ++i) r *= x;
    return r;
}

std::string fmt(double x) {
    char buf[32];
    auto res = std::to_chars(buf, buf + sizeof buf, x);
    return std::string(buf, res.ptr);
}

class Parser {
public:
    Parser(const std::string& s, int n) : s_(s), n_(n) {}

    Polynomial run() {
        Polynomial p = expr();
        skip();
        if (pos_ != s_.size()) fail("unexpected '" + std::string(1, s_[pos_]) + "'");
        return p;
    }

private:
    [[noreturn]] void fail(const std::string& what) const {
        throw PreconditionError("polynomial '" + s_ + "' at " + std::to_string(pos_) + ": " + what);
    }
    void skip() {
        while (pos_ < s_.size() && std::isspace(static_cast<unsigned char>(s_[pos_]))) ++pos_;
    }
    bool eat(char c) {
        skip();
        if (pos_ < s_.size() && s_[pos_] == c) {
            ++pos_;
            return true;
        }
        return false;
    }

    Polynomial expr() {
        skip();
        Polynomial acc(n_);
        bool neg = false;
        if (eat('-')) neg = true;
        else eat('+');
        Polynomial t = term();
        acc = neg ? acc - t : acc + t;
        for (;;) {
            if (eat('+')) acc = acc + term();
            else if (eat('-')) acc = acc - term();
            else return acc;
        }
    }

    Polynomial term() {
        Polynomial acc = power();
        while (eat('*')) acc = acc * power();
        return acc;
    }

    Polynomial power() {
        Polynomial base = primary();
        if (!eat('^')) return base;
        skip();
        int k = 0;
        auto r = std::from_chars(s_.data() + pos_, s_.data() + s_.size(), k);
        if (r.ec != std::errc() || k < 0) fail("expected a non-negative integer exponent");
        pos_ = static_cast<std::size_t>(r.ptr - s_.data());
        Polynomial out = Polynomial::constant(n_, 1.0);
        for (int i = 0; i < k; ++i) out = out * base;
        return out;
    }

    bool number(double& x) {
        skip();
        std::size_t start = pos_;
        if (pos_ < s_.size() && (s_[pos_] == '-' || s_[pos_] == '+')) ++pos_;
        const char* b = s_.data() + pos_;
        auto r = std::from_chars(b, s_.data() + s_.size(), x);
        if (r.ec != std::errc()) {
            pos_ = start;
            return false;
        }
        pos_ = static_cast<std::size_t>(r.ptr - s_.data());
        if (s_[start] == '-') x = -x;
        return true;
    }

    Polynomial primary() {
        skip();
        if (pos_ >= s_.size()) fail("unexpected end");
        char c = s_[pos_];
        if (c == '(') {
            ++pos_;
            std::size_t save = pos_;
            double re = 0.0, im = 0.0;
            if (number(re) && eat(',')) {
                if (!number(im)) fail("expected imaginary part");
                if (!eat(')')) fail("expected ')'");
                return Polynomial::constant(n_, {re, im});
            }
            pos_ = save;
            Polynomial p = expr();
            if (!eat(')')) fail("expected ')'");
            return p;
        }
        if (std::isdigit(static_cast<unsigned char>(c)) || c == '.') {
            double x = 0.0;
            if (!number(x)) fail("bad number");
            return Polynomial::constant(n_, x);
        }
        if (c == 'i' && (pos_ + 1 == s_.size() || !std::isalnum(static_cast<unsigned char>(s_[pos_ + 1])))) {
            ++pos_;
            return Polynomial::constant(n_, {0.0, 1.0});
        }
        if (c == 'z') {
            ++pos_;
            bool conj = false;
            if (pos_ < s_.size() && s_[pos_] == 'b') {
                conj = true;
                ++pos_;
            }
            int v = 0;
            auto r = std::from_chars(s_.data() + pos_, s_.data() + s_.size(), v);
            if (r.ec != std::errc()) fail("expected a variable number");
            pos_ = static_cast<std::size_t>(r.ptr - s_.data());
            if (v < 1 || v > n_) fail("variable index out of range");
            return conj ? Polynomial::zbar(n_, v - 1) : Polynomial::z(n_, v - 1);
        }
        fail("unexpected '" + std::string(1, c) + "'");
    }

    const std::string& s_;
    int n_;
    std::size_t pos_ = 0;
};

}  // namespace

Polynomial::Polynomial(int n) : n_(n) { require(n >= 1, "Polynomial: need at least one variable"); }

Polynomial Polynomial::constant(int n, cplx c) {
    Polynomial p(n);
    p.add(Key(2 * n, 0), c);
    return p;
}

Polynomial Polynomial::z(int n, int v) {
    require(v >= 0 && v < n, "Polynomial: variable index out of range");
    Polynomial p(n);
    Key k(2 * n, 0);
    k[2 * v] = 1;
    p.add(k, 1.0);
    return p;
}

Polynomial Polynomial::zbar(int n, int v) {
    require(v >= 0 && v < n, "Polynomial: variable index out of range");
    Polynomial p(n);
    Key k(2 * n, 0);
    k[2 * v + 1] = 1;
    p.add(k, 1.0);
    return p;
}

Polynomial Polynomial::parse(const std::string& text, int n) { return Parser(text, n).run(); }

void Polynomial::add(const Key& key, cplx c) {
    require(static_cast<int>(key.size()) == 2 * n_, "Polynomial: key has the wrong length");
    cplx& slot = terms_[key];
    slot += c;
    if (slot == cplx(0.0)) terms_.erase(key);
}

unsigned Polynomial::depends() const {
    unsigned m = 0;
    for (const auto& [k, c] : terms_)
        for (int v = 0; v < n_; ++v)
            if (k[2 * v] || k[2 * v + 1]) m |= 1u << v;
    return m;
}

cplx Polynomial::operator()(std::span<const cplx> z) const {
    require(static_cast<int>(z.size()) == n_, "Polynomial: wrong number of coordinates");
    cplx acc = 0.0;
    for (const auto& [k, c] : terms_) {
        cplx t = c;
        for (int v = 0; v < n_; ++v) t *= ipow(z[v], k[2 * v]) * ipow(std::conj(z[v]), k[2 * v + 1]);
        acc += t;
    }
    return acc;
}

Polynomial Polynomial::dbar(int v) const {
    require(v >= 0 && v < n_, "Polynomial: variable index out of range");
    Polynomial p(n_);
    for (const auto& [k, c] : terms_) {
        int b = k[2 * v + 1];
        if (b == 0) continue;
        Key k2 = k;
        k2[2 * v + 1] = b - 1;
        p.add(k2, c * double(b));
    }
    return p;
}

Polynomial Polynomial::dz(int v) const {
    require(v >= 0 && v < n_, "Polynomial: variable index out of range");
    Polynomial p(n_);
    for (const auto& [k, c] : terms_) {
        int a = k[2 * v];
        if (a == 0) continue;
        Key k2 = k;
        k2[2 * v] = a - 1;
        p.add(k2, c * double(a));
    }
    return p;
}

Polynomial Polynomial::operator+(const Polynomial& o) const {
    require(o.n_ == n_, "Polynomial: arity mismatch");
    Polynomial p = *this;
    for (const auto& [k, c] : o.terms_) p.add(k, c);
    return p;
}

Polynomial Polynomial::operator-(const Polynomial& o) const { return *this + o * cplx(-1.0); }

Polynomial Polynomial::operator*(const Polynomial& o) const {
    require(o.n_ == n_, "Polynomial: arity mismatch");
    Polynomial p(n_);
    for (const auto& [k1, c1] : terms_)
        for (const auto& [k2, c2] : o.terms_) {
            Key k(k1.size());
            for (std::size_t i = 0; i < k.size(); ++i) k[i] = k1[i] + k2[i];
            p.add(k, c1 * c2);
        }
    return p;
}

Polynomial Polynomial::operator*(cplx c) const {
    Polynomial p(n_);
    for (const auto& [k, v] : terms_) p.add(k, v * c);
    return p;
}

std::string Polynomial::to_string() const {
    if (terms_.empty()) return "0";
    std::ostringstream os;
    bool first = true;
    for (const auto& [k, c] : terms_) {
        if (!first) os << " + ";
        first = false;
        os << "(" << fmt(c.real()) << "," << fmt(c.imag()) << ")";
        for (int v = 0; v < n_; ++v) {
            if (k[2 * v]) os << "*z" << v + 1 << (k[2 * v] > 1 ? "^" + std::to_string(k[2 * v]) : "");
            if (k[2 * v + 1]) os << "*zb" << v + 1 << (k[2 * v + 1] > 1 ? "^" + std::to_string(k[2 * v + 1]) : "");
        }
    }
    return os.str();
}

namespace {

ScalarFieldN plain_field(const Polynomial& p) {
    ScalarFieldN f;
    f.arity = p.arity();
    f.eval = [p](std::span<const cplx> z) { return p(z); };
    f.depends = p.depends();
    std::vector<SeparableTerm> sep;
    for (const auto& [k, c] : p.terms()) {
        SeparableTerm t;
        t.coeff = c;
        t.factors.resize(p.arity());
        for (int v = 0; v < p.arity(); ++v) {
            int a = k[2 * v], b = k[2 * v + 1];
            if (a == 0 && b == 0) continue;
            t.factors[v] = [a, b](cplx x) { return ipow(x, a) * ipow(std::conj(x), b); };
        }
        sep.push_back(std::move(t));
    }
    f.separable = std::move(sep);
    return f;
}

}  // namespace

ScalarFieldN Polynomial::to_field() const {
    ScalarFieldN f = plain_field(*this);
    for (unsigned m = 1; m < (1u << n_); ++m) {
        Polynomial d = *this;
        for (int v = 0; v < n_; ++v)
            if ((m >> v) & 1u) d = d.dbar(v);
        f.partials[m] = std::make_shared<ScalarFieldN>(plain_field(d));
    }
    return f;
}

ZeroOneForm dbar_form(const Polynomial& f) {
    ZeroOneForm form;
    for (int v = 0; v < f.arity(); ++v) form.components.push_back(f.dbar(v).to_field());
    return form;
}

ZeroOneForm polynomial_form(const std::vector<Polynomial>& components) {
    ZeroOneForm form;
    for (const auto& p : components) {
        require(p.arity() == static_cast<int>(components.size()), "polynomial_form: arity differs from component count");
        form.components.push_back(p.to_field());
    }
    return form;
}

ZeroOneForm parse_polynomial_form(const std::string& text, int n) {
    std::vector<Polynomial> comps;
    std::size_t start = 0;
    for (;;) {
        std::size_t end = text.find(';', start);
        comps.push_back(Polynomial::parse(text.substr(start, end - start), n));
        if (end == std::string::npos) break;
        start = end + 1;
    }
    if (static_cast<int>(comps.size()) != n)
        throw PreconditionError("form '" + text + "' has " + std::to_string(comps.size()) + " components, expected " +
                                std::to_string(n));
    return polynomial_form(comps);
}

}  // namespace dbar
