#include "treepull/ordinal.hpp"

#include <cctype>
#include <stdexcept>

namespace treepull {

namespace {

const std::shared_ptr<const OrdinalCNF>& zero_ptr() {
    static const auto z = std::make_shared<const OrdinalCNF>();
    return z;
}

}  // namespace

OrdinalCNF OrdinalCNF::nat(std::uint64_t n) {
    OrdinalCNF o;
    if (n) o.terms_.push_back({zero_ptr(), n});
    return o;
}

OrdinalCNF OrdinalCNF::omega() { return omega_pow(nat(1)); }

OrdinalCNF OrdinalCNF::omega_pow(const OrdinalCNF& e, std::uint64_t coef) {
    OrdinalCNF o;
    if (coef) o.terms_.push_back({std::make_shared<const OrdinalCNF>(e), coef});
    return o;
}

bool OrdinalCNF::is_successor() const { return !terms_.empty() && terms_.back().exponent->is_zero(); }

std::optional<std::uint64_t> OrdinalCNF::as_nat() const {
    if (terms_.empty()) return 0;
    if (terms_.size() == 1 && terms_[0].exponent->is_zero()) return terms_[0].coefficient;
    return std::nullopt;
}

std::strong_ordering operator<=>(const OrdinalCNF& a, const OrdinalCNF& b) {
    std::size_t n = std::min(a.terms_.size(), b.terms_.size());
    for (std::size_t i = 0; i < n; ++i) {
        auto c = *a.terms_[i].exponent <=> *b.terms_[i].exponent;
        if (c != 0) return c;
        if (a.terms_[i].coefficient != b.terms_[i].coefficient)
            return a.terms_[i].coefficient <=> b.terms_[i].coefficient;
    }
    return a.terms_.size() <=> b.terms_.size();
}

OrdinalCNF operator+(const OrdinalCNF& a, const OrdinalCNF& b) {
    if (b.is_zero()) return a;
    const OrdinalCNF& lead = *b.terms_.front().exponent;
    OrdinalCNF out;
    for (const auto& t : a.terms_) {
        auto c = *t.exponent <=> lead;
        if (c > 0) {
            out.terms_.push_back(t);
        } else if (c == 0) {
            out.terms_.push_back({t.exponent, t.coefficient + b.terms_.front().coefficient});
            out.terms_.insert(out.terms_.end(), b.terms_.begin() + 1, b.terms_.end());
            return out;
        } else {
            break;
        }
    }
    out.terms_.insert(out.terms_.end(), b.terms_.begin(), b.terms_.end());
    return out;
}

OrdinalCNF OrdinalCNF::times(std::uint64_t k) const {
    // alpha * k for finite k
    if (k == 0 || is_zero()) return {};
    OrdinalCNF out = *this;
    for (std::uint64_t i = 1; i < k; ++i) out = out + *this;
    return out;
}

OrdinalCNF OrdinalCNF::from_terms(std::vector<CnfTerm> terms) {
    for (std::size_t i = 0; i < terms.size(); ++i) {
        if (!terms[i].exponent || terms[i].coefficient == 0) throw std::invalid_argument("bad CNF term");
        if (i && !(*terms[i].exponent < *terms[i - 1].exponent))
            throw std::invalid_argument("CNF exponents must strictly decrease");
    }
    OrdinalCNF o;
    o.terms_ = std::move(terms);
    return o;
}

std::string OrdinalCNF::str() const {
    if (terms_.empty()) return "0";
    std::string out;
    for (std::size_t i = 0; i < terms_.size(); ++i) {
        if (i) out += "+";
        const auto& t = terms_[i];
        const OrdinalCNF& e = *t.exponent;
        if (e.is_zero()) {
            out += std::to_string(t.coefficient);
            continue;
        }
        out += "w";
        if (!(e == nat(1))) {
            auto en = e.as_nat();
            out += en ? "^" + std::to_string(*en) : "^(" + e.str() + ")";
        }
        if (t.coefficient != 1) out += "*" + std::to_string(t.coefficient);
    }
    return out;
}

namespace {

struct CnfParser {
    const std::string& s;
    std::size_t i = 0;

    void ws() {
        while (i < s.size() && std::isspace(static_cast<unsigned char>(s[i]))) ++i;
    }
    bool eat(char c) {
        ws();
        if (i < s.size() && s[i] == c) {
            ++i;
            return true;
        }
        return false;
    }
    std::optional<std::uint64_t> number() {
        ws();
        if (i >= s.size() || !std::isdigit(static_cast<unsigned char>(s[i]))) return std::nullopt;
        std::uint64_t v = 0;
        while (i < s.size() && std::isdigit(static_cast<unsigned char>(s[i]))) v = v * 10 + (s[i++] - '0');
        return v;
    }
    std::optional<OrdinalCNF> term() {
        ws();
        if (eat('w')) {
            OrdinalCNF e = OrdinalCNF::nat(1);
            if (eat('^')) {
                if (eat('(')) {
                    auto inner = sum();
                    if (!inner || !eat(')')) return std::nullopt;
                    e = *inner;
                } else {
                    auto n = number();
                    if (!n) return std::nullopt;
                    e = OrdinalCNF::nat(*n);
                }
            }
            std::uint64_t k = 1;
            if (eat('*')) {
                auto n = number();
                if (!n) return std::nullopt;
                k = *n;
            }
            return OrdinalCNF::omega_pow(e, k);
        }
        auto n = number();
        if (!n) return std::nullopt;
        return OrdinalCNF::nat(*n);
    }
    std::optional<OrdinalCNF> sum() {
        auto acc = term();
        if (!acc) return std::nullopt;
        while (eat('+')) {
            auto t = term();
            if (!t) return std::nullopt;
            *acc = *acc + *t;
        }
        return acc;
    }
};

}  // namespace

std::optional<OrdinalCNF> parse_ordinal(const std::string& text) {
    CnfParser p{text};
    auto r = p.sum();
    p.ws();
    if (!r || p.i != text.size()) return std::nullopt;
    return r;
}

}  // namespace treepull
