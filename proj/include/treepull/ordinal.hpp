#pragma once

#include <compare>
#include <cstdint>
#include <memory>
#include <optional>
#include <string>
#include <vector>

namespace treepull {

class OrdinalCNF;

struct CnfTerm {
    std::shared_ptr<const OrdinalCNF> exponent;
    std::uint64_t coefficient = 1;
};

// Cantor normal form below epsilon_0: terms with strictly decreasing
// exponents and positive coefficients.
class OrdinalCNF {
public:
    OrdinalCNF() = default;  // zero

    static OrdinalCNF nat(std::uint64_t n);
    static OrdinalCNF omega();
    static OrdinalCNF omega_pow(const OrdinalCNF& e, std::uint64_t coef = 1);

    const std::vector<CnfTerm>& terms() const { return terms_; }
    bool is_zero() const { return terms_.empty(); }
    bool is_successor() const;
    bool is_limit() const { return !is_zero() && !is_successor(); }
    std::optional<std::uint64_t> as_nat() const;

    friend std::strong_ordering operator<=>(const OrdinalCNF& a, const OrdinalCNF& b);
    friend bool operator==(const OrdinalCNF& a, const OrdinalCNF& b) { return (a <=> b) == 0; }

    // ordinal (non-commutative) sum
    friend OrdinalCNF operator+(const OrdinalCNF& a, const OrdinalCNF& b);
    OrdinalCNF times(std::uint64_t k) const;
    OrdinalCNF succ() const { return *this + nat(1); }

    std::string str() const;

    // throws std::invalid_argument when terms are not in normal form
    static OrdinalCNF from_terms(std::vector<CnfTerm> terms);

private:
    std::vector<CnfTerm> terms_;
};

std::optional<OrdinalCNF> parse_ordinal(const std::string& text);

}  // namespace treepull
