#pragma once

#include <cstddef>
#include <cstdint>
#include <functional>
#include <initializer_list>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace treepull {

using Nat = std::uint64_t;

// Codes saturate: any string whose true code does not fit in 64 bits reports
// kCodeOverflow. Comparisons against stage numbers stay exact because no
// stage ever reaches that value.
using Code = std::uint64_t;
inline constexpr Code kCodeOverflow = ~Code{0};

Code cantor_pair(Code a, Code b);
std::pair<Code, Code> cantor_unpair(Code n);

class GString {
public:
    GString() = default;
    GString(std::initializer_list<Nat> xs);
    explicit GString(std::vector<Nat> xs);

    const std::vector<Nat>& entries() const { return entries_; }
    std::size_t size() const { return entries_.size(); }
    bool empty() const { return entries_.empty(); }
    Nat operator[](std::size_t i) const { return entries_[i]; }
    Nat back() const { return entries_.back(); }
    Code code() const { return code_; }
    bool code_exact() const { return code_ != kCodeOverflow; }

    GString child(Nat x) const;
    GString prefix(std::size_t n) const;

    friend bool operator==(const GString& a, const GString& b) { return a.entries_ == b.entries_; }
    friend bool operator!=(const GString& a, const GString& b) { return !(a == b); }
    // lexicographic; a proper prefix sorts before its extensions
    friend bool operator<(const GString& a, const GString& b) { return a.entries_ < b.entries_; }

private:
    std::vector<Nat> entries_;
    Code code_ = 0;
};

Code encode(const GString& s);
GString decode(Code n);

GString meet(const GString& a, const GString& b);
bool extends(const GString& longer, const GString& shorter);
bool proper_extends(const GString& longer, const GString& shorter);
bool compatible(const GString& a, const GString& b);
bool incompatible(const GString& a, const GString& b);
bool left_of(const GString& a, const GString& b);
GString concat(const GString& a, const GString& b);
// throws std::invalid_argument on the empty string
GString predecessor(const GString& s);

// Orders strings by code, breaking saturated ties lexicographically.
bool code_less(const GString& a, const GString& b);

// "⟨a,b,c⟩" ; the ASCII form "<a,b,c>" is accepted by the parser too.
std::string to_string(const GString& s);
std::optional<GString> parse_gstring(std::string_view text);

struct GStringHash {
    std::size_t operator()(const GString& s) const noexcept;
};

}  // namespace treepull
