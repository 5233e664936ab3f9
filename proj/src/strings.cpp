#include "treepull/strings.hpp"

#include <algorithm>
#include <cctype>
#include <stdexcept>

namespace treepull {

namespace {

using u128 = unsigned __int128;

Code saturate(u128 v) { return v >= u128{kCodeOverflow} ? kCodeOverflow : static_cast<Code>(v); }

Code isqrt(u128 v) {
    // floor(sqrt(v)) for v < 2^66
    Code r = 0;
    for (int bit = 40; bit >= 0; --bit) {
        Code cand = r | (Code{1} << bit);
        if (u128{cand} * cand <= v) r = cand;
    }
    return r;
}

Code extend_code(Code prev, Nat x) {
    if (prev == kCodeOverflow || x == kCodeOverflow) return kCodeOverflow;
    Code p = cantor_pair(prev, x);
    if (p == kCodeOverflow) return kCodeOverflow;
    return saturate(u128{p} + 1);
}

}  // namespace

Code cantor_pair(Code a, Code b) {
    u128 s = u128{a} + b;
    u128 t = s * (s + 1);  // < 2^130 would overflow only for s >= 2^64
    if (s >= (u128{1} << 64)) return kCodeOverflow;
    return saturate(t / 2 + b);
}

std::pair<Code, Code> cantor_unpair(Code n) {
    u128 m8 = u128{n} * 8 + 1;
    Code w = (isqrt(m8) - 1) / 2;
    while (u128{w + 1} * (w + 2) / 2 <= n) ++w;
    while (u128{w} * (w + 1) / 2 > n) --w;
    Code t = static_cast<Code>(u128{w} * (w + 1) / 2);
    Code y = n - t;
    return {w - y, y};
}

GString::GString(std::initializer_list<Nat> xs) : GString(std::vector<Nat>(xs)) {}

GString::GString(std::vector<Nat> xs) : entries_(std::move(xs)) {
    Code c = 0;
    for (Nat x : entries_) c = extend_code(c, x);
    code_ = c;
}

GString GString::child(Nat x) const {
    GString out;
    out.entries_ = entries_;
    out.entries_.push_back(x);
    out.code_ = extend_code(code_, x);
    return out;
}

GString GString::prefix(std::size_t n) const {
    if (n >= entries_.size()) return *this;
    return GString(std::vector<Nat>(entries_.begin(), entries_.begin() + static_cast<std::ptrdiff_t>(n)));
}

Code encode(const GString& s) { return s.code(); }

GString decode(Code n) {
    if (n == kCodeOverflow) throw std::invalid_argument("decode: saturated code");
    std::vector<Nat> rev;
    while (n != 0) {
        auto [a, x] = cantor_unpair(n - 1);
        rev.push_back(x);
        n = a;
    }
    std::reverse(rev.begin(), rev.end());
    return GString(std::move(rev));
}

GString meet(const GString& a, const GString& b) {
    std::size_t n = std::min(a.size(), b.size());
    std::size_t i = 0;
    while (i < n && a[i] == b[i]) ++i;
    return a.prefix(i);
}

bool extends(const GString& longer, const GString& shorter) {
    if (shorter.size() > longer.size()) return false;
    return std::equal(shorter.entries().begin(), shorter.entries().end(), longer.entries().begin());
}

bool proper_extends(const GString& longer, const GString& shorter) {
    return longer.size() > shorter.size() && extends(longer, shorter);
}

bool compatible(const GString& a, const GString& b) { return extends(a, b) || extends(b, a); }

bool incompatible(const GString& a, const GString& b) { return !compatible(a, b); }

bool left_of(const GString& a, const GString& b) {
    std::size_t n = std::min(a.size(), b.size());
    for (std::size_t i = 0; i < n; ++i) {
        if (a[i] != b[i]) return a[i] < b[i];
    }
    return false;
}

GString concat(const GString& a, const GString& b) {
    GString out = a;
    for (Nat x : b.entries()) out = out.child(x);
    return out;
}

GString predecessor(const GString& s) {
    if (s.empty()) throw std::invalid_argument("predecessor of the empty string");
    return s.prefix(s.size() - 1);
}

bool code_less(const GString& a, const GString& b) {
    if (a.code() != b.code()) return a.code() < b.code();
    return a < b;
}

std::string to_string(const GString& s) {
    std::string out = "⟨";
    for (std::size_t i = 0; i < s.size(); ++i) {
        if (i) out += ',';
        out += std::to_string(s[i]);
    }
    out += "⟩";
    return out;
}

std::optional<GString> parse_gstring(std::string_view t) {
    auto strip = [](std::string_view v) {
        while (!v.empty() && std::isspace(static_cast<unsigned char>(v.front()))) v.remove_prefix(1);
        while (!v.empty() && std::isspace(static_cast<unsigned char>(v.back()))) v.remove_suffix(1);
        return v;
    };
    t = strip(t);
    static constexpr std::string_view kOpen = "⟨", kClose = "⟩";
    if (t.size() >= kOpen.size() + kClose.size() && t.substr(0, kOpen.size()) == kOpen &&
        t.substr(t.size() - kClose.size()) == kClose) {
        t = t.substr(kOpen.size(), t.size() - kOpen.size() - kClose.size());
    } else if (t.size() >= 2 && t.front() == '<' && t.back() == '>') {
        t = t.substr(1, t.size() - 2);
    } else {
        return std::nullopt;
    }
    t = strip(t);
    std::vector<Nat> xs;
    if (t.empty()) return GString{};
    std::size_t pos = 0;
    while (pos <= t.size()) {
        std::size_t comma = t.find(',', pos);
        std::string_view piece = strip(t.substr(pos, comma == std::string_view::npos ? t.npos : comma - pos));
        if (piece.empty()) return std::nullopt;
        Nat v = 0;
        for (char c : piece) {
            if (!std::isdigit(static_cast<unsigned char>(c))) return std::nullopt;
            v = v * 10 + static_cast<Nat>(c - '0');
        }
        xs.push_back(v);
        if (comma == std::string_view::npos) break;
        pos = comma + 1;
    }
    return GString(std::move(xs));
}

std::size_t GStringHash::operator()(const GString& s) const noexcept {
    std::size_t h = 1469598103934665603ull;
    for (Nat x : s.entries()) {
        h ^= std::hash<Nat>{}(x) + 0x9e3779b97f4a7c15ull + (h << 6) + (h >> 2);
    }
    return h ^ s.size();
}

}  // namespace treepull
