#pragma once

// Decimal significance arithmetic: base-10 floating point values with a fixed
// significand length L and a running count f of trustworthy leading digits.
// Empirical f is measured against a high-precision shadow computation; the
// closed-form minorants bound f after addition and after cancellation.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <cstdio>
#include <cstdlib>
#include <stdexcept>
#include <string>
#include <string_view>

#include <boost/multiprecision/cpp_dec_float.hpp>

namespace volterra::sigdec {

using Shadow = boost::multiprecision::cpp_dec_float_50;

inline const Shadow& shadow_pi() {
    static const Shadow value("3.14159265358979323846264338327950288419716939937510582097");
    return value;
}

enum class Rounding { half_even, half_away };

struct RangeError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

constexpr int kMinDigits = 1;
constexpr int kMaxDigits = 18;      // significand must fit in 64 bits
constexpr int kMaxExponent = 999;   // hard limit, no gradual underflow

// Value = sign * significand * 10^(exponent - digits).  A non-zero value is
// normalized: 10^(L-1) <= M <= 10^L - 1.  Zero is (0, 0, p=0, f=0).
struct SigDecimal {
    int sign = 0;
    std::uint64_t significand = 0;
    int digits = 8;
    int exponent = 0;
    int valid = 0;
};

namespace detail {

inline std::uint64_t pow10_u64(int k) {
    std::uint64_t r = 1;
    for (int i = 0; i < k; ++i) r *= 10;
    return r;
}

inline unsigned __int128 pow10_u128(int k) {
    unsigned __int128 r = 1;
    for (int i = 0; i < k; ++i) r *= 10;
    return r;
}

inline int digit_count(unsigned __int128 a) {
    int n = 0;
    while (a > 0) {
        a /= 10;
        ++n;
    }
    return n;
}

// Round a/10^drop to an integer.  Ties resolved per mode.
inline unsigned __int128 round_scaled(unsigned __int128 a, int drop, Rounding mode) {
    if (drop <= 0) return a;
    const unsigned __int128 p = pow10_u128(drop);
    unsigned __int128 q = a / p;
    const unsigned __int128 r = a % p;
    const unsigned __int128 half = p / 2;
    if (r > half) {
        ++q;
    } else if (r == half) {
        if (mode == Rounding::half_away || (q % 2) == 1) ++q;
    }
    return q;
}

inline void check_digits(int digits) {
    if (digits < kMinDigits || digits > kMaxDigits)
        throw std::invalid_argument("sigdec: significand length out of range");
}

// Build a normalized SigDecimal from sign * mag * 10^scale.
inline SigDecimal normalize(int sign, unsigned __int128 mag, int scale, int digits,
                            Rounding mode) {
    check_digits(digits);
    if (sign == 0 || mag == 0) return SigDecimal{0, 0, digits, 0, 0};
    const int nd = digit_count(mag);
    std::uint64_t m;
    int p = scale + nd;  // exponent so that value = M * 10^(p - L)
    if (nd > digits) {
        mag = round_scaled(mag, nd - digits, mode);
        if (digit_count(mag) > digits) {  // carry out of the top digit
            mag /= 10;
            ++p;
        }
        m = static_cast<std::uint64_t>(mag);
    } else {
        m = static_cast<std::uint64_t>(mag) * pow10_u64(digits - nd);
    }
    if (p < -kMaxExponent || p > kMaxExponent)
        throw RangeError("sigdec: exponent out of range");
    return SigDecimal{sign, m, digits, p, digits};
}

struct DecimalDigits {
    int sign = 0;
    std::string digits;  // leading digit non-zero
    int exponent = 0;    // value = 0.digits * 10^(exponent+1) scientific-style:
                         // first digit has place value 10^exponent
};

// Exact digit expansion of a Shadow value (as stored, ~50 significant digits).
inline DecimalDigits shadow_digits(const Shadow& x) {
    DecimalDigits out;
    if (x.is_zero()) return out;
    out.sign = x < 0 ? -1 : 1;
    const Shadow ax = abs(x);
    const std::string s = ax.str(60, std::ios_base::scientific);
    const auto epos = s.find_first_of("eE");
    std::string mant = s.substr(0, epos);
    out.exponent = std::atoi(s.c_str() + epos + 1);
    const auto dot = mant.find('.');
    if (dot != std::string::npos) mant.erase(dot, 1);
    // strip leading zeros (should not occur in scientific form) and keep digits
    out.digits = mant;
    return out;
}

// Round a digit string to L digits.  Returns (digits, exponent bump).
inline std::pair<std::string, int> round_digit_string(const std::string& d, int L,
                                                      Rounding mode) {
    if (static_cast<int>(d.size()) <= L)
        return {d + std::string(L - d.size(), '0'), 0};
    std::string head = d.substr(0, L);
    const std::string tail = d.substr(L);
    const std::string half = "5" + std::string(tail.size() - 1, '0');
    bool up;
    if (tail > half) {
        up = true;
    } else if (tail < half) {
        up = false;
    } else {
        up = mode == Rounding::half_away || ((head.back() - '0') % 2) == 1;
    }
    int bump = 0;
    if (up) {
        int i = L - 1;
        while (i >= 0 && head[i] == '9') head[i--] = '0';
        if (i < 0) {
            head.insert(head.begin(), '1');
            head.pop_back();
            bump = 1;
        } else {
            ++head[i];
        }
    }
    return {head, bump};
}

inline std::uint64_t digits_to_u64(const std::string& d) {
    std::uint64_t v = 0;
    for (char c : d) v = v * 10 + static_cast<std::uint64_t>(c - '0');
    return v;
}

}  // namespace detail

inline SigDecimal zero(int digits) {
    detail::check_digits(digits);
    return SigDecimal{0, 0, digits, 0, 0};
}

inline bool is_zero(const SigDecimal& x) { return x.sign == 0; }

// Nearest L-digit decimal of a shadow value; f starts at L (exact input).
inline SigDecimal from_shadow(const Shadow& x, int digits,
                              Rounding mode = Rounding::half_even) {
    detail::check_digits(digits);
    if (x.is_zero()) return zero(digits);
    const detail::DecimalDigits dd = detail::shadow_digits(x);
    auto [head, bump] = detail::round_digit_string(dd.digits, digits, mode);
    const std::uint64_t m = detail::digits_to_u64(head);
    const int p = dd.exponent + bump + 1;  // first digit place value 10^(p-1)
    if (p < -kMaxExponent || p > kMaxExponent)
        throw RangeError("sigdec: exponent out of range");
    return SigDecimal{dd.sign, m, digits, p, digits};
}

inline SigDecimal from_real(double x, int digits, Rounding mode = Rounding::half_even) {
    if (!std::isfinite(x)) throw std::domain_error("sigdec: non-finite input");
    return from_shadow(Shadow(x), digits, mode);
}

inline SigDecimal from_int(std::int64_t v, int digits, Rounding mode = Rounding::half_even) {
    detail::check_digits(digits);
    if (v == 0) return zero(digits);
    const int sign = v < 0 ? -1 : 1;
    const unsigned __int128 mag =
        static_cast<unsigned __int128>(sign < 0 ? -static_cast<__int128>(v) : v);
    return detail::normalize(sign, mag, 0, digits, mode);
}

inline Shadow to_shadow(const SigDecimal& x) {
    if (x.sign == 0) return Shadow(0);
    Shadow v(x.significand);
    v *= pow(Shadow(10), x.exponent - x.digits);
    return x.sign < 0 ? Shadow(-v) : v;
}

inline double to_double(const SigDecimal& x) {
    if (x.sign == 0) return 0.0;
    return static_cast<double>(x.sign) * static_cast<double>(x.significand) *
           std::pow(10.0, x.exponent - x.digits);
}

inline SigDecimal negate(SigDecimal x) {
    x.sign = -x.sign;
    return x;
}

// Guaranteed valid-digit count after adding two same-sign terms; the operand
// pair is reordered so p1 >= p2.  Works entirely in integers: the fractional
// correction lg(1 + 10^e) with integer e always lies in (0,1) after factoring
// out max(0,e), so the floor collapses to f1 - 1 - max(0, e).
inline int estimate_f_sum(int p1, int f1, int p2, int f2) {
    if (p1 < p2) {
        std::swap(p1, p2);
        std::swap(f1, f2);
    }
    const int e = -p1 + f1 + p2 - f2;
    return f1 - 1 - std::max(0, e);
}

// Guaranteed valid-digit count after a cancellation-prone subtraction of two
// values sharing an exponent.  gap = |M4 - M3| + 1; zero when the surviving
// digits cannot carry information.
inline int estimate_f_diff(std::uint64_t m3, int f3, std::uint64_t m4, int f4,
                           int digits) {
    const std::uint64_t gap = (m4 > m3 ? m4 - m3 : m3 - m4) + 1;
    const int fmin = std::min(f3, f4);
    const int guard = digits - fmin;
    if (guard >= 0 && guard <= 19 && gap <= detail::pow10_u64(std::min(guard, 19)))
        return 0;
    if (guard > 19) return 0;
    const int nd = detail::digit_count(gap);
    const int v = fmin - digits + nd - 1;
    return v <= 0 ? 0 : v;
}

// Compare the significand of `value` against the truncated digit expansion of
// the shadow; f is the length of the common leading run, 0 when the decimal
// exponents (or signs) disagree.  A zero result carries no valid digits.
inline int track_valid_digits(const SigDecimal& value, const Shadow& shadow) {
    if (value.sign == 0 || shadow.is_zero()) return 0;
    const detail::DecimalDigits sd = detail::shadow_digits(shadow);
    if (sd.sign != value.sign) return 0;
    if (sd.exponent != value.exponent - 1) return 0;
    std::string vd = std::to_string(value.significand);
    vd.insert(vd.begin(), value.digits - vd.size(), '0');
    int f = 0;
    for (int i = 0; i < value.digits; ++i) {
        const char truth = i < static_cast<int>(sd.digits.size()) ? sd.digits[i] : '0';
        if (vd[i] != truth) break;
        ++f;
    }
    return f;
}

namespace detail {

inline int propagate_f(const SigDecimal& a, const SigDecimal& b, const SigDecimal& result) {
    if (result.sign == 0) return 0;
    int f;
    if (a.sign == b.sign) {
        f = estimate_f_sum(a.exponent, a.valid, b.exponent, b.valid);
    } else if (a.exponent == b.exponent) {
        f = estimate_f_diff(a.significand, a.valid, b.significand, b.valid, a.digits);
        // renormalization may shift the surviving digits left
        f = std::min(f, result.digits);
    } else {
        // mixed-sign operands with distinct exponents: first doubtful place wins
        const int ua = a.exponent - a.valid;
        const int ub = b.exponent - b.valid;
        f = result.exponent - std::max(ua, ub);
    }
    return std::clamp(f, 0, result.digits);
}

}  // namespace detail

// round_L(a + b): exact integer addition of aligned significands, one final
// rounding.  f is set from the closed-form minorants; use Tracked for the
// empirically measured count.
inline SigDecimal add(const SigDecimal& a, const SigDecimal& b,
                      Rounding mode = Rounding::half_even) {
    if (a.digits != b.digits)
        throw std::invalid_argument("sigdec: mixed significand lengths");
    if (a.sign == 0) return b;
    if (b.sign == 0) return a;
    const SigDecimal& hi = a.exponent >= b.exponent ? a : b;
    const SigDecimal& lo = a.exponent >= b.exponent ? b : a;
    const int d = hi.exponent - lo.exponent;
    SigDecimal result;
    if (d >= hi.digits + 2) {
        // the smaller operand lies beyond any rounding influence
        result = hi;
    } else {
        const __int128 s =
            static_cast<__int128>(hi.sign) * static_cast<__int128>(hi.significand) *
                static_cast<__int128>(detail::pow10_u128(d)) +
            static_cast<__int128>(lo.sign) * static_cast<__int128>(lo.significand);
        if (s == 0) return zero(a.digits);
        const int sign = s < 0 ? -1 : 1;
        const unsigned __int128 mag = static_cast<unsigned __int128>(sign < 0 ? -s : s);
        result = detail::normalize(sign, mag, lo.exponent - lo.digits, a.digits, mode);
    }
    result.valid = detail::propagate_f(a, b, result);
    return result;
}

inline SigDecimal sub(const SigDecimal& a, const SigDecimal& b,
                      Rounding mode = Rounding::half_even) {
    return add(a, negate(b), mode);
}

// round_L(a * b); bookkeeping only (the significance model covers sums and
// differences, not products), so f is the conservative min of the inputs.
inline SigDecimal mul(const SigDecimal& a, const SigDecimal& b,
                      Rounding mode = Rounding::half_even) {
    if (a.digits != b.digits)
        throw std::invalid_argument("sigdec: mixed significand lengths");
    if (a.sign == 0 || b.sign == 0) return zero(a.digits);
    const unsigned __int128 mag =
        static_cast<unsigned __int128>(a.significand) *
        static_cast<unsigned __int128>(b.significand);
    SigDecimal result = detail::normalize(
        a.sign * b.sign, mag, a.exponent - a.digits + b.exponent - b.digits,
        a.digits, mode);
    result.valid = std::clamp(std::min(a.valid, b.valid), 0, result.digits);
    return result;
}

inline SigDecimal mul_int(const SigDecimal& a, std::int64_t k,
                          Rounding mode = Rounding::half_even) {
    return mul(a, from_int(k, a.digits, mode), mode);
}

// --- shadow-paired values (empirical digit tracking) -----------------------

// Shadow precision used to measure f; defaults to twice the working length.
struct ShadowContext {
    int shadow_digits;

    explicit ShadowContext(int working_digits, int shadow_digits_ = 0)
        : shadow_digits(shadow_digits_ > 0 ? shadow_digits_ : 2 * working_digits) {
        if (shadow_digits < working_digits + 4)
            throw std::invalid_argument("sigdec: shadow precision too close to working precision");
        if (shadow_digits > 50)
            throw std::invalid_argument("sigdec: shadow precision beyond backing type");
    }

    Shadow round(const Shadow& x) const {
        if (x.is_zero()) return x;
        const detail::DecimalDigits dd = detail::shadow_digits(x);
        auto [head, bump] = detail::round_digit_string(dd.digits, shadow_digits,
                                                       Rounding::half_even);
        Shadow v(head);
        v *= pow(Shadow(10), dd.exponent + bump - (shadow_digits - 1));
        return dd.sign < 0 ? Shadow(-v) : v;
    }
};

struct Tracked {
    SigDecimal value;
    Shadow shadow;
};

inline Tracked make_tracked(const Shadow& x, int digits, const ShadowContext& ctx,
                            Rounding mode = Rounding::half_even) {
    Tracked t{from_shadow(x, digits, mode), ctx.round(x)};
    t.value.valid = track_valid_digits(t.value, t.shadow);
    return t;
}

inline Tracked add(const Tracked& a, const Tracked& b, const ShadowContext& ctx,
                   Rounding mode = Rounding::half_even) {
    Tracked t{add(a.value, b.value, mode), ctx.round(a.shadow + b.shadow)};
    t.value.valid = track_valid_digits(t.value, t.shadow);
    return t;
}

inline Tracked sub(const Tracked& a, const Tracked& b, const ShadowContext& ctx,
                   Rounding mode = Rounding::half_even) {
    Tracked t{sub(a.value, b.value, mode), ctx.round(a.shadow - b.shadow)};
    t.value.valid = track_valid_digits(t.value, t.shadow);
    return t;
}

// --- text form --------------------------------------------------------------

// `+18652239e2 (f=6, L=8)`
inline std::string to_string(const SigDecimal& x) {
    std::string m = std::to_string(x.significand);
    m.insert(m.begin(), x.digits - m.size(), '0');
    std::string out;
    out += x.sign < 0 ? '-' : '+';
    out += m;
    out += 'e';
    out += std::to_string(x.exponent);
    out += " (f=" + std::to_string(x.valid) + ", L=" + std::to_string(x.digits) + ")";
    return out;
}

// Significand digits rendered at a fixed exponent, leading zeros kept; the
// form used for heavily cancelled differences.
inline std::string render_digits_at(const SigDecimal& x, int exponent) {
    if (x.sign == 0) return std::string(x.digits, '0');
    const int shift = exponent - x.exponent;
    if (shift < 0) throw std::invalid_argument("sigdec: rendering exponent below value");
    std::string m = std::to_string(x.significand);
    m.insert(m.begin(), x.digits - m.size(), '0');
    m.insert(m.begin(), shift, '0');
    // round away the shifted-out tail
    auto [head, bump] = detail::round_digit_string(m, x.digits, Rounding::half_even);
    (void)bump;
    return head;
}

inline SigDecimal parse(std::string_view text) {
    const auto fail = [] { throw std::invalid_argument("sigdec: malformed text form"); };
    if (text.size() < 4) fail();
    int sign = 1;
    if (text[0] == '-') sign = -1;
    else if (text[0] != '+') fail();
    text.remove_prefix(1);
    const auto e = text.find('e');
    if (e == std::string_view::npos) fail();
    const std::string mstr(text.substr(0, e));
    if (mstr.empty() || mstr.find_first_not_of("0123456789") != std::string::npos) fail();
    text.remove_prefix(e + 1);
    const auto sp = text.find(' ');
    if (sp == std::string_view::npos) fail();
    const int p = std::atoi(std::string(text.substr(0, sp)).c_str());
    text.remove_prefix(sp);
    int f = 0, L = 0;
    if (std::sscanf(std::string(text).c_str(), " (f=%d, L=%d)", &f, &L) != 2) fail();
    if (static_cast<int>(mstr.size()) != L) fail();
    detail::check_digits(L);
    const std::uint64_t m = detail::digits_to_u64(mstr);
    if (m == 0) return zero(L);
    if (m < detail::pow10_u64(L - 1)) fail();
    SigDecimal x{sign, m, L, p, std::clamp(f, 0, L)};
    return x;
}

}  // namespace volterra::sigdec
