#pragma once

#include <charconv>
#include <string>
#include <string_view>
#include <system_error>

namespace ifcnorm {

// Canonical text for a finite binary64: the shortest decimal string that
// parses back to the same bits, always containing a decimal point, exponent
// marker 'E' with no '+' sign and no leading zeros. Examples:
//   10.0 -> "10."    2.5 -> "2.5"    1e100 -> "1.E100"    2.5e-5 -> "2.5E-5"
inline std::string real_canonical_text(double v) {
    char buf[48];
    auto res = std::to_chars(buf, buf + sizeof(buf), v);  // shortest round-trip
    std::string_view s(buf, static_cast<std::size_t>(res.ptr - buf));

    std::size_t epos = s.find('e');
    std::string_view mantissa = epos == std::string_view::npos ? s : s.substr(0, epos);
    std::string_view exponent = epos == std::string_view::npos
                                    ? std::string_view{}
                                    : s.substr(epos + 1);

    std::string out;
    out.reserve(s.size() + 2);
    out += mantissa;
    if (mantissa.find('.') == std::string_view::npos) out += '.';
    if (!exponent.empty()) {
        bool negative = exponent.front() == '-';
        std::size_t i = (exponent.front() == '-' || exponent.front() == '+') ? 1 : 0;
        while (i + 1 < exponent.size() && exponent[i] == '0') ++i;
        out += 'E';
        if (negative) out += '-';
        out += exponent.substr(i);
    }
    return out;
}

enum class RealParseStatus : std::uint8_t { ok, overflow };

// Parses a real token whose shape the caller already validated. Values beyond
// binary64 range on the small side round to signed zero (strtod semantics);
// values beyond the large side report overflow.
inline RealParseStatus parse_real_token(std::string_view token, double& out) {
    auto res = std::from_chars(token.data(), token.data() + token.size(), out);
    if (res.ec == std::errc()) return RealParseStatus::ok;
    if (res.ec != std::errc::result_out_of_range) return RealParseStatus::overflow;

    // from_chars leaves `out` unspecified on range errors; classify the side
    // by the decimal magnitude of the most significant digit.
    bool negative = false;
    std::size_t i = 0;
    if (i < token.size() && (token[i] == '+' || token[i] == '-')) {
        negative = token[i] == '-';
        ++i;
    }
    long long int_digits = 0;
    bool int_nonzero = false;
    for (; i < token.size() && token[i] >= '0' && token[i] <= '9'; ++i) {
        if (int_nonzero) {
            ++int_digits;
        } else if (token[i] != '0') {
            int_nonzero = true;
            int_digits = 1;
        }
    }
    long long frac_leading_zeros = 0;
    bool frac_nonzero = false;
    if (i < token.size() && token[i] == '.') {
        ++i;
        for (; i < token.size() && token[i] >= '0' && token[i] <= '9'; ++i) {
            if (!int_nonzero && !frac_nonzero) {
                if (token[i] == '0') {
                    ++frac_leading_zeros;
                } else {
                    frac_nonzero = true;
                }
            }
        }
    }
    long long exponent = 0;
    if (i < token.size() && (token[i] == 'e' || token[i] == 'E')) {
        ++i;
        bool exp_negative = false;
        if (i < token.size() && (token[i] == '+' || token[i] == '-')) {
            exp_negative = token[i] == '-';
            ++i;
        }
        for (; i < token.size() && token[i] >= '0' && token[i] <= '9'; ++i) {
            if (exponent < 1000000000LL) exponent = exponent * 10 + (token[i] - '0');
        }
        if (exp_negative) exponent = -exponent;
    }

    long long magnitude;
    if (int_nonzero) {
        magnitude = int_digits;
    } else if (frac_nonzero) {
        magnitude = -frac_leading_zeros;
    } else {
        out = negative ? -0.0 : 0.0;  // all-zero mantissa never overflows
        return RealParseStatus::ok;
    }
    magnitude += exponent;
    if (magnitude > 0) return RealParseStatus::overflow;
    out = negative ? -0.0 : 0.0;
    return RealParseStatus::ok;
}

}  // namespace ifcnorm
