#pragma once

// Signed log-domain scalar.  Partition functions in this project span many
// hundreds of orders of magnitude (e.g. e^{-beta E} with beta*E ~ 10^4), so
// all statistical weights are carried as log|x| plus a sign and only combined
// through log-sum-exp style primitives.

#include <cmath>
#include <cstdlib>
#include <limits>
#include <span>
#include <stdexcept>
#include <vector>

namespace szilard {

struct LogWeight {
    // log_magnitude is meaningful only when sign != 0; zero() keeps -inf there so
    // accidental reads behave sanely.
    double log_magnitude = -std::numeric_limits<double>::infinity();
    int sign = 0;  // +1, -1, or 0 (exact zero)

    static LogWeight zero() { return {}; }
    static LogWeight one() { return {0.0, +1}; }

    // Value exp(lm), or -exp(lm) when s == -1.
    static LogWeight from_log(double lm, int s = +1) {
        if (s == 0 || lm == -std::numeric_limits<double>::infinity()) return zero();
        return {lm, s > 0 ? +1 : -1};
    }

    static LogWeight from_value(double v) {
        if (v == 0.0) return zero();
        return {std::log(std::abs(v)), v > 0.0 ? +1 : -1};
    }

    bool is_zero() const { return sign == 0; }
    bool positive() const { return sign > 0; }

    // Underlying value; overflows to +/-inf for huge magnitudes, which is the
    // caller's problem (prefer staying in the log domain).
    double value() const {
        if (sign == 0) return 0.0;
        return sign * std::exp(log_magnitude);
    }

    // log of a strictly positive weight; the only way logs should ever leave
    // this class.
    double log() const {
        if (sign <= 0) throw std::domain_error("LogWeight::log: weight is not positive");
        return log_magnitude;
    }

    friend LogWeight operator*(LogWeight a, LogWeight b) {
        if (a.sign == 0 || b.sign == 0) return zero();
        return {a.log_magnitude + b.log_magnitude, a.sign * b.sign};
    }

    friend LogWeight operator/(LogWeight a, LogWeight b) {
        if (b.sign == 0) throw std::domain_error("LogWeight: division by zero");
        if (a.sign == 0) return zero();
        return {a.log_magnitude - b.log_magnitude, a.sign * b.sign};
    }

    LogWeight operator-() const { return {log_magnitude, -sign}; }

    LogWeight& operator*=(LogWeight b) { return *this = *this * b; }

    friend LogWeight operator+(LogWeight a, LogWeight b);
    friend LogWeight operator-(LogWeight a, LogWeight b) { return a + (-b); }
};

namespace detail {

// log(exp(la) + exp(lb)); tolerates -inf operands (empty accumulators).
inline double log_add(double la, double lb) {
    if (la < lb) std::swap(la, lb);
    if (lb == -std::numeric_limits<double>::infinity()) return la;
    return la + std::log1p(std::exp(lb - la));
}

// log(exp(la) - exp(lb)) for la > lb; uses expm1 near cancellation where
// log1p(-exp(d)) would lose precision.
inline double log_sub(double la, double lb) {
    double d = lb - la;  // < 0
    if (d > -0.693147180559945309)  // exp(d) > 1/2: the difference is small
        return la + std::log(-std::expm1(d));
    return la + std::log1p(-std::exp(d));
}

}  // namespace detail

inline LogWeight operator+(LogWeight a, LogWeight b) {
    if (a.sign == 0) return b;
    if (b.sign == 0) return a;
    if (a.sign == b.sign) return {detail::log_add(a.log_magnitude, b.log_magnitude), a.sign};
    if (a.log_magnitude == b.log_magnitude) return LogWeight::zero();
    if (a.log_magnitude > b.log_magnitude) return {detail::log_sub(a.log_magnitude, b.log_magnitude), a.sign};
    return {detail::log_sub(b.log_magnitude, a.log_magnitude), b.sign};
}

// Sum of many signed log-domain terms.  Factors out the largest magnitude,
// then accumulates positive and negative contributions separately with
// compensated (Kahan) summation so alternating series cancel as gracefully
// as double precision allows.  Deterministic: depends only on term order.
inline LogWeight signed_log_sum(std::span<const LogWeight> terms) {
    double max_log = -std::numeric_limits<double>::infinity();
    for (const LogWeight& t : terms)
        if (t.sign != 0 && t.log_magnitude > max_log) max_log = t.log_magnitude;
    if (max_log == -std::numeric_limits<double>::infinity()) return LogWeight::zero();

    double pos = 0.0, pos_c = 0.0;  // Kahan accumulator + compensation
    double neg = 0.0, neg_c = 0.0;
    for (const LogWeight& t : terms) {
        if (t.sign == 0) continue;
        double w = std::exp(t.log_magnitude - max_log);
        if (t.sign > 0) {
            double y = w - pos_c;
            double s = pos + y;
            pos_c = (s - pos) - y;
            pos = s;
        } else {
            double y = w - neg_c;
            double s = neg + y;
            neg_c = (s - neg) - y;
            neg = s;
        }
    }
    // Difference the raw accumulators first: when pos and neg nearly cancel
    // the subtraction is exact (Sterbenz), and only then fold in the
    // compensation terms, which would otherwise be rounded away.
    double total = (pos - neg) - (pos_c - neg_c);
    if (total == 0.0) return LogWeight::zero();
    return {max_log + std::log(std::abs(total)), total > 0.0 ? +1 : -1};
}

inline LogWeight signed_log_sum(const std::vector<LogWeight>& terms) {
    return signed_log_sum(std::span<const LogWeight>(terms));
}

}  // namespace szilard
