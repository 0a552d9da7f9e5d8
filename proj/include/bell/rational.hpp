#pragma once

// Exact rational scalar type plus the handful of conversions the rest of the
// library needs: parsing/printing "p/q" strings, exact double<->rational
// moves, and tolerance-aware comparisons that work for both scalar kinds.

#include <boost/multiprecision/cpp_int.hpp>

#include <cmath>
#include <stdexcept>
#include <string>

namespace bell {

using Int = boost::multiprecision::cpp_int;
using Rat = boost::multiprecision::cpp_rational;

// Which scalar backs a table. Rational tables also keep a float view for
// reporting; the float view never feeds exact decisions.
enum class Encoding { Float64, Rational };

inline const char* encoding_name(Encoding e) {
    return e == Encoding::Rational ? "rational" : "float64";
}

inline Encoding encoding_from_name(const std::string& s) {
    if (s == "rational") return Encoding::Rational;
    if (s == "float64") return Encoding::Float64;
    throw std::invalid_argument("unknown encoding '" + s + "'");
}

// Errors are a small hierarchy so the CLI can map them onto its exit codes.
struct Error : std::runtime_error {
    using std::runtime_error::runtime_error;
};
// Malformed or out-of-contract input (bad JSON, shape mismatch, invalid table).
struct InputError : Error {
    using Error::Error;
};
// A requested enumeration or construction would exceed the strategy cap.
struct CapError : Error {
    using Error::Error;
};
// An operation's precondition is not met (e.g. determinize on a
// non-factorizable theory, correlator on non-±1 outcome values).
struct PreconditionError : Error {
    using Error::Error;
};
// A live cross-check inside the library contradicted itself; always a bug.
struct InternalInconsistency : Error {
    using Error::Error;
};

// Exact conversion: every finite double is a dyadic rational.
inline Rat rat_from_double(double x) {
    if (!std::isfinite(x)) throw InputError("non-finite value has no rational form");
    if (x == 0.0) return Rat(0);
    int exp = 0;
    double m = std::frexp(x, &exp);  // x = m * 2^exp, |m| in [0.5, 1)
    // 53 doublings make the mantissa integral.
    auto mi = Int(static_cast<long long>(std::ldexp(m, 53)));
    exp -= 53;
    Rat r(mi);
    if (exp > 0)
        r *= Rat(Int(1) << exp);
    else if (exp < 0)
        r /= Rat(Int(1) << -exp);
    return r;
}

inline double rat_to_double(const Rat& r) { return r.convert_to<double>(); }

// "p/q" or plain integer "p". Whitespace is not tolerated; signs only on p.
inline Rat rat_parse(const std::string& s) {
    auto slash = s.find('/');
    try {
        if (slash == std::string::npos) return Rat(Int(s));
        Int num(s.substr(0, slash));
        Int den(s.substr(slash + 1));
        if (den == 0) throw InputError("zero denominator in '" + s + "'");
        return Rat(num, den);
    } catch (const std::runtime_error&) {
        throw InputError("cannot parse rational '" + s + "'");
    }
}

inline std::string rat_format(const Rat& r) {
    std::string num = numerator(r).str();
    if (denominator(r) == 1) return num;
    return num + "/" + denominator(r).str();
}

// Tolerance helpers shared by the float and exact code paths. For Rat the
// tolerance is normally 0 and every test collapses to exact comparison.
template <class T>
inline T abs_of(const T& x) {
    return x < T(0) ? T(-x) : x;
}

template <class T>
inline bool close(const T& x, const T& y, const T& tol) {
    return abs_of(T(x - y)) <= tol;
}

// Is x within tol of the {0,1} endpoints?
template <class T>
inline bool extreme(const T& x, const T& tol) {
    return abs_of(x) <= tol || abs_of(T(x - T(1))) <= tol;
}

// Nearest endpoint; only meaningful when extreme(x, tol) holds.
template <class T>
inline T extreme_round(const T& x) {
    return x < T(1) / T(2) ? T(0) : T(1);
}

}  // namespace bell
