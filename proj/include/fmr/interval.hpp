#ifndef FMR_INTERVAL_HPP
#define FMR_INTERVAL_HPP

#include <cstdint>
#include <iosfwd>
#include <limits>
#include <utility>

namespace fmr
{

// Closed real interval [lo, hi] with outward-rounded arithmetic.
//
// Besides ordinary bounded intervals the type carries two explicit
// variants: Empty (result of a disjoint intersection) and Unbounded
// (result of dividing by an interval that contains zero). Both propagate
// through arithmetic; Empty wins over Unbounded.
//
// Endpoint rounding for +, -, *, / is exact directed rounding obtained from
// error-free transformations, so results that are representable come out
// exactly (e.g. [-2,3] + [0,1] == [-2,4]).
class Interval
{
public:
    enum class kind : std::uint8_t { bounded, empty, unbounded };

    Interval() noexcept : Interval(0.0) {}
    explicit Interval(double x);
    // Throws std::invalid_argument if lo > hi or either endpoint is NaN.
    Interval(double lo, double hi);

    static Interval empty() noexcept;
    static Interval unbounded() noexcept;

    // Enclosures of pi, 2pi and pi/2.
    static Interval pi() noexcept;
    static Interval two_pi() noexcept;
    static Interval half_pi() noexcept;

    [[nodiscard]] double lo() const noexcept { return lo_; }
    [[nodiscard]] double hi() const noexcept { return hi_; }
    [[nodiscard]] kind state() const noexcept { return kind_; }
    [[nodiscard]] bool is_empty() const noexcept { return kind_ == kind::empty; }
    [[nodiscard]] bool is_unbounded() const noexcept { return kind_ == kind::unbounded; }
    [[nodiscard]] bool is_bounded() const noexcept { return kind_ == kind::bounded; }
    [[nodiscard]] bool is_point() const noexcept { return is_bounded() && lo_ == hi_; }

    friend bool operator==(const Interval &a, const Interval &b) noexcept;

    // Unchecked construction for internal use; lo <= hi must already hold.
    static Interval from_sorted(double lo, double hi) noexcept;

private:
    double lo_ = 0.0;
    double hi_ = 0.0;
    kind kind_ = kind::bounded;
};

Interval operator+(const Interval &a, const Interval &b) noexcept;
Interval operator-(const Interval &a, const Interval &b) noexcept;
Interval operator*(const Interval &a, const Interval &b) noexcept;
// Extended division: Unbounded whenever b contains zero.
Interval operator/(const Interval &a, const Interval &b) noexcept;
Interval operator-(const Interval &a) noexcept;

inline Interval operator+(const Interval &a, double b) noexcept { return a + Interval(b); }
inline Interval operator+(double a, const Interval &b) noexcept { return Interval(a) + b; }
inline Interval operator-(const Interval &a, double b) noexcept { return a - Interval(b); }
inline Interval operator-(double a, const Interval &b) noexcept { return Interval(a) - b; }
inline Interval operator*(const Interval &a, double b) noexcept { return a * Interval(b); }
inline Interval operator*(double a, const Interval &b) noexcept { return Interval(a) * b; }
inline Interval operator/(const Interval &a, double b) noexcept { return a / Interval(b); }
inline Interval operator/(double a, const Interval &b) noexcept { return Interval(a) / b; }

inline Interval add(const Interval &a, const Interval &b) noexcept { return a + b; }
inline Interval sub(const Interval &a, const Interval &b) noexcept { return a - b; }
inline Interval mul(const Interval &a, const Interval &b) noexcept { return a * b; }
inline Interval div_extended(const Interval &a, const Interval &b) noexcept { return a / b; }

// Dependent square: lower bound is 0 when 0 is inside a.
Interval sqr(const Interval &a) noexcept;
// Integer power with the dependent (even power) rule.
Interval pow(const Interval &a, unsigned n) noexcept;

// Range enclosures accounting for interior extrema; subsets of [-1, 1].
// Arguments are radians and are not reduced modulo 2pi.
Interval sin(const Interval &a) noexcept;
Interval cos(const Interval &a) noexcept;

Interval hull(const Interval &a, const Interval &b) noexcept;
Interval intersect(const Interval &a, const Interval &b) noexcept;
double width(const Interval &a) noexcept;
// Throws std::domain_error for Empty or Unbounded.
double midpoint(const Interval &a);
// Splits at the midpoint. Throws std::domain_error on point, Empty or Unbounded intervals.
std::pair<Interval, Interval> bisect(const Interval &a);
bool contains(const Interval &a, double x) noexcept;
bool contains_zero(const Interval &a) noexcept;
// a is a subset of b.
bool subset(const Interval &a, const Interval &b) noexcept;
bool overlaps(const Interval &a, const Interval &b) noexcept;
// Largest absolute value in a.
double mag(const Interval &a) noexcept;

std::ostream &operator<<(std::ostream &os, const Interval &a);

} // namespace fmr

#endif
