#pragma once

// Exact arithmetic in Q(zeta), zeta = exp(i pi / 24), a primitive 48th root of
// unity. Elements are stored in the power basis {1, zeta, ..., zeta^15} of
// Q[z] / Phi_48(z) with Phi_48(z) = z^16 - z^8 + 1.
//
// The field holds every constant the toolkit needs: sqrt(2), sqrt(3), i,
// cos(pi/8), the critical weight x_c = 1/sqrt(2 + sqrt(2)), and every winding
// phase exp(-i sigma W) with sigma a multiple of 1/8 and W a multiple of pi/3.

#include <array>
#include <string>
#include <string_view>
#include <utility>

#include <gmpxx.h>

#include "json.hpp"

namespace hexwalk {

class CycNum {
public:
    static constexpr int kDegree = 16;
    static constexpr int kOrder = 48;

    CycNum();
    CycNum(long value); // NOLINT(google-explicit-constructor)
    explicit CycNum(const mpq_class& value);

    /// zeta^e for any integer e.
    static CycNum zeta_pow(long e);

    /// Coefficient of zeta^j in canonical form.
    mpq_class coeff(int j) const;

    bool is_zero() const;
    bool is_rational() const;

    CycNum& operator+=(const CycNum& o);
    CycNum& operator-=(const CycNum& o);
    CycNum& operator*=(const CycNum& o);
    CycNum& operator/=(const CycNum& o);
    CycNum& operator*=(const mpz_class& s);
    CycNum& operator*=(const mpq_class& s);

    friend CycNum operator+(CycNum a, const CycNum& b) { return a += b; }
    friend CycNum operator-(CycNum a, const CycNum& b) { return a -= b; }
    friend CycNum operator*(CycNum a, const CycNum& b) { return a *= b; }
    friend CycNum operator/(CycNum a, const CycNum& b) { return a /= b; }
    CycNum operator-() const;

    friend bool operator==(const CycNum& a, const CycNum& b);

    /// Multiplicative inverse via the extended Euclidean algorithm on Q[z];
    /// throws std::domain_error on zero.
    CycNum inverse() const;

    /// Multiplication by zeta^e; a coefficient rotation plus reductions.
    CycNum times_zeta_pow(long e) const;

    /// Power with integer exponent (negative uses the inverse).
    CycNum pow(long n) const;

    /// Complex conjugation zeta -> zeta^-1.
    CycNum conj() const;

    /// Canonical form: integer numerators over one positive denominator with
    /// no common factor.
    const mpz_class& numerator(int j) const { return num_[static_cast<std::size_t>(j)]; }
    const mpz_class& denominator() const { return den_; }

private:
    void canonicalize();
    void reduce_product(std::array<mpz_class, 2 * kDegree - 1>& wide);

    std::array<mpz_class, kDegree> num_{};
    mpz_class den_{1};
};

enum class Constant { Xc, Mu, CosPi8, Cos3Pi8, CosPi4, Sqrt2, Sqrt3, ImagUnit };

CycNum constant(Constant c);

/// Looks a constant up by name ("x_c", "mu", "cos_pi_8", "cos_3pi_8",
/// "cos_pi_4", "sqrt2", "sqrt3", "imag_unit"); ContractError otherwise.
CycNum constant(std::string_view name);

/// exp(-i (5/8) w pi/3) = zeta^(-5w): the phase of a walk with winding w.
CycNum winding_phase(long w);

/// exp(-i (s/8) w pi/3) = zeta^(-s w) for sigma = s/8.
CycNum winding_phase(long w, long sigma_eighths);

CycNum real_part(const CycNum& a);
CycNum imag_part_times_i(const CycNum& a);
bool is_real(const CycNum& a);

/// Sign of Re(a): exact zero test, then certified interval evaluation with
/// precision doubling until the sign is determined.
int real_sign(const CycNum& a);

/// Sign of Re(a) - Re(b).
int compare_real(const CycNum& a, const CycNum& b);

/// Decimal strings (re, im) with absolute error below 10^-digits.
std::pair<std::string, std::string> approximate(const CycNum& a, int digits = 12);

/// Approximate real part as a double; for reports and plots only.
double to_double_real(const CycNum& a);

/// Parses "p/q" or "p" into a rational CycNum; ContractError otherwise.
CycNum parse_rational(std::string_view text);

void to_json(nlohmann::json& j, const CycNum& a);
void from_json(const nlohmann::json& j, CycNum& a);

} // namespace hexwalk
