#include "hexwalk/cyclo.hpp"

#include <mpfr.h>

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <vector>

#include "hexwalk/errors.hpp"

namespace hexwalk {

namespace {

constexpr int kN = CycNum::kDegree;

long pmod(long a, long n) {
    long r = a % n;
    return r < 0 ? r + n : r;
}

using QPoly = std::vector<mpq_class>;

void trim(QPoly& p) {
    while (!p.empty() && p.back() == 0) p.pop_back();
}

QPoly cyclotomic48() {
    QPoly p(kN + 1, mpq_class(0));
    p[0] = 1;
    p[8] = -1;
    p[16] = 1;
    return p;
}

// Quotient and remainder of a / b over Q; b nonzero and trimmed.
std::pair<QPoly, QPoly> divmod(QPoly a, const QPoly& b) {
    trim(a);
    QPoly q;
    if (a.size() < b.size()) return {q, a};
    q.assign(a.size() - b.size() + 1, mpq_class(0));
    const mpq_class& lead = b.back();
    while (!a.empty() && a.size() >= b.size()) {
        const std::size_t shift = a.size() - b.size();
        mpq_class factor = a.back() / lead;
        q[shift] = factor;
        for (std::size_t i = 0; i < b.size(); ++i) a[i + shift] -= factor * b[i];
        a.back() = 0;
        trim(a);
    }
    return {q, a};
}

QPoly mul(const QPoly& a, const QPoly& b) {
    if (a.empty() || b.empty()) return {};
    QPoly r(a.size() + b.size() - 1, mpq_class(0));
    for (std::size_t i = 0; i < a.size(); ++i)
        for (std::size_t j = 0; j < b.size(); ++j) r[i + j] += a[i] * b[j];
    trim(r);
    return r;
}

QPoly sub(QPoly a, const QPoly& b) {
    if (a.size() < b.size()) a.resize(b.size(), mpq_class(0));
    for (std::size_t i = 0; i < b.size(); ++i) a[i] -= b[i];
    trim(a);
    return a;
}

// RAII wrapper for a single mpfr_t.
class Real {
public:
    explicit Real(mpfr_prec_t prec) { mpfr_init2(v_, prec); mpfr_set_zero(v_, 1); }
    ~Real() { mpfr_clear(v_); }
    Real(const Real&) = delete;
    Real& operator=(const Real&) = delete;
    mpfr_ptr get() { return v_; }
    mpfr_srcptr get() const { return v_; }

private:
    mpfr_t v_;
};

// Sum_j num_j * trig(j pi / 24) for trig in {cos, sin}.
void evaluate(const CycNum& a, bool imaginary, mpfr_prec_t prec, Real& out) {
    Real pi(prec), angle(prec), t(prec), term(prec), coef(prec);
    mpfr_const_pi(pi.get(), MPFR_RNDN);
    mpfr_set_zero(out.get(), 1);
    for (int j = 0; j < kN; ++j) {
        if (a.numerator(j) == 0) continue;
        mpfr_mul_si(angle.get(), pi.get(), j, MPFR_RNDN);
        mpfr_div_si(angle.get(), angle.get(), 24, MPFR_RNDN);
        if (imaginary)
            mpfr_sin(t.get(), angle.get(), MPFR_RNDN);
        else
            mpfr_cos(t.get(), angle.get(), MPFR_RNDN);
        mpfr_set_z(coef.get(), a.numerator(j).get_mpz_t(), MPFR_RNDN);
        mpfr_mul(term.get(), t.get(), coef.get(), MPFR_RNDN);
        mpfr_add(out.get(), out.get(), term.get(), MPFR_RNDN);
    }
}

// Bits needed for sum_j |num_j|.
long magnitude_bits(const CycNum& a) {
    mpz_class total = 0;
    for (int j = 0; j < kN; ++j) total += abs(a.numerator(j));
    return total == 0 ? 1 : static_cast<long>(mpz_sizeinbase(total.get_mpz_t(), 2));
}

std::string format_fixed(const Real& v, int digits) {
    char* buf = nullptr;
    mpfr_asprintf(&buf, "%.*RNf", digits, v.get());
    std::string s(buf);
    mpfr_free_str(buf);
    if (!s.empty() && s[0] == '-' && s.find_first_not_of("-0.") == std::string::npos) s.erase(0, 1);
    return s;
}

} // namespace

CycNum::CycNum() = default;

CycNum::CycNum(long value) { num_[0] = value; }

CycNum::CycNum(const mpq_class& value) {
    num_[0] = value.get_num();
    den_ = value.get_den();
    canonicalize();
}

void CycNum::canonicalize() {
    if (den_ == 0) throw std::domain_error("zero denominator");
    if (den_ < 0) {
        den_ = -den_;
        for (auto& c : num_) c = -c;
    }
    mpz_class g = den_;
    bool all_zero = true;
    for (const auto& c : num_) {
        if (c != 0) all_zero = false;
        mpz_gcd(g.get_mpz_t(), g.get_mpz_t(), c.get_mpz_t());
    }
    if (all_zero) {
        den_ = 1;
        return;
    }
    if (g != 1) {
        for (auto& c : num_) mpz_divexact(c.get_mpz_t(), c.get_mpz_t(), g.get_mpz_t());
        mpz_divexact(den_.get_mpz_t(), den_.get_mpz_t(), g.get_mpz_t());
    }
}

void CycNum::reduce_product(std::array<mpz_class, 2 * kDegree - 1>& wide) {
    // z^16 = z^8 - 1
    for (int d = 2 * kN - 2; d >= kN; --d) {
        auto& c = wide[static_cast<std::size_t>(d)];
        if (c == 0) continue;
        wide[static_cast<std::size_t>(d - 8)] += c;
        wide[static_cast<std::size_t>(d - 16)] -= c;
        c = 0;
    }
    for (int j = 0; j < kN; ++j) num_[static_cast<std::size_t>(j)] = wide[static_cast<std::size_t>(j)];
}

CycNum CycNum::zeta_pow(long e) { return CycNum(1).times_zeta_pow(e); }

mpq_class CycNum::coeff(int j) const {
    if (j < 0 || j >= kN) throw ContractError("coefficient index out of range");
    mpq_class q(num_[static_cast<std::size_t>(j)], den_);
    q.canonicalize();
    return q;
}

bool CycNum::is_zero() const {
    return std::all_of(num_.begin(), num_.end(), [](const mpz_class& c) { return c == 0; });
}

bool CycNum::is_rational() const {
    return std::all_of(num_.begin() + 1, num_.end(), [](const mpz_class& c) { return c == 0; });
}

CycNum& CycNum::operator+=(const CycNum& o) {
    if (den_ == o.den_) {
        for (int j = 0; j < kN; ++j) num_[static_cast<std::size_t>(j)] += o.num_[static_cast<std::size_t>(j)];
    } else {
        for (int j = 0; j < kN; ++j) {
            auto& c = num_[static_cast<std::size_t>(j)];
            c = c * o.den_ + o.num_[static_cast<std::size_t>(j)] * den_;
        }
        den_ *= o.den_;
    }
    canonicalize();
    return *this;
}

CycNum& CycNum::operator-=(const CycNum& o) { return *this += -o; }

CycNum CycNum::operator-() const {
    CycNum r = *this;
    for (auto& c : r.num_) c = -c;
    return r;
}

CycNum& CycNum::operator*=(const CycNum& o) {
    std::array<mpz_class, 2 * kDegree - 1> wide{};
    for (int i = 0; i < kN; ++i) {
        const auto& a = num_[static_cast<std::size_t>(i)];
        if (a == 0) continue;
        for (int j = 0; j < kN; ++j) {
            const auto& b = o.num_[static_cast<std::size_t>(j)];
            if (b != 0) wide[static_cast<std::size_t>(i + j)] += a * b;
        }
    }
    reduce_product(wide);
    den_ *= o.den_;
    canonicalize();
    return *this;
}

CycNum& CycNum::operator/=(const CycNum& o) { return *this *= o.inverse(); }

CycNum& CycNum::operator*=(const mpz_class& s) {
    for (auto& c : num_) c *= s;
    canonicalize();
    return *this;
}

CycNum& CycNum::operator*=(const mpq_class& s) {
    for (auto& c : num_) c *= s.get_num();
    den_ *= s.get_den();
    canonicalize();
    return *this;
}

bool operator==(const CycNum& a, const CycNum& b) { return a.den_ == b.den_ && a.num_ == b.num_; }

CycNum CycNum::inverse() const {
    if (is_zero()) throw std::domain_error("inverse of zero in Q(zeta_48)");
    QPoly r0 = cyclotomic48();
    QPoly r1(kN);
    for (int j = 0; j < kN; ++j) r1[static_cast<std::size_t>(j)] = coeff(j);
    trim(r1);
    QPoly s0, s1{mpq_class(1)};
    while (!r1.empty()) {
        auto [q, r] = divmod(r0, r1);
        QPoly s2 = sub(s0, mul(q, s1));
        r0 = std::move(r1);
        r1 = std::move(r);
        s0 = std::move(s1);
        s1 = std::move(s2);
    }
    // Phi_48 is irreducible, so the last nonzero remainder is a constant.
    if (r0.size() != 1) throw std::logic_error("gcd with Phi_48 is not constant");
    s0 = divmod(s0, cyclotomic48()).second;
    CycNum out;
    mpz_class den = 1;
    for (const auto& c : s0) mpz_lcm(den.get_mpz_t(), den.get_mpz_t(), mpq_class(c / r0[0]).get_den_mpz_t());
    for (std::size_t j = 0; j < s0.size(); ++j) {
        mpq_class c = s0[j] / r0[0];
        out.num_[j] = c.get_num() * (den / c.get_den());
    }
    out.den_ = den;
    out.canonicalize();
    return out;
}

CycNum CycNum::times_zeta_pow(long e) const {
    CycNum r = *this;
    for (long step = 0; step < pmod(e, kOrder); ++step) {
        mpz_class top = r.num_[kN - 1];
        for (int j = kN - 1; j > 0; --j) r.num_[static_cast<std::size_t>(j)] = r.num_[static_cast<std::size_t>(j - 1)];
        r.num_[0] = 0;
        if (top != 0) {
            r.num_[8] += top;
            r.num_[0] -= top;
        }
    }
    r.canonicalize();
    return r;
}

CycNum CycNum::pow(long n) const {
    if (n < 0) return inverse().pow(-n);
    CycNum result(1), base = *this;
    while (n > 0) {
        if (n & 1) result *= base;
        n >>= 1;
        if (n > 0) base *= base;
    }
    return result;
}

CycNum CycNum::conj() const {
    CycNum out;
    for (int j = 0; j < kN; ++j) {
        const auto& c = num_[static_cast<std::size_t>(j)];
        if (c == 0) continue;
        CycNum term = zeta_pow(-j);
        term *= c;
        out += term;
    }
    // `out` holds integer numerators; restore the denominator.
    CycNum scaled;
    scaled.num_ = out.num_;
    scaled.den_ = den_;
    scaled.canonicalize();
    return scaled;
}

CycNum constant(Constant c) {
    const CycNum half(mpq_class(1, 2));
    switch (c) {
    case Constant::CosPi8: return (CycNum::zeta_pow(3) + CycNum::zeta_pow(-3)) * half;
    case Constant::Cos3Pi8: return (CycNum::zeta_pow(9) + CycNum::zeta_pow(-9)) * half;
    case Constant::CosPi4: return (CycNum::zeta_pow(6) + CycNum::zeta_pow(-6)) * half;
    case Constant::Sqrt2: return CycNum::zeta_pow(6) + CycNum::zeta_pow(-6);
    case Constant::Sqrt3: return CycNum::zeta_pow(4) + CycNum::zeta_pow(-4);
    case Constant::ImagUnit: return CycNum::zeta_pow(12);
    case Constant::Mu: return CycNum::zeta_pow(3) + CycNum::zeta_pow(-3);
    case Constant::Xc: return constant(Constant::Mu).inverse();
    }
    throw ContractError("unknown constant");
}

CycNum constant(std::string_view name) {
    if (name == "x_c") return constant(Constant::Xc);
    if (name == "mu") return constant(Constant::Mu);
    if (name == "cos_pi_8") return constant(Constant::CosPi8);
    if (name == "cos_3pi_8") return constant(Constant::Cos3Pi8);
    if (name == "cos_pi_4") return constant(Constant::CosPi4);
    if (name == "sqrt2") return constant(Constant::Sqrt2);
    if (name == "sqrt3") return constant(Constant::Sqrt3);
    if (name == "imag_unit") return constant(Constant::ImagUnit);
    throw ContractError("unknown constant '" + std::string(name) + "'");
}

CycNum winding_phase(long w) { return winding_phase(w, 5); }

CycNum winding_phase(long w, long sigma_eighths) { return CycNum::zeta_pow(-pmod(sigma_eighths * pmod(w, 48), 48)); }

CycNum real_part(const CycNum& a) { return (a + a.conj()) * CycNum(mpq_class(1, 2)); }

CycNum imag_part_times_i(const CycNum& a) { return (a - a.conj()) * CycNum(mpq_class(1, 2)); }

bool is_real(const CycNum& a) { return a == a.conj(); }

int real_sign(const CycNum& a) {
    const CycNum re = real_part(a);
    if (re.is_zero()) return 0;
    const long mag = magnitude_bits(re);
    for (mpfr_prec_t prec = 128; prec <= (1L << 20); prec *= 2) {
        Real value(prec);
        evaluate(re, false, prec, value);
        // Each of at most 16 terms carries error below 4 ulp of |num_j|;
        // the running sum adds at most one ulp of the total per step.
        Real bound(prec);
        mpfr_set_ui_2exp(bound.get(), 1, mag + 7 - static_cast<long>(prec), MPFR_RNDU);
        Real absval(prec);
        mpfr_abs(absval.get(), value.get(), MPFR_RNDN);
        if (mpfr_cmp(absval.get(), bound.get()) > 0) return mpfr_sgn(value.get());
    }
    throw std::runtime_error("real_sign: precision limit reached");
}

int compare_real(const CycNum& a, const CycNum& b) { return real_sign(a - b); }

std::pair<std::string, std::string> approximate(const CycNum& a, int digits) {
    if (digits < 1) throw ContractError("digits must be positive");
    const long den_bits = static_cast<long>(mpz_sizeinbase(a.denominator().get_mpz_t(), 2));
    long prec = magnitude_bits(a) - den_bits + static_cast<long>(std::ceil(digits * 3.3219280948873622)) + 16;
    prec = std::max(prec, 64L);
    Real re(prec), im(prec), den(prec);
    evaluate(a, false, prec, re);
    evaluate(a, true, prec, im);
    mpfr_set_z(den.get(), a.denominator().get_mpz_t(), MPFR_RNDN);
    mpfr_div(re.get(), re.get(), den.get(), MPFR_RNDN);
    mpfr_div(im.get(), im.get(), den.get(), MPFR_RNDN);
    return {format_fixed(re, digits), format_fixed(im, digits)};
}

double to_double_real(const CycNum& a) { return std::stod(approximate(a, 17).first); }

CycNum parse_rational(std::string_view text) {
    mpq_class q;
    if (text.empty() || q.set_str(std::string(text), 10) != 0 || q.get_den() == 0)
        throw ContractError("not a rational number: '" + std::string(text) + "'");
    q.canonicalize();
    return CycNum(q);
}

void to_json(nlohmann::json& j, const CycNum& a) {
    j = nlohmann::json::array();
    for (int k = 0; k < CycNum::kDegree; ++k) {
        const mpq_class c = a.coeff(k);
        j.push_back(c.get_num().get_str() + "/" + c.get_den().get_str());
    }
}

void from_json(const nlohmann::json& j, CycNum& a) {
    if (!j.is_array() || j.size() != CycNum::kDegree) throw ParseError("CycNum JSON must be an array of 16 strings");
    CycNum out;
    for (int k = 0; k < CycNum::kDegree; ++k) {
        CycNum term = parse_rational(j[static_cast<std::size_t>(k)].get<std::string>());
        out += term.times_zeta_pow(k);
    }
    a = out;
}

} // namespace hexwalk
