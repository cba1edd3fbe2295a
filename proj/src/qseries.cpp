#include "moditer/qseries.hpp"

#include "moditer/errors.hpp"

#include <algorithm>
#include <cstdlib>
#include <sstream>

namespace moditer {

namespace {

int floor_div(int a, int b) {
    int q = a / b;
    if ((a % b != 0) && ((a < 0) != (b < 0))) --q;
    return q;
}

std::vector<int> nonzero_indices(const std::vector<Rational>& c) {
    std::vector<int> idx;
    for (std::size_t k = 0; k < c.size(); ++k)
        if (sgn(c[k]) != 0) idx.push_back(static_cast<int>(k));
    return idx;
}

// Prepend `k` zeros (k >= 0): same absolute precision, prefactor lowered by 24k.
QSeries lower_prefactor(const QSeries& s, int k) {
    std::vector<Rational> c(static_cast<std::size_t>(k), Rational(0));
    c.insert(c.end(), s.coeffs().begin(), s.coeffs().end());
    return QSeries(std::move(c), s.prefactor_num() - 24 * k);
}

}  // namespace

QSeries::QSeries(std::vector<Rational> coeffs, int prefactor_num)
    : prefactor_(prefactor_num), c_(std::move(coeffs)) {
    if (c_.empty()) throw DomainError("QSeries needs at least one coefficient");
}

QSeries QSeries::zero(int order) {
    if (order < 0) throw DomainError("negative order");
    return QSeries(std::vector<Rational>(static_cast<std::size_t>(order) + 1, Rational(0)));
}

QSeries QSeries::one(int order) { return monomial(0, order); }

QSeries QSeries::monomial(int k, int order, Rational c) {
    if (k < 0 || k > order) throw DomainError("monomial exponent outside [0, order]");
    auto s = zero(order);
    s.c_[static_cast<std::size_t>(k)] = std::move(c);
    return s;
}

int QSeries::valuation() const {
    for (std::size_t k = 0; k < c_.size(); ++k)
        if (sgn(c_[k]) != 0) return static_cast<int>(k);
    return -1;
}

QSeries QSeries::stripped() const {
    const int v = valuation();
    if (v <= 0) return *this;
    return QSeries(std::vector<Rational>(c_.begin() + v, c_.end()), prefactor_ + 24 * v);
}

QSeries QSeries::canonical() const {
    if (is_zero()) {
        const int k = floor_div(prefactor_, 24);
        if (k >= 0) return lower_prefactor(*this, k);
        const int drop = std::min(-k, order());
        return QSeries(std::vector<Rational>(c_.begin() + drop, c_.end()), prefactor_ + 24 * drop);
    }
    QSeries s = stripped();
    const int k = floor_div(s.prefactor_, 24);
    if (k > 0) return lower_prefactor(s, k);
    return s;
}

QSeries QSeries::truncated(int order) const {
    if (order < 0) throw DomainError("negative order");
    if (order >= this->order()) return *this;
    return QSeries(std::vector<Rational>(c_.begin(), c_.begin() + order + 1), prefactor_);
}

QSeries QSeries::substitute(int l) const {
    if (l < 1) throw DomainError("substitution q -> q^l needs l >= 1");
    auto out = zero(order());
    for (int k = 0; static_cast<long>(k) * l <= order(); ++k) out.c_[static_cast<std::size_t>(k * l)] = c_[k];
    out.prefactor_ = prefactor_ * l;
    return out;
}

QSeries QSeries::operator-() const {
    QSeries out = *this;
    for (auto& x : out.c_) x = -x;
    return out;
}

QSeries& QSeries::operator+=(const QSeries& rhs) {
    QSeries a = canonical();
    QSeries b = rhs.canonical();
    if ((a.prefactor_ - b.prefactor_) % 24 != 0)
        throw DomainError("cannot add q-series whose prefactors differ by a fractional power of q");
    const int p = std::min(a.prefactor_, b.prefactor_);
    a = lower_prefactor(a, (a.prefactor_ - p) / 24);
    b = lower_prefactor(b, (b.prefactor_ - p) / 24);
    const int M = std::min(a.order(), b.order());
    std::vector<Rational> c(static_cast<std::size_t>(M) + 1);
    for (int k = 0; k <= M; ++k) c[k] = a.c_[k] + b.c_[k];
    *this = QSeries(std::move(c), p);
    return *this;
}

QSeries& QSeries::operator-=(const QSeries& rhs) { return *this += -rhs; }

QSeries& QSeries::operator*=(const Rational& c) {
    for (auto& x : c_) x *= c;
    return *this;
}

QSeries& QSeries::operator*=(const QSeries& rhs) {
    const QSeries a = stripped();
    const QSeries b = rhs.stripped();
    const int M = std::min(a.order(), b.order());
    std::vector<Rational> c(static_cast<std::size_t>(M) + 1, Rational(0));
    const auto nzb = nonzero_indices(b.c_);
    for (int i = 0; i <= M; ++i) {
        if (sgn(a.c_[i]) == 0) continue;
        for (int j : nzb) {
            if (i + j > M) break;
            c[i + j] += a.c_[i] * b.c_[j];
        }
    }
    *this = QSeries(std::move(c), a.prefactor_ + b.prefactor_);
    return *this;
}

QSeries& QSeries::operator/=(const QSeries& rhs) {
    const QSeries b = rhs.stripped();
    if (b.is_zero()) throw DomainError("division by a q-series with no invertible leading coefficient");
    const QSeries a = stripped();
    const int M = std::min(a.order(), b.order());
    std::vector<Rational> r(static_cast<std::size_t>(M) + 1, Rational(0));
    const auto nzb = nonzero_indices(b.c_);
    const Rational inv_lead = 1 / b.c_[0];
    for (int k = 0; k <= M; ++k) {
        Rational acc = a.c_[k];
        for (int j : nzb) {
            if (j == 0) continue;
            if (j > k) break;
            acc -= b.c_[j] * r[k - j];
        }
        r[k] = acc * inv_lead;
    }
    *this = QSeries(std::move(r), a.prefactor_ - b.prefactor_);
    return *this;
}

QSeries QSeries::pow(long exponent) const {
    if (exponent == 0) return one(order());
    const QSeries a = stripped();
    if (a.is_zero()) {
        if (exponent < 0) throw DomainError("negative power of a q-series with no invertible leading coefficient");
        return *this;
    }
    // J.C.P. Miller recurrence: k a_0 p_k = sum_{j=1..k} ((e+1) j - k) a_j p_{k-j}.
    const int M = a.order();
    const auto nz = nonzero_indices(a.c_);
    std::vector<Rational> p(static_cast<std::size_t>(M) + 1, Rational(0));
    {
        mpq_class lead = 1;
        mpz_class num, den;
        const unsigned long e = static_cast<unsigned long>(std::labs(exponent));
        mpz_pow_ui(num.get_mpz_t(), a.c_[0].get_num_mpz_t(), e);
        mpz_pow_ui(den.get_mpz_t(), a.c_[0].get_den_mpz_t(), e);
        lead = mpq_class(num, den);
        lead.canonicalize();
        p[0] = exponent > 0 ? lead : Rational(1 / lead);
    }
    const Rational inv_lead = 1 / a.c_[0];
    for (int k = 1; k <= M; ++k) {
        Rational acc = 0;
        for (int j : nz) {
            if (j == 0) continue;
            if (j > k) break;
            acc += Rational((exponent + 1) * j - k) * a.c_[j] * p[k - j];
        }
        p[k] = acc * inv_lead / k;
    }
    return QSeries(std::move(p), static_cast<int>(a.prefactor_ * exponent));
}

bool operator==(const QSeries& lhs, const QSeries& rhs) {
    QSeries a = lhs.canonical();
    QSeries b = rhs.canonical();
    if (a.is_zero() && b.is_zero()) return true;
    if (a.prefactor_ != b.prefactor_) {
        // a zero series may sit at a different lattice point than a nonzero one
        if ((a.prefactor_ - b.prefactor_) % 24 != 0) return false;
        const int p = std::min(a.prefactor_, b.prefactor_);
        a = lower_prefactor(a, (a.prefactor_ - p) / 24);
        b = lower_prefactor(b, (b.prefactor_ - p) / 24);
    }
    const int M = std::min(a.order(), b.order());
    for (int k = 0; k <= M; ++k)
        if (a.c_[k] != b.c_[k]) return false;
    return true;
}

std::vector<double> QSeries::to_doubles() const {
    const QSeries s = canonical();
    if (s.prefactor_ != 0) {
        if (s.prefactor_ > 0 && s.prefactor_ % 24 == 0) return lower_prefactor(s, s.prefactor_ / 24).to_doubles();
        throw DomainError("q-series with fractional or negative q-power prefactor cannot be evaluated directly");
    }
    std::vector<double> out;
    out.reserve(s.c_.size());
    for (const auto& x : s.c_) out.push_back(x.get_d());
    return out;
}

std::string QSeries::to_string(int max_terms) const {
    std::ostringstream os;
    if (prefactor_ != 0) os << "q^(" << prefactor_ << "/24) * (";
    int shown = 0;
    for (int k = 0; k <= order() && shown < max_terms; ++k) {
        if (sgn(c_[k]) == 0) continue;
        if (shown > 0) os << " + ";
        os << c_[k].get_str();
        if (k == 1) os << "*q";
        if (k > 1) os << "*q^" << k;
        ++shown;
    }
    if (shown == 0) os << "0";
    os << " + O(q^" << order() + 1 << ")";
    if (prefactor_ != 0) os << ")";
    return os.str();
}

QSeries series_arith(const QSeries& lhs, const QSeries& rhs, SeriesOp op, long exponent) {
    switch (op) {
        case SeriesOp::Add: return lhs + rhs;
        case SeriesOp::Sub: return lhs - rhs;
        case SeriesOp::Mul: return lhs * rhs;
        case SeriesOp::Div: return lhs / rhs;
        case SeriesOp::Pow: return lhs.pow(exponent);
    }
    throw DomainError("unknown series operation");
}

Rational bernoulli(int k) {
    if (k < 0) throw DomainError("Bernoulli index must be >= 0");
    if (k == 1) return Rational(-1, 2);
    if (k % 2 == 1) return 0;
    // Akiyama-Tanigawa
    std::vector<Rational> a(static_cast<std::size_t>(k) + 1);
    for (int m = 0; m <= k; ++m) {
        a[m] = ratio(1, m + 1);
        for (int j = m; j >= 1; --j) a[j - 1] = j * (a[j - 1] - a[j]);
    }
    return a[0];
}

Integer sigma(int k, long n) {
    if (n <= 0) throw DomainError("sigma_k(n) needs n >= 1");
    if (k < 0) throw DomainError("sigma_k(n) needs k >= 0");
    Integer total = 0;
    for (long d = 1; d * d <= n; ++d) {
        if (n % d != 0) continue;
        Integer t;
        mpz_ui_pow_ui(t.get_mpz_t(), static_cast<unsigned long>(d), static_cast<unsigned long>(k));
        total += t;
        const long e = n / d;
        if (e != d) {
            mpz_ui_pow_ui(t.get_mpz_t(), static_cast<unsigned long>(e), static_cast<unsigned long>(k));
            total += t;
        }
    }
    return total;
}

std::vector<Integer> sigma_table(int k, int M) {
    if (k < 0) throw DomainError("sigma_k needs k >= 0");
    std::vector<Integer> t(static_cast<std::size_t>(std::max(M, 0)) + 1, Integer(0));
    Integer dk;
    for (int d = 1; d <= M; ++d) {
        mpz_ui_pow_ui(dk.get_mpz_t(), static_cast<unsigned long>(d), static_cast<unsigned long>(k));
        for (int m = d; m <= M; m += d) t[m] += dk;
    }
    return t;
}

QSeries eisenstein_series(int k, int l, int M) {
    if (k < 2 || k % 2 != 0) throw DomainError("Eisenstein series needs even weight k >= 2");
    if (l < 1) throw DomainError("Eisenstein series needs l >= 1");
    const Rational factor = Rational(-2 * k) / bernoulli(k);
    const auto sig = sigma_table(k - 1, M / l);
    std::vector<Rational> c(static_cast<std::size_t>(M) + 1, Rational(0));
    c[0] = 1;
    for (int n = 1; static_cast<long>(n) * l <= M; ++n) c[static_cast<std::size_t>(n * l)] = factor * Rational(sig[n]);
    return QSeries(std::move(c));
}

QSeries eta_series(int l, int M) {
    if (l < 1) throw DomainError("eta(l z) needs l >= 1");
    if (M < 0) throw DomainError("negative order");
    // Euler's pentagonal number theorem
    std::vector<Rational> c(static_cast<std::size_t>(M) + 1, Rational(0));
    for (long j = 0;; ++j) {
        bool any = false;
        for (int side = 0; side < (j == 0 ? 1 : 2); ++side) {
            const long jj = side == 0 ? j : -j;
            const long e = jj * (3 * jj - 1) / 2 * l;
            if (e > M) continue;
            any = true;
            c[static_cast<std::size_t>(e)] += (jj % 2 == 0) ? 1 : -1;
        }
        if (!any && j > 0) break;
    }
    return QSeries(std::move(c), l);
}

QSeries theta_series(int M) {
    std::vector<Rational> c(static_cast<std::size_t>(M) + 1, Rational(0));
    c[0] = 1;
    for (long n = 1; n * n <= M; ++n) c[static_cast<std::size_t>(n * n)] += 2;
    return QSeries(std::move(c));
}

QSeries builtin_form(std::string_view name, int M) {
    if (M < 0) throw DomainError("negative order");
    auto finish = [M](const QSeries& s) { return s.canonical().truncated(M); };
    if (name == "F") {
        QSeries e = eisenstein_series(2, 1, M) - Rational(3) * eisenstein_series(2, 2, M) +
                    Rational(2) * eisenstein_series(2, 4, M);
        return finish(e * Rational(-1, 24));
    }
    if (name == "G" || name == "theta4") return finish(theta_series(M).pow(4));
    if (name == "G-16F") return finish(builtin_form("G", M) - Rational(16) * builtin_form("F", M));
    if (name == "delta") return finish(eta_series(1, M).pow(24));
    if (name == "lambda") {
        // lambda = 16 F / G; F has valuation 1, so compute one order deeper
        return finish(Rational(16) * builtin_form("F", M + 1) / builtin_form("G", M + 1));
    }
    if (name.size() >= 2 && name[0] == 'E') {
        const std::string digits(name.substr(1));
        char* end = nullptr;
        const long k = std::strtol(digits.c_str(), &end, 10);
        if (end && *end == '\0' && !digits.empty()) return eisenstein_series(static_cast<int>(k), 1, M);
    }
    throw DomainError("unknown built-in form '" + std::string(name) + "'");
}

QSeries logderiv(const QSeries& s) {
    const QSeries a = s.stripped();
    if (a.is_zero()) throw DomainError("logderiv of a q-series with no invertible leading coefficient");
    const int M = a.order();
    std::vector<Rational> d(static_cast<std::size_t>(M) + 1, Rational(0));
    for (int k = 1; k <= M; ++k) d[k] = k * a[k];
    // the quotient strips the leading zero of d; bring it back to q^0
    QSeries r = (QSeries(std::move(d)) / QSeries(a.coeffs())).canonical();
    if (r.prefactor_num() != 0) r = QSeries::zero(M);
    std::vector<Rational> c = r.coeffs();
    c[0] += ratio(a.prefactor_num(), 24);
    return QSeries(std::move(c));
}

}  // namespace moditer
