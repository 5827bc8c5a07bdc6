#include "etdr/bounds.hpp"

#include <boost/multiprecision/cpp_bin_float.hpp>
#include <boost/multiprecision/cpp_int.hpp>

#include <cmath>
#include <sstream>

#include "etdr/error.hpp"
#include "etdr/hash.hpp"

namespace etdr::bounds {

namespace {

using Real = boost::multiprecision::cpp_bin_float_50;

Real to_real(const Rational& x) {
  return Real(x.get_num().get_str()) / Real(x.get_den().get_str());
}

// Exact rational >= x for x >= 0 (x is finite with < 200 significant bits).
Rational upper_rational(const Real& x) {
  if (x <= 0) return Rational(0);
  int e = 0;
  const Real m = boost::multiprecision::frexp(x, &e);
  const Real scaled = boost::multiprecision::ceil(boost::multiprecision::ldexp(m, 200));
  BigInt mant(scaled.convert_to<boost::multiprecision::cpp_int>().str());
  Rational out(mant);
  out *= pow2(static_cast<long>(e) - 200);
  return out;
}

void check_t(unsigned t, unsigned N, unsigned n) {
  if (n == 0 || n > N) fail(ErrorKind::ParamDomain, "need 1 <= n <= N");
  if (t < n || t > N) fail(ErrorKind::ParamDomain, "t must lie in [n, N]");
}

void check_q(const Rational& q) {
  if (q < 0 || q > 1) fail(ErrorKind::ParamDomain, "q must lie in [0, 1]");
}

}  // namespace

Rational p_et(unsigned t, unsigned N, unsigned n) {
  check_t(t, N, n);
  BigInt num = 1, den = 1;
  for (unsigned i = 0; i < n; ++i) {
    num *= t - i;
    den *= N - i;
  }
  Rational out(num, den);
  out.canonicalize();
  return out;
}

std::vector<Rational> binomial_tails(unsigned M, const Rational& q) {
  check_q(q);
  const Rational p = 1 - q;
  std::vector<Rational> qpow(M + 1), ppow(M + 1);
  qpow[0] = 1;
  ppow[0] = 1;
  for (unsigned i = 1; i <= M; ++i) {
    qpow[i] = qpow[i - 1] * q;
    ppow[i] = ppow[i - 1] * p;
  }
  std::vector<Rational> tails(M + 2);
  tails[M + 1] = 0;
  BigInt c = 1;  // C(M, u) walking down from u = M
  for (unsigned u = M + 1; u-- > 0;) {
    if (u < M) {
      c *= u + 1;
      c /= M - u;
    }
    tails[u] = tails[u + 1] + Rational(c) * qpow[u] * ppow[M - u];
  }
  return tails;
}

Rational p_dr_upper(unsigned t, unsigned N, unsigned n, const Rational& q) {
  check_t(t, N, n);
  return binomial_tails(N - n, q)[t - n];
}

Epsilon2 epsilon2(unsigned N, unsigned n, const Rational& q) {
  check_t(n, N, n);
  const auto tails = binomial_tails(N - n, q);
  Epsilon2 best{Rational(-1), n};
  Rational pet = p_et(n, N, n);
  for (unsigned t = n; t <= N; ++t) {
    if (t > n) {
      pet *= Rational(t, t - n);
      pet.canonicalize();
    }
    const Rational prod = pet * tails[t - n];
    if (prod > best.value) best = {prod, t};
  }
  return best;
}

double kl_divergence(double p, double q) {
  auto term = [](double a, double b) { return a == 0.0 ? 0.0 : a * std::log2(a / b); };
  return term(p, q) + term(1.0 - p, 1.0 - q);
}

Rational kl_bound(unsigned t, unsigned N, unsigned n, const Rational& q) {
  check_t(t, N, n);
  check_q(q);
  if (N != 2 * n) fail(ErrorKind::ParamDomain, "kl_bound requires N = 2n");
  if (t == n) fail(ErrorKind::ParamDomain, "kl_bound requires t > n");
  if (q == 0) return Rational(0);
  if (t == N) return pow(q, n);
  if (q == 1) return Rational(N - t + 1);
  const Real p = Real(t - n) / Real(n);
  const Real qr = to_real(q);
  const Real d = p * boost::multiprecision::log2(p / qr) +
                 (1 - p) * boost::multiprecision::log2((1 - p) / (1 - qr));
  const Real bound = Real(N - t + 1) * boost::multiprecision::pow(Real(2), -Real(n) * d);
  // Inflate past the working precision before rounding up.
  return upper_rational(bound * (1 + boost::multiprecision::ldexp(Real(1), -100)));
}

BoundReport analyze(std::uint64_t r, unsigned n, unsigned l, unsigned N, const Rational& q,
                    std::optional<Rational> eps1) {
  check_t(n, N, n);
  check_q(q);
  BoundReport rep;
  rep.r = r;
  rep.n = n;
  rep.l = l;
  rep.N = N;
  rep.q = q;
  rep.epsilon1 = eps1;

  const auto tails = binomial_tails(N - n, q);
  const bool symmetric = N == 2 * n;
  const bool tabulate = N <= kTableCap;
  const Rational chain_sq = eps1 ? Rational((n + 2) * (n + 2), 4) * pow2(-static_cast<long>(n))
                                 : Rational(0);

  Rational best(-1);
  rep.argmax = n;
  rep.et_side_ok = eps1.has_value();
  rep.dr_side_ok = eps1.has_value() && chain_sq <= (*eps1) * (*eps1);
  Rational pet = p_et(n, N, n);
  for (unsigned t = n; t <= N; ++t) {
    if (t > n) {
      pet *= Rational(t, t - n);
      pet.canonicalize();
    }
    const Rational& pdr = tails[t - n];
    const Rational prod = pet * pdr;
    if (prod > best) {
      best = prod;
      rep.argmax = t;
    }
    if (eps1) {
      if (2 * t <= 3 * n) {
        if (pet > *eps1) rep.et_side_ok = false;
      } else if (pdr * pdr > chain_sq) {
        rep.dr_side_ok = false;
      }
    }
    if (!tabulate) continue;
    BoundRow row{t, pet, pdr, prod, std::nullopt};
    if (symmetric) {
      if (pet > pow(Rational(t, 2 * n), n)) rep.pet_dominates = false;
      if (t > n) {
        row.kl = kl_bound(t, N, n, q);
        if (pdr > *row.kl) rep.kl_dominates = false;
      }
    }
    rep.table.push_back(std::move(row));
  }
  rep.epsilon2 = best;
  rep.satisfied = eps1 && rep.epsilon2 <= *eps1;
  return rep;
}

BoundReport verify_theorem(std::uint64_t r, const Rational& epsilon) {
  const Params p = derive_params(r, epsilon);
  return analyze(p.r, p.n, p.l, p.N, collision_bound(p.r, p.l), Rational(epsilon / 16));
}

std::string to_csv(const BoundReport& rep) {
  std::ostringstream out;
  out << "t,p_et,p_dr_upper,product,kl_bound\n";
  for (const auto& row : rep.table) {
    out << row.t << ',' << to_sci(row.p_et) << ',' << to_sci(row.p_dr) << ',' << to_sci(row.product)
        << ',' << (row.kl ? to_sci(*row.kl) : std::string()) << '\n';
  }
  return out.str();
}

std::string summary(const BoundReport& rep) {
  std::ostringstream out;
  out << "r=" << rep.r << " n=" << rep.n << " l=" << rep.l << " N=" << rep.N << " q=" << to_string(rep.q)
      << "\neps2=" << to_sci(rep.epsilon2) << " at t=" << rep.argmax;
  if (rep.epsilon1) {
    out << "\neps1=" << to_sci(*rep.epsilon1) << " satisfied=" << (rep.satisfied ? "yes" : "no")
        << " et_side=" << (rep.et_side_ok ? "ok" : "violated")
        << " dr_side=" << (rep.dr_side_ok ? "ok" : "violated");
  }
  if (!rep.table.empty()) {
    out << "\nkl_dominates=" << (rep.kl_dominates ? "yes" : "no")
        << " pet_dominates=" << (rep.pet_dominates ? "yes" : "no");
  }
  out << '\n';
  return out.str();
}

}  // namespace etdr::bounds
