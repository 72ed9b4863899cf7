#include <vector>

#include "g2flow/g2.hpp"
#include "g2flow/prng.hpp"

namespace g2flow {

namespace {

ExteriorElement random_two_form(Prng& rng) {
  ExteriorElement e;
  for (int i = 1; i <= 7; ++i)
    for (int j = i + 1; j <= 7; ++j) {
      long long num = rng.uniform_int(-6, 6);
      long long den = rng.uniform_int(1, 4);
      if (num != 0)
        e = e + ExteriorElement::basis({i, j}, Rational(BigInt(num), BigInt(den)));
    }
  return e;
}

Vector7 random_vector(Prng& rng) {
  Vector7 v;
  for (int i = 0; i < 7; ++i) v.c[i] = Rational(rng.uniform_int(-5, 5));
  return v;
}

}  // namespace

std::vector<SelfCheck> algebra_selftest() {
  std::vector<SelfCheck> out;
  auto add = [&](std::string name, bool pass, std::string note = "") {
    out.push_back({std::move(name), pass, std::move(note)});
  };

  // T^2 = T + 2 on all 21 basis 2-forms
  {
    bool ok = true;
    for (int i = 1; i <= 7 && ok; ++i)
      for (int j = i + 1; j <= 7 && ok; ++j) {
        ExteriorElement e = ExteriorElement::basis({i, j});
        ExteriorElement lhs = t_map(t_map(e));
        ExteriorElement rhs = t_map(e) + Rational(2) * e;
        ok = lhs == rhs;
      }
    add("T^2 = T + 2 on all 21 basis 2-forms (exact)", ok);
  }

  // eigenspace dimensions 7 / 14
  {
    auto [p, m] = split_ranks();
    add("rank of plus projector = 7", p == 7, "got " + std::to_string(p));
    add("rank of minus projector = 14", m == 14, "got " + std::to_string(m));
  }

  // metric is Euclidean on all 49 basis pairs
  {
    bool ok = true;
    for (int i = 1; i <= 7 && ok; ++i)
      for (int j = 1; j <= 7 && ok; ++j) {
        Rational expect(i == j ? 1 : 0);
        ok = metric_from_phi(Vector7::basis(i), Vector7::basis(j)) == expect;
      }
    add("<v_i, v_j> from the 3-form = delta_ij (49 pairs, exact)", ok,
        "normalization constant " + metric_normalization().to_string());
  }

  // 6<a,b> = -tr T_{a,b} on all 49 basis pairs
  {
    bool ok = true;
    for (int i = 1; i <= 7 && ok; ++i)
      for (int j = 1; j <= 7 && ok; ++j) {
        Rational lhs = Rational(6) * metric_from_phi(Vector7::basis(i), Vector7::basis(j));
        Rational rhs = -t_map_trace(Vector7::basis(i), Vector7::basis(j));
        ok = lhs == rhs;
      }
    add("6<a,b> = -tr T_{a,b} (49 pairs, exact)", ok);
  }

  // cross-product antisymmetry and <a x b, c> = phi0(a,b,c) on basis triples
  {
    bool ok = true;
    for (int i = 1; i <= 7 && ok; ++i)
      for (int j = 1; j <= 7 && ok; ++j) {
        Vector7 ab = cross(Vector7::basis(i), Vector7::basis(j));
        Vector7 ba = cross(Vector7::basis(j), Vector7::basis(i));
        ok = (ab + ba).is_zero();
        for (int k = 1; k <= 7 && ok; ++k) {
          ExteriorElement phi_abc =
              contract(Vector7::basis(k), contract(Vector7::basis(j),
                                                   contract(Vector7::basis(i), phi0())));
          ok = phi_abc.coeff(0) == metric_from_phi(ab, Vector7::basis(k));
        }
      }
    add("cross antisymmetric and phi0(a,b,c) = <a x b, c> (343 triples)", ok);
  }

  // octonion identities
  {
    bool ok = true;
    for (int i = 1; i <= 7 && ok; ++i) {
      auto [re, im] = octonion_mul(Vector7::basis(i), Vector7::basis(i));
      ok = re == Rational(-1) && im.is_zero();
    }
    add("v_i . v_i = -1 (real part), 0 (imaginary part)", ok);

    Prng rng(2026);
    bool alt = true;
    for (int trial = 0; trial < 20 && alt; ++trial) {
      Vector7 a = random_vector(rng), b = random_vector(rng);
      auto ab = octonion_mul_full(Rational(0), a, Rational(0), b);
      auto a_ab = octonion_mul_full(Rational(0), a, ab.first, ab.second);
      auto aa = octonion_mul_full(Rational(0), a, Rational(0), a);
      auto aa_b = octonion_mul_full(aa.first, aa.second, Rational(0), b);
      alt = a_ab.first == aa_b.first && a_ab.second == aa_b.second;
    }
    add("alternativity a.(a.b) = (a.a).b on random rational vectors", alt);
  }

  // L_{*phi0} kills the minus part (random sample)
  {
    Prng rng(7);
    bool ok = true;
    for (int trial = 0; trial < 1000 && ok; ++trial) {
      ExteriorElement eta = random_two_form(rng);
      TwoFormSplit s = t_eigen_split(eta);
      ok = project_plus_L(s.minus).is_zero();
    }
    add("L_{*phi0} vanishes on the minus eigenspace (1000 random 2-forms, exact)", ok);
  }

  // exact values of L_{*phi0} on the alpha_i
  {
    bool corrected = true, as_printed = true;
    for (int i = 1; i <= 7; ++i) {
      ExteriorElement got = project_plus_L(alpha(i));
      ExteriorElement stated;
      stated.set(static_cast<uint8_t>(0x7f & ~(1u << (i - 1))), Rational(1));
      ExteriorElement expect = Rational(3) * contract(Vector7::basis(i),
                                                      hodge_star(ExteriorElement::scalar(Rational(1))));
      if (got != expect) corrected = false;
      if (got != stated) as_printed = false;
    }
    add("L_{*phi0} alpha_i = 3 (-1)^{i-1} e^{1..i^..7} (exact)", corrected);
    add("note: the unnormalized form 'L alpha_i = e^{1..i^..7}' does not hold",
        !as_printed, "factor 3 and alternating signs; see the corrected identity above");
  }

  // Kaehler -> G2 frame lift
  {
    KahlerLift lift =
        lift_kahler_structure(standard_omega_f(), standard_Omega_re_f(), standard_Omega_im_f());
    add("frame lift: omega^dtheta + Im(Omega) = phi0 (exact)", lift.phi == phi0());
    add("frame lift: (1/2)omega^2 - Re(Omega)^dtheta = -(*phi0) (orientation-reversing frame)",
        lift.star_phi == -star_phi0());
  }

  return out;
}

}  // namespace g2flow
