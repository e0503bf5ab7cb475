#pragma once

#include <array>
#include <sstream>
#include <stdexcept>
#include <string>

#include "geomom/pauli.hpp"

namespace geomom {

/// Global sign choices.
///   mean_sign  (s_M): M = s_M * g^{mn} b_{mn} / 2, with b_{mn} = (d_m r_n) . n
///   spin_sign  (s_w): w_m^{12} = s_w * e^1_n (d_m e^{n2} + Gamma^n_{ml} e^{l2})
///   gauge_sign (s_A): p = Pi + s_A * hbar * r^m Omega_m
/// The defaults reproduce the pseudosphere and helicoid operators jointly.
struct Convention {
  int mean_sign = +1;
  int spin_sign = -1;
  int gauge_sign = +1;

  friend bool operator==(const Convention&, const Convention&) = default;

  std::string to_string() const {
    auto s = [](int x) { return x > 0 ? std::string("+1") : std::string("-1"); };
    return s(mean_sign) + "," + s(spin_sign) + "," + s(gauge_sign);
  }

  /// Parses "sM,sw,sA" with each entry +1/-1/+/-, or "default".
  static Convention parse(const std::string& text) {
    if (text == "default") return {};
    Convention c;
    std::array<int*, 3> slots{&c.mean_sign, &c.spin_sign, &c.gauge_sign};
    std::stringstream ss(text);
    std::string item;
    std::size_t k = 0;
    while (std::getline(ss, item, ',')) {
      if (k >= 3) throw std::invalid_argument("convention takes three signs: " + text);
      if (item == "+1" || item == "1" || item == "+") {
        *slots[k] = +1;
      } else if (item == "-1" || item == "-") {
        *slots[k] = -1;
      } else {
        throw std::invalid_argument("bad convention sign '" + item + "'");
      }
      ++k;
    }
    if (k != 3) throw std::invalid_argument("convention takes three signs: " + text);
    return c;
  }
};

/// Constant gamma matrices (gamma_1, gamma_2, gamma_0) as Pauli labels with
/// signs, e.g. {"sigma_x", "sigma_y", "-sigma_z"}.
struct GammaRep {
  std::array<std::string, 3> labels{"sigma_x", "sigma_y", "-sigma_z"};

  static CMat matrix(const std::string& label) {
    std::string body = label;
    double sign = 1.0;
    if (!body.empty() && (body[0] == '-' || body[0] == '+')) {
      sign = body[0] == '-' ? -1.0 : 1.0;
      body = body.substr(1);
    }
    CMat m;
    if (body == "sigma_x" || body == "sx") {
      m = CMat::sigma_x();
    } else if (body == "sigma_y" || body == "sy") {
      m = CMat::sigma_y();
    } else if (body == "sigma_z" || body == "sz") {
      m = CMat::sigma_z();
    } else {
      throw std::invalid_argument("unknown gamma matrix '" + label + "'");
    }
    return Expr(sign) * m;
  }

  CMat gamma(int a) const { return matrix(labels.at(a)); }

  std::string to_string() const { return labels[0] + "," + labels[1] + "," + labels[2]; }

  static GammaRep parse(const std::string& text) {
    GammaRep g;
    std::stringstream ss(text);
    std::string item;
    std::size_t k = 0;
    while (std::getline(ss, item, ',')) {
      if (k >= 3) throw std::invalid_argument("gamma representation takes three matrices");
      matrix(item);
      g.labels[k++] = item;
    }
    if (k != 3) throw std::invalid_argument("gamma representation takes three matrices");
    g.validate();
    return g;
  }

  /// gamma_1, gamma_2 must not commute; gamma_0 must anticommute with both.
  void validate() const {
    const ConstTable none;
    Evaluator ev({0.0, 0.0}, none);
    auto norm = [&](const CMat& m) { return frobenius(evaluate_dense(m, ev)); };
    const CMat g1 = gamma(0), g2 = gamma(1), g0 = gamma(2);
    if (norm(mat_commutator(g1, g2)) < 1e-12)
      throw std::invalid_argument("gamma_1 and gamma_2 commute: " + to_string());
    if (norm(mat_mul(g0, g1) + mat_mul(g1, g0)) > 1e-12 || norm(mat_mul(g0, g2) + mat_mul(g2, g0)) > 1e-12)
      throw std::invalid_argument("gamma_0 does not anticommute with gamma_1, gamma_2: " + to_string());
  }
};

struct PhysicsConfig {
  double hbar = 1.0;
  double mass = 1.0;  // m = m0 c
  GammaRep gamma;
  Convention convention;
};

}  // namespace geomom
