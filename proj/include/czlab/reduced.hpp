#pragma once

#include <complex>
#include <functional>
#include <string>

#include <json.hpp>

#include "czlab/profiles.hpp"
#include "czlab/schulz.hpp"
#include "czlab/surface.hpp"

namespace czlab {

// q(λ) = λ + O(λ^(1+ε')) with its derivative.
struct NearIdentity {
  std::function<double(double)> q = [](double s) { return s; };
  std::function<double(double)> dq = [](double) { return 1.0; };
  std::string label = "identity";
};

// q(λ) = y(0, λ)·A^(1/ℓ₀) from the implicit height, A the coefficient of the pure power.
NearIdentity height_near_identity(const SurfaceSpec& spec, const SchulzForm& form);

enum class ReducedForm { Sine, OneSided };

struct ReducedIntegralSpec {
  Profile phi_bar;
  NearIdentity q;
  double gamma = 0.0;
  double eta = 0.0;
  double xi_cap = 0.0;  // 0 means no ξ cap
  double b = 0.5;       // exponent of the |η| cap; 0 disables it
  ReducedForm form = ReducedForm::Sine;
  double tol = 1e-9;
};

// Upper limit of the sine form: min(1, 1/|ξ_cap|, |η|^-b).
double reduced_cap(const ReducedIntegralSpec& s);

// Sine form: ∫_0^cap e^{iγφ̄(λ)} sin(η q(λ)) dλ/λ.
// One-sided form: ∫_{1/η}^1 e^{iγφ̄(t)} e^{-iη q(t)} dt/t (η > 1).
std::complex<double> reduced_integral(const ReducedIntegralSpec& s);

ReducedForm reduced_form_from_string(const std::string& s);

}  // namespace czlab
