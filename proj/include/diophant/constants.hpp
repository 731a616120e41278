#pragma once

#include <mpfr.h>

#include <stdexcept>
#include <string>
#include <vector>

#include "diophant/ball.hpp"
#include "diophant/lseries.hpp"

namespace diophant {

// Names accepted by registry_constant, sorted.
inline std::vector<std::string> registry_names() {
    return {"beta3", "catalan", "golden", "pi", "sqrt2", "zeta2", "zeta3"};
}

// Trusted certified enclosure of a named constant at precision p.
inline Ball registry_constant(const std::string& name, Precision p) {
    if (name == "catalan") return beta_value(2, p);
    if (name == "pi") return Ball::pi(p);
    if (name == "sqrt2") return Ball::of_int(2L, p).sqrt();
    if (name == "golden")
        return Ball::of_int(5L, p).sqrt().add_rational(Rational(1)).mul_rational(Rational(1, 2));
    if (name == "zeta2") return closed_form_value(ClosedFormKind::zeta_even, 1, p);
    if (name == "beta3") return closed_form_value(ClosedFormKind::beta_odd, 1, p);
    if (name == "zeta3") {
        // No closed form exists; take the library's correctly rounded value
        // and certify a half-ulp radius around it.
        detail::Mpfr mid(p.bits), rad(detail::kRadiusPrec);
        mpfr_zeta_ui(mid, 3, MPFR_RNDN);
        mpfr_set_ui_2exp(rad, 1, -p.bits, MPFR_RNDU);
        return Ball::of_midrad(mid, rad, p);
    }
    std::string names;
    for (const auto& n : registry_names()) names += (names.empty() ? "" : ", ") + n;
    throw std::invalid_argument("registry_constant: unknown name '" + name +
                                "'; available: " + names);
}

} // namespace diophant
