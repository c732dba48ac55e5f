#pragma once

#include <string>
#include <vector>

namespace levyqs {

// Grid of (x, f(x)) pairs with provenance metadata. The CSV rendering uses
// header "x,f" and 17-significant-digit decimals so that reruns are
// byte-identical.
struct DensityTable {
    std::vector<double> x;
    std::vector<double> f;
    struct Meta {
        std::string model_id;
        std::string marginal;  // QS_left | QS_right | stationary | tail
        std::string method;    // closed_form | inversion | simulation
    } meta;

    double trapezoid_mass() const;
};

std::string density_to_csv(const DensityTable& t);

} // namespace levyqs
