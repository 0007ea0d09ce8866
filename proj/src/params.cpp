#include "filmflow/params.hpp"

#include <cmath>

#include "filmflow/util.hpp"

namespace filmflow {

namespace {
void require_positive(double v, const char* name) {
    if (!(v > 0.0) || !std::isfinite(v)) {
        throw ConfigError(std::string(name) + ": must be strictly positive and finite");
    }
}
}  // namespace

void ModelParams::validate() const {
    require_positive(k_b, "k_b");
    require_positive(K_b, "K_b");
    require_positive(k_c, "k_c");
    require_positive(K_c, "K_c");
    require_positive(d, "d");
    require_positive(mu_b, "mu_b");
    require_positive(Pi, "Pi");
    require_positive(xi_inf, "xi_inf");
    require_positive(c0, "c0");
    if (!(phi_inf > 0.0 && phi_inf < 1.0)) {
        throw ConfigError("phi_inf: must be in (0,1)");
    }
    if (!(g_inf > 0.0 && g_inf <= 1.0)) {
        throw ConfigError("g_inf: must be in (0,1]");
    }
    if (!std::isfinite(p_b0)) {
        throw ConfigError("p_b0: must be finite");
    }
}

double monod(double c, double K) {
    if (c < 0.0) {
        throw ConfigError("monod: concentration must be nonnegative");
    }
    if (!(K > 0.0)) {
        throw ConfigError("monod: half-saturation must be positive");
    }
    return c / (c + K);
}

}  // namespace filmflow
