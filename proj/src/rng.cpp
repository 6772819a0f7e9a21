#include "rpsoftmax/rng.hpp"

#include <cmath>
#include <stdexcept>

namespace rpsoftmax {

double sample_laplace(Rng& rng, double scale) {
  if (!(scale > 0.0)) throw std::invalid_argument("laplace scale must be positive");
  double u;
  do {
    u = rng.next_double();
  } while (u == 0.0);
  return u < 0.5 ? scale * std::log(2.0 * u) : -scale * std::log(2.0 * (1.0 - u));
}

}  // namespace rpsoftmax
