#pragma once

// Seeded generators for property checks.

#include <cstdint>
#include <random>

#include "vestokes/constitutive.hpp"
#include "vestokes/tensor.hpp"

namespace vestokes {

using Rng = std::mt19937_64;

double uniform(Rng& rng, double lo, double hi);

/// Haar-distributed rotation (det = +1).
Mat3 random_rotation(Rng& rng);

/// Q diag(l) Q^t with eigenvalues log-uniform so that l_max / l_min <= cond.
/// With `unimodular`, the eigenvalues are rescaled to product one.
SymTensor3 random_spd(Rng& rng, double cond, bool unimodular = false);

/// Symmetric tensor with entries uniform in [-scale, scale].
SymTensor3 random_symmetric(Rng& rng, double scale = 1.0);

/// Dense matrix with entries uniform in [-scale, scale].
Mat3 random_matrix(Rng& rng, double scale = 1.0);

/// Trace-free dense matrix.
Mat3 random_traceless(Rng& rng, double scale = 1.0);

/// Matrix exponential.
Mat3 expm(const Mat3& x);

/// B(s, t) = E B0 E^t with E = exp(sX + tY), tr X = tr Y = 0, so det B is
/// constant along the family. Derivatives are at s = t = 0.
struct UnimodularPath {
    SymTensor3 b0;
    Mat3 x, y;

    SymTensor3 at(double s, double t) const;
    SymTensor3 ds() const;
    SymTensor3 dt() const;
    SymTensor3 dss() const;
    SymTensor3 dst() const;
};

UnimodularPath random_unimodular_path(Rng& rng, double cond = 10.0);

/// Admissible constant parameters, mu1 + mu2 + mu3 > 0.
MuTriple random_admissible_mu(Rng& rng);

}  // namespace vestokes
