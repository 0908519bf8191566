#pragma once

#include <stdexcept>
#include <string>

namespace tcurv {

// Base class for all recoverable failures raised by this library.  Callers
// that want to distinguish failure modes catch the derived types; everything
// carries a human-readable message with the offending quantities.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// A requested operation needs a 2-plane but was given linearly dependent
// vectors (relative to the metric at that point).
class DegeneratePlane : public Error { public: using Error::Error; };

// Adaptive integration exceeded its step budget or could not reach the
// requested tolerance.
class IntegrationFailure : public Error { public: using Error::Error; };

// A curve that must be unit speed is not, beyond tolerance.
class NonUnitSpeedCurve : public Error { public: using Error::Error; };

// A loop operation was handed a curve whose endpoints do not coincide.
class OpenLoop : public Error { public: using Error::Error; };

// A parameter value lies outside the curve's domain, or too close to the
// boundary for the requested stencil.
class BoundaryParameter : public Error { public: using Error::Error; };

// A normal-coordinate construction was asked to leave its validity ball.
class RadiusTooLarge : public Error { public: using Error::Error; };

// A power-law fit produced a coefficient with the wrong sign.
class NegativeFitCoefficient : public Error { public: using Error::Error; };

// The majorization construction could not certify its postconditions at the
// maximum refinement level.
class MajorizationUnverified : public Error { public: using Error::Error; };

// Two curves that must have equal parameter spans do not.
class LengthMismatch : public Error { public: using Error::Error; };

// Input data is collapsed: repeated points, zero-length edges, or a point
// set of deficient rank.
class DegenerateInput : public Error { public: using Error::Error; };

// The operation is not defined for the given model space.
class UnsupportedSpace : public Error { public: using Error::Error; };

// A mesh vertex has too few neighbors to estimate a shape operator.
class DegenerateLink : public Error { public: using Error::Error; };

// A convexity certificate was required and could not be produced.
class NotConvex : public Error { public: using Error::Error; };

// The operation requires a nonpositively curved ambient space.
class NotCartanHadamard : public Error { public: using Error::Error; };

// The operation requires the flat ambient space.
class AmbientNotEuclidean : public Error { public: using Error::Error; };

// Hull construction failed: fewer than four affinely independent points.
class DegenerateHull : public Error { public: using Error::Error; };

// A query point expected on the hull boundary lies in the interior.
class InteriorPoint : public Error { public: using Error::Error; };

// The developing construction requires the surface to be intrinsically flat
// along the sampled tangent planes and it is not.
class NotFlatOnTangentPlanes : public Error { public: using Error::Error; };

// Frame propagation around a grid cell disagrees between the two edge
// orderings beyond tolerance.
class PathDependence : public Error { public: using Error::Error; };

// Two grids that must share dimensions and parameters do not.
class GridMismatch : public Error { public: using Error::Error; };

// A configuration file could not be parsed, or contains unknown keys.
class ConfigError : public Error { public: using Error::Error; };

}  // namespace tcurv
