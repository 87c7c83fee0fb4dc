#pragma once

#include <stdexcept>
#include <string>

namespace rbeam {

// Base class for all library errors so callers can catch one type at the
// process boundary and map it to an exit code.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Matrix and geometry contracts.
class DimensionMismatch : public Error { public: using Error::Error; };
class NotHermitian : public Error { public: using Error::Error; };
class NotPositiveDefinite : public Error { public: using Error::Error; };
class NonFiniteEigenvalue : public Error { public: using Error::Error; };
class EmptyInput : public Error { public: using Error::Error; };
class NotCommuting : public Error { public: using Error::Error; };
class InvalidIndex : public Error { public: using Error::Error; };

// Array model.
class InvalidWavelength : public Error { public: using Error::Error; };
class ZeroReferenceEntry : public Error { public: using Error::Error; };
class ZeroVector : public Error { public: using Error::Error; };

// Simulation and STFT.
class PositionOutsideRoom : public Error { public: using Error::Error; };
class BinOutOfRange : public Error { public: using Error::Error; };
class SegmentTooShort : public Error { public: using Error::Error; };

// Beamforming and metrics.
class InvalidSubspaceDim : public Error { public: using Error::Error; };
class EmptyGrid : public Error { public: using Error::Error; };
class GridTooCoarse : public Error { public: using Error::Error; };
class AtfsNotOrthogonal : public Error { public: using Error::Error; };
class WrongInterferenceCount : public Error { public: using Error::Error; };

// Configuration and I/O.
class ConfigError : public Error { public: using Error::Error; };
class IoError : public Error { public: using Error::Error; };
class InvalidArgument : public Error { public: using Error::Error; };

}  // namespace rbeam
