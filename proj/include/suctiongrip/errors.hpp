#pragma once

#include <stdexcept>
#include <string>

namespace suctiongrip {

class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Malformed or unreadable mesh/report/config file.
class ParseError : public Error {
 public:
  using Error::Error;
};

/// Mesh has no usable triangles after validation.
class DegenerateMesh : public Error {
 public:
  using Error::Error;
};

/// Raster pitch exceeds the workpiece extent on every axis.
class EmptyRaster : public Error {
 public:
  using Error::Error;
};

/// Cup footprint collected fewer than the minimum number of surface samples.
class PatchTooSparse : public Error {
 public:
  using Error::Error;
};

/// Gravity projection collapses the gripping points onto a line.
class DegenerateProjection : public Error {
 public:
  using Error::Error;
};

/// Enumeration finished without a single admissible k-set.
class NoConstellation : public Error {
 public:
  using Error::Error;
};

/// Workspace planning over constellations with different cup counts.
class MixedArity : public Error {
 public:
  using Error::Error;
};

class UnknownFormat : public Error {
 public:
  using Error::Error;
};

class InvalidParams : public Error {
 public:
  using Error::Error;
};

}  // namespace suctiongrip
