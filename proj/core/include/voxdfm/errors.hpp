#pragma once

#include <stdexcept>
#include <string>

namespace voxdfm {

// Common base so callers can catch everything voxdfm throws with one handler.
struct Error : std::runtime_error {
    explicit Error(const std::string& what) : std::runtime_error(what) {}
};

// Geometry construction produced a surface that cannot be a closed 2-manifold
// (overlapping holes, a hole breaking out of a side wall, ...).
struct NonManifoldGeometry : Error {
    using Error::Error;
};

// Asked for a hole-derived quantity on a part without holes.
struct NoHoles : Error {
    using Error::Error;
};

// A casting ray stayed degenerate through every retry offset.
struct DegenerateHit : Error {
    using Error::Error;
};

// Two grids/volumes that must share a GridSpec (or dims/channels) do not.
struct SpecMismatch : Error {
    using Error::Error;
};

// Tensor or channel shapes are inconsistent with the layer/network config.
struct ShapeMismatch : Error {
    using Error::Error;
};

// Batch statistics are undefined: batch of one in training mode.
struct DegenerateBatch : Error {
    using Error::Error;
};

// A dataset split that must be non-empty is empty.
struct EmptySplit : Error {
    using Error::Error;
};

// Activation-map explanation asked of a network without conv layers.
struct NoConvLayer : Error {
    using Error::Error;
};

// Filesystem-level failure (open/read/write).
struct IoError : Error {
    using Error::Error;
};

// Bytes were readable but are not a valid file of the expected format.
struct FormatError : Error {
    using Error::Error;
};

// A manifest whose header/layout version is unknown or malformed.
struct SchemaError : Error {
    using Error::Error;
};

} // namespace voxdfm
