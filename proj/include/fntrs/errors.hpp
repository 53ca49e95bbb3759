#pragma once

#include <stdexcept>
#include <string>

namespace fntrs {

// Base class for every error thrown by the library.
struct Error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// field
struct ZeroInverse final : Error { using Error::Error; };
struct InvalidTransformSize final : Error { using Error::Error; };

// transform / poly / geom / interp
struct SizeMismatch final : Error { using Error::Error; };
struct ProductTooLarge final : Error { using Error::Error; };
struct DuplicatePoint final : Error { using Error::Error; };
struct DuplicatePosition final : Error { using Error::Error; };
struct PositionOutOfRange final : Error { using Error::Error; };
struct TooFewPositions final : Error { using Error::Error; };

// codec
struct NotEnoughSymbols final : Error { using Error::Error; };

// shardio
struct TooManyEscapes final : Error { using Error::Error; };
struct BadMagic final : Error { using Error::Error; };
struct BadVersion final : Error { using Error::Error; };
struct TruncatedShard final : Error { using Error::Error; };
struct MalformedEscapes final : Error { using Error::Error; };
struct MalformedHeader final : Error { using Error::Error; };
struct LengthMismatch final : Error { using Error::Error; };

// cli-level reconstruction
struct NotEnoughShards final : Error { using Error::Error; };

}  // namespace fntrs
