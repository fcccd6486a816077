#pragma once

#include <cstdint>
#include <filesystem>

#include "bep/field.hpp"

namespace bep {

/// Binary dump: magic "BEPF", then little-endian u64 version, u64 dim,
/// u64 N_i per axis, f64 L_i per axis, then interleaved re/im f64
/// coefficients in storage order.
void write_field(const std::filesystem::path& path, const SpectralField& u);

/// Reads a dump written by write_field. Throws std::runtime_error on a bad
/// magic, unsupported version or truncated payload.
SpectralField read_field(const std::filesystem::path& path);

/// One file per component: `<stem>_<i><ext>`.
void write_field(const std::filesystem::path& path, const VectorField& v);

inline constexpr std::uint64_t kFieldFormatVersion = 1;

}  // namespace bep
