#pragma once

#include <cstdint>
#include <filesystem>
#include <string>
#include <string_view>

#include "lvattract/model.hpp"

namespace lv {

/// Parses the TOML system description:
///
///   [system]          n, controlled (default true)
///   [species.<i>]     b, mu                       (i is 1-based)
///   [interaction]     a = [[...], ...]            (n x n)
///   [controls.<i>]    c, d (1), e (1), kernel     (required when controlled)
///   [kernels.<i>.<j>] kernel for a_ij; [kernels.default] fills the rest
///   [perturbations.<i>] step, values
///
/// A kernel is a table with `type` one of
///   point        delays = [...], weights = [...] (weights default to equal)
///   exponential  rate
///   erlang       rate, order
///   table        step, densities, normalize (default false)
/// Missing kernels are point masses at zero. Throws Error(Parse) with
/// "source:line:column" on syntax or schema errors and Error(InvalidArgument)
/// listing every validation failure.
SystemSpec parse_spec(std::string_view text, std::string_view source = "<input>");
SystemSpec load_spec(const std::filesystem::path& path);

/// Writes the spec back in the same schema with every kernel spelled out and
/// numbers printed with 17 significant digits.
std::string to_toml(const SystemSpec& spec);

/// Canonical JSON text (sorted keys, shortest round-trip numbers).
std::string canonical_form(const SystemSpec& spec);

/// 64-bit FNV-1a over canonical_form, as 16 hex digits.
std::string spec_hash(const SystemSpec& spec);
std::uint64_t fnv1a64(std::string_view bytes);

}  // namespace lv
