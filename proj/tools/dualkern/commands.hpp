#pragma once

#include <cstdint>
#include <functional>
#include <optional>
#include <string>

#include "CLI11.hpp"

namespace dkcli {

inline constexpr int exit_ok = 0;
inline constexpr int exit_usage = 2;
inline constexpr int exit_shape = 3;
inline constexpr int exit_experiment = 4;
inline constexpr int exit_nonconvergence = 5;

/// What a finished subcommand reports back for the manifest.
struct RunInfo {
  int exit_code = exit_ok;
  std::string out;
  std::optional<std::uint64_t> seed;
  bool seed_given = false;
  std::string skeleton_hash;
};

using Runner = std::function<RunInfo()>;

/// Adds every subcommand to `app`; the parsed one stores its runner in `selected`.
void register_commands(CLI::App& app, Runner& selected);

/// --seed if given, else DUALKERN_SEED, else 0.
std::uint64_t resolve_seed(const std::optional<std::uint64_t>& flag);

}  // namespace dkcli
