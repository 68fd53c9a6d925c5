#pragma once
#include <filesystem>

#include "synseg/ansatz.hpp"
#include "synseg/ground_state.hpp"

namespace synseg {

// <stem>.csv holds r,w,w' rows; <stem>.json holds the scalar metadata.
void write_profile(const RadialProfile& p, const std::filesystem::path& stem);
RadialProfile read_profile(const std::filesystem::path& stem);

// <stem>.bin holds the stacked (u, v, w) doubles; <stem>.json describes grid and symmetry.
void write_field(const Field3& f, const std::filesystem::path& stem);
Field3 read_field(const std::filesystem::path& stem);

}  // namespace synseg
