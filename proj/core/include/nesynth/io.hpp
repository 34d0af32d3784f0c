#pragma once

#include "nesynth/engine.hpp"
#include "nesynth/search_dist.hpp"
#include "nesynth/sketch.hpp"
#include "nesynth/spec_set.hpp"

#include <filesystem>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace nesynth {

/// Throws Error(Io) if the file cannot be read or written.
std::string read_text_file(const std::filesystem::path& path);
void write_text_file(const std::filesystem::path& path, std::string_view contents);

// Spec files are CSV with header `in_0,...,in_{k-1},out`. Arity is the
// number of `in_*` columns. Errors are Error(Spec) and name the offending
// row and column.
SpecSet parse_spec(std::string_view text);
SpecSet load_spec(const std::filesystem::path& path);
std::string format_spec(const SpecSet& spec);

/// Input rows for spec generation: CSV with header `in_0,...,in_{k-1}`.
std::vector<std::vector<double>> parse_inputs(std::string_view text);

/// Flat JSON object; unknown keys, wrong types and constraint violations
/// are Error(Config). Missing keys keep their TrainConfig defaults.
TrainConfig parse_config(std::string_view text);
TrainConfig load_config(const std::filesystem::path& path);

// Theta documents: JSON array over holes of {"kind":"cat","logits":[...]}
// or {"kind":"real","mu":m,"sigma":s}. Numbers use shortest round-trip
// decimals, so load(save(x)) == x bit for bit.
std::string format_thetas(const Thetas& thetas);
Thetas parse_thetas(std::string_view text);
/// Also checks the document against the sketch's hole table.
Thetas parse_thetas(std::string_view text, const Sketch& sketch);
void save_thetas(const Thetas& thetas, const std::filesystem::path& path);
Thetas load_thetas(const std::filesystem::path& path);
Thetas load_thetas(const std::filesystem::path& path, const Sketch& sketch);

/// CSV `iteration,mean_population_loss,argmax_loss,best_so_far_loss` keeping
/// every `log_every`-th record and always the last one.
std::string format_loss_log(std::span<const TrainRecord> records, std::size_t log_every);

/// Shortest round-trip decimal, no forced decimal point.
std::string format_number(double value);

} // namespace nesynth
