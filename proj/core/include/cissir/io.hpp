#pragma once

#include <filesystem>
#include <string>

#include "cissir/channel.hpp"
#include "cissir/codebook.hpp"

namespace cissir {

// Writes to a temporary sibling and renames it over the target.
void write_file_atomic(const std::filesystem::path& path, const std::string& contents);

// Channel text format; ts = 0 marks a continuous (undiscretized) channel.
std::string format_channel(const TappedSiChannel& channel, double sample_interval);
void write_channel_file(const std::filesystem::path& path, const TappedSiChannel& channel,
                        double sample_interval);

struct ChannelFile {
  TappedSiChannel channel;
  double sample_interval;
};
ChannelFile parse_channel(const std::string& text);
ChannelFile read_channel_file(const std::filesystem::path& path);

std::string format_codebook(const Codebook& cb);
void write_codebook_file(const std::filesystem::path& path, const Codebook& cb);
Codebook parse_codebook(const std::string& text);
Codebook read_codebook_file(const std::filesystem::path& path);

// Shortest decimal text that round-trips the double.
std::string format_double(double v);

}  // namespace cissir
