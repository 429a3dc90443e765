#ifndef EDUSEG_MODEL_IO_HPP
#define EDUSEG_MODEL_IO_HPP

#include <cstdint>
#include <string>
#include <string_view>

#include "eduseg/pipeline.hpp"

namespace eduseg {

/// 64-bit FNV-1a over raw bytes.
std::uint64_t fnv1a64(std::string_view data);

/// Versioned single-document JSON holding the configuration, both
/// vocabularies and both weight sets, sealed with a fingerprint over the
/// canonical serialization of everything else. Loading recomputes and
/// compares the fingerprint; any mismatch or malformation raises
/// ModelError.
std::string serialize_segmenter(const Segmenter& segmenter);
Segmenter deserialize_segmenter(const std::string& text);

void save_segmenter(const Segmenter& segmenter, const std::string& path);
Segmenter load_segmenter(const std::string& path);

}  // namespace eduseg

#endif
