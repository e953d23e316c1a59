#pragma once

#include <cstddef>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace cner::service {

// Reads one member of a zip archive (stored or deflated), checking its CRC.
// Returns nullopt when the member is absent; throws kCorruptFile when the
// archive itself is damaged.
std::optional<std::string> read_zip_member(std::string_view archive, std::string_view name);

// Text of the paragraph and heading elements of an OpenDocument content.xml,
// one per line. Throws kCorruptFile on malformed XML.
std::string odt_content_text(std::string_view content_xml);

struct IngestOptions {
  std::size_t max_bytes = 5242880;
  std::string doc_converter;  // shell command reading .doc bytes on stdin
};

struct IngestResult {
  std::string text;
  std::vector<std::string> warnings;
};

// Dispatches on the (case-insensitive) extension of filename. Throws
// kPayloadTooLarge, kUnsupportedFormat and kCorruptFile.
IngestResult ingest_file(const std::string& filename, std::string_view bytes,
                         const IngestOptions& options);

}  // namespace cner::service
