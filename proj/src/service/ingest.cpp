#include "cner/service/ingest.h"

#include <expat.h>
#include <zlib.h>

#include <algorithm>
#include <array>
#include <cstdint>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <random>

#include "cner/common/error.h"
#include "cner/text/unicode.h"

namespace cner::service {

namespace {

[[noreturn]] void corrupt(const std::string& what) {
  throw Error(ErrorCode::kCorruptFile, what);
}

std::uint32_t le16(std::string_view b, std::size_t at) {
  if (at + 2 > b.size()) corrupt("zip: truncated record");
  return static_cast<std::uint8_t>(b[at]) | static_cast<std::uint8_t>(b[at + 1]) << 8;
}

std::uint32_t le32(std::string_view b, std::size_t at) {
  return le16(b, at) | le16(b, at + 2) << 16;
}

constexpr std::uint32_t kEocdSig = 0x06054b50;
constexpr std::uint32_t kCentralSig = 0x02014b50;
constexpr std::uint32_t kLocalSig = 0x04034b50;

std::string inflate_raw(std::string_view data, std::size_t expected) {
  std::string out(expected, '\0');
  z_stream zs{};
  if (inflateInit2(&zs, -MAX_WBITS) != Z_OK) corrupt("zip: inflate init failed");
  zs.next_in = reinterpret_cast<Bytef*>(const_cast<char*>(data.data()));
  zs.avail_in = static_cast<uInt>(data.size());
  zs.next_out = reinterpret_cast<Bytef*>(out.data());
  zs.avail_out = static_cast<uInt>(out.size());
  int rc = inflate(&zs, Z_FINISH);
  std::size_t produced = zs.total_out;
  inflateEnd(&zs);
  if (rc != Z_STREAM_END || produced != expected) corrupt("zip: bad deflate stream");
  return out;
}

std::string lower_extension(const std::string& filename) {
  std::string ext = std::filesystem::path(filename).extension().string();
  std::transform(ext.begin(), ext.end(), ext.begin(),
                 [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
  return ext;
}

// Collects paragraph text. Nested paragraphs (notes, frames) are folded into
// the enclosing one.
struct OdtState {
  std::vector<std::string> paragraphs;
  int depth = 0;
};

constexpr std::string_view kTextNs = "urn:oasis:names:tc:opendocument:xmlns:text:1.0";

std::string_view local_in_text_ns(const XML_Char* name) {
  std::string_view n(name);
  // Expat joins namespace and local name with the separator '|'.
  std::size_t bar = n.rfind('|');
  if (bar == std::string_view::npos || n.substr(0, bar) != kTextNs) return {};
  return n.substr(bar + 1);
}

void XMLCALL on_start(void* user, const XML_Char* name, const XML_Char** attrs) {
  auto* st = static_cast<OdtState*>(user);
  std::string_view local = local_in_text_ns(name);
  if (local == "p" || local == "h") {
    if (st->depth++ == 0) st->paragraphs.emplace_back();
    return;
  }
  if (st->depth == 0) return;
  if (local == "s") {
    std::size_t count = 1;
    for (std::size_t i = 0; attrs[i]; i += 2)
      if (local_in_text_ns(attrs[i]) == "c") count = std::max<long>(1, std::atol(attrs[i + 1]));
    st->paragraphs.back().append(std::min<std::size_t>(count, 1024), ' ');
  } else if (local == "tab") {
    st->paragraphs.back() += '\t';
  } else if (local == "line-break") {
    st->paragraphs.back() += '\n';
  }
}

void XMLCALL on_end(void* user, const XML_Char* name) {
  auto* st = static_cast<OdtState*>(user);
  std::string_view local = local_in_text_ns(name);
  if ((local == "p" || local == "h") && st->depth > 0) --st->depth;
}

void XMLCALL on_text(void* user, const XML_Char* s, int len) {
  auto* st = static_cast<OdtState*>(user);
  if (st->depth > 0) st->paragraphs.back().append(s, static_cast<std::size_t>(len));
}

std::string run_converter(const std::string& command, std::string_view bytes) {
  namespace fs = std::filesystem;
  std::mt19937_64 rng(std::random_device{}());
  fs::path tmp = fs::temp_directory_path() / ("cner-doc-" + std::to_string(rng()) + ".doc");
  {
    std::ofstream out(tmp, std::ios::binary);
    out.write(bytes.data(), static_cast<std::streamsize>(bytes.size()));
    if (!out) throw Error(ErrorCode::kIo, "cannot stage upload for converter");
  }
  std::string cmd = command + " < '" + tmp.string() + "'";
  std::string output;
  FILE* pipe = popen(cmd.c_str(), "r");
  if (!pipe) {
    fs::remove(tmp);
    throw Error(ErrorCode::kUnsupportedFormat, ".doc converter could not be started");
  }
  std::array<char, 4096> buf;
  std::size_t n;
  while ((n = std::fread(buf.data(), 1, buf.size(), pipe)) > 0) output.append(buf.data(), n);
  int status = pclose(pipe);
  std::error_code ec;
  fs::remove(tmp, ec);
  if (status != 0) throw Error(ErrorCode::kCorruptFile, ".doc converter failed on this file");
  return output;
}

std::string decode_text(std::string_view bytes, std::vector<std::string>& warnings) {
  if (bytes.substr(0, 3) == "\xEF\xBB\xBF") bytes.remove_prefix(3);
  if (text::is_valid_utf8(bytes)) return std::string(bytes);
  warnings.push_back("input is not valid UTF-8; decoded as Latin-1");
  return text::latin1_to_utf8(bytes);
}

}  // namespace

std::optional<std::string> read_zip_member(std::string_view zip, std::string_view name) {
  if (zip.size() < 22) corrupt("zip: archive too short");
  std::size_t lowest = zip.size() >= 22 + 65535 ? zip.size() - 22 - 65535 : 0;
  std::size_t eocd = std::string_view::npos;
  for (std::size_t at = zip.size() - 22 + 1; at-- > lowest;) {
    if (le32(zip, at) == kEocdSig) {
      eocd = at;
      break;
    }
  }
  if (eocd == std::string_view::npos) corrupt("zip: end of central directory not found");
  std::size_t entries = le16(zip, eocd + 10);
  std::size_t cd_offset = le32(zip, eocd + 16);
  if (cd_offset == 0xFFFFFFFF) corrupt("zip: zip64 archives are not supported");

  std::size_t at = cd_offset;
  for (std::size_t e = 0; e < entries; ++e) {
    if (le32(zip, at) != kCentralSig) corrupt("zip: bad central directory entry");
    std::uint32_t method = le16(zip, at + 10);
    std::uint32_t crc = le32(zip, at + 16);
    std::size_t csize = le32(zip, at + 20);
    std::size_t usize = le32(zip, at + 24);
    std::size_t name_len = le16(zip, at + 28);
    std::size_t extra_len = le16(zip, at + 30);
    std::size_t comment_len = le16(zip, at + 32);
    std::size_t local = le32(zip, at + 42);
    if (at + 46 + name_len > zip.size()) corrupt("zip: truncated central directory");
    std::string_view entry_name = zip.substr(at + 46, name_len);
    at += 46 + name_len + extra_len + comment_len;
    if (entry_name != name) continue;

    if (le32(zip, local) != kLocalSig) corrupt("zip: bad local header");
    std::size_t data = local + 30 + le16(zip, local + 26) + le16(zip, local + 28);
    if (data > zip.size() || csize > zip.size() - data) corrupt("zip: member data out of range");
    std::string_view raw = zip.substr(data, csize);
    if (usize > (std::size_t{1} << 30)) corrupt("zip: member too large");
    std::string out;
    if (method == 0) {
      if (csize != usize) corrupt("zip: stored size mismatch");
      out = std::string(raw);
    } else if (method == 8) {
      out = inflate_raw(raw, usize);
    } else {
      corrupt("zip: unsupported compression method " + std::to_string(method));
    }
    uLong actual = crc32(0L, reinterpret_cast<const Bytef*>(out.data()),
                         static_cast<uInt>(out.size()));
    if (actual != crc) corrupt("zip: CRC mismatch for " + std::string(name));
    return out;
  }
  return std::nullopt;
}

std::string odt_content_text(std::string_view content_xml) {
  OdtState st;
  XML_Parser parser = XML_ParserCreateNS("UTF-8", '|');
  XML_SetUserData(parser, &st);
  XML_SetElementHandler(parser, on_start, on_end);
  XML_SetCharacterDataHandler(parser, on_text);
  bool ok = XML_Parse(parser, content_xml.data(), static_cast<int>(content_xml.size()), 1) ==
            XML_STATUS_OK;
  std::string error = ok ? "" : XML_ErrorString(XML_GetErrorCode(parser));
  XML_ParserFree(parser);
  if (!ok) corrupt("odt: malformed content.xml: " + error);
  std::string out;
  for (std::size_t i = 0; i < st.paragraphs.size(); ++i) {
    if (i) out += '\n';
    out += st.paragraphs[i];
  }
  return out;
}

IngestResult ingest_file(const std::string& filename, std::string_view bytes,
                         const IngestOptions& options) {
  if (bytes.size() > options.max_bytes)
    throw Error(ErrorCode::kPayloadTooLarge,
                "upload of " + std::to_string(bytes.size()) + " bytes exceeds the limit of " +
                    std::to_string(options.max_bytes));
  std::string ext = lower_extension(filename);
  IngestResult r;
  if (ext == ".txt") {
    r.text = decode_text(bytes, r.warnings);
  } else if (ext == ".odt") {
    auto content = read_zip_member(bytes, "content.xml");
    if (!content) corrupt("odt: archive has no content.xml");
    r.text = odt_content_text(*content);
  } else if (ext == ".doc") {
    if (options.doc_converter.empty())
      throw Error(ErrorCode::kUnsupportedFormat,
                  ".doc files need an external converter; set doc_converter in the service "
                  "config, or upload .txt or .odt");
    r.text = decode_text(run_converter(options.doc_converter, bytes), r.warnings);
  } else {
    throw Error(ErrorCode::kUnsupportedFormat,
                "unsupported file type '" + ext + "'; accepted: .txt, .odt, .doc");
  }
  return r;
}

}  // namespace cner::service
