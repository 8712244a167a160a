#pragma once

#include "holme/generation.hpp"

#include <nlohmann/json.hpp>

#include <cstddef>
#include <cstdint>
#include <functional>
#include <optional>
#include <span>
#include <string>
#include <string_view>

namespace holme {

inline constexpr std::uint16_t kDefaultPort = 9475;
inline constexpr std::size_t kMaxFrameBytes = 16u << 20;

// Error codes carried in "error" envelopes.
inline constexpr const char* kErrBadPayload = "bad_payload";
inline constexpr const char* kErrUnknownType = "unknown_type";
inline constexpr const char* kErrInvalidRequest = "invalid_request";
inline constexpr const char* kErrGenerationFailed = "generation_failed";
inline constexpr const char* kErrFrameTooLarge = "frame_too_large";
inline constexpr const char* kErrInternal = "internal";

// Frame = 4-byte big-endian length N, then N bytes of UTF-8 JSON.
std::string encode_frame(std::string_view payload);

/// Incremental frame reassembly over a byte stream.
class FrameDecoder {
 public:
  explicit FrameDecoder(std::size_t max_frame = kMaxFrameBytes) : max_frame_(max_frame) {}

  void feed(std::span<const char> bytes);
  /// Next complete payload, if any. After oversized() turns true the stream
  /// cannot be resynchronized and next() returns nothing.
  std::optional<std::string> next();
  bool oversized() const { return oversized_; }
  std::uint32_t declared_length() const { return declared_; }

 private:
  std::string buffer_;
  std::size_t max_frame_;
  std::uint32_t declared_ = 0;
  bool oversized_ = false;
};

nlohmann::json make_envelope(std::string_view type, std::string_view request_id,
                             nlohmann::json payload);
nlohmann::json make_error(std::string_view request_id, std::string_view code,
                          std::string_view message);

struct RequestLog {
  std::string request_id;
  std::string type;
  std::string generator;
  int variants = 0;
  double elapsed_ms = 0.0;
  std::string outcome;  // "ok" or an error code
};

/// Maps one JSON envelope to one reply envelope. Stateless and thread-safe.
class MessageHandler {
 public:
  using Logger = std::function<void(const RequestLog&)>;

  explicit MessageHandler(GeneratorKind default_generator, Logger logger = {})
      : default_generator_(default_generator), logger_(std::move(logger)) {}

  std::string handle(std::string_view text) const;
  GeneratorKind default_generator() const { return default_generator_; }

 private:
  GeneratorKind default_generator_;
  Logger logger_;
};

}  // namespace holme
