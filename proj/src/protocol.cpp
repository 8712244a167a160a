#include "holme/protocol.hpp"

#include "holme/errors.hpp"

#include <chrono>

namespace holme {

using nlohmann::json;

std::string encode_frame(std::string_view payload) {
  if (payload.size() > 0xFFFFFFFFu)
    throw Error(ErrorCode::kProtocolError, "payload exceeds 4 GiB");
  const auto n = static_cast<std::uint32_t>(payload.size());
  std::string out;
  out.reserve(4 + payload.size());
  out.push_back(static_cast<char>((n >> 24) & 0xFF));
  out.push_back(static_cast<char>((n >> 16) & 0xFF));
  out.push_back(static_cast<char>((n >> 8) & 0xFF));
  out.push_back(static_cast<char>(n & 0xFF));
  out.append(payload);
  return out;
}

void FrameDecoder::feed(std::span<const char> bytes) {
  if (oversized_) return;
  buffer_.append(bytes.data(), bytes.size());
}

std::optional<std::string> FrameDecoder::next() {
  if (oversized_ || buffer_.size() < 4) return std::nullopt;
  const auto b = [&](int i) { return static_cast<std::uint32_t>(static_cast<unsigned char>(buffer_[i])); };
  declared_ = (b(0) << 24) | (b(1) << 16) | (b(2) << 8) | b(3);
  if (declared_ > max_frame_) {
    oversized_ = true;
    buffer_.clear();
    return std::nullopt;
  }
  if (buffer_.size() < 4 + static_cast<std::size_t>(declared_)) return std::nullopt;
  std::string payload = buffer_.substr(4, declared_);
  buffer_.erase(0, 4 + static_cast<std::size_t>(declared_));
  return payload;
}

json make_envelope(std::string_view type, std::string_view request_id, json payload) {
  return {{"type", type}, {"request_id", request_id}, {"payload", std::move(payload)}};
}

json make_error(std::string_view request_id, std::string_view code, std::string_view message) {
  return make_envelope("error", request_id, {{"code", code}, {"message", message}});
}

std::string MessageHandler::handle(std::string_view text) const {
  const auto started = std::chrono::steady_clock::now();
  RequestLog log;
  auto finish = [&](const json& reply) {
    log.elapsed_ms = std::chrono::duration<double, std::milli>(
                         std::chrono::steady_clock::now() - started)
                         .count();
    if (logger_) logger_(log);
    return reply.dump();
  };
  auto fail = [&](std::string_view code, std::string_view message) {
    log.outcome = code;
    return finish(make_error(log.request_id, code, message));
  };

  json doc;
  try {
    doc = json::parse(text);
  } catch (const json::parse_error& e) {
    return fail(kErrBadPayload, std::string("invalid JSON: ") + e.what());
  }
  if (!doc.is_object()) return fail(kErrBadPayload, "envelope must be a JSON object");
  if (const auto it = doc.find("request_id"); it != doc.end() && it->is_string())
    log.request_id = it->get<std::string>();
  const auto type_it = doc.find("type");
  if (type_it == doc.end() || !type_it->is_string())
    return fail(kErrBadPayload, "envelope needs a string \"type\"");
  log.type = type_it->get<std::string>();
  if (!doc.contains("request_id") || !doc.at("request_id").is_string())
    return fail(kErrBadPayload, "envelope needs a string \"request_id\"");

  const json payload = doc.value("payload", json::object());
  if (log.type == "ping") {
    log.outcome = "ok";
    return finish(make_envelope("pong", log.request_id, payload));
  }
  if (log.type != "generate") return fail(kErrUnknownType, "unsupported type '" + log.type + "'");

  GenerateRequest request;
  try {
    request = request_from_payload(payload, log.request_id, default_generator_);
  } catch (const SchemaError& e) {
    return fail(kErrInvalidRequest, e.what());
  }
  log.generator = to_string(request.generator);
  log.variants = request.variants;
  try {
    const GenerateResponse response = generate(request);
    log.outcome = "ok";
    return finish(make_envelope("generate_result", log.request_id, response_to_payload(response)));
  } catch (const Error& e) {
    if (e.code() == ErrorCode::kGenerationFailed) return fail(kErrGenerationFailed, e.what());
    return fail(kErrInvalidRequest, e.what());
  } catch (const std::exception& e) {
    return fail(kErrInternal, e.what());
  }
}

}  // namespace holme
