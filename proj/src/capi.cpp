#include "hallbase/hallbase.h"

#include <cstdlib>
#include <cstring>
#include <string>

#include "runner.hpp"

namespace {

thread_local std::string g_last_error;

char* dup_string(const std::string& s) {
  char* out = static_cast<char*>(std::malloc(s.size() + 1));
  if (out) std::memcpy(out, s.c_str(), s.size() + 1);
  return out;
}

hallbase::ordered_json error_doc(const char* code, const std::string& message) {
  hallbase::ordered_json doc;
  doc["request"] = nullptr;
  doc["status"] = "error";
  doc["error"] = {{"code", code}, {"message", message}};
  return doc;
}

int deliver(const hallbase::RunOutcome& out, char** response_json) {
  if (out.exit_code != 0) {
    if (out.response.contains("error"))
      g_last_error = out.response.at("error").at("message").get<std::string>();
    else
      g_last_error = "status " + out.response.value("status", std::string("fail"));
  }
  if (response_json) *response_json = dup_string(hallbase::canonical_dump(out.response));
  return out.exit_code;
}

int run_text(const char* text, char** response_json, bool replay) {
  g_last_error.clear();
  if (response_json) *response_json = nullptr;
  try {
    if (!text) {
      hallbase::RunOutcome out{error_doc("usage", "null request"), HB_ERROR};
      return deliver(out, response_json);
    }
    hallbase::ordered_json req =
        hallbase::ordered_json::parse(text, /*callback=*/nullptr, /*allow_exceptions=*/false);
    if (req.is_discarded()) {
      hallbase::RunOutcome out{error_doc("parse_error", "input is not valid JSON"), HB_ERROR};
      return deliver(out, response_json);
    }
    hallbase::RunOutcome out =
        replay ? hallbase::replay_document(req) : hallbase::run_request(req);
    return deliver(out, response_json);
  } catch (const std::exception& e) {
    g_last_error = e.what();
    if (response_json) *response_json = dup_string(hallbase::canonical_dump(error_doc("internal", e.what())));
    return HB_ERROR;
  } catch (...) {
    g_last_error = "unknown error";
    if (response_json) *response_json = dup_string(hallbase::canonical_dump(error_doc("internal", "unknown error")));
    return HB_ERROR;
  }
}

}  // namespace

extern "C" {

int hb_run_json(const char* request_json, char** response_json) {
  return run_text(request_json, response_json, /*replay=*/false);
}

int hb_replay_json(const char* document_json, char** response_json) {
  return run_text(document_json, response_json, /*replay=*/true);
}

void hb_string_free(char* s) { std::free(s); }

const char* hb_last_error(void) { return g_last_error.c_str(); }

const char* hb_version(void) { return "1.0.0"; }

}  // extern "C"
