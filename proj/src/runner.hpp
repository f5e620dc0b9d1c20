#pragma once

#include "serialize.hpp"

namespace hallbase {

// A completed request: the response document embeds the normalized request,
// a status of "ok" (exit 0), "fail" (exit 1, a verification or search did
// not reach its goal), or "error" (exit 2, bad usage or exhausted budget),
// and the result payload. Responses are deterministic functions of the
// request, which is what makes stored documents replayable.
struct RunOutcome {
  ordered_json response;
  int exit_code = 0;
};

RunOutcome run_request(const ordered_json& request);

// Re-runs the request embedded in a stored response document and compares
// the canonical dumps byte for byte.
RunOutcome replay_document(const ordered_json& document);

}  // namespace hallbase
