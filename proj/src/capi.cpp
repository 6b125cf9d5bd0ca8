#include "einstein_tubes.h"

#include <cmath>
#include <cstring>
#include <string>

#include "et/commands.hpp"
#include "et/errors.hpp"

struct et_session {
  et::RunConfig cfg;
  std::string last_error;
};

namespace {

constexpr const char* kVersion = "1.0.0";

et_status fail(et_session* s, et_status code, const std::string& msg) {
  if (s) s->last_error = msg;
  return code;
}

}  // namespace

extern "C" {

et_status et_session_create(et_session** out) {
  if (!out) return ET_INVALID_ARGUMENT;
  *out = new (std::nothrow) et_session();
  return *out ? ET_OK : ET_RUNTIME_ERROR;
}

void et_session_destroy(et_session* s) { delete s; }

et_status et_config_set_string(et_session* s, const char* key,
                               const char* value) {
  if (!s) return ET_INVALID_ARGUMENT;
  if (!key || !value)
    return fail(s, ET_INVALID_ARGUMENT, "null key or value");
  std::string k = key, v = value;
  if (k == "command")
    s->cfg.command = v;
  else if (k == "spec")
    s->cfg.spec_path = v;
  else if (k == "out")
    s->cfg.out_dir = v;
  else if (k == "component")
    s->cfg.component = v;
  else if (k == "kind")
    s->cfg.kind = v;
  else if (k == "suite")
    s->cfg.suite = v;
  else
    return fail(s, ET_BAD_KEY, "unknown string key: " + k);
  return ET_OK;
}

et_status et_config_set_int(et_session* s, const char* key, long long value) {
  if (!s) return ET_INVALID_ARGUMENT;
  if (!key) return fail(s, ET_INVALID_ARGUMENT, "null key");
  std::string k = key;
  if (k == "seed") {
    if (value < 0) return fail(s, ET_INVALID_ARGUMENT, "seed must be >= 0");
    s->cfg.seed = (unsigned)value;
  } else if (k == "grid_t" || k == "grid_theta") {
    if (value < 2 || value > 1 << 20)
      return fail(s, ET_INVALID_ARGUMENT, "grid size out of range");
    if (s->cfg.grid.size() < 2) s->cfg.grid.resize(2, 0);
    s->cfg.grid[k == "grid_t" ? 0 : 1] = (int)value;
  } else {
    return fail(s, ET_BAD_KEY, "unknown integer key: " + k);
  }
  return ET_OK;
}

et_status et_config_set_tolerance(et_session* s, const char* name,
                                  double value) {
  if (!s) return ET_INVALID_ARGUMENT;
  if (!name) return fail(s, ET_INVALID_ARGUMENT, "null tolerance name");
  if (!std::isfinite(value))
    return fail(s, ET_INVALID_ARGUMENT, "tolerance must be finite");
  s->cfg.tol[name] = value;
  return ET_OK;
}

et_status et_run(et_session* s, int* exit_code) {
  if (!s || !exit_code) return ET_INVALID_ARGUMENT;
  try {
    *exit_code = et::run_command(s->cfg);
    return ET_OK;
  } catch (const std::exception& e) {
    return fail(s, ET_RUNTIME_ERROR, e.what());
  } catch (...) {
    return fail(s, ET_RUNTIME_ERROR, "unknown failure");
  }
}

const char* et_last_error(const et_session* s) {
  return s ? s->last_error.c_str() : "null session";
}

char* et_version(void) {
  char* out = new (std::nothrow) char[std::strlen(kVersion) + 1];
  if (out) std::strcpy(out, kVersion);
  return out;
}

void et_string_free(char* s) { delete[] s; }

}  // extern "C"
