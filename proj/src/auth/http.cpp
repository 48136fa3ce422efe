#include "pixi/auth/http.hpp"

#include "httplib.h"
#include "json.hpp"

namespace pixi::auth {

using json = nlohmann::ordered_json;

namespace {

constexpr const char* kJson = "application/json";

json body_of(const httplib::Request& req) {
  if (req.body.empty()) return json::object();
  try {
    auto j = json::parse(req.body);
    if (!j.is_object()) throw Error(ErrorCode::Parse, "request body must be a JSON object");
    return j;
  } catch (const json::parse_error&) {
    throw Error(ErrorCode::Parse, "request body is not valid JSON");
  }
}

std::string string_field(const json& j, const char* key) {
  if (!j.contains(key) || !j.at(key).is_string()) {
    throw Error(ErrorCode::InvalidArgument, std::string("'") + key + "' must be a string");
  }
  return j.at(key).get<std::string>();
}

bool bool_field(const json& j, const char* key, bool fallback) {
  if (!j.contains(key) || j.at(key).is_null()) return fallback;
  if (!j.at(key).is_boolean()) {
    throw Error(ErrorCode::InvalidArgument, std::string("'") + key + "' must be a boolean");
  }
  return j.at(key).get<bool>();
}

std::int64_t int_field(const json& j, const char* key) {
  if (!j.contains(key) || !j.at(key).is_number_integer()) {
    throw Error(ErrorCode::InvalidArgument, std::string("'") + key + "' must be an integer");
  }
  return j.at(key).get<std::int64_t>();
}

void send_error(httplib::Response& res, ErrorCode code, const std::string& message) {
  res.status = http_status(code);
  json j;
  j["error"] = {{"code", to_string(code)}, {"message", message}};
  res.set_content(j.dump(), kJson);
}

// Wraps a handler so that library errors become JSON error responses.
template <typename Fn>
httplib::Server::Handler guarded(Fn fn) {
  return [fn](const httplib::Request& req, httplib::Response& res) {
    try {
      fn(req, res);
    } catch (const Error& e) {
      send_error(res, e.code(), e.what());
    } catch (const json::exception& e) {
      send_error(res, ErrorCode::InvalidArgument, e.what());
    } catch (const std::exception& e) {
      send_error(res, ErrorCode::Internal, e.what());
    }
  };
}

void send(httplib::Response& res, const json& j) { res.set_content(j.dump(), kJson); }

}  // namespace

int http_status(ErrorCode code) {
  switch (code) {
    case ErrorCode::InvalidArgument:
    case ErrorCode::Parse:
      return 400;
    case ErrorCode::Forbidden:
      return 403;
    case ErrorCode::NotFound:
      return 404;
    case ErrorCode::WrongState:
    case ErrorCode::Conflict:
      return 409;
    case ErrorCode::Mismatch:
    case ErrorCode::PolicyViolation:
      return 422;
    case ErrorCode::EpisodeExhausted:
      return 429;
    case ErrorCode::Io:
    case ErrorCode::Internal:
      return 500;
  }
  return 500;
}

void install_routes(httplib::Server& server, Service& service) {
  const std::string session_path = R"(/api/flow/([0-9A-Za-z_-]+))";

  server.Post("/api/study/enroll", guarded([&](const auto& req, auto& res) {
    const auto body = body_of(req);
    const auto e = service.enroll(string_field(body, "worker_id"));
    send(res, {{"session_id", e.session_id}, {"condition", flow::to_string(e.condition)}, {"session", e.session}});
  }));

  server.Post(session_path + "/intro/next", guarded([&](const auto& req, auto& res) {
    send(res, service.intro_next(req.matches[1]));
  }));
  server.Get(session_path + "/categories", guarded([&](const auto& req, auto& res) {
    send(res, service.categories(req.matches[1]));
  }));
  server.Post(session_path + "/category", guarded([&](const auto& req, auto& res) {
    const auto body = body_of(req);
    std::optional<bool> scrolled;
    if (body.contains("scrolled") && !body["scrolled"].is_null()) scrolled = bool_field(body, "scrolled", false);
    send(res, service.select_category(req.matches[1], content::parse_category(string_field(body, "category")),
                                      scrolled));
  }));
  server.Get(session_path + "/items", guarded([&](const auto& req, auto& res) {
    send(res, service.items(req.matches[1]));
  }));
  server.Get(session_path + "/items/search", guarded([&](const auto& req, auto& res) {
    send(res, service.search(req.matches[1], req.get_param_value("q")));
  }));
  server.Post(session_path + "/item", guarded([&](const auto& req, auto& res) {
    const auto body = body_of(req);
    send(res, service.select_item(req.matches[1], string_field(body, "item_id"),
                                  bool_field(body, "via_search", false)));
  }));
  server.Get(session_path + "/excerpt", guarded([&](const auto& req, auto& res) {
    send(res, service.excerpt(req.matches[1]));
  }));
  server.Post(session_path + "/excerpt/shuffle", guarded([&](const auto& req, auto& res) {
    send(res, service.shuffle(req.matches[1]));
  }));
  server.Post(session_path + "/keyword", guarded([&](const auto& req, auto& res) {
    const auto body = body_of(req);
    const auto position = int_field(body, "position");
    if (position < 0) throw Error(ErrorCode::InvalidArgument, "'position' must not be negative");
    send(res, service.select_keyword(req.matches[1], string_field(body, "word"),
                                     static_cast<std::size_t>(position)));
  }));
  server.Get(session_path + "/splash", guarded([&](const auto& req, auto& res) {
    send(res, service.splash(req.matches[1]));
  }));
  server.Post(session_path + "/splash/dismiss", guarded([&](const auto& req, auto& res) {
    const auto body = body_of(req);
    send(res, service.dismiss_splash(req.matches[1], bool_field(body, "early", false)));
  }));
  server.Get(session_path + "/register-context", guarded([&](const auto& req, auto& res) {
    send(res, service.register_context(req.matches[1]));
  }));

  server.Post("/api/register", guarded([&](const auto& req, auto& res) {
    const auto body = body_of(req);
    const auto r = service.register_account(string_field(body, "session_id"), string_field(body, "username"),
                                            string_field(body, "password"));
    res.status = 201;
    send(res, {{"username", r.username},
               {"condition", flow::to_string(r.condition)},
               {"registration_duration_s", r.registration_duration_s}});
  }));

  server.Post("/api/login", guarded([&](const auto& req, auto& res) {
    const auto body = body_of(req);
    const auto r = service.login(string_field(body, "username"), string_field(body, "password"),
                                 int_field(body, "page_loaded_at"));
    send(res, {{"success", r.success},
               {"episode", r.episode},
               {"attempt_index", r.attempt_index},
               {"duration_s", r.duration_s},
               {"attempts_remaining", r.attempts_remaining}});
  }));

  server.Post("/api/hints/login/start", guarded([&](const auto& req, auto& res) {
    const auto body = body_of(req);
    const auto h = service.start_hint_login(string_field(body, "username"));
    send(res, {{"session_id", h.session_id}, {"session", h.session}});
  }));
  server.Post("/api/hints/login/keyword", guarded([&](const auto& req, auto& res) {
    const auto body = body_of(req);
    const auto session_id = string_field(body, "session_id");
    const auto view = service.session_view(session_id);
    if (view["session"]["purpose"] != "hint_login") {
      throw Error(ErrorCode::WrongState, "not a hint-login session");
    }
    const auto position = int_field(body, "position");
    if (position < 0) throw Error(ErrorCode::InvalidArgument, "'position' must not be negative");
    send(res, service.select_keyword(session_id, string_field(body, "word"), static_cast<std::size_t>(position)));
  }));

  server.Post("/api/questionnaire", guarded([&](const auto& req, auto& res) {
    const json body = body_of(req);
    records::Questionnaire q;
    if (!body.contains("sus") || !body["sus"].is_array()) {
      throw Error(ErrorCode::InvalidArgument, "'sus' must be an array of 10 integers");
    }
    q.sus = body["sus"].get<std::vector<int>>();
    q.satisfaction = static_cast<int>(int_field(body, "satisfaction"));
    q.attention = string_field(body, "attention");
    service.submit_questionnaire(string_field(body, "username"), q);
    res.status = 204;
  }));

  server.Post("/api/export", guarded([&](const auto&, auto& res) {
    res.set_content(service.export_jsonl(), "application/x-ndjson; charset=utf-8");
  }));

  server.set_error_handler([](const httplib::Request&, httplib::Response& res) {
    if (!res.body.empty()) return;
    if (res.status == 404) {
      send_error(res, ErrorCode::NotFound, "no such endpoint");
    } else if (res.status == 405) {
      send_error(res, ErrorCode::InvalidArgument, "method not allowed");
      res.status = 405;
    }
  });
}

}  // namespace pixi::auth
