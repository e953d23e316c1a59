#include "cner/service/http.h"

#include "httplib.h"

namespace cner::service {

namespace {

constexpr const char* kJson = "application/json";

void send(httplib::Response& res, const HttpReply& reply) {
  res.status = reply.status;
  res.set_content(reply.body, kJson);
}

}  // namespace

HttpServer::HttpServer(Service& service, std::size_t max_upload_bytes)
    : service_(service), server_(std::make_unique<httplib::Server>()) {
  auto& s = *server_;
  // Headroom for multipart framing; exact limits are enforced per request.
  s.set_payload_max_length(max_upload_bytes + (1 << 20));
  // The library default sets SO_REUSEPORT, which lets a second server share
  // a port that is already being served. Plain SO_REUSEADDR makes that a bind
  // failure while still allowing quick restarts.
  s.set_socket_options([](socket_t sock) {
    int yes = 1;
    setsockopt(sock, SOL_SOCKET, SO_REUSEADDR, &yes, sizeof(yes));
  });

  s.Get("/health", [this](const httplib::Request&, httplib::Response& res) {
    send(res, service_.health());
  });
  s.Get("/extractors", [this](const httplib::Request&, httplib::Response& res) {
    send(res, service_.extractors());
  });
  s.Get("/models", [this](const httplib::Request&, httplib::Response& res) {
    send(res, service_.models());
  });
  s.Post("/analyze", [this](const httplib::Request& req, httplib::Response& res) {
    if (!req.is_multipart_form_data()) {
      send(res, service_.analyze_json(req.body));
      return;
    }
    std::string options =
        req.has_file("options") ? req.get_file_value("options").content : std::string();
    if (!req.has_file("file")) {
      // Multipart without a file: the options part must carry the text.
      send(res, service_.analyze_json(options.empty() ? "{}" : options));
      return;
    }
    const auto& file = req.get_file_value("file");
    send(res, service_.analyze_upload(file.filename, file.content, options));
  });

  s.set_error_handler([](const httplib::Request& req, httplib::Response& res) {
    if (!res.body.empty()) return;
    HttpReply reply;
    switch (res.status) {
      case 404:
        reply = error_reply(404, "NotFound", "no route for " + req.method + " " + req.path);
        break;
      case 413:
        reply = error_reply(413, "PayloadTooLarge", "request body exceeds the upload limit");
        break;
      case 400:
        reply = error_reply(400, "MalformedRequest", "malformed HTTP request");
        break;
      default:
        reply = error_reply(res.status, "InternalError",
                            "HTTP error " + std::to_string(res.status));
    }
    send(res, reply);
  });
  s.set_exception_handler(
      [](const httplib::Request&, httplib::Response& res, std::exception_ptr ep) {
        std::string what = "unexpected failure";
        try {
          std::rethrow_exception(ep);
        } catch (const std::exception& e) {
          what = e.what();
        } catch (...) {
        }
        send(res, error_reply(500, "InternalError", what));
      });
}

HttpServer::~HttpServer() { stop(); }

int HttpServer::bind(const std::string& host, int port) {
  if (port == 0) return server_->bind_to_any_port(host);
  return server_->bind_to_port(host, port) ? port : -1;
}

bool HttpServer::listen() { return server_->listen_after_bind(); }

void HttpServer::start() {
  thread_ = std::thread([this] { server_->listen_after_bind(); });
  server_->wait_until_ready();
}

void HttpServer::stop() {
  server_->stop();
  if (thread_.joinable()) thread_.join();
}

}  // namespace cner::service
