#pragma once

#include <memory>
#include <string>
#include <thread>

#include "cner/service/service.h"

namespace httplib {
class Server;
}

namespace cner::service {

// Routes GET /health, /extractors, /models and POST /analyze onto a Service.
class HttpServer {
 public:
  HttpServer(Service& service, std::size_t max_upload_bytes);
  ~HttpServer();
  HttpServer(const HttpServer&) = delete;
  HttpServer& operator=(const HttpServer&) = delete;

  // Port 0 picks a free port. Returns the bound port, or -1 on failure.
  int bind(const std::string& host, int port);
  // Blocks until stop().
  bool listen();
  // listen() on a background thread; returns once the server accepts.
  void start();
  void stop();

 private:
  Service& service_;
  std::unique_ptr<httplib::Server> server_;
  std::thread thread_;
};

}  // namespace cner::service
