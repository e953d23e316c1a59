#pragma once

#include <chrono>
#include <string>
#include <thread>

#include "httplib.h"

namespace cner::testing {

using namespace std::chrono_literals;

// Adapter-protocol stub on an ephemeral port answering with a fixed body.
class StubAdapter {
 public:
  explicit StubAdapter(std::string body, int status = 200,
                       std::chrono::milliseconds delay = 0ms)
      : body_(std::move(body)), status_(status), delay_(delay) {
    server_.Post("/ner", [this](const httplib::Request& req, httplib::Response& res) {
      last_request_ = req.body;
      if (delay_.count()) std::this_thread::sleep_for(delay_);
      res.status = status_;
      res.set_content(body_, "application/json");
    });
    port_ = server_.bind_to_any_port("127.0.0.1");
    thread_ = std::thread([this] { server_.listen_after_bind(); });
    server_.wait_until_ready();
  }
  ~StubAdapter() {
    server_.stop();
    thread_.join();
  }
  std::string url() const { return "http://127.0.0.1:" + std::to_string(port_) + "/ner"; }
  std::string last_request() const { return last_request_; }

 private:
  httplib::Server server_;
  std::string body_;
  int status_;
  std::chrono::milliseconds delay_;
  int port_ = 0;
  std::thread thread_;
  std::string last_request_;
};

}  // namespace cner::testing
