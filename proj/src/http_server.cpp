// SPDX-License-Identifier: Apache-2.0
#include "httplib.h"

#include "aosd/service.hpp"

namespace aosd {

struct HttpServer::Impl {
  GameService& service;
  httplib::Server server;

  explicit Impl(GameService& s) : service(s) {
    auto dispatch = [this](const httplib::Request& req, httplib::Response& res) {
      std::string target = req.target.empty() ? req.path : req.target;
      ApiResponse out = service.handle(req.method, target, req.body);
      res.status = out.status;
      res.set_content(out.body.dump(), "application/json; charset=utf-8");
    };
    server.Get(".*", dispatch);
    server.Post(".*", dispatch);
  }
};

HttpServer::HttpServer(GameService& service) : impl_(std::make_unique<Impl>(service)) {}
HttpServer::~HttpServer() = default;

int HttpServer::bind(const std::string& host, int port) {
  if (port == 0) return impl_->server.bind_to_any_port(host);
  return impl_->server.bind_to_port(host, port) ? port : -1;
}

bool HttpServer::listen() { return impl_->server.listen_after_bind(); }

void HttpServer::stop() { impl_->server.stop(); }

}  // namespace aosd
