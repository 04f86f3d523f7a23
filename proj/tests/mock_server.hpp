#pragma once

// Eigen first: <resolv.h>, pulled in by httplib, defines a _res macro that
// collides with Eigen parameter names.
#include <Eigen/Dense>
#include <httplib.h>

#include <atomic>
#include <string>
#include <thread>

// Local chat-completions stand-in that counts the requests it receives.
class MockServer {
public:
    MockServer(int status, std::string body) {
        server_.Post(R"(.*)", [this, status, body](const httplib::Request& req, httplib::Response& res) {
            ++hits_;
            last_body_ = req.body;
            last_auth_ = req.get_header_value("Authorization");
            last_path_ = req.path;
            res.status = status;
            res.set_content(body, "application/json");
        });
        port_ = server_.bind_to_any_port("127.0.0.1");
        thread_ = std::thread([this] { server_.listen_after_bind(); });
        server_.wait_until_ready();
    }
    ~MockServer() {
        server_.stop();
        thread_.join();
    }

    std::string base() const { return "http://127.0.0.1:" + std::to_string(port_) + "/v1"; }
    int hits() const { return hits_; }
    const std::string& last_body() const { return last_body_; }
    const std::string& last_auth() const { return last_auth_; }
    const std::string& last_path() const { return last_path_; }

private:
    httplib::Server server_;
    int port_ = 0;
    std::atomic<int> hits_{0};
    std::string last_body_;
    std::string last_auth_;
    std::string last_path_;
    std::thread thread_;
};

inline std::string chat_reply(const std::string& content) {
    return R"({"choices":[{"index":0,"message":{"role":"assistant","content":")" + content + R"("}}]})";
}
