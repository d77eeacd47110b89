// HTTP transport for the decomposer provider contract: one POST per task,
// JSON request in, JSON triple list out.
#include <httplib.h>

#include <nlohmann/json.hpp>

#include "stride/decomposer.hpp"

namespace stride {

namespace {

class HttpProvider : public DecomposerProvider {
 public:
  explicit HttpProvider(std::string url) {
    // Split scheme://host:port from the request path.
    auto scheme_end = url.find("://");
    auto path_start = url.find('/', scheme_end == std::string::npos ? 0 : scheme_end + 3);
    if (path_start == std::string::npos) {
      base_ = url;
      path_ = "/";
    } else {
      base_ = url.substr(0, path_start);
      path_ = url.substr(path_start);
    }
  }

  std::string name() const override { return base_ + path_; }

  ProviderResponse run(const TaskDescription& description) override {
    httplib::Client client(base_);
    client.set_connection_timeout(5, 0);
    client.set_read_timeout(30, 0);
    auto result = client.Post(path_, provider_request_json(description).dump(),
                              "application/json");
    if (!result)
      throw std::runtime_error("no response from " + name());
    if (result->status != 200)
      throw std::runtime_error("HTTP " + std::to_string(result->status) + " from " + name());
    try {
      return parse_provider_response(Json::parse(result->body));
    } catch (const nlohmann::json::exception& e) {
      throw DecompositionError("provider " + name() +
                               " returned malformed output: " + e.what());
    }
  }

 private:
  std::string base_;
  std::string path_;
};

}  // namespace

std::unique_ptr<DecomposerProvider> make_http_provider(const std::string& url) {
  return std::make_unique<HttpProvider>(url);
}

}  // namespace stride
