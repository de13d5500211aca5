#pragma once

#include <filesystem>
#include <memory>
#include <optional>
#include <ostream>
#include <string>
#include <string_view>
#include <vector>

namespace voxcast {

/// Read-only view of a dataset root: every subdirectory holding a valid
/// manifest.json is a dataset. Only files listed in a manifest are exposed.
class DatasetCatalog {
 public:
  explicit DatasetCatalog(std::filesystem::path root);

  /// Dataset ids sorted lexicographically. Throws kIo for an unreadable root.
  std::vector<std::string> list() const;

  struct Lookup {
    int status = 200;          // 200, 400 or 404
    std::string message;       // reason when status != 200
    std::filesystem::path file;
    std::string contentType;
  };

  Lookup manifest(std::string_view id) const;
  Lookup media(std::string_view id, std::string_view file) const;

  const std::filesystem::path& root() const noexcept { return root_; }

 private:
  std::filesystem::path root_;
};

/// application/json, image/png, video/mp4, video/ogg, ... by extension.
std::string mediaContentType(std::string_view fileName);

struct ServerConfig {
  std::filesystem::path root;
  std::string host = "127.0.0.1";
  int port = 8080;  // 0 picks a free port
  std::ostream* log = nullptr;
};

/// HTTP front end for a DatasetCatalog:
///   GET /datasets                      -> JSON array of ids
///   GET /datasets/{id}/manifest.json   -> stored manifest bytes
///   GET /datasets/{id}/media/{file}    -> media bytes, byte ranges honoured
/// Every response carries permissive CORS headers.
class DatasetServer {
 public:
  explicit DatasetServer(ServerConfig config);
  ~DatasetServer();

  DatasetServer(const DatasetServer&) = delete;
  DatasetServer& operator=(const DatasetServer&) = delete;

  /// Binds the listening socket and logs the discovered datasets. Returns the
  /// bound port.
  int bind();
  /// Serves until stop(); binds first if needed.
  void run();
  /// run() on a background thread; returns once the socket is bound.
  void start();
  void stop();

  int port() const noexcept { return port_; }
  const ServerConfig& config() const noexcept { return config_; }

 private:
  class Impl;
  std::unique_ptr<Impl> impl_;
  ServerConfig config_;
  int port_ = -1;
};

}  // namespace voxcast
