#include "voxcast/server.hpp"

#include <algorithm>
#include <cinttypes>
#include <cstdio>
#include <fstream>
#include <iterator>
#include <map>
#include <mutex>
#include <system_error>
#include <thread>

#include <httplib.h>
#include <json.hpp>

#include "voxcast/container.hpp"
#include "voxcast/error.hpp"

namespace voxcast {
namespace fs = std::filesystem;

namespace {

constexpr std::size_t kChunkBytes = 64 * 1024;

std::string fnv1aHex(std::istream& in) {
  std::uint64_t hash = 0xcbf29ce484222325ull;
  char buf[kChunkBytes];
  while (in.read(buf, sizeof(buf)) || in.gcount() > 0) {
    for (std::streamsize i = 0; i < in.gcount(); ++i) {
      hash ^= static_cast<unsigned char>(buf[i]);
      hash *= 0x100000001b3ull;
    }
  }
  char text[24];
  std::snprintf(text, sizeof(text), "%016" PRIx64, hash);
  return text;
}

/// Strong ETags from file content, memoised per (path, size, mtime).
class EtagCache {
 public:
  std::string get(const fs::path& file) {
    std::error_code ec;
    const auto size = fs::file_size(file, ec);
    const auto mtime = fs::last_write_time(file, ec);
    const std::string key = file.string() + '|' + std::to_string(size) + '|' +
                            std::to_string(mtime.time_since_epoch().count());
    {
      std::lock_guard lock(mutex_);
      if (auto it = cache_.find(key); it != cache_.end()) return it->second;
    }
    std::ifstream in(file, std::ios::binary);
    const std::string tag = '"' + fnv1aHex(in) + '"';
    std::lock_guard lock(mutex_);
    cache_.emplace(key, tag);
    return tag;
  }

 private:
  std::mutex mutex_;
  std::map<std::string, std::string> cache_;
};

std::string errorBody(int status, const std::string& message) {
  return nlohmann::json{{"status", status}, {"error", message}}.dump() + "\n";
}

}  // namespace

std::string mediaContentType(std::string_view fileName) {
  const auto dot = fileName.rfind('.');
  std::string ext = dot == std::string_view::npos ? "" : std::string(fileName.substr(dot + 1));
  std::transform(ext.begin(), ext.end(), ext.begin(),
                 [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
  if (ext == "png") return "image/png";
  if (ext == "mp4" || ext == "m4v") return "video/mp4";
  if (ext == "ogv" || ext == "ogg") return "video/ogg";
  if (ext == "webm") return "video/webm";
  if (ext == "json") return "application/json";
  return "application/octet-stream";
}

DatasetCatalog::DatasetCatalog(fs::path root) : root_(std::move(root)) {}

std::vector<std::string> DatasetCatalog::list() const {
  std::error_code ec;
  fs::directory_iterator it(root_, ec);
  if (ec) fail(ErrorCode::kIo, "cannot read dataset root " + root_.string() + ": " + ec.message());
  std::vector<std::string> ids;
  for (const auto& entry : it) {
    const std::string id = entry.path().filename().string();
    if (!entry.is_directory(ec) || !isSafeFileName(id)) continue;
    try {
      readManifest(entry.path() / kManifestFile);
      ids.push_back(id);
    } catch (const Error&) {
      // not a dataset
    }
  }
  std::sort(ids.begin(), ids.end());
  return ids;
}

DatasetCatalog::Lookup DatasetCatalog::manifest(std::string_view id) const {
  if (!isSafeFileName(id)) return {400, "invalid dataset id", {}, {}};
  const fs::path file = root_ / std::string(id) / kManifestFile;
  try {
    readManifest(file);
  } catch (const Error&) {
    return {404, "unknown dataset '" + std::string(id) + "'", {}, {}};
  }
  return {200, {}, file, "application/json"};
}

DatasetCatalog::Lookup DatasetCatalog::media(std::string_view id, std::string_view file) const {
  if (!isSafeFileName(id)) return {400, "invalid dataset id", {}, {}};
  if (!isSafeFileName(file)) return {400, "invalid media file name", {}, {}};
  const fs::path dir = root_ / std::string(id);
  DatasetManifest m;
  try {
    m = readManifest(dir / kManifestFile);
  } catch (const Error&) {
    return {404, "unknown dataset '" + std::string(id) + "'", {}, {}};
  }
  const auto listed = m.mediaFiles();
  if (std::find(listed.begin(), listed.end(), file) == listed.end()) {
    return {404, "'" + std::string(file) + "' is not part of dataset '" + std::string(id) + "'", {}, {}};
  }
  const fs::path path = dir / std::string(file);
  if (!fs::is_regular_file(path)) {
    return {404, "media '" + std::string(file) + "' is missing on the server", {}, {}};
  }
  return {200, {}, path, mediaContentType(file)};
}

class DatasetServer::Impl {
 public:
  explicit Impl(const ServerConfig& config) : catalog(config.root) {
    http.set_post_routing_handler([](const httplib::Request&, httplib::Response& res) {
      res.set_header("Access-Control-Allow-Origin", "*");
      res.set_header("Access-Control-Expose-Headers",
                     "Accept-Ranges, Content-Length, Content-Range, ETag");
    });
    http.Options(R"(/.*)", [](const httplib::Request&, httplib::Response& res) {
      res.status = 204;
      res.set_header("Access-Control-Allow-Methods", "GET, HEAD, OPTIONS");
      res.set_header("Access-Control-Allow-Headers", "Range, If-None-Match");
      res.set_header("Access-Control-Max-Age", "86400");
    });
    http.Get(R"(/datasets/?)", [this](const httplib::Request&, httplib::Response& res) {
      try {
        res.set_content(nlohmann::json(catalog.list()).dump() + "\n", "application/json");
      } catch (const Error& e) {
        sendError(res, 500, e.what());
      }
    });
    http.Get(R"(/datasets/(.+))", [this](const httplib::Request& req, httplib::Response& res) {
      dispatch(req, res, req.matches[1].str());
    });
  }

  void dispatch(const httplib::Request& req, httplib::Response& res, const std::string& rest) {
    const auto slash = rest.find('/');
    const std::string id = rest.substr(0, slash);
    if (!isSafeFileName(id)) return sendError(res, 400, "invalid dataset id");
    const std::string tail = slash == std::string::npos ? "" : rest.substr(slash + 1);
    if (tail == kManifestFile) {
      const auto found = catalog.manifest(id);
      if (found.status != 200) return sendError(res, found.status, found.message);
      return sendManifest(res, found);
    }
    constexpr std::string_view kMediaPrefix = "media/";
    if (tail.starts_with(kMediaPrefix)) {
      const auto found = catalog.media(id, std::string_view(tail).substr(kMediaPrefix.size()));
      if (found.status != 200) return sendError(res, found.status, found.message);
      return sendMedia(req, res, found);
    }
    sendError(res, 404, "no such resource");
  }

  static void sendError(httplib::Response& res, int status, const std::string& message) {
    res.status = status;
    res.set_content(errorBody(status, message), "application/json");
  }

  void sendManifest(httplib::Response& res, const DatasetCatalog::Lookup& found) {
    std::ifstream in(found.file, std::ios::binary);
    std::string body((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
    res.set_header("ETag", etags.get(found.file));
    res.set_header("Cache-Control", "no-cache");
    res.set_content(std::move(body), found.contentType);
  }

  void sendMedia(const httplib::Request& req, httplib::Response& res,
                 const DatasetCatalog::Lookup& found) {
    std::error_code ec;
    const auto size = fs::file_size(found.file, ec);
    if (ec) return sendError(res, 500, "cannot stat media: " + ec.message());
    const std::string etag = etags.get(found.file);
    res.set_header("ETag", etag);
    res.set_header("Accept-Ranges", "bytes");
    if (req.get_header_value("If-None-Match") == etag && req.ranges.empty()) {
      res.status = 304;
      return;
    }
    if (size == 0) {
      res.set_content(std::string(), found.contentType);
      return;
    }
    auto stream = std::make_shared<std::ifstream>(found.file, std::ios::binary);
    if (!*stream) return sendError(res, 500, "cannot open media");
    // Range slicing (206 / Content-Range / 416) is applied by httplib
    // around this provider.
    res.set_content_provider(
        static_cast<std::size_t>(size), found.contentType,
        [stream](std::size_t offset, std::size_t length, httplib::DataSink& sink) {
          char buf[kChunkBytes];
          const std::size_t n = std::min(length, sizeof(buf));
          stream->clear();
          stream->seekg(static_cast<std::streamoff>(offset));
          stream->read(buf, static_cast<std::streamsize>(n));
          if (static_cast<std::size_t>(stream->gcount()) != n) return false;
          return sink.write(buf, n);
        });
  }

  httplib::Server http;
  DatasetCatalog catalog;
  EtagCache etags;
  std::thread worker;
  bool bound = false;
};

DatasetServer::DatasetServer(ServerConfig config)
    : impl_(std::make_unique<Impl>(config)), config_(std::move(config)) {}

DatasetServer::~DatasetServer() { stop(); }

int DatasetServer::bind() {
  if (impl_->bound) return port_;
  if (!fs::is_directory(config_.root)) {
    fail(ErrorCode::kIo, "dataset root " + config_.root.string() + " is not a directory");
  }
  if (config_.port == 0) {
    port_ = impl_->http.bind_to_any_port(config_.host);
  } else {
    port_ = impl_->http.bind_to_port(config_.host, config_.port) ? config_.port : -1;
  }
  if (port_ < 0) {
    fail(ErrorCode::kIo, "cannot listen on " + config_.host + ":" + std::to_string(config_.port));
  }
  impl_->bound = true;
  if (config_.log != nullptr) {
    for (const auto& id : impl_->catalog.list()) *config_.log << "dataset: " << id << '\n';
    *config_.log << "listening on http://" << config_.host << ':' << port_ << std::endl;
  }
  return port_;
}

void DatasetServer::run() {
  bind();
  impl_->http.listen_after_bind();
}

void DatasetServer::start() {
  bind();
  impl_->worker = std::thread([this] { impl_->http.listen_after_bind(); });
  impl_->http.wait_until_ready();
}

void DatasetServer::stop() {
  if (!impl_) return;
  impl_->http.stop();
  if (impl_->worker.joinable()) impl_->worker.join();
}

}  // namespace voxcast
