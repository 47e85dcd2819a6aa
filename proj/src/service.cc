// scribble/service.cc

// Copyright 2026  The scribbletext Authors

// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//  http://www.apache.org/licenses/LICENSE-2.0
//
// THIS CODE IS PROVIDED *AS IS* BASIS, WITHOUT WARRANTIES OR CONDITIONS OF ANY
// KIND, EITHER EXPRESS OR IMPLIED, INCLUDING WITHOUT LIMITATION ANY IMPLIED
// WARRANTIES OR CONDITIONS OF TITLE, FITNESS FOR A PARTICULAR PURPOSE,
// MERCHANTABLITY OR NON-INFRINGEMENT.
// See the Apache 2 License for the specific language governing permissions and
// limitations under the License.

#include "scribble/service.h"

#include <map>
#include <mutex>
#include <optional>
#include <utility>

#include "httplib.h"
#include "json.hpp"
#include "scribble/io.h"

namespace scribble {

using Json = nlohmann::ordered_json;

namespace {

void SendJson(httplib::Response& res, int status, const Json& body) {
  res.status = status;
  res.set_content(body.dump(), "application/json");
}

void SendError(httplib::Response& res, int status, const std::string& message) {
  SendJson(res, status, Json{{"error", message}});
}

std::string ContentType(const fs::path& path) {
  std::string ext = path.extension().string();
  for (char& c : ext) c = static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
  if (ext == ".png") return "image/png";
  if (ext == ".jpg" || ext == ".jpeg") return "image/jpeg";
  if (ext == ".gif") return "image/gif";
  if (ext == ".webp") return "image/webp";
  if (ext == ".bmp") return "image/bmp";
  return "application/octet-stream";
}

bool IsSafeRelative(const fs::path& path) {
  if (path.empty() || path.is_absolute()) return false;
  for (const fs::path& part : path)
    if (part == "..") return false;
  return true;
}

struct SessionState {
  std::optional<std::int64_t> last_timestamp;
  std::optional<std::int64_t> start;
  std::optional<std::int64_t> duration;
};

struct Event {
  std::int64_t instance_id = 0;
  std::string kind;
  std::int64_t timestamp = 0;
};

}  // namespace

class AnnotationService::Impl {
 public:
  Impl(ProjectLayout layout, std::string annotator)
      : layout_(std::move(layout)), annotator_(std::move(annotator)) {
    for (ImageInfo& info : LoadImageIndex(layout_)) {
      locks_[info.id];
      images_.emplace(info.id, std::move(info));
    }
    fs::create_directories(layout_.Annotations(annotator_));
    Route();
  }

  httplib::Server server;

 private:
  fs::path RevisionFile(const std::string& id) const {
    return layout_.Annotations(annotator_) / (id + ".rev");
  }

  std::int64_t ReadRevision(const std::string& id) const {
    const fs::path path = RevisionFile(id);
    if (!fs::exists(path)) return 0;
    return std::stoll(ReadFile(path));
  }

  const ImageInfo* Find(const std::string& id) const {
    auto it = images_.find(id);
    return it == images_.end() ? nullptr : &it->second;
  }

  void Route() {
    server.Get("/api/images", [this](const httplib::Request&, httplib::Response& res) {
      Json list = Json::array();
      for (const auto& [id, info] : images_) {
        list.push_back(Json{{"id", id},
                            {"width", info.width},
                            {"height", info.height},
                            {"annotated", fs::exists(layout_.AnnotationFile(id, annotator_))}});
      }
      SendJson(res, 200, list);
    });

    server.Get("/api/images/:id/file",
               [this](const httplib::Request& req, httplib::Response& res) {
                 const ImageInfo* info = Find(req.path_params.at("id"));
                 if (info == nullptr) return SendError(res, 404, "unknown image");
                 if (!info->file || !IsSafeRelative(*info->file))
                   return SendError(res, 404, "no image file");
                 const fs::path path = layout_.Images() / *info->file;
                 if (!fs::is_regular_file(path)) return SendError(res, 404, "no image file");
                 res.status = 200;
                 res.set_content(ReadFile(path), ContentType(path));
               });

    server.Get("/api/images/:id/annotation",
               [this](const httplib::Request& req, httplib::Response& res) {
                 GetAnnotation(req.path_params.at("id"), res);
               });

    server.Put("/api/images/:id/annotation",
               [this](const httplib::Request& req, httplib::Response& res) {
                 PutAnnotation(req.path_params.at("id"), req.body, res);
               });

    server.Post("/api/images/:id/events",
                [this](const httplib::Request& req, httplib::Response& res) {
                  PostEvents(req.path_params.at("id"), req.body, res);
                });

    server.Get("/api/metrics/cost", [this](const httplib::Request&, httplib::Response& res) {
      res.status = 200;
      res.set_content(CostReportToJson(CmdCost(layout_, annotator_)), "application/json");
    });

    server.set_exception_handler(
        [](const httplib::Request&, httplib::Response& res, std::exception_ptr ep) {
          try {
            std::rethrow_exception(ep);
          } catch (const std::exception& e) {
            SendError(res, 500, e.what());
          } catch (...) {
            SendError(res, 500, "unknown error");
          }
        });
  }

  void GetAnnotation(const std::string& id, httplib::Response& res) {
    const ImageInfo* info = Find(id);
    if (info == nullptr) return SendError(res, 404, "unknown image");
    std::lock_guard<std::mutex> lock(locks_.at(id));
    const fs::path path = layout_.AnnotationFile(id, annotator_);
    Json doc;
    if (fs::exists(path)) {
      doc = Json::parse(ReadFile(path));
      doc["version"] = ReadRevision(id);
    } else {
      doc["version"] = 0;
      doc["image"] = Json{{"id", id}, {"width", info->width}, {"height", info->height}};
      doc["instances"] = Json::array();
    }
    SendJson(res, 200, doc);
  }

  void PutAnnotation(const std::string& id, const std::string& body, httplib::Response& res) {
    const ImageInfo* info = Find(id);
    if (info == nullptr) return SendError(res, 404, "unknown image");

    Json doc;
    try {
      doc = Json::parse(body);
    } catch (const nlohmann::json::exception& e) {
      return SendError(res, 400, std::string("malformed JSON: ") + e.what());
    }
    if (!doc.is_object() || !doc.contains("version") || !doc["version"].is_number_integer())
      return SendError(res, 400, "body needs an integer \"version\"");
    const std::int64_t expected = doc["version"].get<std::int64_t>();
    doc["version"] = kAnnotationVersion;

    ImageAnnotation annotation;
    try {
      annotation = AnnotationFromJson(doc.dump());
    } catch (const FormatError& e) {
      return SendError(res, 400, e.what());
    }
    if (annotation.image_id != id) return SendError(res, 400, "image id does not match path");
    if (annotation.width != info->width || annotation.height != info->height)
      return SendError(res, 400, "image size does not match the image index");
    ApplyTimings(id, annotation);

    const std::vector<Violation> violations = Validate(annotation);
    if (!violations.empty()) {
      Json list = Json::array();
      for (const Violation& v : violations) {
        Json j;
        j["instance_id"] = v.instance_id ? Json(*v.instance_id) : Json(nullptr);
        j["rule"] = v.rule;
        j["message"] = v.message;
        list.push_back(std::move(j));
      }
      return SendJson(res, 422, Json{{"error", "invalid annotation"}, {"violations", list}});
    }

    std::lock_guard<std::mutex> lock(locks_.at(id));
    const std::int64_t current = ReadRevision(id);
    if (expected != current)
      return SendJson(res, 409, Json{{"error", "version conflict"}, {"version", current}});
    WriteFileAtomic(layout_.AnnotationFile(id, annotator_), AnnotationToJson(annotation));
    WriteFileAtomic(RevisionFile(id), std::to_string(current + 1));
    SendJson(res, 200, Json{{"version", current + 1}});
  }

  void ApplyTimings(const std::string& id, ImageAnnotation& annotation) {
    std::lock_guard<std::mutex> lock(events_mutex_);
    for (ScribbleInstance& inst : annotation.instances) {
      auto it = sessions_.find({id, inst.id});
      if (it != sessions_.end() && it->second.duration) inst.label_time_ms = it->second.duration;
    }
  }

  void PostEvents(const std::string& id, const std::string& body, httplib::Response& res) {
    if (Find(id) == nullptr) return SendError(res, 404, "unknown image");
    std::vector<Event> events;
    try {
      Json doc = Json::parse(body);
      if (doc.is_object()) doc = Json::array({doc});
      if (!doc.is_array()) return SendError(res, 400, "expected an event or a list of events");
      for (const Json& j : doc) {
        Event e{j.at("instance_id").get<std::int64_t>(), j.at("event").get<std::string>(),
                j.at("timestamp_ms").get<std::int64_t>()};
        if (e.kind != "start" && e.kind != "point" && e.kind != "finish" && e.kind != "discard")
          return SendError(res, 400, "unknown event '" + e.kind + "'");
        if (e.timestamp < 0) return SendError(res, 400, "negative timestamp");
        events.push_back(std::move(e));
      }
    } catch (const nlohmann::json::exception& e) {
      return SendError(res, 400, std::string("malformed events: ") + e.what());
    }

    std::lock_guard<std::mutex> lock(events_mutex_);
    std::map<std::int64_t, SessionState> staged;
    for (const Event& e : events) {
      auto st = staged.find(e.instance_id);
      if (st == staged.end()) {
        auto it = sessions_.find({id, e.instance_id});
        st = staged.emplace(e.instance_id, it == sessions_.end() ? SessionState{} : it->second)
                 .first;
      }
      SessionState& s = st->second;
      if (s.last_timestamp && e.timestamp < *s.last_timestamp)
        return SendError(res, 400,
                         "timestamps decrease for instance " + std::to_string(e.instance_id));
      s.last_timestamp = e.timestamp;
      if (e.kind == "start") {
        s.start = e.timestamp;
      } else if (e.kind == "finish") {
        if (s.start) s.duration = e.timestamp - *s.start;
        s.start.reset();
      } else if (e.kind == "discard") {
        s.start.reset();
        s.duration.reset();
      }
    }
    for (auto& [instance_id, state] : staged) sessions_[{id, instance_id}] = state;
    SendJson(res, 200, Json{{"accepted", events.size()}});
  }

  ProjectLayout layout_;
  std::string annotator_;
  std::map<std::string, ImageInfo> images_;
  std::map<std::string, std::mutex> locks_;  // fixed after construction
  std::mutex events_mutex_;
  std::map<std::pair<std::string, std::int64_t>, SessionState> sessions_;
};

AnnotationService::AnnotationService(ProjectLayout layout, std::string annotator)
    : impl_(std::make_unique<Impl>(std::move(layout), std::move(annotator))) {}

AnnotationService::~AnnotationService() { Stop(); }

int AnnotationService::BindToAnyPort(const std::string& host) {
  return impl_->server.bind_to_any_port(host);
}

bool AnnotationService::Bind(const std::string& host, int port) {
  return impl_->server.bind_to_port(host, port);
}

bool AnnotationService::Serve() { return impl_->server.listen_after_bind(); }

void AnnotationService::Stop() {
  if (impl_ != nullptr) impl_->server.stop();
}

void AnnotationService::WaitUntilReady() const { impl_->server.wait_until_ready(); }

}  // namespace scribble
