// scribble/service.h

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

// HTTP service for the annotation front end.
//
//   GET  /api/images                      [{"id","width","height","annotated"}]
//   GET  /api/images/{id}/file            image bytes
//   GET  /api/images/{id}/annotation      annotation with integer "version"
//   PUT  /api/images/{id}/annotation      same body; 409 if "version" is stale
//   POST /api/images/{id}/events          [{"instance_id","event","timestamp_ms"}]
//   GET  /api/metrics/cost                cost report
//
// In HTTP bodies "version" is the annotation revision: 0 before the first
// save, incremented by each accepted PUT. Files on disk keep the format
// version string; the revision lives in a <id>.rev file beside them.
//
// Events are "start", "point", "finish" and "discard". A finish after a
// start records finish - start as the instance's labeling time, which
// replaces any client-supplied label_time_ms on the next PUT. Timestamps
// must not decrease within one instance.

#ifndef SCRIBBLE_SERVICE_H_
#define SCRIBBLE_SERVICE_H_

#include <memory>
#include <string>

#include "scribble/project.h"

namespace scribble {

class AnnotationService {
 public:
  /// Loads the image index; throws FormatError if it is malformed.
  explicit AnnotationService(ProjectLayout layout, std::string annotator = {});
  ~AnnotationService();

  AnnotationService(const AnnotationService&) = delete;
  AnnotationService& operator=(const AnnotationService&) = delete;

  /// Binds to an OS-chosen port and returns it, or -1 on failure.
  int BindToAnyPort(const std::string& host);
  /// Binds to `port`; returns false on failure.
  bool Bind(const std::string& host, int port);
  /// Serves requests until Stop(). Call after a successful bind.
  bool Serve();
  void Stop();
  void WaitUntilReady() const;

 private:
  class Impl;
  std::unique_ptr<Impl> impl_;
};

}  // namespace scribble

#endif  // SCRIBBLE_SERVICE_H_
