// scribble/io.cc

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

#include "scribble/io.h"

#include <atomic>
#include <bit>
#include <cstdint>
#include <cstring>
#include <fstream>
#include <sstream>

#include <unistd.h>

#include "json.hpp"

namespace scribble {

using Json = nlohmann::ordered_json;

namespace {

Json Parse(std::string_view text, const char* what) {
  try {
    return Json::parse(text.begin(), text.end());
  } catch (const Json::parse_error& e) {
    throw FormatError(std::string(what) + ": " + e.what());
  }
}

const Json& Require(const Json& obj, const char* key, const char* what) {
  if (!obj.is_object() || !obj.contains(key))
    throw FormatError(std::string(what) + ": missing \"" + key + "\"");
  return obj.at(key);
}

template <typename T>
T Get(const Json& obj, const char* key, const char* what) {
  const Json& v = Require(obj, key, what);
  try {
    if constexpr (std::is_same_v<T, double>) {
      if (!v.is_number()) throw FormatError("not a number");
    } else if constexpr (std::is_integral_v<T> && !std::is_same_v<T, bool>) {
      if (!v.is_number_integer()) throw FormatError("not an integer");
    } else if constexpr (std::is_same_v<T, bool>) {
      if (!v.is_boolean()) throw FormatError("not a boolean");
    } else if constexpr (std::is_same_v<T, std::string>) {
      if (!v.is_string()) throw FormatError("not a string");
    }
    return v.get<T>();
  } catch (const std::exception& e) {
    throw FormatError(std::string(what) + ": bad \"" + key + "\": " + e.what());
  }
}

const Json& RequireArray(const Json& obj, const char* key, const char* what) {
  const Json& v = Require(obj, key, what);
  if (!v.is_array())
    throw FormatError(std::string(what) + ": \"" + key + "\" is not an array");
  return v;
}

Json PointsToJson(const std::vector<Point2D>& points) {
  Json arr = Json::array();
  for (const Point2D& p : points) arr.push_back(Json::array({p.x, p.y}));
  return arr;
}

std::vector<Point2D> PointsFromJson(const Json& arr, const char* what) {
  std::vector<Point2D> out;
  for (const Json& p : arr) {
    if (!p.is_array() || p.size() != 2 || !p[0].is_number() || !p[1].is_number())
      throw FormatError(std::string(what) + ": point must be [x, y]");
    out.push_back({p[0].get<double>(), p[1].get<double>()});
  }
  return out;
}

Polygon PolygonFromJson(const Json& arr, const char* what) {
  try {
    return Polygon(PointsFromJson(arr, what));
  } catch (const std::invalid_argument& e) {
    throw FormatError(std::string(what) + ": " + e.what());
  }
}

}  // namespace

std::string AnnotationToJson(const ImageAnnotation& a) {
  Json doc;
  doc["version"] = kAnnotationVersion;
  doc["image"] = {{"id", a.image_id}, {"width", a.width}, {"height", a.height}};
  Json instances = Json::array();
  for (const ScribbleInstance& inst : a.instances) {
    Json j;
    j["id"] = inst.id;
    j["points"] = PointsToJson(inst.points);
    j["difficult"] = inst.difficult;
    if (inst.transcript) j["transcript"] = *inst.transcript;
    if (inst.label_time_ms) j["label_time_ms"] = *inst.label_time_ms;
    instances.push_back(std::move(j));
  }
  doc["instances"] = std::move(instances);
  return doc.dump();
}

ImageAnnotation AnnotationFromJson(std::string_view text) {
  constexpr const char* what = "annotation";
  const Json doc = Parse(text, what);
  const std::string version = Get<std::string>(doc, "version", what);
  if (version != kAnnotationVersion)
    throw FormatError("annotation: unsupported version " + version);
  const Json& image = Require(doc, "image", what);
  ImageAnnotation a;
  a.image_id = Get<std::string>(image, "id", what);
  a.width = Get<int>(image, "width", what);
  a.height = Get<int>(image, "height", what);
  for (const Json& j : RequireArray(doc, "instances", what)) {
    ScribbleInstance inst;
    inst.id = Get<std::int64_t>(j, "id", what);
    inst.points = PointsFromJson(RequireArray(j, "points", what), what);
    inst.difficult = Get<bool>(j, "difficult", what);
    if (j.contains("transcript"))
      inst.transcript = Get<std::string>(j, "transcript", what);
    if (j.contains("label_time_ms"))
      inst.label_time_ms = Get<std::int64_t>(j, "label_time_ms", what);
    a.instances.push_back(std::move(inst));
  }
  return a;
}

std::string DetectionsToJson(const DetectionsFile& file) {
  Json doc;
  doc["image_id"] = file.image_id;
  Json chars = Json::array();
  for (const CharBox& c : file.chars) {
    Json j;
    j["box"] = Json::array({c.box.x1, c.box.y1, c.box.x2, c.box.y2});
    j["score"] = c.score;
    j["class"] = c.cls.Name();
    chars.push_back(std::move(j));
  }
  doc["chars"] = std::move(chars);
  if (file.textline_map) doc["textline_map"] = *file.textline_map;
  return doc.dump();
}

DetectionsFile DetectionsFromJson(std::string_view text) {
  constexpr const char* what = "detections";
  const Json doc = Parse(text, what);
  DetectionsFile file;
  file.image_id = Get<std::string>(doc, "image_id", what);
  for (const Json& j : RequireArray(doc, "chars", what)) {
    const Json& box = RequireArray(j, "box", what);
    if (box.size() != 4 || !std::all_of(box.begin(), box.end(),
                                        [](const Json& v) { return v.is_number(); }))
      throw FormatError("detections: box must be [x1, y1, x2, y2]");
    CharBox c;
    c.box = {box[0].get<double>(), box[1].get<double>(), box[2].get<double>(),
             box[3].get<double>()};
    if (!c.box.IsValid()) throw FormatError("detections: box needs x1<x2, y1<y2");
    c.score = Get<double>(j, "score", what);
    if (!(c.score >= 0.0 && c.score <= 1.0))
      throw FormatError("detections: score outside [0, 1]");
    try {
      c.cls = CharClass::Parse(Get<std::string>(j, "class", what));
    } catch (const std::invalid_argument& e) {
      throw FormatError(std::string("detections: ") + e.what());
    }
    file.chars.push_back(c);
  }
  if (doc.contains("textline_map"))
    file.textline_map = Get<std::string>(doc, "textline_map", what);
  return file;
}

std::string GroundTruthToJson(const GroundTruthFile& file) {
  Json doc;
  doc["image_id"] = file.image_id;
  Json instances = Json::array();
  for (const GroundTruthInstance& g : file.instances) {
    Json j;
    j["polygon"] = PointsToJson(g.polygon.vertices());
    j["difficult"] = g.difficult;
    instances.push_back(std::move(j));
  }
  doc["instances"] = std::move(instances);
  return doc.dump();
}

GroundTruthFile GroundTruthFromJson(std::string_view text) {
  constexpr const char* what = "ground truth";
  const Json doc = Parse(text, what);
  GroundTruthFile file;
  file.image_id = Get<std::string>(doc, "image_id", what);
  for (const Json& j : RequireArray(doc, "instances", what)) {
    file.instances.push_back(
        {PolygonFromJson(RequireArray(j, "polygon", what), what),
         Get<bool>(j, "difficult", what)});
  }
  return file;
}

std::string ResultsToJson(const ResultsFile& file) {
  Json doc;
  doc["image_id"] = file.image_id;
  Json dets = Json::array();
  for (const DetectionResult& d : file.detections) {
    Json j;
    j["polygon"] = PointsToJson(d.boundary.vertices());
    if (d.transcript) j["transcript"] = *d.transcript;
    j["char_count"] = d.char_count;
    dets.push_back(std::move(j));
  }
  doc["detections"] = std::move(dets);
  return doc.dump();
}

ResultsFile ResultsFromJson(std::string_view text) {
  constexpr const char* what = "results";
  const Json doc = Parse(text, what);
  ResultsFile file;
  file.image_id = Get<std::string>(doc, "image_id", what);
  int index = 0;
  for (const Json& j : RequireArray(doc, "detections", what)) {
    DetectionResult d{PolygonFromJson(RequireArray(j, "polygon", what), what),
                      index++, std::nullopt, Get<int>(j, "char_count", what)};
    if (j.contains("transcript"))
      d.transcript = Get<std::string>(j, "transcript", what);
    file.detections.push_back(std::move(d));
  }
  return file;
}

std::string ReportToJson(const EvalReport& r) {
  Json doc;
  doc["precision"] = r.precision;
  doc["recall"] = r.recall;
  doc["f_measure"] = r.f_measure;
  doc["matched"] = r.matched;
  doc["num_dets"] = r.num_dets;
  doc["num_gts"] = r.num_gts;
  return doc.dump();
}

EvalReport ReportFromJson(std::string_view text) {
  constexpr const char* what = "report";
  const Json doc = Parse(text, what);
  EvalReport r;
  r.precision = Get<double>(doc, "precision", what);
  r.recall = Get<double>(doc, "recall", what);
  r.f_measure = Get<double>(doc, "f_measure", what);
  r.matched = Get<std::int64_t>(doc, "matched", what);
  r.num_dets = Get<std::int64_t>(doc, "num_dets", what);
  r.num_gts = Get<std::int64_t>(doc, "num_gts", what);
  r.precision_defined = r.num_dets > 0;
  r.recall_defined = r.num_gts > 0;
  return r;
}

std::string CostReportToJson(const CostReport& r) {
  Json doc;
  doc["avg_points_per_instance"] =
      r.avg_points_per_instance ? Json(*r.avg_points_per_instance) : Json(nullptr);
  doc["avg_label_time_ms"] =
      r.avg_label_time_ms ? Json(*r.avg_label_time_ms) : Json(nullptr);
  doc["instance_count"] = r.instance_count;
  doc["timed_count"] = r.timed_count;
  return doc.dump();
}

namespace {

constexpr std::string_view kMapMagic = "TLM1";

void PutU32(std::string& out, std::uint32_t v) {
  for (int i = 0; i < 4; ++i) out.push_back(static_cast<char>((v >> (8 * i)) & 0xff));
}

std::uint32_t GetU32(std::string_view bytes, std::size_t at) {
  std::uint32_t v = 0;
  for (int i = 0; i < 4; ++i)
    v |= static_cast<std::uint32_t>(static_cast<unsigned char>(bytes[at + i])) << (8 * i);
  return v;
}

}  // namespace

std::string EncodeTextLineMap(const RasterGrid& map) {
  std::string out(kMapMagic);
  const auto values = map.values();
  out.reserve(12 + 4 * values.size());
  PutU32(out, static_cast<std::uint32_t>(map.width()));
  PutU32(out, static_cast<std::uint32_t>(map.height()));
  for (double v : values) PutU32(out, std::bit_cast<std::uint32_t>(static_cast<float>(v)));
  return out;
}

RasterGrid DecodeTextLineMap(std::string_view bytes) {
  if (bytes.size() < 12 || bytes.substr(0, 4) != kMapMagic)
    throw FormatError("text-line map: missing TLM1 header");
  const std::uint32_t w = GetU32(bytes, 4), h = GetU32(bytes, 8);
  if (w == 0 || h == 0 || w > (1u << 16) || h > (1u << 16))
    throw FormatError("text-line map: bad dimensions");
  const std::size_t count = static_cast<std::size_t>(w) * h;
  if (bytes.size() != 12 + 4 * count)
    throw FormatError("text-line map: size does not match dimensions");
  std::vector<double> values(count);
  for (std::size_t i = 0; i < count; ++i) {
    const float f = std::bit_cast<float>(GetU32(bytes, 12 + 4 * i));
    if (!(f >= 0.0f && f <= 1.0f))
      throw FormatError("text-line map: value outside [0, 1]");
    values[i] = f;
  }
  return RasterGrid(static_cast<int>(w), static_cast<int>(h), std::move(values));
}

std::string ReadFile(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot open " + path.string());
  std::ostringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

void WriteFileAtomic(const std::filesystem::path& path, std::string_view data) {
  static std::atomic<unsigned long> counter{0};
  std::filesystem::path tmp = path;
  tmp += ".tmp-" + std::to_string(::getpid()) + "-" + std::to_string(counter++);
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw std::runtime_error("cannot write " + tmp.string());
    out.write(data.data(), static_cast<std::streamsize>(data.size()));
    out.flush();
    if (!out) throw std::runtime_error("short write to " + tmp.string());
  }
  std::filesystem::rename(tmp, path);
}

}  // namespace scribble
