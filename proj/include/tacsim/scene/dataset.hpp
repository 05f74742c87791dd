// Copyright 2026 The tacsim Authors
// SPDX-License-Identifier: Apache-2.0
#pragma once

// Dataset directory:
//
//   meta.json              resolved config, counts, camera, encodings
//   records.table          tab-separated, one row per record, header first
//   background.png         rest image
//   particles.stac         rest reflective particles (index, position) and
//                          the whole membrane (membrane.index/position/tag)
//   fields/fields.stac     light fields used for rendering
//   images/<id>.png        tactile image (markers burnt in when enabled)
//   depth/<id>.png         16-bit z-depth, value * depth_mm_per_unit = mm
//   displacement/<id>.stac index (i64 N), displacement (f32 N x 3),
//                          markers.* when markers are configured
//   states/<id>.stac       simulate-only datasets (no rendering): surface
//                          index/position and mesh vertices (f64)
//
// Ids are zero-padded to six digits. Nothing time-dependent is written, so
// identical inputs give byte-identical directories.

#include "tacsim/core/container.hpp"
#include "tacsim/core/error.hpp"
#include "tacsim/core/png_io.hpp"
#include "tacsim/render/image.hpp"
#include "tacsim/render/markers.hpp"
#include "tacsim/scene/collect.hpp"
#include "tacsim/scene/config.hpp"
#include "tacsim/scene/force.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <map>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

namespace tacsim::scene {

inline constexpr const char* kTableColumns[] = {
    "id",       "kind",  "contact",     "region",   "path",     "position", "depth_index", "depth_mm", "shear_dir",
    "shear_index", "shear_mm", "waypoint", "release", "px", "py", "pz", "qw", "qx", "qy", "qz",
    "image",    "depth", "displacement", "state",   "fx",       "fy",       "fz"};

inline std::string record_stem(std::size_t id) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%06zu", id);
  return buf;
}

namespace detail {

inline std::string num(double x) {
  if (std::isnan(x)) return "-";
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.10g", x);
  return buf;
}

inline std::string opt_int(int x) { return x < 0 ? "-" : std::to_string(x); }

inline std::vector<std::string> split_tabs(const std::string& line) {
  std::vector<std::string> out;
  std::string cell;
  std::istringstream in(line);
  while (std::getline(in, cell, '\t')) out.push_back(cell);
  if (!line.empty() && line.back() == '\t') out.emplace_back();
  return out;
}

inline void write_text(const fs::path& p, const std::string& s) {
  std::ofstream out(p, std::ios::binary | std::ios::trunc);
  if (!out) throw IoError("cannot open '" + p.string() + "' for writing");
  out << s;
  if (!out) throw IoError("write failed for '" + p.string() + "'");
}

inline Json vec_json(const Vec3& v) { return Json::array({v.x(), v.y(), v.z()}); }

} // namespace detail

/// Encodes a dense depth map as 16-bit units of `mm_per_unit`; holes are 0.
inline std::vector<std::uint16_t> encode_depth(const imaging::DepthMap& d, double mm_per_unit) {
  std::vector<std::uint16_t> out(d.size(), 0);
  for (std::size_t i = 0; i < d.size(); ++i) {
    if (d.hole(i)) continue;
    const double q = std::nearbyint(d.z[i] / mm_per_unit);
    if (q < 1.0 || q > 65535.0) {
      throw ValidationError("dataset: depth " + std::to_string(d.z[i]) +
                            " mm does not fit 16 bits; adjust $.output.depth_mm_per_unit");
    }
    out[i] = static_cast<std::uint16_t>(q);
  }
  return out;
}

class DatasetWriter {
public:
  /// `dir` must not exist or be empty.
  DatasetWriter(const fs::path& dir, const Scene& s) : dir_(dir), scene_(s) {
    if (fs::exists(dir_) && !fs::is_empty(dir_)) {
      throw ValidationError("dataset: output directory '" + dir_.string() + "' is not empty");
    }
    std::error_code ec;
    const std::vector<const char*> subs = s.render_frames ? std::vector<const char*>{"images", "depth", "displacement", "fields"}
                                                          : std::vector<const char*>{"displacement", "states"};
    fs::create_directories(dir_, ec);
    for (const char* sub : subs) fs::create_directories(dir_ / sub, ec);
    if (ec) throw IoError("dataset: cannot create '" + dir_.string() + "': " + ec.message());
    if (s.render_frames) {
      render::write_png(dir_ / "background.png", s.optics.background);
      lightfield::save_fields(dir_ / "fields" / "fields.stac", all_fields(s.optics));
    }

    Container p;
    const auto& rs = s.rest_surface;
    std::vector<double> pos;
    for (const Vec3& x : rs.positions) pos.insert(pos.end(), {x.x(), x.y(), x.z()});
    p.add<std::int64_t>("index", {rs.size()}, rs.indices);
    p.add<double>("position", {rs.size(), 3}, pos);
    const auto& m = s.sensor.membrane;
    std::vector<double> mpos;
    std::vector<std::uint8_t> tags;
    for (std::size_t i = 0; i < m.size(); ++i) {
      mpos.insert(mpos.end(), {m.positions[i].x(), m.positions[i].y(), m.positions[i].z()});
      tags.push_back(static_cast<std::uint8_t>(m.tags[i]));
    }
    p.add<std::int64_t>("membrane.index", {m.size()}, m.indices);
    p.add<double>("membrane.position", {m.size(), 3}, mpos);
    p.add<std::uint8_t>("membrane.tag", {m.size()}, tags);
    if (s.markers) render::add_markers(p, "markers.", *s.markers);
    p.write(dir_ / "particles.stac");

    for (const char* col : kTableColumns) table_ << (table_.tellp() > 0 ? "\t" : "") << col;
    table_ << '\n';
  }

  void write(const RecordInfo& r, const Snapshot& sn) {
    if (r.id != count_) throw Error("dataset: record ids must arrive in order");
    const auto& o = scene_.config.output;
    const std::string stem = record_stem(r.id);
    std::string image = "-", depth = "-", state = "-";
    if (scene_.render_frames) {
      image = "images/" + stem + ".png";
      render::TactileImage img = sn.frame.image;
      if (scene_.config.markers.overlay && sn.markers) {
        render::MarkerStyle style;
        style.radius = scene_.config.markers.radius;
        style.arrow_scale = scene_.config.markers.arrow_scale;
        img = render::overlay_markers(img, *sn.markers, style);
      }
      render::write_png(dir_ / image, img);
    } else {
      state = "states/" + stem + ".stac";
      write_state(dir_ / state, sn);
    }
    if (scene_.render_frames && o.write_depth) {
      depth = "depth/" + stem + ".png";
      const auto& d = sn.frame.depth;
      png::write_gray16(dir_ / depth, d.width, d.height, encode_depth(d, o.depth_mm_per_unit));
    }
    std::string disp = "-";
    if (o.write_displacement || !scene_.render_frames) {
      disp = "displacement/" + stem + ".stac";
      Container c;
      std::vector<float> u;
      for (const Vec3& x : sn.displacement) {
        u.insert(u.end(), {static_cast<float>(x.x()), static_cast<float>(x.y()), static_cast<float>(x.z())});
      }
      c.add<std::int64_t>("index", {sn.surface.size()}, sn.surface.indices);
      c.add<float>("displacement", {sn.displacement.size(), 3}, u);
      if (sn.markers) render::add_markers(c, "markers.", *sn.markers);
      c.write(dir_ / disp);
    }

    const auto q = r.pose.quaternion();
    const Vec3& x = r.pose.position;
    std::vector<std::string> row = {std::to_string(r.id),
                                    to_string(r.kind),
                                    detail::opt_int(r.contact),
                                    r.region,
                                    detail::opt_int(r.path),
                                    detail::opt_int(r.position),
                                    detail::opt_int(r.depth_index),
                                    detail::num(r.depth),
                                    detail::opt_int(r.shear_direction),
                                    detail::opt_int(r.shear_index),
                                    detail::num(r.shear),
                                    detail::opt_int(r.waypoint),
                                    r.release() ? "1" : "0",
                                    detail::num(x.x()),
                                    detail::num(x.y()),
                                    detail::num(x.z()),
                                    detail::num(q.w()),
                                    detail::num(q.x()),
                                    detail::num(q.y()),
                                    detail::num(q.z()),
                                    image,
                                    depth,
                                    disp,
                                    state,
                                    "-",
                                    "-",
                                    "-"};
    for (std::size_t i = 0; i < row.size(); ++i) table_ << (i ? "\t" : "") << row[i];
    table_ << '\n';
    ++count_;
  }

  void finish(const CollectionSummary& sum) {
    detail::write_text(dir_ / "records.table", table_.str());
    const auto& c = scene_.config;
    const auto k = c.camera.k();
    Json meta;
    meta["format"] = "tacsim-dataset";
    meta["version"] = 1;
    meta["name"] = c.name;
    meta["trajectory"] = to_string(c.trajectory.kind);
    meta["counts"] = {{"records", sum.records},
                      {"contact_frames", sum.contact_frames},
                      {"release_frames", sum.release_frames},
                      {"contacts", sum.contacts},
                      {"mpm_steps", sum.steps}};
    meta["camera"] = {{"width", c.camera.width},  {"height", c.camera.height}, {"fov", c.camera.fov},
                      {"fu", k.fu},               {"fv", k.fv},                {"cx", k.cx},
                      {"cy", k.cy},               {"position", detail::vec_json(c.camera.position)}};
    Json rot = Json::array();
    for (int i = 0; i < 3; ++i) rot.push_back(detail::vec_json(c.camera.rotation.row(i)));
    meta["camera"]["rotation"] = rot;
    char hash[24];
    std::snprintf(hash, sizeof hash, "%016llx", static_cast<unsigned long long>(scene_.optics.surface_hash));
    meta["surface_hash"] = hash;
    meta["particle_spacing"] = c.spacing;
    meta["membrane_particles"] = scene_.sensor.membrane.size();
    meta["surface_particles"] = scene_.rest_surface.size();
    meta["membrane_youngs_modulus"] = c.materials[c.sensor.material].youngs_modulus;
    meta["depth_encoding"] = {{"bits", 16}, {"mm_per_unit", c.output.depth_mm_per_unit}, {"hole", 0}};
    meta["config"] = c.document;
    detail::write_text(dir_ / "meta.json", meta.dump(1) + "\n");
  }

  std::size_t count() const { return count_; }

  /// Geometry a later render pass needs: surface particles and mesh vertices.
  static void write_state(const fs::path& path, const Snapshot& sn) {
    auto flat = [](const Vec3List& v) {
      std::vector<double> out;
      for (const Vec3& x : v) out.insert(out.end(), {x.x(), x.y(), x.z()});
      return out;
    };
    Container c;
    c.add<std::int64_t>("surface.index", {sn.surface.size()}, sn.surface.indices);
    c.add<double>("surface.position", {sn.surface.size(), 3}, flat(sn.surface.positions));
    c.add<double>("mesh.vertices", {sn.mesh.size(), 3}, flat(sn.mesh));
    c.write(path);
  }

private:
  fs::path dir_;
  const Scene& scene_;
  std::ostringstream table_;
  std::size_t count_ = 0;
};

/// Collects the configured trajectory into `dir`.
inline CollectionSummary collect_dataset(const Scene& s, const fs::path& dir,
                                         const std::function<void(const RecordInfo&)>& progress = {}) {
  DatasetWriter out(dir, s);
  const auto sum = run_collection(s, [&](const RecordInfo& r, const Snapshot& sn) {
    out.write(r, sn);
    if (progress) progress(r);
  });
  out.finish(sum);
  return sum;
}

// ------------------------------------------------------------------ reading

struct RecordTable {
  std::vector<std::string> columns;
  std::vector<std::vector<std::string>> rows;

  std::size_t column(const std::string& name) const {
    for (std::size_t i = 0; i < columns.size(); ++i)
      if (columns[i] == name) return i;
    throw FormatError("records.table: missing column '" + name + "'");
  }
  const std::string& at(std::size_t row, const std::string& name) const { return rows[row][column(name)]; }
};

inline RecordTable read_records(const fs::path& dir) {
  const fs::path p = dir / "records.table";
  std::ifstream in(p);
  if (!in) throw IoError("cannot open '" + p.string() + "'");
  RecordTable t;
  std::string line;
  if (!std::getline(in, line)) throw FormatError("records.table: empty file");
  t.columns = detail::split_tabs(line);
  long prev = -1;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    auto row = detail::split_tabs(line);
    if (row.size() != t.columns.size()) {
      throw FormatError("records.table: row " + std::to_string(t.rows.size() + 1) + " has " +
                        std::to_string(row.size()) + " cells, header has " + std::to_string(t.columns.size()));
    }
    t.rows.push_back(std::move(row));
    const long id = std::stol(t.at(t.rows.size() - 1, "id"));
    if (id <= prev) throw FormatError("records.table: ids must be strictly increasing");
    prev = id;
  }
  return t;
}

inline void write_records(const fs::path& dir, const RecordTable& t) {
  std::ostringstream s;
  for (std::size_t i = 0; i < t.columns.size(); ++i) s << (i ? "\t" : "") << t.columns[i];
  s << '\n';
  for (const auto& row : t.rows) {
    for (std::size_t i = 0; i < row.size(); ++i) s << (i ? "\t" : "") << row[i];
    s << '\n';
  }
  detail::write_text(dir / "records.table", s.str());
}

/// Fills fx/fy/fz of every record from `<forces>/<id>.stac` (array "force",
/// N x 3). Returns the number of records updated; records without a field
/// file keep "-".
inline std::size_t attach_forces(const fs::path& dataset, const fs::path& forces) {
  RecordTable t = read_records(dataset);
  std::size_t n = 0;
  for (std::size_t r = 0; r < t.rows.size(); ++r) {
    const fs::path f = forces / (record_stem(std::stoul(t.at(r, "id"))) + ".stac");
    if (!fs::exists(f)) continue;
    const Vec3 total = total_force(f);
    t.rows[r][t.column("fx")] = detail::num(total.x());
    t.rows[r][t.column("fy")] = detail::num(total.y());
    t.rows[r][t.column("fz")] = detail::num(total.z());
    ++n;
  }
  write_records(dataset, t);
  return n;
}

/// Reads a simulate-only state file (see DatasetWriter::write_state).
inline std::pair<ParticleSet, Vec3List> read_state(const fs::path& path) {
  const Container c = Container::read(path);
  const auto idx = c.get<std::int64_t>("surface.index");
  const auto pos = c.get<double>("surface.position");
  const auto mv = c.get<double>("mesh.vertices");
  if (pos.size() != 3 * idx.size() || mv.size() % 3 != 0) throw FormatError("'" + path.string() + "': bad state arrays");
  ParticleSet surface;
  for (std::size_t i = 0; i < idx.size(); ++i) {
    surface.push_back(Vec3(pos[3 * i], pos[3 * i + 1], pos[3 * i + 2]), idx[i], RegionTag::membrane_surface);
  }
  Vec3List mesh(mv.size() / 3);
  for (std::size_t i = 0; i < mesh.size(); ++i) mesh[i] = Vec3(mv[3 * i], mv[3 * i + 1], mv[3 * i + 2]);
  return {surface, mesh};
}

inline Json read_meta(const fs::path& dir) {
  const fs::path p = dir / "meta.json";
  std::ifstream in(p);
  if (!in) throw IoError("cannot open '" + p.string() + "'");
  try {
    return Json::parse(in);
  } catch (const Json::parse_error& e) {
    throw FormatError("'" + p.string() + "': " + e.what());
  }
}

/// Writes one forcenet sample per record with a displacement file:
/// `<out>/samples/<id>.stac` holding coords (rest positions, N x 3 f64),
/// displacement (N x 3 f64) and force (N x 3 f64, synthetic spring oracle
/// with k = E * h N/mm), plus `<out>/manifest.json`. Returns the count.
inline std::size_t export_forcenet_dataset(const fs::path& dataset, const fs::path& out, double stiffness = 0.0) {
  const RecordTable t = read_records(dataset);
  const Json meta = read_meta(dataset);
  const Container parts = Container::read(dataset / "particles.stac");
  const auto index = parts.get<std::int64_t>("index");
  const auto coords = parts.get<double>("position");
  const double k = stiffness > 0.0 ? stiffness
                                   : meta["membrane_youngs_modulus"].get<double>() * meta["particle_spacing"].get<double>();
  if (fs::exists(out) && !fs::is_empty(out)) {
    throw ValidationError("export: output directory '" + out.string() + "' is not empty");
  }
  fs::create_directories(out / "samples");
  Json samples = Json::array();
  for (std::size_t r = 0; r < t.rows.size(); ++r) {
    const std::string disp = t.at(r, "displacement");
    if (disp == "-") continue;
    const Container c = Container::read(dataset / disp);
    if (c.get<std::int64_t>("index") != index) {
      throw FormatError("export: '" + disp + "' does not list the rest surface particles in order");
    }
    const Vec3List u = read_field(c, "displacement");
    const Vec3List f = spring_oracle(u, k);
    std::vector<double> uv, fv;
    for (std::size_t i = 0; i < u.size(); ++i) {
      uv.insert(uv.end(), {u[i].x(), u[i].y(), u[i].z()});
      fv.insert(fv.end(), {f[i].x(), f[i].y(), f[i].z()});
    }
    Container s;
    s.add<std::int64_t>("index", {index.size()}, index);
    s.add<double>("coords", {index.size(), 3}, coords);
    s.add<double>("displacement", {u.size(), 3}, uv);
    s.add<double>("force", {f.size(), 3}, fv);
    const std::string name = record_stem(std::stoul(t.at(r, "id"))) + ".stac";
    s.write(out / "samples" / name);
    samples.push_back({{"id", std::stoul(t.at(r, "id"))}, {"file", "samples/" + name}, {"kind", t.at(r, "kind")}});
  }
  Json manifest;
  manifest["format"] = "tacsim-forcenet";
  manifest["version"] = 1;
  manifest["source"] = fs::absolute(dataset).lexically_normal().filename().string();
  manifest["target"] = {{"kind", "synthetic"}, {"model", "independent springs f = -k u"}, {"k_n_per_mm", k}};
  manifest["particles"] = index.size();
  manifest["samples"] = samples;
  detail::write_text(out / "manifest.json", manifest.dump(1) + "\n");
  return samples.size();
}

} // namespace tacsim::scene
