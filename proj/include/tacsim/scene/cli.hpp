// Copyright 2026 The tacsim Authors
// SPDX-License-Identifier: Apache-2.0
#pragma once

// The `tacsim` command line. Exit codes: 0 success, 1 usage or validation
// error (bad flags, schema violations, malformed inputs), 2 runtime error
// (I/O, simulation aborts).

#include "tacsim/core/error.hpp"
#include "tacsim/core/parallel.hpp"
#include "tacsim/geometry/mesh_io.hpp"
#include "tacsim/scene/collect.hpp"
#include "tacsim/scene/config.hpp"
#include "tacsim/scene/dataset.hpp"
#include "tacsim/scene/metrics.hpp"

#include <CLI11.hpp>

#include <cmath>
#include <iostream>
#include <map>
#include <optional>
#include <ostream>
#include <string>
#include <vector>

namespace tacsim::scene {

namespace detail {

struct CliOptions {
  std::string config, out, input, dataset, forces;
  std::optional<std::uint64_t> seed;
  int threads = 0;
  bool overwrite = false;
  double stiffness = 0.0;
  std::vector<std::string> dirs;
};

inline SceneConfig cli_config(const CliOptions& o) {
  if (o.config.empty()) throw ValidationError("--config is required");
  const fs::path p(o.config);
  if (!fs::exists(p)) throw ValidationError("config '" + p.string() + "' does not exist");
  Json doc = read_json(p);
  if (o.seed) {
    if (!doc.is_object()) throw ValidationError("$: expected object");
    doc["seed"] = *o.seed;
  }
  return config_from_json(std::move(doc), fs::absolute(p).parent_path());
}

inline fs::path cli_out(const CliOptions& o) {
  if (o.out.empty()) throw ValidationError("--out is required");
  const fs::path p(o.out);
  if (o.overwrite && fs::exists(p)) fs::remove_all(p);
  return p;
}

inline Json metric_json(double x) { return std::isfinite(x) ? Json(x) : Json("inf"); }

inline Json summary_json(const MetricSummary& s) {
  auto block = [](const Metrics& m) {
    return Json{{"ssim", m.ssim}, {"mse", m.mse}, {"mae", m.mae}, {"psnr", metric_json(m.psnr)}};
  };
  return Json{{"count", s.count}, {"identical", s.identical}, {"mean", block(s.mean)}, {"min", block(s.min)},
              {"max", block(s.max)}};
}

/// Tactile images of a dataset (keyed `<id>.png`) or of a plain directory
/// (every PNG except depth images and the background).
inline std::map<std::string, fs::path> image_set(const fs::path& dir) {
  std::map<std::string, fs::path> out;
  if (!fs::is_directory(dir)) throw ValidationError("eval: '" + dir.string() + "' is not a directory");
  if (fs::exists(dir / "records.table")) {
    const RecordTable t = read_records(dir);
    for (std::size_t r = 0; r < t.rows.size(); ++r) {
      if (t.at(r, "image") == "-") throw ValidationError("eval: dataset '" + dir.string() + "' holds no images");
      out[record_stem(std::stoul(t.at(r, "id"))) + ".png"] = dir / t.at(r, "image");
    }
    return out;
  }
  for (const auto& e : fs::directory_iterator(dir)) {
    const std::string name = e.path().filename().string();
    if (!e.is_regular_file() || e.path().extension() != ".png" || name == "background.png") continue;
    if (name.ends_with(".depth.png")) continue;
    out[name] = e.path();
  }
  return out;
}

/// Pairs every image of `a` with the same-named image of `b`.
inline std::vector<std::pair<fs::path, fs::path>> image_pairs(const fs::path& a, const fs::path& b) {
  const auto lhs = image_set(a), rhs = image_set(b);
  if (lhs.empty()) throw ValidationError("eval: no images found in '" + a.string() + "'");
  std::vector<std::pair<fs::path, fs::path>> out;
  for (const auto& [name, path] : lhs) {
    auto it = rhs.find(name);
    if (it == rhs.end()) throw ValidationError("eval: '" + name + "' missing in '" + b.string() + "'");
    out.emplace_back(path, it->second);
  }
  if (rhs.size() != lhs.size()) throw ValidationError("eval: image sets differ in size");
  return out;
}

inline void write_json(const fs::path& p, const Json& j) {
  if (p.has_parent_path()) fs::create_directories(p.parent_path());
  write_text(p, j.dump(1) + "\n");
}

} // namespace detail

/// Runs the command line; messages go to `out` and `err`.
inline int cli(int argc, const char* const* argv, std::ostream& out = std::cout, std::ostream& err = std::cerr) {
  CLI::App app{"tacsim: tactile sensor simulation", "tacsim"};
  app.require_subcommand(1);
  detail::CliOptions o;
  auto common = [&](CLI::App* c, bool config) {
    if (config) c->add_option("--config", o.config, "scene configuration (JSON)")->required();
    c->add_option("--out", o.out, "output path");
    c->add_option("--seed", o.seed, "overrides the configuration seed");
    c->add_option("--threads", o.threads, "worker threads (default: all)")->check(CLI::NonNegativeNumber);
  };

  auto* particleize = app.add_subcommand("particleize", "sample the sensor and indenter into particles");
  common(particleize, true);
  particleize->add_flag("--overwrite", o.overwrite, "replace an existing output directory");

  auto* lightfield = app.add_subcommand("lightfield", "light field tools");
  lightfield->require_subcommand(1);
  auto* lf_build = lightfield->add_subcommand("build", "build the light fields of the rest surface");
  common(lf_build, true);

  auto* simulate = app.add_subcommand("simulate", "run the trajectory without rendering");
  common(simulate, true);
  simulate->add_flag("--overwrite", o.overwrite, "replace an existing output directory");

  auto* render_cmd = app.add_subcommand("render", "render the states written by `simulate`");
  common(render_cmd, true);
  render_cmd->add_option("--input", o.input, "directory written by `simulate`")->required();
  render_cmd->add_flag("--overwrite", o.overwrite, "replace an existing output directory");

  auto* collect = app.add_subcommand("collect", "run the trajectory and write a dataset");
  common(collect, true);
  collect->add_flag("--overwrite", o.overwrite, "replace an existing output directory");

  auto* eval = app.add_subcommand("eval", "compare two image sets, or total the force fields of a dataset");
  common(eval, false);
  eval->add_option("dirs", o.dirs, "two datasets or image directories");
  eval->add_option("--dataset", o.dataset, "dataset whose records receive total forces");
  eval->add_option("--forces", o.forces, "directory of <id>.stac force fields (array 'force', N x 3)");

  auto* exporter = app.add_subcommand("export-forcenet-dataset", "write force-model training samples");
  common(exporter, false);
  exporter->add_option("--dataset", o.dataset, "dataset directory")->required();
  exporter->add_option("--stiffness", o.stiffness, "oracle spring stiffness in N/mm (default E * h)");
  exporter->add_flag("--overwrite", o.overwrite, "replace an existing output directory");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return 0;
  } catch (const CLI::CallForAllHelp&) {
    out << app.help("", CLI::AppFormatMode::All);
    return 0;
  } catch (const CLI::ParseError& e) {
    err << "tacsim: " << e.what() << "\n";
    if (e.get_exit_code() == 0) return 0;
    err << "run 'tacsim --help' for usage\n";
    return 1;
  }

  try {
    set_thread_count(o.threads);
    auto log = [&](const std::string& s) { err << s << "\n"; };

    if (particleize->parsed()) {
      const SceneConfig c = detail::cli_config(o);
      const fs::path dir = detail::cli_out(o);
      if (fs::exists(dir) && !fs::is_empty(dir)) throw ValidationError("output directory '" + dir.string() + "' is not empty");
      fs::create_directories(dir);
      const Sensor s = build_sensor(c);
      auto save = [](const fs::path& p, const ParticleSet& ps) {
        Container k;
        std::vector<double> x;
        std::vector<std::uint8_t> t;
        for (std::size_t i = 0; i < ps.size(); ++i) {
          x.insert(x.end(), {ps.positions[i].x(), ps.positions[i].y(), ps.positions[i].z()});
          t.push_back(static_cast<std::uint8_t>(ps.tags[i]));
        }
        k.add<std::int64_t>("index", {ps.size()}, ps.indices);
        k.add<double>("position", {ps.size(), 3}, x);
        k.add<std::uint8_t>("tag", {ps.size()}, t);
        k.write(p);
      };
      save(dir / "membrane.stac", s.membrane);
      save(dir / "indenter.stac", s.indenter);
      geometry::save_obj(dir / "surface.obj", *s.surface);
      out << "membrane " << s.membrane.size() << " particles (" << s.membrane.count(RegionTag::membrane_surface)
          << " surface, " << s.membrane.count(RegionTag::membrane_interior) << " interior, "
          << s.membrane.count(RegionTag::support) << " support)\n"
          << "indenter " << s.indenter.size() << " particles\n"
          << "surface mesh " << s.surface->vertex_count() << " vertices, " << s.surface->face_count() << " faces\n";
      return 0;
    }

    if (lf_build->parsed()) {
      SceneConfig c = detail::cli_config(o);
      const fs::path path = detail::cli_out(o);
      c.field_cache.reset();
      const Sensor s = build_sensor(c);
      const auto fields = scene_fields(c, s);
      if (path.has_parent_path()) fs::create_directories(path.parent_path());
      lightfield::save_fields(path, fields);
      out << "wrote " << fields.size() << " fields (" << c.camera.width << "x" << c.camera.height << ") to " << path.string()
          << "\n";
      return 0;
    }

    if (simulate->parsed() || collect->parsed()) {
      const bool rendering = collect->parsed();
      const SceneConfig c = detail::cli_config(o);
      const fs::path dir = detail::cli_out(o);
      const Scene s = prepare_scene(c, {}, rendering);
      const std::size_t total = c.trajectory.total_frames();
      const auto sum = collect_dataset(s, dir, [&](const RecordInfo& r) {
        if ((r.id + 1) % 50 == 0 || r.id + 1 == total) log("record " + std::to_string(r.id + 1) + "/" + std::to_string(total));
      });
      out << "records " << sum.records << " (contact " << sum.contact_frames << ", release " << sum.release_frames
          << "), contacts " << sum.contacts << ", mpm steps " << sum.steps << "\n";
      return 0;
    }

    if (render_cmd->parsed()) {
      const SceneConfig c = detail::cli_config(o);
      const fs::path dir = detail::cli_out(o);
      if (fs::exists(dir) && !fs::is_empty(dir)) throw ValidationError("output directory '" + dir.string() + "' is not empty");
      const Scene s = prepare_scene(c);
      const RecordTable t = read_records(o.input);
      fs::create_directories(dir);
      render::write_png(dir / "background.png", s.optics.background);
      std::size_t n = 0;
      for (std::size_t r = 0; r < t.rows.size(); ++r) {
        const std::string state = t.at(r, "state");
        if (state == "-") continue;
        const auto [surface, mesh] = read_state(fs::path(o.input) / state);
        const Snapshot sn = take_snapshot(s, surface, mesh);
        const std::string stem = record_stem(std::stoul(t.at(r, "id")));
        render::write_png(dir / (stem + ".png"), sn.frame.image);
        if (c.output.write_depth) {
          const auto& d = sn.frame.depth;
          png::write_gray16(dir / (stem + ".depth.png"), d.width, d.height, encode_depth(d, c.output.depth_mm_per_unit));
        }
        ++n;
      }
      if (n == 0) throw ValidationError("render: '" + o.input + "' holds no simulation states");
      out << "rendered " << n << " frames\n";
      return 0;
    }

    if (eval->parsed()) {
      if (!o.forces.empty() || !o.dataset.empty()) {
        if (o.forces.empty() || o.dataset.empty()) throw ValidationError("eval: --dataset and --forces go together");
        const std::size_t n = attach_forces(o.dataset, o.forces);
        const RecordTable t = read_records(o.dataset);
        Json rows = Json::array();
        for (std::size_t r = 0; r < t.rows.size(); ++r) {
          if (t.at(r, "fx") == "-") continue;
          rows.push_back({{"id", std::stoul(t.at(r, "id"))},
                          {"force", {std::stod(t.at(r, "fx")), std::stod(t.at(r, "fy")), std::stod(t.at(r, "fz"))}}});
        }
        const Json report{{"records_with_force", n}, {"totals", rows}};
        if (!o.out.empty()) detail::write_json(o.out, report);
        out << "attached total forces to " << n << " of " << t.rows.size() << " records\n";
        return 0;
      }
      if (o.dirs.size() != 2) throw ValidationError("eval: expected two directories to compare");
      std::vector<Metrics> all;
      Json per = Json::array();
      for (const auto& [a, b] : detail::image_pairs(o.dirs[0], o.dirs[1])) {
        const Metrics m = compare(render::read_png(a), render::read_png(b));
        all.push_back(m);
        per.push_back({{"a", a.filename().string()}, {"ssim", m.ssim}, {"mse", m.mse}, {"mae", m.mae},
                       {"psnr", detail::metric_json(m.psnr)}});
      }
      Json report = detail::summary_json(summarize(all));
      out << report.dump(1) << "\n";
      if (!o.out.empty()) {
        report["pairs"] = per;
        detail::write_json(o.out, report);
      }
      return 0;
    }

    if (exporter->parsed()) {
      const fs::path dir = detail::cli_out(o);
      const std::size_t n = export_forcenet_dataset(o.dataset, dir, o.stiffness);
      out << "exported " << n << " samples to " << dir.string() << "\n";
      return 0;
    }
  } catch (const ValidationError& e) {
    err << "tacsim: error: " << e.what() << "\n";
    return 1;
  } catch (const FormatError& e) {
    err << "tacsim: error: " << e.what() << "\n";
    return 1;
  } catch (const std::exception& e) {
    err << "tacsim: runtime error: " << e.what() << "\n";
    return 2;
  }
  err << "tacsim: no command\n";
  return 1;
}

} // namespace tacsim::scene
