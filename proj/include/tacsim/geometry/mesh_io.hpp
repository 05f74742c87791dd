// Copyright 2026 The tacsim Authors
// SPDX-License-Identifier: Apache-2.0
#pragma once

// OBJ (v/f records only) and STL (ASCII or binary little-endian) readers.

#include "tacsim/core/error.hpp"
#include "tacsim/geometry/mesh.hpp"

#include <algorithm>
#include <cctype>
#include <cstdio>
#include <cstring>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

namespace tacsim::geometry {

namespace detail {

inline std::string lower(std::string s) {
  std::transform(s.begin(), s.end(), s.begin(), [](unsigned char c) { return std::tolower(c); });
  return s;
}

inline std::vector<char> slurp(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) {
    throw IoError("cannot read mesh file '" + path.string() + "'");
  }
  return {std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>()};
}

inline TriangleMesh parse_obj(const std::string& text, const std::string& name) {
  Vec3List verts;
  std::vector<Face> faces;
  std::istringstream in(text);
  std::string line;
  std::size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    std::istringstream ls(line);
    std::string tag;
    if (!(ls >> tag)) continue;
    if (tag == "v") {
      double x, y, z;
      if (!(ls >> x >> y >> z)) {
        throw FormatError(name + ":" + std::to_string(lineno) + ": malformed vertex record");
      }
      verts.emplace_back(x, y, z);
    } else if (tag == "f") {
      std::vector<std::uint32_t> idx;
      std::string tok;
      while (ls >> tok) {
        long v = 0;
        try {
          v = std::stol(tok.substr(0, tok.find('/')));
        } catch (const std::exception&) {
          throw FormatError(name + ":" + std::to_string(lineno) + ": malformed face index '" + tok + "'");
        }
        if (v < 0) v = static_cast<long>(verts.size()) + v + 1; // relative index
        if (v < 1 || static_cast<std::size_t>(v) > verts.size()) {
          throw FormatError(name + ":" + std::to_string(lineno) + ": face index out of range");
        }
        idx.push_back(static_cast<std::uint32_t>(v - 1));
      }
      if (idx.size() < 3) {
        throw FormatError(name + ":" + std::to_string(lineno) + ": face with fewer than 3 vertices");
      }
      for (std::size_t k = 1; k + 1 < idx.size(); ++k) faces.push_back({idx[0], idx[k], idx[k + 1]});
    }
  }
  return TriangleMesh(std::move(verts), std::move(faces));
}

inline TriangleMesh parse_stl_binary(const std::vector<char>& raw, const std::string& name) {
  if (raw.size() < 84) {
    throw FormatError(name + ": truncated binary STL header");
  }
  std::uint32_t count = 0;
  std::memcpy(&count, raw.data() + 80, 4);
  if (raw.size() < 84 + 50ULL * count) {
    throw FormatError(name + ": truncated binary STL (" + std::to_string(count) + " facets declared)");
  }
  Vec3List verts;
  std::vector<Face> faces;
  verts.reserve(3ULL * count);
  for (std::uint32_t i = 0; i < count; ++i) {
    const char* rec = raw.data() + 84 + 50ULL * i + 12; // skip the stored normal
    float xyz[9];
    std::memcpy(xyz, rec, sizeof xyz);
    const auto base = static_cast<std::uint32_t>(verts.size());
    for (int k = 0; k < 3; ++k) verts.emplace_back(xyz[3 * k], xyz[3 * k + 1], xyz[3 * k + 2]);
    faces.push_back({base, base + 1, base + 2});
  }
  return weld_exact(verts, faces);
}

inline TriangleMesh parse_stl_ascii(const std::string& text, const std::string& name) {
  Vec3List verts;
  std::vector<Face> faces;
  std::istringstream in(text);
  std::string tok;
  int in_facet = 0;
  while (in >> tok) {
    tok = lower(tok);
    if (tok == "vertex") {
      double x, y, z;
      if (!(in >> x >> y >> z)) {
        throw FormatError(name + ": malformed ASCII STL vertex");
      }
      verts.emplace_back(x, y, z);
      ++in_facet;
    } else if (tok == "endfacet") {
      if (in_facet != 3) {
        throw FormatError(name + ": ASCII STL facet without exactly 3 vertices");
      }
      const auto base = static_cast<std::uint32_t>(verts.size() - 3);
      faces.push_back({base, base + 1, base + 2});
      in_facet = 0;
    }
  }
  if (in_facet != 0) {
    throw FormatError(name + ": truncated ASCII STL");
  }
  return weld_exact(verts, faces);
}

} // namespace detail

/// Loads an OBJ or STL mesh; zero-area faces are dropped and counted.
inline TriangleMesh load_mesh(const std::filesystem::path& path) {
  const std::string ext = detail::lower(path.extension().string());
  const std::string name = path.string();
  const auto raw = detail::slurp(path);
  TriangleMesh mesh;
  if (ext == ".obj") {
    mesh = detail::parse_obj(std::string(raw.begin(), raw.end()), name);
  } else if (ext == ".stl") {
    // Binary files may also begin with "solid"; the record-size identity decides.
    bool binary = true;
    if (raw.size() >= 5 && std::string(raw.data(), 5) == "solid") {
      std::uint32_t count = 0;
      if (raw.size() >= 84) std::memcpy(&count, raw.data() + 80, 4);
      binary = raw.size() >= 84 && raw.size() == 84 + 50ULL * count;
    }
    mesh = binary ? detail::parse_stl_binary(raw, name) : detail::parse_stl_ascii(std::string(raw.begin(), raw.end()), name);
  } else {
    throw FormatError(name + ": unsupported mesh format '" + ext + "' (expected .obj or .stl)");
  }
  if (mesh.empty()) {
    throw FormatError(name + ": mesh has no usable faces");
  }
  return mesh;
}

/// Writes a Wavefront OBJ (vertices and 1-based triangle faces only).
inline void save_obj(const std::filesystem::path& path, const TriangleMesh& mesh) {
  std::FILE* f = std::fopen(path.string().c_str(), "wb");
  if (!f) throw IoError("cannot open '" + path.string() + "' for writing");
  for (const Vec3& v : mesh.vertices()) std::fprintf(f, "v %.17g %.17g %.17g\n", v.x(), v.y(), v.z());
  for (const auto& t : mesh.faces()) std::fprintf(f, "f %u %u %u\n", t[0] + 1, t[1] + 1, t[2] + 1);
  const bool ok = std::ferror(f) == 0;
  if (std::fclose(f) != 0 || !ok) throw IoError("write failed for '" + path.string() + "'");
}

} // namespace tacsim::geometry
