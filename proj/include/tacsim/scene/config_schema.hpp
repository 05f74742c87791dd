// Copyright 2026 The tacsim Authors
// SPDX-License-Identifier: Apache-2.0
#pragma once

// Scene configuration schema. Kept identical to docs/config_schema.json
// (a unit test compares the two).

namespace tacsim::scene {

inline constexpr const char* kConfigSchema = R"json({
  "$schema": "https://json-schema.org/draft/2020-12/schema",
  "title": "tacsim scene configuration",
  "type": "object",
  "additionalProperties": false,
  "required": ["sensor"],
  "properties": {
    "name": {"type": "string", "default": "scene"},
    "seed": {"type": "integer", "minimum": 0, "default": 0},
    "particle_spacing": {"type": "number", "exclusiveMinimum": 0, "default": 0.4},
    "sensor": {
      "type": "object",
      "additionalProperties": false,
      "required": ["kind"],
      "properties": {
        "kind": {"enum": ["gelsight", "geltip", "mesh"]},
        "material": {"type": "integer", "minimum": 0, "default": 0},
        "size": {"type": "array", "items": {"type": "number", "exclusiveMinimum": 0}, "minItems": 3, "maxItems": 3},
        "radius": {"type": "number", "exclusiveMinimum": 0},
        "length": {"type": "number", "exclusiveMinimum": 0},
        "thickness": {"type": "number", "exclusiveMinimum": 0},
        "segments": {"type": "integer", "minimum": 8},
        "membrane_mesh": {"type": "string"},
        "reflective_mesh": {"type": "string"},
        "support": {
          "type": "object",
          "additionalProperties": false,
          "required": ["axis", "below"],
          "properties": {
            "axis": {"enum": ["x", "y", "z"]},
            "below": {"type": "number"}
          }
        },
        "surface_band": {"type": "number", "exclusiveMinimum": 0}
      }
    },
    "materials": {
      "type": "array",
      "minItems": 1,
      "items": {
        "type": "object",
        "additionalProperties": false,
        "required": ["youngs_modulus", "poisson_ratio"],
        "properties": {
          "name": {"type": "string", "default": ""},
          "youngs_modulus": {"type": "number", "exclusiveMinimum": 0},
          "poisson_ratio": {"type": "number", "minimum": 0, "exclusiveMaximum": 0.5},
          "density": {"type": "number", "exclusiveMinimum": 0, "default": 1e-6},
          "kind": {"enum": ["elastic", "rigid"], "default": "elastic"}
        }
      },
      "default": [
        {"name": "gel", "youngs_modulus": 0.145, "poisson_ratio": 0.45, "density": 1e-6, "kind": "elastic"},
        {"name": "indenter", "youngs_modulus": 1000.0, "poisson_ratio": 0.3, "density": 1e-6, "kind": "rigid"}
      ]
    },
    "indenter": {
      "type": "object",
      "additionalProperties": false,
      "default": {},
      "properties": {
        "shape": {"enum": ["sphere", "mesh"], "default": "sphere"},
        "radius": {"type": "number", "exclusiveMinimum": 0, "default": 3.0},
        "mesh": {"type": "string"},
        "sampling": {"enum": ["volume", "surface"], "default": "volume"},
        "material": {"type": "integer", "minimum": 0, "default": 1},
        "gap": {"type": "number", "minimum": 0},
        "position": {"type": "array", "items": {"type": "number"}, "minItems": 3, "maxItems": 3}
      }
    },
    "camera": {
      "type": "object",
      "additionalProperties": false,
      "default": {},
      "properties": {
        "position": {"type": "array", "items": {"type": "number"}, "minItems": 3, "maxItems": 3},
        "rotation": {
          "type": "array",
          "minItems": 3,
          "maxItems": 3,
          "items": {"type": "array", "items": {"type": "number"}, "minItems": 3, "maxItems": 3}
        },
        "look_at": {"type": "array", "items": {"type": "number"}, "minItems": 3, "maxItems": 3},
        "up": {"type": "array", "items": {"type": "number"}, "minItems": 3, "maxItems": 3},
        "fov": {"type": "number", "exclusiveMinimum": 0, "exclusiveMaximum": 3.141592653589793},
        "width": {"type": "integer", "minimum": 8, "default": 320},
        "height": {"type": "integer", "minimum": 8, "default": 240}
      }
    },
    "lights": {
      "type": "array",
      "items": {
        "type": "object",
        "additionalProperties": false,
        "properties": {
          "kind": {"enum": ["point", "line", "area"], "default": "point"},
          "position": {"type": "array", "items": {"type": "number"}, "minItems": 3, "maxItems": 3},
          "a": {"type": "array", "items": {"type": "number"}, "minItems": 3, "maxItems": 3},
          "b": {"type": "array", "items": {"type": "number"}, "minItems": 3, "maxItems": 3},
          "corners": {
            "type": "array",
            "minItems": 3,
            "maxItems": 4,
            "items": {"type": "array", "items": {"type": "number"}, "minItems": 3, "maxItems": 3}
          },
          "color": {"type": "array", "items": {"type": "number", "minimum": 0, "maximum": 1}, "minItems": 3, "maxItems": 3, "default": [1, 1, 1]},
          "i_d": {"type": "array", "items": {"type": "number", "minimum": 0}, "minItems": 3, "maxItems": 3, "default": [0.6, 0.6, 0.6]},
          "i_s": {"type": "array", "items": {"type": "number", "minimum": 0}, "minItems": 3, "maxItems": 3, "default": [0.3, 0.3, 0.3]},
          "samples": {"type": "integer", "minimum": 1, "default": 1}
        }
      }
    },
    "grid": {
      "type": "object",
      "additionalProperties": false,
      "default": {},
      "properties": {
        "nodes": {"type": "integer", "minimum": 8},
        "length": {"type": "number", "exclusiveMinimum": 0},
        "dt": {"type": "number", "exclusiveMinimum": 0, "default": 1e-4},
        "padding": {"type": "integer", "minimum": 3, "default": 4}
      }
    },
    "render": {
      "type": "object",
      "additionalProperties": false,
      "default": {},
      "properties": {
        "k_a": {"type": "array", "items": {"type": "number", "minimum": 0, "maximum": 1}, "minItems": 3, "maxItems": 3, "default": [1, 1, 1]},
        "k_d": {"type": "array", "items": {"type": "number", "minimum": 0, "maximum": 1}, "minItems": 3, "maxItems": 3, "default": [0.6, 0.6, 0.6]},
        "k_s": {"type": "array", "items": {"type": "number", "minimum": 0, "maximum": 1}, "minItems": 3, "maxItems": 3, "default": [0.2, 0.2, 0.2]},
        "alpha": {"type": "number", "exclusiveMinimum": 0, "default": 10},
        "i_a": {"type": "array", "items": {"type": "number", "minimum": 0}, "minItems": 3, "maxItems": 3, "default": [0.4, 0.4, 0.4]},
        "feather": {"type": "integer", "minimum": 0, "default": 3},
        "contact_threshold": {"type": "number", "exclusiveMinimum": 0, "default": 0.02},
        "normal_smoothing": {"type": "number", "minimum": 0, "default": 1.5},
        "background_image": {"type": "string"}
      }
    },
    "lightfield": {
      "type": "object",
      "additionalProperties": false,
      "default": {},
      "properties": {
        "attach_tolerance": {"type": "number", "exclusiveMinimum": 0, "default": 1.0},
        "cache": {"type": "string"}
      }
    },
    "markers": {
      "type": "object",
      "additionalProperties": false,
      "default": {},
      "properties": {
        "pitch": {"type": "number", "exclusiveMinimum": 0},
        "indices": {"type": "array", "items": {"type": "integer", "minimum": 0}},
        "radius": {"type": "integer", "minimum": 0, "default": 1},
        "arrow_scale": {"type": "number", "minimum": 0, "default": 5},
        "overlay": {"type": "boolean", "default": false}
      }
    },
    "simulation": {
      "type": "object",
      "additionalProperties": false,
      "default": {},
      "properties": {
        "indenter_speed": {"type": "number", "exclusiveMinimum": 0, "default": 50},
        "settle_steps": {"type": "integer", "minimum": 0, "default": 0},
        "release": {"enum": ["reset", "simulate"], "default": "reset"},
        "max_steps_per_move": {"type": "integer", "minimum": 1, "default": 200000},
        "occlusion_epsilon": {"type": "number", "minimum": 0}
      }
    },
    "trajectory": {
      "type": "object",
      "additionalProperties": false,
      "required": ["kind"],
      "properties": {
        "kind": {"enum": ["gelsight", "geltip", "custom"]},
        "grid": {"$ref": "#/$defs/sweep"},
        "tip_angle": {"$ref": "#/$defs/sweep"},
        "base": {"$ref": "#/$defs/sweep"},
        "paths": {"type": "integer", "minimum": 1},
        "depth": {"$ref": "#/$defs/sweep"},
        "shear": {
          "type": "object",
          "additionalProperties": false,
          "properties": {
            "directions": {"type": "integer", "minimum": 0},
            "step_deg": {"type": "number", "exclusiveMinimum": 0},
            "extent": {"$ref": "#/$defs/sweep"}
          }
        },
        "record_release": {"type": "boolean", "default": true},
        "waypoints": {
          "type": "array",
          "minItems": 1,
          "items": {
            "type": "object",
            "additionalProperties": false,
            "required": ["offset"],
            "properties": {
              "offset": {"type": "array", "items": {"type": "number"}, "minItems": 3, "maxItems": 3},
              "record": {"type": "boolean", "default": true}
            }
          }
        }
      }
    },
    "output": {
      "type": "object",
      "additionalProperties": false,
      "default": {},
      "properties": {
        "depth_mm_per_unit": {"type": "number", "exclusiveMinimum": 0, "default": 0.001},
        "write_depth": {"type": "boolean", "default": true},
        "write_displacement": {"type": "boolean", "default": true}
      }
    }
  },
  "$defs": {
    "sweep": {
      "type": "object",
      "additionalProperties": false,
      "required": ["range", "step"],
      "properties": {
        "range": {"type": "array", "items": {"type": "number"}, "minItems": 2, "maxItems": 2},
        "step": {"type": "number", "exclusiveMinimum": 0}
      }
    }
  }
}
)json";

} // namespace tacsim::scene
