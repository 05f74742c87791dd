# Copyright 2026 The tacsim Authors
# SPDX-License-Identifier: Apache-2.0
"""Writes the metric fixture images and reference values (scikit-image)."""

import json
import pathlib

import numpy as np
from PIL import Image
from skimage.metrics import mean_squared_error, peak_signal_noise_ratio, structural_similarity

HERE = pathlib.Path(__file__).resolve().parent
W, H = 48, 36


def images():
    rng = np.random.default_rng(20261014)
    u, v = np.meshgrid(np.arange(W), np.arange(H))
    out = {}
    out["const100"] = np.full((H, W, 3), 100, np.uint8)
    out["const101"] = np.full((H, W, 3), 101, np.uint8)
    grad = np.stack([u * 5, v * 7, (u + v) * 3], -1)
    out["gradient"] = np.clip(grad, 0, 255).astype(np.uint8)
    noise = rng.integers(0, 256, (H, W, 3))
    out["noise"] = noise.astype(np.uint8)
    out["noise_shift"] = np.clip(noise + rng.integers(-20, 21, (H, W, 3)), 0, 255).astype(np.uint8)
    blob = 120 + 90 * np.exp(-((u - 20.0) ** 2 + (v - 15.0) ** 2) / 60.0)
    out["blob"] = np.stack([blob, blob * 0.8, blob * 0.6], -1).astype(np.uint8)
    out["blob_moved"] = np.roll(out["blob"], (2, 3), (0, 1))
    out["checker"] = (((u // 4 + v // 4) % 2) * 255)[..., None].repeat(3, -1).astype(np.uint8)
    out["inverted"] = (255 - out["checker"]).astype(np.uint8)
    out["dark"] = (out["gradient"] // 4).astype(np.uint8)
    return out


PAIRS = [
    ("const100", "const100"),
    ("const100", "const101"),
    ("gradient", "dark"),
    ("noise", "noise_shift"),
    ("blob", "blob_moved"),
    ("checker", "inverted"),
    ("gradient", "blob"),
    ("noise", "checker"),
    ("blob", "dark"),
    ("noise_shift", "gradient"),
]


def main():
    imgs = images()
    for name, a in imgs.items():
        Image.fromarray(a, "RGB").save(HERE / f"{name}.png")
    ref = []
    for a, b in PAIRS:
        x, y = imgs[a], imgs[b]
        ssim = structural_similarity(
            x, y, gaussian_weights=True, sigma=1.5, use_sample_covariance=False, data_range=255, channel_axis=-1
        )
        mse = mean_squared_error(x, y)
        mae = float(np.mean(np.abs(x.astype(float) - y.astype(float))))
        psnr = None if mse == 0 else float(peak_signal_noise_ratio(x, y, data_range=255))
        ref.append({"a": a, "b": b, "ssim": float(ssim), "mse": float(mse), "mae": mae, "psnr": psnr})
    (HERE / "reference.json").write_text(json.dumps(ref, indent=1) + "\n")


if __name__ == "__main__":
    main()
