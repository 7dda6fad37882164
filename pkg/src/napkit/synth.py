"""Synthetic bar images and a planted toy conv model for end-to-end runs.

Each 16x16 RGB image contains one bar segment whose generative factors are
orientation (horizontal/vertical) and color (red/green). Two nuisance
parameters are continuous — the bar's sub-pixel position across its axis and
the sub-pixel start of its 10-pixel segment along it — and pixels carry
small Gaussian noise, so no two images repeat and position-sensitive
features spread over a 2-D manifold instead of forming groups.

The companion model's first conv layer holds four hand-planted
orientation-x-color band detectors: a 3-wide stripe of positive weight
flanked by inhibition, so a matching bar excites the matching channel at its
own location (roughly constant magnitude) while the other channels stay
silent. Position-invariant aggregation of those maps recovers the four
factor combinations; keeping the raw maps does not. That gives the pipeline
a known ground truth to test against.
"""

from __future__ import annotations

from pathlib import Path

import numpy as np

from napkit.errors import ParamError
from napkit.metadata import MetadataTable, SampleMetadata
from napkit.micromodel import Conv2d, Dense, Flatten, MaxPool2d, MicroModel, Relu
from napkit.tensors import ActivationTensor

IMAGE_SIZE = 16
BAR_LENGTH = 10
NOISE_STD = 0.05
FACTORS = ("red-h", "green-h", "red-v", "green-v")
_POSITION_RANGE = (2.0, 11.0)  # keeps the bar inside every detector/pool window
_SEGMENT_RANGE = (1.0, IMAGE_SIZE - BAR_LENGTH - 1.0)
_MISPREDICT_RATE = 0.05


def _interval_weights(start: float, length: float) -> np.ndarray:
    """Per-cell coverage of the interval [start, start+length) on a pixel row."""
    cells = np.arange(IMAGE_SIZE, dtype=np.float64)
    overlap = np.minimum(cells + 1.0, start + length) - np.maximum(cells, start)
    return np.clip(overlap, 0.0, 1.0)


def make_bars_dataset(
    n_samples: int, seed: int, *, image_refs: bool = True
) -> tuple[ActivationTensor, MetadataTable]:
    """Generate n bar images with metadata; deterministic per seed.

    Labels cycle through the four factor combinations so classes stay
    balanced. Predictions equal labels except for a small deterministic
    fraction flipped to a different class (so misprediction filters have
    something to find). Image refs are "{sample_id}.png", matching what
    ``write_assets`` produces; pass ``image_refs=False`` when the images
    will not exist, so the metadata never points at missing files.
    """
    if n_samples < 1:
        raise ParamError(f"n_samples must be >= 1, got {n_samples}")
    rng = np.random.default_rng(seed)
    images = rng.normal(0.0, NOISE_STD, size=(n_samples, IMAGE_SIZE, IMAGE_SIZE, 3))
    images = images.astype(np.float32)
    records = []
    for i in range(n_samples):
        factor = FACTORS[i % len(FACTORS)]
        color, orientation = factor.split("-")
        channel = 0 if color == "red" else 1
        position = rng.uniform(*_POSITION_RANGE)
        segment = rng.uniform(*_SEGMENT_RANGE)
        row, frac = int(position), position - int(position)
        along = _interval_weights(segment, BAR_LENGTH)
        if orientation == "h":
            images[i, row, :, channel] += ((1.0 - frac) * along).astype(np.float32)
            images[i, row + 1, :, channel] += (frac * along).astype(np.float32)
        else:
            images[i, :, row, channel] += ((1.0 - frac) * along).astype(np.float32)
            images[i, :, row + 1, channel] += (frac * along).astype(np.float32)
        prediction = factor
        if rng.random() < _MISPREDICT_RATE:
            others = [f for f in FACTORS if f != factor]
            prediction = others[int(rng.integers(len(others)))]
        records.append(
            SampleMetadata(
                sample_id=i,
                label=factor,
                prediction=prediction,
                image_ref=f"{i}.png" if image_refs else None,
            )
        )
    tensor = ActivationTensor(layer_id="input", values=images)
    return tensor, MetadataTable(records)


def _planted_conv1() -> np.ndarray:
    """Four 5x5 detectors: (red, green) x (horizontal, vertical) bars.

    Each detector is a 3-cell-wide positive band across the full window in
    the target color, with inhibitory flanks in the same color and an
    inhibitory band in the opposite color. A bar aligned with the band puts
    its whole mass inside it (clearing the bias); a perpendicular bar feeds
    band and flanks alike and nets out below threshold.
    """
    kernels = np.zeros((5, 5, 3, 4), dtype=np.float32)
    for f, (channel, orientation) in enumerate(
        [(0, "h"), (1, "h"), (0, "v"), (1, "v")]
    ):
        other = 1 - channel
        if orientation == "h":
            kernels[1:4, :, channel, f] = 1.0
            kernels[(0, 4), :, channel, f] = -1.5
            kernels[1:4, :, other, f] = -1.0
        else:
            kernels[:, 1:4, channel, f] = 1.0
            kernels[:, (0, 4), channel, f] = -1.5
            kernels[:, 1:4, other, f] = -1.0
    return kernels


def make_bars_model() -> MicroModel:
    """conv -> relu -> pool -> conv -> relu -> pool -> flatten -> dense.

    conv1 detects the four factor combinations; conv2 passes channels
    through; the dense layer sums each channel's surviving map into one
    "class code" unit (units 0-3) plus four fixed mixing units (4-7).
    """
    conv2 = np.zeros((3, 3, 4, 4), dtype=np.float32)
    for f in range(4):
        conv2[1, 1, f, f] = 1.0
    dense_in = 3 * 3 * 4
    weights = np.zeros((dense_in, 8), dtype=np.float32)
    for idx in range(dense_in):
        weights[idx, idx % 4] = 1.0
    mix_rng = np.random.default_rng(0)
    weights[:, 4:] = mix_rng.normal(0.0, 0.1, size=(dense_in, 4)).astype(np.float32)
    return MicroModel(
        model_id="bars-toy",
        input_shape=(IMAGE_SIZE, IMAGE_SIZE, 3),
        layers=(
            Conv2d(
                name="conv1",
                kernels=_planted_conv1(),
                bias=np.full(4, -3.0, dtype=np.float32),
                stride=1,
                padding="valid",
            ),
            Relu(name="relu1"),
            MaxPool2d(name="pool1", window=2, stride=2),
            Conv2d(
                name="conv2",
                kernels=conv2,
                bias=np.zeros(4, dtype=np.float32),
                stride=1,
                padding="same",
            ),
            Relu(name="relu2"),
            MaxPool2d(name="pool2", window=2, stride=2),
            Flatten(name="flat"),
            Dense(name="dense", weights=weights, bias=np.zeros(8, dtype=np.float32)),
        ),
    )


def write_assets(images: ActivationTensor, out_dir: str | Path) -> int:
    """Render each sample as assets/{sample_id}.png; returns the count.

    Requires Pillow (an optional dependency; only asset rendering needs it).
    """
    try:
        from PIL import Image
    except ImportError as exc:  # pragma: no cover - environment-dependent
        raise ParamError("writing image assets requires the Pillow package") from exc
    out_dir = Path(out_dir)
    out_dir.mkdir(parents=True, exist_ok=True)
    values = np.clip(images.values, 0.0, 1.0)
    for i in range(values.shape[0]):
        pixels = (values[i] * 255.0).round().astype(np.uint8)
        Image.fromarray(pixels, mode="RGB").save(out_dir / f"{i}.png")
    return int(values.shape[0])
