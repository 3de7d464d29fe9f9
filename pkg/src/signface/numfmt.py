"""Fixed 6-decimal numeric convention used by every serialized format.

Values that live in files (grid activations, annotation times, curve
samples) are quantized to the 6-decimal lattice; a quantized value
formats and re-parses to the identical float, which is what makes the
save/load round-trip laws exact.
"""

from __future__ import annotations


def q6(x: float) -> float:
    """Quantize to 6 decimal places; normalizes -0.0 to 0.0."""
    v = round(float(x), 6)
    return 0.0 if v == 0 else v


def fmt6(x: float) -> str:
    """Fixed 6-decimal rendering, e.g. 0.75 -> '0.750000'."""
    return f"{x:.6f}"


def fmt_fps(fps: float) -> str:
    """Frames per second: integer form when integral, else 6-decimal."""
    if fps == int(fps):
        return str(int(fps))
    return fmt6(fps)
