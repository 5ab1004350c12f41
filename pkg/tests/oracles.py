"""Independent reference implementations used only to verify the library.

None of these share code with armlink: the forward-kinematics oracle
accumulates pitch per link instead of multiplying matrices, the inverse
oracle is a grid minimizer instead of the closed-form triangles, and the
checksum oracle shifts bit by bit instead of using a table.
"""

from __future__ import annotations

import math

import numpy as np

DEFAULT_LINKS = (63.0, 145.0, 170.0, 110.0)

GRID_RESOLUTION_DEG = 0.01
GRID_HALF_SPAN = math.pi / 2  # the (theta2, theta3) search box is [-90 deg, +90 deg]^2


def pitch_fk(t1, t2, t3, t4, links=DEFAULT_LINKS):
    """Tool position by summing pitch angles link by link.

    Each link advances (sin, cos) of the accumulated pitch in the vertical
    plane selected by the yaw; link 2 carries the arm's built-in 90 degree
    rest offset.  No homogeneous matrices involved.
    """
    a1, a2, a3, a4 = links
    s1 = t2
    s2 = t2 + math.pi / 2 + t3
    s3 = s2 + t4
    radial = a2 * math.sin(s1) + a3 * math.sin(s2) + a4 * math.sin(s3)
    z = a1 + a2 * math.cos(s1) + a3 * math.cos(s2) + a4 * math.cos(s3)
    return radial * math.cos(t1), radial * math.sin(t1), z


def pitch_fk_chain(t1, t2, t3, t4, links=DEFAULT_LINKS):
    """Joint points (base, shoulder, elbow, wrist, tool) by the same accumulation."""
    a1, a2, a3, a4 = links
    pitches = (t2, t2 + math.pi / 2 + t3, t2 + math.pi / 2 + t3 + t4)
    points = [(0.0, 0.0, 0.0), (0.0, 0.0, a1)]
    radial, z = 0.0, a1
    for a, s in zip((a2, a3, a4), pitches):
        radial += a * math.sin(s)
        z += a * math.cos(s)
        points.append((radial * math.cos(t1), radial * math.sin(t1), z))
    return points


def grid_ik(x, y, z, links=DEFAULT_LINKS, resolution_deg=GRID_RESOLUTION_DEG):
    """(theta2, theta3) minimizing wrist error over the fine grid on the box.

    Stands in for scanning the full resolution_deg grid (18001 x 18001 at
    0.01 deg): a 0.5 degree coarse pass localizes candidate basins, then the
    best coarse cells (deduplicated) are re-scanned at full resolution over
    a +-1.5 degree window.  Near the stretched/folded boundary the error
    surface has a flat valley where many cells tie within the quantization
    floor; the returned cell is then one of the near-tied minimizers.

    Returns (theta2, theta3, residual_error_mm), all grid-exact.
    """
    a1, a2, a3, a4 = links
    w = math.hypot(x, y) - a4
    tz = z - a1

    step = math.radians(resolution_deg)
    n = int(round(2 * GRID_HALF_SPAN / step)) + 1  # grid indices 0..n-1

    def theta_of(idx):
        return -GRID_HALF_SPAN + idx * step

    def error_grid(i2, i3):
        """Squared wrist error at grid indices i2 (theta2) x i3 (theta3)."""
        t2 = theta_of(i2)[:, None]
        t3 = theta_of(i3)[None, :]
        s2 = t2 + math.pi / 2 + t3
        u = a2 * np.sin(t2) + a3 * np.sin(s2)
        v = a2 * np.cos(t2) + a3 * np.cos(s2)
        return (u - w) ** 2 + (v - tz) ** 2

    coarse_stride = max(1, int(round(0.5 / resolution_deg)))
    coarse_idx = np.arange(0, n, coarse_stride)
    coarse_err = error_grid(coarse_idx, coarse_idx)
    order = np.argsort(coarse_err.ravel())[:10]
    window = int(round(1.5 / resolution_deg))
    candidates = []
    for f in order:
        cell = (int(coarse_idx[f // len(coarse_idx)]), int(coarse_idx[f % len(coarse_idx)]))
        if all(max(abs(cell[0] - c[0]), abs(cell[1] - c[1])) > window for c in candidates):
            candidates.append(cell)

    best = (math.inf, 0, 0)
    for ci2, ci3 in candidates:
        i2 = np.arange(max(0, ci2 - window), min(n, ci2 + window + 1))
        i3 = np.arange(max(0, ci3 - window), min(n, ci3 + window + 1))
        err = error_grid(i2, i3)
        k = int(np.argmin(err))
        value = float(err.ravel()[k])
        if value < best[0]:
            best = (value, int(i2[k // len(i3)]), int(i3[k % len(i3)]))
    value, b2, b3 = best
    return theta_of(b2), theta_of(b3), math.sqrt(value)


def crc8_bitwise(data: bytes) -> int:
    """Reference CRC-8: polynomial 0x07, init 0x00, MSB first, bit by bit."""
    crc = 0
    for byte in data:
        crc ^= byte
        for _ in range(8):
            crc = ((crc << 1) ^ 0x07) & 0xFF if crc & 0x80 else (crc << 1) & 0xFF
    return crc
