"""Independent numpy Canny used to produce the committed golden edge map.

Same parameters as the library (Rec. 709 luminance, Gaussian radius ceil(3 sigma)
with clamped borders, Sobel, relative thresholds), but direction binning uses
arctan2 and hysteresis uses connected-component labelling.
"""

import math

import numpy as np
from scipy import ndimage


def gaussian_taps(sigma):
    radius = math.ceil(3.0 * sigma)
    taps = [math.exp(-(k * k) / (2.0 * sigma * sigma)) for k in range(-radius, radius + 1)]
    total = 0.0
    for t in taps:
        total += t
    return [t / total for t in taps], radius


def blur(plane, sigma):
    taps, r = gaussian_taps(sigma)
    h, w = plane.shape
    padded = np.pad(plane, ((0, 0), (r, r)), mode="edge")
    rows = np.zeros_like(plane)
    for i, t in enumerate(taps):
        rows = rows + t * padded[:, i:i + w]
    padded = np.pad(rows, ((r, r), (0, 0)), mode="edge")
    out = np.zeros_like(plane)
    for i, t in enumerate(taps):
        out = out + t * padded[i:i + h, :]
    return out


def canny(plane, low=0.1, high=0.2, sigma=1.4):
    b = blur(np.asarray(plane, dtype=np.float64), sigma)
    h, w = b.shape
    p = np.pad(b, 1, mode="edge")

    def s(dy, dx):
        return p[1 + dy:1 + dy + h, 1 + dx:1 + dx + w]

    gx = (s(-1, 1) + 2.0 * s(0, 1) + s(1, 1)) - (s(-1, -1) + 2.0 * s(0, -1) + s(1, -1))
    gy = (s(1, -1) + 2.0 * s(1, 0) + s(1, 1)) - (s(-1, -1) + 2.0 * s(-1, 0) + s(-1, 1))
    mag = np.sqrt(gx * gx + gy * gy)
    peak = mag.max()
    if peak == 0.0:
        return np.zeros((h, w), dtype=np.uint8)
    q = float(1 << 24)
    mag = np.rint(mag / peak * q)
    low, high = low * q, high * q

    ang = np.degrees(np.arctan2(gy, gx)) % 180.0
    keep = np.zeros((h, w), dtype=bool)
    for y in range(1, h - 1):
        for x in range(1, w - 1):
            m = mag[y, x]
            if m < low:
                continue
            a = ang[y, x]
            if a < 22.5 or a >= 157.5:
                dy, dx = 0, 1
            elif a < 67.5:
                dy, dx = 1, 1
            elif a < 112.5:
                dy, dx = 1, 0
            else:
                dy, dx = -1, 1
            if m > mag[y - dy, x - dx] and m >= mag[y + dy, x + dx]:
                keep[y, x] = True

    labels, n = ndimage.label(keep, structure=np.ones((3, 3)))
    strong = keep & (mag >= high)
    good = np.unique(labels[strong])
    return np.isin(labels, good[good > 0]).astype(np.uint8)
