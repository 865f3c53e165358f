"""SSIM goldens from scikit-image with the library's window settings."""

import numpy as np
from skimage.metrics import structural_similarity


def ssim(a, b, mask=None):
    score, full = structural_similarity(
        a, b, data_range=1.0, gaussian_weights=True, sigma=1.5,
        use_sample_covariance=False, full=True)
    if mask is None:
        return float(score)
    pad = 5
    inner = full[pad:-pad, pad:-pad]
    sel = mask[pad:-pad, pad:-pad].astype(bool)
    return float(inner[sel].mean())
