# -*- coding: utf-8 -
#
# This file is part of motionkit released under the MIT license.
# See the NOTICE for more information.

"""
Metric kernels. Frames are (H, W, 3) arrays in [0, 1].
"""
import math

import numpy as np
import torch
import torch.nn.functional as F

from ..exceptions import ShapeMismatchError

__all__ = ['psnr', 'ssim', 'keypoint_l1', 'normal_sign_agreement',
           'seam_continuity', 'linear_probe_r2', 'gaussian_window']

SSIM_WINDOW = 11
SSIM_SIGMA = 1.5
SSIM_K1 = 0.01
SSIM_K2 = 0.03


def _same_shape(a, b):
    a = np.asarray(a, dtype=np.float64)
    b = np.asarray(b, dtype=np.float64)
    if a.shape != b.shape:
        raise ShapeMismatchError("shape mismatch: %s vs %s" % (a.shape, b.shape))
    return a, b


def psnr(a, b):
    """ 10 log10(1 / MSE) in dB for peak 1; identical inputs give inf """
    a, b = _same_shape(a, b)
    mse = float(np.mean((a - b) ** 2))
    if mse == 0.:
        return math.inf
    return 10. * math.log10(1. / mse)


def gaussian_window(size=SSIM_WINDOW, sigma=SSIM_SIGMA):
    x = np.arange(size, dtype=np.float64) - (size - 1) / 2.
    g = np.exp(-x ** 2 / (2 * sigma ** 2))
    g /= g.sum()
    return np.outer(g, g)


def _gray(x):
    return x.mean(axis=-1) if x.ndim == 3 else x


def ssim(a, b):
    """ single-scale SSIM of the channel-mean grayscale images, averaged
    over the valid (unpadded) window positions """
    a, b = _same_shape(a, b)
    a, b = _gray(a), _gray(b)
    if min(a.shape) < SSIM_WINDOW:
        raise ShapeMismatchError("ssim needs images of at least %d pixels, got %s"
                                 % (SSIM_WINDOW, a.shape))
    window = torch.from_numpy(gaussian_window())[None, None]

    def filt(x):
        return F.conv2d(torch.from_numpy(x)[None, None], window)[0, 0]

    c1 = SSIM_K1 ** 2
    c2 = SSIM_K2 ** 2
    mu_a, mu_b = filt(a), filt(b)
    var_a = filt(a * a) - mu_a ** 2
    var_b = filt(b * b) - mu_b ** 2
    cov = filt(a * b) - mu_a * mu_b
    num = (2 * mu_a * mu_b + c1) * (2 * cov + c2)
    den = (mu_a ** 2 + mu_b ** 2 + c1) * (var_a + var_b + c2)
    return float((num / den).mean())


def keypoint_l1(pred, gt, visible, subset=None, size=None):
    """ mean over visible joints of (|dx| + |dy|) / 2, in units of the
    image diagonal. Returns None when no joint of `subset` is visible. """
    pred = np.asarray(pred, dtype=np.float64).reshape(-1, 2)
    gt = np.asarray(gt, dtype=np.float64).reshape(-1, 2)
    visible = np.asarray(visible, dtype=bool).reshape(-1)
    if pred.shape != gt.shape:
        raise ShapeMismatchError("keypoint shapes differ: %s vs %s"
                                 % (pred.shape, gt.shape))
    if subset is not None:
        pred, gt, visible = pred[subset], gt[subset], visible[subset]
    if not visible.any():
        return None
    diag = math.sqrt(2.) * size if size is not None else 1.
    err = np.abs(pred[visible] - gt[visible]).sum(axis=1) / 2.
    return float(err.mean() / diag)


def normal_sign_agreement(pred, gt, mask, min_abs_z=0.5):
    """ fraction of masked near-axis pixels (|gt z| >= min_abs_z) whose
    predicted z has the sign of the ground truth; None if none qualify """
    pred = np.asarray(pred)
    gt = np.asarray(gt)
    mask = np.asarray(mask) > 0.5
    sel = mask & (np.abs(gt[..., 2]) >= min_abs_z)
    if not sel.any():
        return None
    return float(np.mean(np.sign(pred[..., 2][sel]) == np.sign(gt[..., 2][sel])))


def seam_continuity(frames, schedule):
    """ (seam MAE, intra-chunk MAE) of consecutive frame differences. A
    seam is the step into the first newly generated frame of a chunk.
    Either value is None when no such pair exists. """
    frames = np.asarray(frames, dtype=np.float64)
    seams = set()
    for start, end, clamp in schedule[1:]:
        seams.add(start + clamp)
    seam, intra = [], []
    for t in range(1, len(frames)):
        diff = float(np.abs(frames[t] - frames[t - 1]).mean())
        (seam if t in seams else intra).append(diff)
    return (float(np.mean(seam)) if seam else None,
            float(np.mean(intra)) if intra else None)


def linear_probe_r2(features, targets, train_fraction=0.7):
    """ held-out R^2 of a least-squares linear map (with bias) fitted on
    the first `train_fraction` of the rows """
    x = np.asarray(features, dtype=np.float64)
    y = np.asarray(targets, dtype=np.float64)
    if y.ndim == 1:
        y = y[:, None]
    n = len(x)
    split = int(round(n * train_fraction))
    if split < 1 or split >= n:
        raise ValueError("need rows on both sides of the split, got %d rows" % n)
    design = np.hstack([x, np.ones((n, 1))])
    coef = np.linalg.lstsq(design[:split], y[:split], rcond=None)[0]
    pred = design[split:] @ coef
    resid = ((y[split:] - pred) ** 2).sum()
    total = ((y[split:] - y[split:].mean(axis=0)) ** 2).sum()
    if total == 0:
        return 0.
    return float(1. - resid / total)
