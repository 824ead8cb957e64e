# -*- coding: utf-8 -
#
# This file is part of motionkit released under the MIT license.
# See the NOTICE for more information.

"""
Closed-form checks of the numerical kernels, runnable without any
trained model. Each check raises AssertionError on failure.
"""
from collections import OrderedDict
import logging
import math
import os
import shutil
import tempfile

import numpy as np
import torch

from .checkpoint import load_checkpoint, save_checkpoint
from .evaluation.metrics import keypoint_l1, psnr, ssim
from .flow import cfg_velocity, euler_integrate, noised, target_velocity
from .logging import Stopwatch
from .nn.encoder import GaussianLatent, kl_loss
from .nn.generator import vae_decode, vae_encode
from .rng import rng_fork
from .schema import Config
from .syndata.augment import Augmentation
from .syndata.render import keypoint_heatmaps
from .syndata.skeleton import chain_positions

__all__ = ['CHECKS', 'check', 'run_selftest']

log = logging.getLogger(__name__)

CHECKS = OrderedDict()


def check(name):
    def register(fn):
        CHECKS[name] = fn
        return fn
    return register


def _close(value, expected, tol=1e-4, what="value"):
    assert abs(value - expected) <= tol, "%s %r != %r" % (what, value, expected)


@check("checkpoint_roundtrip")
def check_checkpoint():
    rng = rng_fork(0, "selftest:checkpoint")
    params = OrderedDict([("a.weight", rng.normal((3, 4))),
                          ("b.bias", rng.normal((5,)))])
    tmp = tempfile.mkdtemp()
    try:
        path = os.path.join(tmp, "ckpt.bin")
        save_checkpoint(params, Config(), path)
        loaded, config = load_checkpoint(path)
    finally:
        shutil.rmtree(tmp)
    assert list(loaded) == list(params), "entry order changed"
    for name in params:
        assert torch.equal(loaded[name], params[name]), "%s changed" % name
    assert config.hash() == Config().hash(), "config changed"


@check("pseudo_vae_exact")
def check_vae():
    clip = rng_fork(0, "selftest:vae").rand((2, 3, 64, 64))
    latent = vae_encode(clip, 4)
    assert tuple(latent.shape) == (2, 48, 16, 16), "latent shape %s" % (latent.shape,)
    assert torch.equal(vae_decode(latent, 4), clip), "decode(encode(x)) != x"


@check("kl_closed_form")
def check_kl():
    cases = (((0., 0.), 0.), ((1., 0.), 0.5), ((0., math.log(2.)), 0.1534))
    for (mu, logvar), expected in cases:
        g = GaussianLatent(torch.tensor([[mu]]), torch.tensor([[logvar]]))
        _close(float(kl_loss(g)), expected, 1e-4, "kl(%r, %r)" % (mu, logvar))


@check("flow_endpoints")
def check_flow():
    rng = rng_fork(0, "selftest:flow")
    x1, eps = rng.normal((2, 6)), rng.normal((2, 6))
    assert torch.allclose(noised(x1, eps, torch.zeros(2)), eps)
    assert torch.allclose(noised(x1, eps, torch.ones(2)), x1)
    v = target_velocity(x1, eps)
    out = euler_integrate(lambda x, t: v, eps.clone(), 4)
    assert torch.allclose(out, x1, atol=1e-5), "euler on the exact velocity"


@check("cfg_identity")
def check_cfg():
    rng = rng_fork(0, "selftest:cfg")
    vu, vc = rng.normal((3,)), rng.normal((3,))
    assert torch.equal(cfg_velocity(vu, vc, 1.), vc)
    assert torch.allclose(cfg_velocity(vu, vc, 2.), 2 * vc - vu)


@check("forward_kinematics")
def check_fk():
    ends, _ = chain_positions((0., 0.), 0., [-1, 0], [1., 1.], [0., 0.])
    assert np.allclose(ends[-1], (2., 0.)), "straight chain ends at %s" % ends[-1]
    ends, _ = chain_positions((0., 0.), 0., [-1, 0], [1., 1.], [math.pi / 2, 0.])
    assert np.allclose(ends[-1], (0., 2.)), "bent chain ends at %s" % ends[-1]


@check("image_metrics")
def check_metrics():
    a = np.full((8, 8, 3), 0.5, dtype=np.float32)
    assert math.isinf(psnr(a, a))
    _close(psnr(a, a + 0.1), 20., 1e-3, "psnr at mse 0.01")
    _close(psnr(np.zeros_like(a), np.ones_like(a)), 0., 1e-6, "psnr at mse 1")
    board = (np.indices((16, 16)).sum(axis=0) % 2).astype(np.float32)
    board = np.repeat(board[..., None], 3, axis=-1)
    _close(ssim(board, board), 1., 1e-6, "ssim(x, x)")
    assert ssim(board, 1. - board) < 0, "ssim of an inverted checkerboard"
    gt = np.zeros((1, 2))
    pred = np.array([[math.sqrt(2.) * 64 * 0.1, 0.]])
    _close(keypoint_l1(pred, gt, [True], size=64), 0.05, 1e-9, "keypoint l1")


@check("augmentation_consistency")
def check_augmentation():
    size = 64
    aug = Augmentation.sample(rng_fork(0, "selftest:augment"), size)
    point = np.array([[30., 34.]])
    marker = keypoint_heatmaps(point, np.array([True]), size, 1.5)[0]
    warped = aug.warp(np.repeat(marker[..., None], 3, axis=-1))[..., 0]
    ys, xs = np.mgrid[0:size, 0:size]
    weights = warped / warped.sum()
    found = np.array([(xs * weights).sum(), (ys * weights).sum()])
    moved = aug.forward(point)[0]
    err = np.abs(found - moved).max()
    assert err <= 1., "marker moved %.2f px away from its mapped keypoint" % err


def run_selftest(names=None):
    """ run the named checks (all by default); returns
    [(name, passed, message, seconds)] """
    results = []
    for name, fn in CHECKS.items():
        if names and name not in names:
            continue
        watch = Stopwatch()
        try:
            fn()
        except AssertionError as e:
            results.append((name, False, str(e), watch.elapsed()))
            log.error("selftest %s failed: %s", name, e)
        else:
            results.append((name, True, "", watch.elapsed()))
            log.info("selftest %s passed", name)
    return results
