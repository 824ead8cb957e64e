# -*- coding: utf-8 -
#
# This file is part of motionkit released under the MIT license.
# See the NOTICE for more information.

""" shared fixtures: a config small enough for CPU unit tests """
import shutil
import tempfile

import torch

from motionkit.schema import Config


def tiny_config(**changes):
    fields = dict(
        image_size=32, patch_size=8, crop_size=16, latent_dim=8, clip_len=4,
        vae_factor=4, dit_depth=1, dit_width=32, dit_heads=2,
        encoder_depth=1, encoder_width=32, encoder_heads=2,
        guidance_channels=8, chunk=4, overlap=1, sample_steps=2,
        batch_size=2, train_steps=2, checkpoint_every=100,
        prior_prefix=2, prior_horizon=3, prior_depth=1, prior_width=32,
        prior_heads=2, prior_steps=2, eval_samples=2, threads=1,
    )
    fields.update(changes)
    config = Config(**fields)
    config.validate()
    return config


class TempDirMixin(object):

    def setUp(self):
        super(TempDirMixin, self).setUp()
        self.tmp = tempfile.mkdtemp(prefix="motionkit-test-")
        self.addCleanup(shutil.rmtree, self.tmp, True)


def rest_character(limb_scale=1., hand_scale=1., head_scale=1.):
    from motionkit.schema import CharacterSpec
    from motionkit.syndata.skeleton import BASE_WIDTHS, BONES, PALETTE
    return CharacterSpec(limb_scales=[limb_scale] * len(BONES),
                         limb_widths=[float(w) for w in BASE_WIDTHS],
                         head_radius_scale=head_scale, hand_scale=hand_scale,
                         colors=[float(c) for c in PALETTE.ravel()])


def rest_pose(canvas_size=64, angles=None):
    """ standing, arms down, parts painted in PARTS order """
    from motionkit.schema import PoseSpec
    from motionkit.syndata.skeleton import ANGLE_NAMES, PARTS
    return PoseSpec(root_x=canvas_size / 2., root_y=0.56 * canvas_size,
                    joint_angles=list(angles) if angles is not None
                    else [0.] * len(ANGLE_NAMES),
                    limb_depth_order=list(range(len(PARTS))))


def gradient_error(loss_fn, module, count=10, eps=1e-6, seed=0):
    """ worst relative error between the autograd gradient of `loss_fn()`
    and central differences, over `count` random scalar parameters of
    `module`. Meant for float64 modules. """
    params = [p for p in module.parameters() if p.requires_grad]
    module.zero_grad()
    loss_fn().backward()
    gen = torch.Generator().manual_seed(seed)
    worst = 0.
    for _ in range(count):
        p = params[int(torch.randint(len(params), (1,), generator=gen))]
        i = int(torch.randint(p.numel(), (1,), generator=gen))
        analytic = float(p.grad.reshape(-1)[i]) if p.grad is not None else 0.
        flat = p.data.view(-1)
        old = float(flat[i])
        flat[i] = old + eps
        up = float(loss_fn().detach())
        flat[i] = old - eps
        down = float(loss_fn().detach())
        flat[i] = old
        numeric = (up - down) / (2. * eps)
        worst = max(worst, abs(analytic - numeric) /
                    max(abs(analytic), abs(numeric), 1e-3))
    return worst
