# -*- coding: utf-8 -
#
# This file is part of motionkit released under the MIT license.
# See the NOTICE for more information.

"""
Motion prior for outpainting.

A motion sequence is a (T, 4d) array: per frame the eval-mode means
[z | z_f | z_lh | z_rh]. The prior is a small temporal transformer
trained with the same rectified flow as the video generator to produce
`horizon` frames after a clean `prefix`.
"""
from collections import OrderedDict
import math

import numpy as np
import torch
import torch.nn as nn
from tqdm import tqdm

from .checkpoint import MOTION_TAG, read_container, write_container
from .exceptions import CheckpointFormatError, NonFiniteLossError, \
    PrefixLengthError
from .flow import euler_integrate, flow_mse, noised
from .inference import sample_video, to_tensor
from .logging import training_logger as log
from .nn.layers import TimestepEmbedder, TransformerBlock, init_weights
from .rng import rng_fork
from .syndata.render import render
from .syndata.sampling import sample_character, sample_expression_sequence, \
    sample_pose_sequence

__all__ = ['MotionPrior', 'extract_motion_sequence', 'save_motion',
           'load_motion', 'prior_loss', 'prior_train_step', 'prior_sample',
           'motion_sequences', 'train_prior', 'outpaint', 'PRIOR_PREFIX']

PRIOR_PREFIX = "prior."


def extract_motion_sequence(model, frames, boxes):
    """ (T, 4d) eval-mode means of the driving frames ((T, H, W, 3)
    arrays or (T, 3, H, W) tensors) """
    if not torch.is_tensor(frames):
        frames = to_tensor(frames)
    model.eval()
    with torch.no_grad():
        latents = model.encode(frames, torch.as_tensor(np.asarray(boxes)))
    return latents.means().cpu().numpy().astype(np.float32)


def split_motion(tokens, latent_dim):
    """ (T, 4d) tokens -> dict of (T, d) tensors z, z_f, z_lh, z_rh """
    tokens = torch.as_tensor(np.asarray(tokens), dtype=torch.float32)
    parts = tokens.split(latent_dim, dim=-1)
    return dict(zip(("z", "z_f", "z_lh", "z_rh"), parts))


def save_motion(path, tokens, config=None):
    write_container(path, OrderedDict([("motion", np.asarray(tokens))]),
                    config=config, tag=MOTION_TAG)


def load_motion(path):
    arrays, manifest = read_container(path)
    if manifest.tag != MOTION_TAG or "motion" not in arrays:
        raise CheckpointFormatError("%s is not a motion sequence (tag %r)"
                                    % (path, manifest.tag))
    return arrays["motion"]


class MotionPrior(nn.Module):

    def __init__(self, config):
        super(MotionPrior, self).__init__()
        self.prefix = config.prior_prefix
        self.horizon = config.prior_horizon
        self.features = 4 * config.latent_dim
        width = config.prior_width
        self.embed = nn.Linear(self.features, width)
        self.pos = nn.Parameter(torch.zeros(1, self.prefix + self.horizon, width))
        # 0 for clean prefix frames, 1 for frames being generated
        self.role = nn.Embedding(2, width)
        self.time = TimestepEmbedder(width)
        self.blocks = nn.ModuleList([TransformerBlock(width, config.prior_heads)
                                     for _ in range(config.prior_depth)])
        self.norm = nn.LayerNorm(width)
        self.out = nn.Linear(width, self.features)
        init_weights(self)
        nn.init.normal_(self.pos, std=0.02)
        nn.init.zeros_(self.out.weight)
        nn.init.zeros_(self.out.bias)

    @property
    def length(self):
        return self.prefix + self.horizon

    def forward(self, prefix, x, t):
        """ (B, prefix + horizon, 4d) outputs for the clean `prefix` followed
        by the noised horizon `x`. Only the horizon rows are a velocity;
        training masks the prefix rows out. """
        roles = torch.cat([torch.zeros(self.prefix, dtype=torch.long, device=x.device),
                           torch.ones(self.horizon, dtype=torch.long, device=x.device)])
        h = self.embed(torch.cat([prefix, x], dim=1)) + self.pos + self.role(roles)[None]
        t = torch.as_tensor(t, dtype=x.dtype, device=x.device)
        if t.dim() == 0:
            t = t.expand(len(x))
        h = h + self.time(t)[:, None]
        for block in self.blocks:
            h = block(h)
        return self.out(self.norm(h))

    def horizon_velocity(self, prefix, x, t):
        """ velocity (B, horizon, 4d) of the noised horizon `x` """
        return self(prefix, x, t)[:, self.prefix:]


def prior_loss(prior, sequences, rng):
    """ flow loss of (B, prefix + horizon, 4d) sequences, the prefix
    frames masked out """
    sequences = torch.as_tensor(sequences, dtype=torch.float32)
    if sequences.shape[1] != prior.length:
        raise PrefixLengthError("sequences have %d frames, the prior models %d"
                                % (sequences.shape[1], prior.length))
    eps = rng.fork("eps").normal(sequences.shape, like=sequences)
    t = rng.fork("t").rand((len(sequences),))
    x_t = noised(sequences, eps, t)
    v = prior(sequences[:, :prior.prefix], x_t[:, prior.prefix:], t)
    return masked_prior_loss(v, sequences, eps, prior.prefix)


def masked_prior_loss(v_pred, x1, eps, prefix_len):
    """ flow loss over full-length sequences with the prefix frames masked
    out; the prefix entries of x1 and eps never matter """
    mask = torch.ones_like(x1)
    mask[:, :prefix_len] = 0.
    return flow_mse(v_pred, x1, eps, mask=mask)


def prior_train_step(prior, optimizer, sequences, rng, grad_clip=1.):
    loss = prior_loss(prior, sequences, rng)
    value = float(loss.detach())
    if not math.isfinite(value):
        raise NonFiniteLossError("l_prior", value)
    optimizer.zero_grad()
    loss.backward()
    torch.nn.utils.clip_grad_norm_(prior.parameters(), grad_clip)
    optimizer.step()
    return value


def prior_sample(prior, prefix, steps, rng):
    """ prefix (prefix_len, 4d) -> (prefix_len + horizon, 4d) with the
    prefix copied through unchanged """
    prefix = torch.as_tensor(np.asarray(prefix), dtype=torch.float32)
    if prefix.dim() != 2 or prefix.shape[0] != prior.prefix:
        raise PrefixLengthError("prefix must have %d frames, got %s"
                                % (prior.prefix, tuple(prefix.shape)))
    prefix = prefix[None]
    x = rng.normal((1, prior.horizon, prior.features))
    prior.eval()
    with torch.no_grad():
        horizon = euler_integrate(lambda x, t: prior.horizon_velocity(prefix, x, t),
                                  x, steps)
    return torch.cat([prefix, horizon], dim=1)[0].numpy()


def motion_sequences(model, config, count, rng, progress=False):
    """ `count` sequences of prior_prefix + prior_horizon frames,
    extracted by `model` from freshly rendered clips """
    length = config.prior_prefix + config.prior_horizon
    out = []
    for i in tqdm(range(count), desc="extract motion", disable=not progress):
        clip_rng = rng.fork("clip:%d" % i)
        character = sample_character(clip_rng.fork("character"))
        poses = sample_pose_sequence(clip_rng.fork("poses"), length, config.image_size)
        expressions = sample_expression_sequence(clip_rng.fork("expressions"), length)
        renders = [render(character, p, e, config.image_size, config.heatmap_sigma)
                   for p, e in zip(poses, expressions)]
        out.append(extract_motion_sequence(
            model, np.stack([r.frame for r in renders]),
            np.stack([r.boxes for r in renders])))
    return np.stack(out)


def prior_state(prior):
    return OrderedDict((PRIOR_PREFIX + k, v) for k, v in prior.state_dict().items())


def split_prior_state(params):
    """ (model params, prior params) of a combined checkpoint """
    model = OrderedDict((k, v) for k, v in params.items()
                        if not k.startswith(PRIOR_PREFIX))
    prior = OrderedDict((k[len(PRIOR_PREFIX):], v) for k, v in params.items()
                        if k.startswith(PRIOR_PREFIX))
    return model, prior


def train_prior(config, sequences, steps=None, progress=True):
    """ fit a MotionPrior to (N, prefix + horizon, 4d) sequences """
    with torch.random.fork_rng():
        torch.manual_seed(rng_fork(config.seed, "prior:init").torch_seed())
        prior = MotionPrior(config)
    optimizer = torch.optim.AdamW(prior.parameters(), lr=config.lr_prior,
                                  weight_decay=config.weight_decay)
    steps = steps or config.prior_steps
    batch_rng = rng_fork(config.seed, "prior:batches")
    step_rng = rng_fork(config.seed, "prior:steps")
    sequences = np.asarray(sequences, dtype=np.float32)
    history = []
    prior.train()
    bar = tqdm(range(steps), desc="train prior", disable=not progress)
    for step in bar:
        idx = batch_rng.fork("step:%d" % step).integers(
            len(sequences), size=min(config.batch_size, len(sequences)))
        loss = prior_train_step(prior, optimizer, sequences[idx],
                                step_rng.fork("step:%d" % step), config.grad_clip)
        history.append(loss)
        bar.set_postfix(loss="%.4f" % loss)
        log.debug("prior step %d loss %.5f", step + 1, loss)
    return prior, history


def outpaint(model, prior, reference, frames, boxes, rng, steps=None):
    """ continue the motion of the first prior_prefix driving `frames`
    for prior_horizon frames and render all of it onto `reference`
    ((H, W, 3) array). Returns ((P + H, 3, H, W) video, (P + H, 4d)
    motion). """
    config = model.config
    if model.variant.skeleton_guidance:
        raise ValueError("the %s variant is driven by keypoints, not motion "
                         "tokens" % config.variant)
    if len(frames) < prior.prefix:
        raise PrefixLengthError("need %d prefix frames, got %d"
                                % (prior.prefix, len(frames)))
    steps = steps or config.sample_steps
    tokens = extract_motion_sequence(model, frames[:prior.prefix],
                                     boxes[:prior.prefix])
    motion = prior_sample(prior, tokens, steps, rng.fork("prior"))
    vectors = split_motion(motion, config.latent_dim)
    if not model.variant.local_tokens:
        for name in ("z_f", "z_lh", "z_rh"):
            vectors[name] = torch.zeros_like(vectors[name])
    length = len(motion)
    reference = to_tensor(reference)[None]
    with torch.no_grad():
        conditioning = model.condition(reference, vectors, length)
        video = sample_video(model, conditioning, length, config.chunk,
                             config.overlap, steps, config.cfg_scale,
                             rng.fork("video"))
    return video[0], motion
