# -*- coding: utf-8 -
#
# This file is part of motionkit released under the MIT license.
# See the NOTICE for more information.

"""
Joint training of the motion encoders, the retargeting decoder, the
supervised heads and the video generator.

Every random draw of a sample (latent noise, flow time, flow noise,
condition dropout) comes from a stream forked off the step stream by the
sample's id, so a sample's losses do not depend on its batch mates.
"""
import math
import os

import numpy as np
import torch
import torch.nn.functional as F
from tqdm import tqdm

from .checkpoint import load_checkpoint, load_into, save_checkpoint
from .exceptions import DatasetError, NonFiniteLossError
from .flow import flow_mse, noised
from .inference import to_tensor
from .logging import Stopwatch, log_step, training_logger as log
from .nn.encoder import kl_loss
from .nn.generator import CondFlags
from .nn.model import MotionModel
from .rng import rng_fork
from .schema import LossBreakdown
from .syndata.samples import CROSS_IDENTITY, SAME_IDENTITY
from .variants import align_skeleton, skeleton_maps

__all__ = ['build_batch', 'condition_dropout', 'collate', 'compute_losses',
           'Trainer', 'train']


def build_batch(rng, dataset, mix_ratio, batch_size):
    """ `batch_size` samples; each slot is cross-identity with
    probability `mix_ratio`. A dataset holding only one mode serves that
    mode for every slot. """
    modes = [m for m in (SAME_IDENTITY, CROSS_IDENTITY) if dataset.has_mode(m)]
    if not modes:
        raise DatasetError("dataset has no samples")
    batch = []
    for slot in range(batch_size):
        mode = CROSS_IDENTITY if rng.bernoulli(mix_ratio) else SAME_IDENTITY
        if mode not in modes:
            mode = modes[0]
        batch.append(dataset.draw(rng.fork("slot:%d" % slot), mode))
    return batch


def condition_dropout(rng, p):
    """ CondFlags of one sample: with probability p every condition is
    nulled at once """
    keep = not rng.bernoulli(p)
    return CondFlags.joint(torch.tensor([keep]))


def collate(samples, config):
    """ stack a list of TrainingSamples into tensors """
    batch = dict(
        reference=to_tensor(np.stack([s.reference for s in samples])),
        driving=to_tensor(np.stack([s.driving for s in samples])),
        targets=to_tensor(np.stack([s.targets for s in samples])),
        boxes=torch.from_numpy(np.stack([s.boxes for s in samples])).float(),
        heatmaps=torch.from_numpy(np.stack([s.heatmaps for s in samples])),
        hand_normals=torch.from_numpy(np.stack([s.hand_normals for s in samples])),
        hand_mask=torch.from_numpy(np.stack([s.hand_mask for s in samples])),
        expressions=torch.from_numpy(np.stack([s.expressions for s in samples])),
    )
    if config.variant == "skeleton_align":
        batch["skeleton"] = torch.from_numpy(np.stack([
            skeleton_maps(align_skeleton(s.drive_keypoints, s.reference_keypoints),
                          config.image_size, config.latent_size, config.heatmap_sigma)
            for s in samples]))
    return batch


def _sample_vectors(latents, streams, frames, train_mode):
    """ reparameterized vectors, noise drawn per sample """
    if not train_mode:
        return [g.mu for g in latents]
    out = []
    for name, g in zip(latents._fields, latents):
        eps = torch.cat([s.fork("latent:" + name).normal((frames, g.dim), like=g.mu)
                         for s in streams])
        out.append(g.mu + torch.exp(0.5 * g.logvar) * eps)
    return out


def compute_losses(model, batch, config, streams, train_mode=True):
    """ per-sample loss terms as a dict of (B,) tensors.

    `config` is the variant's training config (its lambdas decide which
    heads are evaluated); `streams` holds one RandomStream per sample.
    """
    b, frames = batch["targets"].shape[:2]
    size = config.image_size
    driving = batch["driving"].flatten(0, 1)
    latents = model.encode(driving, batch["boxes"].flatten(0, 1))
    vectors = dict(zip(latents._fields,
                       _sample_vectors(latents, streams, frames, train_mode)))
    if not model.variant.local_tokens:
        for name in ("z_f", "z_lh", "z_rh"):
            vectors[name] = torch.zeros_like(vectors[name])
    conditioning = model.condition(batch["reference"], vectors, frames,
                                   batch.get("skeleton"))

    terms = {}
    kl = sum(kl_loss(g) for g in latents)
    terms["l_kl"] = kl.view(b, frames).mean(1)

    zero = torch.zeros(b, dtype=kl.dtype)
    if conditioning.features is not None and (config.lambda_hm or config.lambda_n):
        hm = model.head.decode_heatmaps(conditioning.features)
        target = batch["heatmaps"].flatten(0, 1)
        terms["l_hm"] = ((hm - target) ** 2).flatten(1).mean(1).view(b, frames).mean(1)
        nrm = model.head.decode_hand_normals(conditioning.features)
        mask = batch["hand_mask"].flatten(0, 1)[..., None]
        err = ((nrm - batch["hand_normals"].flatten(0, 1)) ** 2 * mask)
        err = err.view(b, -1).sum(1) / (3. * mask.reshape(b, -1).sum(1)).clamp(min=1.)
        terms["l_nrm"] = err
    else:
        terms["l_hm"] = zero
        terms["l_nrm"] = zero

    expr = model.head.decode_expression(vectors["z_f"])
    terms["l_expr"] = F.mse_loss(expr, batch["expressions"].flatten(0, 1),
                                 reduction="none").mean(1).view(b, frames).mean(1)

    x1 = model.vae_encode(batch["targets"])
    eps = torch.cat([s.fork("flow:eps").normal(x1.shape[1:], like=x1)[None]
                     for s in streams])
    t = torch.cat([s.fork("flow:t").rand((1,)) for s in streams]).to(x1.dtype)
    keep = torch.cat([condition_dropout(s.fork("flow:drop"), config.cond_drop_prob).guidance
                      for s in streams])
    v = model.velocity(noised(x1, eps, t), t, conditioning, CondFlags.joint(keep))
    terms["l_flow"] = flow_mse(v, x1, eps, reduction="none")
    return terms


def total_loss(terms, config):
    weights = LossBreakdown.weights(config)
    return sum(weights[name] * terms[name].mean() for name in weights)


def check_finite(terms):
    for name, value in terms.items():
        value = float(value.detach().mean()) if torch.is_tensor(value) else float(value)
        if not math.isfinite(value):
            raise NonFiniteLossError(name, value)


class Trainer(object):
    """ owns a MotionModel, its optimizer and the step counter """

    def __init__(self, config, model=None):
        self.config = config
        self.variant_config = None
        if config.threads:
            torch.set_num_threads(config.threads)
        with torch.random.fork_rng():
            torch.manual_seed(rng_fork(config.seed, "init").torch_seed())
            self.model = model if model is not None else MotionModel(config)
        self.variant_config = self.model.variant.training_config(config)
        motion, generator = self.model.parameter_groups()
        self.optimizer = torch.optim.AdamW([
            dict(params=motion, lr=config.lr_motion),
            dict(params=generator, lr=config.lr_generator),
        ], weight_decay=config.weight_decay)
        self.step = 0

    def streams(self, samples, step_rng):
        return [step_rng.fork("sample:%s" % s.sample_id) for s in samples]

    def train_step(self, samples, step_rng):
        """ one optimizer update on `samples`; returns LossBreakdown """
        self.model.train()
        config = self.variant_config
        batch = collate(samples, config)
        terms = compute_losses(self.model, batch, config,
                               self.streams(samples, step_rng))
        check_finite(terms)
        loss = total_loss(terms, config)
        self.optimizer.zero_grad()
        loss.backward()
        torch.nn.utils.clip_grad_norm_(self.model.parameters(), config.grad_clip)
        self.optimizer.step()
        self.step += 1
        return LossBreakdown.combine(config, **dict(
            (name, float(value.detach().mean())) for name, value in terms.items()))

    def per_sample_losses(self, samples, step_rng):
        """ loss terms per sample without updating anything """
        self.model.train()
        batch = collate(samples, self.variant_config)
        with torch.no_grad():
            terms = compute_losses(self.model, batch, self.variant_config,
                                   self.streams(samples, step_rng))
        return [LossBreakdown.combine(self.variant_config, **dict(
            (name, float(value[i])) for name, value in terms.items()))
            for i in range(len(samples))]

    def save(self, path):
        save_checkpoint(self.model.state_dict(), self.config, path)
        log.info("saved checkpoint %s at step %d", path, self.step)

    @classmethod
    def from_checkpoint(cls, path, **changes):
        params, config = load_checkpoint(path)
        if changes:
            config = config.replace(**changes)
        trainer = cls(config)
        load_into(trainer.model, params)
        return trainer


def train(config, dataset, out, steps=None, progress=True):
    """ run `steps` (default config.train_steps) updates, checkpointing
    every config.checkpoint_every steps and at the end to `out`
    (nothing is written when `out` is None) """
    trainer = Trainer(config)
    steps = steps or config.train_steps
    for mode in (SAME_IDENTITY, CROSS_IDENTITY):
        if not dataset.has_mode(mode):
            log.warning("dataset has no %s samples, mix_ratio is ignored", mode)
    data_rng = rng_fork(config.seed, "batches")
    step_rng = rng_fork(config.seed, "steps")
    watch = Stopwatch()
    bar = tqdm(range(steps), desc="train %s" % config.variant, disable=not progress)
    history = []
    for step in bar:
        samples = build_batch(data_rng.fork("step:%d" % step), dataset,
                              trainer.variant_config.mix_ratio, config.batch_size)
        losses = trainer.train_step(samples, step_rng.fork("step:%d" % step))
        info = dict(losses.to_json(), step=step + 1, wallclock=watch.elapsed())
        log_step(info)
        history.append(losses)
        bar.set_postfix(total="%.4f" % losses.total)
        if out and (step + 1) % config.checkpoint_every == 0 and (step + 1) < steps:
            root, ext = os.path.splitext(out)
            trainer.save("%s.step%d%s" % (root, step + 1, ext or ".bin"))
    if out:
        trainer.save(out)
    return trainer, history
