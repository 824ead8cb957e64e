# -*- coding: utf-8 -
#
# This file is part of motionkit released under the MIT license.
# See the NOTICE for more information.

"""
Evaluation of trained models and the variant ablation harness.

Same-identity samples are scored by SSIM/PSNR against their targets,
cross-identity samples by keypoint error of the joints recovered from the
generated frames. Hands-crossed samples additionally score the z-sign of
the predicted hand normals.
"""
import logging

import numpy as np
import torch

from ..inference import driving_conditioning, frames_to_numpy, sample_video, \
    to_tensor
from ..rng import rng_fork
from ..schema import EvalReport
from ..schema.config import VARIANT_NAMES
from ..syndata.samples import CROSS_IDENTITY, SAME_IDENTITY, make_training_sample
from ..syndata.skeleton import BODY_SUBSET, HAND_SUBSET
from ..training import train
from .keypoints import detect_keypoints_synthetic
from .metrics import keypoint_l1, linear_probe_r2, normal_sign_agreement, psnr, ssim

__all__ = ['held_out_samples', 'evaluate_model', 'disentanglement_probes',
           'run_ablation', 'run_ablations', 'config_diff']

log = logging.getLogger(__name__)

HANDS_CROSSED = "crossed_hands"


def held_out_samples(config, count, mode, gesture=None, label="eval"):
    """ `count` unaugmented samples drawn from config.eval_seed; the same
    config always yields the same set """
    base = rng_fork(config.eval_seed, "%s:%s:%s" % (label, mode, gesture or "any"))
    return [make_training_sample(base.fork("sample:%d" % i), mode, config,
                                 sample_id="%s_%s_%04d" % (label, mode, i),
                                 gesture=gesture, augment=False)
            for i in range(count)]


def _tensors(sample):
    return (to_tensor(sample.reference), to_tensor(sample.driving),
            torch.from_numpy(np.asarray(sample.boxes)).float())


def _mean(values):
    values = [v for v in values if v is not None]
    return float(np.mean(values)) if values else None


def _score_cross(report, frames, sample):
    colors = sample.reference_character.color_array()
    size = sample.size
    body, hands = [], []
    for frame, gt, visible in zip(frames, sample.keypoints, sample.visible):
        # undetected joints stay at (0, 0) and are scored by gt visibility
        pred, _ = detect_keypoints_synthetic(frame, colors)
        body.append(keypoint_l1(pred, gt, visible, BODY_SUBSET, size))
        hands.append(keypoint_l1(pred, gt, visible, HAND_SUBSET, size))
    kp, kp_h = _mean(body), _mean(hands)
    if kp is not None:
        report.kp.append(kp)
    if kp_h is not None:
        report.kp_h.append(kp_h)


def _score_same(report, frames, sample):
    targets = np.asarray(sample.targets, dtype=np.float32)
    report.add_psnr(psnr(frames, targets))
    report.ssim.append(float(np.mean([ssim(a, b) for a, b in zip(frames, targets)])))


def _score_normals(report, model, conditioning, sample):
    if conditioning.features is None:
        return
    with torch.no_grad():
        normals = model.head.decode_hand_normals(conditioning.features)
    agreement = normal_sign_agreement(normals.numpy(), sample.hand_normals,
                                      sample.hand_mask)
    if agreement is not None:
        report.normal_agreement.append(agreement)


def evaluate_model(model, samples, config=None, rng=None, steps=None, scale=None):
    """ EvalReport of `model` reenacting every sample's driving clip onto
    its reference """
    config = config or model.config
    rng = rng or rng_fork(config.eval_seed, "evaluate")
    steps = steps or config.sample_steps
    scale = config.cfg_scale if scale is None else scale
    report = EvalReport(variant=config.variant, config_hash=config.hash())
    model.eval()
    for sample in samples:
        reference, driving, boxes = _tensors(sample)
        conditioning, _ = driving_conditioning(
            model, reference, driving, boxes, sample.drive_keypoints,
            sample.reference_keypoints)
        with torch.no_grad():
            video = sample_video(model, conditioning, len(driving), config.chunk,
                                 config.overlap, steps, scale,
                                 rng.fork("sample:%s" % sample.sample_id))
        frames = frames_to_numpy(video[0])
        if sample.mode == SAME_IDENTITY:
            _score_same(report, frames, sample)
        else:
            _score_cross(report, frames, sample)
        if sample.gesture == HANDS_CROSSED:
            _score_normals(report, model, conditioning, sample)
        log.debug("evaluated %s", sample.sample_id)
    return report.summarize()


def motion_features(model, samples):
    """ (frames, d) eval-mode global motion means of every driving frame """
    rows = []
    model.eval()
    with torch.no_grad():
        for sample in samples:
            _, driving, boxes = _tensors(sample)
            rows.append(model.encode(driving, boxes).z.mu.numpy())
    return np.concatenate(rows)


def disentanglement_probes(model, samples, train_fraction=0.7):
    """ held-out R^2 of linear probes from z to the driving joint angles
    (pose) and to the driving character's limb multipliers (identity) """
    features = motion_features(model, samples)
    pose = np.concatenate([s.joint_angles for s in samples])
    identity = np.concatenate([
        np.tile(np.asarray(s.driving_character.limb_scales, dtype=np.float64),
                (len(s), 1))
        for s in samples])
    return dict(pose_r2=linear_probe_r2(features, pose, train_fraction),
                identity_r2=linear_probe_r2(features, identity, train_fraction))


def config_diff(a, b):
    """ names of the fields whose values differ between two configs """
    ja, jb = a.to_json(), b.to_json()
    return sorted(k for k in set(ja) | set(jb) if ja.get(k) != jb.get(k))


def ablation_eval_set(config):
    """ the fixed cross-identity set plus the hands-crossed split """
    count = config.eval_samples
    return (held_out_samples(config, count, CROSS_IDENTITY, label="ablation") +
            held_out_samples(config, max(1, count // 4), CROSS_IDENTITY,
                             gesture=HANDS_CROSSED, label="ablation"))


def run_ablation(config, variant, dataset, steps=None, eval_set=None,
                 progress=False):
    """ train `variant` under `config`'s seed, data and budget, then
    evaluate it on the fixed cross-identity set """
    variant_config = config.replace(variant=variant)
    log.info("ablation %s (config %s)", variant, variant_config.hash())
    trainer, _ = train(variant_config, dataset, None, steps=steps,
                       progress=progress)
    if eval_set is None:
        eval_set = ablation_eval_set(config)
    return evaluate_model(trainer.model, eval_set, variant_config)


def run_ablations(config, dataset, variants=VARIANT_NAMES, steps=None,
                  progress=False):
    """ {variant: EvalReport} for every variant on one shared eval set """
    eval_set = ablation_eval_set(config)
    reports = {}
    for variant in variants:
        diff = config_diff(config, config.replace(variant=variant))
        if diff not in ([], ["variant"]):
            raise AssertionError("ablation configs differ in %s" % ", ".join(diff))
        reports[variant] = run_ablation(config, variant, dataset, steps,
                                        eval_set, progress)
    return reports
