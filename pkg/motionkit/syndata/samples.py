# -*- coding: utf-8 -
#
# This file is part of motionkit released under the MIT license.
# See the NOTICE for more information.

"""
Training samples.

A sample holds a reference image I_S, the encoder's driving frames and
the frames the generator should produce. Two modes exist:

``same_identity``
    one character; driving frames are the target frames passed through
    one clip-wide augmentation.

``cross_identity``
    driving frames show character A, reference and targets show
    character B, both under the same pose sequence.

Supervision maps (heatmaps, hand normals) always follow the targets, so
they are in the reference character's geometry. Crop boxes follow the
driving frames, where the crops are taken from.
"""
import numpy as np

from .augment import Augmentation
from .render import keypoint_heatmaps, keypoint_visibility, quantize, render
from .sampling import pick_gesture, sample_character, \
    sample_expression_sequence, sample_pose_sequence

__all__ = ['MODES', 'TrainingSample', 'make_training_sample', 'compose_sample']

SAME_IDENTITY = "same_identity"
CROSS_IDENTITY = "cross_identity"
MODES = (SAME_IDENTITY, CROSS_IDENTITY)


class TrainingSample(object):

    def __init__(self, sample_id, mode, gesture, reference, driving, targets,
                 keypoints, visible, hand_normals, hand_mask, boxes,
                 drive_keypoints, drive_visible, expressions,
                 reference_keypoints, heatmap_sigma, reference_character,
                 driving_character, poses, reference_pose, expression_specs,
                 reference_expression):
        self.sample_id = sample_id
        self.mode = mode
        self.gesture = gesture
        self.reference = reference
        self.driving = driving
        self.targets = targets
        self.keypoints = keypoints
        self.visible = visible
        self.hand_normals = hand_normals
        self.hand_mask = hand_mask
        self.boxes = boxes
        self.drive_keypoints = drive_keypoints
        self.drive_visible = drive_visible
        self.expressions = expressions
        self.reference_keypoints = reference_keypoints
        self.heatmap_sigma = heatmap_sigma
        self.reference_character = reference_character
        self.driving_character = driving_character
        self.poses = poses
        self.reference_pose = reference_pose
        self.expression_specs = expression_specs
        self.reference_expression = reference_expression

    def __repr__(self):
        return "<%s %s (%s, %d frames)>" % (self.__class__.__name__,
                                           self.sample_id, self.mode, len(self))

    def __len__(self):
        return len(self.targets)

    @property
    def size(self):
        return self.reference.shape[0]

    @property
    def heatmaps(self):
        """ (T, J, H, W) target heatmaps """
        return np.stack([keypoint_heatmaps(kp, vis, self.size, self.heatmap_sigma)
                         for kp, vis in zip(self.keypoints, self.visible)])

    @property
    def joint_angles(self):
        """ (T, A) driving joint angles """
        return np.stack([p.angle_array() for p in self.poses])


def compose_sample(mode, reference_character, driving_character, poses,
                   expressions, reference_pose, reference_expression,
                   canvas_size, heatmap_sigma, augmentation=None,
                   sample_id="sample", gesture=None):
    """ render a sample from explicit specs. `augmentation` applies to
    the driving frames of same_identity samples only. """
    if mode not in MODES:
        raise ValueError("unknown sample mode %r" % mode)
    targets = [render(reference_character, pose, expr, canvas_size, heatmap_sigma)
               for pose, expr in zip(poses, expressions)]
    reference = render(reference_character, reference_pose, reference_expression,
                       canvas_size, heatmap_sigma)
    target_frames = np.stack([r.frame for r in targets])

    if mode == SAME_IDENTITY:
        driving_character = reference_character
        drivers = targets
    else:
        drivers = [render(driving_character, pose, expr, canvas_size, heatmap_sigma)
                   for pose, expr in zip(poses, expressions)]
        augmentation = None
    driving = np.stack([r.frame for r in drivers])
    drive_kp = np.stack([r.keypoints for r in drivers])
    boxes = np.stack([r.boxes for r in drivers])
    if augmentation is not None:
        driving = quantize(augmentation.apply(driving))
        drive_kp = augmentation.forward(drive_kp).astype(np.float32)
        centres = augmentation.forward(boxes[..., :2])
        boxes = np.concatenate([centres, boxes[..., 2:] * augmentation.scale],
                               axis=-1).astype(np.float32)

    return TrainingSample(
        sample_id=sample_id,
        mode=mode,
        gesture=gesture,
        reference=reference.frame,
        driving=driving,
        targets=target_frames,
        keypoints=np.stack([r.keypoints for r in targets]),
        visible=np.stack([r.visible for r in targets]),
        hand_normals=np.stack([r.hand_normals for r in targets]),
        hand_mask=np.stack([r.hand_mask for r in targets]),
        boxes=boxes,
        drive_keypoints=drive_kp,
        drive_visible=keypoint_visibility(drive_kp, canvas_size),
        expressions=np.stack([e.as_array() for e in expressions]),
        reference_keypoints=reference.keypoints,
        heatmap_sigma=heatmap_sigma,
        reference_character=reference_character,
        driving_character=driving_character,
        poses=list(poses),
        reference_pose=reference_pose,
        expression_specs=list(expressions),
        reference_expression=reference_expression,
    )


def make_training_sample(rng, mode, config, sample_id="sample", gesture=None,
                         augment=True):
    """ draw every spec from `rng` and render a sample of config.clip_len
    frames """
    if mode not in MODES:
        raise ValueError("unknown sample mode %r" % mode)
    size = config.image_size
    gesture = gesture or pick_gesture(rng)
    reference_character = sample_character(rng.fork("reference"))
    if mode == CROSS_IDENTITY:
        driving_character = sample_character(rng.fork("driving"))
    else:
        driving_character = reference_character
    poses = sample_pose_sequence(rng.fork("poses"), config.clip_len, size, gesture)
    expressions = sample_expression_sequence(rng.fork("expressions"), config.clip_len)
    reference_pose = sample_pose_sequence(rng.fork("reference_pose"), 1, size)[0]
    reference_expression = sample_expression_sequence(
        rng.fork("reference_expression"), 1)[0]
    augmentation = None
    if augment and mode == SAME_IDENTITY:
        augmentation = Augmentation.sample(rng.fork("augment"), size)
    return compose_sample(mode, reference_character, driving_character, poses,
                          expressions, reference_pose, reference_expression,
                          size, config.heatmap_sigma, augmentation=augmentation,
                          sample_id=sample_id, gesture=gesture)
