# -*- coding: utf-8 -
#
# This file is part of motionkit released under the MIT license.
# See the NOTICE for more information.

"""
Procedural 2D characters: skeleton, rasterizer, random specs,
augmentations, training samples and dataset directories.
"""

from .skeleton import (BONES, PARTS, ANGLE_NAMES, KEYPOINTS, BODY_SUBSET,
                       HAND_SUBSET, forward_kinematics, chain_positions,
                       bone_angles)
from .render import RenderedSample, render, keypoint_heatmaps
from .sampling import GESTURES, sample_character, sample_pose_sequence, \
    sample_expression_sequence
from .augment import Augmentation, augment
from .samples import MODES, TrainingSample, make_training_sample, compose_sample
from .dataset import write_dataset, read_dataset, open_dataset, \
    InMemoryDataset, ProceduralDataset, read_png, write_png
