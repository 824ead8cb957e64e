# -*- coding: utf-8 -
#
# This file is part of motionkit released under the MIT license.
# See the NOTICE for more information.

"""
On-disk datasets.

Layout of a dataset directory::

    sample_000000/
        ref.png
        drive_000.png ... drive_{T-1}.png
        target_000.png ... target_{T-1}.png
        maps.bin        array container: hand normals and masks, exact
                        copies of the keypoint and box arrays
        meta.json       mode, keypoints, boxes and every spec
    sample_000001/
    ...

Frames are stored as 8 bit PNGs. Rendered frames are already snapped to
8 bit levels so they read back bit for bit.
"""
import logging
import os
import re
from collections import OrderedDict

import numpy as np
from PIL import Image

from ..checkpoint import read_container, write_container
from ..exceptions import CheckpointFormatError, DatasetError
from ..schema import CharacterSpec, ExpressionSpec, PoseSpec
from ..utils import ensure_dir, read_json, write_json
from .render import to_uint8
from .samples import MODES, TrainingSample, make_training_sample

__all__ = ['write_dataset', 'read_dataset', 'open_dataset', 'write_sample',
           'read_sample', 'DatasetDirectory', 'InMemoryDataset',
           'ProceduralDataset', 'read_png', 'write_png']

log = logging.getLogger(__name__)

SAMPLE_DIR = "sample_%06d"
SAMPLE_RE = re.compile(r"^sample_\d{6}$")
ARRAY_FIELDS = ("hand_normals", "hand_mask", "keypoints", "visible", "boxes",
                "drive_keypoints", "drive_visible", "expressions",
                "reference_keypoints")


def write_png(path, frame):
    Image.fromarray(to_uint8(frame), mode="RGB").save(path)


def read_png(path):
    with Image.open(path) as img:
        return np.asarray(img.convert("RGB"), dtype=np.uint8).astype(np.float32) / \
            np.float32(255.)


def _frame_files(length):
    return (["ref.png"] + ["drive_%03d.png" % t for t in range(length)] +
            ["target_%03d.png" % t for t in range(length)])


def write_sample(sample, path):
    ensure_dir(path)
    write_png(os.path.join(path, "ref.png"), sample.reference)
    for t in range(len(sample)):
        write_png(os.path.join(path, "drive_%03d.png" % t), sample.driving[t])
        write_png(os.path.join(path, "target_%03d.png" % t), sample.targets[t])
    write_container(os.path.join(path, "maps.bin"),
                    OrderedDict((name, getattr(sample, name)) for name in ARRAY_FIELDS))
    write_json(os.path.join(path, "meta.json"), {
        "sample_id": sample.sample_id,
        "mode": sample.mode,
        "gesture": sample.gesture,
        "length": len(sample),
        "size": sample.size,
        "heatmap_sigma": sample.heatmap_sigma,
        "keypoints": sample.keypoints.tolist(),
        "visible": sample.visible.astype(bool).tolist(),
        "boxes": sample.boxes.tolist(),
        "reference_character": sample.reference_character.to_json(),
        "driving_character": sample.driving_character.to_json(),
        "poses": [p.to_json() for p in sample.poses],
        "reference_pose": sample.reference_pose.to_json(),
        "expressions": [e.to_json() for e in sample.expression_specs],
        "reference_expression": sample.reference_expression.to_json(),
    })


def check_sample_dir(path):
    """ raise DatasetError unless every file of the sample is present """
    name = os.path.basename(path)
    meta_path = os.path.join(path, "meta.json")
    if not os.path.isfile(meta_path):
        raise DatasetError("%s has no meta.json" % name, sample=name)
    try:
        meta = read_json(meta_path)
    except ValueError as e:
        raise DatasetError("%s: corrupt meta.json (%s)" % (name, e), sample=name)
    missing = [f for f in _frame_files(int(meta.get("length", 0))) + ["maps.bin"]
               if not os.path.isfile(os.path.join(path, f))]
    if missing:
        raise DatasetError("%s: orphan metadata, missing %s"
                           % (name, ", ".join(missing)), sample=name)
    return meta


def read_sample(path, meta=None):
    name = os.path.basename(path)
    if meta is None:
        meta = check_sample_dir(path)
    try:
        arrays, _ = read_container(os.path.join(path, "maps.bin"))
        frames = dict((f, read_png(os.path.join(path, f)))
                      for f in _frame_files(meta["length"]))
        length = meta["length"]
        kwargs = dict((field, arrays[field]) for field in ARRAY_FIELDS)
        kwargs["visible"] = kwargs["visible"] > 0.5
        kwargs["drive_visible"] = kwargs["drive_visible"] > 0.5
        return TrainingSample(
            sample_id=meta["sample_id"],
            mode=meta["mode"],
            gesture=meta.get("gesture"),
            reference=frames["ref.png"],
            driving=np.stack([frames["drive_%03d.png" % t] for t in range(length)]),
            targets=np.stack([frames["target_%03d.png" % t] for t in range(length)]),
            heatmap_sigma=meta["heatmap_sigma"],
            reference_character=CharacterSpec.wrap(meta["reference_character"]),
            driving_character=CharacterSpec.wrap(meta["driving_character"]),
            poses=[PoseSpec.wrap(p) for p in meta["poses"]],
            reference_pose=PoseSpec.wrap(meta["reference_pose"]),
            expression_specs=[ExpressionSpec.wrap(e) for e in meta["expressions"]],
            reference_expression=ExpressionSpec.wrap(meta["reference_expression"]),
            **kwargs)
    except (CheckpointFormatError, KeyError, IOError, ValueError) as e:
        raise DatasetError("%s: unreadable sample (%s)" % (name, e), sample=name)


def write_dataset(samples, directory):
    """ write samples as sample_000000, sample_000001, ... """
    ensure_dir(directory)
    count = 0
    for i, sample in enumerate(samples):
        write_sample(sample, os.path.join(directory, SAMPLE_DIR % i))
        count += 1
    log.info("wrote %d samples to %s", count, directory)
    return count


class InMemoryDataset(object):
    """ samples indexed by mode for batch assembly """

    def __init__(self, samples):
        self.samples = list(samples)
        self.by_mode = dict((mode, [i for i, s in enumerate(self.samples)
                                    if s.mode == mode]) for mode in MODES)

    def __len__(self):
        return len(self.samples)

    def __getitem__(self, i):
        return self.samples[i]

    def __iter__(self):
        return iter(self.samples)

    def has_mode(self, mode):
        return bool(self.by_mode.get(mode))

    def indices(self, mode):
        indices = self.by_mode.get(mode) or []
        if not indices:
            raise DatasetError("dataset has no %s samples" % mode)
        return indices

    def draw(self, rng, mode):
        indices = self.indices(mode)
        return self[indices[int(rng.integers(len(indices)))]]


class DatasetDirectory(InMemoryDataset):
    """ a dataset directory read sample by sample on access """

    def __init__(self, directory):
        if not os.path.isdir(directory):
            raise DatasetError("%s is not a dataset directory" % directory)
        self.directory = directory
        names = sorted(n for n in os.listdir(directory)
                       if SAMPLE_RE.match(n) and
                       os.path.isdir(os.path.join(directory, n)))
        self.paths = [os.path.join(directory, n) for n in names]
        self.metas = [check_sample_dir(p) for p in self.paths]
        self.by_mode = dict((mode, [i for i, m in enumerate(self.metas)
                                    if m["mode"] == mode]) for mode in MODES)

    def __len__(self):
        return len(self.paths)

    def __getitem__(self, i):
        return read_sample(self.paths[i], self.metas[i])

    def __iter__(self):
        for i in range(len(self)):
            yield self[i]


def open_dataset(directory):
    return DatasetDirectory(directory)


def read_dataset(directory):
    """ every sample of a dataset directory, in order """
    return list(open_dataset(directory))


class ProceduralDataset(object):
    """ renders a fresh sample on every draw """

    def __init__(self, config):
        self.config = config

    def has_mode(self, mode):
        return mode in MODES

    def draw(self, rng, mode):
        return make_training_sample(rng, mode, self.config,
                                    sample_id=rng.label)
