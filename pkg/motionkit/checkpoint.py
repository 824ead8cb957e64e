# -*- coding: utf-8 -
#
# This file is part of motionkit released under the MIT license.
# See the NOTICE for more information.

"""
motionkit.checkpoint
~~~~~~~~~~~~~~~~~~~~

Portable container for named f32 arrays, used for model checkpoints,
dataset supervision maps and motion sequences. A file is::

    b"XUM1" | uint32 LE manifest length | UTF-8 json manifest | raw blob

The manifest lists every array (name, dtype, shape, byte_offset,
byte_length) and embeds the run Config. Arrays are little-endian f32.

Example:

    >>> save_checkpoint(model.state_dict(), config, "run.ckpt")
    >>> params, config = load_checkpoint("run.ckpt")
    >>> load_into(model, params)

"""
from collections import OrderedDict
import os
import struct

from jsonobject import DictProperty, IntegerProperty, ListProperty, \
    StringProperty
import numpy as np
import torch

from .exceptions import BadValueError, CheckpointFormatError, \
    ShapeMismatchError
from .schema import Config, StaticSpec
from .utils import json

MAGIC = b"XUM1"
FORMAT_VERSION = 1
DTYPE = "f32"
MOTION_TAG = "xum-motion"
_HEADER = struct.Struct("<4sI")


class ManifestEntry(StaticSpec):
    name = StringProperty(required=True)
    dtype = StringProperty(default=DTYPE)
    shape = ListProperty(int)
    byte_offset = IntegerProperty(default=0)
    byte_length = IntegerProperty(default=0)


class Manifest(StaticSpec):
    format_version = IntegerProperty(default=FORMAT_VERSION)
    tag = StringProperty()
    config = DictProperty()
    entries = ListProperty(ManifestEntry)


def _to_f32(name, value):
    if isinstance(value, torch.Tensor):
        value = value.detach().cpu().numpy()
    array = np.asarray(value)
    if not np.issubdtype(array.dtype, np.number) and array.dtype != np.bool_:
        raise ValueError("array %r has non-numeric dtype %s" % (name, array.dtype))
    array = np.ascontiguousarray(array, dtype="<f4")
    if not np.all(np.isfinite(array)):
        raise ValueError("array %r holds non-finite values" % name)
    return array


def pack_arrays(arrays):
    """ lay out arrays back to back; return (entries, blob) """
    entries = []
    chunks = []
    offset = 0
    for name, value in arrays.items():
        array = _to_f32(name, value)
        data = array.tobytes()
        entries.append(ManifestEntry(name=name, dtype=DTYPE,
                                     shape=list(array.shape),
                                     byte_offset=offset,
                                     byte_length=len(data)))
        chunks.append(data)
        offset += len(data)
    return entries, b"".join(chunks)


def write_container(path, arrays, config=None, tag=None):
    """ write named arrays (and an optional Config) to `path` """
    entries, blob = pack_arrays(arrays)
    names = [entry.name for entry in entries]
    if len(set(names)) != len(names):
        raise ValueError("array names are not unique")
    manifest = Manifest(entries=entries, tag=tag,
                        config=config.to_json() if config is not None else {})
    text = json.dumps(manifest.to_json()).encode("utf-8")
    tmp = "%s.tmp" % path
    with open(tmp, "wb") as f:
        f.write(_HEADER.pack(MAGIC, len(text)))
        f.write(text)
        f.write(blob)
    os.replace(tmp, path)


def parse_container(data, source="<bytes>"):
    """ validate and decode a container held in memory. Nothing is
    returned unless every entry checks out. """
    if len(data) < _HEADER.size:
        raise CheckpointFormatError("%s: truncated header" % source)
    magic, manifest_length = _HEADER.unpack_from(data)
    if magic != MAGIC:
        raise CheckpointFormatError("%s: bad magic %r" % (source, magic))
    start = _HEADER.size + manifest_length
    if len(data) < start:
        raise CheckpointFormatError("%s: truncated manifest" % source)
    try:
        obj = json.loads(data[_HEADER.size:start].decode("utf-8"))
        manifest = Manifest.wrap(obj)
        manifest.validate()
    except (ValueError, TypeError, AttributeError, BadValueError) as e:
        raise CheckpointFormatError("%s: corrupt manifest (%s)" % (source, e))
    if manifest.format_version != FORMAT_VERSION:
        raise CheckpointFormatError("%s: unsupported format version %r"
                                    % (source, manifest.format_version))

    blob = memoryview(data)[start:]
    seen = set()
    spans = []
    for entry in manifest.entries:
        if entry.name in seen:
            raise CheckpointFormatError("%s: duplicate entry %r" % (source, entry.name))
        seen.add(entry.name)
        if entry.dtype != DTYPE:
            raise CheckpointFormatError("%s: entry %r has dtype %r"
                                        % (source, entry.name, entry.dtype))
        count = int(np.prod(entry.shape)) if entry.shape else 1
        if any(n < 0 for n in entry.shape) or entry.byte_length != 4 * count:
            raise CheckpointFormatError("%s: entry %r length doesn't match its shape"
                                        % (source, entry.name))
        end = entry.byte_offset + entry.byte_length
        if entry.byte_offset < 0 or end > len(blob):
            raise CheckpointFormatError("%s: entry %r lies outside the blob"
                                        % (source, entry.name))
        spans.append((entry.byte_offset, end, entry.name))
    spans.sort()
    for (_, end, name), (start_next, _, name_next) in zip(spans, spans[1:]):
        if start_next < end:
            raise CheckpointFormatError("%s: entries %r and %r overlap"
                                        % (source, name, name_next))

    arrays = OrderedDict()
    for entry in manifest.entries:
        count = entry.byte_length // 4
        array = np.frombuffer(blob, dtype="<f4", count=count,
                              offset=entry.byte_offset)
        arrays[entry.name] = array.reshape(entry.shape).astype(np.float32)
    return arrays, manifest


def read_container(path):
    with open(path, "rb") as f:
        data = f.read()
    return parse_container(data, source=path)


def save_checkpoint(params, config, path):
    """ save a named parameter collection (e.g. a state_dict) with its
    Config """
    write_container(path, params, config=config)


def load_checkpoint(path):
    """ return (params, config); params map names to float32 tensors """
    arrays, manifest = read_container(path)
    if not manifest.config:
        raise CheckpointFormatError("%s: no embedded config" % path)
    try:
        config = Config.wrap(manifest.config)
        config.validate()
    except (AttributeError, BadValueError) as e:
        raise CheckpointFormatError("%s: embedded config is invalid (%s)" % (path, e))
    params = OrderedDict((name, torch.from_numpy(array))
                         for name, array in arrays.items())
    return params, config


def load_into(model, params):
    """ copy `params` into `model`, refusing anything but an exact
    name/shape match """
    expected = model.state_dict()
    missing = [name for name in expected if name not in params]
    unexpected = [name for name in params if name not in expected]
    mismatched = [name for name in expected
                  if name in params and tuple(params[name].shape) != tuple(expected[name].shape)]
    if missing or unexpected or mismatched:
        raise ShapeMismatchError(
            "checkpoint doesn't match model: %d missing, %d unexpected, "
            "%d mismatched (first: %s)" % (
                len(missing), len(unexpected), len(mismatched),
                (missing + unexpected + mismatched)[0]),
            missing=missing, unexpected=unexpected, mismatched=mismatched)
    model.load_state_dict(OrderedDict(
        (name, torch.as_tensor(params[name]).to(expected[name].dtype))
        for name in expected))
    return model
