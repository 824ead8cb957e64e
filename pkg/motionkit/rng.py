# -*- coding: utf-8 -
#
# This file is part of motionkit released under the MIT license.
# See the NOTICE for more information.

"""
Deterministic random streams.

Every consumer of randomness takes a `RandomStream`, never the global
generators. Streams are keyed by (seed, label): the same pair always
yields the same draws, distinct labels yield independent streams::

    >>> data = rng_fork(42, "data")
    >>> init = rng_fork(42, "init")
    >>> sample_rng = data.fork("sample:%06d" % 3)

A stream is single-owner. Fork a child stream per worker instead of
sharing one.
"""
from contextlib import contextmanager
from hashlib import sha256

import numpy as np
import torch

__all__ = ['RandomStream', 'rng_fork', 'seeded_torch']

_TORCH_SEED_MASK = (1 << 63) - 1


def derive_key(seed, label):
    digest = sha256(("%d:%s" % (seed, label)).encode("utf-8")).digest()
    return int.from_bytes(digest[:8], "little")


class RandomStream(object):
    """ a numpy generator and a torch generator derived from one key """

    def __init__(self, seed, label):
        self.seed = int(seed)
        self.label = label
        self.key = derive_key(self.seed, label)
        self.numpy = np.random.Generator(np.random.PCG64(self.key))
        self.torch = torch.Generator()
        self.torch.manual_seed(self.key & _TORCH_SEED_MASK)

    def __repr__(self):
        return "<%s (%d/%s)>" % (self.__class__.__name__, self.seed, self.label)

    def fork(self, label):
        """ child stream, independent of this one's position """
        return RandomStream(self.seed, "%s/%s" % (self.label, label))

    def random(self):
        return float(self.numpy.random())

    def uniform(self, low=0., high=1., size=None):
        return self.numpy.uniform(low, high, size)

    def integers(self, low, high=None, size=None):
        return self.numpy.integers(low, high, size)

    def bernoulli(self, p):
        return bool(self.numpy.random() < p)

    def normal(self, shape, like=None):
        """ standard normal torch tensor drawn from the torch generator """
        dtype = like.dtype if like is not None else torch.float32
        return torch.randn(tuple(shape), generator=self.torch, dtype=dtype)

    def rand(self, shape):
        return torch.rand(tuple(shape), generator=self.torch)

    def torch_seed(self):
        """ an int seed for code that only reads torch's global generator """
        return int(torch.randint(0, 2 ** 62, (1,), generator=self.torch).item())


def rng_fork(seed, stream_label):
    """ deterministic stream for (seed, stream_label) """
    return RandomStream(seed, stream_label)


@contextmanager
def seeded_torch(stream):
    """ run a block (typically module construction, which initializes
    parameters from torch's global generator) under a seed drawn from
    `stream`, restoring the global state afterwards """
    with torch.random.fork_rng(devices=[]):
        torch.manual_seed(stream.torch_seed())
        yield
