# -*- coding: utf-8 -
#
# This file is part of motionkit released under the MIT license.
# See the NOTICE for more information.

"""
All exceptions used in motionkit.
"""
import jsonobject.exceptions

BadValueError = jsonobject.exceptions.BadValueError


class CheckpointFormatError(Exception):
    """ raised when a checkpoint or array container can't be parsed:
    bad magic, truncated blob, corrupt manifest or inconsistent entries """


class ShapeMismatchError(ValueError):
    """ raised when a tensor has the wrong shape for an operation, or when
    named arrays don't match the parameters of the model they are loaded
    into. Offending names are kept in `missing`, `unexpected` and
    `mismatched`.
    """
    def __init__(self, message, missing=(), unexpected=(), mismatched=()):
        super(ShapeMismatchError, self).__init__(message)
        self.missing = list(missing)
        self.unexpected = list(unexpected)
        self.mismatched = list(mismatched)


class DatasetError(IOError):
    """ raised when a dataset directory is missing files or holds corrupt
    ones. The sample directory name is saved in `sample`.
    """
    def __init__(self, message, sample=None):
        super(DatasetError, self).__init__(message)
        self.sample = sample


class NonFiniteLossError(ArithmeticError):
    """ raised when a loss term becomes NaN or infinite. The offending
    term name is saved in `term` and its value in `value`.
    """
    def __init__(self, term, value):
        super(NonFiniteLossError, self).__init__(
            "loss term %r is not finite (%r)" % (term, value))
        self.term = term
        self.value = value


class UnknownVariantError(LookupError):
    """ raised when an ablation variant or a command isn't registered """


class PrefixLengthError(ValueError):
    """ raised when a motion prefix doesn't match the prior's prefix length """
