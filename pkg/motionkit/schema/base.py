# -*- coding: utf-8 -
#
# This file is part of motionkit released under the MIT license.
# See the NOTICE for more information.

""" base classes for the value types motionkit serializes as JSON """
import copy
import math

import jsonobject

from ..exceptions import BadValueError
from ..utils import sign_content

__all__ = ['Spec', 'StaticSpec', 'in_range', 'positive', 'non_negative',
           'each_in_range', 'finite']


def in_range(lo, hi):
    """ validator: lo <= value <= hi """
    def validate(value):
        if value is not None and not (lo <= value <= hi):
            raise BadValueError("%r is not in [%r, %r]" % (value, lo, hi))
    return validate


def each_in_range(lo, hi):
    """ validator: every item of a list property lies in [lo, hi] """
    check = in_range(lo, hi)

    def validate(values):
        for value in values or ():
            check(value)
    return validate


def positive(value):
    if value is not None and not value > 0:
        raise BadValueError("%r is not positive" % (value,))


def non_negative(value):
    if value is not None and value < 0:
        raise BadValueError("%r is negative" % (value,))


def finite(value):
    if value is not None and not math.isfinite(value):
        raise BadValueError("%r is not finite" % (value,))


class Spec(jsonobject.JsonObject):
    """ A json-mapped value object. Properties are declared as class
    attributes::

        class ExpressionSpec(Spec):
            mouth_open = FloatProperty(default=0., validators=in_range(0, 1))
    """

    def replace(self, **changes):
        """ return a validated copy with `changes` applied """
        obj = copy.deepcopy(self.to_json())
        obj.update(changes)
        new = self.__class__.wrap(obj)
        new.validate()
        return new

    def hash(self):
        """ sha1 of the canonical json text """
        return sign_content(self.to_json())

    def __copy__(self):
        return self.__class__.wrap(copy.deepcopy(self.to_json()))


class StaticSpec(Spec):
    """
    Shorthand for a spec that disallows dynamic properties.
    """
    _allow_dynamic_properties = False
