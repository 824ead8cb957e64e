# -*- coding: utf-8 -
#
# This file is part of motionkit released under the MIT license.
# See the NOTICE for more information.

""" loss and metric records """
import math

from jsonobject import DictProperty, FloatProperty, IntegerProperty, \
    ListProperty, StringProperty

from ..exceptions import BadValueError
from .base import StaticSpec, each_in_range, finite

__all__ = ['LossBreakdown', 'EvalReport', 'LOSS_TERMS']

LOSS_TERMS = ('l_flow', 'l_kl', 'l_hm', 'l_nrm', 'l_expr')


class LossBreakdown(StaticSpec):
    """ the composite objective of one step; `total` is the weighted sum
    of the terms with the Config's lambdas """
    l_flow = FloatProperty(default=0., validators=finite)
    l_kl = FloatProperty(default=0., validators=finite)
    l_hm = FloatProperty(default=0., validators=finite)
    l_nrm = FloatProperty(default=0., validators=finite)
    l_expr = FloatProperty(default=0., validators=finite)
    total = FloatProperty(default=0., validators=finite)

    @classmethod
    def weights(cls, config):
        return dict(l_flow=1., l_kl=config.lambda_kl, l_hm=config.lambda_hm,
                    l_nrm=config.lambda_n, l_expr=config.lambda_f)

    @classmethod
    def combine(cls, config, **terms):
        weights = cls.weights(config)
        total = 0.
        for name in LOSS_TERMS:
            total += weights[name] * terms[name]
        return cls(total=total, **terms)


class EvalReport(StaticSpec):
    """ per-metric means and per-sample values. PSNR of identical frames
    is infinite; such samples are counted in `psnr_infinite` and left out
    of `psnr` so the report stays valid json. """
    variant = StringProperty(default='full')
    config_hash = StringProperty()
    ssim = ListProperty(float, validators=each_in_range(-1., 1.))
    psnr = ListProperty(float, validators=each_in_range(0., math.inf))
    psnr_infinite = IntegerProperty(default=0)
    kp = ListProperty(float, validators=each_in_range(0., math.inf))
    kp_h = ListProperty(float, validators=each_in_range(0., math.inf))
    normal_agreement = ListProperty(float)
    counts = DictProperty(int)
    means = DictProperty(float)
    extra = DictProperty()

    def add_psnr(self, value):
        if math.isinf(value):
            self.psnr_infinite += 1
        else:
            self.psnr.append(float(value))

    def summarize(self):
        """ fill `means` and `counts` from the per-sample lists """
        for name in ('ssim', 'psnr', 'kp', 'kp_h', 'normal_agreement'):
            values = getattr(self, name)
            self.counts[name] = len(values)
            if values:
                self.means[name] = float(sum(values) / len(values))
        if self.psnr_infinite:
            self.counts['psnr_infinite'] = self.psnr_infinite
        return self

    def validate(self, required=True):
        super(EvalReport, self).validate(required=required)
        for name, value in self.means.items():
            if not math.isfinite(value):
                raise BadValueError("mean %s is not finite" % name)
        return True
