# -*- coding: utf-8 -
#
# This file is part of motionkit released under the MIT license.
# See the NOTICE for more information.

"""
Rectified flow, shared by the video generator and the motion prior.

Convention: noise at t=0, data at t=1::

    x_t = (1 - t) * eps + t * x1        v* = x1 - eps

Sampling integrates dx/dt = v with uniform Euler steps from t=0 to t=1.
"""
import torch


__all__ = ['expand_time', 'noised', 'target_velocity', 'flow_mse',
           'cfg_velocity', 'euler_integrate']


def expand_time(t, x):
    """ broadcast a per-sample time (B,) or a scalar against x """
    t = torch.as_tensor(t, dtype=x.dtype, device=x.device)
    if t.dim() == 0:
        return t
    return t.reshape(t.shape[0], *([1] * (x.dim() - 1)))


def noised(x1, eps, t):
    t = expand_time(t, x1)
    return (1 - t) * eps + t * x1


def target_velocity(x1, eps):
    return x1 - eps


def flow_mse(v_pred, x1, eps, mask=None, reduction="mean"):
    """ squared error to the straight-path velocity. With a mask only the
    selected elements count; per-sample reduction keeps dim 0 """
    err = (v_pred - target_velocity(x1, eps)) ** 2
    if mask is not None:
        mask = mask.to(err.dtype).expand_as(err)
        err = err * mask
        dims = tuple(range(1, err.dim()))
        per_sample = err.sum(dims) / mask.sum(dims).clamp(min=1)
    else:
        per_sample = err.flatten(1).mean(1)
    if reduction == "none":
        return per_sample
    return per_sample.mean()


def cfg_velocity(v_uncond, v_cond, s):
    """ classifier-free guidance: v_u + s (v_c - v_u); s == 1 returns
    v_cond untouched """
    if s == 1:
        return v_cond
    return v_uncond + s * (v_cond - v_uncond)


def euler_integrate(velocity_fn, x, steps, after_step=None):
    """ integrate from t=0 to t=1 in `steps` uniform Euler steps.

    `velocity_fn(x, t)` returns the velocity at time t (a float);
    `after_step(x, t)` may rewrite the state reached at time t.
    """
    if steps < 1:
        raise ValueError("steps must be >= 1, got %r" % steps)
    dt = 1.0 / steps
    for i in range(steps):
        t = i / steps
        x = x + dt * velocity_fn(x, t)
        if after_step is not None:
            x = after_step(x, (i + 1) / steps)
    return x
