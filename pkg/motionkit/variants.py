# -*- coding: utf-8 -
#
# This file is part of motionkit released under the MIT license.
# See the NOTICE for more information.

"""
Model variants used by the ablation harness.

A variant is picked by `Config.variant` and resolved through
VARIANT_URIS, so two configs that differ only in that field train the
same data with the same seed and budget::

    >>> variant = load_variant(config)
    >>> effective = variant.training_config(config)
"""
import numpy as np

from .exceptions import UnknownVariantError
from .utils import load_class
from .syndata.render import keypoint_heatmaps
from .syndata.skeleton import keypoint_root, skeleton_size

__all__ = ['VARIANT_URIS', 'Variant', 'load_variant', 'load_variant_class',
           'align_skeleton', 'skeleton_maps']

VARIANT_URIS = dict(
    full="motionkit.variants.Variant",
    no_local="motionkit.variants.NoLocalVariant",
    no_dual="motionkit.variants.NoDualVariant",
    no_synth_pairs="motionkit.variants.NoSynthPairsVariant",
    skeleton_align="motionkit.variants.SkeletonAlignVariant",
)


def load_variant_class(uri):
    if uri in VARIANT_URIS:
        uri = VARIANT_URIS[uri]
    try:
        return load_class(uri)
    except (ImportError, AttributeError, ValueError):
        raise UnknownVariantError("unknown variant %r" % uri)


def load_variant(config_or_name):
    name = getattr(config_or_name, "variant", config_or_name)
    if name not in VARIANT_URIS:
        raise UnknownVariantError("unknown variant %r, expected one of %s"
                                  % (name, ", ".join(sorted(VARIANT_URIS))))
    return load_variant_class(name)()


class Variant(object):
    """ the full model: every token, both supervised heads, synthetic
    cross-identity pairs and learned retargeting """

    name = "full"
    local_tokens = True
    dual_heads = True
    synth_pairs = True
    skeleton_guidance = False

    def __repr__(self):
        return "<%s %s>" % (self.__class__.__name__, self.name)

    def training_config(self, config):
        """ the config the training loop actually runs with """
        changes = {}
        if not self.dual_heads:
            changes.update(lambda_hm=0., lambda_n=0.)
        if not self.synth_pairs:
            changes.update(mix_ratio=0.)
        return config.replace(**changes) if changes else config


class NoLocalVariant(Variant):
    """ face and hand tokens zeroed before they reach the generator """
    name = "no_local"
    local_tokens = False


class NoDualVariant(Variant):
    """ no heatmap or hand-normal supervision """
    name = "no_dual"
    dual_heads = False


class NoSynthPairsVariant(Variant):
    """ same-identity augmented samples only """
    name = "no_synth_pairs"
    synth_pairs = False


class SkeletonAlignVariant(Variant):
    """ guidance from driving keypoints rescaled to the reference
    skeleton instead of the learned retargeting decoder """
    name = "skeleton_align"
    dual_heads = False
    skeleton_guidance = True


def align_skeleton(drive_keypoints, reference_keypoints):
    """ rescale driving keypoints (T, J, 2) by one global factor so the
    first frame's skeleton size matches the reference, and move the
    first frame's mid-hip onto the reference mid-hip """
    drive = np.asarray(drive_keypoints, dtype=np.float64)
    size = skeleton_size(drive[0])
    scale = skeleton_size(reference_keypoints) / size if size > 0 else 1.
    origin = keypoint_root(drive[0])
    target = keypoint_root(reference_keypoints)
    return (target + scale * (drive - origin)).astype(np.float32)


def skeleton_maps(keypoints, image_size, latent_size, sigma):
    """ (T, J, L, L) heatmaps of pixel keypoints drawn at latent
    resolution """
    ratio = latent_size / float(image_size)
    kp = np.asarray(keypoints, dtype=np.float64) * ratio + 0.5 * ratio - 0.5
    inside = ((kp >= -0.5) & (kp < latent_size - 0.5)).all(axis=-1)
    return np.stack([keypoint_heatmaps(k, v, latent_size, max(sigma * ratio, 1.))
                     for k, v in zip(kp, inside)])
