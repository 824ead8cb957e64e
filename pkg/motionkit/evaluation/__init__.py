# -*- coding: utf-8 -
#
# This file is part of motionkit released under the MIT license.
# See the NOTICE for more information.

from .metrics import psnr, ssim, keypoint_l1, normal_sign_agreement, \
    seam_continuity, linear_probe_r2
from .keypoints import detect_keypoints_synthetic, segment_parts
from .ablation import evaluate_model, disentanglement_probes, run_ablation, \
    run_ablations, held_out_samples, config_diff
