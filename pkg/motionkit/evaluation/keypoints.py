# -*- coding: utf-8 -
#
# This file is part of motionkit released under the MIT license.
# See the NOTICE for more information.

"""
Keypoint recovery from frames of procedural characters.

Every drawable part has its own color, so a frame can be segmented by
nearest character color. Each limb mask is reduced to a segment along
its principal axis; a joint is the average of the segment ends that
meet there. Given heatmaps (for example from the heatmap head), joints
whose peak is confident are read off the heatmap argmax instead.
"""
import numpy as np

from ..syndata.skeleton import KEYPOINTS, PART_INDEX, PART_NAMES

__all__ = ['segment_parts', 'detect_keypoints_synthetic']

COLOR_TOLERANCE = 0.12
MIN_PIXELS = 3
HEATMAP_CONFIDENCE = 0.3

# part -> (neighbour whose pixels touch the part's end, True when that
# neighbour is a child)
_ANCHORS = {}
for _s in ("l", "r"):
    _ANCHORS.update({
        "%s_upper_arm" % _s: ("%s_forearm" % _s, True),
        "%s_forearm" % _s: ("%s_palm" % _s, True),
        "%s_palm" % _s: ("%s_forearm" % _s, False),
        "%s_thigh" % _s: ("%s_shin" % _s, True),
        "%s_shin" % _s: ("%s_foot" % _s, True),
        "%s_foot" % _s: ("%s_shin" % _s, False),
    })
    for _f in range(3):
        _ANCHORS["%s_finger%d" % (_s, _f)] = ("%s_palm" % _s, False)


def segment_parts(frame, colors, tolerance=COLOR_TOLERANCE):
    """ (H, W) part index map by nearest color, -1 where no part color is
    within `tolerance` (max-channel distance) """
    frame = np.asarray(frame, dtype=np.float32)
    dist = np.abs(frame[:, :, None, :] - colors[None, None]).max(axis=-1)
    owner = dist.argmin(axis=-1)
    owner[dist.min(axis=-1) > tolerance] = -1
    return owner


def _pixels(owner, part):
    ys, xs = np.nonzero(owner == part)
    return np.stack([xs, ys], axis=1).astype(np.float64)


def _segment(points):
    """ the two axis ends of a capsule-shaped point cloud """
    centre = points.mean(axis=0)
    rel = points - centre
    _, _, vt = np.linalg.svd(rel, full_matrices=False)
    axis = vt[0]
    proj = rel @ axis
    lo, hi = proj.min(), proj.max()
    extent = hi - lo
    width = len(points) / max(2. * extent, 1.)
    if extent <= 2. * width:
        return centre, centre
    return centre + axis * (lo + width), centre + axis * (hi - width)


def _nearest_distance(point, cloud):
    return np.sqrt(((cloud - point) ** 2).sum(axis=1)).min()


def _oriented_segments(owner):
    """ part name -> (start, end) for every visible single-chain part """
    clouds = {}
    for name in PART_NAMES:
        pts = _pixels(owner, PART_INDEX[name])
        if len(pts) >= MIN_PIXELS:
            clouds[name] = pts
    segments = {}
    for name, (anchor, is_child) in _ANCHORS.items():
        if name not in clouds:
            continue
        a, b = _segment(clouds[name])
        if anchor in clouds:
            da = _nearest_distance(a, clouds[anchor])
            db = _nearest_distance(b, clouds[anchor])
            # the end touching a child is the part's end, the end
            # touching a parent is its start
            if (da < db) == is_child:
                a, b = b, a
        segments[name] = (a, b)
    return clouds, segments


def _mean(points):
    points = [p for p in points if p is not None]
    if not points:
        return None
    return np.mean(points, axis=0)


def _from_segments(clouds, segments):
    def start(part):
        return segments[part][0] if part in segments else None

    def end(part):
        return segments[part][1] if part in segments else None

    found = {}
    if "head" in clouds:
        found["head"] = clouds["head"].mean(axis=0)
    for s in ("l", "r"):
        found["%s_shoulder" % s] = start("%s_upper_arm" % s)
        found["%s_elbow" % s] = _mean([end("%s_upper_arm" % s), start("%s_forearm" % s)])
        found["%s_wrist" % s] = _mean([end("%s_forearm" % s), start("%s_palm" % s)])
        found["%s_palm" % s] = _mean([end("%s_palm" % s)] +
                                     [start("%s_finger%d" % (s, f)) for f in range(3)])
        for f in range(3):
            tip = end("%s_finger%d" % (s, f))
            found["%s_f%d_tip" % (s, f)] = tip
            found["%s_f%d_mid" % (s, f)] = None if tip is None else \
                _mean([start("%s_finger%d" % (s, f)), tip])
        found["%s_hip" % s] = start("%s_thigh" % s)
        found["%s_knee" % s] = _mean([end("%s_thigh" % s), start("%s_shin" % s)])
        found["%s_ankle" % s] = _mean([end("%s_shin" % s), start("%s_foot" % s)])
    if found.get("l_shoulder") is not None and found.get("r_shoulder") is not None:
        found["neck"] = _mean([found["l_shoulder"], found["r_shoulder"]])
    return found


def detect_keypoints_synthetic(frame, colors, heatmaps=None,
                               tolerance=COLOR_TOLERANCE):
    """ (keypoints (J, 2), visible (J,)) recovered from `frame`.

    `colors` is the (parts, 3) color table of the depicted character. A
    blank frame yields no visible joint.
    """
    colors = np.asarray(colors, dtype=np.float32).reshape(-1, 3)
    owner = segment_parts(frame, colors, tolerance)
    clouds, segments = _oriented_segments(owner)
    found = _from_segments(clouds, segments)
    keypoints = np.zeros((len(KEYPOINTS), 2), dtype=np.float32)
    visible = np.zeros(len(KEYPOINTS), dtype=bool)
    for j, name in enumerate(KEYPOINTS):
        p = found.get(name)
        if p is not None:
            keypoints[j] = p
            visible[j] = True
    if heatmaps is not None:
        heatmaps = np.asarray(heatmaps)
        size = heatmaps.shape[-1]
        flat = heatmaps.reshape(len(heatmaps), -1)
        peaks = flat.max(axis=1)
        arg = flat.argmax(axis=1)
        confident = peaks >= HEATMAP_CONFIDENCE
        keypoints[confident, 0] = arg[confident] % size
        keypoints[confident, 1] = arg[confident] // size
        visible |= confident
    return keypoints, visible
