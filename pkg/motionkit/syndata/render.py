# -*- coding: utf-8 -
#
# This file is part of motionkit released under the MIT license.
# See the NOTICE for more information.

"""
Capsule rasterizer for procedural characters.

Parts are painted back to front in `limb_depth_order`, so a later part
hides an earlier one. Besides the frame, every render carries the
supervision targets of that frame: keypoints, per-joint Gaussian
heatmaps, hand normal maps and the face/hand crop boxes.
"""
import numpy as np

from .skeleton import (BACKGROUND, BONES, HAND_PARTS, HEAD_PART, KEYPOINT_NODES,
                       NODE_INDEX, PART_BONES, bone_lengths, bone_widths,
                       head_radius, solve_nodes)

__all__ = ['RenderedSample', 'render', 'keypoint_heatmaps', 'keypoint_visibility',
           'capsule_normals', 'crop_boxes', 'quantize', 'to_uint8']

GLYPH_COLOR = np.array([0.1, 0.1, 0.1], dtype=np.float32)
FACE_BOX_SCALE = 2.6
HAND_BOX_SCALE = 2.3

_START = np.array([NODE_INDEX[b[1]] for b in BONES])
_END = np.array([NODE_INDEX[b[2]] for b in BONES])


def to_uint8(frame):
    return np.clip(np.round(np.asarray(frame) * 255.), 0, 255).astype(np.uint8)


def quantize(frame):
    """ snap to the 8-bit levels a PNG can hold """
    return to_uint8(frame).astype(np.float32) / np.float32(255.)


def pixel_grid(size):
    """ (size*size, 2) pixel centres as (x, y), row-major """
    ys, xs = np.mgrid[0:size, 0:size]
    return np.stack([xs.ravel(), ys.ravel()], axis=1).astype(np.float64)


def keypoint_visibility(keypoints, size):
    """ a keypoint is visible when its rounded pixel lies on the canvas """
    kp = np.asarray(keypoints)
    inside = (kp >= -0.5) & (kp < size - 0.5)
    return inside.all(axis=-1)


def keypoint_heatmaps(keypoints, visible, size, sigma):
    """ (J, size, size) unnormalized Gaussians; invisible joints get an
    all-zero channel """
    kp = np.asarray(keypoints, dtype=np.float64)
    ys, xs = np.mgrid[0:size, 0:size].astype(np.float64)
    dx = xs[None] - kp[:, 0, None, None]
    dy = ys[None] - kp[:, 1, None, None]
    maps = np.exp(-(dx ** 2 + dy ** 2) / (2. * sigma ** 2))
    maps[~np.asarray(visible, dtype=bool)] = 0.
    return maps.astype(np.float32)


def segment_distance(points, a, b):
    """ distance of every point to segment ab and the closest axis point """
    ab = b - a
    denom = float(ab @ ab)
    if denom == 0.:
        t = np.zeros(len(points))
    else:
        t = np.clip((points - a) @ ab / denom, 0., 1.)
    closest = a + t[:, None] * ab
    return np.linalg.norm(points - closest, axis=1), closest


def capsule_normals(points, closest, width, sign=1.):
    """ analytic shading normal of a capsule of radius `width`:
    (offset / width, sign * sqrt(1 - |offset / width|^2)) """
    xy = (np.asarray(points, dtype=np.float64) - closest) / width
    r2 = np.minimum((xy ** 2).sum(axis=1), 1.)
    xy = xy / np.maximum(np.sqrt((xy ** 2).sum(axis=1)), 1.)[:, None]
    z = sign * np.sqrt(1. - r2)
    return np.concatenate([xy, z[:, None]], axis=1)


def crop_boxes(character, nodes, canvas_size):
    """ (3, 3) rows face, left hand, right hand as (cx, cy, side) """
    lengths = bone_lengths(character, canvas_size)
    names = [b[0] for b in BONES]
    boxes = [[nodes[NODE_INDEX["head"], 0], nodes[NODE_INDEX["head"], 1],
              FACE_BOX_SCALE * head_radius(character, canvas_size)]]
    for side in ("l", "r"):
        reach = lengths[names.index("%s_palm" % side)] + max(
            lengths[names.index("%s_f%d_a" % (side, f))] +
            lengths[names.index("%s_f%d_b" % (side, f))] for f in range(3))
        wrist = nodes[NODE_INDEX["%s_wrist" % side]]
        boxes.append([wrist[0], wrist[1], HAND_BOX_SCALE * reach])
    return np.asarray(boxes, dtype=np.float32)


class RenderedSample(object):
    """ one rendered frame with its ground truth. `heatmaps` is built on
    access from the keypoints """

    def __init__(self, frame, keypoints, visible, hand_normals, hand_mask,
                 boxes, expression, nodes, owner, heatmap_sigma):
        self.frame = frame
        self.keypoints = keypoints
        self.visible = visible
        self.hand_normals = hand_normals
        self.hand_mask = hand_mask
        self.boxes = boxes
        self.expression = expression
        self.nodes = nodes
        self.owner = owner
        self.heatmap_sigma = heatmap_sigma

    @property
    def size(self):
        return self.frame.shape[0]

    @property
    def heatmaps(self):
        return keypoint_heatmaps(self.keypoints, self.visible, self.size,
                                 self.heatmap_sigma)

    @property
    def face_box(self):
        return self.boxes[0]

    @property
    def lh_box(self):
        return self.boxes[1]

    @property
    def rh_box(self):
        return self.boxes[2]


def front_hand(pose):
    """ "l" or "r": the hand whose palm is painted last """
    rank = dict((part, i) for i, part in enumerate(pose.limb_depth_order))
    return "l" if rank[HAND_PARTS["l"][0]] > rank[HAND_PARTS["r"][0]] else "r"


def _ellipse(points, centre, up, half_across, half_up):
    rel = points - centre
    across = rel @ np.array([-up[1], up[0]])
    along = rel @ up
    return (across / half_across) ** 2 + (along / half_up) ** 2 <= 1.


def _paint_face(canvas, owner, points, nodes, radius, expression):
    head = nodes[NODE_INDEX["head"]]
    up = head - nodes[NODE_INDEX["neck"]]
    norm = np.linalg.norm(up)
    up = up / norm if norm > 0 else np.array([0., -1.])
    side = np.array([-up[1], up[0]])
    on_face = owner == HEAD_PART
    minimum = 0.5
    glyphs = []
    for sign, opening in ((1., expression.eye_open_left),
                          (-1., expression.eye_open_right)):
        # eye slits
        glyphs.append((head + 0.15 * radius * up + sign * 0.4 * radius * side,
                       max(0.22 * radius, minimum),
                       max((0.05 + 0.25 * opening) * radius, minimum)))
        # brows
        glyphs.append((head + (0.45 + 0.2 * expression.brow_raise) * radius * up
                       + sign * 0.4 * radius * side,
                       max(0.25 * radius, minimum), max(0.06 * radius, minimum)))
    glyphs.append((head - 0.45 * radius * up, max(0.35 * radius, minimum),
                   max((0.04 + 0.3 * expression.mouth_open) * radius, minimum)))
    for centre, half_across, half_up in glyphs:
        mask = on_face & _ellipse(points, centre, up, half_across, half_up)
        canvas[mask] = GLYPH_COLOR


def render(character, pose, expression, canvas_size=64, heatmap_sigma=2.):
    """ rasterize `character` in `pose` wearing `expression` """
    size = int(canvas_size)
    nodes = solve_nodes(character, pose, size)
    widths = bone_widths(character, size)
    radius = head_radius(character, size)
    colors = character.color_array()
    points = pixel_grid(size)

    canvas = np.tile(BACKGROUND, (size * size, 1))
    owner = np.full(size * size, -1, dtype=np.int64)
    normals = np.zeros((size * size, 3))
    front = front_hand(pose)
    hand_sides = dict((part, side) for side, parts in HAND_PARTS.items()
                      for part in parts)

    for part in pose.limb_depth_order:
        best = np.full(size * size, np.inf)
        best_width = np.ones(size * size)
        best_closest = np.zeros((size * size, 2))
        for bone in PART_BONES[part]:
            dist, closest = segment_distance(points, nodes[_START[bone]],
                                             nodes[_END[bone]])
            ratio = dist / widths[bone]
            better = ratio < best / best_width
            best = np.where(better, dist, best)
            best_width = np.where(better, widths[bone], best_width)
            best_closest[better] = closest[better]
        mask = best <= best_width
        if part == HEAD_PART:
            mask |= np.linalg.norm(points - nodes[NODE_INDEX["head"]], axis=1) <= radius
        canvas[mask] = colors[part]
        owner[mask] = part
        normals[mask] = 0.
        if part in hand_sides:
            sign = 1. if hand_sides[part] == front else -1.
            normals[mask] = capsule_normals(points[mask], best_closest[mask],
                                            best_width[mask][:, None], sign)

    _paint_face(canvas, owner, points, nodes, radius, expression)

    keypoints = nodes[KEYPOINT_NODES].astype(np.float32)
    visible = keypoint_visibility(keypoints, size)
    hand_mask = np.isin(owner, list(hand_sides)).reshape(size, size)
    return RenderedSample(
        frame=quantize(canvas.reshape(size, size, 3)),
        keypoints=keypoints,
        visible=visible,
        hand_normals=(normals.reshape(size, size, 3) *
                      hand_mask[..., None]).astype(np.float32),
        hand_mask=hand_mask.astype(np.float32),
        boxes=crop_boxes(character, nodes, size),
        expression=expression,
        nodes=nodes,
        owner=owner.reshape(size, size),
        heatmap_sigma=heatmap_sigma,
    )
