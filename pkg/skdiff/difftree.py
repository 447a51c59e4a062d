"""
Compares two Sk_trees node by node.

The roots are compared first. If both are internal and have the same number
of children, children are paired up in order and compared recursively.
Every comparison yields four features:

sk  : same or diff. Whether the same child survived (a leaf counts as L).
ch  : same, more or less. Child count of the second node against the first.
dir : same or diff. Direction of the interval from first to last child.
int : narrow, wide or same. Width of that interval, second against first.

`dir` and `int` are only present when `ch` is same and both nodes are
internal. The comparison only goes forward, from an earlier segment to a
later one.
"""
from __future__ import absolute_import
from __future__ import division

import logging
from collections import OrderedDict, namedtuple

from skdiff import constants as co
from skdiff import datatypes
from skdiff import sktree

logger = logging.getLogger(__name__)

class DiffError(Exception):
    pass

class DiffFeatures(namedtuple('DiffFeatures', ['sk', 'ch', 'dir',
                                               'int_width'])):
    """
    Features of one comparison. `dir` and `int_width` are None when absent.
    """
    __slots__ = ()
    @property
    def all_same(self):
        return self.sk == co.SAME and self.ch == co.SAME and \
            self.dir in (co.SAME, None) and self.int_width in (co.SAME, None)
    def get(self, feature):
        return self[co.FEATURES.index(feature)]
    def as_dict(self):
        return OrderedDict(zip(co.FEATURES, self))
    def __str__(self):
        return ' '.join(
            '{}={}'.format(k, co.ABSENT if v is None else v)
            for k, v in zip(co.FEATURES, self))

def _position(node):
    """
    Surviving position with a leaf counting as expanded to the left.
    """
    if node.is_leaf:
        return 0
    return node.survivor

def node_interval(node):
    """
    Semitones from the first child to the last child of an internal node.
    """
    return datatypes.pitch_interval(node.children[0].pitch,
                                    node.children[-1].pitch)

def _sign(value):
    return (value > 0) - (value < 0)

def diff_features(a, b):
    """
    Compares two `sktree.SkNode` objects.

    Returns
    -------
    `DiffFeatures`
        A leaf compared with a node that kept its right child gives
        sk = diff.
    """
    sk = co.SAME if _position(a) == _position(b) else co.DIFF
    count_a, count_b = len(a.children), len(b.children)
    if count_b > count_a:
        ch = co.MORE
    elif count_b < count_a:
        ch = co.LESS
    else:
        ch = co.SAME
    direction = width = None
    if ch == co.SAME and not a.is_leaf and not b.is_leaf:
        interval_a, interval_b = node_interval(a), node_interval(b)
        direction = co.SAME if _sign(interval_a) == _sign(interval_b) \
            else co.DIFF
        if abs(interval_b) > abs(interval_a):
            width = co.WIDE
        elif abs(interval_b) < abs(interval_a):
            width = co.NARROW
        else:
            width = co.SAME
    return DiffFeatures(sk, ch, direction, width)

class DiffNode(namedtuple('DiffNode', ['features', 'children', 'left_ref',
                                       'right_ref'])):
    """
    One comparison.

    `left_ref` and `right_ref` are paths of child indices from the roots of
    the first and second tree. The root's path is ().
    """
    __slots__ = ()
    def __new__(cls, features, children=(), left_ref=(), right_ref=()):
        return super(DiffNode, cls).__new__(
            cls, features, tuple(children), tuple(left_ref), tuple(right_ref))
    @property
    def is_leaf(self):
        return not self.children

class DiffTree(object):
    """
    Result of comparing segment `left_segment` with the later `right_segment`.

    Attributes
    ----------
    root : `DiffNode`
    left_segment, right_segment : int
                                  0-based segment indices, left < right.
    root_pitch_offset : int
                        Semitones from the first root pitch to the second.
    source_levels : int
                    Fewer levels of the two compared trees.
    """
    __slots__ = ['root', 'left_segment', 'right_segment', 'root_pitch_offset',
                 'source_levels']
    def __init__(self, root, left_segment, right_segment, root_pitch_offset=0,
                 source_levels=None):
        if left_segment >= right_segment:
            raise DiffError(
                'Segments are only compared going forward ({} vs {}).'.format(
                    left_segment + 1, right_segment + 1))
        self.root = root
        self.left_segment = left_segment
        self.right_segment = right_segment
        self.root_pitch_offset = root_pitch_offset
        self.source_levels = source_levels
    def __repr__(self):
        return 'DiffTree({}->{}, offset {:+d})'.format(
            self.left_segment + 1, self.right_segment + 1,
            self.root_pitch_offset)
    def __eq__(self, other):
        if not isinstance(other, DiffTree):
            return NotImplemented
        return self._key() == other._key()
    def __ne__(self, other):
        result = self.__eq__(other)
        if result is NotImplemented:
            return result
        return not result
    __hash__ = None
    def _key(self):
        return (self.root, self.left_segment, self.right_segment,
                self.root_pitch_offset, self.source_levels)
    @property
    def pair(self):
        """
        1-based segment numbers, as printed.
        """
        return (self.left_segment + 1, self.right_segment + 1)
    def levels(self):
        """
        Nodes grouped by 1-based depth, each list in left to right order.
        """
        levels = []
        current = [self.root]
        while current:
            levels.append(current)
            current = [child for node in current for child in node.children]
        return levels
    @property
    def depth(self):
        return len(self.levels())
    def nodes(self):
        return [x for level in self.levels() for x in level]
    @property
    def all_same(self):
        return all(x.features.all_same for x in self.nodes())

def build_diff_tree(t1, t2):
    """
    Diff_tree comparing `t1` with the later tree `t2`.

    Raises
    ------
    DiffError
        If the trees cover different spans or `t1` doesn't come first.
    """
    if t1.root.duration != t2.root.duration:
        raise DiffError(
            'Cannot compare segment {} ({}) with segment {} ({}): the spans '
            'differ.'.format(
                t1.segment_index + 1, datatypes.format_duration(t1.span),
                t2.segment_index + 1, datatypes.format_duration(t2.span)))
    if t1.segment_index >= t2.segment_index:
        raise DiffError(
            'Segments are only compared going forward ({} vs {}).'.format(
                t1.segment_index + 1, t2.segment_index + 1))
    root = _diff_nodes(t1.root, t2.root, (), ())
    tree = DiffTree(
        root, t1.segment_index, t2.segment_index,
        root_pitch_offset=datatypes.pitch_interval(t1.root.pitch,
                                                   t2.root.pitch),
        source_levels=min(t1.levels, t2.levels))
    logger.log(5, '  -- {}: {}'.format(tree, root.features))
    return tree

def _diff_nodes(a, b, left_ref, right_ref):
    features = diff_features(a, b)
    children = []
    if features.ch == co.SAME and not a.is_leaf and not b.is_leaf:
        for i, (x, y) in enumerate(zip(a.children, b.children)):
            children.append(_diff_nodes(x, y, left_ref + (i,),
                                        right_ref + (i,)))
    return DiffNode(features, children, left_ref, right_ref)

DiffSummary = namedtuple('DiffSummary', ['node_count', 'leaf_count', 'depth',
                                         'tallies', 'totals'])

def diff_depth_and_counts(d):
    """
    Counts nodes and feature values.

    Returns
    -------
    `DiffSummary`
        `tallies` maps each 1-based level to {feature: {value: count}},
        `totals` is the same over the whole tree. Absent features are counted
        under `constants.ABSENT`.
    """
    tallies = OrderedDict()
    totals = _empty_tally()
    leaf_count = 0
    for depth, nodes in enumerate(d.levels(), 1):
        tally = tallies[depth] = _empty_tally()
        for node in nodes:
            if node.is_leaf:
                leaf_count += 1
            for feature, value in node.features.as_dict().items():
                value = co.ABSENT if value is None else value
                tally[feature][value] += 1
                totals[feature][value] += 1
    return DiffSummary(sum(len(x) for x in d.levels()), leaf_count,
                       len(tallies), tallies, totals)

def _empty_tally():
    tally = OrderedDict()
    for feature in co.FEATURES:
        tally[feature] = OrderedDict(
            (x, 0) for x in co.FEATURE_VALUES[feature] +
            ((co.ABSENT,) if feature in ('dir', 'int') else ()))
    return tally

def check_diff_tree(d):
    """
    Raises DiffError if a node has children although its comparison said it
    shouldn't, or the other way around.
    """
    for node in d.nodes():
        expandable = node.features.ch == co.SAME and \
            node.features.dir is not None
        if node.children and not expandable:
            raise DiffError('Node at {} has children but ch is {}.'.format(
                node.left_ref, node.features.ch))
        if expandable and not node.children:
            raise DiffError('Node at {} should have children.'.format(
                node.left_ref))
        if (node.features.dir is None) != (node.features.int_width is None):
            raise DiffError('Node at {} has dir without int.'.format(
                node.left_ref))
    return True

def compare_segments(s1, s2):
    """
    Builds both Sk_trees then their Diff_tree.
    """
    return build_diff_tree(sktree.build_sk_tree(s1), sktree.build_sk_tree(s2))
