"""
Builds reduction trees (Sk_trees) out of quantized segments.

Each pass groups the notes of the current level into windows of the next
grid chain unit and keeps the most important note of every window, stretched
over the whole window. Passes repeat until one note spans the segment. Notes
that already last a whole window are carried up untouched and enter the tree
as leaves at the level where the window matches their duration.

Importance is compared lexicographically on

1. is the note a chord tone of the window's chord,
2. its rank in the chord (root 3, fifth 2, third 1, seventh 0, else -1),
3. is it in the key's scale,
4. metric strength of its onset,
5. position (leftmost wins).

The window's chord is the chord sounding at the window's start. Tie
continuations lose against everything.
"""
from __future__ import absolute_import
from __future__ import division

import logging
from collections import namedtuple
from concurrent.futures import ThreadPoolExecutor

from skdiff import constants as co
from skdiff import datatypes
from skdiff import segment as seg
from skdiff.datatypes import Note

logger = logging.getLogger(__name__)

class ReductionError(Exception):
    pass

class ImportanceKey(namedtuple('ImportanceKey', [
        'is_chord_tone', 'chord_member_rank', 'is_scale_tone',
        'metric_strength', 'position_bias'])):
    """
    Ordered like a tuple. Larger keys are more important. `position_bias` is
    the negated position inside the window, so earlier notes win ties.
    """
    __slots__ = ()

def importance(n, context, position=0, finest=None):
    """
    Importance of note `n` given its harmonic context.

    Arguments
    ---------
    n : `datatypes.Note`
    context : tuple of (`datatypes.ChordSymbol`, `datatypes.KeySignature`,
              `datatypes.Meter`)
              The chord may be None, in which case nothing is a chord tone.
    position : int
               0-based position of the note inside its window.
    finest : Fraction or None
             Finest unit used for metric strength.

    Returns
    -------
    `ImportanceKey`
    """
    chord, key, meter = context
    if n.tie_continuation:
        return ImportanceKey(False, co.NON_CHORD_RANK, False, -1, -position)
    pitch_class = n.pitch.pitch_class
    if chord is None:
        rank = co.NON_CHORD_RANK
    else:
        rank = chord.member_rank(pitch_class)
    return ImportanceKey(
        rank != co.NON_CHORD_RANK,
        rank,
        pitch_class in key.scale_tones,
        datatypes.metric_strength(n.onset, meter, finest),
        -position)

class ReductionContext(namedtuple('ReductionContext', [
        'harmony', 'key', 'meter', 'finest'])):
    """
    Everything the reducer needs to know besides the notes themselves.
    Onsets are relative to the segment.
    """
    __slots__ = ()
    @classmethod
    def for_segment(cls, s):
        return cls(s.harmony, s.key, s.meter, s.grid_unit)
    def chord_at(self, onset):
        return datatypes.chord_at(self.harmony, onset)
    def importance(self, n, position, window_onset):
        return importance(
            n, (self.chord_at(window_onset), self.key, self.meter),
            position=position, finest=self.finest)

class SelectionRecord(namedtuple('SelectionRecord', [
        'onset', 'window', 'notes', 'survivor', 'expansion'])):
    """
    What happened inside one window of one pass.

    `notes` are the window's input notes, `survivor` indexes the one that was
    kept.
    """
    __slots__ = ()
    @property
    def kept(self):
        return self.notes[self.survivor]

def expansion_label(survivor, count):
    """
    Expansion label of a window of `count` notes keeping note `survivor`.
    Three-note windows always use the ternary labels.
    """
    if count == 3:
        return co.EXP_TERNARY.format(survivor)
    if survivor == 0:
        return co.EXP_LEFT
    if survivor == count - 1:
        return co.EXP_RIGHT
    return co.EXP_TERNARY.format(survivor)

def reduce_once(level_notes, window, context):
    """
    One reduction pass.

    Windows of width `window` partition the notes' span starting at the first
    onset. A note longer than the window is carried over as it is. A note
    exactly as long as the window passes through. The notes of any other
    window are reduced to the most important one, lasting the whole window.

    Returns
    -------
    list of `datatypes.Note`
        The next level.
    list of `SelectionRecord`
        One per window that started on a note no longer than the window.
    """
    if not level_notes:
        raise ReductionError('Nothing to reduce.')
    start = level_notes[0].onset
    span = level_notes[-1].end - start
    if span % window != 0 or start % window != 0:
        raise ReductionError(
            'Window {} does not evenly divide the span {} starting at '
            '{}.'.format(datatypes.format_duration(window),
                         datatypes.format_duration(span),
                         datatypes.format_duration(start)))
    output = []
    records = []
    i = 0
    while i < len(level_notes):
        note = level_notes[i]
        if note.onset % window != 0:
            raise ReductionError('{} does not start on a window of {}.'.format(
                note, datatypes.format_duration(window)))
        if note.duration > window:
            if note.duration % window != 0:
                raise ReductionError(
                    '{} is not a whole number of windows of {}.'.format(
                        note, datatypes.format_duration(window)))
            output.append(note)
            i += 1
            continue
        if note.duration == window:
            output.append(note)
            records.append(SelectionRecord(
                note.onset, window, (note,), 0, co.EXP_LEFT))
            i += 1
            continue
        end = note.onset + window
        group = []
        while i < len(level_notes) and level_notes[i].onset < end:
            group.append(level_notes[i])
            i += 1
        if group[-1].end != end:
            raise ReductionError('{} straddles the window ending at {}.'.format(
                group[-1], datatypes.format_duration(end)))
        keys = [context.importance(x, j, note.onset)
                for j, x in enumerate(group)]
        survivor = max(range(len(group)), key=lambda x: keys[x])
        kept = group[survivor]
        record = SelectionRecord(note.onset, window, tuple(group), survivor,
                                 expansion_label(survivor, len(group)))
        logger.log(1, '>>> {} -> {} {}'.format(
            group, kept.pitch.name, record.expansion))
        output.append(Note(kept.pitch, note.onset, window,
                           kept.tie_continuation))
        records.append(record)
    return output, records

class SkNode(namedtuple('SkNode', ['pitch', 'onset', 'duration', 'children',
                                   'expansion', 'level',
                                   'tie_continuation'])):
    """
    One node of an Sk_tree.

    Attributes
    ----------
    pitch : `datatypes.Pitch`
    onset, duration : Fraction
                      Span covered by the node, relative to the segment.
    children : tuple of `SkNode`
               Empty for leaves.
    expansion : string
                LEAF, L, R or T0-T2. Says which child survived into this node.
    level : int
            Pass that created the node. Surface notes on the grid are level
            0, longer surface notes take the level where they entered.
    tie_continuation : bool
    """
    __slots__ = ()
    def __new__(cls, pitch, onset, duration, children=(), expansion=None,
                level=0, tie_continuation=False):
        children = tuple(children)
        if expansion is None:
            expansion = co.EXP_LEAF if not children else co.EXP_LEFT
        return super(SkNode, cls).__new__(
            cls, pitch, datatypes.duration(onset),
            datatypes.duration(duration), children, expansion, level,
            bool(tie_continuation))
    @property
    def end(self):
        return self.onset + self.duration
    @property
    def is_leaf(self):
        return not self.children
    @property
    def note(self):
        return Note(self.pitch, self.onset, self.duration,
                    self.tie_continuation)
    @property
    def survivor(self):
        """
        Index of the surviving child, or None for leaves.
        """
        return survivor_index(self.expansion, len(self.children))
    @property
    def surviving_child(self):
        if self.is_leaf:
            return None
        return self.children[self.survivor]
    def __repr__(self):
        return 'SkNode({} {}+{} {} L{})'.format(
            self.pitch.name, self.onset, self.duration, self.expansion,
            self.level)

def survivor_index(expansion, count):
    """
    Position of the surviving child given an expansion label.

    >>> survivor_index('R', 2)
    1
    """
    if expansion == co.EXP_LEAF:
        return None
    if expansion == co.EXP_LEFT:
        return 0
    if expansion == co.EXP_RIGHT:
        return count - 1
    if expansion in co.EXPANSIONS:
        return int(expansion[1:])
    raise ReductionError('Unknown expansion label: {!r}'.format(expansion))

class SkTree(object):
    """
    Reduction tree of one segment.

    Attributes
    ----------
    root : `SkNode`
    segment_index : int
                    0-based.
    levels : int
             Number of passes plus one (the surface).
    grid_unit : Fraction
    windows : tuple of Fraction
              Window width of every pass, bottom up.
    selections : tuple of tuple of `SelectionRecord`
                 Records of every pass. Empty for trees read back from disk.
    """
    __slots__ = ['root', 'segment_index', 'levels', 'grid_unit', 'windows',
                 'selections']
    def __init__(self, root, segment_index=0, levels=None, grid_unit=None,
                 windows=(), selections=()):
        self.root = root
        self.segment_index = segment_index
        self.windows = tuple(windows)
        self.levels = len(self.windows) + 1 if levels is None else levels
        self.grid_unit = grid_unit
        self.selections = tuple(selections)
    def __repr__(self):
        return 'SkTree[{}]({} levels, root {})'.format(
            self.segment_index + 1, self.levels, self.root.pitch.name)
    def __eq__(self, other):
        if not isinstance(other, SkTree):
            return NotImplemented
        return (self.root, self.segment_index, self.levels, self.grid_unit) \
            == (other.root, other.segment_index, other.levels, other.grid_unit)
    def __ne__(self, other):
        result = self.__eq__(other)
        if result is NotImplemented:
            return result
        return not result
    __hash__ = None
    @property
    def span(self):
        return self.root.duration
    def nodes(self):
        """
        Pre-order walk over every node.
        """
        stack = [self.root]
        while stack:
            node = stack.pop()
            yield node
            stack.extend(reversed(node.children))
    def leaves(self):
        return [x for x in self.nodes() if x.is_leaf]
    def surface(self):
        return [x.note for x in self.leaves()]
    def level_melody(self, k):
        """
        Notes present after `k` passes. Level 0 is the quantized surface and
        level `levels` - 1 holds the root alone.
        """
        if not 0 <= k < self.levels:
            raise ValueError('Level {} out of range (tree has {}).'.format(
                k, self.levels))
        return [x.note for x in self.frontier(k)]
    def frontier(self, k):
        found = []
        stack = [self.root]
        while stack:
            node = stack.pop()
            if node.level <= k or node.is_leaf:
                found.append(node)
            else:
                stack.extend(reversed(node.children))
        return found
    def validate(self):
        """
        Raises ReductionError if a structural property doesn't hold.
        """
        for node in self.nodes():
            if node.is_leaf:
                if node.expansion != co.EXP_LEAF:
                    raise ReductionError('Leaf {} has expansion {}.'.format(
                        node, node.expansion))
                continue
            position = node.onset
            for child in node.children:
                if child.onset != position:
                    raise ReductionError(
                        'Children of {} do not tile its span.'.format(node))
                if child.level >= node.level:
                    raise ReductionError(
                        'Child {} is not below {}.'.format(child, node))
                position = child.end
            if position != node.end:
                raise ReductionError(
                    'Children of {} do not tile its span.'.format(node))
            survivor = node.survivor
            if survivor is None or not 0 <= survivor < len(node.children):
                raise ReductionError('{} has no valid survivor.'.format(node))
            if node.children[survivor].pitch != node.pitch:
                raise ReductionError(
                    'Survivor of {} has pitch {}.'.format(
                        node, node.children[survivor].pitch.name))

def build_sk_tree(s):
    """
    Builds the Sk_tree of a segment, quantizing it first if needed.

    Arguments
    ---------
    s : `segment.Segment`

    Returns
    -------
    `SkTree`
    """
    s = seg.quantize_to_grid(s)
    chain = seg.grid_chain(s.span, s.meter)
    windows = list(reversed(chain[:chain.index(s.grid_unit)]))
    context = ReductionContext.for_segment(s)
    notes = list(s.notes)
    nodes = [SkNode(x.pitch, x.onset, x.duration, level=_entry_level(
        x.duration, s.grid_unit, windows), tie_continuation=x.tie_continuation)
             for x in notes]
    selections = []
    for level, window in enumerate(windows, 1):
        output, records = reduce_once(notes, window, context)
        reduced = dict((x.onset, x) for x in records if len(x.notes) > 1)
        current = []
        i = 0
        for note in output:
            record = reduced.get(note.onset)
            if record is None:
                current.append(nodes[i])
                i += 1
                continue
            children = nodes[i:i + len(record.notes)]
            i += len(record.notes)
            current.append(SkNode(note.pitch, note.onset, note.duration,
                                  children, record.expansion, level,
                                  note.tie_continuation))
        notes, nodes = output, current
        selections.append(tuple(records))
        logger.log(5, '  -- Segment {} level {}: {}'.format(
            s.number, level, ' '.join(x.pitch.name for x in notes)))
    if len(nodes) != 1:
        raise ReductionError('Segment {} reduced to {} notes.'.format(
            s.number, len(nodes)))
    tree = SkTree(nodes[0], segment_index=s.index, grid_unit=s.grid_unit,
                  windows=windows, selections=selections)
    logger.log(10, '  -- Built {}.'.format(tree))
    return tree

def _entry_level(length, grid_unit, windows):
    if length == grid_unit:
        return 0
    return windows.index(length) + 1

def build_sk_trees(segments, workers=None):
    """
    Trees for many segments. `workers` > 1 builds them on a thread pool.
    """
    if workers and workers > 1:
        with ThreadPoolExecutor(max_workers=workers) as executor:
            return list(executor.map(build_sk_tree, segments))
    return [build_sk_tree(x) for x in segments]
