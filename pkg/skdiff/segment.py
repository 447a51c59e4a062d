"""
Splits melodies into equal-width segments and puts segments on a grid.

A segment is one or two bars of a melody, re-based so that it starts at onset
0. Before a segment can be reduced its notes have to sit on the grid chain:
the list of window sizes going from the whole segment down through the bar,
the meter's beat grouping and then repeated halving.

    2 bars of 2/4 : 1, 1/2, 1/4, 1/8, 1/16, ...
    1 bar of 3/8  : 3/8, 1/8, 1/16, ...
    2 bars of 6/8 : 3/2, 3/4, 3/8, 1/8, 1/16, ...
"""
from __future__ import absolute_import
from __future__ import division

import bisect
import logging
import math
from collections import namedtuple
from fractions import Fraction

from skdiff import constants as co
from skdiff import datatypes
from skdiff.datatypes import HarmonySpan, Melody

logger = logging.getLogger(__name__)

class SegmentError(Exception):
    pass

class GridError(Exception):
    pass

class Segment(namedtuple('Segment', ['index', 'notes', 'span', 'key', 'meter',
                                     'harmony', 'grid_unit', 'start', 'bar',
                                     'partial', 'quantized', 'section'])):
    """
    A slice of a melody re-based to onset 0.

    Attributes
    ----------
    index : int
            0-based position in the melody.
    notes : tuple of `datatypes.Note`
            Tile [0, span) exactly.
    span : Fraction
           Width of the segment. Shorter than the others only when `partial`.
    harmony : tuple of `datatypes.HarmonySpan`
              Clipped to the segment and re-based.
    grid_unit : Fraction
                Largest unit dividing every onset and duration. Once
                `quantized`, a unit of the grid chain.
    start : Fraction
            Onset of the segment inside the melody.
    bar : int
          0-based bar where the segment starts.
    section : int
              0-based section holding the segment's first bar.
    """
    __slots__ = ()
    @property
    def end(self):
        return self.start + self.span
    @property
    def number(self):
        """
        1-based index, as printed for users.
        """
        return self.index + 1
    @property
    def bars(self):
        return self.span / self.meter.bar_length
    def chord_at(self, onset):
        return datatypes.chord_at(self.harmony, onset)
    def __repr__(self):
        return 'Segment[{}]({} bars{}: {})'.format(
            self.number, self.bars, ', partial' if self.partial else '',
            ' '.join(repr(x) for x in self.notes))

def fraction_gcd(values):
    """
    Greatest common divisor of positive fractions.

    >>> fraction_gcd([Fraction(1, 4), Fraction(3, 8)])
    Fraction(1, 8)
    """
    result = Fraction(0)
    for value in values:
        if value == 0:
            continue
        if result == 0:
            result = abs(value)
            continue
        denominator = result.denominator * value.denominator // math.gcd(
            result.denominator, value.denominator)
        result = Fraction(
            math.gcd(int(result * denominator), int(value * denominator)),
            denominator)
    return result

def grid_chain(span, meter):
    """
    Window sizes from the whole span down to `constants.FINEST_GRID`.

    The span has to hold a power of two number of bars. Each step of the
    chain divides the one above it by 2, except a single step that divides by
    3 when the meter groups its beats in threes.

    Raises
    ------
    SegmentError
        If the span isn't a power of two number of bars.
    GridError
        If the meter needs anything other than one ternary step.
    """
    span = datatypes.duration(span)
    bar = meter.bar_length
    bars = span / bar
    if bars.denominator != 1 or bars < 1 or \
            int(bars) & (int(bars) - 1) != 0:
        raise SegmentError(
            'Span {} is not a power of two number of {} bars.'.format(
                datatypes.format_duration(span), meter.name))
    grouping = meter.grouping()
    if any(x not in (2, 3) for x in grouping) or grouping.count(3) > 1:
        raise GridError(
            'Meter {} groups its beats as {}; at most one ternary level is '
            'supported.'.format(meter.name, grouping))
    units = [span]
    while units[-1] > bar:
        units.append(units[-1] / 2)
    for factor in grouping:
        units.append(units[-1] / factor)
    while units[-1] / 2 >= co.FINEST_GRID:
        units.append(units[-1] / 2)
    logger.log(1, '>>> grid chain for {}: {}'.format(
        datatypes.format_duration(span),
        ' '.join(datatypes.format_duration(x) for x in units)))
    return units

def segment_melody(m, bars_per_segment=co.DEFAULT_SEGMENT_BARS):
    """
    Cuts `m` into segments of `bars_per_segment` bars.

    Notes crossing a boundary are split; the right-hand piece gets
    `tie_continuation`. With 2 bars per segment and an odd number of bars
    the last segment holds one bar and is flagged `partial`.

    Returns
    -------
    list of `Segment`, not yet quantized.
    """
    if bars_per_segment not in co.SEGMENT_BARS:
        raise SegmentError('Bars per segment must be one of {}, not {}.'.format(
            co.SEGMENT_BARS, bars_per_segment))
    bar = m.meter.bar_length
    total = m.duration
    if total % bar != 0:
        raise SegmentError(
            'Melody {}lasts {} which is not a whole number of {} bars.'.format(
                '{} '.format(m.name) if m.name else '',
                datatypes.format_duration(total), m.meter.name))
    position = Fraction(0)
    for note in m.notes:
        if note.onset != position:
            raise SegmentError(
                'Melody has a gap before {}; rests have to be absorbed before '
                'segmenting.'.format(note))
        position = note.end
    width = bar * bars_per_segment
    starts = sorted(m.section_starts)
    segments = []
    start = Fraction(0)
    while start < total:
        end = min(start + width, total)
        notes = []
        for note in m.notes:
            if note.end <= start or note.onset >= end:
                continue
            lo = max(note.onset, start)
            hi = min(note.end, end)
            notes.append(note.moved(
                onset=lo - start, duration_=hi - lo,
                tie_continuation=note.tie_continuation or lo > note.onset))
        first_bar = int(start / bar)
        segment = Segment(
            index=len(segments),
            notes=tuple(notes),
            span=end - start,
            key=m.key,
            meter=m.meter,
            harmony=datatypes.clip_harmony(m.harmony, start, end),
            grid_unit=fraction_gcd(
                [x.onset for x in notes] + [x.duration for x in notes]),
            start=start,
            bar=first_bar,
            partial=end - start < width,
            quantized=False,
            section=max(0, bisect.bisect_right(starts, first_bar) - 1))
        segments.append(segment)
        start = end
    if segments[-1].partial:
        logger.log(15, '  -- Last segment of {} holds {} bar(s) only.'.format(
            m.name or 'melody', segments[-1].bars))
    logger.log(10, '  -- Cut {} into {} segment(s) of {} bar(s).'.format(
        m.name or 'melody', len(segments), bars_per_segment))
    return segments

def quantize_to_grid(s):
    """
    Puts a segment on its grid chain.

    The grid unit becomes the coarsest chain unit dividing every onset and
    duration. Notes that aren't a chain unit starting on a multiple of
    themselves are split, largest aligned unit first, into tied pieces.
    Quantizing a quantized segment returns it unchanged.

    Raises
    ------
    GridError
        Naming the first note that falls off the finest grid.
    """
    if s.quantized:
        return s
    if not s.notes:
        raise SegmentError('Segment {} is empty.'.format(s.number))
    chain = grid_chain(s.span, s.meter)
    unit = None
    for candidate in chain:
        if all(x.onset % candidate == 0 and x.duration % candidate == 0
               for x in s.notes):
            unit = candidate
            break
    if unit is None:
        finest = chain[-1]
        for note in s.notes:
            if note.onset % finest != 0 or note.duration % finest != 0:
                raise GridError(
                    'Note {} in bar {} cannot be placed on a grid of {} '
                    '(tuplets other than a single ternary beat grouping are '
                    'not supported).'.format(
                        note.pitch.name,
                        int((s.start + note.onset) / s.meter.bar_length) + 1,
                        datatypes.format_duration(finest)))
    units = chain[:chain.index(unit) + 1]
    notes = []
    for note in s.notes:
        pieces = split_on_chain(note, units)
        if len(pieces) > 1:
            logger.log(5, '  -- Split {} into {}.'.format(note, pieces))
        notes.extend(pieces)
    logger.log(5, '  -- Segment {} grid unit: {}.'.format(
        s.number, datatypes.format_duration(unit)))
    return s._replace(notes=tuple(notes), grid_unit=unit, quantized=True)

def split_on_chain(note, units):
    """
    Splits a note into aligned pieces taken from `units` (largest first).

    A piece is aligned when its onset is a multiple of its own duration.
    Every piece after the first continues a tie.
    """
    pieces = []
    position = note.onset
    while position < note.end:
        remaining = note.end - position
        for unit in units:
            if unit <= remaining and position % unit == 0:
                break
        else:
            raise GridError('Note {} does not fit the grid {}.'.format(
                note, datatypes.format_duration(units[-1])))
        pieces.append(note.moved(
            onset=position, duration_=unit,
            tie_continuation=note.tie_continuation if not pieces else True))
        position += unit
    return pieces

def join_segments(segments, name=None):
    """
    Puts segments back together into a melody.

    Tied pieces are merged where a note starts a segment as the continuation
    of the same pitch, as well as inside quantized segments. A melody that
    carried its own tie continuations comes back with them merged.
    """
    if not segments:
        raise SegmentError('Nothing to join.')
    segments = sorted(segments, key=lambda x: x.start)
    notes = []
    harmony = []
    for segment in segments:
        for note in segment.notes:
            note = note.shifted(segment.start)
            if note.tie_continuation and notes and \
                    notes[-1].pitch == note.pitch and \
                    notes[-1].end == note.onset:
                last = notes.pop()
                note = last.moved(duration_=last.duration + note.duration)
            notes.append(note)
        harmony.extend(
            HarmonySpan(x.onset + segment.start, x.duration, x.chord)
            for x in segment.harmony)
    section_starts = ()
    if len(set(x.section for x in segments)) > 1:
        section_starts = tuple(
            x.bar for i, x in enumerate(segments)
            if i == 0 or x.section != segments[i - 1].section)
    first = segments[0]
    return Melody(notes, first.key, first.meter, harmony, name=name,
                  section_starts=section_starts)
