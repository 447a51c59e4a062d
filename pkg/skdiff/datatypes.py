"""
Contains basic data structures used throughout the rest of skdiff.

Pitches are MIDI semitone numbers that optionally remember how they were
spelled. Time is kept in exact fractions of a whole note, so a quarter note is
``Fraction(1, 4)``. Every type here is immutable once constructed.
"""
from __future__ import absolute_import
from __future__ import division

import logging
from collections import namedtuple
from fractions import Fraction

from skdiff import constants as co

logger = logging.getLogger(__name__)

# Durations and onsets are plain fractions. Kept as a name so signatures read
# the way the rest of the package talks about time.
RationalDuration = Fraction

class MelodyError(Exception):
    pass

class EmptyMelodyError(MelodyError):
    pass

def duration(value):
    """
    Converts ints, fractions or strings such as '3/8' into a Fraction.
    """
    if isinstance(value, Fraction):
        return value
    if isinstance(value, float):
        raise TypeError('Refusing to build a duration from a float: {}'.format(
            value))
    return Fraction(value)

def format_duration(value):
    """
    Exact "num/den" spelling used by every serialized format.
    """
    value = duration(value)
    return '{}/{}'.format(value.numerator, value.denominator)

def pitch_class_from_name(name):
    matched = co.RE_PITCH_CLASS.match(name)
    if matched is None:
        raise ValueError('Not a pitch class: {!r}'.format(name))
    step, alter = matched.group(1), matched.group(2) or ''
    return (co.STEPS[step] + co.ALTERS[alter]) % 12

class Pitch(namedtuple('Pitch', ['midi_number', 'step', 'alter', 'octave'])):
    """
    A single pitch.

    Equality and hashing only look at `midi_number`. The spelled form (step
    letter, alteration, octave) is kept for display.
    """
    __slots__ = ()
    def __new__(cls, midi_number, step=None, alter=None, octave=None):
        midi_number = int(midi_number)
        if not co.MIDI_MIN <= midi_number <= co.MIDI_MAX:
            raise ValueError('MIDI number {} outside [{}, {}].'.format(
                midi_number, co.MIDI_MIN, co.MIDI_MAX))
        if step is not None:
            alter = alter or 0
            spelled = (octave + 1) * 12 + co.STEPS[step] + alter
            if spelled != midi_number:
                raise ValueError(
                    '{}{}{} is MIDI {}, not {}.'.format(
                        step, co.ALTER_SIGNS[alter], octave, spelled,
                        midi_number))
        return super(Pitch, cls).__new__(cls, midi_number, step, alter, octave)
    @classmethod
    def from_name(cls, name):
        """
        Pitch from scientific pitch notation (C4 = 60).
        """
        matched = co.RE_PITCH.match(name)
        if matched is None:
            raise ValueError('Not a pitch: {!r}'.format(name))
        step, alter, octave = matched.groups()
        alter = co.ALTERS[alter or '']
        octave = int(octave)
        return cls((octave + 1) * 12 + co.STEPS[step] + alter, step, alter,
                   octave)
    @classmethod
    def from_step(cls, step, alter, octave):
        alter = int(alter or 0)
        return cls((octave + 1) * 12 + co.STEPS[step] + alter, step, alter,
                   octave)
    @property
    def pitch_class(self):
        return self.midi_number % 12
    @property
    def spelled(self):
        return self.step is not None
    @property
    def name(self):
        if self.step is not None:
            return '{}{}{}'.format(
                self.step, co.ALTER_SIGNS[self.alter], self.octave)
        return '{}{}'.format(
            co.SHARP_NAMES[self.midi_number % 12], self.midi_number // 12 - 1)
    def transpose(self, semitones):
        # The old spelling no longer applies.
        return Pitch(self.midi_number + semitones)
    def __eq__(self, other):
        if isinstance(other, Pitch):
            return self.midi_number == other.midi_number
        return NotImplemented
    def __ne__(self, other):
        result = self.__eq__(other)
        if result is NotImplemented:
            return result
        return not result
    def __hash__(self):
        return hash(self.midi_number)
    def __repr__(self):
        return 'Pitch({})'.format(self.name)

def pitch_interval(a, b):
    """
    Signed interval in semitones going from `a` to `b`.
    """
    return b.midi_number - a.midi_number

class Note(namedtuple('Note', ['pitch', 'onset', 'duration',
                               'tie_continuation'])):
    __slots__ = ()
    def __new__(cls, pitch, onset, duration_, tie_continuation=False):
        onset = duration(onset)
        duration_ = duration(duration_)
        if duration_ <= 0:
            raise MelodyError('Note {} has non-positive duration {}.'.format(
                pitch, duration_))
        if onset < 0:
            raise MelodyError('Note {} has negative onset {}.'.format(
                pitch, onset))
        return super(Note, cls).__new__(
            cls, pitch, onset, duration_, bool(tie_continuation))
    @property
    def end(self):
        return self.onset + self.duration
    def moved(self, onset=None, duration_=None, tie_continuation=None):
        return Note(
            self.pitch,
            self.onset if onset is None else onset,
            self.duration if duration_ is None else duration_,
            self.tie_continuation if tie_continuation is None
            else tie_continuation)
    def shifted(self, offset):
        return self.moved(onset=self.onset + offset)
    def transpose(self, semitones):
        return Note(self.pitch.transpose(semitones), self.onset,
                    self.duration, self.tie_continuation)
    def __repr__(self):
        return '{}[{}+{}]{}'.format(
            self.pitch.name, self.onset, self.duration,
            '~' if self.tie_continuation else '')

class ChordSymbol(namedtuple('ChordSymbol', ['root', 'quality', 'spelling'])):
    """
    A chord annotation: root pitch class plus one of the supported qualities.

    :ivar spelling: Root name as written (ex. 'Bb'), display only.
    """
    __slots__ = ()
    def __new__(cls, root, quality, spelling=None):
        if quality not in co.CHORD_TEMPLATES:
            raise ValueError('Unsupported chord quality: {!r}'.format(quality))
        return super(ChordSymbol, cls).__new__(
            cls, int(root) % 12, quality, spelling)
    @classmethod
    def parse(cls, text):
        matched = co.RE_CHORD.match(text)
        if matched is None:
            raise ValueError('Unsupported chord symbol: {!r}'.format(text))
        step, alter, suffix = matched.groups()
        spelling = step + (alter or '')
        return cls(pitch_class_from_name(spelling),
                   co.QUALITY_BY_SUFFIX[suffix or ''], spelling)
    @property
    def chord_tones(self):
        return frozenset((self.root + x) % 12
                         for x in co.CHORD_TEMPLATES[self.quality])
    def member_rank(self, pitch_class):
        """
        Rank of a pitch class inside this chord, or NON_CHORD_RANK.
        """
        role = co.CHORD_TEMPLATES[self.quality].get(
            (pitch_class - self.root) % 12)
        if role is None:
            return co.NON_CHORD_RANK
        return co.MEMBER_RANKS[role]
    @property
    def name(self):
        root = self.spelling or co.SHARP_NAMES[self.root]
        return root + co.CHORD_SUFFIXES[self.quality]
    def transpose(self, semitones):
        return ChordSymbol(self.root + semitones, self.quality)
    def __eq__(self, other):
        if isinstance(other, ChordSymbol):
            return (self.root, self.quality) == (other.root, other.quality)
        return NotImplemented
    def __ne__(self, other):
        result = self.__eq__(other)
        if result is NotImplemented:
            return result
        return not result
    def __hash__(self):
        return hash((self.root, self.quality))
    def __repr__(self):
        return 'ChordSymbol({})'.format(self.name)

def chord_tones(chord):
    return chord.chord_tones

class KeySignature(namedtuple('KeySignature', ['tonic', 'mode', 'spelling'])):
    __slots__ = ()
    def __new__(cls, tonic, mode='major', spelling=None):
        if mode not in co.SCALES:
            raise ValueError('Unsupported mode: {!r}'.format(mode))
        return super(KeySignature, cls).__new__(
            cls, int(tonic) % 12, mode, spelling)
    @classmethod
    def from_fifths(cls, fifths, mode='major'):
        """
        Key from a count of sharps (positive) or flats (negative).
        """
        tonic = (7 * fifths) % 12
        if mode == 'minor':
            tonic = (tonic + 9) % 12
        return cls(tonic, mode)
    @classmethod
    def parse(cls, tonic, mode):
        return cls(pitch_class_from_name(tonic), mode, tonic)
    @property
    def scale_tones(self):
        return frozenset((self.tonic + x) % 12 for x in co.SCALES[self.mode])
    @property
    def name(self):
        return '{} {}'.format(
            self.spelling or co.SHARP_NAMES[self.tonic], self.mode)
    def transpose(self, semitones):
        return KeySignature(self.tonic + semitones, self.mode)
    def __eq__(self, other):
        if isinstance(other, KeySignature):
            return (self.tonic, self.mode) == (other.tonic, other.mode)
        return NotImplemented
    def __ne__(self, other):
        result = self.__eq__(other)
        if result is NotImplemented:
            return result
        return not result
    def __hash__(self):
        return hash((self.tonic, self.mode))
    def __repr__(self):
        return 'KeySignature({})'.format(self.name)

class Meter(namedtuple('Meter', ['beats', 'beat_unit'])):
    __slots__ = ()
    def __new__(cls, beats, beat_unit):
        beats, beat_unit = int(beats), int(beat_unit)
        if beats < 1:
            raise ValueError('Meter needs at least one beat, not {}.'.format(
                beats))
        if beat_unit not in co.BEAT_UNITS:
            raise ValueError('Beat unit {} is not one of {}.'.format(
                beat_unit, co.BEAT_UNITS))
        return super(Meter, cls).__new__(cls, beats, beat_unit)
    @classmethod
    def parse(cls, text):
        try:
            beats, beat_unit = text.split('/')
            return cls(int(beats), int(beat_unit))
        except ValueError as e:
            raise ValueError('Not a meter: {!r} ({})'.format(text, e))
    @property
    def bar_length(self):
        return Fraction(self.beats, self.beat_unit)
    @property
    def beat_length(self):
        return Fraction(1, self.beat_unit)
    def grouping(self):
        """
        Splits of the bar from the top down to the beat.

        2s come first, so 6/8 groups as [2, 3] (two dotted quarters of three
        eighths each) and 4/4 as [2, 2].
        """
        factors = []
        rest = self.beats
        divisor = 2
        while rest > 1:
            while rest % divisor == 0:
                factors.append(divisor)
                rest //= divisor
            divisor += 1
        return factors
    def hierarchy(self, finest=None):
        """
        Units of the metrical hierarchy, bar first.

        Below the beat every level halves the one above until `finest` is
        reached. Default `finest` is the half-beat.
        """
        if finest is None:
            finest = self.beat_length / 2
        unit = self.bar_length
        units = [unit]
        for factor in self.grouping():
            unit = unit / factor
            units.append(unit)
        while unit / 2 >= finest:
            unit = unit / 2
            units.append(unit)
        return units
    @property
    def name(self):
        return '{}/{}'.format(self.beats, self.beat_unit)
    def __repr__(self):
        return 'Meter({})'.format(self.name)

def metric_strength(onset, meter, finest=None):
    """
    Number of hierarchy levels at whose boundaries `onset` falls.

    Examples
    --------
    >>> metric_strength(Fraction(0), Meter(2, 4))
    3
    >>> metric_strength(Fraction(1, 8), Meter(2, 4))
    1
    """
    onset = duration(onset)
    return sum(1 for unit in meter.hierarchy(finest) if onset % unit == 0)

class HarmonySpan(namedtuple('HarmonySpan', ['onset', 'duration', 'chord'])):
    __slots__ = ()
    def __new__(cls, onset, duration_, chord):
        return super(HarmonySpan, cls).__new__(
            cls, duration(onset), duration(duration_), chord)
    @property
    def end(self):
        return self.onset + self.duration
    def covers(self, onset):
        return self.onset <= onset < self.end

def merge_harmony(spans):
    """
    Joins neighbouring spans carrying the same chord.
    """
    merged = []
    for span in spans:
        if merged and merged[-1].chord == span.chord and \
                merged[-1].end == span.onset:
            last = merged.pop()
            span = HarmonySpan(last.onset, last.duration + span.duration,
                               span.chord if last.chord.spelling is None
                               else last.chord)
        merged.append(span)
    return tuple(merged)

def clip_harmony(spans, start, end):
    """
    Spans restricted to [start, end) and re-based so `start` becomes 0.
    """
    clipped = []
    for span in spans:
        lo = max(span.onset, start)
        hi = min(span.end, end)
        if lo < hi:
            clipped.append(HarmonySpan(lo - start, hi - lo, span.chord))
    return tuple(clipped)

def chord_at(spans, onset):
    for span in spans:
        if span.covers(onset):
            return span.chord
    return None

class Melody(namedtuple('Melody', ['notes', 'key', 'meter', 'harmony', 'name',
                                   'section_starts'])):
    """
    A lead sheet: monophonic notes plus key, meter and chord spans.

    Construction checks every invariant and raises MelodyError when one is
    broken. Neighbouring spans holding the same chord are merged.

    Attributes
    ----------
    notes : tuple of `Note`
            Sorted by onset, never overlapping.
    harmony : tuple of `HarmonySpan`
              Contiguous from onset 0 to at least the end of the last note.
    section_starts : tuple of int
                     0-based bars where sections begin. Empty if unknown.
    """
    __slots__ = ()
    def __new__(cls, notes, key, meter, harmony, name=None,
                section_starts=()):
        notes = tuple(notes)
        harmony = merge_harmony(harmony)
        check_notes(notes)
        check_harmony(notes, harmony)
        return super(Melody, cls).__new__(
            cls, notes, key, meter, harmony, name, tuple(section_starts))
    @property
    def duration(self):
        return self.notes[-1].end
    @property
    def bars(self):
        return self.duration / self.meter.bar_length
    def chord_at(self, onset):
        return chord_at(self.harmony, onset)
    def transpose(self, semitones):
        """
        Moves notes, chords and key together.
        """
        return Melody(
            [x.transpose(semitones) for x in self.notes],
            self.key.transpose(semitones),
            self.meter,
            [HarmonySpan(x.onset, x.duration, x.chord.transpose(semitones))
             for x in self.harmony],
            name=self.name,
            section_starts=self.section_starts)

def check_notes(notes):
    if not notes:
        raise EmptyMelodyError('Melody has no notes.')
    for i, note in enumerate(notes):
        if i == 0:
            if note.tie_continuation:
                raise MelodyError(
                    'First note {} continues a tie from nothing.'.format(note))
            continue
        prev = notes[i - 1]
        if note.onset <= prev.onset:
            raise MelodyError('Notes out of order: {} then {}.'.format(
                prev, note))
        if note.onset < prev.end:
            raise MelodyError('Notes overlap: {} and {}.'.format(prev, note))
        if note.tie_continuation and (
                prev.pitch != note.pitch or prev.end != note.onset):
            raise MelodyError(
                '{} continues a tie but {} is not the same pitch right before '
                'it.'.format(note, prev))

def check_harmony(notes, harmony):
    if not harmony:
        raise MelodyError('Melody has no harmony annotations.')
    position = Fraction(0)
    for span in harmony:
        if span.onset != position or span.duration <= 0:
            raise MelodyError(
                'Harmony spans must be contiguous from 0; found {} at {}.'
                .format(span, position))
        position = span.end
    if notes and notes[-1].end > position:
        raise MelodyError(
            'Harmony ends at {} but the melody runs to {}.'.format(
                position, notes[-1].end))
