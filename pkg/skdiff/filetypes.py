#!/usr/bin/env python
"""
Handles importing melodies from the filetypes that skdiff uses.

MusicXML
--------
Only uncompressed, partwise documents are read (.xml, .musicxml). Recognized
elements are part-list, part, measure, attributes (divisions, key, time),
note (pitch, duration, chord, tie, rest), harmony (root, kind), backup,
forward and barline repeats. Grace and cue notes are dropped. Anything else
is ignored with a warning.

Lead sheets
-----------
Plain text, one directive per line. Lines starting with # are comments.

  title The Joyful
  key C major
  meter 2/4
  sections 8 8
  chords | C | G7 | . | C G |
  notes C4:q D4:q | E4:q. F#4:e | G4:h~ | G4:q r:q

`chords` holds one cell per bar, `.` repeats the previous chord and several
symbols in one cell split the bar evenly. Durations are w h q e s t with up to
two dots. `~` ties a note into the next one, `r` is a rest and `|` is only a
visual bar line.
"""
from __future__ import print_function
from __future__ import absolute_import
from __future__ import division

import io
import logging
import math
import os
import xml.etree.ElementTree as ET
from collections import namedtuple
from fractions import Fraction

from skdiff import constants as co
from skdiff import datatypes
from skdiff.datatypes import (ChordSymbol, HarmonySpan, KeySignature, Melody,
                              Meter, Note, Pitch)

logger = logging.getLogger(__name__)

# Elements that routinely appear inside measures and carry nothing we use.
QUIET_TAGS = frozenset(['direction', 'print', 'sound', 'bookmark', 'link',
                        'figured-bass', 'listening', 'grouping'])

class FileTypeError(Exception):
    pass

class MusicXMLError(Exception):
    pass

class LeadSheetError(Exception):
    """
    Syntax problems in a lead sheet, located by 1-based line and column.
    """
    def __init__(self, message, line=None, column=None):
        self.message = message
        self.line = line
        self.column = column
        if line is not None:
            message = 'line {}, column {}: {}'.format(line, column, message)
        super(LeadSheetError, self).__init__(message)

class File(object):
    """
    Base for every other filetype class.
    """
    def __init__(self, path):
        self._lines = None
        self.path = os.path.abspath(path)
        self.directory = os.path.dirname(self.path)
        self.filename = os.path.basename(self.path)
    @property
    def lines(self):
        if self._lines is None:
            with io.open(self.path, 'r', encoding='utf-8') as f:
                self._lines = f.readlines()
        return self._lines

# MUSICXML

class Event(namedtuple('Event', ['onset', 'pitches', 'durations', 'tied'])):
    """
    Everything that starts at one instant inside a part.

    `pitches` and `durations` run in parallel. An empty `pitches` is a rest.
    `tied` holds the MIDI numbers that continue a tie from an earlier note.
    """
    __slots__ = ()
    @property
    def is_rest(self):
        return not self.pitches
    def highest(self):
        i = max(range(len(self.pitches)),
                key=lambda x: self.pitches[x].midi_number)
        return (self.pitches[i], self.durations[i],
                self.pitches[i].midi_number in self.tied)

class Measure(namedtuple('Measure', ['number', 'onset', 'duration', 'meter',
                                     'events', 'harmonies', 'repeat_start',
                                     'repeat_end', 'implicit'])):
    """
    One measure with absolute onsets. `harmonies` holds (onset, ChordSymbol).
    """
    __slots__ = ()
    @property
    def end(self):
        return self.onset + self.duration
    @property
    def is_short(self):
        return self.duration < self.meter.bar_length

class ScorePart(object):
    """
    A single part of a MusicXML score.

    Attributes
    ----------
    part_id : string
    name : string or None
    measures : list of `Measure`
    meter : `datatypes.Meter`
            First time signature of the part.
    key : `datatypes.KeySignature`
          First key signature of the part.
    title : string or None
            Work or movement title of the document the part came from.
    """
    __slots__ = ['part_id', 'name', 'measures', 'meter', 'key', 'title']
    def __init__(self, part_id=None, name=None, measures=None, meter=None,
                 key=None, title=None):
        self.part_id = part_id
        self.name = name
        self.measures = measures or []
        self.meter = meter
        self.key = key
        self.title = title
    def __repr__(self):
        return '{}[{}]({} measures)'.format(
            self.__class__.__name__, self.part_id, len(self.measures))
    @property
    def anacrusis(self):
        return bool(self.measures) and self.measures[0].is_short
    @property
    def duration(self):
        if not self.measures:
            return Fraction(0)
        return self.measures[-1].end
    @property
    def events(self):
        return [x for measure in self.measures for x in measure.events]
    @property
    def harmonies(self):
        return [x for measure in self.measures for x in measure.harmonies]
    def max_simultaneous(self):
        """
        Largest number of distinct pitches struck at one instant.
        """
        if not self.measures:
            return 0
        return max([len(set(x.pitches)) for x in self.events] or [0])
    def meters(self):
        return sorted(set(x.meter for x in self.measures))
    def section_lengths(self):
        """
        Bar counts between repeat barlines, or None if there are none.
        """
        if not any(x.repeat_start or x.repeat_end for x in self.measures):
            return None
        lengths = []
        current = Fraction(0)
        for measure in self.measures:
            if measure.repeat_start and current > 0:
                lengths.append(current)
                current = Fraction(0)
            current += measure.duration / measure.meter.bar_length
            if measure.repeat_end:
                lengths.append(current)
                current = Fraction(0)
        if current > 0:
            lengths.append(current)
        return lengths

class MusicXML(File):
    """
    Reads a MusicXML file. Parts are parsed the first time they're needed.
    """
    def __init__(self, path):
        super(MusicXML, self).__init__(path)
        self._parts = None
    @property
    def parts(self):
        if self._parts is None:
            logger.log(10, 'READING: {}'.format(self.filename))
            with open(self.path, 'rb') as f:
                self._parts = parse_musicxml(f.read())
        return self._parts

class _Warner(object):
    """
    Warns about each unknown MusicXML element once per document.
    """
    def __init__(self):
        self.seen = set()
    def unknown(self, tag, where):
        if tag not in self.seen:
            self.seen.add(tag)
            logger.warning('Ignoring unsupported MusicXML element <{}> '
                           '(first seen in {}).'.format(tag, where))

def parse_musicxml(document):
    """
    Parses a partwise MusicXML document into a list of ScorePart objects.

    Arguments
    ---------
    document : bytes, string path or file object

    Returns
    -------
    list of `ScorePart` in document order.
    """
    if hasattr(document, 'read'):
        document = document.read()
    elif isinstance(document, str) and not document.lstrip().startswith('<'):
        with open(document, 'rb') as f:
            document = f.read()
    try:
        root = ET.fromstring(document)
    except ET.ParseError as e:
        line, column = e.position
        raise MusicXMLError(
            'Malformed XML at line {}, column {}: {}'.format(line, column, e))
    if root.tag != 'score-partwise':
        raise MusicXMLError(
            'Only score-partwise documents are supported, not <{}>.'.format(
                root.tag))
    title = _text(root, 'work/work-title') or _text(root, 'movement-title')
    names = {}
    for score_part in root.findall('part-list/score-part'):
        names[score_part.get('id')] = _text(score_part, 'part-name')
    warner = _Warner()
    parts = []
    for part_el in root.findall('part'):
        part = _parse_part(part_el, warner)
        part.name = names.get(part.part_id)
        part.title = title
        parts.append(part)
    logger.log(15, '  -- Read {} parts.'.format(len(parts)))
    return parts

def _text(element, path):
    found = element.find(path)
    if found is None or found.text is None:
        return None
    return found.text.strip()

def _parse_part(part_el, warner):
    part_id = part_el.get('id')
    divisions = 1
    meter = None
    key = None
    position = Fraction(0)
    measures = []
    measure_els = part_el.findall('measure')
    for index, measure_el in enumerate(measure_els):
        number = measure_el.get('number', str(index + 1))
        where = 'part {} measure {}'.format(part_id, number)
        cursor = Fraction(0)
        extent = Fraction(0)
        last_onset = Fraction(0)
        raw = []
        harmonies = []
        repeat_start = repeat_end = False
        for child in measure_el:
            tag = child.tag
            if tag == 'attributes':
                text = _text(child, 'divisions')
                if text is not None:
                    divisions = int(text)
                if child.find('key') is not None:
                    new_key = _parse_key(child.find('key'), where)
                    if key is not None and new_key != key:
                        logger.log(15, '  -- Key change to {} in {}.'.format(
                            new_key.name, where))
                    key = key or new_key
                if child.find('time') is not None:
                    new_meter = _parse_time(child.find('time'), where)
                    if meter is not None and new_meter != meter:
                        logger.warning('Meter change to {} in {}.'.format(
                            new_meter.name, where))
                    meter = new_meter
            elif tag == 'note':
                if child.find('grace') is not None or \
                        child.find('cue') is not None:
                    logger.warning('Dropped grace/cue note in {}.'.format(
                        where))
                    continue
                dur = _duration(child, divisions, where)
                is_chord = child.find('chord') is not None
                onset = last_onset if is_chord else cursor
                pitch = _parse_pitch(child, where)
                tied = any(x.get('type') == 'stop' for x in
                           child.findall('tie') + child.findall(
                               'notations/tied'))
                raw.append((onset, pitch, dur, tied))
                if not is_chord:
                    last_onset = cursor
                    cursor += dur
                    extent = max(extent, cursor)
            elif tag == 'backup':
                cursor -= _duration(child, divisions, where)
            elif tag == 'forward':
                cursor += _duration(child, divisions, where)
                extent = max(extent, cursor)
            elif tag == 'harmony':
                offset = _text(child, 'offset')
                onset = cursor
                if offset is not None:
                    onset += Fraction(int(offset), divisions * 4)
                harmonies.append((onset, _parse_harmony(child, where)))
            elif tag == 'barline':
                repeat = child.find('repeat')
                if repeat is not None:
                    if repeat.get('direction') == 'forward':
                        repeat_start = True
                    elif repeat.get('direction') == 'backward':
                        repeat_end = True
            elif tag in QUIET_TAGS:
                pass
            else:
                warner.unknown(tag, where)
        if meter is None:
            raise MusicXMLError('No time signature before {}.'.format(where))
        implicit = measure_el.get('implicit') == 'yes'
        _check_measure(extent, meter, index, len(measure_els), implicit,
                       measures, where)
        events = _group_events(raw, position)
        measures.append(Measure(
            number, position, extent, meter, events,
            [(position + x, c) for x, c in sorted(harmonies,
                                                  key=lambda y: y[0])],
            repeat_start, repeat_end, implicit))
        position += extent
    if key is None:
        logger.warning('No key signature in part {}; assuming C major.'.format(
            part_id))
        key = KeySignature(0, 'major')
    first_meter = measures[0].meter if measures else meter
    return ScorePart(part_id=part_id, measures=measures, meter=first_meter,
                     key=key)

def _check_measure(extent, meter, index, count, implicit, previous, where):
    bar = meter.bar_length
    if extent > bar:
        raise MusicXMLError(
            'Inconsistent measure length in {}: {} exceeds {} bar of {}.'.format(
                where, datatypes.format_duration(extent), meter.name,
                datatypes.format_duration(bar)))
    if extent == bar:
        return
    pickup = bool(previous) and previous[0].is_short
    if index == 0 or implicit or (index == count - 1 and pickup):
        logger.log(15, '  -- Short measure in {} ({}).'.format(
            where, datatypes.format_duration(extent)))
        return
    raise MusicXMLError(
        'Inconsistent measure length in {}: {} instead of {}.'.format(
            where, datatypes.format_duration(extent),
            datatypes.format_duration(bar)))

def _duration(element, divisions, where):
    text = _text(element, 'duration')
    if text is None:
        raise MusicXMLError('Missing <duration> in {}.'.format(where))
    return Fraction(int(text), divisions * 4)

def _parse_pitch(note_el, where):
    if note_el.find('rest') is not None:
        return None
    pitch_el = note_el.find('pitch')
    if pitch_el is None:
        logger.warning('Unpitched note in {} treated as a rest.'.format(where))
        return None
    step = _text(pitch_el, 'step')
    if step not in co.STEPS:
        raise MusicXMLError('Bad <step> {!r} in {}.'.format(step, where))
    alter = _alter(_text(pitch_el, 'alter'), where)
    octave = _text(pitch_el, 'octave')
    try:
        octave = int(octave)
    except (TypeError, ValueError):
        raise MusicXMLError('Bad <octave> {!r} in {}.'.format(octave, where))
    try:
        return Pitch.from_step(step, alter, octave)
    except ValueError as e:
        raise MusicXMLError('{} in {}'.format(e, where))

def _alter(text, where):
    if text is None:
        return 0
    try:
        value = float(text)
    except ValueError:
        raise MusicXMLError('Bad alter {!r} in {}.'.format(text, where))
    if not value.is_integer():
        raise MusicXMLError('Microtonal alter {} in {}.'.format(text, where))
    if int(value) not in co.ALTER_SIGNS:
        raise MusicXMLError('Alter {} out of range in {}.'.format(text, where))
    return int(value)

def _parse_key(key_el, where):
    fifths = _text(key_el, 'fifths')
    if fifths is None:
        raise MusicXMLError('Key without <fifths> in {}.'.format(where))
    mode = _text(key_el, 'mode') or 'major'
    if mode not in co.MODES:
        logger.warning('Mode {} in {} read as major.'.format(mode, where))
        mode = 'major'
    return KeySignature.from_fifths(int(fifths), mode)

def _parse_time(time_el, where):
    try:
        return Meter(int(_text(time_el, 'beats')),
                     int(_text(time_el, 'beat-type')))
    except (TypeError, ValueError) as e:
        raise MusicXMLError('Bad time signature in {}: {}'.format(where, e))

def _parse_harmony(harmony_el, where):
    kind = _text(harmony_el, 'kind')
    if kind not in co.MUSICXML_KINDS:
        raise MusicXMLError(
            'Unsupported chord kind {!r} in {}.'.format(kind, where))
    step = _text(harmony_el, 'root/root-step')
    if step not in co.STEPS:
        raise MusicXMLError('Bad <root-step> {!r} in {}.'.format(step, where))
    alter = _alter(_text(harmony_el, 'root/root-alter'), where)
    return ChordSymbol(co.STEPS[step] + alter, co.MUSICXML_KINDS[kind],
                       step + co.ALTER_SIGNS.get(alter, ''))

def _group_events(raw, position):
    """
    Merges raw (onset, pitch, duration, tied) entries sharing an onset.
    """
    by_onset = {}
    for onset, pitch, dur, tied in raw:
        entry = by_onset.setdefault(onset, ([], [], set()))
        if pitch is None:
            continue
        entry[0].append(pitch)
        entry[1].append(dur)
        if tied:
            entry[2].add(pitch.midi_number)
    events = []
    for onset in sorted(by_onset):
        pitches, durations, tied = by_onset[onset]
        events.append(Event(position + onset, tuple(pitches),
                            tuple(durations), frozenset(tied)))
    return events

def extract_lead(parts, part_index=0, pickup='pad'):
    """
    Makes a monophonic Melody out of one part.

    The highest of simultaneous notes is kept, tied notes are merged, rests
    are absorbed by the previous note (a leading rest by the following note)
    and the end is stretched to a whole bar. An anacrusis is either padded at
    its start into a full bar (`pickup` = 'pad') or dropped ('drop').
    """
    if not 0 <= part_index < len(parts):
        raise ValueError('Part index {} out of range ({} parts).'.format(
            part_index, len(parts)))
    if pickup not in co.PICKUP_MODES:
        raise ValueError('Unknown pickup mode: {!r}'.format(pickup))
    part = parts[part_index]
    end = part.duration
    raw = _highest_line(part.events)
    if not raw:
        raise datatypes.EmptyMelodyError(
            'Part {} has no notes.'.format(part.part_id))
    stops = [x[1] for x in raw[1:]] + [end]
    raw = [(pitch, onset, min(dur, stop - onset), tied)
           for (pitch, onset, dur, tied), stop in zip(raw, stops)]
    notes = []
    for pitch, onset, dur, tied in raw:
        if tied and notes and notes[-1].pitch == pitch and \
                notes[-1].end == onset:
            notes[-1] = notes[-1].moved(duration_=notes[-1].duration + dur)
        else:
            notes.append(Note(pitch, onset, dur))
    notes = absorb_rests(notes, end)
    harmonies = part.harmonies or _borrow_harmonies(parts, part_index)
    if part.anacrusis:
        length = part.measures[0].duration
        if pickup == 'pad':
            shift = part.meter.bar_length - length
            logger.log(15, '  -- Padding anacrusis of {} by {}.'.format(
                datatypes.format_duration(length),
                datatypes.format_duration(shift)))
            notes = absorb_rests([x.shifted(shift) for x in notes], end + shift)
            harmonies = [(x + shift if x > 0 else x, c)
                         for x, c in harmonies]
            end += shift
        else:
            logger.log(15, '  -- Dropping anacrusis of {}.'.format(
                datatypes.format_duration(length)))
            notes = _drop_before(notes, length)
            if not notes:
                raise datatypes.EmptyMelodyError(
                    'Part {} has nothing after its anacrusis.'.format(
                        part.part_id))
            harmonies = _drop_harmonies_before(harmonies, length)
            end -= length
    meter = part.meter
    bar = meter.bar_length
    full = int(math.ceil(end / bar)) * bar
    if full != end:
        notes[-1] = notes[-1].moved(duration_=notes[-1].duration + full - end)
    harmony = _build_spans(harmonies, full, part.key)
    return Melody(notes, part.key, meter, harmony, name=part.title,
                  section_starts=_section_starts(part, pickup, full))

def _highest_line(events):
    """
    Returns (pitch, onset, duration, tied) for every attack that is the
    highest pitch sounding at its onset. An attack under a note that is still
    held from an earlier onset is skipped.
    """
    raw = []
    held = []
    for event in events:
        held = [x for x in held if x[0] > event.onset]
        above = max(x[1] for x in held) if held else None
        held.extend((event.onset + d, p.midi_number)
                    for p, d in zip(event.pitches, event.durations))
        if event.is_rest:
            continue
        pitch, dur, tied = event.highest()
        if above is not None and above > pitch.midi_number:
            logger.log(5, '  -- {} at {} is under a held note.'.format(
                pitch.name, datatypes.format_duration(event.onset)))
            continue
        raw.append((pitch, event.onset, dur, tied))
    return raw

def absorb_rests(notes, end):
    """
    Closes every gap: leading silence goes to the first note, any other gap
    to the note before it, trailing silence to the last note.
    """
    if not notes:
        return notes
    closed = []
    for i, note in enumerate(notes):
        if i == 0 and note.onset > 0:
            note = note.moved(onset=Fraction(0),
                              duration_=note.duration + note.onset)
        stop = notes[i + 1].onset if i + 1 < len(notes) else end
        if note.end < stop:
            note = note.moved(duration_=stop - note.onset)
        closed.append(note)
    return closed

def _drop_before(notes, start):
    kept = []
    for note in notes:
        if note.end <= start:
            continue
        if note.onset < start:
            note = note.moved(onset=start, duration_=note.end - start)
        kept.append(note.shifted(-start))
    return kept

def _drop_harmonies_before(harmonies, start):
    kept = []
    current = None
    for onset, chord in harmonies:
        if onset <= start:
            current = chord
        else:
            kept.append((onset - start, chord))
    if current is not None and (not kept or kept[0][0] > 0):
        kept.insert(0, (Fraction(0), current))
    return kept

def _borrow_harmonies(parts, part_index):
    for i, part in enumerate(parts):
        if i != part_index and part.harmonies:
            logger.log(15, '  -- Using harmony from part {}.'.format(
                part.part_id))
            return part.harmonies
    return []

def _build_spans(harmonies, end, key):
    """
    One chord lasts until the next harmony element; the last one until `end`.
    """
    if not harmonies:
        quality = 'major' if key.mode == 'major' else 'minor'
        logger.warning('No harmony found; using the tonic chord {}.'.format(
            ChordSymbol(key.tonic, quality).name))
        return [HarmonySpan(0, end, ChordSymbol(key.tonic, quality))]
    onsets = {}
    for onset, chord in harmonies:
        if onset < end:
            onsets[onset] = chord
    ordered = sorted(onsets.items())
    if ordered[0][0] > 0:
        logger.warning('First chord starts at {}; extending it back to '
                       'the start.'.format(ordered[0][0]))
        ordered[0] = (Fraction(0), ordered[0][1])
    spans = []
    for i, (onset, chord) in enumerate(ordered):
        stop = ordered[i + 1][0] if i + 1 < len(ordered) else end
        spans.append(HarmonySpan(onset, stop - onset, chord))
    return spans

def _section_starts(part, pickup, end):
    bar = part.meter.bar_length
    offset = Fraction(0)
    if part.anacrusis:
        length = part.measures[0].duration
        offset = bar - length if pickup == 'pad' else -length
    starts = set()
    for i, measure in enumerate(part.measures):
        if measure.repeat_start:
            starts.add(measure.onset + offset)
        if measure.repeat_end and i + 1 < len(part.measures):
            starts.add(part.measures[i + 1].onset + offset)
    if not starts:
        return ()
    starts.add(Fraction(0))
    return tuple(sorted(int(x // bar) for x in starts if 0 <= x < end))

# LEAD SHEETS

class LeadSheet(File):
    """
    Reads the plain text lead sheet format.
    """
    def __init__(self, path):
        super(LeadSheet, self).__init__(path)
        self._melody = None
    @property
    def melody(self):
        if self._melody is None:
            logger.log(10, 'READING: {}'.format(self.filename))
            self._melody = parse_leadsheet_text(''.join(self.lines))
        return self._melody

def parse_duration_token(token):
    """
    'q.' -> Fraction(3, 8). Returns None for anything that isn't a token.
    """
    base = co.DURATION_TOKENS.get(token[:1])
    dots = token[1:]
    if base is None or dots not in ('', '.', '..'):
        return None
    return base * (2 - Fraction(1, 2 ** len(dots)))

def parse_leadsheet_text(text):
    """
    Parses the lead sheet text format into a Melody.
    """
    title = None
    key = None
    meter = None
    sections = None
    cells = []
    tokens = []
    for number, line in enumerate(text.splitlines(), 1):
        stripped = line.strip()
        if not stripped or stripped.startswith('#'):
            continue
        indent = len(line) - len(line.lstrip())
        parts = stripped.split(None, 1)
        directive = parts[0]
        rest = parts[1] if len(parts) > 1 else ''
        rest_column = line.find(rest, indent + len(directive)) + 1 \
            if rest else len(line) + 1
        if directive == 'title':
            title = rest
        elif directive == 'key':
            words = rest.split()
            if len(words) != 2 or words[1] not in co.MODES:
                raise LeadSheetError(
                    'expected "key <tonic> <major|minor>"', number, rest_column)
            try:
                key = KeySignature.parse(words[0], words[1])
            except ValueError as e:
                raise LeadSheetError(str(e), number, rest_column)
        elif directive == 'meter':
            try:
                meter = Meter.parse(rest.strip())
            except ValueError as e:
                raise LeadSheetError(str(e), number, rest_column)
        elif directive == 'sections':
            try:
                sections = [int(x) for x in rest.split()]
            except ValueError:
                raise LeadSheetError('section lengths must be whole bars',
                                     number, rest_column)
        elif directive == 'chords':
            cells.extend(_split_cells(line, rest, rest_column, number))
        elif directive == 'notes':
            position = rest_column - 1
            for word in rest.split():
                column = line.find(word, position) + 1
                position = column - 1 + len(word)
                tokens.append((word, number, column))
        else:
            raise LeadSheetError('unknown directive {!r}'.format(directive),
                                 number, indent + 1)
    if key is None:
        raise LeadSheetError('missing "key" directive')
    if meter is None:
        raise LeadSheetError('missing "meter" directive')
    notes, where = _parse_note_tokens(tokens)
    if not notes:
        raise datatypes.EmptyMelodyError('Lead sheet has no notes.')
    harmony = _cells_to_spans(cells, meter)
    covered = harmony[-1].end if harmony else Fraction(0)
    for note, (word, number, column) in zip(notes, where):
        if note.onset >= covered:
            raise LeadSheetError(
                'harmony gap: {} at {} is not under any chord'.format(
                    word, datatypes.format_duration(note.onset)),
                number, column)
    if notes[-1].end > covered:
        last = harmony[-1]
        harmony[-1] = HarmonySpan(last.onset, notes[-1].end - last.onset,
                                  last.chord)
    starts = ()
    if sections:
        starts = tuple(sum(sections[:i]) for i in range(len(sections)))
    return Melody(notes, key, meter, harmony, name=title,
                  section_starts=starts)

def _split_cells(line, rest, rest_column, number):
    pieces = rest.split('|')
    if pieces and not pieces[0].strip():
        pieces = pieces[1:]
    if pieces and not pieces[-1].strip():
        pieces = pieces[:-1]
    cells = []
    position = rest_column - 1
    for piece in pieces:
        column = line.find(piece, position) + 1
        position = column - 1 + len(piece) + 1
        symbols = piece.split()
        if not symbols:
            raise LeadSheetError('empty chord cell', number, column)
        cells.append((symbols, number, column))
    return cells

def _cells_to_spans(cells, meter):
    bar = meter.bar_length
    spans = []
    previous = None
    for i, (symbols, number, column) in enumerate(cells):
        width = bar / len(symbols)
        for j, symbol in enumerate(symbols):
            if symbol == '.':
                if previous is None:
                    raise LeadSheetError('"." with no chord before it',
                                         number, column)
                chord = previous
            else:
                try:
                    chord = ChordSymbol.parse(symbol)
                except ValueError as e:
                    raise LeadSheetError(str(e), number, column)
            spans.append(HarmonySpan(i * bar + j * width, width, chord))
            previous = chord
    return spans

def _parse_note_tokens(tokens):
    """
    Returns the notes and, for each note, the token it started at.
    """
    notes = []
    where = []
    position = Fraction(0)
    pending_tie = None
    for word, number, column in tokens:
        if word == '|':
            continue
        tie = word.endswith('~')
        body = word[:-1] if tie else word
        if ':' not in body:
            raise LeadSheetError('expected <pitch>:<duration>, got {!r}'
                                 .format(word), number, column)
        name, dur_token = body.split(':', 1)
        dur = parse_duration_token(dur_token)
        if dur is None:
            raise LeadSheetError('bad duration {!r}'.format(dur_token),
                                 number, column + len(name) + 1)
        if name == 'r':
            if pending_tie is not None or tie:
                raise LeadSheetError('rests cannot be tied', number, column)
            position += dur
            continue
        try:
            pitch = Pitch.from_name(name)
        except ValueError as e:
            raise LeadSheetError(str(e), number, column)
        if pending_tie is not None:
            if pending_tie.pitch != pitch:
                raise LeadSheetError(
                    'tie from {} into a different pitch'.format(
                        pending_tie.pitch.name), number, column)
            notes[-1] = notes[-1].moved(duration_=notes[-1].duration + dur)
        else:
            notes.append(Note(pitch, position, dur))
            where.append((word, number, column))
        position += dur
        pending_tie = notes[-1] if tie else None
    if pending_tie is not None:
        word, number, column = tokens[-1]
        raise LeadSheetError('tie at the end of the notes', number, column)
    return absorb_rests(notes, position), where

def split_duration(value):
    """
    Splits a duration into lead sheet tokens, longest first.
    """
    tokens = []
    remaining = value
    for token, length in co.TOKEN_DURATIONS:
        while length <= remaining:
            tokens.append(token)
            remaining -= length
    if remaining:
        raise LeadSheetError(
            'duration {} cannot be written with lead sheet tokens'.format(
                datatypes.format_duration(value)))
    return tokens

def write_leadsheet_text(melody):
    """
    Canonical lead sheet text for a Melody, one bar of notes per line.
    """
    bar = melody.meter.bar_length
    end = max(melody.duration, melody.harmony[-1].end)
    bars = int(math.ceil(end / bar))
    lines = []
    if melody.name:
        lines.append('title {}'.format(melody.name))
    lines.append('key {}'.format(melody.key.name))
    lines.append('meter {}'.format(melody.meter.name))
    if melody.section_starts:
        bounds = list(melody.section_starts) + [bars]
        lines.append('sections {}'.format(' '.join(
            str(bounds[i + 1] - bounds[i]) for i in range(len(bounds) - 1))))
    lines.append('chords | {} |'.format(' | '.join(
        _write_cells(melody.harmony, bar, bars))))
    per_bar = [[] for _ in range(bars)]
    position = Fraction(0)
    for note in melody.notes:
        if note.onset > position:
            _write_piece(per_bar, 'r', position, note.onset - position, bar,
                         False)
        _write_piece(per_bar, note.pitch.name, note.onset, note.duration, bar,
                     True)
        position = note.end
    for tokens in per_bar:
        if tokens:
            lines.append('notes {}'.format(' '.join(tokens)))
    return '\n'.join(lines) + '\n'

def _write_piece(per_bar, name, onset, length, bar, tie):
    pieces = []
    position = onset
    stop = onset + length
    while position < stop:
        barline = (position // bar + 1) * bar
        chunk = min(stop, barline) - position
        for token in split_duration(chunk):
            pieces.append((int(position // bar), '{}:{}'.format(name, token)))
        position += chunk
    for i, (index, word) in enumerate(pieces):
        if tie and i + 1 < len(pieces):
            word += '~'
        per_bar[index].append(word)

def _write_cells(harmony, bar, bars):
    cells = []
    previous = None
    for i in range(bars):
        start = i * bar
        stop = start + bar
        inside = [x for x in harmony if x.onset < stop and x.end > start]
        if not inside:
            inside = [harmony[-1]]
        changes = [(max(x.onset, start) - start) / bar for x in inside]
        count = 1
        for change in changes:
            count = count * change.denominator // math.gcd(
                count, change.denominator)
        symbols = []
        for j in range(count):
            at = start + bar * j / count
            chord = datatypes.chord_at(harmony, at) or harmony[-1].chord
            symbols.append(chord)
        if count == 1 and previous is not None and symbols[0] == previous:
            cells.append('.')
        else:
            cells.append(' '.join(x.name for x in symbols))
        previous = symbols[-1]
    return cells

def load_melody(path, part=0, pickup='pad'):
    """
    Reads a Melody from a lead sheet or a MusicXML file.
    """
    extension = os.path.splitext(path)[1].lower()
    if extension in co.LEADSHEET_EXTENSIONS:
        return LeadSheet(path).melody
    if extension in co.MUSICXML_EXTENSIONS:
        return extract_lead(MusicXML(path).parts, part, pickup)
    raise FileTypeError('Unknown input type {!r} for {}.'.format(
        extension, path))
