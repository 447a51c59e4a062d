"""
Metadata of the allemande corpus and checks of its structural regularities.

The corpus itself is not shipped. `fetch_instructions` says where to get it
and `validate_regularities` compares the downloaded scores against the
manifest in skdiff/data/manifest.txt.
"""
from __future__ import absolute_import
from __future__ import division

import io
import logging
import os
from collections import OrderedDict, namedtuple

import numpy as np

from skdiff import constants as co
from skdiff import filetypes
from skdiff.datatypes import Meter

logger = logging.getLogger(__name__)

MANIFEST_PATH = os.path.join(os.path.dirname(__file__), 'data', 'manifest.txt')
MANIFEST_COLUMNS = ('number', 'meter', 'a_bars', 'b_bars', 'form',
                    'mode_of_b', 'anacrusis', 'file', 'title')
NO_FILE = '-'
PASS = 'pass'
FAIL = 'fail'
SKIP = 'skip'
CHECKS = ('parse', 'parts', 'meter', 'sections', 'simultaneous', 'major_key',
          'anacrusis')

class ManifestError(Exception):
    pass

class PieceRecord(namedtuple('PieceRecord', [
        'number', 'title_adjective', 'meter', 'section_a_bars',
        'section_b_bars', 'repeat_form', 'mode_of_b', 'has_anacrusis',
        'file'])):
    """
    Expected metadata of one piece.

    Attributes
    ----------
    number : string
             Roman numeral, I to XXIV.
    title_adjective : string
                      'unknown' until read from the scores.
    meter : `datatypes.Meter`
    section_a_bars, section_b_bars : int
    repeat_form : string
                  ABA, AABB or AABBA.
    mode_of_b : string
                Where the B section modulates, or 'unverified'.
    has_anacrusis : bool
    file : string or None
           File name inside the downloaded corpus, None if unknown.
    """
    __slots__ = ()
    @property
    def ordinal(self):
        return co.ROMAN_NUMERALS.index(self.number) + 1

class CorpusManifest(object):
    """
    The records of every piece along with where they come from.
    """
    __slots__ = ['records', 'source_doi', 'path']
    def __init__(self, records, source_doi=co.CORPUS_DOI, path=None):
        self.records = tuple(records)
        self.source_doi = source_doi
        self.path = path
    def __repr__(self):
        return 'CorpusManifest({} records, doi {})'.format(
            len(self.records), self.source_doi)
    def __iter__(self):
        return iter(self.records)
    def __len__(self):
        return len(self.records)
    def record(self, number):
        for record in self.records:
            if record.number == number:
                return record
        raise KeyError('No piece {} in the manifest.'.format(number))
    @property
    def files(self):
        """
        Mapping of piece number to known file name.
        """
        return OrderedDict((x.number, x.file) for x in self.records
                           if x.file is not None)
    def counts(self):
        """
        Aggregate counts of the regularities the corpus is known for.
        """
        return tally_records(self.records)
    def with_titles(self, titles):
        """
        Copy with title adjectives replaced where `titles` knows them.
        """
        return CorpusManifest(
            [x._replace(title_adjective=titles[x.number])
             if titles.get(x.number) else x for x in self.records],
            self.source_doi, self.path)

def tally_records(records, checked=None):
    """
    Counts pieces with both sections 8 bars long, ABA form, 2/4 meter, major
    key, 3/8 meter and an anacrusis.

    `checked` optionally maps piece numbers to measured values overriding the
    record (keys 'sections', 'meter', 'major', 'anacrusis').
    """
    checked = checked or {}
    rows = []
    for record in records:
        measured = checked.get(record.number, {})
        sections = measured.get(
            'sections', (record.section_a_bars, record.section_b_bars))
        meter = measured.get('meter', record.meter)
        rows.append([
            sections == (8, 8),
            record.repeat_form == 'ABA',
            meter == Meter(2, 4),
            measured.get('major', True),
            meter == Meter(3, 8),
            measured.get('anacrusis', record.has_anacrusis)])
    names = ('a8_b8', 'aba', 'meter_2/4', 'major', 'meter_3/8', 'anacrusis')
    if not rows:
        return OrderedDict((x, 0) for x in names)
    totals = np.array(rows, dtype=bool).sum(axis=0)
    return OrderedDict((x, int(y)) for x, y in zip(names, totals))

def read_manifest(path):
    """
    Reads a manifest file.

    Raises
    ------
    ManifestError
        On malformed lines, duplicate pieces or a record count other than
        `constants.CORPUS_SIZE`.
    """
    records = []
    doi = None
    with io.open(path, 'r', encoding='utf-8') as f:
        for i, line in enumerate(f, 1):
            line = line.partition('#')[0].strip()
            if not line:
                continue
            cols = line.split(None, len(MANIFEST_COLUMNS) - 1)
            if cols[0] == 'doi':
                if len(cols) != 2:
                    raise ManifestError('{}:{}: doi takes one value.'.format(
                        path, i))
                doi = cols[1]
                continue
            if len(cols) != len(MANIFEST_COLUMNS):
                raise ManifestError(
                    '{}:{}: expected {} columns, found {}.'.format(
                        path, i, len(MANIFEST_COLUMNS), len(cols)))
            records.append(_parse_record(cols, path, i))
    numbers = [x.number for x in records]
    for number in numbers:
        if numbers.count(number) > 1:
            raise ManifestError('{}: piece {} is listed twice.'.format(
                path, number))
    if len(records) != co.CORPUS_SIZE:
        raise ManifestError('{}: {} records instead of {}.'.format(
            path, len(records), co.CORPUS_SIZE))
    if doi is None:
        raise ManifestError('{}: no doi line.'.format(path))
    logger.log(10, '  -- Read {} records from {}.'.format(len(records), path))
    return CorpusManifest(sorted(records, key=lambda x: x.ordinal), doi, path)

def _parse_record(cols, path, line):
    values = dict(zip(MANIFEST_COLUMNS, cols))
    where = '{}:{}'.format(path, line)
    if values['number'] not in co.ROMAN_NUMERALS:
        raise ManifestError('{}: unknown piece number {!r}.'.format(
            where, values['number']))
    try:
        meter = Meter.parse(values['meter'])
        a_bars, b_bars = int(values['a_bars']), int(values['b_bars'])
    except ValueError as e:
        raise ManifestError('{}: {}'.format(where, e))
    if values['form'] not in co.REPEAT_FORMS:
        raise ManifestError('{}: unknown form {!r}.'.format(
            where, values['form']))
    if values['mode_of_b'] not in co.MODES_OF_B:
        raise ManifestError('{}: unknown mode of B {!r}.'.format(
            where, values['mode_of_b']))
    if values['anacrusis'] not in ('yes', 'no'):
        raise ManifestError('{}: anacrusis must be yes or no.'.format(where))
    return PieceRecord(
        number=values['number'],
        title_adjective=values['title'].strip(),
        meter=meter,
        section_a_bars=a_bars,
        section_b_bars=b_bars,
        repeat_form=values['form'],
        mode_of_b=values['mode_of_b'],
        has_anacrusis=values['anacrusis'] == 'yes',
        file=None if values['file'] == NO_FILE else values['file'])

def write_manifest(manifest, path):
    lines = ['# Allemandes for two mandolins (Gabriele Leone, 1768).\n',
             'doi {}\n'.format(manifest.source_doi),
             '# ' + ' '.join(MANIFEST_COLUMNS) + '\n']
    for x in manifest.records:
        lines.append('{:<8} {:<5} {:<6} {:<6} {:<5} {:<11} {:<9} {:<4} '
                     '{}\n'.format(
                         x.number, x.meter.name, x.section_a_bars,
                         x.section_b_bars, x.repeat_form, x.mode_of_b,
                         'yes' if x.has_anacrusis else 'no',
                         x.file or NO_FILE, x.title_adjective))
    with io.open(path, 'w', encoding='utf-8') as f:
        f.writelines(lines)
    logger.log(15, '  -- Wrote manifest to {}.'.format(path))

def load_manifest(path=None):
    """
    The manifest shipped with skdiff, or the one at `path`.
    """
    return read_manifest(path or MANIFEST_PATH)

def fetch_instructions(manifest=None):
    """
    How to get the corpus. Never touches the network.
    """
    manifest = manifest or load_manifest()
    lines = [
        'The allemande corpus is available from',
        '  https://doi.org/{}'.format(manifest.source_doi),
        '',
        'Download and unpack it into one directory. {} uncompressed MusicXML '
        'files'.format(len(manifest)),
        '({}) are expected, one per piece, named by piece number in roman '
        'or'.format(', '.join(co.MUSICXML_EXTENSIONS)),
        'arabic numerals:',
        '']
    for record in manifest.records:
        lines.append('  {:<6} {}'.format(
            record.number, record.file or
            '*{}*{{{}}}'.format(record.number, ','.join(
                co.MUSICXML_EXTENSIONS))))
    lines.extend([
        '',
        'Then run',
        '  python -m skdiff.cli validate-corpus <directory>',
        'or point SKDIFF_CORPUS at the directory to run the corpus tests.'])
    return '\n'.join(lines) + '\n'

def piece_number(filename):
    """
    Roman numeral of the piece a file name refers to, or None.

    >>> piece_number('allemande_XIV.musicxml')
    'XIV'
    >>> piece_number('leone-07.xml')
    'VII'
    """
    stem = os.path.splitext(os.path.basename(filename))[0]
    found = [x for x in co.RE_PIECE_NUMBER.findall(stem) if x]
    for token in reversed(found):
        if token.isdigit():
            value = int(token)
            if 1 <= value <= co.CORPUS_SIZE:
                return co.ROMAN_NUMERALS[value - 1]
        elif token in co.ROMAN_NUMERALS:
            return token
    return None

def find_piece_files(directory, manifest):
    """
    Maps piece numbers to MusicXML files under `directory`.

    Known file names from the manifest win; other pieces are matched by the
    number in their file name.
    """
    candidates = []
    for root, dirs, files in os.walk(directory):
        dirs.sort()
        for name in sorted(files):
            if os.path.splitext(name)[1].lower() in co.MUSICXML_EXTENSIONS:
                candidates.append(os.path.join(root, name))
    found = OrderedDict()
    for record in manifest.records:
        if record.file is not None:
            path = os.path.join(directory, record.file)
            if os.path.exists(path):
                found[record.number] = path
                continue
        matches = [x for x in candidates if piece_number(x) == record.number]
        if len(matches) > 1:
            logger.warning('Several files for piece {}; using {}.'.format(
                record.number, matches[0]))
        if matches:
            found[record.number] = matches[0]
    logger.log(15, '  -- Found {} of {} pieces in {}.'.format(
        len(found), len(manifest), directory))
    return found

def load_corpus(directory, manifest):
    """
    Parses every piece found under `directory`.

    Returns
    -------
    OrderedDict of string: list of `filetypes.ScorePart`
    OrderedDict of string: string
        Parse errors by piece number.
    """
    pieces = OrderedDict()
    errors = OrderedDict()
    for number, path in find_piece_files(directory, manifest).items():
        try:
            pieces[number] = filetypes.MusicXML(path).parts
        except filetypes.MusicXMLError as e:
            logger.warning('Piece {}: {}'.format(number, e))
            errors[number] = str(e)
    return pieces, errors

CheckResult = namedtuple('CheckResult', ['number', 'check', 'status',
                                         'expected', 'measured'])

class ValidationReport(object):
    """
    Outcome of `validate_regularities`.

    Attributes
    ----------
    results : list of `CheckResult`
    skipped : list of string
              Pieces that weren't available.
    titles : OrderedDict of string: string
             Titles found in the scores.
    tallies : OrderedDict
              Aggregate counts with measured values where available.
    expected : OrderedDict
               The same counts taken from the manifest alone.
    """
    __slots__ = ['results', 'skipped', 'titles', 'tallies', 'expected']
    def __init__(self, results=None, skipped=None, titles=None, tallies=None,
                 expected=None):
        self.results = results or []
        self.skipped = skipped or []
        self.titles = titles or OrderedDict()
        self.tallies = tallies or OrderedDict()
        self.expected = expected or OrderedDict()
    def __repr__(self):
        return 'ValidationReport({} checks, {} failures, {} skipped)'.format(
            len(self.results), len(self.failures()), len(self.skipped))
    def failures(self):
        return [x for x in self.results if x.status == FAIL]
    @property
    def passed(self):
        return not self.failures()
    def format(self):
        strings = []
        strings.append('--' + ' Piece '.ljust(8, '-') +
                       '--' + ' Check '.ljust(14, '-') +
                       '--' + ' Status '.center(8, '-') +
                       '--' + ' Expected '.ljust(14, '-') +
                       '--' + ' Measured '.ljust(14, '-') + '--')
        for x in self.results:
            strings.append('  {:<8}  {:<14}  {:^8}  {:<14}  {:<14}'.format(
                x.number, x.check, x.status, _show(x.expected),
                _show(x.measured)))
        strings.append('-' * 70)
        strings.append('{:<30} {}'.format(
            'Skipped:', ' '.join(self.skipped) or co.ABSENT))
        strings.append('{:<30} {:10d}'.format(
            'Failures:', len(self.failures())))
        for key, value in self.tallies.items():
            strings.append('{:<30} {:4d} (expected {:d})'.format(
                key + ':', value, self.expected.get(key, 0)))
        for number, title in self.titles.items():
            strings.append('{:<30} {}'.format('Title ' + number + ':', title))
        return strings

def _show(value):
    if value is None:
        return co.ABSENT
    if isinstance(value, (tuple, list)):
        return ','.join(_show(x) for x in value)
    if isinstance(value, Meter):
        return value.name
    return str(value)

def expected_totals(record):
    """
    Bar counts a score without repeat barlines may have: sections written
    once, or written out in full.
    """
    a, b = record.section_a_bars, record.section_b_bars
    full = {'ABA': 2 * a + b, 'AABB': 2 * a + 2 * b, 'AABBA': 3 * a + 2 * b}
    return sorted(set([a + b, full[record.repeat_form]]))

def validate_regularities(manifest, pieces, errors=None):
    """
    Checks parsed scores against the manifest.

    Arguments
    ---------
    manifest : `CorpusManifest`
    pieces : mapping of string: list of `filetypes.ScorePart`
             Keyed by piece number. May hold any subset of the corpus.
    errors : mapping of string: string
             Pieces that failed to parse, recorded as parse failures.

    Returns
    -------
    `ValidationReport`
        Contradictions are reported, never raised.
    """
    errors = errors or {}
    report = ValidationReport()
    measured = {}
    for record in manifest.records:
        number = record.number
        if number in errors:
            report.results.append(CheckResult(
                number, 'parse', FAIL, None, errors[number]))
            continue
        parts = pieces.get(number)
        if parts is None:
            report.skipped.append(number)
            continue
        checks, values = _check_piece(record, parts)
        report.results.extend(checks)
        measured[number] = values
        titles = [x.title for x in parts if x.title]
        if titles:
            report.titles[number] = titles[0]
    present = [x for x in manifest.records if x.number in measured]
    report.tallies = tally_records(present, measured)
    report.expected = tally_records(present)
    logger.log(15, '  -- Validated {} piece(s): {} failure(s), {} '
               'skipped.'.format(len(present), len(report.failures()),
                                 len(report.skipped)))
    return report

def _check_piece(record, parts):
    number = record.number
    results = []
    values = {}
    def add(check, passed, expected, found):
        results.append(CheckResult(number, check, PASS if passed else FAIL,
                                   expected, found))
    add('parts', len(parts) == co.CORPUS_PARTS, co.CORPUS_PARTS, len(parts))
    if not parts:
        return results, values
    lead = parts[0]
    meters = sorted(set(x for part in parts for x in part.meters()))
    if meters:
        values['meter'] = meters[0] if len(meters) == 1 else None
    add('meter', meters == [record.meter], record.meter,
        meters[0] if len(meters) == 1 else meters)
    lengths = lead.section_lengths()
    if lengths and len(lengths) >= 2:
        found = (int(round(lengths[0])), int(round(lengths[1])))
        values['sections'] = found
        add('sections', found == (record.section_a_bars,
                                  record.section_b_bars),
            (record.section_a_bars, record.section_b_bars), found)
    else:
        bars = int(round(lead.duration / record.meter.bar_length))
        totals = expected_totals(record)
        add('sections', bars in totals, totals, bars)
    simultaneous = max(x.max_simultaneous() for x in parts)
    add('simultaneous', simultaneous <= co.MAX_SIMULTANEOUS,
        co.MAX_SIMULTANEOUS, simultaneous)
    modes = sorted(set(x.key.mode for x in parts if x.key is not None))
    values['major'] = modes == ['major']
    add('major_key', modes == ['major'], 'major', modes)
    values['anacrusis'] = lead.anacrusis
    add('anacrusis', lead.anacrusis == record.has_anacrusis,
        record.has_anacrusis, lead.anacrusis)
    return results, values
