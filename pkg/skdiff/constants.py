"""
Constants and variables used throughout skdiff.
"""
import re
from collections import OrderedDict
from fractions import Fraction

# LOGGING SETTINGS
# Settings loaded using logging.config. The console handler writes to stderr
# so that whatever the CLI prints on stdout stays byte-for-byte reproducible.
LOG_SETTINGS = {
    'version': 1,
    'disable_existing_loggers': False,
    'formatters': {
        'bare': {'format': '%(message)s'},
        'basic': {'format': '%(name)s %(message)s'},
        'simple': {'format': '%(asctime)s:%(name)s:%(levelname)s %(message)s'}
        },
    'handlers': {
        'console': {
            'class': 'logging.StreamHandler', 'formatter': 'basic',
            'stream': 'ext://sys.stderr', 'level': 'WARNING'}
        },
    'loggers': {'__main__': {'level': 5, 'propagate': True},
                'skdiff.analysis': {'level': 15, 'propagate': True},
                'skdiff.cli': {'level': 15, 'propagate': True},
                'skdiff.corpus': {'level': 15, 'propagate': True},
                'skdiff.datatypes': {'level': 20, 'propagate': True},
                'skdiff.difftree': {'level': 20, 'propagate': True},
                'skdiff.export': {'level': 20, 'propagate': True},
                'skdiff.filetypes': {'level': 15, 'propagate': True},
                'skdiff.segment': {'level': 15, 'propagate': True},
                'skdiff.sktree': {'level': 20, 'propagate': True}
                },
    'root': {
        'level': 'NOTSET',
        'propagate': True,
        'handlers': ['console']}
    }

# PITCH
STEPS = OrderedDict(
    [('C', 0), ('D', 2), ('E', 4), ('F', 5), ('G', 7), ('A', 9), ('B', 11)])
ALTERS = {'': 0, '#': 1, '##': 2, 'b': -1, 'bb': -2}
ALTER_SIGNS = {0: '', 1: '#', 2: '##', -1: 'b', -2: 'bb'}
# Spelling used whenever a pitch has no preserved spelling (ex. after a
# transposition).
SHARP_NAMES = ['C', 'C#', 'D', 'D#', 'E', 'F', 'F#', 'G', 'G#', 'A', 'A#', 'B']
MIDI_MIN = 0
MIDI_MAX = 127
# Match a spelled pitch such as C4, F#5 or Bb3.
RE_PITCH = re.compile(r'\A([A-G])(##|bb|#|b)?(-?\d)\Z')
# Match a pitch class name such as C, F# or Bb.
RE_PITCH_CLASS = re.compile(r'\A([A-G])(##|bb|#|b)?\Z')

# HARMONY
# Chord templates as intervals above the root along with the role of each
# chord member. The role drives the importance ranking in sktree.
CHORD_TEMPLATES = OrderedDict(
    [
        ('major',      OrderedDict([(0, 'root'), (4, 'third'), (7, 'fifth')])),
        ('minor',      OrderedDict([(0, 'root'), (3, 'third'), (7, 'fifth')])),
        ('dominant7',  OrderedDict([(0, 'root'), (4, 'third'), (7, 'fifth'),
                                    (10, 'seventh')])),
        ('major7',     OrderedDict([(0, 'root'), (4, 'third'), (7, 'fifth'),
                                    (11, 'seventh')])),
        ('minor7',     OrderedDict([(0, 'root'), (3, 'third'), (7, 'fifth'),
                                    (10, 'seventh')])),
        ('diminished', OrderedDict([(0, 'root'), (3, 'third'), (6, 'fifth')])),
        ('augmented',  OrderedDict([(0, 'root'), (4, 'third'), (8, 'fifth')]))
        ]
    )
# root > fifth > third > other chord tone. Non-chord tones get NON_CHORD_RANK.
MEMBER_RANKS = {'root': 3, 'fifth': 2, 'third': 1, 'seventh': 0}
NON_CHORD_RANK = -1
# Suffixes used by the lead sheet text format.
CHORD_SUFFIXES = OrderedDict(
    [('major', ''), ('minor', 'm'), ('dominant7', '7'), ('major7', 'maj7'),
     ('minor7', 'm7'), ('diminished', 'dim'), ('augmented', 'aug')])
QUALITY_BY_SUFFIX = {v: k for k, v in CHORD_SUFFIXES.items()}
RE_CHORD = re.compile(r'\A([A-G])(##|bb|#|b)?(maj7|m7|dim|aug|m|7)?\Z')
# MusicXML <kind> values and the qualities they map onto.
MUSICXML_KINDS = {'major': 'major',
                  'minor': 'minor',
                  'dominant': 'dominant7',
                  'dominant-seventh': 'dominant7',
                  'major-seventh': 'major7',
                  'minor-seventh': 'minor7',
                  'diminished': 'diminished',
                  'augmented': 'augmented'}

# KEYS
SCALES = {'major': (0, 2, 4, 5, 7, 9, 11),
          'minor': (0, 2, 3, 5, 7, 8, 10)}
MODES = ('major', 'minor')

# TIME
# Power-of-two beat units accepted by Meter.
BEAT_UNITS = (1, 2, 4, 8, 16, 32)
# Duration tokens of the lead sheet format. Unit is the whole note.
DURATION_TOKENS = OrderedDict(
    [('w', Fraction(1, 1)), ('h', Fraction(1, 2)), ('q', Fraction(1, 4)),
     ('e', Fraction(1, 8)), ('s', Fraction(1, 16)), ('t', Fraction(1, 32))])
# Every single-token duration, dotted forms included, longest first. Used when
# writing durations back out.
TOKEN_DURATIONS = sorted(
    [(tok + dots, val * (2 - Fraction(1, 2 ** len(dots))))
     for tok, val in DURATION_TOKENS.items() for dots in ('', '.', '..')],
    key=lambda x: (-x[1], len(x[0])))
# Grids finer than this are treated as unresolvable tuplets.
FINEST_GRID = Fraction(1, 128)

# SEGMENTATION
SEGMENT_BARS = (1, 2)
DEFAULT_SEGMENT_BARS = 2
PICKUP_MODES = ('pad', 'drop')

# EXPANSION LABELS
EXP_LEAF = 'LEAF'
EXP_LEFT = 'L'
EXP_RIGHT = 'R'
EXP_TERNARY = 'T{}'
EXPANSIONS = ('LEAF', 'L', 'R', 'T0', 'T1', 'T2')

# DIFF FEATURES
# Spelled exactly as printed in the difference tree description.
SAME = 'same'
DIFF = 'diff'
MORE = 'more'
LESS = 'less'
NARROW = 'narrow'
WIDE = 'wide'
FEATURES = ('sk', 'ch', 'dir', 'int')
FEATURE_VALUES = OrderedDict(
    [('sk', (SAME, DIFF)),
     ('ch', (SAME, MORE, LESS)),
     ('dir', (SAME, DIFF)),
     ('int', (NARROW, WIDE, SAME))])
ABSENT = '–'

# RELATION LABELS
EXACT_REPETITION = 'exact_repetition'
TRANSPOSITION = 'transposition'
INVERSION = 'inversion'
CONTOUR_MATCH = 'contour_match'
VARIATION = 'variation'
UNRELATED = 'unrelated'
RELATIONS = (EXACT_REPETITION, TRANSPOSITION, INVERSION, CONTOUR_MATCH,
             VARIATION, UNRELATED)
# Labels that go beyond the four features of the difference tree.
EXTENSION_RELATIONS = (INVERSION, CONTOUR_MATCH)
PAIR_PRESETS = ('forward', 'adjacent', 'figure2')
# Other names accepted for a preset.
PAIR_PRESET_ALIASES = {'structural': 'figure2'}
# Structural pairs shown alongside the adjacent ones in the figure2 preset.
STRUCTURAL_PAIRS = ((1, 3), (1, 5), (2, 4), (6, 8))

# EXPORT
SCHEMA_VERSION = '1.0'
PAYLOAD_KINDS = ('sk_tree', 'diff_tree', 'pairwise_report',
                 'validation_report')
FORMATS = ('json', 'dot', 'text')

# CLI EXIT CODES
EXIT_OK = 0
EXIT_USAGE = 1
EXIT_PARSE = 2
EXIT_INFEASIBLE = 3
EXIT_VALIDATION = 4

# CORPUS
CORPUS_DOI = '10.5281/zenodo.5118650'
CORPUS_SIZE = 24
REPEAT_FORMS = ('ABA', 'AABB', 'AABBA')
MODES_OF_B = ('close_major_tonality', 'minor_mode', 'unverified')
UNKNOWN_TITLE = 'unknown'
# Neapolitan mandolin has four strings.
MAX_SIMULTANEOUS = 4
CORPUS_PARTS = 2
ROMAN_NUMERALS = ('I', 'II', 'III', 'IV', 'V', 'VI', 'VII', 'VIII', 'IX', 'X',
                  'XI', 'XII', 'XIII', 'XIV', 'XV', 'XVI', 'XVII', 'XVIII',
                  'XIX', 'XX', 'XXI', 'XXII', 'XXIII', 'XXIV')
# Roman or arabic piece numbers standing on their own inside a file name.
RE_PIECE_NUMBER = re.compile(
    r'(?:^|[^A-Za-z0-9])(X{0,2}(?:IX|IV|V?I{0,3})|\d{1,2})(?=$|[^A-Za-z0-9])')
MUSICXML_EXTENSIONS = ('.xml', '.musicxml')
LEADSHEET_EXTENSIONS = ('.lsht',)
