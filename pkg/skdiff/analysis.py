"""
Pairwise comparison of the segments of one piece.

Every segment gets its Sk_tree once, then Diff_trees are built for forward
pairs of segments (a preset, an explicit list or all of them). Each Diff_tree
is classified and the labels are gathered into a structure report: strict
groups of repeated or transposed segments, families that also take in
variations, candidate phrase boundaries and feature tallies per level.
"""
from __future__ import absolute_import
from __future__ import division

import itertools
import logging
from collections import OrderedDict, namedtuple
from concurrent.futures import ThreadPoolExecutor

import numpy as np

from skdiff import constants as co
from skdiff import difftree
from skdiff import segment as seg
from skdiff import sktree

logger = logging.getLogger(__name__)

class AnalysisError(Exception):
    pass

# PAIRS

def forward_pairs(numbers):
    return [(i, j) for i, j in itertools.combinations(sorted(numbers), 2)]

def preset_pairs(preset, n):
    """
    1-based pairs of a named preset for a piece of `n` segments.

    forward    : every pair (i, j) with i < j.
    adjacent   : (1, 2), (2, 3), ...
    figure2    : adjacent pairs plus (1, 3), (1, 5), (2, 4) and (6, 8), as
                 far as the piece is long enough. Also called structural.
    """
    preset = co.PAIR_PRESET_ALIASES.get(preset, preset)
    if preset == 'forward':
        return forward_pairs(range(1, n + 1))
    adjacent = [(i, i + 1) for i in range(1, n)]
    if preset == 'adjacent':
        return adjacent
    if preset == 'figure2':
        extra = [x for x in co.STRUCTURAL_PAIRS if x[1] <= n]
        return sorted(set(adjacent) | set(extra))
    raise AnalysisError('Unknown pair preset {!r}; use one of {}.'.format(
        preset, ', '.join(co.PAIR_PRESETS)))

def parse_pairs(text):
    """
    Reads '1-2,1-3' or '1:2 1:3' into [(1, 2), (1, 3)].
    """
    pairs = []
    for chunk in text.replace(',', ' ').split():
        try:
            left, right = chunk.replace(':', '-').split('-')
            pairs.append((int(left), int(right)))
        except ValueError:
            raise AnalysisError('Not a segment pair: {!r}'.format(chunk))
    return pairs

def resolve_pairs(pairs, n):
    """
    Turns a preset name, a pair string or a list of 1-based pairs into
    checked 1-based pairs.
    """
    if pairs is None:
        pairs = 'forward'
    if isinstance(pairs, str):
        if pairs in co.PAIR_PRESETS or pairs in co.PAIR_PRESET_ALIASES:
            return preset_pairs(pairs, n)
        pairs = parse_pairs(pairs)
    checked = []
    for left, right in pairs:
        if left >= right:
            raise AnalysisError(
                'Pair ({}, {}) goes backward; comparisons only go '
                'forward.'.format(left, right))
        if left < 1 or right > n:
            raise AnalysisError(
                'Pair ({}, {}) is outside segments 1 to {}.'.format(
                    left, right, n))
        if (left, right) not in checked:
            checked.append((left, right))
    return checked

# MATRIX

class PairwiseMatrix(object):
    """
    Diff_trees of one piece.

    Attributes
    ----------
    piece : string or None
    segments : list of `segment.Segment`
               Every segment of the piece, compared or not.
    trees : dict of int: `sktree.SkTree`
            Keyed by 0-based segment index.
    diffs : OrderedDict of (int, int): `difftree.DiffTree`
            Keyed by 0-based (left, right).
    excluded : list of int
               0-based indices left out (partial segments).
    """
    __slots__ = ['piece', 'segments', 'trees', 'diffs', 'excluded']
    def __init__(self, piece=None, segments=None, trees=None, diffs=None,
                 excluded=None):
        self.piece = piece
        self.segments = segments or []
        self.trees = trees or {}
        self.diffs = diffs or OrderedDict()
        self.excluded = excluded or []
    def __repr__(self):
        return 'PairwiseMatrix({}, {} segments, {} diffs)'.format(
            self.piece, self.n, len(self.diffs))
    @property
    def n(self):
        return len(self.segments)
    @property
    def compared(self):
        """
        0-based indices that take part in at least one pair.
        """
        return sorted(set(x for pair in self.diffs for x in pair))
    @property
    def complete(self):
        usable = self.n - len(self.excluded)
        return len(self.diffs) == usable * (usable - 1) // 2
    def get(self, i, j):
        """
        Diff_tree between 1-based segments `i` and `j`.
        """
        return self.diffs[(i - 1, j - 1)]
    def pairs(self):
        return [(i + 1, j + 1) for i, j in self.diffs]

def pairwise_analysis(segments, pairs=None, include_partial=False,
                      within_sections=False, workers=None, piece=None):
    """
    Builds Sk_trees once per segment and Diff_trees for forward pairs.

    Arguments
    ---------
    segments : list of `segment.Segment`
    pairs : string, list of (int, int) or None
            Preset name, pair string or 1-based pairs. All forward pairs by
            default.
    include_partial : bool
                      Also compare the trailing partial segment. Pairs with
                      mismatched spans are skipped with a warning.
    within_sections : bool
                      Only keep pairs whose segments share a section.
    workers : int or None
              Thread pool size. Results don't depend on it.

    Returns
    -------
    `PairwiseMatrix`
    """
    segments = list(segments)
    excluded = [x.index for x in segments
                if x.partial and not include_partial]
    usable = [x for x in segments if x.index not in excluded]
    if len(usable) < 2:
        raise AnalysisError(
            'Need at least two comparable segments, found {}.'.format(
                len(usable)))
    by_index = dict((x.index, x) for x in segments)
    numbers = [x.index + 1 for x in segments]
    wanted = []
    for left, right in resolve_pairs(pairs, max(numbers)):
        a, b = by_index.get(left - 1), by_index.get(right - 1)
        if a is None or b is None:
            raise AnalysisError('Pair ({}, {}) names a missing segment.'.format(
                left, right))
        if a.index in excluded or b.index in excluded:
            logger.log(15, '  -- Skipping pair ({}, {}): partial segment.'.format(
                left, right))
            continue
        if a.span != b.span:
            logger.warning('Skipping pair ({}, {}): spans differ.'.format(
                left, right))
            continue
        if within_sections and a.section != b.section:
            continue
        wanted.append((a.index, b.index))
    needed = sorted(set(x for pair in wanted for x in pair))
    built = sktree.build_sk_trees([by_index[x] for x in needed], workers)
    trees = dict(zip(needed, built))
    compare = lambda pair: difftree.build_diff_tree(trees[pair[0]],
                                                    trees[pair[1]])
    if workers and workers > 1:
        with ThreadPoolExecutor(max_workers=workers) as executor:
            results = list(executor.map(compare, wanted))
    else:
        results = [compare(x) for x in wanted]
    diffs = OrderedDict(zip(wanted, results))
    logger.log(15, '  -- {}: {} tree(s), {} diff(s).'.format(
        piece or 'piece', len(trees), len(diffs)))
    return PairwiseMatrix(piece=piece, segments=segments, trees=trees,
                          diffs=diffs, excluded=excluded)

def analyze_melody(m, bars_per_segment=co.DEFAULT_SEGMENT_BARS, **kwargs):
    """
    Segments a melody and runs `pairwise_analysis` on it.
    """
    kwargs.setdefault('piece', m.name)
    return pairwise_analysis(seg.segment_melody(m, bars_per_segment),
                             **kwargs)

# CLASSIFICATION

class RelationLabel(namedtuple('RelationLabel', [
        'kind', 'first_difference', 'summary', 'root_pitch_offset'])):
    """
    Classification of one Diff_tree.

    Attributes
    ----------
    kind : string
           One of `constants.RELATIONS`.
    first_difference : int or None
                       1-based level holding the first feature that isn't
                       same. None when every feature is same.
    summary : `difftree.DiffSummary`
              Feature tallies backing the label.
    root_pitch_offset : int
    """
    __slots__ = ()
    @property
    def extension(self):
        return self.kind in co.EXTENSION_RELATIONS
    @property
    def strict(self):
        return self.kind in (co.EXACT_REPETITION, co.TRANSPOSITION)

def variation_threshold(d, variation_levels=None):
    """
    Number of top levels that have to match for a variation.
    """
    if variation_levels is not None:
        return variation_levels
    levels = d.source_levels or d.depth
    return max(1, levels // 2)

def classify(d, variation_levels=None):
    """
    Labels a Diff_tree. The first matching rule wins:

    1. every feature same: exact_repetition, or transposition when the roots
       differ in pitch,
    2. sk, ch and int same everywhere while every dir differs: inversion,
    3. sk, ch and dir same everywhere: contour_match,
    4. the top levels all same: variation,
    5. unrelated.
    """
    summary = difftree.diff_depth_and_counts(d)
    levels = d.levels()
    first_difference = None
    for depth, nodes in enumerate(levels, 1):
        if not all(x.features.all_same for x in nodes):
            first_difference = depth
            break
    features = [x.features for x in d.nodes()]
    outline_same = all(x.sk == co.SAME and x.ch == co.SAME for x in features)
    present = [x for x in features if x.dir is not None]
    if first_difference is None:
        kind = co.EXACT_REPETITION if d.root_pitch_offset == 0 \
            else co.TRANSPOSITION
    elif outline_same and present and \
            all(x.dir == co.DIFF and x.int_width == co.SAME for x in present):
        kind = co.INVERSION
    elif outline_same and all(x.dir == co.SAME for x in present):
        kind = co.CONTOUR_MATCH
    elif first_difference > variation_threshold(d, variation_levels):
        kind = co.VARIATION
    else:
        kind = co.UNRELATED
    logger.log(5, '  -- {}: {}'.format(d, kind))
    return RelationLabel(kind, first_difference, summary, d.root_pitch_offset)

def classify_all(m, variation_levels=None):
    """
    Labels of every pair in a matrix, keyed by 1-based pairs.
    """
    return OrderedDict(
        ((i + 1, j + 1), classify(d, variation_levels))
        for (i, j), d in m.diffs.items())

# STRUCTURE

class _Groups(object):
    """
    Union-find over segment numbers.
    """
    def __init__(self, members):
        self.parent = dict((x, x) for x in members)
    def find(self, x):
        while self.parent[x] != x:
            self.parent[x] = self.parent[self.parent[x]]
            x = self.parent[x]
        return x
    def join(self, a, b):
        a, b = self.find(a), self.find(b)
        if a != b:
            self.parent[max(a, b)] = min(a, b)
    def classes(self):
        found = OrderedDict()
        for x in sorted(self.parent):
            found.setdefault(self.find(x), []).append(x)
        return sorted(found.values(), key=lambda x: x[0])

Family = namedtuple('Family', ['members', 'variations'])
Family.__doc__ = """
Segments related by repetition, transposition or variation. `variations`
holds the members outside the strict group of the family's first member.
"""

Boundary = namedtuple('Boundary', ['segment', 'bar'])

class StructureReport(namedtuple('StructureReport', [
        'piece', 'labels', 'groups', 'families', 'boundaries',
        'level_tallies', 'relation_matrix', 'warnings'])):
    """
    Everything `structure_report` found out about a piece.

    Attributes
    ----------
    labels : OrderedDict of (int, int): `RelationLabel`
             Keyed by 1-based pairs.
    groups : list of list of int
             Strict classes (exact repetition or transposition), 1-based.
    families : list of `Family`
    boundaries : list of `Boundary`
                 Candidate phrase starts with their 1-based bar numbers.
    level_tallies : numpy.ndarray
                    Rows are 1-based levels minus one, columns follow
                    `tally_columns()`.
    relation_matrix : numpy.ndarray
                      n x n, index into `constants.RELATIONS` or -1.
    warnings : list of string
    """
    __slots__ = ()
    def relation(self, i, j):
        label = self.labels.get((i, j))
        return None if label is None else label.kind

def tally_columns():
    """
    (feature, value) pairs used as columns of the level tallies.
    """
    columns = []
    for feature in co.FEATURES:
        values = co.FEATURE_VALUES[feature]
        if feature in ('dir', 'int'):
            values = values + (co.ABSENT,)
        columns.extend((feature, x) for x in values)
    return columns

def level_tallies(summaries):
    """
    Sums the per level tallies of many Diff_trees into one array.
    """
    columns = tally_columns()
    depth = max([len(x.tallies) for x in summaries] or [0])
    table = np.zeros((depth, len(columns)), dtype=int)
    for summary in summaries:
        for level, tally in summary.tallies.items():
            table[level - 1] += [tally[f][v] for f, v in columns]
    return table

def relation_matrix(labels, n):
    matrix = np.full((n, n), -1, dtype=int)
    for (i, j), label in labels.items():
        matrix[i - 1, j - 1] = co.RELATIONS.index(label.kind)
    return matrix

def structure_report(m, labels=None, variation_levels=None):
    """
    Groups segments, finds phrase boundary candidates and sums tallies.

    A segment starts a recurrence when some earlier segment of its family
    exists whose predecessor isn't in the family of this segment's
    predecessor. The first segment always counts as a boundary.
    """
    if labels is None:
        labels = classify_all(m, variation_levels)
    numbers = [x + 1 for x in range(m.n) if x not in m.excluded]
    strict = _Groups(numbers)
    loose = _Groups(numbers)
    for (i, j), label in labels.items():
        if label.strict:
            strict.join(i, j)
            loose.join(i, j)
        elif label.kind == co.VARIATION:
            loose.join(i, j)
    groups = strict.classes()
    families = []
    for members in loose.classes():
        principal = strict.find(members[0])
        families.append(Family(
            members, [x for x in members if strict.find(x) != principal]))
    warnings = _check_transitivity(labels)
    boundaries = []
    for k in numbers:
        if k == numbers[0] or _starts_recurrence(k, numbers, loose):
            boundaries.append(Boundary(k, m.segments[k - 1].bar + 1))
    report = StructureReport(
        piece=m.piece,
        labels=labels,
        groups=groups,
        families=families,
        boundaries=boundaries,
        level_tallies=level_tallies([x.summary for x in labels.values()]),
        relation_matrix=relation_matrix(labels, m.n),
        warnings=warnings)
    logger.log(15, '  -- {}: {} group(s), {} famil{}.'.format(
        m.piece or 'piece', len(groups), len(families),
        'y' if len(families) == 1 else 'ies'))
    return report

def _starts_recurrence(k, numbers, families):
    if k - 1 not in numbers:
        return False
    for j in numbers:
        if j >= k:
            break
        if families.find(j) != families.find(k):
            continue
        if j - 1 not in numbers:
            return True
        if families.find(j - 1) != families.find(k - 1):
            return True
    return False

def _check_transitivity(labels):
    warnings = []
    strict = set(pair for pair, label in labels.items() if label.strict)
    for (i, j), (x, k) in itertools.permutations(sorted(strict), 2):
        if j != x or (i, k) not in labels:
            continue
        if (i, k) not in strict:
            message = (
                'Segments {} and {} match, as do {} and {}, but {} and {} are '
                '{}.'.format(i, j, j, k, i, k, labels[(i, k)].kind))
            logger.warning(message)
            warnings.append(message)
    return warnings

# REPORTS

def format_report(report):
    """
    Plain text rendering of a structure report.
    """
    strings = []
    strings.append('--' + ' Pair '.ljust(10, '-') +
                   '--' + ' Relation '.ljust(18, '-') +
                   '--' + ' Offset '.center(8, '-') +
                   '--' + ' First diff '.center(12, '-') + '--')
    for (i, j), label in report.labels.items():
        strings.append('  {:<10}  {:<18}  {:>8}  {:>12}'.format(
            '{}-{}'.format(i, j),
            label.kind + ('*' if label.extension else ''),
            '{:+d}'.format(label.root_pitch_offset),
            co.ABSENT if label.first_difference is None
            else label.first_difference))
    strings.append('-' * 58)
    strings.append('{:<20} {}'.format(
        'Groups:', ' '.join(_format_members(x) for x in report.groups)))
    strings.append('{:<20} {}'.format('Families:', ' '.join(
        _format_members(x.members, x.variations) for x in report.families)))
    strings.append('{:<20} {}'.format('Phrase starts:', ' '.join(
        '{}(bar {})'.format(x.segment, x.bar) for x in report.boundaries)))
    strings.append('-' * 58)
    columns = tally_columns()
    strings.append('--' + ' Level '.ljust(7, '-') + ''.join(
        '--' + ' {}:{} '.format(f, v).center(11, '-') for f, v in columns))
    for level, row in enumerate(report.level_tallies, 1):
        strings.append('  {:<7}'.format(level) + ''.join(
            '  {:>11d}'.format(x) for x in row))
    if any(x.extension for x in report.labels.values()):
        strings.append('* extension label')
    for warning in report.warnings:
        strings.append('WARNING: {}'.format(warning))
    return strings

def _format_members(members, variations=()):
    return '{' + ','.join(
        '{}{}'.format(x, "'" if x in variations else '') for x in members) + '}'
