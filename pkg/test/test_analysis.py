#!/usr/bin/env python
import os
import random
import unittest

from skdiff import analysis
from skdiff import constants as co
from skdiff import difftree
from skdiff import filetypes
from skdiff import segment as seg
from skdiff.datatypes import Meter

from test.test_difftree import random_melody

FIXTURES = os.path.join(os.path.dirname(__file__), 'fixtures')

def melody(name):
    return filetypes.LeadSheet(os.path.join(FIXTURES, name)).melody

class TestPairs(unittest.TestCase):
    def test_forward_count(self):
        for n in range(2, 9):
            self.assertEqual(len(analysis.preset_pairs('forward', n)),
                             n * (n - 1) // 2)
    def test_adjacent(self):
        self.assertEqual(analysis.preset_pairs('adjacent', 4),
                         [(1, 2), (2, 3), (3, 4)])
    def test_figure2(self):
        self.assertEqual(len(analysis.preset_pairs('figure2', 8)), 11)
        self.assertEqual(analysis.preset_pairs('figure2', 4),
                         [(1, 2), (1, 3), (2, 3), (2, 4), (3, 4)])
    def test_structural_alias(self):
        self.assertEqual(analysis.preset_pairs('structural', 8),
                         analysis.preset_pairs('figure2', 8))
        self.assertEqual(analysis.resolve_pairs('structural', 4),
                         analysis.preset_pairs('figure2', 4))
    def test_parse(self):
        self.assertEqual(analysis.resolve_pairs('1-3, 2:4', 4),
                         [(1, 3), (2, 4)])
    def test_backward(self):
        self.assertRaises(analysis.AnalysisError, analysis.resolve_pairs,
                          '3-1', 4)
    def test_out_of_range(self):
        self.assertRaises(analysis.AnalysisError, analysis.resolve_pairs,
                          [(1, 5)], 4)
    def test_unknown_preset(self):
        self.assertRaises(analysis.AnalysisError, analysis.preset_pairs,
                          'backward', 4)

class TestRepetition(unittest.TestCase):
    """
    A B A C.
    """
    def setUp(self):
        self.m = analysis.analyze_melody(melody('abac.lsht'))
        self.report = analysis.structure_report(self.m)
    def test_all_pairs(self):
        self.assertEqual(len(self.m.diffs), 6)
        self.assertTrue(self.m.complete)
        self.assertEqual(self.m.piece, 'A B A C')
    def test_exact(self):
        self.assertEqual(self.report.relation(1, 3), co.EXACT_REPETITION)
        self.assertNotEqual(self.report.relation(1, 2), co.EXACT_REPETITION)
    def test_groups(self):
        self.assertEqual(self.report.groups, [[1, 3], [2], [4]])
    def test_boundaries(self):
        self.assertEqual([(x.segment, x.bar) for x in self.report.boundaries],
                         [(1, 1), (3, 5)])
    def test_relation_matrix(self):
        matrix = self.report.relation_matrix
        self.assertEqual(matrix.shape, (4, 4))
        self.assertEqual(matrix[0, 2], co.RELATIONS.index(co.EXACT_REPETITION))
        self.assertEqual(matrix[2, 0], -1)
    def test_level_tallies(self):
        tallies = self.report.level_tallies
        self.assertEqual(tallies.shape[0], 3)
        self.assertEqual(tallies[0].sum(), 6 * len(co.FEATURES))
    def test_within_sections(self):
        m = analysis.analyze_melody(melody('abac.lsht'), within_sections=True)
        self.assertEqual(m.pairs(), [(1, 2), (3, 4)])
    def test_format(self):
        lines = analysis.format_report(self.report)
        self.assertTrue(any(x.startswith('  1-3 ') for x in lines))
        self.assertTrue(any('{1,3}' in x for x in lines))

class TestVariation(unittest.TestCase):
    """
    A A' B A.
    """
    def setUp(self):
        self.m = analysis.analyze_melody(melody('variation.lsht'))
        self.report = analysis.structure_report(self.m)
    def test_labels(self):
        self.assertEqual(self.report.relation(1, 4), co.EXACT_REPETITION)
        self.assertEqual(self.report.relation(1, 2), co.VARIATION)
        self.assertEqual(self.report.relation(2, 4), co.VARIATION)
        self.assertEqual(self.report.relation(1, 3), co.UNRELATED)
    def test_first_difference(self):
        self.assertEqual(self.report.labels[(1, 2)].first_difference, 2)
    def test_family(self):
        families = [x for x in self.report.families if len(x.members) > 1]
        self.assertEqual(len(families), 1)
        self.assertEqual(families[0].members, [1, 2, 4])
        self.assertEqual(families[0].variations, [2])
    def test_strict_threshold(self):
        report = analysis.structure_report(self.m, variation_levels=2)
        self.assertEqual(report.relation(1, 2), co.UNRELATED)
    def test_no_warnings(self):
        self.assertEqual(self.report.warnings, [])

class TestTransposition(unittest.TestCase):
    def setUp(self):
        self.m = analysis.analyze_melody(melody('transposed.lsht'))
        self.report = analysis.structure_report(self.m)
    def test_labels(self):
        for pair in [(1, 2), (1, 3), (2, 3)]:
            self.assertEqual(self.report.relation(*pair), co.TRANSPOSITION)
        self.assertEqual(self.report.labels[(2, 3)].root_pitch_offset, -12)
        self.assertEqual(self.report.groups, [[1, 2, 3]])

class TestExtensions(unittest.TestCase):
    def test_inversion(self):
        m = filetypes.parse_leadsheet_text(
            'key C major\nmeter 2/4\nchords | C | C |\n'
            'notes C4:q E4:q C4:q G#3:q\n')
        report = analysis.structure_report(
            analysis.analyze_melody(m, bars_per_segment=1))
        label = report.labels[(1, 2)]
        self.assertEqual(label.kind, co.INVERSION)
        self.assertTrue(label.extension)
    def test_contour(self):
        m = filetypes.parse_leadsheet_text(
            'key C major\nmeter 2/4\nchords | C | C |\n'
            'notes C4:q E4:q C4:q G4:q\n')
        report = analysis.structure_report(
            analysis.analyze_melody(m, bars_per_segment=1))
        self.assertEqual(report.relation(1, 2), co.CONTOUR_MATCH)

class TestRandomSegments(unittest.TestCase):
    def test_repeated_and_transposed(self):
        rng = random.Random(3)
        for _ in range(60):
            meter = rng.choice([Meter(2, 4), Meter(3, 8)])
            m = random_melody(rng, meter, 2)
            first = seg.segment_melody(m)[0]
            again = first._replace(index=1)
            label = analysis.classify(difftree.compare_segments(first, again))
            self.assertEqual(label.kind, co.EXACT_REPETITION)
            self.assertIsNone(label.first_difference)
            k = rng.choice([x for x in range(-7, 8) if x])
            moved = seg.segment_melody(m.transpose(k))[0]._replace(index=1)
            label = analysis.classify(difftree.compare_segments(first, moved))
            self.assertEqual(label.kind, co.TRANSPOSITION)
            self.assertEqual(label.root_pitch_offset, k)

class TestPartial(unittest.TestCase):
    def setUp(self):
        text = ('key C major\nmeter 2/4\nchords | C | C | C |\n'
                'notes C4:q D4:q E4:q G4:q C4:h\n')
        self.segments = seg.segment_melody(
            filetypes.parse_leadsheet_text(text))
    def test_too_few(self):
        self.assertRaises(analysis.AnalysisError, analysis.pairwise_analysis,
                          self.segments)
    def test_mismatched_spans_skipped(self):
        m = analysis.pairwise_analysis(self.segments, include_partial=True)
        self.assertEqual(m.pairs(), [])

if __name__ == '__main__':
    unittest.main()
