#!/usr/bin/env python
import json
import os
import unittest

from skdiff import analysis
from skdiff import constants as co
from skdiff import corpus
from skdiff import difftree
from skdiff import export
from skdiff import filetypes
from skdiff import segment as seg
from skdiff import sktree

FIXTURES = os.path.join(os.path.dirname(__file__), 'fixtures')

def segments(chords, notes, bars=1):
    m = filetypes.parse_leadsheet_text(
        'key C major\nmeter 2/4\nchords {}\nnotes {}\n'.format(chords, notes))
    return seg.segment_melody(m, bars)

class TestSkTreeJSON(unittest.TestCase):
    def setUp(self):
        self.t = sktree.build_sk_tree(segments(
            '| C | C |', 'C4:q D4:e Eb4:e F#4:q. G4:e', bars=2)[0])
    def test_round_trip(self):
        again = export.import_sk_tree_json(export.export_sk_tree_json(self.t))
        self.assertEqual(again, self.t)
        self.assertEqual(again.windows, self.t.windows)
    def test_exact_durations(self):
        payload = json.loads(export.export_sk_tree_json(self.t))['payload']
        self.assertEqual(payload['span'], '1/1')
        self.assertEqual(payload['grid_unit'], '1/8')
        self.assertEqual(payload['segment'], 1)
    def test_envelope(self):
        doc = json.loads(export.export_sk_tree_json(self.t))
        self.assertEqual(doc['schema_version'], co.SCHEMA_VERSION)
        self.assertEqual(doc['kind'], 'sk_tree')
    def test_stable(self):
        self.assertEqual(export.export_sk_tree_json(self.t),
                         export.export_sk_tree_json(self.t))
    def test_wrong_kind(self):
        text = export.export_sk_tree_json(self.t)
        self.assertRaises(export.SchemaError, export.import_diff_tree_json,
                          text)
    def test_newer_major(self):
        doc = json.loads(export.export_sk_tree_json(self.t))
        doc['schema_version'] = '2.0'
        self.assertRaises(export.SchemaError, export.import_sk_tree_json,
                          json.dumps(doc))
    def test_inexact_duration(self):
        doc = json.loads(export.export_sk_tree_json(self.t))
        doc['payload']['root']['duration'] = 'a lot'
        self.assertRaises(export.SchemaError, export.import_sk_tree_json,
                          json.dumps(doc))

class TestDiffTreeExport(unittest.TestCase):
    def setUp(self):
        self.d = difftree.compare_segments(
            *segments('| C | C |', 'C4:q D4:q C4:q E4:q'))
    def test_round_trip(self):
        again = export.import_diff_tree_json(export.export_diff_tree_json(self.d))
        self.assertEqual(again, self.d)
    def test_absent_features(self):
        payload = export.diff_tree_to_dict(self.d)
        leaf = payload['root']['children'][0]
        self.assertIsNone(leaf['features']['dir'])
        self.assertEqual(payload['left_segment'], 1)
        self.assertEqual(payload['right_segment'], 2)
    def test_dot(self):
        dot = export.export_diff_tree_dot(self.d)
        self.assertTrue(dot.startswith('digraph'))
        self.assertEqual(dot.count('[label='), 3)
        self.assertEqual(dot.count(' -> '), 2)
        self.assertIn('Dir: ' + co.ABSENT, dot)
    def test_max_depth(self):
        dot = export.export_diff_tree_dot(self.d, max_depth=1)
        self.assertEqual(dot.count('[label='), 1)
        self.assertNotIn(' -> ', dot)
    def test_text(self):
        lines = export.format_diff_tree(self.d).splitlines()
        self.assertEqual(len(lines), 4)
        self.assertIn('int=wide', lines[1])
        self.assertIn('dir=' + co.ABSENT, lines[2])

class TestSkTreeText(unittest.TestCase):
    def test_dot(self):
        t = sktree.build_sk_tree(segments('| G |', 'F4:q G4:q')[0])
        dot = export.export_sk_tree_dot(t)
        self.assertEqual(dot.count('[label='), 3)
        self.assertIn('G4\\nR', dot)
    def test_text(self):
        t = sktree.build_sk_tree(segments('| G |', 'F4:q G4:q')[0])
        text = export.format_sk_tree(t)
        self.assertIn('G4 0/1+1/2 R (level 1)', text)

class TestReports(unittest.TestCase):
    def test_pairwise(self):
        m = analysis.analyze_melody(filetypes.LeadSheet(
            os.path.join(FIXTURES, 'abac.lsht')).melody)
        report = analysis.structure_report(m)
        text = export.export_pairwise_report_json(m, report)
        payload = export.open_document(text, 'pairwise_report')
        self.assertEqual(len(payload['pairs']), 6)
        self.assertEqual(payload['groups'], [[1, 3], [2], [4]])
        self.assertEqual(payload['pairs'][1]['relation'],
                         co.EXACT_REPETITION)
        self.assertEqual(text, export.export_pairwise_report_json(m, report))
    def test_validation(self):
        report = corpus.validate_regularities(corpus.load_manifest(), {})
        payload = export.open_document(
            export.export_validation_report_json(report),
            'validation_report')
        self.assertTrue(payload['passed'])
        self.assertEqual(len(payload['skipped']), 24)
    def test_unknown_kind(self):
        self.assertRaises(export.SchemaError, export.document, 'melody', {})

if __name__ == '__main__':
    unittest.main()
