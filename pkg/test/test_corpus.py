#!/usr/bin/env python
import os
import shutil
import tempfile
import time
import unittest

from skdiff import analysis
from skdiff import constants as co
from skdiff import corpus
from skdiff import filetypes
from skdiff.datatypes import Meter

FIXTURES = os.path.join(os.path.dirname(__file__), 'fixtures')
CORPUS = os.environ.get('SKDIFF_CORPUS')

class TestManifest(unittest.TestCase):
    def setUp(self):
        self.manifest = corpus.load_manifest()
    def test_size(self):
        self.assertEqual(len(self.manifest), 24)
        self.assertEqual(self.manifest.source_doi, co.CORPUS_DOI)
    def test_counts(self):
        counts = self.manifest.counts()
        self.assertEqual(counts['a8_b8'], 20)
        self.assertEqual(counts['aba'], 22)
        self.assertEqual(counts['meter_2/4'], 20)
        self.assertEqual(counts['meter_3/8'], 4)
        self.assertEqual(counts['anacrusis'], 1)
    def test_exceptions(self):
        record = self.manifest.record
        self.assertEqual(record('IV').repeat_form, 'AABB')
        self.assertEqual(record('XVIII').repeat_form, 'AABBA')
        self.assertEqual(record('XI').section_a_bars, 12)
        self.assertEqual((record('XIV').section_a_bars,
                          record('XIV').section_b_bars), (4, 4))
        self.assertEqual((record('XIX').section_a_bars,
                          record('XIX').section_b_bars), (16, 24))
        self.assertEqual(record('XXI').section_b_bars, 4)
        self.assertEqual(
            sorted(x.number for x in self.manifest if x.meter == Meter(3, 8)),
            sorted(['VII', 'IX', 'XVIII', 'XIX']))
        self.assertEqual([x.number for x in self.manifest if x.has_anacrusis],
                         ['VIII'])
    def test_nothing_invented(self):
        for record in self.manifest:
            self.assertEqual(record.mode_of_b, 'unverified')
            self.assertEqual(record.title_adjective, co.UNKNOWN_TITLE)
    def test_write_then_read(self):
        directory = tempfile.mkdtemp()
        try:
            path = os.path.join(directory, 'manifest.txt')
            corpus.write_manifest(self.manifest.with_titles(
                {'I': 'The Joyful'}), path)
            again = corpus.read_manifest(path)
            self.assertEqual(again.record('I').title_adjective, 'The Joyful')
            self.assertEqual(again.counts(), self.manifest.counts())
        finally:
            shutil.rmtree(directory)
    def test_short_manifest(self):
        directory = tempfile.mkdtemp()
        try:
            path = os.path.join(directory, 'manifest.txt')
            with open(path, 'w') as f:
                f.write('doi 10.5281/zenodo.5118650\n'
                        'I 2/4 8 8 ABA unverified no - unknown\n')
            self.assertRaises(corpus.ManifestError, corpus.read_manifest, path)
        finally:
            shutil.rmtree(directory)

class TestFetchInstructions(unittest.TestCase):
    def test_doi(self):
        text = corpus.fetch_instructions()
        self.assertIn(co.CORPUS_DOI, text)
        self.assertIn('XXIV', text)
    def test_deterministic(self):
        self.assertEqual(corpus.fetch_instructions(),
                         corpus.fetch_instructions())

class TestPieceNumber(unittest.TestCase):
    def test_roman(self):
        self.assertEqual(corpus.piece_number('allemande_XIV.musicxml'), 'XIV')
    def test_arabic(self):
        self.assertEqual(corpus.piece_number('leone-07.xml'), 'VII')
    def test_none(self):
        self.assertIsNone(corpus.piece_number('notes.musicxml'))
        self.assertIsNone(corpus.piece_number('leone-31.xml'))

class TestValidation(unittest.TestCase):
    def setUp(self):
        self.manifest = corpus.load_manifest()
    def test_nothing_downloaded(self):
        report = corpus.validate_regularities(self.manifest, {})
        self.assertEqual(len(report.skipped), 24)
        self.assertTrue(report.passed)
        self.assertEqual(report.results, [])
    def test_meter_fault(self):
        parts = filetypes.MusicXML(
            os.path.join(FIXTURES, 'three_four.musicxml')).parts
        report = corpus.validate_regularities(self.manifest, {'I': parts})
        meter = [x for x in report.failures() if x.check == 'meter']
        self.assertEqual(len(meter), 1)
        self.assertEqual(meter[0].number, 'I')
        self.assertFalse(report.passed)
        self.assertEqual(len(report.skipped), 23)
        self.assertEqual(report.titles['I'], 'The Joyful')
        self.assertEqual(report.tallies['meter_2/4'], 0)
        self.assertEqual(report.expected['meter_2/4'], 1)
    def test_parse_error_recorded(self):
        report = corpus.validate_regularities(self.manifest, {},
                                              {'II': 'broken'})
        self.assertEqual([(x.number, x.check) for x in report.failures()],
                         [('II', 'parse')])
    def test_find_files(self):
        directory = tempfile.mkdtemp()
        try:
            shutil.copy(os.path.join(FIXTURES, 'duo.musicxml'),
                        os.path.join(directory, 'allemande_III.musicxml'))
            found = corpus.find_piece_files(directory, self.manifest)
            self.assertEqual(list(found), ['III'])
            pieces, errors = corpus.load_corpus(directory, self.manifest)
            self.assertEqual(len(pieces['III']), 2)
            self.assertEqual(errors, {})
        finally:
            shutil.rmtree(directory)
    def test_format(self):
        report = corpus.validate_regularities(self.manifest, {})
        lines = report.format()
        self.assertTrue(any(x.startswith('Skipped:') for x in lines))

@unittest.skipUnless(CORPUS, 'SKDIFF_CORPUS is not set')
class TestDownloadedCorpus(unittest.TestCase):
    def setUp(self):
        self.manifest = corpus.load_manifest()
        self.pieces, errors = corpus.load_corpus(CORPUS, self.manifest)
        self.report = corpus.validate_regularities(self.manifest, self.pieces,
                                                   errors)
    def test_complete(self):
        self.assertEqual(self.report.skipped, [])
    def test_tallies(self):
        self.assertEqual(self.report.tallies['a8_b8'], 20)
        self.assertEqual(self.report.tallies['aba'], 22)
        self.assertEqual(self.report.tallies['meter_2/4'], 20)
        self.assertEqual(self.report.tallies['major'], 24)
    def test_parts(self):
        failures = [x for x in self.report.failures()
                    if x.check in ('parts', 'simultaneous')]
        self.assertEqual(failures, [])
    def test_analyze_all(self):
        start = time.time()
        for number, parts in self.pieces.items():
            result = analysis.analyze_melody(filetypes.extract_lead(parts))
            self.assertTrue(result.diffs, number)
        self.assertLess(time.time() - start, 60)

if __name__ == '__main__':
    unittest.main()
