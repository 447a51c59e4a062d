#!/usr/bin/env python
import io
import json
import os
import shutil
import tempfile
import unittest

from skdiff import cli
from skdiff import constants as co

FIXTURES = os.path.join(os.path.dirname(__file__), 'fixtures')

def fixture(name):
    return os.path.join(FIXTURES, name)

BAD_PITCH = u"""<score-partwise><part id="P1"><measure number="1">
<attributes><divisions>1</divisions>
<time><beats>2</beats><beat-type>4</beat-type></time></attributes>
<harmony><root><root-step>C</root-step></root><kind>major</kind></harmony>
<note><pitch>{}</pitch><duration>2</duration></note>
</measure></part></score-partwise>"""

class TestCLI(unittest.TestCase):
    def setUp(self):
        self.directory = tempfile.mkdtemp()
    def tearDown(self):
        shutil.rmtree(self.directory)
    def out(self, name):
        return os.path.join(self.directory, name)
    def read(self, name):
        with io.open(self.out(name), encoding='utf-8') as f:
            return f.read()
    def run_cli(self, line):
        return cli.main(line.split())
    def test_no_command(self):
        self.assertEqual(cli.main([]), co.EXIT_USAGE)
    def test_unknown_option(self):
        self.assertEqual(self.run_cli('reduce {} --colour'.format(
            fixture('abac.lsht'))), co.EXIT_USAGE)
    def test_missing_file(self):
        self.assertEqual(self.run_cli('reduce {}'.format(
            self.out('missing.lsht'))), co.EXIT_USAGE)
    def test_reduce(self):
        code = self.run_cli('reduce {} --out {}'.format(
            fixture('abac.lsht'), self.out('trees.json')))
        self.assertEqual(code, co.EXIT_OK)
        docs = json.loads(self.read('trees.json'))
        self.assertEqual(len(docs), 4)
        self.assertEqual(docs[2]['kind'], 'sk_tree')
    def test_reduce_one_segment(self):
        code = self.run_cli('reduce {} --segment 3 --format text -o {}'.format(
            fixture('abac.lsht'), self.out('tree.txt')))
        self.assertEqual(code, co.EXIT_OK)
        self.assertTrue(self.read('tree.txt').startswith('Segment 3 '))
    def test_segment_out_of_range(self):
        self.assertEqual(self.run_cli('reduce {} --segment 9'.format(
            fixture('abac.lsht'))), co.EXIT_USAGE)
    def test_diff(self):
        code = self.run_cli('diff {} --left 1 --right 3 -o {}'.format(
            fixture('abac.lsht'), self.out('diff.json')))
        self.assertEqual(code, co.EXIT_OK)
        payload = json.loads(self.read('diff.json'))['payload']
        self.assertEqual(payload['root_pitch_offset'], 0)
    def test_diff_backward(self):
        self.assertEqual(self.run_cli('diff {} --left 3 --right 1'.format(
            fixture('abac.lsht'))), co.EXIT_USAGE)
    def test_parse_error(self):
        self.assertEqual(self.run_cli('reduce {}'.format(
            fixture('broken.lsht'))), co.EXIT_PARSE)
    def test_infeasible(self):
        self.assertEqual(self.run_cli('reduce {} --segment-bars 1'.format(
            fixture('five_eight.lsht'))), co.EXIT_INFEASIBLE)
    def test_musicxml(self):
        code = self.run_cli('reduce {} --segment-bars 1 --format dot -o {}'
                            .format(fixture('pickup.musicxml'),
                                    self.out('trees.dot')))
        self.assertEqual(code, co.EXIT_OK)
        self.assertEqual(self.read('trees.dot').count('digraph'), 3)
    def test_analyze_deterministic(self):
        for name in ('first.json', 'second.json'):
            code = self.run_cli('analyze {} --format json -o {}'.format(
                fixture('variation.lsht'), self.out(name)))
            self.assertEqual(code, co.EXIT_OK)
        self.assertEqual(self.read('first.json'), self.read('second.json'))
    def test_analyze_workers(self):
        self.run_cli('analyze {} --format json -o {}'.format(
            fixture('variation.lsht'), self.out('serial.json')))
        self.run_cli('analyze {} --format json --workers 4 -o {}'.format(
            fixture('variation.lsht'), self.out('threads.json')))
        self.assertEqual(self.read('serial.json'), self.read('threads.json'))
    def test_analyze_pairs(self):
        code = self.run_cli('analyze {} --pairs 1-3,2-4 -o {}'.format(
            fixture('abac.lsht'), self.out('report.txt')))
        self.assertEqual(code, co.EXIT_OK)
        self.assertIn('exact_repetition', self.read('report.txt'))
    def test_analyze_figure2(self):
        code = self.run_cli('analyze {} --pairs figure2 --format json -o {}'
                            .format(fixture('abac.lsht'),
                                    self.out('report.json')))
        self.assertEqual(code, co.EXIT_OK)
        payload = json.loads(self.read('report.json'))['payload']
        self.assertEqual(len(payload['pairs']), 5)
    def test_bad_pitch(self):
        for pitch in ('<step>H</step><octave>4</octave>', '<step>C</step>',
                      '<step>C</step><octave>11</octave>'):
            path = self.out('bad.musicxml')
            with io.open(path, 'w', encoding='utf-8') as f:
                f.write(BAD_PITCH.format(pitch))
            self.assertEqual(self.run_cli('reduce {}'.format(path)),
                             co.EXIT_PARSE)
    def test_analyze_backward_pair(self):
        self.assertEqual(self.run_cli('analyze {} --pairs 3-1'.format(
            fixture('abac.lsht'))), co.EXIT_USAGE)
    def test_validate_empty(self):
        code = self.run_cli('validate-corpus {} -o {}'.format(
            self.directory, self.out('report.txt')))
        self.assertEqual(code, co.EXIT_OK)
    def test_validate_fault(self):
        corpus_dir = os.path.join(self.directory, 'corpus')
        os.mkdir(corpus_dir)
        shutil.copy(fixture('three_four.musicxml'),
                    os.path.join(corpus_dir, 'allemande-01.musicxml'))
        code = self.run_cli('validate-corpus {} --format json -o {}'.format(
            corpus_dir, self.out('report.json')))
        self.assertEqual(code, co.EXIT_VALIDATION)
        payload = json.loads(self.read('report.json'))['payload']
        self.assertFalse(payload['passed'])
    def test_validate_no_directory(self):
        self.assertEqual(self.run_cli('validate-corpus {}'.format(
            self.out('nowhere'))), co.EXIT_USAGE)
    def test_fetch_info(self):
        code = self.run_cli('fetch-info -o {}'.format(self.out('fetch.txt')))
        self.assertEqual(code, co.EXIT_OK)
        self.assertIn(co.CORPUS_DOI, self.read('fetch.txt'))

if __name__ == '__main__':
    unittest.main()
