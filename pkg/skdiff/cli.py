#!/usr/bin/env python
"""
Builds Sk_trees and Diff_trees of lead-sheet melodies from the command line.

  reduce           Sk_trees of one or every segment.
  diff             Diff_tree between two segments, earlier one first.
  analyze          Pairwise report over the segments of a piece.
  validate-corpus  Checks a downloaded allemande corpus against the manifest.
  fetch-info       Where to get the corpus.

Inputs are MusicXML (.xml, .musicxml) or lead sheets (.lsht). Segments are
numbered from 1. Exit codes: 0 success, 1 usage, 2 unreadable input,
3 analysis not possible, 4 corpus validation failures.
"""
from __future__ import absolute_import
from __future__ import division
from __future__ import print_function

import argparse
import io
import logging
import logging.config
import os
import sys

from skdiff import analysis
from skdiff import constants as co
from skdiff import corpus
from skdiff import datatypes
from skdiff import difftree
from skdiff import export
from skdiff import filetypes
from skdiff import segment as seg
from skdiff import sktree

logger = logging.getLogger(__name__)

class UsageError(Exception):
    pass

# Exceptions raised by the pipeline and the exit code each one maps to.
PARSE_ERRORS = (filetypes.MusicXMLError, filetypes.LeadSheetError,
                datatypes.MelodyError, corpus.ManifestError)
INFEASIBLE_ERRORS = (seg.SegmentError, seg.GridError, sktree.ReductionError,
                     difftree.DiffError, analysis.AnalysisError)

class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise UsageError('{}: {}'.format(self.prog, message))

def main(args):
    """
    Runs one subcommand and returns its exit code.
    """
    try:
        parser = return_cli_parser()
        opts = parser.parse_args(args)
        set_verbosity(opts.verbose)
        return opts.func(opts)
    except UsageError as e:
        return _fail(co.EXIT_USAGE, e)
    except filetypes.FileTypeError as e:
        return _fail(co.EXIT_USAGE, e)
    except PARSE_ERRORS as e:
        return _fail(co.EXIT_PARSE, e)
    except INFEASIBLE_ERRORS as e:
        return _fail(co.EXIT_INFEASIBLE, e)

def _fail(code, error):
    logger.log(10, '  -- Exiting with {}.'.format(code))
    print('error: {}'.format(error), file=sys.stderr)
    return code

def set_verbosity(count):
    """
    Lowers the console threshold: -v progress, -vv detail, -vvv everything.
    """
    if not count:
        return
    level = {1: 15, 2: 5}.get(count, 1)
    for handler in logging.getLogger().handlers:
        handler.setLevel(level)

def _emit(text, out=None):
    if out:
        with io.open(out, 'w', encoding='utf-8') as f:
            f.write(text)
        logger.log(15, '  -- Wrote {}.'.format(out))
    else:
        sys.stdout.write(text)

def _melody(opts):
    if not os.path.isfile(opts.input):
        raise UsageError('No such file: {}'.format(opts.input))
    try:
        return filetypes.load_melody(opts.input, opts.part - 1, opts.pickup)
    except ValueError as e:
        raise UsageError(str(e))

def _segments(opts):
    segments = seg.segment_melody(_melody(opts), opts.segment_bars)
    logger.log(15, '  -- {} segment(s) of {} bar(s).'.format(
        len(segments), opts.segment_bars))
    return segments

def _pick(segments, number, flag):
    if not 1 <= number <= len(segments):
        raise UsageError('{} {} is outside segments 1 to {}.'.format(
            flag, number, len(segments)))
    return segments[number - 1]

def run_reduce(opts):
    segments = _segments(opts)
    if opts.segment is not None:
        segments = [_pick(segments, opts.segment, '--segment')]
    trees = sktree.build_sk_trees(segments, opts.workers)
    if opts.format == 'json':
        docs = [export.document('sk_tree', export.sk_tree_to_dict(x))
                for x in trees]
        text = export.dumps(docs[0] if opts.segment is not None else docs)
    elif opts.format == 'dot':
        text = ''.join(export.export_sk_tree_dot(x, opts.max_depth)
                       for x in trees)
    else:
        text = ''.join(export.format_sk_tree(x) for x in trees)
    _emit(text, opts.out)
    return co.EXIT_OK

def run_diff(opts):
    if opts.left >= opts.right:
        raise UsageError(
            'Segments are only compared going forward; --left ({}) must come '
            'before --right ({}).'.format(opts.left, opts.right))
    segments = _segments(opts)
    left = _pick(segments, opts.left, '--left')
    right = _pick(segments, opts.right, '--right')
    d = difftree.compare_segments(left, right)
    if opts.format == 'json':
        text = export.export_diff_tree_json(d)
    elif opts.format == 'dot':
        text = export.export_diff_tree_dot(d, opts.max_depth)
    else:
        text = export.format_diff_tree(d, opts.max_depth)
    _emit(text, opts.out)
    return co.EXIT_OK

def run_analyze(opts):
    melody = _melody(opts)
    segments = seg.segment_melody(melody, opts.segment_bars)
    try:
        pairs = analysis.resolve_pairs(opts.pairs, len(segments))
    except analysis.AnalysisError as e:
        raise UsageError(str(e))
    m = analysis.pairwise_analysis(
        segments, pairs=pairs, include_partial=opts.include_partial,
        within_sections=opts.within_sections, workers=opts.workers,
        piece=melody.name or os.path.basename(opts.input))
    report = analysis.structure_report(
        m, variation_levels=opts.variation_levels)
    if opts.format == 'json':
        text = export.export_pairwise_report_json(m, report)
    elif opts.format == 'dot':
        text = export.export_pairwise_report_dot(m, opts.max_depth)
    else:
        text = '\n'.join(analysis.format_report(report)) + '\n'
    _emit(text, opts.out)
    return co.EXIT_OK

def run_validate_corpus(opts):
    if not os.path.isdir(opts.directory):
        raise UsageError('No such directory: {}'.format(opts.directory))
    manifest = corpus.load_manifest(opts.manifest)
    pieces, errors = corpus.load_corpus(opts.directory, manifest)
    report = corpus.validate_regularities(manifest, pieces, errors)
    if opts.write_manifest:
        corpus.write_manifest(manifest.with_titles(report.titles),
                              opts.write_manifest)
    if opts.format == 'json':
        text = export.export_validation_report_json(report)
    else:
        text = '\n'.join(report.format()) + '\n'
    _emit(text, opts.out)
    return co.EXIT_OK if report.passed else co.EXIT_VALIDATION

def run_fetch_info(opts):
    _emit(corpus.fetch_instructions(corpus.load_manifest(opts.manifest)),
          opts.out)
    return co.EXIT_OK

def _positive(text):
    try:
        value = int(text)
    except ValueError:
        raise argparse.ArgumentTypeError('{!r} is not a number'.format(text))
    if value < 1:
        raise argparse.ArgumentTypeError('{} is not positive'.format(value))
    return value

def return_cli_parser():
    """
    Command line argument parser for skdiff.
    """
    common = _Parser(add_help=False)
    common.add_argument(
        '--out', '-o', type=str, metavar='filename',
        help='Write output to filename instead of standard output.')
    common.add_argument(
        '--verbose', '-v', action='count', default=0,
        help='Log more to standard error. Repeat for more detail.')
    melody = _Parser(add_help=False)
    melody_args = melody.add_argument_group('input options')
    melody_args.add_argument(
        'input', type=str, metavar='somefile.lsht|somefile.musicxml',
        help='Lead sheet or MusicXML file.')
    melody_args.add_argument(
        '--part', type=_positive, default=1, metavar='N',
        help='MusicXML part holding the melody. Default is 1.')
    melody_args.add_argument(
        '--pickup', choices=co.PICKUP_MODES, default='pad',
        help=('Pad an anacrusis into a full bar or drop it. '
              'Default is pad.'))
    melody_args.add_argument(
        '--segment-bars', type=int, choices=co.SEGMENT_BARS,
        default=co.DEFAULT_SEGMENT_BARS,
        help='Bars per segment. Default is {}.'.format(
            co.DEFAULT_SEGMENT_BARS))
    melody_args.add_argument(
        '--workers', type=_positive, default=None, metavar='N',
        help='Build trees on N threads. Output does not depend on it.')
    melody_args.add_argument(
        '--max-depth', type=_positive, default=None, metavar='N',
        help='Leave nodes below level N out of dot and text trees.')

    parser = _Parser(
        prog='skdiff', description=__doc__,
        formatter_class=argparse.RawTextHelpFormatter)
    subparsers = parser.add_subparsers(dest='command', metavar='command')
    subparsers.required = True

    reduce_parser = subparsers.add_parser(
        'reduce', parents=[melody, common], help='Sk_trees of segments.')
    reduce_args = reduce_parser.add_argument_group('reduce options')
    reduce_args.add_argument(
        '--segment', type=_positive, default=None, metavar='K',
        help='Only this segment. Default is every segment.')
    reduce_args.add_argument(
        '--format', choices=co.FORMATS, default='json')
    reduce_parser.set_defaults(func=run_reduce)

    diff_parser = subparsers.add_parser(
        'diff', parents=[melody, common],
        help='Diff_tree between two segments.')
    diff_args = diff_parser.add_argument_group('diff options')
    diff_args.add_argument(
        '--left', type=_positive, required=True, metavar='I',
        help='Earlier segment.')
    diff_args.add_argument(
        '--right', type=_positive, required=True, metavar='J',
        help='Later segment.')
    diff_args.add_argument(
        '--format', choices=co.FORMATS, default='json')
    diff_parser.set_defaults(func=run_diff)

    analyze_parser = subparsers.add_parser(
        'analyze', parents=[melody, common],
        help='Pairwise report over all segments.')
    analyze_args = analyze_parser.add_argument_group('analyze options')
    analyze_args.add_argument(
        '--pairs', type=str, default='forward',
        metavar='|'.join(co.PAIR_PRESETS) + '|I-J,...',
        help='Preset or explicit list of pairs. Default is forward.')
    analyze_args.add_argument(
        '--include-partial', action='store_true',
        help='Also compare a trailing partial segment.')
    analyze_args.add_argument(
        '--within-sections', action='store_true',
        help="Don't compare segments from different sections.")
    analyze_args.add_argument(
        '--variation-levels', type=_positive, default=None, metavar='N',
        help=('Top levels that have to match for a variation. Default is '
              'half the levels.'))
    analyze_args.add_argument(
        '--format', choices=co.FORMATS, default='text')
    analyze_parser.set_defaults(func=run_analyze)

    validate_parser = subparsers.add_parser(
        'validate-corpus', parents=[common],
        help='Check downloaded allemandes against the manifest.')
    validate_args = validate_parser.add_argument_group('corpus options')
    validate_args.add_argument(
        'directory', type=str, metavar='somedir',
        help='Directory holding the downloaded MusicXML files.')
    validate_args.add_argument(
        '--manifest', type=str, default=None, metavar='filename',
        help='Manifest to validate against. Default is the shipped one.')
    validate_args.add_argument(
        '--write-manifest', type=str, default=None, metavar='filename',
        help='Save the manifest with the titles found in the scores.')
    validate_args.add_argument(
        '--format', choices=('json', 'text'), default='text')
    validate_parser.set_defaults(func=run_validate_corpus)

    fetch_parser = subparsers.add_parser(
        'fetch-info', parents=[common],
        help='Where to download the corpus.')
    fetch_parser.add_argument(
        '--manifest', type=str, default=None, metavar='filename')
    fetch_parser.set_defaults(func=run_fetch_info)
    return parser

if __name__ == '__main__':
    logging.config.dictConfig(co.LOG_SETTINGS)
    sys.exit(main(sys.argv[1:]))
