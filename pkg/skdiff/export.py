"""
Writes trees and reports as JSON, DOT or plain text, and reads trees back
from JSON.

Every JSON document looks like

  {"kind": "sk_tree", "payload": {...}, "schema_version": "1.0"}

Keys are sorted and durations are exact "num/den" strings, so the same input
always gives the same bytes. Segment numbers are 1-based.
"""
from __future__ import absolute_import
from __future__ import division

import json
import logging
from collections import OrderedDict
from fractions import Fraction

from skdiff import analysis
from skdiff import constants as co
from skdiff import datatypes
from skdiff.datatypes import Pitch
from skdiff.difftree import DiffFeatures, DiffNode, DiffTree
from skdiff.sktree import SkNode, SkTree

logger = logging.getLogger(__name__)

class SchemaError(Exception):
    pass

def document(kind, payload):
    if kind not in co.PAYLOAD_KINDS:
        raise SchemaError('Unknown payload kind: {!r}'.format(kind))
    return {'schema_version': co.SCHEMA_VERSION, 'kind': kind,
            'payload': payload}

def dumps(obj):
    return json.dumps(obj, sort_keys=True, indent=2) + '\n'

def open_document(text, kind):
    """
    Parses a JSON document and returns its payload after checking the kind
    and the major schema version.
    """
    try:
        doc = json.loads(text)
    except ValueError as e:
        raise SchemaError('Not a JSON document: {}'.format(e))
    if not isinstance(doc, dict) or 'schema_version' not in doc:
        raise SchemaError('Document has no schema_version.')
    major = str(doc['schema_version']).split('.')[0]
    if major != co.SCHEMA_VERSION.split('.')[0]:
        raise SchemaError('Schema version {} is not supported.'.format(
            doc['schema_version']))
    if doc.get('kind') != kind:
        raise SchemaError('Expected a {} document, found {}.'.format(
            kind, doc.get('kind')))
    return doc['payload']

def _fraction(text):
    try:
        return Fraction(text)
    except (TypeError, ValueError):
        raise SchemaError('Not an exact duration: {!r}'.format(text))

# SK_TREE

def pitch_to_dict(pitch):
    return {'name': pitch.name, 'midi': pitch.midi_number}

def pitch_from_dict(data):
    midi = int(data['midi'])
    try:
        pitch = Pitch.from_name(data['name'])
    except ValueError:
        return Pitch(midi)
    if pitch.midi_number != midi:
        return Pitch(midi)
    return pitch

def sk_node_to_dict(node):
    return {'pitch': pitch_to_dict(node.pitch),
            'onset': datatypes.format_duration(node.onset),
            'duration': datatypes.format_duration(node.duration),
            'expansion': node.expansion,
            'level': node.level,
            'tie_continuation': node.tie_continuation,
            'children': [sk_node_to_dict(x) for x in node.children]}

def sk_node_from_dict(data):
    try:
        return SkNode(
            pitch_from_dict(data['pitch']),
            _fraction(data['onset']),
            _fraction(data['duration']),
            [sk_node_from_dict(x) for x in data.get('children', [])],
            data['expansion'],
            int(data['level']),
            bool(data.get('tie_continuation', False)))
    except KeyError as e:
        raise SchemaError('Sk_tree node without {}.'.format(e))

def sk_tree_to_dict(t):
    return {'segment': t.segment_index + 1,
            'levels': t.levels,
            'span': datatypes.format_duration(t.span),
            'grid_unit': None if t.grid_unit is None else
            datatypes.format_duration(t.grid_unit),
            'windows': [datatypes.format_duration(x) for x in t.windows],
            'root': sk_node_to_dict(t.root)}

def sk_tree_from_dict(data):
    tree = SkTree(
        sk_node_from_dict(data['root']),
        segment_index=int(data['segment']) - 1,
        levels=int(data['levels']),
        grid_unit=None if data.get('grid_unit') is None else
        _fraction(data['grid_unit']),
        windows=[_fraction(x) for x in data.get('windows', [])])
    tree.validate()
    return tree

def export_sk_tree_json(t):
    return dumps(document('sk_tree', sk_tree_to_dict(t)))

def import_sk_tree_json(text):
    return sk_tree_from_dict(open_document(text, 'sk_tree'))

# DIFF_TREE

def features_to_dict(features):
    return OrderedDict((k, v) for k, v in zip(co.FEATURES, features))

def diff_node_to_dict(node):
    return {'features': features_to_dict(node.features),
            'left_ref': list(node.left_ref),
            'right_ref': list(node.right_ref),
            'children': [diff_node_to_dict(x) for x in node.children]}

def diff_node_from_dict(data):
    try:
        features = data['features']
        return DiffNode(
            DiffFeatures(*[features.get(x) for x in co.FEATURES]),
            [diff_node_from_dict(x) for x in data.get('children', [])],
            data['left_ref'], data['right_ref'])
    except KeyError as e:
        raise SchemaError('Diff_tree node without {}.'.format(e))

def diff_tree_to_dict(d):
    return {'left_segment': d.left_segment + 1,
            'right_segment': d.right_segment + 1,
            'root_pitch_offset': d.root_pitch_offset,
            'source_levels': d.source_levels,
            'extensions': ['root_pitch_offset'],
            'root': diff_node_to_dict(d.root)}

def diff_tree_from_dict(data):
    return DiffTree(diff_node_from_dict(data['root']),
                    int(data['left_segment']) - 1,
                    int(data['right_segment']) - 1,
                    root_pitch_offset=int(data['root_pitch_offset']),
                    source_levels=data.get('source_levels'))

def export_diff_tree_json(d):
    return dumps(document('diff_tree', diff_tree_to_dict(d)))

def import_diff_tree_json(text):
    return diff_tree_from_dict(open_document(text, 'diff_tree'))

# REPORTS

def pairwise_report_to_dict(m, report):
    """
    Payload combining a `analysis.PairwiseMatrix` and its
    `analysis.StructureReport`.
    """
    pairs = []
    for (i, j), d in m.diffs.items():
        label = report.labels[(i + 1, j + 1)]
        pairs.append({'left': i + 1,
                      'right': j + 1,
                      'relation': label.kind,
                      'extension': label.extension,
                      'first_difference': label.first_difference,
                      'root_pitch_offset': label.root_pitch_offset,
                      'diff_tree': diff_tree_to_dict(d)})
    return {'piece': m.piece,
            'segment_count': m.n,
            'excluded': [x + 1 for x in m.excluded],
            'pairs': pairs,
            'groups': report.groups,
            'families': [{'members': x.members, 'variations': x.variations}
                         for x in report.families],
            'phrase_boundaries': [{'segment': x.segment, 'bar': x.bar}
                                  for x in report.boundaries],
            'level_tallies': {
                'columns': ['{}:{}'.format(f, v)
                            for f, v in analysis.tally_columns()],
                'rows': report.level_tallies.tolist()},
            'relations': list(co.RELATIONS),
            'relation_matrix': report.relation_matrix.tolist(),
            'warnings': list(report.warnings)}

def export_pairwise_report_json(m, report):
    return dumps(document('pairwise_report', pairwise_report_to_dict(m, report)))

def validation_report_to_dict(report):
    def plain(value):
        if isinstance(value, datatypes.Meter):
            return value.name
        if isinstance(value, (tuple, list)):
            return [plain(x) for x in value]
        return value
    return {'passed': report.passed,
            'results': [{'piece': x.number, 'check': x.check,
                         'status': x.status, 'expected': plain(x.expected),
                         'measured': plain(x.measured)}
                        for x in report.results],
            'skipped': list(report.skipped),
            'titles': dict(report.titles),
            'tallies': dict(report.tallies),
            'expected': dict(report.expected)}

def export_validation_report_json(report):
    return dumps(document('validation_report',
                          validation_report_to_dict(report)))

# DOT

def _quote(text):
    # Labels carry \n line breaks for dot, so backslashes stay as they are.
    return '"{}"'.format(str(text).replace('"', '\\"'))

def _walk(root, max_depth):
    """
    Yields (id, node, parent id, depth) in pre-order down to `max_depth`.
    """
    stack = [(root, None, 1)]
    count = 0
    while stack:
        node, parent, depth = stack.pop()
        name = 'n{}'.format(count)
        count += 1
        yield name, node, parent, depth
        if max_depth is None or depth < max_depth:
            stack.extend((x, name, depth + 1) for x in reversed(node.children))

def _digraph(name, labelled, extra=()):
    lines = ['digraph {} {{'.format(_quote(name)),
             '  node [shape=box, fontname="Helvetica"];']
    lines.extend('  ' + x for x in extra)
    edges = []
    for node_id, label, parent in labelled:
        lines.append('  {} [label={}];'.format(node_id, _quote(label)))
        if parent is not None:
            edges.append('  {} -> {};'.format(parent, node_id))
    lines.extend(edges)
    lines.append('}')
    return '\n'.join(lines) + '\n'

def export_sk_tree_dot(t, max_depth=None):
    labelled = [(i, '{}\\n{}'.format(node.pitch.name, node.expansion), parent)
                for i, node, parent, _ in _walk(t.root, max_depth)]
    return _digraph('sk_tree_{}'.format(t.segment_index + 1), labelled)

def diff_label(features):
    return '\\n'.join(
        '{}: {}'.format(k.capitalize(), co.ABSENT if v is None else v)
        for k, v in zip(co.FEATURES, features))

def export_diff_tree_dot(d, max_depth=None):
    """
    DOT digraph of a Diff_tree. Nodes deeper than `max_depth` are left out.
    """
    labelled = [(i, diff_label(node.features), parent)
                for i, node, parent, _ in _walk(d.root, max_depth)]
    left, right = d.pair
    return _digraph(
        'diff_{}_{}'.format(left, right), labelled,
        extra=['label={};'.format(_quote('{} - {} (offset {:+d})'.format(
            left, right, d.root_pitch_offset)))])

def export_pairwise_report_dot(m, max_depth=None):
    return ''.join(export_diff_tree_dot(d, max_depth)
                   for d in m.diffs.values())

# TEXT

def format_sk_tree(t):
    lines = ['Segment {} ({} levels, grid {})'.format(
        t.segment_index + 1, t.levels,
        co.ABSENT if t.grid_unit is None else
        datatypes.format_duration(t.grid_unit))]
    for _, node, _, depth in _walk(t.root, None):
        lines.append('{}{} {}+{} {} (level {})'.format(
            '  ' * depth, node.pitch.name,
            datatypes.format_duration(node.onset),
            datatypes.format_duration(node.duration), node.expansion,
            node.level))
    return '\n'.join(lines) + '\n'

def format_diff_tree(d, max_depth=None):
    left, right = d.pair
    lines = ['Segments {} - {} (root offset {:+d})'.format(
        left, right, d.root_pitch_offset)]
    for _, node, _, depth in _walk(d.root, max_depth):
        lines.append('{}{}'.format('  ' * depth, node.features))
    return '\n'.join(lines) + '\n'
