#!/usr/bin/env python
from fractions import Fraction
import os
import random
import unittest

from skdiff import analysis
from skdiff import constants as co
from skdiff import difftree
from skdiff import filetypes
from skdiff import segment as seg
from skdiff import sktree
from skdiff.datatypes import (ChordSymbol, HarmonySpan, KeySignature, Melody,
                              Meter, Note, Pitch)

FIXTURES = os.path.join(os.path.dirname(__file__), 'fixtures')

def trees(chords, notes, bars=1):
    m = filetypes.parse_leadsheet_text(
        'key C major\nmeter 2/4\nchords {}\nnotes {}\n'.format(chords, notes))
    return sktree.build_sk_trees(seg.segment_melody(m, bars))

def leaf(name, onset, length):
    return sktree.SkNode(Pitch.from_name(name), onset, length)

def random_melody(rng, meter, bars):
    """
    Random melody on a 16th-note grid with one random chord per bar.
    """
    slots = int(meter.bar_length * 16) * bars
    cuts = [0] + [i for i in range(1, slots) if rng.random() < 0.35] + [slots]
    notes = [Note(Pitch(rng.randint(55, 79)), Fraction(a, 16),
                  Fraction(b - a, 16)) for a, b in zip(cuts, cuts[1:])]
    bar = meter.bar_length
    harmony = [HarmonySpan(i * bar, bar, ChordSymbol(
        rng.randint(0, 11), rng.choice(list(co.CHORD_TEMPLATES))))
        for i in range(bars)]
    return Melody(notes, KeySignature(rng.randint(0, 11)), meter, harmony)

def node_at(tree, ref):
    node = tree.root
    for i in ref:
        node = node.children[i]
    return node

class TestRandomTrees(unittest.TestCase):
    def setUp(self):
        self.rng = random.Random(8)
    def random_trees(self):
        meter = self.rng.choice([Meter(2, 4), Meter(3, 8)])
        m = random_melody(self.rng, meter, 4)
        return sktree.build_sk_trees(seg.segment_melody(m, 1))
    def test_self_diff(self):
        for _ in range(60):
            for t in self.random_trees():
                copy = sktree.SkTree(t.root, t.segment_index + 1,
                                     grid_unit=t.grid_unit, windows=t.windows)
                d = difftree.build_diff_tree(t, copy)
                self.assertTrue(d.all_same)
                self.assertEqual(d.root_pitch_offset, 0)
                self.assertEqual(len(d.nodes()), len(list(t.nodes())))
    def test_leaf_of_either(self):
        for _ in range(60):
            trees = self.random_trees()
            for i, j in analysis.forward_pairs(range(len(trees))):
                d = difftree.build_diff_tree(trees[i], trees[j])
                self.assertTrue(difftree.check_diff_tree(d))
                for node in d.nodes():
                    a = node_at(trees[i], node.left_ref)
                    b = node_at(trees[j], node.right_ref)
                    expanded = not a.is_leaf and not b.is_leaf and \
                        len(a.children) == len(b.children)
                    self.assertEqual(bool(node.children), expanded)
                    self.assertEqual(node.features,
                                     difftree.diff_features(a, b))

class TestDiffFeatures(unittest.TestCase):
    def test_leaf_against_right(self):
        first, second = trees('| G | G |', 'F4:h F4:q G4:q')
        features = difftree.diff_features(first.root, second.root)
        self.assertEqual(features, (co.DIFF, co.MORE, None, None))
    def test_wider(self):
        first, second = trees('| C | C |', 'C4:q E4:q C4:q G4:q')
        features = difftree.diff_features(first.root, second.root)
        self.assertEqual(features, (co.SAME, co.SAME, co.SAME, co.WIDE))
    def test_not_commutative(self):
        first, second = trees('| C | C |', 'C4:q E4:q C4:q G4:q')
        self.assertEqual(
            difftree.diff_features(second.root, first.root).int_width,
            co.NARROW)
    def test_direction(self):
        first, second = trees('| C | C |', 'C4:q E4:q C4:q A3:q')
        features = difftree.diff_features(first.root, second.root)
        self.assertEqual(features.dir, co.DIFF)
    def test_one_child_against_two(self):
        half = Fraction(1, 2)
        a = sktree.SkNode(Pitch.from_name('C4'), 0, half,
                          [leaf('C4', 0, half)], co.EXP_LEFT, 1)
        b = sktree.SkNode(Pitch.from_name('C4'), 0, half,
                          [leaf('C4', 0, Fraction(1, 4)),
                           leaf('D4', Fraction(1, 4), Fraction(1, 4))],
                          co.EXP_LEFT, 1)
        features = difftree.diff_features(a, b)
        self.assertEqual(features.sk, co.SAME)
        self.assertEqual(features.ch, co.MORE)
        self.assertIsNone(features.dir)
        self.assertIsNone(features.int_width)
        self.assertEqual(difftree.diff_features(b, a).ch, co.LESS)

class TestDiffTree(unittest.TestCase):
    def setUp(self):
        self.trees = trees('| C | C | C | C |',
                           'C4:q D4:q E4:q G4:q C4:q D4:q E4:q G4:q', bars=2)
    def test_self(self):
        d = difftree.build_diff_tree(*self.trees)
        self.assertTrue(d.all_same)
        self.assertEqual(d.root_pitch_offset, 0)
        self.assertEqual(d.depth, 3)
        self.assertEqual(len(d.nodes()), 7)
        self.assertEqual(d.pair, (1, 2))
        self.assertTrue(difftree.check_diff_tree(d))
    def test_refs(self):
        d = difftree.build_diff_tree(*self.trees)
        self.assertEqual(d.root.children[1].children[0].left_ref, (1, 0))
    def test_summary(self):
        summary = difftree.diff_depth_and_counts(
            difftree.build_diff_tree(*self.trees))
        self.assertEqual(summary.node_count, 7)
        self.assertEqual(summary.leaf_count, 4)
        self.assertEqual(summary.totals['sk'][co.SAME], 7)
        self.assertEqual(summary.totals['dir'][co.ABSENT], 4)
        self.assertEqual(summary.tallies[2]['int'][co.SAME], 2)
    def test_backward(self):
        self.assertRaises(difftree.DiffError, difftree.build_diff_tree,
                          self.trees[1], self.trees[0])
    def test_spans_differ(self):
        short = trees('| C |', 'C4:q D4:q')[0]
        late = sktree.SkTree(short.root, segment_index=5, levels=short.levels)
        self.assertRaises(difftree.DiffError, difftree.build_diff_tree,
                          self.trees[0], late)
    def test_leaf_against_internal(self):
        first, second = trees('| G | G |', 'F4:h F4:q G4:q')
        d = difftree.build_diff_tree(first, second)
        self.assertTrue(d.root.is_leaf)
        self.assertFalse(d.all_same)
        self.assertTrue(difftree.check_diff_tree(d))

class TestTransposition(unittest.TestCase):
    def setUp(self):
        m = filetypes.LeadSheet(os.path.join(FIXTURES, 'transposed.lsht')).melody
        self.segments = seg.segment_melody(m)
    def test_up_a_fourth(self):
        d = difftree.compare_segments(self.segments[0], self.segments[1])
        self.assertTrue(d.all_same)
        self.assertEqual(d.root_pitch_offset, 5)
    def test_down_a_fifth(self):
        d = difftree.compare_segments(self.segments[0], self.segments[2])
        self.assertTrue(d.all_same)
        self.assertEqual(d.root_pitch_offset, -7)
    def test_transposed_melody(self):
        m = filetypes.LeadSheet(os.path.join(FIXTURES, 'abac.lsht')).melody
        first = seg.segment_melody(m)[0]
        moved = seg.segment_melody(m.transpose(5))[0]._replace(index=1)
        d = difftree.compare_segments(first, moved)
        self.assertTrue(d.all_same)
        self.assertEqual(d.root_pitch_offset, 5)

if __name__ == '__main__':
    unittest.main()
