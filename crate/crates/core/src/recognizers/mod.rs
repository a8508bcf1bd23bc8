//! Decision-tree recognizers: classification, recognition time and
//! correctness against a universe.
//!
//! Internal nodes test one sign. A pattern for which the sign holds follows
//! the true branch (drawn as the left subnode in the usual pictures). The
//! recognition time of a pattern is the number of arcs from the root to the
//! leaf it reaches, so a leaf-only tree recognizes in time 0.

mod dsl;

use std::collections::BTreeMap;
use std::fmt;

use crate::error::{Error, Result};
use crate::patterns::{Pattern, Universe};

pub use dsl::{
    format_tree, parse_labeled, parse_tree, parse_tree_file, parse_tree_with, LabeledTree,
};

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum DecisionTree {
    Leaf(usize),
    Test {
        sign: usize,
        on_true: Box<DecisionTree>,
        on_false: Box<DecisionTree>,
    },
}

/// Result of walking a tree for one pattern.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Classification {
    pub image: usize,
    pub time: u32,
}

impl DecisionTree {
    pub fn leaf(image: usize) -> Self {
        DecisionTree::Leaf(image)
    }

    pub fn test(sign: usize, on_true: DecisionTree, on_false: DecisionTree) -> Self {
        DecisionTree::Test {
            sign,
            on_true: Box::new(on_true),
            on_false: Box::new(on_false),
        }
    }

    pub fn classify(&self, x: &Pattern) -> Classification {
        let mut node = self;
        let mut time = 0;
        loop {
            match node {
                DecisionTree::Leaf(image) => {
                    return Classification {
                        image: *image,
                        time,
                    }
                }
                DecisionTree::Test {
                    sign,
                    on_true,
                    on_false,
                } => {
                    node = if x.bit_unchecked(*sign) {
                        on_true
                    } else {
                        on_false
                    };
                    time += 1;
                }
            }
        }
    }

    /// Length in arcs of the longest root-to-leaf path.
    pub fn depth(&self) -> u32 {
        match self {
            DecisionTree::Leaf(_) => 0,
            DecisionTree::Test {
                on_true, on_false, ..
            } => 1 + on_true.depth().max(on_false.depth()),
        }
    }

    pub fn leaf_count(&self) -> usize {
        match self {
            DecisionTree::Leaf(_) => 1,
            DecisionTree::Test {
                on_true, on_false, ..
            } => on_true.leaf_count() + on_false.leaf_count(),
        }
    }

    /// Checks every sign index and leaf label against `u`.
    pub fn validate(&self, u: &Universe) -> Result<()> {
        match self {
            DecisionTree::Leaf(image) => {
                if *image >= u.images().len() {
                    return Err(Error::InvalidTree(format!(
                        "leaf names image {image}, universe has {}",
                        u.images().len()
                    )));
                }
                Ok(())
            }
            DecisionTree::Test {
                sign,
                on_true,
                on_false,
            } => {
                if *sign == 0 || *sign > u.sign_count() {
                    return Err(Error::InvalidTree(format!(
                        "sign P{sign} outside 1..={}",
                        u.sign_count()
                    )));
                }
                on_true.validate(u)?;
                on_false.validate(u)
            }
        }
    }

    /// True when every internal node splits the patterns reaching it into
    /// two nonempty parts.
    pub fn is_reduced(&self, u: &Universe) -> bool {
        fn walk(node: &DecisionTree, reaching: &[Pattern]) -> bool {
            match node {
                DecisionTree::Leaf(_) => true,
                DecisionTree::Test {
                    sign,
                    on_true,
                    on_false,
                } => {
                    let (yes, no): (Vec<Pattern>, Vec<Pattern>) =
                        reaching.iter().partition(|x| x.bit_unchecked(*sign));
                    !yes.is_empty() && !no.is_empty() && walk(on_true, &yes) && walk(on_false, &no)
                }
            }
        }
        walk(self, u.patterns())
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Misclassified {
    pub pattern: Pattern,
    pub expected: usize,
    pub got: usize,
}

#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct CorrectnessReport {
    pub misclassified: Vec<Misclassified>,
}

impl CorrectnessReport {
    pub fn is_correct(&self) -> bool {
        self.misclassified.is_empty()
    }
}

impl fmt::Display for CorrectnessReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_correct() {
            return f.write_str("correct");
        }
        write!(f, "{} misclassified pattern(s)", self.misclassified.len())?;
        for m in self.misclassified.iter().take(8) {
            write!(f, "; {} -> {} (expected {})", m.pattern, m.got, m.expected)?;
        }
        if self.misclassified.len() > 8 {
            f.write_str("; ...")?;
        }
        Ok(())
    }
}

/// Classifies every pattern of `u` and lists the ones assigned the wrong image.
pub fn check_correct(tree: &DecisionTree, u: &Universe) -> Result<CorrectnessReport> {
    tree.validate(u)?;
    let misclassified = u
        .patterns()
        .iter()
        .zip(u.labels())
        .filter_map(|(x, &expected)| {
            let got = tree.classify(x).image;
            (got != expected).then_some(Misclassified {
                pattern: *x,
                expected,
                got,
            })
        })
        .collect();
    Ok(CorrectnessReport { misclassified })
}

/// Multiset of recognition times within one image.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct TimeMultiset(BTreeMap<u32, usize>);

impl TimeMultiset {
    pub fn insert(&mut self, time: u32) {
        *self.0.entry(time).or_default() += 1;
    }

    pub fn len(&self) -> usize {
        self.0.values().sum()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    /// `(time, count)` pairs in ascending time order.
    pub fn counts(&self) -> impl Iterator<Item = (u32, usize)> + '_ {
        self.0.iter().map(|(&t, &c)| (t, c))
    }

    pub fn max(&self) -> Option<u32> {
        self.0.keys().next_back().copied()
    }

    pub fn uniform(&self) -> Option<u32> {
        (self.0.len() == 1).then(|| *self.0.keys().next().unwrap())
    }

    /// `t` when uniform, `t1/t2` when half the image takes `t1` and the other
    /// half `t2`, otherwise `t1xc1/t2xc2/…`.
    pub fn render(&self) -> String {
        let entries: Vec<_> = self.counts().collect();
        match entries.as_slice() {
            [] => "-".to_string(),
            [(t, _)] => t.to_string(),
            [(t1, c1), (t2, c2)] if c1 == c2 => format!("{t1}/{t2}"),
            _ => entries
                .iter()
                .map(|(t, c)| format!("{t}x{c}"))
                .collect::<Vec<_>>()
                .join("/"),
        }
    }
}

/// Per-pattern and per-image recognition times of a correct tree.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TimeProfile {
    /// Indexed by pattern ordinal.
    pub per_pattern: Vec<u32>,
    /// Indexed by image.
    pub per_image: Vec<TimeMultiset>,
}

impl TimeProfile {
    pub fn time_of(&self, u: &Universe, x: &Pattern) -> Option<u32> {
        u.ordinal(x).map(|o| self.per_pattern[o])
    }

    pub fn max_time(&self) -> u32 {
        self.per_pattern.iter().copied().max().unwrap_or(0)
    }
}

/// Recognition times of `tree` over `u`; incorrect trees are rejected.
pub fn time_profile(tree: &DecisionTree, u: &Universe) -> Result<TimeProfile> {
    let report = check_correct(tree, u)?;
    if !report.is_correct() {
        return Err(Error::Incorrect(report));
    }
    let per_pattern: Vec<u32> = u.patterns().iter().map(|x| tree.classify(x).time).collect();
    let mut per_image = vec![TimeMultiset::default(); u.images().len()];
    for (&t, &label) in per_pattern.iter().zip(u.labels()) {
        per_image[label].insert(t);
    }
    Ok(TimeProfile {
        per_pattern,
        per_image,
    })
}

/// Recognition time of a set: the maximum per-pattern time over `set`.
pub fn time_of_set(tree: &DecisionTree, set: &[Pattern]) -> Result<u32> {
    set.iter()
        .map(|x| tree.classify(x).time)
        .max()
        .ok_or_else(|| Error::domain("recognition time of an empty set"))
}

/// The right-spine recognizer for the block-cyclic family: tests signs
/// `n·q + 1, …, n·q + n` in turn; the true leaf of the `m`-th test is image
/// `(n - q + m - 1) mod n` and the final false leaf is image `n`.
pub fn spine_algorithm(n: usize, q: usize) -> Result<DecisionTree> {
    if n < 3 {
        return Err(Error::domain(format!(
            "family parameter n={n} must be at least 3"
        )));
    }
    if q >= n {
        return Err(Error::domain(format!("spine index {q} outside 0..{n}")));
    }
    let tree = (1..=n).rev().fold(DecisionTree::leaf(n), |rest, m| {
        DecisionTree::test(n * q + m, DecisionTree::leaf((n - q + m - 1) % n), rest)
    });
    Ok(tree)
}

/// Time of spine `q` on image `j` of the size-`n` family.
pub fn spine_time(n: usize, q: usize, j: usize) -> u32 {
    if j >= n {
        n as u32
    } else {
        ((j + q) % n + 1) as u32
    }
}

/// Recognizers of the nine-sign, four-image universe.
pub mod builtin {
    use super::DecisionTree;

    fn chain(steps: &[(usize, usize)], last: usize) -> DecisionTree {
        steps
            .iter()
            .rev()
            .fold(DecisionTree::leaf(last), |rest, &(sign, image)| {
                DecisionTree::test(sign, DecisionTree::leaf(image), rest)
            })
    }

    /// `(P1 a0 (P2 a1 (P3 a2 a3)))`
    pub fn algorithm_a() -> DecisionTree {
        chain(&[(1, 0), (2, 1), (3, 2)], 3)
    }

    /// `(P4 a2 (P5 a0 (P6 a1 a3)))`
    pub fn algorithm_b() -> DecisionTree {
        chain(&[(4, 2), (5, 0), (6, 1)], 3)
    }

    /// `(P7 a1 (P8 a2 (P9 a0 a3)))`
    pub fn algorithm_c() -> DecisionTree {
        chain(&[(7, 1), (8, 2), (9, 0)], 3)
    }

    /// The third recognizer with `a2` at its deepest true leaf; misclassifies
    /// all of `a0`. Kept for fault-injection checks.
    pub fn algorithm_c_misprinted() -> DecisionTree {
        chain(&[(7, 1), (8, 2), (9, 2)], 3)
    }

    /// Root P2; true side splits by P1, false side peels `a0` by P1 and then
    /// separates `a2` from `a3` by P4. Equivalent to B.
    pub fn split_then_peel() -> DecisionTree {
        DecisionTree::test(
            2,
            DecisionTree::test(1, DecisionTree::leaf(0), DecisionTree::leaf(1)),
            DecisionTree::test(
                1,
                DecisionTree::leaf(0),
                DecisionTree::test(4, DecisionTree::leaf(2), DecisionTree::leaf(3)),
            ),
        )
    }

    /// Root P2; false side peels `a2` by P4 first, then splits `a0` from
    /// `a3` by P1. Equivalent to A.
    pub fn split_then_separate() -> DecisionTree {
        DecisionTree::test(
            2,
            DecisionTree::test(1, DecisionTree::leaf(0), DecisionTree::leaf(1)),
            DecisionTree::test(
                4,
                DecisionTree::leaf(2),
                DecisionTree::test(1, DecisionTree::leaf(0), DecisionTree::leaf(3)),
            ),
        )
    }

    /// Looks up a builtin by its short name.
    pub fn by_name(name: &str) -> Option<DecisionTree> {
        Some(match name {
            "A" => algorithm_a(),
            "B" => algorithm_b(),
            "C" => algorithm_c(),
            "C-misprinted" => algorithm_c_misprinted(),
            "split-peel" => split_then_peel(),
            "split-separate" => split_then_separate(),
            _ => return None,
        })
    }

    pub const NAMES: [&str; 6] = [
        "A",
        "B",
        "C",
        "C-misprinted",
        "split-peel",
        "split-separate",
    ];
}

#[cfg(test)]
mod tests {
    use super::builtin::*;
    use super::*;
    use crate::patterns::{theorem1_universe, theorem2_universe};

    fn column(tree: &DecisionTree, u: &Universe) -> Vec<String> {
        time_profile(tree, u)
            .unwrap()
            .per_image
            .iter()
            .map(TimeMultiset::render)
            .collect()
    }

    #[test]
    fn classify_walks_true_branch_first() {
        let u = theorem1_universe();
        let a = algorithm_a();
        for x in &u.images()[0].patterns {
            assert_eq!(a.classify(x), Classification { image: 0, time: 1 });
        }
        let z: Pattern = "000000000".parse().unwrap();
        assert_eq!(a.classify(&z), Classification { image: 3, time: 3 });
        assert_eq!(
            DecisionTree::leaf(0).classify(&z),
            Classification { image: 0, time: 0 }
        );
    }

    #[test]
    fn builtins_are_correct_and_reduced() {
        let u = theorem1_universe();
        for name in ["A", "B", "C", "split-peel", "split-separate"] {
            let t = by_name(name).unwrap();
            assert!(check_correct(&t, &u).unwrap().is_correct(), "{name}");
            assert!(t.is_reduced(&u), "{name}");
        }
    }

    #[test]
    fn relabeled_leaf_is_caught() {
        let u = theorem1_universe();
        let broken = DecisionTree::test(
            1,
            DecisionTree::leaf(0),
            DecisionTree::test(
                2,
                DecisionTree::leaf(1),
                DecisionTree::test(3, DecisionTree::leaf(2), DecisionTree::leaf(2)),
            ),
        );
        let report = check_correct(&broken, &u).unwrap();
        assert_eq!(report.misclassified.len(), 1);
        assert_eq!(report.misclassified[0].pattern.to_string(), "000000000");
        assert!(matches!(
            time_profile(&broken, &u),
            Err(Error::Incorrect(_))
        ));

        let misprinted = check_correct(&algorithm_c_misprinted(), &u).unwrap();
        assert_eq!(misprinted.misclassified.len(), 8);
    }

    #[test]
    fn invalid_trees_are_rejected() {
        let u = theorem1_universe();
        let bad_sign = DecisionTree::test(10, DecisionTree::leaf(0), DecisionTree::leaf(1));
        assert!(matches!(
            check_correct(&bad_sign, &u),
            Err(Error::InvalidTree(_))
        ));
        assert!(matches!(
            check_correct(&DecisionTree::leaf(4), &u),
            Err(Error::InvalidTree(_))
        ));
    }

    #[test]
    fn time_columns() {
        let u = theorem1_universe();
        assert_eq!(column(&algorithm_a(), &u), ["1", "2", "3", "3"]);
        assert_eq!(column(&algorithm_b(), &u), ["2", "3", "1", "3"]);
        assert_eq!(column(&algorithm_c(), &u), ["3", "1", "2", "3"]);
        assert_eq!(column(&split_then_peel(), &u), ["2", "2", "3", "3"]);
        assert_eq!(column(&split_then_separate(), &u), ["2/3", "2", "2", "3"]);
    }

    #[test]
    fn leaf_only_tree_on_single_image() {
        let u = Universe::from_text("L=2\nonly: BB\n").unwrap();
        let profile = time_profile(&DecisionTree::leaf(0), &u).unwrap();
        assert_eq!(profile.per_pattern, vec![0; 4]);
        assert_eq!(
            time_of_set(&DecisionTree::leaf(0), &u.patterns()[..1]).unwrap(),
            0
        );
    }

    #[test]
    fn time_of_sets() {
        let u = theorem1_universe();
        let a = algorithm_a();
        assert_eq!(time_of_set(&a, &u.images()[2].patterns).unwrap(), 3);
        assert_eq!(time_of_set(&a, u.patterns()).unwrap(), 3);
        assert!(matches!(time_of_set(&a, &[]), Err(Error::Domain(_))));
    }

    #[test]
    fn spines_match_the_three_recognizers() {
        assert_eq!(spine_algorithm(3, 0).unwrap(), algorithm_a());
        assert_eq!(spine_algorithm(3, 1).unwrap(), algorithm_b());
        assert_eq!(spine_algorithm(3, 2).unwrap(), algorithm_c());
        assert!(spine_algorithm(3, 3).is_err());
        assert!(spine_algorithm(2, 0).is_err());
    }

    #[test]
    fn spine_times_for_n4() {
        let u = theorem2_universe(4).unwrap();
        for q in 0..4 {
            let profile = time_profile(&spine_algorithm(4, q).unwrap(), &u).unwrap();
            for j in 0..=4 {
                assert_eq!(profile.per_image[j].uniform(), Some(spine_time(4, q, j)));
            }
        }
        let a0 = time_profile(&spine_algorithm(4, 0).unwrap(), &u).unwrap();
        let col: Vec<_> = a0.per_image.iter().map(|m| m.uniform().unwrap()).collect();
        assert_eq!(col, vec![1, 2, 3, 4, 4]);
    }

    #[test]
    fn non_reduced_tree() {
        let u = theorem1_universe();
        // P1 never holds once P1 has failed
        let t = DecisionTree::test(
            1,
            DecisionTree::leaf(0),
            DecisionTree::test(1, DecisionTree::leaf(0), algorithm_b()),
        );
        assert!(check_correct(&t, &u).unwrap().is_correct());
        assert!(!t.is_reduced(&u));
    }
}
