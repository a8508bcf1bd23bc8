//! Exhaustive search over correct reduced decision trees.
//!
//! For a fixed target recognizer `T`, the best achievable margin
//! `V(X, T) - V(T, X)` over all correct reduced trees `X` decomposes over the
//! pattern sets reaching each node. With `f(S, d)` the best contribution of a
//! subtree rooted at depth `d` that receives the set `S`:
//!
//! * `S` pure (one image): a leaf, worth `Σ sign(T(x) - d)` over `x ∈ S`;
//! * `d` beyond the target's deepest leaf: every pattern loses, `-|S|`;
//! * otherwise the best sign `p` splitting `S`, worth
//!   `f(S ∩ p, d + 1) + f(S \ p, d + 1)`.
//!
//! Pure sets are never split further: every pattern would only get deeper,
//! and a pattern's contribution is non-increasing in its depth.
//!
//! States are keyed by a bitmask over pattern ordinals, so universes are
//! limited to 64 patterns.

use std::collections::HashMap;
use std::iter;
use std::rc::Rc;
use std::time::Instant;

use num_bigint::BigUint;
use num_traits::One;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::patterns::Universe;
use crate::recognizers::{format_tree, time_profile, DecisionTree};
use crate::tournament::Entrant;

/// A set of patterns of a (≤ 64 pattern) universe, by ordinal.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct SubsetKey(pub u64);

impl SubsetKey {
    pub fn len(self) -> usize {
        self.0.count_ones() as usize
    }

    pub fn is_empty(self) -> bool {
        self.0 == 0
    }

    pub fn contains(self, ordinal: usize) -> bool {
        ordinal < 64 && (self.0 >> ordinal) & 1 == 1
    }

    pub fn ordinals(self) -> impl Iterator<Item = usize> {
        (0..64).filter(move |&i| (self.0 >> i) & 1 == 1)
    }

    pub fn from_ordinals(ordinals: impl IntoIterator<Item = usize>) -> Self {
        SubsetKey(ordinals.into_iter().fold(0, |m, o| m | (1u64 << o)))
    }
}

/// Sign and image bitmasks of a small universe.
#[derive(Clone, Debug)]
pub struct SubsetSpace {
    pattern_count: usize,
    /// `sign_masks[k - 1]`: patterns on which sign `k` holds.
    sign_masks: Vec<u64>,
    image_masks: Vec<u64>,
}

impl SubsetSpace {
    pub fn new(u: &Universe) -> Result<Self> {
        if u.len() > 64 {
            return Err(Error::capacity(format!(
                "subset search needs at most 64 patterns, universe has {}",
                u.len()
            )));
        }
        let sign_masks = (1..=u.sign_count())
            .map(|k| {
                SubsetKey::from_ordinals(
                    u.patterns()
                        .iter()
                        .enumerate()
                        .filter(|(_, x)| x.bit_unchecked(k))
                        .map(|(o, _)| o),
                )
                .0
            })
            .collect();
        let mut image_masks = vec![0u64; u.images().len()];
        for (o, &label) in u.labels().iter().enumerate() {
            image_masks[label] |= 1 << o;
        }
        Ok(SubsetSpace {
            pattern_count: u.len(),
            sign_masks,
            image_masks,
        })
    }

    pub fn full(&self) -> SubsetKey {
        if self.pattern_count == 64 {
            SubsetKey(u64::MAX)
        } else {
            SubsetKey((1u64 << self.pattern_count) - 1)
        }
    }

    /// The single image covering a nonempty `s`, if there is one.
    pub fn pure_image(&self, s: SubsetKey) -> Option<usize> {
        self.image_masks
            .iter()
            .position(|&m| s.0 & m == s.0 && s.0 != 0)
    }

    /// Signs that split `s` into two nonempty parts, ascending.
    pub fn splitting_signs(&self, s: SubsetKey) -> impl Iterator<Item = usize> + '_ {
        self.sign_masks
            .iter()
            .enumerate()
            .filter(move |(_, &m)| s.0 & m != 0 && s.0 & !m != 0)
            .map(|(i, _)| i + 1)
    }

    /// `(S ∩ p, S \ p)`.
    pub fn split(&self, s: SubsetKey, sign: usize) -> (SubsetKey, SubsetKey) {
        let m = self.sign_masks[sign - 1];
        (SubsetKey(s.0 & m), SubsetKey(s.0 & !m))
    }

    /// Lowest-sign-first tree over `s`; used where every completion scores
    /// the same.
    fn first_tree(&self, s: SubsetKey) -> DecisionTree {
        if let Some(image) = self.pure_image(s) {
            return DecisionTree::leaf(image);
        }
        let p = self
            .splitting_signs(s)
            .next()
            .expect("distinct patterns differ in some sign");
        let (yes, no) = self.split(s, p);
        DecisionTree::test(p, self.first_tree(yes), self.first_tree(no))
    }
}

/// Memoized best-margin search against one target.
#[derive(Debug)]
pub struct MarginSolver {
    space: SubsetSpace,
    target_times: Vec<u32>,
    max_time: u32,
    memo: HashMap<(SubsetKey, u32), (i64, usize)>,
}

impl MarginSolver {
    pub fn new(target: &DecisionTree, u: &Universe) -> Result<Self> {
        let space = SubsetSpace::new(u)?;
        let profile = time_profile(target, u)?;
        Ok(MarginSolver {
            space,
            max_time: profile.max_time(),
            target_times: profile.per_pattern,
            memo: HashMap::new(),
        })
    }

    pub fn space(&self) -> &SubsetSpace {
        &self.space
    }

    pub fn max_time(&self) -> u32 {
        self.max_time
    }

    pub fn states_explored(&self) -> usize {
        self.memo.len()
    }

    fn leaf_value(&self, s: SubsetKey, depth: u32) -> i64 {
        s.ordinals()
            .map(|o| (self.target_times[o] as i64 - depth as i64).signum())
            .sum()
    }

    /// `f(s, depth)` for nonempty `s`.
    pub fn value(&mut self, s: SubsetKey, depth: u32) -> i64 {
        if self.space.pure_image(s).is_some() {
            return self.leaf_value(s, depth);
        }
        if depth > self.max_time {
            return -(s.len() as i64);
        }
        if let Some(&(v, _)) = self.memo.get(&(s, depth)) {
            return v;
        }
        let signs: Vec<usize> = self.space.splitting_signs(s).collect();
        let mut best: Option<(i64, usize)> = None;
        for p in signs {
            let (yes, no) = self.space.split(s, p);
            let v = self.value(yes, depth + 1) + self.value(no, depth + 1);
            if best.is_none_or(|(b, _)| v > b) {
                best = Some((v, p));
            }
        }
        let best = best.expect("distinct patterns differ in some sign");
        self.memo.insert((s, depth), best);
        best.0
    }

    /// A tree over `s` rooted at `depth` attaining `value(s, depth)`; ties go
    /// to the lowest sign index.
    pub fn witness(&mut self, s: SubsetKey, depth: u32) -> DecisionTree {
        if let Some(image) = self.space.pure_image(s) {
            return DecisionTree::leaf(image);
        }
        if depth > self.max_time {
            return self.space.first_tree(s);
        }
        self.value(s, depth);
        let (_, p) = self.memo[&(s, depth)];
        let (yes, no) = self.space.split(s, p);
        DecisionTree::test(p, self.witness(yes, depth + 1), self.witness(no, depth + 1))
    }

    /// Memoized states as `(set, depth, value)`, sorted.
    pub fn memo_entries(&self) -> Vec<(SubsetKey, u32, i64)> {
        let mut v: Vec<_> = self
            .memo
            .iter()
            .map(|(&(s, d), &(val, _))| (s, d, val))
            .collect();
        v.sort_unstable();
        v
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct MarginResult {
    /// Maximum of `V(X, target) - V(target, X)` over correct reduced `X`.
    pub margin: i64,
    pub witness: DecisionTree,
    pub states_explored: usize,
}

pub fn max_margin_vs(target: &DecisionTree, u: &Universe) -> Result<MarginResult> {
    let mut solver = MarginSolver::new(target, u)?;
    let full = solver.space().full();
    let margin = solver.value(full, 0);
    let witness = solver.witness(full, 0);
    Ok(MarginResult {
        margin,
        witness,
        states_explored: solver.states_explored(),
    })
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct TargetMargin {
    pub label: String,
    pub tree: String,
    pub margin: i64,
    pub witness: String,
    pub states_explored: usize,
    /// Wall time in milliseconds; left out of JSON so reports stay stable.
    #[serde(skip)]
    pub wall_time_ms: f64,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct DominatorReport {
    /// True iff no correct reduced tree beats any target.
    pub holds: bool,
    pub targets: Vec<TargetMargin>,
}

impl DominatorReport {
    pub fn margins(&self) -> Vec<i64> {
        self.targets.iter().map(|t| t.margin).collect()
    }

    pub fn to_text(&self) -> String {
        let mut out = String::new();
        for t in &self.targets {
            out.push_str(&format!(
                "{}: margin {} witness {} ({} states, {:.1} ms)\n",
                t.label, t.margin, t.witness, t.states_explored, t.wall_time_ms
            ));
        }
        out.push_str(&format!(
            "no tree beats any single target: {}\n",
            if self.holds { "holds" } else { "fails" }
        ));
        out
    }
}

pub fn verify_no_dominator(targets: &[Entrant], u: &Universe) -> Result<DominatorReport> {
    let targets = targets
        .iter()
        .map(|e| {
            let start = Instant::now();
            let r = max_margin_vs(&e.tree, u)?;
            Ok(TargetMargin {
                label: e.label.clone(),
                tree: format_tree(&e.tree, u),
                margin: r.margin,
                witness: format_tree(&r.witness, u),
                states_explored: r.states_explored,
                wall_time_ms: start.elapsed().as_secs_f64() * 1e3,
            })
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(DominatorReport {
        holds: targets.iter().all(|t| t.margin <= 0),
        targets,
    })
}

/// True for the trees the enumeration produces: correct, every internal node
/// splits its reaching set nontrivially, and no single-image set is split.
pub fn is_enumerated_form(tree: &DecisionTree, u: &Universe) -> Result<bool> {
    let space = SubsetSpace::new(u)?;
    fn walk(space: &SubsetSpace, node: &DecisionTree, s: SubsetKey) -> bool {
        match node {
            DecisionTree::Leaf(image) => space.pure_image(s) == Some(*image),
            DecisionTree::Test {
                sign,
                on_true,
                on_false,
            } => {
                if *sign == 0 || *sign > space.sign_masks.len() || space.pure_image(s).is_some() {
                    return false;
                }
                let (yes, no) = space.split(s, *sign);
                !yes.is_empty()
                    && !no.is_empty()
                    && walk(space, on_true, yes)
                    && walk(space, on_false, no)
            }
        }
    }
    Ok(walk(&space, tree, space.full()))
}

/// Number of trees the enumeration yields over `s`:
/// `c(S) = 1` for pure `S`, else `Σ_p c(S ∩ p) · c(S \ p)`.
pub fn count_trees_over(space: &SubsetSpace, s: SubsetKey) -> BigUint {
    fn go(space: &SubsetSpace, s: SubsetKey, memo: &mut HashMap<SubsetKey, BigUint>) -> BigUint {
        if space.pure_image(s).is_some() {
            return BigUint::one();
        }
        if let Some(c) = memo.get(&s) {
            return c.clone();
        }
        let signs: Vec<usize> = space.splitting_signs(s).collect();
        let total = signs
            .into_iter()
            .map(|p| {
                let (yes, no) = space.split(s, p);
                go(space, yes, memo) * go(space, no, memo)
            })
            .sum::<BigUint>();
        memo.insert(s, total.clone());
        total
    }
    go(space, s, &mut HashMap::new())
}

pub fn count_reduced_trees(u: &Universe) -> Result<BigUint> {
    let space = SubsetSpace::new(u)?;
    Ok(count_trees_over(&space, space.full()))
}

/// Lazy stream of reduced trees: at each choice point signs ascend, and for a
/// fixed sign the true subtree varies slowest.
pub struct ReducedTrees {
    inner: Box<dyn Iterator<Item = DecisionTree>>,
}

impl Iterator for ReducedTrees {
    type Item = DecisionTree;

    fn next(&mut self) -> Option<DecisionTree> {
        self.inner.next()
    }
}

fn stream(space: Rc<SubsetSpace>, s: SubsetKey) -> Box<dyn Iterator<Item = DecisionTree>> {
    if let Some(image) = space.pure_image(s) {
        return Box::new(iter::once(DecisionTree::leaf(image)));
    }
    let signs: Vec<usize> = space.splitting_signs(s).collect();
    Box::new(signs.into_iter().flat_map(move |p| {
        let (yes, no) = space.split(s, p);
        let inner_space = Rc::clone(&space);
        stream(Rc::clone(&space), yes).flat_map(move |t| {
            stream(Rc::clone(&inner_space), no).map(move |f| DecisionTree::test(p, t.clone(), f))
        })
    }))
}

pub fn trees_over(space: &SubsetSpace, s: SubsetKey) -> ReducedTrees {
    ReducedTrees {
        inner: stream(Rc::new(space.clone()), s),
    }
}

pub fn reduced_trees(u: &Universe) -> Result<ReducedTrees> {
    let space = SubsetSpace::new(u)?;
    let full = space.full();
    Ok(trees_over(&space, full))
}

#[derive(Clone, Debug)]
pub struct Enumeration {
    pub trees: Vec<DecisionTree>,
    pub total: BigUint,
}

/// The first `limit` trees of the stream and the exact size of the class.
pub fn enumerate_reduced_trees(u: &Universe, limit: usize) -> Result<Enumeration> {
    let trees = reduced_trees(u)?.take(limit).collect();
    Ok(Enumeration {
        trees,
        total: count_reduced_trees(u)?,
    })
}

#[derive(Clone, Debug)]
struct FrontierPoint {
    margins: Vec<i64>,
    /// `(sign, true-side index, false-side index)` for internal nodes.
    origin: Option<(usize, usize, usize)>,
}

/// Keeps the Pareto-maximal points; among equal vectors the earliest wins.
fn pareto(mut points: Vec<FrontierPoint>) -> Vec<FrontierPoint> {
    points.sort_by(|a, b| b.margins.cmp(&a.margins));
    points.dedup_by(|later, earlier| later.margins == earlier.margins);
    let mut kept: Vec<FrontierPoint> = Vec::new();
    for p in points {
        let dominated = kept
            .iter()
            .any(|k| k.margins.iter().zip(&p.margins).all(|(a, b)| a >= b));
        if !dominated {
            kept.push(p);
        }
    }
    kept
}

/// Best margin vectors against several targets at once.
///
/// Each state keeps the Pareto frontier of achievable vectors
/// `(V(X, T_i) - V(T_i, X))_i`; frontiers of the two sides of a split add
/// pointwise.
#[derive(Debug)]
pub struct JointSolver {
    space: SubsetSpace,
    /// `target_times[i][ordinal]`.
    target_times: Vec<Vec<u32>>,
    max_time: u32,
    memo: HashMap<(SubsetKey, u32), Rc<Vec<FrontierPoint>>>,
}

impl JointSolver {
    pub fn new(targets: &[DecisionTree], u: &Universe) -> Result<Self> {
        if targets.is_empty() {
            return Err(Error::domain("at least one target is required"));
        }
        let space = SubsetSpace::new(u)?;
        let profiles = targets
            .iter()
            .map(|t| time_profile(t, u))
            .collect::<Result<Vec<_>>>()?;
        Ok(JointSolver {
            space,
            max_time: profiles.iter().map(|p| p.max_time()).max().unwrap_or(0),
            target_times: profiles.into_iter().map(|p| p.per_pattern).collect(),
            memo: HashMap::new(),
        })
    }

    pub fn states_explored(&self) -> usize {
        self.memo.len()
    }

    fn terminal(&self, s: SubsetKey, depth: u32) -> Option<Vec<i64>> {
        if self.space.pure_image(s).is_some() {
            return Some(
                self.target_times
                    .iter()
                    .map(|times| {
                        s.ordinals()
                            .map(|o| (times[o] as i64 - depth as i64).signum())
                            .sum()
                    })
                    .collect(),
            );
        }
        if depth > self.max_time {
            return Some(vec![-(s.len() as i64); self.target_times.len()]);
        }
        None
    }

    fn frontier(&mut self, s: SubsetKey, depth: u32) -> Rc<Vec<FrontierPoint>> {
        if let Some(margins) = self.terminal(s, depth) {
            return Rc::new(vec![FrontierPoint {
                margins,
                origin: None,
            }]);
        }
        if let Some(f) = self.memo.get(&(s, depth)) {
            return Rc::clone(f);
        }
        let signs: Vec<usize> = self.space.splitting_signs(s).collect();
        let mut candidates = Vec::new();
        for p in signs {
            let (yes, no) = self.space.split(s, p);
            let (fy, fn_) = (self.frontier(yes, depth + 1), self.frontier(no, depth + 1));
            for (i, a) in fy.iter().enumerate() {
                for (j, b) in fn_.iter().enumerate() {
                    candidates.push(FrontierPoint {
                        margins: a
                            .margins
                            .iter()
                            .zip(&b.margins)
                            .map(|(x, y)| x + y)
                            .collect(),
                        origin: Some((p, i, j)),
                    });
                }
            }
        }
        let f = Rc::new(pareto(candidates));
        self.memo.insert((s, depth), Rc::clone(&f));
        f
    }

    fn witness_of(&mut self, s: SubsetKey, depth: u32, index: usize) -> DecisionTree {
        if let Some(image) = self.space.pure_image(s) {
            return DecisionTree::leaf(image);
        }
        if depth > self.max_time {
            return self.space.first_tree(s);
        }
        let f = self.frontier(s, depth);
        let (p, i, j) = f[index].origin.expect("internal frontier point");
        let (yes, no) = self.space.split(s, p);
        DecisionTree::test(
            p,
            self.witness_of(yes, depth + 1, i),
            self.witness_of(no, depth + 1, j),
        )
    }

    /// Pareto-maximal margin vectors of subtrees over `s` rooted at `depth`.
    pub fn frontier_at(&mut self, s: SubsetKey, depth: u32) -> Vec<Vec<i64>> {
        self.frontier(s, depth)
            .iter()
            .map(|p| p.margins.clone())
            .collect()
    }

    /// Pareto-maximal margin vectors over all correct reduced trees.
    pub fn root_frontier(&mut self) -> Vec<Vec<i64>> {
        let full = self.space.full();
        self.frontier_at(full, 0)
    }

    /// A tree attaining each root frontier point, in frontier order.
    pub fn root_witnesses(&mut self) -> Vec<DecisionTree> {
        let full = self.space.full();
        let n = self.frontier(full, 0).len();
        (0..n).map(|i| self.witness_of(full, 0, i)).collect()
    }

    /// The tree maximizing its smallest margin across targets.
    pub fn best_worst_case(&mut self) -> JointResult {
        let full = self.space.full();
        let f = self.frontier(full, 0);
        let (index, point) = f
            .iter()
            .enumerate()
            .max_by(|(ia, a), (ib, b)| {
                let (ma, mb) = (a.margins.iter().min(), b.margins.iter().min());
                ma.cmp(&mb).then(ib.cmp(ia))
            })
            .expect("frontier is never empty");
        let margins = point.margins.clone();
        let frontier_size = f.len();
        let witness = self.witness_of(full, 0, index);
        JointResult {
            min_margin: *margins.iter().min().unwrap(),
            margins,
            witness,
            frontier_size,
            states_explored: self.states_explored(),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct JointResult {
    /// `max_X min_i (V(X, T_i) - V(T_i, X))`.
    pub min_margin: i64,
    /// The witness's margin against each target.
    pub margins: Vec<i64>,
    pub witness: DecisionTree,
    pub frontier_size: usize,
    pub states_explored: usize,
}

/// Best worst-case margin any correct reduced tree achieves against all of
/// `targets` simultaneously.
pub fn max_min_margin(targets: &[DecisionTree], u: &Universe) -> Result<JointResult> {
    Ok(JointSolver::new(targets, u)?.best_worst_case())
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct FrontierEntry {
    pub margins: Vec<i64>,
    pub witness: String,
}

/// Whether some correct reduced tree beats one target without losing to any
/// other.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct JointReport {
    pub targets: Vec<String>,
    /// True iff no tree has every margin `>= 0` and some margin `> 0`.
    pub holds: bool,
    /// `max_X min_i margin(X, T_i)`.
    pub best_min_margin: i64,
    pub best_min_witness: String,
    pub best_min_margins: Vec<i64>,
    /// Pareto-maximal margin vectors with a witness each.
    pub frontier: Vec<FrontierEntry>,
    pub states_explored: usize,
}

impl JointReport {
    pub fn to_text(&self) -> String {
        let mut out = format!(
            "margin vectors against ({}):
",
            self.targets.join(", ")
        );
        for f in &self.frontier {
            out.push_str(&format!("  {:?} by {}\n", f.margins, f.witness));
        }
        out.push_str(&format!(
            "best worst-case margin {} by {} {:?}\n",
            self.best_min_margin, self.best_min_witness, self.best_min_margins
        ));
        out.push_str(&format!(
            "no tree beats one target without losing to another: {}\n",
            if self.holds { "holds" } else { "fails" }
        ));
        out
    }
}

pub fn verify_joint_no_dominator(targets: &[Entrant], u: &Universe) -> Result<JointReport> {
    let trees: Vec<DecisionTree> = targets.iter().map(|e| e.tree.clone()).collect();
    let mut solver = JointSolver::new(&trees, u)?;
    let points = solver.root_frontier();
    let witnesses = solver.root_witnesses();
    let best = solver.best_worst_case();
    let holds = !points
        .iter()
        .any(|m| m.iter().all(|&v| v >= 0) && m.iter().any(|&v| v > 0));
    Ok(JointReport {
        targets: targets.iter().map(|e| e.label.clone()).collect(),
        holds,
        best_min_margin: best.min_margin,
        best_min_witness: format_tree(&best.witness, u),
        best_min_margins: best.margins,
        frontier: points
            .into_iter()
            .zip(&witnesses)
            .map(|(margins, w)| FrontierEntry {
                margins,
                witness: format_tree(w, u),
            })
            .collect(),
        states_explored: solver.states_explored(),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::patterns::theorem1_universe;
    use crate::recognizers::builtin::*;
    use crate::recognizers::{check_correct, parse_tree};
    use crate::tournament::compare;

    fn micro_l1() -> Universe {
        Universe::from_text("L=1\na0: 1\na1: 0\n").unwrap()
    }

    fn micro_l2() -> Universe {
        Universe::from_text("L=2\na0: 1B\na1: 01\na2: 00\n").unwrap()
    }

    #[test]
    fn micro_universe_counts() {
        let u = micro_l1();
        let e = enumerate_reduced_trees(&u, 10).unwrap();
        assert_eq!(e.total, BigUint::from(1u8));
        assert_eq!(e.trees, vec![parse_tree("(P1 a0 a1)", &u).unwrap()]);

        let u = micro_l2();
        let e = enumerate_reduced_trees(&u, 10).unwrap();
        assert_eq!(e.total, BigUint::from(2u8));
        let dsl: Vec<_> = e.trees.iter().map(|t| format_tree(t, &u)).collect();
        assert_eq!(dsl, ["(P1 a0 (P2 a1 a2))", "(P2 (P1 a0 a1) (P1 a0 a2))"]);
    }

    #[test]
    fn each_of_the_three_loses_to_its_predecessor() {
        let u = theorem1_universe();
        let (a, b, c) = (algorithm_a(), algorithm_b(), algorithm_c());
        for (target, pred) in [(&a, &c), (&b, &a), (&c, &b)] {
            let r = max_margin_vs(target, &u).unwrap();
            let lower = compare(pred, target, &u).unwrap().margin();
            assert_eq!(lower, 8);
            assert_eq!(r.margin, 8);
            assert!(check_correct(&r.witness, &u).unwrap().is_correct());
            assert!(r.witness.is_reduced(&u));
            assert_eq!(compare(&r.witness, target, &u).unwrap().margin(), r.margin);
        }
    }

    #[test]
    fn joint_frontier_of_the_three() {
        let u = theorem1_universe();
        let targets = [algorithm_a(), algorithm_b(), algorithm_c()];
        let mut solver = JointSolver::new(&targets, &u).unwrap();
        let mut frontier = solver.root_frontier();
        let witnesses = solver.root_witnesses();
        for (m, w) in frontier.iter().zip(&witnesses) {
            assert!(check_correct(w, &u).unwrap().is_correct());
            let got: Vec<i64> = targets
                .iter()
                .map(|t| compare(w, t, &u).unwrap().margin())
                .collect();
            assert_eq!(&got, m);
        }
        frontier.sort();
        assert_eq!(
            frontier,
            vec![
                vec![-8, 0, 8],
                vec![0, 0, 0],
                vec![0, 8, -8],
                vec![8, -8, 0]
            ]
        );
        let best = solver.best_worst_case();
        assert_eq!(best.min_margin, 0);
        let reverse = parse_tree("(P1 a0 (P4 a2 (P2 a1 a3)))", &u).unwrap();
        for t in &targets {
            assert_eq!(compare(&reverse, t, &u).unwrap().margin(), 0);
        }
    }

    #[test]
    fn split_then_peel_is_dominated() {
        let u = theorem1_universe();
        let r = max_margin_vs(&split_then_peel(), &u).unwrap();
        assert!(r.margin >= 8, "margin {}", r.margin);
        assert_eq!(
            compare(&r.witness, &split_then_peel(), &u)
                .unwrap()
                .margin(),
            r.margin
        );
        let report =
            verify_no_dominator(&[Entrant::new("split-peel", split_then_peel())], &u).unwrap();
        assert!(!report.holds);
    }

    #[test]
    fn leaf_target_on_single_image() {
        let u = Universe::from_text("L=2\nonly: BB\n").unwrap();
        let r = max_margin_vs(&DecisionTree::leaf(0), &u).unwrap();
        assert_eq!(r.margin, 0);
        assert_eq!(r.witness, DecisionTree::leaf(0));
        let report =
            verify_no_dominator(&[Entrant::new("leaf", DecisionTree::leaf(0))], &u).unwrap();
        assert!(report.holds);
    }

    #[test]
    fn capacity_and_correctness_errors() {
        let big = crate::patterns::theorem2_universe(4).unwrap();
        assert!(matches!(
            max_margin_vs(&crate::recognizers::spine_algorithm(4, 0).unwrap(), &big),
            Err(Error::Capacity(_))
        ));
        let u = theorem1_universe();
        assert!(matches!(
            max_margin_vs(&algorithm_c_misprinted(), &u),
            Err(Error::Incorrect(_))
        ));
    }

    #[test]
    fn builtins_are_in_the_enumerated_class() {
        let u = theorem1_universe();
        for t in [
            algorithm_a(),
            algorithm_b(),
            algorithm_c(),
            split_then_peel(),
            split_then_separate(),
        ] {
            assert!(is_enumerated_form(&t, &u).unwrap());
        }
        assert!(!is_enumerated_form(&algorithm_c_misprinted(), &u).unwrap());
    }
}
