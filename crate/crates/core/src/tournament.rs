//! Win counts, the preference relation and cycle checks.
//!
//! `V(A, B)` is the number of patterns on which `A` is strictly faster than
//! `B`. `A` is better than `B` when `V(A, B) > V(B, A)` and the two are
//! equivalent when the counts agree. Patterns where both take the same time
//! are ties and count for neither side.

use num_bigint::BigUint;
use num_traits::{ToPrimitive, Zero};
use serde::{Serialize, Serializer};

use crate::error::{Error, Result};
use crate::patterns::{CyclicFamily, Universe};
use crate::recognizers::{format_tree, spine_time, time_profile, DecisionTree, TimeProfile};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum PreferenceOutcome {
    FirstBetter,
    SecondBetter,
    Equivalent,
}

impl PreferenceOutcome {
    pub fn from_counts<T: Ord>(forward: &T, backward: &T) -> Self {
        match forward.cmp(backward) {
            std::cmp::Ordering::Greater => PreferenceOutcome::FirstBetter,
            std::cmp::Ordering::Less => PreferenceOutcome::SecondBetter,
            std::cmp::Ordering::Equal => PreferenceOutcome::Equivalent,
        }
    }

    pub fn mirror(self) -> Self {
        match self {
            PreferenceOutcome::FirstBetter => PreferenceOutcome::SecondBetter,
            PreferenceOutcome::SecondBetter => PreferenceOutcome::FirstBetter,
            PreferenceOutcome::Equivalent => PreferenceOutcome::Equivalent,
        }
    }

    pub fn as_str(self) -> &'static str {
        match self {
            PreferenceOutcome::FirstBetter => "first_better",
            PreferenceOutcome::SecondBetter => "second_better",
            PreferenceOutcome::Equivalent => "equivalent",
        }
    }
}

impl std::fmt::Display for PreferenceOutcome {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(self.as_str())
    }
}

/// Outcome of one pairwise comparison, with the counts behind it.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct Comparison {
    pub outcome: PreferenceOutcome,
    pub wins_first: u64,
    pub wins_second: u64,
    pub ties: u64,
}

impl Comparison {
    pub fn mirror(self) -> Self {
        Comparison {
            outcome: self.outcome.mirror(),
            wins_first: self.wins_second,
            wins_second: self.wins_first,
            ties: self.ties,
        }
    }

    /// `V(first, second) - V(second, first)`.
    pub fn margin(&self) -> i64 {
        self.wins_first as i64 - self.wins_second as i64
    }
}

impl std::fmt::Display for Comparison {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(
            f,
            "{} ({} vs {}, {} tied)",
            self.outcome, self.wins_first, self.wins_second, self.ties
        )
    }
}

/// Compares two time profiles over the same universe.
pub fn compare_profiles(a: &TimeProfile, b: &TimeProfile) -> Comparison {
    let (mut fa, mut fb, mut ties) = (0u64, 0u64, 0u64);
    for (ta, tb) in a.per_pattern.iter().zip(&b.per_pattern) {
        match ta.cmp(tb) {
            std::cmp::Ordering::Less => fa += 1,
            std::cmp::Ordering::Greater => fb += 1,
            std::cmp::Ordering::Equal => ties += 1,
        }
    }
    Comparison {
        outcome: PreferenceOutcome::from_counts(&fa, &fb),
        wins_first: fa,
        wins_second: fb,
        ties,
    }
}

/// `(V(a, b), V(b, a))` over every pattern of `u`.
pub fn pairwise_wins(a: &DecisionTree, b: &DecisionTree, u: &Universe) -> Result<(u64, u64)> {
    let c = compare(a, b, u)?;
    Ok((c.wins_first, c.wins_second))
}

pub fn compare(a: &DecisionTree, b: &DecisionTree, u: &Universe) -> Result<Comparison> {
    Ok(compare_profiles(&time_profile(a, u)?, &time_profile(b, u)?))
}

/// A labelled recognizer taking part in a tournament.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Entrant {
    pub label: String,
    pub tree: DecisionTree,
}

impl Entrant {
    pub fn new(label: impl Into<String>, tree: DecisionTree) -> Self {
        Entrant {
            label: label.into(),
            tree,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct AlgorithmEntry {
    pub label: String,
    pub tree: String,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct PairOutcome {
    pub first: String,
    pub second: String,
    pub outcome: PreferenceOutcome,
    pub wins_first: u64,
    pub wins_second: u64,
    pub ties: u64,
}

/// Pairwise results over a list of recognizers, in input order.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct TournamentMatrix {
    pub algorithms: Vec<AlgorithmEntry>,
    /// `wins[i][j] = V(A_i, A_j)`.
    pub wins: Vec<Vec<u64>>,
    pub ties: Vec<Vec<u64>>,
    /// One entry per unordered pair `i < j`.
    pub outcomes: Vec<PairOutcome>,
}

impl TournamentMatrix {
    pub fn size(&self) -> usize {
        self.algorithms.len()
    }

    /// Aligned text: the win matrix followed by one line per pair.
    pub fn to_text(&self) -> String {
        let labels: Vec<&str> = self.algorithms.iter().map(|a| a.label.as_str()).collect();
        let rows: Vec<Vec<String>> = self
            .wins
            .iter()
            .enumerate()
            .map(|(i, row)| {
                row.iter()
                    .enumerate()
                    .map(|(j, w)| {
                        if i == j {
                            "-".to_string()
                        } else {
                            w.to_string()
                        }
                    })
                    .collect()
            })
            .collect();
        let mut out = render_grid("V(row,col)", &labels, &labels, &rows);
        for p in &self.outcomes {
            out.push_str(&format!(
                "{} vs {}: {} ({} vs {}, {} tied)\n",
                p.first, p.second, p.outcome, p.wins_first, p.wins_second, p.ties
            ));
        }
        out
    }

    pub fn to_dsv(&self, delimiter: char) -> String {
        let labels: Vec<&str> = self.algorithms.iter().map(|a| a.label.as_str()).collect();
        let rows: Vec<Vec<String>> = self
            .wins
            .iter()
            .map(|row| row.iter().map(u64::to_string).collect())
            .collect();
        render_dsv("V(row,col)", &labels, &labels, &rows, delimiter)
    }
}

pub fn tournament(entrants: &[Entrant], u: &Universe) -> Result<TournamentMatrix> {
    let profiles = entrants
        .iter()
        .map(|e| time_profile(&e.tree, u))
        .collect::<Result<Vec<_>>>()?;
    let k = entrants.len();
    let mut wins = vec![vec![0u64; k]; k];
    let mut ties = vec![vec![0u64; k]; k];
    let mut outcomes = Vec::new();
    for i in 0..k {
        ties[i][i] = u.len() as u64;
        for j in (i + 1)..k {
            let c = compare_profiles(&profiles[i], &profiles[j]);
            wins[i][j] = c.wins_first;
            wins[j][i] = c.wins_second;
            ties[i][j] = c.ties;
            ties[j][i] = c.ties;
            outcomes.push(PairOutcome {
                first: entrants[i].label.clone(),
                second: entrants[j].label.clone(),
                outcome: c.outcome,
                wins_first: c.wins_first,
                wins_second: c.wins_second,
                ties: c.ties,
            });
        }
    }
    Ok(TournamentMatrix {
        algorithms: entrants
            .iter()
            .map(|e| AlgorithmEntry {
                label: e.label.clone(),
                tree: format_tree(&e.tree, u),
            })
            .collect(),
        wins,
        ties,
        outcomes,
    })
}

fn serialize_count<S: Serializer>(v: &BigUint, s: S) -> std::result::Result<S::Ok, S::Error> {
    match v.to_u64() {
        Some(x) => s.serialize_u64(x),
        None => s.serialize_str(&v.to_string()),
    }
}

/// One link `from -> to` of a cycle check.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct CycleStep {
    pub from: String,
    pub to: String,
    #[serde(serialize_with = "serialize_count")]
    pub wins_forward: BigUint,
    #[serde(serialize_with = "serialize_count")]
    pub wins_backward: BigUint,
    #[serde(serialize_with = "serialize_count")]
    pub ties: BigUint,
    pub outcome: PreferenceOutcome,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct CycleTrace {
    /// True iff every link is `first_better`.
    pub holds: bool,
    pub steps: Vec<CycleStep>,
}

impl CycleTrace {
    fn from_steps(steps: Vec<CycleStep>) -> Self {
        CycleTrace {
            holds: steps
                .iter()
                .all(|s| s.outcome == PreferenceOutcome::FirstBetter),
            steps,
        }
    }

    pub fn to_text(&self) -> String {
        let mut out = String::new();
        for s in &self.steps {
            out.push_str(&format!(
                "{} vs {}: {} ({} vs {}, {} tied)\n",
                s.from, s.to, s.outcome, s.wins_forward, s.wins_backward, s.ties
            ));
        }
        out.push_str(&format!(
            "cycle: {}\n",
            if self.holds { "holds" } else { "broken" }
        ));
        out
    }
}

/// Checks `A_0 ≪ A_1 ≪ … ≪ A_(k-1) ≪ A_0` pattern by pattern.
pub fn verify_cycle(entrants: &[Entrant], u: &Universe) -> Result<CycleTrace> {
    if entrants.len() < 2 {
        return Err(Error::domain("a cycle needs at least two algorithms"));
    }
    let profiles = entrants
        .iter()
        .map(|e| time_profile(&e.tree, u))
        .collect::<Result<Vec<_>>>()?;
    let k = entrants.len();
    let steps = (0..k)
        .map(|i| {
            let j = (i + 1) % k;
            let c = compare_profiles(&profiles[i], &profiles[j]);
            CycleStep {
                from: entrants[i].label.clone(),
                to: entrants[j].label.clone(),
                wins_forward: c.wins_first.into(),
                wins_backward: c.wins_second.into(),
                ties: c.ties.into(),
                outcome: c.outcome,
            }
        })
        .collect();
    Ok(CycleTrace::from_steps(steps))
}

/// `(V(A_p, A_q), V(A_q, A_p))` for spines of the size-`n` cyclic family,
/// from per-image times and image sizes alone.
pub fn image_level_wins(n: usize, p: usize, q: usize) -> Result<(BigUint, BigUint)> {
    let (forward, backward, _) = image_level_counts(n, p, q)?;
    Ok((forward, backward))
}

/// Like [`image_level_wins`], also returning the tie count.
pub fn image_level_counts(n: usize, p: usize, q: usize) -> Result<(BigUint, BigUint, BigUint)> {
    let family = CyclicFamily::new(n)?;
    if p >= n || q >= n {
        return Err(Error::domain(format!("spine index outside 0..{n}")));
    }
    let (mut forward, mut backward, mut ties) = (BigUint::zero(), BigUint::zero(), BigUint::zero());
    for j in 0..=n {
        let size = family.image_size(j);
        match spine_time(n, p, j).cmp(&spine_time(n, q, j)) {
            std::cmp::Ordering::Less => forward += size,
            std::cmp::Ordering::Greater => backward += size,
            std::cmp::Ordering::Equal => ties += size,
        }
    }
    Ok((forward, backward, ties))
}

/// Cycle check over spines `A_0 … A_(n-1)` using image-level counts.
pub fn verify_spine_cycle_image_level(n: usize) -> Result<CycleTrace> {
    CyclicFamily::new(n)?;
    let steps = (0..n)
        .map(|q| {
            let next = (q + 1) % n;
            let (forward, backward, ties) = image_level_counts(n, q, next)?;
            Ok(CycleStep {
                from: format!("A{q}"),
                to: format!("A{next}"),
                outcome: PreferenceOutcome::from_counts(&forward, &backward),
                wins_forward: forward,
                wins_backward: backward,
                ties,
            })
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(CycleTrace::from_steps(steps))
}

/// Recognition times laid out with images as rows and algorithms as columns.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct TimeTable {
    pub images: Vec<String>,
    pub algorithms: Vec<AlgorithmEntry>,
    /// `cells[image][algorithm]`, rendered as `t` or `t1/t2`.
    pub cells: Vec<Vec<String>>,
}

impl TimeTable {
    pub fn to_text(&self) -> String {
        let cols: Vec<&str> = self.algorithms.iter().map(|a| a.label.as_str()).collect();
        let rows: Vec<&str> = self.images.iter().map(String::as_str).collect();
        render_grid("image", &rows, &cols, &self.cells)
    }

    pub fn to_dsv(&self, delimiter: char) -> String {
        let cols: Vec<&str> = self.algorithms.iter().map(|a| a.label.as_str()).collect();
        let rows: Vec<&str> = self.images.iter().map(String::as_str).collect();
        render_dsv("image", &rows, &cols, &self.cells, delimiter)
    }
}

pub fn render_time_table(entrants: &[Entrant], u: &Universe) -> Result<TimeTable> {
    let profiles = entrants
        .iter()
        .map(|e| time_profile(&e.tree, u))
        .collect::<Result<Vec<_>>>()?;
    let cells = (0..u.images().len())
        .map(|i| profiles.iter().map(|p| p.per_image[i].render()).collect())
        .collect();
    Ok(TimeTable {
        images: u.images().iter().map(|d| d.name.clone()).collect(),
        algorithms: entrants
            .iter()
            .map(|e| AlgorithmEntry {
                label: e.label.clone(),
                tree: format_tree(&e.tree, u),
            })
            .collect(),
        cells,
    })
}

fn render_grid(corner: &str, rows: &[&str], cols: &[&str], cells: &[Vec<String>]) -> String {
    let first = rows
        .iter()
        .map(|r| r.len())
        .chain([corner.len()])
        .max()
        .unwrap_or(0);
    let widths: Vec<usize> = cols
        .iter()
        .enumerate()
        .map(|(j, c)| {
            cells
                .iter()
                .map(|row| row[j].len())
                .chain([c.len()])
                .max()
                .unwrap_or(0)
        })
        .collect();
    let line = |head: &str, items: Vec<&str>| {
        let mut s = format!("{head:<first$}");
        for (item, w) in items.iter().zip(&widths) {
            s.push_str(&format!("  {item:>w$}"));
        }
        s.push('\n');
        s
    };
    let mut out = line(corner, cols.to_vec());
    for (r, row) in rows.iter().zip(cells) {
        out.push_str(&line(r, row.iter().map(String::as_str).collect()));
    }
    out
}

fn render_dsv(
    corner: &str,
    rows: &[&str],
    cols: &[&str],
    cells: &[Vec<String>],
    delimiter: char,
) -> String {
    let d = delimiter.to_string();
    let mut out = std::iter::once(corner)
        .chain(cols.iter().copied())
        .collect::<Vec<_>>()
        .join(&d);
    out.push('\n');
    for (r, row) in rows.iter().zip(cells) {
        out.push_str(r);
        for c in row {
            out.push_str(&d);
            out.push_str(c);
        }
        out.push('\n');
    }
    out
}
