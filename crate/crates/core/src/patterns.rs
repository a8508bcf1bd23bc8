//! Patterns, wildcard templates, images and universes.
//!
//! A pattern is a fixed-length bit vector; sign `k` (1-based, position 1 is
//! the leftmost character) reads bit `k`. An image is a set of patterns given
//! by one or more templates over `{0, 1, B}`, where `B` is a wildcard. A
//! universe is a list of pairwise disjoint images sharing one sign arity.

use std::collections::HashMap;
use std::fmt;
use std::str::FromStr;

use num_bigint::BigUint;
use rand::Rng;
use sha2::{Digest, Sha256};

use crate::error::{Error, Result};

/// Largest supported sign arity (patterns are packed into a `u128`).
pub const MAX_SIGNS: usize = 128;

/// Upper bound on the number of patterns a universe may expand to.
pub const MAX_EXPANDED_PATTERNS: usize = 1 << 24;

/// Per-image wildcard budget for the block-cyclic family: `n(n-1)/2` must not
/// exceed this.
pub const MAX_FAMILY_WILDCARDS: usize = 62;

/// A fixed-length binary pattern.
///
/// Bits are packed most-significant-first, so the derived ordering is the
/// lexicographic order of the textual form for equal lengths.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Pattern {
    len: u8,
    bits: u128,
}

impl Pattern {
    pub fn zeros(len: usize) -> Result<Self> {
        check_arity(len)?;
        Ok(Pattern {
            len: len as u8,
            bits: 0,
        })
    }

    pub fn from_bits(bits: &[bool]) -> Result<Self> {
        check_arity(bits.len())?;
        let packed = bits.iter().fold(0u128, |acc, &b| (acc << 1) | b as u128);
        Ok(Pattern {
            len: bits.len() as u8,
            bits: packed,
        })
    }

    pub fn len(&self) -> usize {
        self.len as usize
    }

    pub fn is_empty(&self) -> bool {
        self.len == 0
    }

    /// Value of sign `k`, or an error when `k` is outside `1..=len`.
    pub fn bit(&self, k: usize) -> Result<bool> {
        if k == 0 || k > self.len() {
            return Err(Error::domain(format!(
                "sign index {k} outside 1..={}",
                self.len()
            )));
        }
        Ok(self.bit_unchecked(k))
    }

    /// Like [`Pattern::bit`], but out-of-range positions read as `false`.
    #[inline]
    pub fn bit_unchecked(&self, k: usize) -> bool {
        if k == 0 || k > self.len() {
            return false;
        }
        (self.bits >> (self.len() - k)) & 1 == 1
    }

    pub fn bits(&self) -> Vec<bool> {
        (1..=self.len()).map(|k| self.bit_unchecked(k)).collect()
    }
}

impl fmt::Display for Pattern {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for k in 1..=self.len() {
            f.write_str(if self.bit_unchecked(k) { "1" } else { "0" })?;
        }
        Ok(())
    }
}

impl FromStr for Pattern {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let bits = s
            .trim()
            .chars()
            .map(|c| match c {
                '0' => Ok(false),
                '1' => Ok(true),
                other => Err(Error::format(format!("invalid pattern symbol {other:?}"))),
            })
            .collect::<Result<Vec<_>>>()?;
        if bits.is_empty() {
            return Err(Error::format("empty pattern"));
        }
        Pattern::from_bits(&bits)
    }
}

fn check_arity(len: usize) -> Result<()> {
    if len > MAX_SIGNS {
        return Err(Error::capacity(format!(
            "sign arity {len} exceeds the supported maximum of {MAX_SIGNS}"
        )));
    }
    Ok(())
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Symbol {
    Zero,
    One,
    Wild,
}

/// A wildcard string over `{0, 1, B}`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Template {
    symbols: Vec<Symbol>,
}

impl Template {
    pub fn new(symbols: Vec<Symbol>) -> Result<Self> {
        if symbols.is_empty() {
            return Err(Error::format("empty template"));
        }
        check_arity(symbols.len())?;
        Ok(Template { symbols })
    }

    pub fn len(&self) -> usize {
        self.symbols.len()
    }

    pub fn is_empty(&self) -> bool {
        self.symbols.is_empty()
    }

    pub fn symbols(&self) -> &[Symbol] {
        &self.symbols
    }

    pub fn wildcard_count(&self) -> usize {
        self.symbols.iter().filter(|&&s| s == Symbol::Wild).count()
    }

    /// Number of patterns the template stands for, `2^wildcards`.
    pub fn expansion_size(&self) -> BigUint {
        BigUint::from(1u8) << self.wildcard_count()
    }

    pub fn matches(&self, x: &Pattern) -> bool {
        x.len() == self.len()
            && self.symbols.iter().enumerate().all(|(i, s)| match s {
                Symbol::Wild => true,
                Symbol::One => x.bit_unchecked(i + 1),
                Symbol::Zero => !x.bit_unchecked(i + 1),
            })
    }

    fn fixed_bits(&self) -> u128 {
        self.symbols
            .iter()
            .fold(0u128, |acc, &s| (acc << 1) | (s == Symbol::One) as u128)
    }

    /// Bit offsets (from the least significant end) of the wildcards.
    fn wild_offsets(&self) -> Vec<usize> {
        let len = self.len();
        self.symbols
            .iter()
            .enumerate()
            .filter(|(_, &s)| s == Symbol::Wild)
            .map(|(i, _)| len - 1 - i)
            .collect()
    }

    /// All instantiations of the wildcards, in ascending order.
    pub fn expand(&self) -> Result<Vec<Pattern>> {
        let k = self.wildcard_count();
        if k > MAX_FAMILY_WILDCARDS || (1usize << k) > MAX_EXPANDED_PATTERNS {
            return Err(Error::capacity(format!(
                "template {self} expands to 2^{k} patterns"
            )));
        }
        let base = self.fixed_bits();
        // Descending offsets so that the assignment counter maps onto bits in
        // significance order and the output comes out sorted.
        let offsets = self.wild_offsets();
        let len = self.len() as u8;
        let patterns = (0u64..(1u64 << k))
            .map(|assignment| {
                let mut bits = base;
                for (j, &off) in offsets.iter().enumerate() {
                    if (assignment >> (k - 1 - j)) & 1 == 1 {
                        bits |= 1u128 << off;
                    }
                }
                Pattern { len, bits }
            })
            .collect();
        Ok(patterns)
    }

    /// A uniformly random instantiation.
    pub fn sample<R: Rng + ?Sized>(&self, rng: &mut R) -> Pattern {
        let mut bits = self.fixed_bits();
        for off in self.wild_offsets() {
            if rng.random::<bool>() {
                bits |= 1u128 << off;
            }
        }
        Pattern {
            len: self.len() as u8,
            bits,
        }
    }
}

impl fmt::Display for Template {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for s in &self.symbols {
            f.write_str(match s {
                Symbol::Zero => "0",
                Symbol::One => "1",
                Symbol::Wild => "B",
            })?;
        }
        Ok(())
    }
}

impl FromStr for Template {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let symbols = s
            .trim()
            .chars()
            .map(|c| match c {
                '0' => Ok(Symbol::Zero),
                '1' => Ok(Symbol::One),
                'B' | '*' => Ok(Symbol::Wild),
                other => Err(Error::format(format!(
                    "invalid template symbol {other:?} in {s:?}"
                ))),
            })
            .collect::<Result<Vec<_>>>()?;
        Template::new(symbols)
    }
}

/// Expands a textual template; `*` is accepted as a wildcard alongside `B`.
pub fn expand_template(text: &str) -> Result<Vec<Pattern>> {
    text.parse::<Template>()?.expand()
}

/// One class of the universe.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ImageDef {
    pub index: usize,
    pub name: String,
    pub templates: Vec<Template>,
    /// Sorted, duplicate-free union of the template expansions.
    pub patterns: Vec<Pattern>,
}

impl ImageDef {
    pub fn len(&self) -> usize {
        self.patterns.len()
    }

    pub fn is_empty(&self) -> bool {
        self.patterns.is_empty()
    }
}

/// A finite pattern set partitioned into named images.
///
/// Patterns carry a dense ordinal (their rank in lexicographic order), which
/// the adversary search uses for subset bitmasks.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Universe {
    sign_count: usize,
    images: Vec<ImageDef>,
    patterns: Vec<Pattern>,
    labels: Vec<usize>,
}

fn valid_name(name: &str) -> bool {
    !name.is_empty()
        && name
            .chars()
            .all(|c| c.is_ascii_alphanumeric() || matches!(c, '_' | '-' | '.'))
}

impl Universe {
    /// Builds a universe from `(name, templates)` pairs, in image order.
    pub fn new(sign_count: usize, images: Vec<(String, Vec<Template>)>) -> Result<Self> {
        if sign_count == 0 {
            return Err(Error::domain("sign arity must be at least 1"));
        }
        check_arity(sign_count)?;
        if images.is_empty() {
            return Err(Error::domain("a universe needs at least one image"));
        }

        let mut seen_names = HashMap::new();
        let mut defs = Vec::with_capacity(images.len());
        let mut total = 0usize;
        for (index, (name, templates)) in images.into_iter().enumerate() {
            if !valid_name(&name) {
                return Err(Error::format(format!("invalid image name {name:?}")));
            }
            if seen_names.insert(name.clone(), index).is_some() {
                return Err(Error::format(format!("duplicate image name {name:?}")));
            }
            if templates.is_empty() {
                return Err(Error::format(format!("image {name:?} has no templates")));
            }
            let mut patterns = Vec::new();
            for t in &templates {
                if t.len() != sign_count {
                    return Err(Error::format(format!(
                        "template {t} of image {name:?} has length {}, expected {sign_count}",
                        t.len()
                    )));
                }
                let expanded = t.expand()?;
                if total + patterns.len() + expanded.len() > MAX_EXPANDED_PATTERNS {
                    return Err(Error::capacity(format!(
                        "universe would exceed {MAX_EXPANDED_PATTERNS} patterns"
                    )));
                }
                patterns.extend(expanded);
            }
            patterns.sort_unstable();
            patterns.dedup();
            total += patterns.len();
            defs.push(ImageDef {
                index,
                name,
                templates,
                patterns,
            });
        }

        let mut tagged: Vec<(Pattern, usize)> = defs
            .iter()
            .flat_map(|d| d.patterns.iter().map(move |&p| (p, d.index)))
            .collect();
        tagged.sort_unstable();
        for w in tagged.windows(2) {
            if w[0].0 == w[1].0 {
                return Err(Error::Overlap {
                    first: defs[w[0].1].name.clone(),
                    second: defs[w[1].1].name.clone(),
                    pattern: w[0].0.to_string(),
                });
            }
        }
        let (patterns, labels) = tagged.into_iter().unzip();

        Ok(Universe {
            sign_count,
            images: defs,
            patterns,
            labels,
        })
    }

    /// Sign arity `L`.
    pub fn sign_count(&self) -> usize {
        self.sign_count
    }

    pub fn images(&self) -> &[ImageDef] {
        &self.images
    }

    pub fn image(&self, index: usize) -> Option<&ImageDef> {
        self.images.get(index)
    }

    pub fn image_index(&self, name: &str) -> Option<usize> {
        self.images.iter().position(|d| d.name == name)
    }

    pub fn image_names(&self) -> Vec<&str> {
        self.images.iter().map(|d| d.name.as_str()).collect()
    }

    /// All patterns in ordinal order.
    pub fn patterns(&self) -> &[Pattern] {
        &self.patterns
    }

    /// Image index of each pattern, aligned with [`Universe::patterns`].
    pub fn labels(&self) -> &[usize] {
        &self.labels
    }

    pub fn len(&self) -> usize {
        self.patterns.len()
    }

    pub fn is_empty(&self) -> bool {
        self.patterns.is_empty()
    }

    pub fn ordinal(&self, x: &Pattern) -> Option<usize> {
        self.patterns.binary_search(x).ok()
    }

    pub fn image_of(&self, x: &Pattern) -> Option<usize> {
        self.ordinal(x).map(|o| self.labels[o])
    }

    pub fn image_sizes(&self) -> Vec<usize> {
        self.images.iter().map(ImageDef::len).collect()
    }

    /// Parses the line-oriented universe file format:
    ///
    /// ```text
    /// L=9
    /// # comment
    /// a0: 1BB01B001
    /// ```
    ///
    /// Repeated image names accumulate templates.
    pub fn from_text(text: &str) -> Result<Self> {
        let mut sign_count = None;
        let mut order: Vec<String> = Vec::new();
        let mut templates: HashMap<String, Vec<Template>> = HashMap::new();
        for (lineno, raw) in text.lines().enumerate() {
            let line = raw.trim();
            if line.is_empty() || line.starts_with('#') {
                continue;
            }
            let at = |msg: String| Error::format(format!("line {}: {msg}", lineno + 1));
            match sign_count {
                None => {
                    let value = line
                        .strip_prefix("L=")
                        .ok_or_else(|| at(format!("expected `L=<integer>`, found {line:?}")))?;
                    let l = value
                        .trim()
                        .parse::<usize>()
                        .map_err(|e| at(format!("bad sign arity {value:?}: {e}")))?;
                    sign_count = Some(l);
                }
                Some(_) => {
                    let (name, template) = line.split_once(':').ok_or_else(|| {
                        at(format!("expected `<image>: <template>`, found {line:?}"))
                    })?;
                    let name = name.trim().to_string();
                    let template = template
                        .trim()
                        .parse::<Template>()
                        .map_err(|e| at(e.to_string()))?;
                    if !templates.contains_key(&name) {
                        order.push(name.clone());
                    }
                    templates.entry(name).or_default().push(template);
                }
            }
        }
        let sign_count = sign_count.ok_or_else(|| Error::format("missing `L=<integer>` line"))?;
        let images = order
            .into_iter()
            .map(|name| {
                let ts = templates.remove(&name).unwrap_or_default();
                (name, ts)
            })
            .collect();
        Universe::new(sign_count, images)
    }

    /// Canonical text form; `Universe::from_text(&u.to_text()) == u`.
    pub fn to_text(&self) -> String {
        let mut out = format!("L={}\n", self.sign_count);
        for d in &self.images {
            for t in &d.templates {
                out.push_str(&format!("{}: {}\n", d.name, t));
            }
        }
        out
    }

    /// Hex SHA-256 of the canonical text form.
    pub fn fingerprint(&self) -> String {
        hex::encode(Sha256::digest(self.to_text().as_bytes()))
    }
}

/// Value of sign `k` on `x`: true iff bit `k` is 1.
pub fn eval_sign(k: usize, x: &Pattern) -> Result<bool> {
    x.bit(k)
}

/// Sign index of position `m` in block `i` of an `n²`-bit pattern: `n·i + m`.
pub fn sign_from_block(n: usize, i: usize, m: usize) -> Result<usize> {
    if i >= n {
        return Err(Error::domain(format!("block {i} outside 0..{n}")));
    }
    if m == 0 || m > n {
        return Err(Error::domain(format!("position {m} outside 1..={n}")));
    }
    Ok(n * i + m)
}

fn template_of(text: &str) -> Template {
    text.parse().expect("builtin template is well formed")
}

/// The 25-pattern, four-image universe over nine signs.
pub fn theorem1_universe() -> Universe {
    let images = [
        ("a0", "1BB01B001"),
        ("a1", "01B0011BB"),
        ("a2", "0011BB01B"),
        ("a3", "000000000"),
    ]
    .into_iter()
    .map(|(name, t)| (name.to_string(), vec![template_of(t)]))
    .collect();
    Universe::new(9, images).expect("builtin universe is valid")
}

/// The block-cyclic family of `n + 1` images over `n²` signs.
///
/// Block `v_i = 0^(i-1) 1 B^(n-i)`; image `j < n` is the cyclic shift
/// `v_(j+1) … v_n v_1 … v_j`, image `n` is all zeros.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct CyclicFamily {
    n: usize,
}

impl CyclicFamily {
    pub fn new(n: usize) -> Result<Self> {
        if n < 3 {
            return Err(Error::domain(format!(
                "family parameter n={n} must be at least 3"
            )));
        }
        Ok(CyclicFamily { n })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    /// Number of images, `n + 1`.
    pub fn image_count(&self) -> usize {
        self.n + 1
    }

    /// Wildcards per non-zero image, `n(n-1)/2`.
    pub fn wildcards_per_image(&self) -> usize {
        self.n * (self.n - 1) / 2
    }

    pub fn image_size(&self, j: usize) -> BigUint {
        if j < self.n {
            BigUint::from(1u8) << self.wildcards_per_image()
        } else {
            BigUint::from(1u8)
        }
    }

    pub fn total_size(&self) -> BigUint {
        (0..=self.n).map(|j| self.image_size(j)).sum()
    }

    fn block(&self, i: usize) -> Vec<Symbol> {
        let mut b = vec![Symbol::Zero; i - 1];
        b.push(Symbol::One);
        b.extend(std::iter::repeat_n(Symbol::Wild, self.n - i));
        b
    }

    /// Template of image `j` (`0..=n`). Requires `n² ≤` [`MAX_SIGNS`].
    pub fn image_template(&self, j: usize) -> Result<Template> {
        if j > self.n {
            return Err(Error::domain(format!("image {j} outside 0..={}", self.n)));
        }
        check_arity(self.n * self.n)?;
        if j == self.n {
            return Template::new(vec![Symbol::Zero; self.n * self.n]);
        }
        let symbols = (0..self.n)
            .flat_map(|i| self.block((j + i) % self.n + 1))
            .collect();
        Template::new(symbols)
    }

    /// Expands the family into a concrete universe with images `a0..a{n}`.
    pub fn universe(&self) -> Result<Universe> {
        if self.wildcards_per_image() > MAX_FAMILY_WILDCARDS {
            return Err(Error::capacity(format!(
                "n={} needs 2^{} patterns per image; the limit is 2^{MAX_FAMILY_WILDCARDS}",
                self.n,
                self.wildcards_per_image()
            )));
        }
        let images = (0..=self.n)
            .map(|j| Ok((format!("a{j}"), vec![self.image_template(j)?])))
            .collect::<Result<Vec<_>>>()?;
        Universe::new(self.n * self.n, images)
    }
}

/// `CyclicFamily::new(n)?.universe()`.
pub fn theorem2_universe(n: usize) -> Result<Universe> {
    CyclicFamily::new(n)?.universe()
}
