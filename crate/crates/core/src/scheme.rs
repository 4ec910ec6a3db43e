//! Words of the q-ary hypercube and the regions the reconstruction walks over:
//! spheres, balls, faces (subcubes) and full-support sets.
//!
//! Words are stored densely by their base-q rank, with position 1 as the most
//! significant digit, so lexicographic order of words and numeric order of
//! ranks coincide. Positions are 1-based wherever they cross the public API.

use std::fmt;

use crate::error::{Error, Result};

/// Default cap on `q^n`.
pub const DEFAULT_MAX_STATES: usize = 4096 * 16;

/// Environment variable overriding [`DEFAULT_MAX_STATES`].
pub const MAX_STATES_ENV: &str = "HAMRECON_MAX_STATES";

const DIGITS: &[u8; 36] = b"0123456789abcdefghijklmnopqrstuvwxyz";

/// The enumeration cap in effect: `HAMRECON_MAX_STATES` if set and valid.
pub fn max_states() -> usize {
    std::env::var(MAX_STATES_ENV)
        .ok()
        .and_then(|v| v.trim().parse().ok())
        .unwrap_or(DEFAULT_MAX_STATES)
}

/// Alphabet size and dimension of a q-ary hypercube.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct SchemeParams {
    q: usize,
    n: usize,
    size: usize,
}

impl SchemeParams {
    pub fn new(q: usize, n: usize) -> Result<Self> {
        Self::with_cap(q, n, max_states())
    }

    pub fn with_cap(q: usize, n: usize, cap: usize) -> Result<Self> {
        if !(3..=DIGITS.len()).contains(&q) {
            return Err(Error::AlphabetSize(q));
        }
        if !(1..=64).contains(&n) {
            return Err(Error::Dimension(n));
        }
        let size = (0..n)
            .try_fold(1usize, |acc, _| acc.checked_mul(q))
            .filter(|&s| s <= cap)
            .ok_or(Error::TooManyStates { q, n, cap })?;
        Ok(Self { q, n, size })
    }

    #[inline]
    pub fn q(&self) -> usize {
        self.q
    }

    #[inline]
    pub fn n(&self) -> usize {
        self.n
    }

    /// Number of vertices, `q^n`.
    #[inline]
    pub fn size(&self) -> usize {
        self.size
    }

    /// Place value of the 0-based position `p`, i.e. `q^(n-1-p)`.
    #[inline]
    pub(crate) fn place(&self, p: usize) -> usize {
        self.q.pow((self.n - 1 - p) as u32)
    }

    pub fn zero(&self) -> Word {
        Word {
            digits: vec![0; self.n],
        }
    }

    pub fn word_from_digits(&self, digits: Vec<u8>) -> Result<Word> {
        if digits.len() != self.n {
            return Err(Error::DimensionMismatch {
                expected: self.n,
                actual: digits.len(),
            });
        }
        if let Some(&d) = digits.iter().find(|&&d| d as usize >= self.q) {
            return Err(Error::InvalidWord {
                text: format!("{digits:?}"),
                reason: format!("digit {d} is not below q = {}", self.q),
            });
        }
        Ok(Word { digits })
    }

    /// Parses the text form: `n` base-q digits, most significant position first.
    pub fn parse_word(&self, text: &str) -> Result<Word> {
        let invalid = |reason: String| Error::InvalidWord {
            text: text.to_string(),
            reason,
        };
        let digits = text
            .chars()
            .map(|c| {
                c.to_digit(36)
                    .map(|d| d as u8)
                    .ok_or_else(|| invalid(format!("{c:?} is not a digit")))
            })
            .collect::<Result<Vec<u8>>>()?;
        if digits.len() != self.n {
            return Err(invalid(format!("expected {} digits", self.n)));
        }
        self.word_from_digits(digits)
            .map_err(|e| invalid(e.to_string()))
    }

    pub fn rank(&self, word: &Word) -> usize {
        word.digits
            .iter()
            .fold(0, |acc, &d| acc * self.q + d as usize)
    }

    pub fn word(&self, rank: usize) -> Word {
        let mut digits = vec![0; self.n];
        self.digits_into(rank, &mut digits);
        Word { digits }
    }

    /// Writes the digits of `rank` into `buf` (length `n`).
    #[inline]
    pub fn digits_into(&self, mut rank: usize, buf: &mut [u8]) {
        for slot in buf.iter_mut().rev() {
            *slot = (rank % self.q) as u8;
            rank /= self.q;
        }
    }

    #[inline]
    pub fn weight_of_rank(&self, mut rank: usize) -> usize {
        let mut w = 0;
        while rank > 0 {
            if !rank.is_multiple_of(self.q) {
                w += 1;
            }
            rank /= self.q;
        }
        w
    }

    #[inline]
    pub fn distance_of_ranks(&self, mut a: usize, mut b: usize) -> usize {
        let mut d = 0;
        for _ in 0..self.n {
            if a % self.q != b % self.q {
                d += 1;
            }
            a /= self.q;
            b /= self.q;
        }
        d
    }

    /// Ranks of `W_r(center)` in increasing order.
    pub fn sphere_ranks(&self, center: usize, radius: usize) -> Result<Vec<usize>> {
        check_range("radius", radius, self.n)?;
        let mut c = vec![0u8; self.n];
        self.digits_into(center, &mut c);
        let mut out = Vec::new();
        for positions in combinations(self.n, radius) {
            // every assignment of nonzero shifts on the chosen positions
            let count = (self.q - 1).pow(radius as u32);
            for code in 0..count {
                let mut rank = center;
                let mut code = code;
                for &p in positions.iter().rev() {
                    let shift = code % (self.q - 1) + 1;
                    code /= self.q - 1;
                    let old = c[p] as usize;
                    let new = (old + shift) % self.q;
                    rank = rank + new * self.place(p) - old * self.place(p);
                }
                out.push(rank);
            }
        }
        out.sort_unstable();
        Ok(out)
    }

    /// Ranks of `B_r(center)` in increasing order.
    pub fn ball_ranks(&self, center: usize, radius: usize) -> Result<Vec<usize>> {
        check_range("radius", radius, self.n)?;
        let mut out = Vec::new();
        for r in 0..=radius {
            out.extend(self.sphere_ranks(center, r)?);
        }
        out.sort_unstable();
        Ok(out)
    }

    /// Ranks of the face `Γ^I(center)` in increasing order.
    pub fn face_ranks(&self, center: usize, face: &IndexSet) -> Result<Vec<usize>> {
        self.check_index_set(face)?;
        let positions: Vec<usize> = face.zero_based().collect();
        let mut c = vec![0u8; self.n];
        self.digits_into(center, &mut c);
        let base = positions
            .iter()
            .fold(center, |acc, &p| acc - c[p] as usize * self.place(p));
        Ok(self.mixed_radix(base, &positions, self.q, 0))
    }

    /// Ranks of `S^I`, the words whose support is exactly `I`, in increasing
    /// order. The index of a word in this list is its rank in the
    /// `(q-1)`-ary `|I|`-dimensional scheme under the relabeling `v -> v-1`.
    pub fn full_support_ranks(&self, support: &IndexSet) -> Result<Vec<usize>> {
        self.check_index_set(support)?;
        let positions: Vec<usize> = support.zero_based().collect();
        Ok(self.mixed_radix(0, &positions, self.q - 1, 1))
    }

    fn mixed_radix(&self, base: usize, positions: &[usize], radix: usize, offset: usize) -> Vec<usize> {
        let count = radix.pow(positions.len() as u32);
        (0..count)
            .map(|mut code| {
                let mut rank = base;
                for &p in positions.iter().rev() {
                    rank += (code % radix + offset) * self.place(p);
                    code /= radix;
                }
                rank
            })
            .collect()
    }

    fn check_index_set(&self, set: &IndexSet) -> Result<()> {
        if set.n != self.n {
            return Err(Error::DimensionMismatch {
                expected: self.n,
                actual: set.n,
            });
        }
        Ok(())
    }

    fn check_word(&self, word: &Word) -> Result<()> {
        if word.digits.len() != self.n {
            return Err(Error::DimensionMismatch {
                expected: self.n,
                actual: word.digits.len(),
            });
        }
        if word.digits.iter().any(|&d| d as usize >= self.q) {
            return Err(Error::InvalidWord {
                text: word.to_string(),
                reason: format!("digit not below q = {}", self.q),
            });
        }
        Ok(())
    }
}

fn check_range(name: &'static str, value: usize, max: usize) -> Result<()> {
    if value > max {
        return Err(Error::OutOfRange {
            name,
            value: value as i64,
            min: 0,
            max: max as i64,
        });
    }
    Ok(())
}

/// All `k`-subsets of `0..n` in lexicographic order.
pub(crate) fn combinations(n: usize, k: usize) -> Vec<Vec<usize>> {
    fn go(start: usize, n: usize, k: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if cur.len() == k {
            out.push(cur.clone());
            return;
        }
        for p in start..n {
            if n - p < k - cur.len() {
                break;
            }
            cur.push(p);
            go(p + 1, n, k, cur, out);
            cur.pop();
        }
    }
    let mut out = Vec::new();
    if k <= n {
        go(0, n, k, &mut Vec::with_capacity(k), &mut out);
    }
    out
}

/// A vertex of the hypercube: `n` residues mod `q`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Word {
    digits: Vec<u8>,
}

impl Word {
    pub fn digits(&self) -> &[u8] {
        &self.digits
    }

    pub fn len(&self) -> usize {
        self.digits.len()
    }

    pub fn is_empty(&self) -> bool {
        self.digits.is_empty()
    }

    pub fn weight(&self) -> usize {
        self.digits.iter().filter(|&&d| d != 0).count()
    }

    pub fn support(&self) -> IndexSet {
        let mask = self
            .digits
            .iter()
            .enumerate()
            .filter(|(_, &d)| d != 0)
            .fold(0u64, |m, (p, _)| m | 1 << p);
        IndexSet {
            n: self.digits.len(),
            mask,
        }
    }
}

impl fmt::Display for Word {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for &d in &self.digits {
            write!(f, "{}", DIGITS[d as usize] as char)?;
        }
        Ok(())
    }
}

/// A subset of the positions `{1, ..., n}`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct IndexSet {
    n: usize,
    mask: u64,
}

impl IndexSet {
    /// Builds a set from 1-based positions.
    pub fn new(n: usize, positions: &[usize]) -> Result<Self> {
        if n > 64 {
            return Err(Error::Dimension(n));
        }
        let mut mask = 0u64;
        for &p in positions {
            if p == 0 || p > n {
                return Err(Error::InvalidIndexSet(format!(
                    "position {p} outside 1..={n}"
                )));
            }
            if mask & (1 << (p - 1)) != 0 {
                return Err(Error::InvalidIndexSet(format!("position {p} repeated")));
            }
            mask |= 1 << (p - 1);
        }
        Ok(Self { n, mask })
    }

    pub fn empty(n: usize) -> Self {
        Self { n, mask: 0 }
    }

    pub fn full(n: usize) -> Self {
        Self::empty(n).complement()
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn len(&self) -> usize {
        self.mask.count_ones() as usize
    }

    pub fn is_empty(&self) -> bool {
        self.mask == 0
    }

    /// Whether the 1-based position `p` is in the set.
    pub fn contains(&self, p: usize) -> bool {
        p >= 1 && p <= self.n && self.mask & (1 << (p - 1)) != 0
    }

    pub fn complement(&self) -> Self {
        let all = if self.n == 64 { u64::MAX } else { (1u64 << self.n) - 1 };
        Self {
            n: self.n,
            mask: all & !self.mask,
        }
    }

    /// 1-based positions in increasing order.
    pub fn positions(&self) -> Vec<usize> {
        self.zero_based().map(|p| p + 1).collect()
    }

    pub(crate) fn zero_based(&self) -> impl Iterator<Item = usize> + '_ {
        (0..self.n).filter(move |&p| self.mask & (1 << p) != 0)
    }

    /// All `k`-subsets of `{1..n}`, lexicographic in their sorted positions.
    pub fn subsets(n: usize, k: usize) -> Vec<IndexSet> {
        combinations(n, k)
            .into_iter()
            .map(|c| IndexSet {
                n,
                mask: c.iter().fold(0, |m, &p| m | 1 << p),
            })
            .collect()
    }
}

impl fmt::Display for IndexSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.positions().iter().map(|p| p.to_string()).collect();
        write!(f, "{{{}}}", parts.join(","))
    }
}

pub fn hamming_distance(a: &Word, b: &Word) -> Result<usize> {
    if a.len() != b.len() {
        return Err(Error::DimensionMismatch {
            expected: a.len(),
            actual: b.len(),
        });
    }
    Ok(a.digits
        .iter()
        .zip(&b.digits)
        .filter(|(x, y)| x != y)
        .count())
}

/// Weight and support of `a`.
pub fn weight_support(a: &Word) -> (usize, IndexSet) {
    (a.weight(), a.support())
}

/// `<a, b> = sum a_i b_i mod q`.
pub fn inner_product(params: &SchemeParams, a: &Word, b: &Word) -> Result<usize> {
    params.check_word(a)?;
    params.check_word(b)?;
    let q = params.q();
    Ok(a.digits
        .iter()
        .zip(&b.digits)
        .fold(0, |acc, (&x, &y)| (acc + x as usize * y as usize) % q))
}

/// A region of the hypercube around a center word.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Region {
    Sphere(usize),
    Ball(usize),
    Face(IndexSet),
    /// `S^I`; independent of the center.
    FullSupport(IndexSet),
}

/// Words of `region` in lexicographic order.
pub fn enumerate_region(
    params: &SchemeParams,
    region: &Region,
    center: &Word,
) -> Result<std::vec::IntoIter<Word>> {
    params.check_word(center)?;
    let c = params.rank(center);
    let ranks = match region {
        Region::Sphere(r) => params.sphere_ranks(c, *r)?,
        Region::Ball(r) => params.ball_ranks(c, *r)?,
        Region::Face(set) => params.face_ranks(c, set)?,
        Region::FullSupport(set) => params.full_support_ranks(set)?,
    };
    Ok(ranks
        .into_iter()
        .map(|r| params.word(r))
        .collect::<Vec<_>>()
        .into_iter())
}
