//! Exact transfer coefficients `r^k_{ij}` between the local distributions of
//! an eigenfunction in two orthogonal faces, and the nondegeneracy test for
//! layer-by-layer reconstruction.
//!
//! Everything here is exact integer or rational arithmetic. Two regimes are
//! covered, keyed on the face dimension `k = |I|` and eigenvalue index `h`:
//!
//! * [`Regime::Direct`], `k <= min(h, n-h)`: the transfer is a product of a
//!   Krawtchouk generating function with the substituted enumerator, so the
//!   coefficients are integers.
//! * [`Regime::Triangular`], `n-h < k <= h`: the transfer needs the inverse of
//!   a unitriangular system `U` first.
//!
//! Entries `r_{ij}` with `i > k` multiply a component `v_i` that the
//! `k`-dimensional face does not have; they are stored as zero.

use std::fmt;
use std::str::FromStr;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};
use serde_json::json;

use crate::error::{Error, Result};
use crate::krawtchouk::{binomial, krawtchouk_value};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Regime {
    Direct,
    Triangular,
}

impl fmt::Display for Regime {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Regime::Direct => "direct",
            Regime::Triangular => "triangular",
        })
    }
}

/// Which transfer formula applies to a face of dimension `k`.
pub fn regime(n: usize, h: usize, k: usize) -> Result<Regime> {
    if h > n {
        return Err(out_of_range("h", h, 0, n));
    }
    if k <= h && k <= n - h {
        Ok(Regime::Direct)
    } else if k <= h {
        Ok(Regime::Triangular)
    } else {
        Err(Error::UnsupportedRegime { n, h, k })
    }
}

fn out_of_range(name: &'static str, value: usize, min: usize, max: usize) -> Error {
    Error::OutOfRange {
        name,
        value: value as i64,
        min: min as i64,
        max: max as i64,
    }
}

fn check_q(q: usize) -> Result<()> {
    if q < 3 {
        return Err(Error::AlphabetSize(q));
    }
    Ok(())
}

fn check_indices(n: usize, k: usize, i: usize, j: usize) -> Result<()> {
    if j > n - k {
        return Err(out_of_range("j", j, 0, n - k));
    }
    if i > j {
        return Err(out_of_range("i", i, 0, j));
    }
    Ok(())
}

fn signed(i: usize, v: BigInt) -> BigInt {
    if i.is_multiple_of(2) {
        v
    } else {
        -v
    }
}

/// `P_i(t; N)` with the value zero for degrees above `N`.
fn kraw(q: usize, i: usize, t: usize, big_n: usize) -> BigInt {
    if i > big_n {
        return BigInt::zero();
    }
    krawtchouk_value(q, i, t, big_n).expect("arguments checked by caller")
}

/// `r_{ij} = (-1)^i sum_l P^{(q)}_{j-i-l}(h-k; n-2k) (q-2)^l C(k-i, l)` for
/// `k <= min(h, n-h)`.
pub fn r_case_i(q: usize, n: usize, h: usize, k: usize, i: usize, j: usize) -> Result<BigInt> {
    check_q(q)?;
    if regime(n, h, k)? != Regime::Direct {
        return Err(Error::UnsupportedRegime { n, h, k });
    }
    check_indices(n, k, i, j)?;
    if i > k {
        return Ok(BigInt::zero());
    }
    let mut acc = BigInt::zero();
    for l in 0..=(j - i).min(k - i) {
        let term = kraw(q, j - i - l, h - k, n - 2 * k)
            * num_traits::pow(BigInt::from(q - 2), l)
            * binomial((k - i) as i64, l as i64);
        acc += term;
    }
    Ok(signed(i, acc))
}

/// The unitriangular system `U[j][i] = (q-1)^(j-i) C(h+k-n, j-i)` of size
/// `n-k+1` and its exact inverse.
#[derive(Clone, Debug, PartialEq)]
pub struct TriangularSystem {
    lower: Vec<Vec<BigInt>>,
    inverse: Vec<Vec<BigRational>>,
}

impl TriangularSystem {
    pub fn dimension(&self) -> usize {
        self.lower.len()
    }

    pub fn lower(&self) -> &[Vec<BigInt>] {
        &self.lower
    }

    pub fn inverse(&self) -> &[Vec<BigRational>] {
        &self.inverse
    }
}

pub fn build_triangular(q: usize, n: usize, h: usize, k: usize) -> Result<TriangularSystem> {
    check_q(q)?;
    if regime(n, h, k)? != Regime::Triangular {
        return Err(Error::UnsupportedRegime { n, h, k });
    }
    let dim = n - k + 1;
    let m = (h + k - n) as i64;
    let lower: Vec<Vec<BigInt>> = (0..dim)
        .map(|j| {
            (0..dim)
                .map(|i| {
                    if i > j {
                        BigInt::zero()
                    } else {
                        num_traits::pow(BigInt::from(q - 1), j - i) * binomial(m, (j - i) as i64)
                    }
                })
                .collect()
        })
        .collect();
    // forward substitution, one column of the identity at a time
    let mut inverse = vec![vec![BigRational::zero(); dim]; dim];
    for c in 0..dim {
        for j in c..dim {
            let mut rhs = if j == c { BigRational::one() } else { BigRational::zero() };
            for i in c..j {
                rhs -= BigRational::from_integer(lower[j][i].clone()) * &inverse[i][c];
            }
            inverse[j][c] = rhs / BigRational::from_integer(lower[j][j].clone());
        }
    }
    Ok(TriangularSystem { lower, inverse })
}

fn r_triangular(sys: &TriangularSystem, q: usize, h: usize, k: usize, i: usize, j: usize) -> BigRational {
    if i > k {
        return BigRational::zero();
    }
    let u = sys.inverse();
    let mut acc = BigRational::zero();
    for s in i..=j {
        let p = kraw(q - 1, s - i, h - k, h - i);
        acc += &u[j][s] * BigRational::from_integer(p);
    }
    if i % 2 == 1 {
        acc = -acc;
    }
    acc
}

/// `r^k_{ij} = (-1)^i sum_{s=i..j} u'_{js} P^{(q-1)}_{s-i}(h-k; h-i)` for
/// `n-h < k <= h`.
pub fn r_case_iii(q: usize, n: usize, h: usize, k: usize, i: usize, j: usize) -> Result<BigRational> {
    let sys = build_triangular(q, n, h, k)?;
    check_indices(n, k, i, j)?;
    Ok(r_triangular(&sys, q, h, k, i, j))
}

/// `r^k_{ij}` in whichever regime applies.
pub fn coefficient(q: usize, n: usize, h: usize, k: usize, i: usize, j: usize) -> Result<BigRational> {
    match regime(n, h, k)? {
        Regime::Direct => r_case_i(q, n, h, k, i, j).map(BigRational::from_integer),
        Regime::Triangular => r_case_iii(q, n, h, k, i, j),
    }
}

/// All `r^k_{ij}` for `0 <= i <= j <= n-k` at fixed `(q, n, h, k)`.
#[derive(Clone, Debug, PartialEq)]
pub struct CoefficientTable {
    q: usize,
    n: usize,
    h: usize,
    k: usize,
    regime: Regime,
    /// `entries[j][i]`, zero for `i > j`.
    entries: Vec<Vec<BigRational>>,
}

impl CoefficientTable {
    pub fn new(q: usize, n: usize, h: usize, k: usize) -> Result<Self> {
        check_q(q)?;
        let regime = regime(n, h, k)?;
        let top = n - k;
        let entries = match regime {
            Regime::Direct => (0..=top)
                .map(|j| {
                    (0..=top)
                        .map(|i| {
                            if i > j {
                                Ok(BigRational::zero())
                            } else {
                                r_case_i(q, n, h, k, i, j).map(BigRational::from_integer)
                            }
                        })
                        .collect::<Result<Vec<_>>>()
                })
                .collect::<Result<Vec<_>>>()?,
            Regime::Triangular => {
                let sys = build_triangular(q, n, h, k)?;
                (0..=top)
                    .map(|j| {
                        (0..=top)
                            .map(|i| {
                                if i > j {
                                    BigRational::zero()
                                } else {
                                    r_triangular(&sys, q, h, k, i, j)
                                }
                            })
                            .collect()
                    })
                    .collect()
            }
        };
        Ok(Self {
            q,
            n,
            h,
            k,
            regime,
            entries,
        })
    }

    pub fn regime(&self) -> Regime {
        self.regime
    }

    pub fn face_dimension(&self) -> usize {
        self.k
    }

    pub fn params(&self) -> (usize, usize, usize) {
        (self.q, self.n, self.h)
    }

    /// Largest `j` with a transfer formula, `n - k`.
    pub fn max_j(&self) -> usize {
        self.n - self.k
    }

    /// `r_{ij}`; zero above the triangle.
    pub fn get(&self, i: usize, j: usize) -> &BigRational {
        &self.entries[j][i]
    }

    /// `r_{0j}, ..., r_{jj}`.
    pub fn column(&self, j: usize) -> &[BigRational] {
        &self.entries[j][..=j]
    }

    pub fn entries(&self) -> impl Iterator<Item = (usize, usize, &BigRational)> {
        self.entries
            .iter()
            .enumerate()
            .flat_map(|(j, row)| row[..=j].iter().enumerate().map(move |(i, r)| (i, j, r)))
    }
}

/// Coefficients `r^k_{i,d-k}` for `i = 0..=k` that define the layer operator
/// `M^{d,k} = sum_i r^k_{i,d-k} D_i^{q-1,k}`; zero for `i > d-k`.
pub fn layer_coefficients(q: usize, n: usize, h: usize, d: usize, k: usize) -> Result<Vec<BigRational>> {
    check_layer(n, h, d, k)?;
    let table = CoefficientTable::new(q, n, h, k)?;
    Ok((0..=k)
        .map(|i| {
            if i <= d - k {
                table.get(i, d - k).clone()
            } else {
                BigRational::zero()
            }
        })
        .collect())
}

fn check_layer(n: usize, h: usize, d: usize, k: usize) -> Result<()> {
    if h > n {
        return Err(out_of_range("h", h, 0, n));
    }
    if d > h {
        return Err(out_of_range("d", d, 0, h));
    }
    if k > d {
        return Err(out_of_range("k", k, 0, d));
    }
    Ok(())
}

/// The eigenvalues of `M^{d,k}` on the `k + 1` eigenspaces of the
/// `(q-1)`-ary `k`-dimensional scheme.
#[derive(Clone, Debug, PartialEq)]
pub struct EigenSums {
    pub q: usize,
    pub n: usize,
    pub h: usize,
    pub d: usize,
    pub k: usize,
    pub sums: Vec<BigRational>,
}

impl EigenSums {
    /// First `l` with a vanishing sum.
    pub fn first_zero(&self) -> Option<usize> {
        self.sums.iter().position(Zero::is_zero)
    }
}

/// `sums[l] = sum_{i=0}^{min(k, d-k)} r^k_{i,d-k} P^{(q-1)}_i(l; k)`.
///
/// Terms with `i > d-k` vanish because the transfer is lower triangular, so
/// the sum over `i = 0..=k` and the truncated one agree. `k = 0` is accepted
/// and yields the single value `P_d(h; n)`.
pub fn eigen_sums(q: usize, n: usize, h: usize, d: usize, k: usize) -> Result<EigenSums> {
    check_q(q)?;
    let column = layer_coefficients(q, n, h, d, k)?;
    let sums = (0..=k)
        .map(|l| {
            column
                .iter()
                .enumerate()
                .take(k.min(d - k) + 1)
                .map(|(i, r)| r * BigRational::from_integer(kraw(q - 1, i, l, k)))
                .fold(BigRational::zero(), |a, b| a + b)
        })
        .collect();
    Ok(EigenSums { q, n, h, d, k, sums })
}

/// A vanishing eigen-sum.
#[derive(Clone, Debug, PartialEq)]
pub struct LayerFailure {
    pub k: usize,
    pub l: usize,
    pub sum: BigRational,
}

/// Outcome of [`check_conditions`].
#[derive(Clone, Debug, PartialEq)]
pub struct ConditionReport {
    pub q: usize,
    pub n: usize,
    pub h: usize,
    pub d: usize,
    pub pass: bool,
    /// `P_d(h; n)`; the origin is recoverable iff this is nonzero.
    pub origin_value: BigInt,
    pub failures: Vec<LayerFailure>,
}

impl ConditionReport {
    pub fn origin_pass(&self) -> bool {
        !self.origin_value.is_zero()
    }

    pub fn first_failure(&self) -> Option<&LayerFailure> {
        self.failures.first()
    }

    pub fn to_json(&self) -> serde_json::Value {
        json!({
            "q": self.q,
            "n": self.n,
            "h": self.h,
            "d": self.d,
            "pass": self.pass,
            "origin_pass": self.origin_pass(),
            "origin_value": self.origin_value.to_string(),
            "failures": self.failures.iter().map(|f| json!({
                "k": f.k,
                "l": f.l,
                "sum": format_exact(&f.sum),
            })).collect::<Vec<_>>(),
        })
    }
}

/// Checks the origin condition `P_d(h; n) != 0` and that every eigen-sum of
/// every layer `k = 1..=d` is nonzero.
pub fn check_conditions(q: usize, n: usize, h: usize, d: usize) -> Result<ConditionReport> {
    check_q(q)?;
    check_layer(n, h, d, 0)?;
    let origin_value = krawtchouk_value(q, d, h, n)?;
    let mut failures = Vec::new();
    for k in 1..=d {
        let sums = eigen_sums(q, n, h, d, k)?;
        for (l, sum) in sums.sums.into_iter().enumerate() {
            if sum.is_zero() {
                failures.push(LayerFailure { k, l, sum });
            }
        }
    }
    Ok(ConditionReport {
        q,
        n,
        h,
        d,
        pass: !origin_value.is_zero() && failures.is_empty(),
        origin_value,
        failures,
    })
}

/// Exact decimal form `p/q` (or `p` for integers).
pub fn format_exact(value: &BigRational) -> String {
    value.to_string()
}

pub fn parse_exact(text: &str) -> Result<BigRational> {
    BigRational::from_str(text.trim()).map_err(|e| Error::Format(format!("{text:?}: {e}")))
}
