//! Brute-force oracles for the test suites.
//!
//! Everything here works on plain digit vectors and dense value slices and is
//! written for clarity, not speed: most routines are `O(q^(2n))`. Words are
//! ranked in base `q` with position 1 the most significant digit.

use std::f64::consts::PI;

use num_bigint::BigInt;
use num_complex::Complex64;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, ToPrimitive, Zero};

pub fn digits(rank: usize, q: usize, n: usize) -> Vec<usize> {
    let mut out = vec![0; n];
    let mut r = rank;
    for p in (0..n).rev() {
        out[p] = r % q;
        r /= q;
    }
    out
}

pub fn rank(digits: &[usize], q: usize) -> usize {
    digits.iter().fold(0, |acc, &d| acc * q + d)
}

pub fn distance(a: &[usize], b: &[usize]) -> usize {
    a.iter().zip(b).filter(|(x, y)| x != y).count()
}

pub fn weight(a: &[usize]) -> usize {
    a.iter().filter(|&&x| x != 0).count()
}

pub fn all_words(q: usize, n: usize) -> impl Iterator<Item = Vec<usize>> {
    (0..q.pow(n as u32)).map(move |r| digits(r, q, n))
}

/// `ξ^e` with `ξ = exp(2πi/q)`.
pub fn root(q: usize, e: usize) -> Complex64 {
    Complex64::from_polar(1.0, 2.0 * PI * (e % q) as f64 / q as f64)
}

pub fn character(q: usize, n: usize, beta: &[usize]) -> Vec<Complex64> {
    all_words(q, n)
        .map(|x| root(q, x.iter().zip(beta).map(|(a, b)| a * b).sum()))
        .collect()
}

/// `f̂(α) = Σ_x f(x) conj(ξ^<α,x>)`, one term at a time.
pub fn naive_dft(values: &[Complex64], q: usize, n: usize) -> Vec<Complex64> {
    let words: Vec<Vec<usize>> = all_words(q, n).collect();
    let roots: Vec<Complex64> = (0..q).map(|e| root(q, e).conj()).collect();
    words
        .iter()
        .map(|a| {
            words
                .iter()
                .zip(values)
                .map(|(x, v)| v * roots[a.iter().zip(x).map(|(s, t)| s * t).sum::<usize>() % q])
                .sum()
        })
        .collect()
}

/// All of `D_0 f, ..., D_n f` from one pass over the pairs of words.
pub fn distance_apply_all(values: &[Complex64], q: usize, n: usize) -> Vec<Vec<Complex64>> {
    let words: Vec<Vec<usize>> = all_words(q, n).collect();
    let mut out = vec![vec![Complex64::zero(); values.len()]; n + 1];
    for (ra, a) in words.iter().enumerate() {
        for (b, v) in words.iter().zip(values) {
            out[distance(a, b)][ra] += v;
        }
    }
    out
}

/// `(D_i f)(α) = Σ_{d(α,β)=i} f(β)` by comparing all pairs.
pub fn distance_apply(values: &[Complex64], q: usize, n: usize, i: usize) -> Vec<Complex64> {
    let words: Vec<Vec<usize>> = all_words(q, n).collect();
    words
        .iter()
        .map(|a| {
            words
                .iter()
                .zip(values)
                .filter(|(b, _)| distance(a, b) == i)
                .map(|(_, v)| *v)
                .sum()
        })
        .collect()
}

/// `max_α |Σ_{β ~ α} f(β) - λ f(α)|`.
pub fn neighbor_residual(values: &[Complex64], q: usize, n: usize, lambda: f64) -> f64 {
    distance_apply(values, q, n, 1)
        .iter()
        .zip(values)
        .map(|(s, v)| (s - v * lambda).norm())
        .fold(0.0, f64::max)
}

/// Per-distance sums of `f` over the words that agree with `anchor` outside
/// the 1-based positions `face`, found by scanning every word.
pub fn face_distribution(values: &[Complex64], q: usize, n: usize, face: &[usize], anchor: &[usize]) -> Vec<Complex64> {
    let mut out = vec![Complex64::zero(); face.len() + 1];
    for (x, v) in all_words(q, n).zip(values) {
        let agrees = (0..n).all(|p| face.contains(&(p + 1)) || x[p] == anchor[p]);
        if agrees {
            out[distance(&x, anchor)] += v;
        }
    }
    out
}

pub fn complement(face: &[usize], n: usize) -> Vec<usize> {
    (1..=n).filter(|p| !face.contains(p)).collect()
}

/// Total of `f` over the face through `anchor` free on the complement of `face`.
pub fn orthogonal_face_sum(values: &[Complex64], q: usize, n: usize, face: &[usize], anchor: &[usize]) -> Complex64 {
    face_distribution(values, q, n, &complement(face, n), anchor).iter().sum()
}

/// Coefficients of `y^i` in `(1 - y)^t (1 + (q-1) y)^(N-t)` by explicit
/// polynomial multiplication.
pub fn krawtchouk_by_expansion(q: i64, t: usize, big_n: usize) -> Vec<BigInt> {
    let mut poly = vec![BigInt::one()];
    let mul = |p: &[BigInt], c: i64| -> Vec<BigInt> {
        let mut out = vec![BigInt::zero(); p.len() + 1];
        for (i, a) in p.iter().enumerate() {
            out[i] += a;
            out[i + 1] += a * c;
        }
        out
    };
    for _ in 0..t {
        poly = mul(&poly, -1);
    }
    for _ in t..big_n {
        poly = mul(&poly, q - 1);
    }
    poly
}

/// The matrix `Σ_i column[i] D_i` of the `m`-ary `k`-cube, rows and columns
/// in rank order. Distances past the end of `column` carry zero.
pub fn distance_combination(m: usize, k: usize, column: &[BigRational]) -> Vec<Vec<BigRational>> {
    let words: Vec<Vec<usize>> = all_words(m, k).collect();
    words
        .iter()
        .map(|a| {
            words
                .iter()
                .map(|b| column.get(distance(a, b)).cloned().unwrap_or_else(BigRational::zero))
                .collect()
        })
        .collect()
}

const PRIME: u64 = (1 << 61) - 1;

fn mod_p(x: &BigInt) -> u64 {
    let p = BigInt::from(PRIME);
    let r = ((x % &p) + &p) % &p;
    r.to_u64().expect("reduced below the modulus")
}

fn mul_mod(a: u64, b: u64) -> u64 {
    ((a as u128 * b as u128) % PRIME as u128) as u64
}

fn pow_mod(mut a: u64, mut e: u64) -> u64 {
    let mut r = 1;
    while e > 0 {
        if e & 1 == 1 {
            r = mul_mod(r, a);
        }
        a = mul_mod(a, a);
        e >>= 1;
    }
    r
}

fn rank_mod_p(rows: &[Vec<BigInt>]) -> usize {
    let mut m: Vec<Vec<u64>> = rows.iter().map(|r| r.iter().map(mod_p).collect()).collect();
    let cols = m.first().map_or(0, Vec::len);
    let mut rank = 0;
    for c in 0..cols {
        let Some(pivot) = (rank..m.len()).find(|&r| m[r][c] != 0) else {
            continue;
        };
        m.swap(rank, pivot);
        let inv = pow_mod(m[rank][c], PRIME - 2);
        for r in rank + 1..m.len() {
            if m[r][c] == 0 {
                continue;
            }
            let factor = mul_mod(m[r][c], inv);
            for j in c..cols {
                let sub = mul_mod(factor, m[rank][j]);
                m[r][j] = (m[r][j] + PRIME - sub) % PRIME;
            }
        }
        rank += 1;
    }
    rank
}

/// Fraction-free Gaussian elimination over the integers.
pub fn bareiss_rank(rows: &[Vec<BigInt>]) -> usize {
    let mut m = rows.to_vec();
    let cols = m.first().map_or(0, Vec::len);
    let mut prev = BigInt::one();
    let mut rank = 0;
    for c in 0..cols {
        let Some(pivot) = (rank..m.len()).find(|&r| !m[r][c].is_zero()) else {
            continue;
        };
        m.swap(rank, pivot);
        for r in rank + 1..m.len() {
            for j in c + 1..cols {
                let v = &m[rank][c] * &m[r][j] - &m[r][c] * &m[rank][j];
                m[r][j] = v / &prev;
            }
            m[r][c] = BigInt::zero();
        }
        prev = m[rank][c].clone();
        rank += 1;
    }
    rank
}

fn integer_rows(m: &[Vec<BigRational>]) -> Vec<Vec<BigInt>> {
    m.iter()
        .map(|row| {
            let lcm = row
                .iter()
                .fold(BigInt::one(), |acc, x| acc.lcm(x.denom()));
            row.iter().map(|x| (x * BigRational::from_integer(lcm.clone())).to_integer()).collect()
        })
        .collect()
}

/// Exact rank of a rational matrix. Full rank modulo a large prime already
/// proves full rank; otherwise the rank is settled by exact elimination.
pub fn exact_rank(m: &[Vec<BigRational>]) -> usize {
    let rows = integer_rows(m);
    let full = rows.len().min(rows.first().map_or(0, Vec::len));
    if rank_mod_p(&rows) == full {
        return full;
    }
    bareiss_rank(&rows)
}

/// Gaussian elimination with partial pivoting; `None` for a numerically
/// singular matrix.
pub fn dense_solve(mut m: Vec<Vec<Complex64>>, mut b: Vec<Complex64>) -> Option<Vec<Complex64>> {
    let n = b.len();
    for c in 0..n {
        let pivot = (c..n).max_by(|&i, &j| m[i][c].norm().total_cmp(&m[j][c].norm()))?;
        if m[pivot][c].norm() < 1e-12 {
            return None;
        }
        m.swap(c, pivot);
        b.swap(c, pivot);
        for r in c + 1..n {
            let factor = m[r][c] / m[c][c];
            for j in c..n {
                let v = m[c][j];
                m[r][j] -= factor * v;
            }
            let v = b[c];
            b[r] -= factor * v;
        }
    }
    let mut x = vec![Complex64::zero(); n];
    for r in (0..n).rev() {
        let s: Complex64 = (r + 1..n).map(|j| m[r][j] * x[j]).sum();
        x[r] = (b[r] - s) / m[r][r];
    }
    Some(x)
}

pub fn max_abs_diff(a: &[Complex64], b: &[Complex64]) -> f64 {
    assert_eq!(a.len(), b.len());
    a.iter().zip(b).map(|(x, y)| (x - y).norm()).fold(0.0, f64::max)
}

pub fn max_modulus(a: &[Complex64]) -> f64 {
    a.iter().map(|x| x.norm()).fold(0.0, f64::max)
}

/// `max |a - b| / max |b|`, or the absolute error when `b` vanishes.
pub fn max_rel_err(a: &[Complex64], b: &[Complex64]) -> f64 {
    let scale = max_modulus(b);
    let err = max_abs_diff(a, b);
    if scale > 0.0 {
        err / scale
    } else {
        err
    }
}
