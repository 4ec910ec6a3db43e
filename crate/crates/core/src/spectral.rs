//! Vertex functions, characters and the Fourier transform on `Z_q^n`, the
//! distance operators `D_i`, and eigenspace projection.
//!
//! The raw transforms work on any alphabet `q >= 2` so they can also be run
//! on the `(q-1)`-ary full-support sub-schemes.

use std::f64::consts::TAU;

use num_complex::Complex64;
use num_traits::{ToPrimitive, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};
use crate::krawtchouk::{eigenvalue_of_index, krawtchouk_value};
use crate::scheme::{SchemeParams, Word};

/// Attempts made by [`random_eigenfunction`] before giving up.
pub const EIGEN_RETRIES: usize = 8;

/// Primitive `q`-th root of unity `xi = exp(2 pi i / q)` and its powers.
#[derive(Clone, Debug)]
pub struct FourierContext {
    roots: Vec<Complex64>,
}

impl FourierContext {
    pub fn new(q: usize) -> Self {
        let roots = (0..q)
            .map(|v| match v {
                0 => Complex64::new(1.0, 0.0),
                _ => Complex64::from_polar(1.0, TAU * v as f64 / q as f64),
            })
            .collect();
        Self { roots }
    }

    pub fn q(&self) -> usize {
        self.roots.len()
    }

    pub fn xi(&self) -> Complex64 {
        self.roots[1 % self.q()]
    }

    /// `xi^v`, with `v` reduced mod `q`.
    #[inline]
    pub fn root(&self, v: usize) -> Complex64 {
        self.roots[v % self.roots.len()]
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Direction {
    /// `g(a) = sum_b f(b) conj(xi^<a,b>)`.
    Forward,
    /// `f(c) = q^-n sum_a g(a) xi^<a,c>`.
    Inverse,
}

/// Fourier transform over `Z_q^n` in place: `n` passes of `q`-point DFTs,
/// one per digit position.
pub fn transform_in_place(values: &mut [Complex64], q: usize, n: usize, direction: Direction) {
    assert_eq!(values.len(), q.pow(n as u32), "length must be q^n");
    let ctx = FourierContext::new(q);
    let mut scratch = vec![Complex64::zero(); q];
    let mut stride = 1;
    for _ in 0..n {
        let block = stride * q;
        for start in (0..values.len()).step_by(block) {
            for offset in start..start + stride {
                for (a, out) in scratch.iter_mut().enumerate() {
                    *out = (0..q)
                        .map(|v| {
                            let e = a * v % q;
                            let e = match direction {
                                Direction::Forward => (q - e) % q,
                                Direction::Inverse => e,
                            };
                            values[offset + v * stride] * ctx.root(e)
                        })
                        .sum();
                }
                for (v, s) in scratch.iter().enumerate() {
                    values[offset + v * stride] = *s;
                }
            }
        }
        stride = block;
    }
    if direction == Direction::Inverse {
        let scale = 1.0 / values.len() as f64;
        values.iter_mut().for_each(|v| *v *= scale);
    }
}

/// Weight of every rank of `Z_q^n`.
pub(crate) fn weights(q: usize, n: usize) -> Vec<usize> {
    let size = q.pow(n as u32);
    let mut w = vec![0usize; size];
    for r in 1..size {
        w[r] = w[r / q] + usize::from(r % q != 0);
    }
    w
}

/// `(D_i f)(a) = sum over b at distance i from a of f(b)`, on a raw slice
/// over `Z_q^n`.
pub fn apply_distance_raw(values: &[Complex64], q: usize, n: usize, i: usize) -> Vec<Complex64> {
    let size = q.pow(n as u32);
    assert_eq!(values.len(), size, "length must be q^n");
    assert!(i <= n, "distance {i} exceeds dimension {n}");
    // shifts of W_i(0), as (position, shift) lists
    let w = weights(q, n);
    let shifts: Vec<Vec<(usize, usize)>> = (0..size)
        .filter(|&r| w[r] == i)
        .map(|r| {
            let mut out = Vec::with_capacity(i);
            let mut r = r;
            for p in (0..n).rev() {
                if r % q != 0 {
                    out.push((p, r % q));
                }
                r /= q;
            }
            out
        })
        .collect();
    let places: Vec<usize> = (0..n).map(|p| q.pow((n - 1 - p) as u32)).collect();
    let mut digits = vec![0usize; n];
    (0..size)
        .map(|a| {
            let mut r = a;
            for p in (0..n).rev() {
                digits[p] = r % q;
                r /= q;
            }
            shifts
                .iter()
                .map(|s| {
                    let b = s.iter().fold(a, |acc, &(p, v)| {
                        let old = digits[p];
                        acc + ((old + v) % q) * places[p] - old * places[p]
                    });
                    values[b]
                })
                .sum()
        })
        .collect()
}

/// A complex-valued function on the vertices, stored densely by word rank.
#[derive(Clone, Debug, PartialEq)]
pub struct VertexFunction {
    params: SchemeParams,
    values: Vec<Complex64>,
    eigenindex: Option<usize>,
}

impl VertexFunction {
    pub fn new(params: SchemeParams, values: Vec<Complex64>) -> Result<Self> {
        if values.len() != params.size() {
            return Err(Error::DimensionMismatch {
                expected: params.size(),
                actual: values.len(),
            });
        }
        Ok(Self {
            params,
            values,
            eigenindex: None,
        })
    }

    pub fn zeros(params: SchemeParams) -> Self {
        Self {
            params,
            values: vec![Complex64::zero(); params.size()],
            eigenindex: None,
        }
    }

    /// Tags the function with an eigenvalue index. The tag is metadata only;
    /// use [`VertexFunction::eigen_residual`] to check it.
    pub fn with_eigenindex(mut self, h: Option<usize>) -> Self {
        self.eigenindex = h;
        self
    }

    pub fn params(&self) -> &SchemeParams {
        &self.params
    }

    pub fn eigenindex(&self) -> Option<usize> {
        self.eigenindex
    }

    pub fn values(&self) -> &[Complex64] {
        &self.values
    }

    pub fn values_mut(&mut self) -> &mut [Complex64] {
        &mut self.values
    }

    pub fn into_values(self) -> Vec<Complex64> {
        self.values
    }

    pub fn get(&self, word: &Word) -> Complex64 {
        self.values[self.params.rank(word)]
    }

    pub fn max_modulus(&self) -> f64 {
        self.values.iter().map(|v| v.norm()).fold(0.0, f64::max)
    }

    /// `max_a |sum_{b in W_1(a)} f(b) - lambda f(a)|`.
    pub fn eigen_residual(&self, lambda: i64) -> f64 {
        let (q, n) = (self.params.q(), self.params.n());
        let adj = apply_distance_raw(&self.values, q, n, 1);
        adj.iter()
            .zip(&self.values)
            .map(|(a, f)| (a - f * lambda as f64).norm())
            .fold(0.0, f64::max)
    }

    /// Checks the eigenindex tag against the neighbor-sum equation with
    /// tolerance `tol * (1 + max|f|)` and returns the residual.
    pub fn verify_eigen(&self, tol: f64) -> Result<f64> {
        let Some(h) = self.eigenindex else {
            return Err(Error::Format("function carries no eigenindex".into()));
        };
        let lambda = eigenvalue_of_index(self.params.q(), self.params.n(), h)?.lambda;
        let residual = self.eigen_residual(lambda);
        let threshold = tol * (1.0 + self.max_modulus());
        if residual > threshold {
            return Err(Error::InconsistentData {
                check: "eigen-equation",
                residual,
                threshold,
            });
        }
        Ok(residual)
    }

    fn map_values(&self, values: Vec<Complex64>) -> Self {
        Self {
            params: self.params,
            values,
            eigenindex: None,
        }
    }
}

/// `chi_beta(g) = xi^<beta, g>`, an eigenfunction with index `wt(beta)`.
pub fn character(params: &SchemeParams, beta: &Word) -> VertexFunction {
    let ctx = FourierContext::new(params.q());
    let q = params.q();
    let mut digits = vec![0u8; params.n()];
    let values = (0..params.size())
        .map(|g| {
            params.digits_into(g, &mut digits);
            let e = beta
                .digits()
                .iter()
                .zip(&digits)
                .fold(0, |acc, (&b, &c)| (acc + b as usize * c as usize) % q);
            ctx.root(e)
        })
        .collect();
    VertexFunction {
        params: *params,
        values,
        eigenindex: Some(beta.weight()),
    }
}

pub fn fourier_transform(f: &VertexFunction) -> VertexFunction {
    let mut values = f.values.clone();
    transform_in_place(&mut values, f.params.q(), f.params.n(), Direction::Forward);
    f.map_values(values)
}

pub fn inverse_fourier(g: &VertexFunction) -> VertexFunction {
    let mut values = g.values.clone();
    transform_in_place(&mut values, g.params.q(), g.params.n(), Direction::Inverse);
    g.map_values(values)
}

pub fn apply_distance_operator(f: &VertexFunction, i: usize) -> Result<VertexFunction> {
    let (q, n) = (f.params.q(), f.params.n());
    if i > n {
        return Err(Error::OutOfRange {
            name: "i",
            value: i as i64,
            min: 0,
            max: n as i64,
        });
    }
    Ok(f.map_values(apply_distance_raw(&f.values, q, n, i)))
}

fn check_index(params: &SchemeParams, h: usize) -> Result<()> {
    if h > params.n() {
        return Err(Error::OutOfRange {
            name: "h",
            value: h as i64,
            min: 0,
            max: params.n() as i64,
        });
    }
    Ok(())
}

/// Projection onto `V_h` through the Fourier transform: keep the spectrum
/// on `W_h` and invert.
pub fn project_eigenspace(f: &VertexFunction, h: usize) -> Result<VertexFunction> {
    check_index(&f.params, h)?;
    let (q, n) = (f.params.q(), f.params.n());
    let mut values = f.values.clone();
    transform_in_place(&mut values, q, n, Direction::Forward);
    for (v, w) in values.iter_mut().zip(weights(q, n)) {
        if w != h {
            *v = Complex64::zero();
        }
    }
    transform_in_place(&mut values, q, n, Direction::Inverse);
    Ok(f.map_values(values).with_eigenindex(Some(h)))
}

/// Projection onto `V_h` through the idempotent
/// `J_h = q^-n sum_i P_h(i; n) D_i`.
pub fn project_eigenspace_krawtchouk(f: &VertexFunction, h: usize) -> Result<VertexFunction> {
    check_index(&f.params, h)?;
    let (q, n) = (f.params.q(), f.params.n());
    let mut acc = vec![Complex64::zero(); f.params.size()];
    for i in 0..=n {
        let coeff = krawtchouk_value(q, h, i, n)?
            .to_f64()
            .expect("Krawtchouk value fits in f64");
        if coeff == 0.0 {
            continue;
        }
        for (a, d) in acc.iter_mut().zip(apply_distance_raw(&f.values, q, n, i)) {
            *a += d * coeff;
        }
    }
    let scale = 1.0 / f.params.size() as f64;
    acc.iter_mut().for_each(|v| *v *= scale);
    Ok(f.map_values(acc).with_eigenindex(Some(h)))
}

/// A seeded random element of `V_h`, scaled to maximum modulus 1.
pub fn random_eigenfunction(params: &SchemeParams, h: usize, seed: u64) -> Result<VertexFunction> {
    check_index(params, h)?;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    for _ in 0..EIGEN_RETRIES {
        let values = (0..params.size())
            .map(|_| Complex64::new(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0)))
            .collect();
        let raw = VertexFunction::new(*params, values)?;
        let mut f = project_eigenspace(&raw, h)?;
        let m = f.max_modulus();
        if m > 1e-6 {
            f.values.iter_mut().for_each(|v| *v /= m);
            return Ok(f);
        }
    }
    Err(Error::DegenerateProjection(EIGEN_RETRIES))
}
