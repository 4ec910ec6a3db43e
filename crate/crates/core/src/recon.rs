//! Reconstruction of an eigenfunction from its values on the sphere `W_d`
//! around the origin.
//!
//! [`reconstruct_ball`] recovers the ball `B_d` one weight layer at a time:
//! the origin from the total sphere sum, then for every support set `I` of
//! size `k` the values on `S^I` from a linear system `M^{d,k} F = Φ - Ψ`
//! that is diagonal in the Fourier basis of the `(q-1)`-ary `k`-cube.
//!
//! [`reconstruct_full`] takes `d = h`, recovers `B_h`, derives the Fourier
//! coefficients on `W_h` from face sums `η` and inverts the transform.

use num_complex::Complex64;
use num_traits::{ToPrimitive, Zero};
use rayon::prelude::*;

use crate::coeffs::{check_conditions, eigen_sums, CoefficientTable, ConditionReport};
use crate::error::{Error, Result};
use crate::krawtchouk::{eigenvalue_of_index, krawtchouk_value};
use crate::local_dist::{local_components, split_components, to_f64, transfer_components};
use crate::scheme::{IndexSet, SchemeParams, Word};
use crate::spectral::{apply_distance_raw, transform_in_place, weights, Direction, FourierContext, VertexFunction};

/// Default tolerance of the consistency checks, relative to the data scale.
pub const DEFAULT_TOLERANCE: f64 = 1e-8;

/// How the face sums `η` are obtained during full reconstruction.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub enum EtaRoute {
    /// `η = q^(n-2h) sum_j (-1)^j (q-1)^(h-j) v_j`.
    #[default]
    ClosedForm,
    /// Transfer the `h`-face distribution to the orthogonal face with the
    /// coefficient tables and add up its components.
    Transfer,
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct ReconOptions {
    pub tolerance: f64,
    pub eta: EtaRoute,
    /// Reject input that is not the restriction of an eigenfunction, when
    /// that can be detected.
    pub check_consistency: bool,
}

impl Default for ReconOptions {
    fn default() -> Self {
        Self {
            tolerance: DEFAULT_TOLERANCE,
            eta: EtaRoute::default(),
            check_consistency: true,
        }
    }
}

fn max_modulus(values: &[Complex64]) -> f64 {
    values.iter().map(|v| v.norm()).fold(0.0, f64::max)
}

/// Values on `W_d`, stored densely (zero off the sphere).
#[derive(Clone, Debug, PartialEq)]
pub struct SphereData {
    params: SchemeParams,
    d: usize,
    values: Vec<Complex64>,
}

impl SphereData {
    pub fn zeros(params: SchemeParams, d: usize) -> Result<Self> {
        if d > params.n() {
            return Err(Error::OutOfRange {
                name: "d",
                value: d as i64,
                min: 0,
                max: params.n() as i64,
            });
        }
        Ok(Self {
            params,
            d,
            values: vec![Complex64::zero(); params.size()],
        })
    }

    /// The restriction `f|_{W_d}`.
    pub fn from_function(f: &VertexFunction, d: usize) -> Result<Self> {
        let mut s = Self::zeros(*f.params(), d)?;
        for r in s.ranks() {
            s.values[r] = f.values()[r];
        }
        Ok(s)
    }

    /// Builds sphere data from explicit entries; every word must have weight
    /// `d` and omitted words of weight `d` are zero.
    pub fn from_entries<I>(params: SchemeParams, d: usize, entries: I) -> Result<Self>
    where
        I: IntoIterator<Item = (Word, Complex64)>,
    {
        let mut s = Self::zeros(params, d)?;
        for (w, v) in entries {
            let w = params.word_from_digits(w.digits().to_vec())?;
            if w.weight() != d {
                return Err(Error::Format(format!(
                    "word {w} has weight {} but the sphere has radius {d}",
                    w.weight()
                )));
            }
            s.values[params.rank(&w)] = v;
        }
        Ok(s)
    }

    pub fn params(&self) -> &SchemeParams {
        &self.params
    }

    pub fn radius(&self) -> usize {
        self.d
    }

    pub fn get(&self, w: &Word) -> Option<Complex64> {
        (w.weight() == self.d).then(|| self.values[self.params.rank(w)])
    }

    /// Ranks of `W_d` in increasing order.
    pub fn ranks(&self) -> Vec<usize> {
        self.params.sphere_ranks(0, self.d).expect("radius checked")
    }

    pub fn entries(&self) -> Vec<(Word, Complex64)> {
        self.ranks()
            .into_iter()
            .map(|r| (self.params.word(r), self.values[r]))
            .collect()
    }

    pub(crate) fn dense(&self) -> &[Complex64] {
        &self.values
    }

    /// Pointwise `a * self + b * other`.
    pub fn combine(&self, a: Complex64, other: &SphereData, b: Complex64) -> Result<Self> {
        if self.params != other.params || self.d != other.d {
            return Err(Error::Format("sphere data of different shapes".into()));
        }
        let values = self
            .values
            .iter()
            .zip(&other.values)
            .map(|(x, y)| x * a + y * b)
            .collect();
        Ok(Self { values, ..*self })
    }
}

/// Values on the ball `B_d`, stored densely (zero outside).
#[derive(Clone, Debug, PartialEq)]
pub struct BallData {
    params: SchemeParams,
    d: usize,
    values: Vec<Complex64>,
}

impl BallData {
    /// The restriction `f|_{B_d}`.
    pub fn from_function(f: &VertexFunction, d: usize) -> Result<Self> {
        let params = *f.params();
        if d > params.n() {
            return Err(Error::OutOfRange {
                name: "d",
                value: d as i64,
                min: 0,
                max: params.n() as i64,
            });
        }
        let w = weights(params.q(), params.n());
        let values = f
            .values()
            .iter()
            .zip(w)
            .map(|(v, wt)| if wt <= d { *v } else { Complex64::zero() })
            .collect();
        Ok(Self { params, d, values })
    }

    pub fn params(&self) -> &SchemeParams {
        &self.params
    }

    pub fn radius(&self) -> usize {
        self.d
    }

    pub fn get(&self, w: &Word) -> Option<Complex64> {
        (w.weight() <= self.d).then(|| self.values[self.params.rank(w)])
    }

    /// Ranks of `B_d` in increasing order.
    pub fn ranks(&self) -> Vec<usize> {
        self.params.ball_ranks(0, self.d).expect("radius checked")
    }

    pub fn entries(&self) -> Vec<(Word, Complex64)> {
        self.ranks()
            .into_iter()
            .map(|r| (self.params.word(r), self.values[r]))
            .collect()
    }

    /// The ball values as a function on the whole cube, zero outside `B_d`.
    pub fn to_vertex_function(&self) -> VertexFunction {
        VertexFunction::new(self.params, self.values.clone()).expect("dense storage")
    }

    pub(crate) fn dense(&self) -> &[Complex64] {
        &self.values
    }
}

/// One layer system `M^{d,k} F^I = Φ^I - Ψ^I` over `S^I`, indexed in the
/// order of [`SchemeParams::full_support_ranks`].
#[derive(Clone, Debug, PartialEq)]
pub struct LayerSystem {
    pub face: IndexSet,
    pub rhs: Vec<Complex64>,
}

/// `f(0) = (sum of f over W_d) / P_d(h; n)`.
pub fn reconstruct_origin(sphere: &SphereData, h: usize) -> Result<Complex64> {
    let (q, n, d) = (sphere.params.q(), sphere.params.n(), sphere.d);
    let p = krawtchouk_value(q, d, h, n)?;
    if p.is_zero() {
        return Err(Error::OriginCondition { d });
    }
    let total: Complex64 = sphere.ranks().iter().map(|&r| sphere.values[r]).sum();
    Ok(total / p.to_f64().expect("Krawtchouk value fits in f64"))
}

/// Per-face enumeration shared by all anchors of `S^I`.
struct FaceWork {
    support: Vec<usize>,
    face: Vec<usize>,
    /// words supported on `Ī` with `d - k` nonzero digits
    phi_offsets: Vec<usize>,
}

impl FaceWork {
    fn new(params: &SchemeParams, face: &IndexSet, d: usize) -> Self {
        let k = face.len();
        let phi_offsets = params
            .face_ranks(0, &face.complement())
            .expect("same dimension")
            .into_iter()
            .filter(|&r| params.weight_of_rank(r) == d - k)
            .collect();
        Self {
            support: params.full_support_ranks(face).expect("same dimension"),
            face: params.face_ranks(0, face).expect("same dimension"),
            phi_offsets,
        }
    }
}

fn rhs_for_face(
    params: &SchemeParams,
    work: &FaceWork,
    k: usize,
    column: &[f64],
    sphere: &[Complex64],
    partial: &[Complex64],
) -> Vec<Complex64> {
    work.support
        .iter()
        .map(|&a| {
            let phi: Complex64 = work.phi_offsets.iter().map(|&o| sphere[a + o]).sum();
            let split = split_components(params, partial, a, &work.face, k);
            let psi: Complex64 = column.iter().zip(&split.delta).map(|(r, dl)| dl * r).sum();
            phi - psi
        })
        .collect()
}

fn check_shape(params: &SchemeParams, face: &IndexSet) -> Result<()> {
    if face.n() != params.n() {
        return Err(Error::DimensionMismatch {
            expected: params.n(),
            actual: face.n(),
        });
    }
    Ok(())
}

/// Builds `Φ^I - Ψ^I` for the face `I` from the sphere values and the already
/// recovered values of weight below `|I|`.
pub fn layer_rhs(face: &IndexSet, sphere: &SphereData, partial: &BallData, h: usize) -> Result<LayerSystem> {
    let params = sphere.params;
    check_shape(&params, face)?;
    let (k, d) = (face.len(), sphere.d);
    if k > d || d > h {
        return Err(Error::OutOfRange {
            name: "k",
            value: k as i64,
            min: 0,
            max: d.min(h) as i64,
        });
    }
    if k > 0 && partial.d + 1 < k {
        return Err(Error::MissingValue(format!(
            "weights below {k} (ball has radius {})",
            partial.d
        )));
    }
    let column = layer_column(&params, h, d, k)?;
    let work = FaceWork::new(&params, face, d);
    let rhs = rhs_for_face(&params, &work, k, &column, sphere.dense(), partial.dense());
    Ok(LayerSystem { face: *face, rhs })
}

/// `r^k_{i,d-k}` for `i = 0..=min(k, d-k)` as floats.
fn layer_column(params: &SchemeParams, h: usize, d: usize, k: usize) -> Result<Vec<f64>> {
    let table = CoefficientTable::new(params.q(), params.n(), h, k)?;
    Ok(table.column(d - k).iter().take(k + 1).map(to_f64).collect())
}

/// Eigenvalues of `M^{d,k}` as floats, refusing singular layers.
fn layer_spectrum(q: usize, n: usize, h: usize, d: usize, k: usize) -> Result<Vec<f64>> {
    let sums = eigen_sums(q, n, h, d, k)?;
    if let Some(l) = sums.first_zero() {
        return Err(Error::SingularLayer { k, l });
    }
    Ok(sums.sums.iter().map(to_f64).collect())
}

fn solve_with_spectrum(rhs: &[Complex64], q: usize, k: usize, spectrum: &[f64]) -> Vec<Complex64> {
    let mut v = rhs.to_vec();
    transform_in_place(&mut v, q - 1, k, Direction::Forward);
    for (x, w) in v.iter_mut().zip(weights(q - 1, k)) {
        *x /= spectrum[w];
    }
    transform_in_place(&mut v, q - 1, k, Direction::Inverse);
    v
}

/// Solves `M^{d,k} F = rhs` by dividing each spectral component of `rhs` in
/// the `(q-1)`-ary `k`-cube by the matching eigen-sum.
pub fn solve_layer(system: &LayerSystem, q: usize, n: usize, h: usize, d: usize) -> Result<Vec<Complex64>> {
    let k = system.face.len();
    let expected = (q - 1).pow(k as u32);
    if system.rhs.len() != expected {
        return Err(Error::DimensionMismatch {
            expected,
            actual: system.rhs.len(),
        });
    }
    let spectrum = layer_spectrum(q, n, h, d, k)?;
    Ok(solve_with_spectrum(&system.rhs, q, k, &spectrum))
}

/// Applies `M^{d,k} = sum_i r^k_{i,d-k} D_i^{q-1,k}` to a vector over `S^I`.
pub fn apply_layer_operator(values: &[Complex64], q: usize, n: usize, h: usize, d: usize, k: usize) -> Result<Vec<Complex64>> {
    let params = SchemeParams::new(q, n)?;
    let column = layer_column(&params, h, d, k)?;
    let mut out = vec![Complex64::zero(); values.len()];
    for (i, r) in column.iter().enumerate() {
        for (o, x) in out.iter_mut().zip(apply_distance_raw(values, q - 1, k, i)) {
            *o += x * *r;
        }
    }
    Ok(out)
}

fn condition_gate(q: usize, n: usize, h: usize, d: usize) -> Result<ConditionReport> {
    let report = check_conditions(q, n, h, d)?;
    if !report.pass {
        return Err(Error::ConditionFailure(Box::new(report)));
    }
    Ok(report)
}

pub fn reconstruct_ball(sphere: &SphereData, h: usize) -> Result<BallData> {
    reconstruct_ball_with(sphere, h, &ReconOptions::default())
}

/// Recovers `f|_{B_d}` from `f|_{W_d}` for an eigenfunction with index `h`.
pub fn reconstruct_ball_with(sphere: &SphereData, h: usize, opts: &ReconOptions) -> Result<BallData> {
    let params = sphere.params;
    let (q, n, d) = (params.q(), params.n(), sphere.d);
    if d > h || h > n {
        return Err(Error::OutOfRange {
            name: "d",
            value: d as i64,
            min: 0,
            max: h.min(n) as i64,
        });
    }
    condition_gate(q, n, h, d)?;

    let mut ball = vec![Complex64::zero(); params.size()];
    ball[0] = reconstruct_origin(sphere, h)?;

    for k in 1..d {
        let column = layer_column(&params, h, d, k)?;
        let spectrum = layer_spectrum(q, n, h, d, k)?;
        let solved: Vec<(Vec<usize>, Vec<Complex64>)> = IndexSet::subsets(n, k)
            .par_iter()
            .map(|face| {
                let work = FaceWork::new(&params, face, d);
                let rhs = rhs_for_face(&params, &work, k, &column, sphere.dense(), &ball);
                (work.support, solve_with_spectrum(&rhs, q, k, &spectrum))
            })
            .collect();
        for (ranks, vals) in solved {
            for (r, v) in ranks.into_iter().zip(vals) {
                ball[r] = v;
            }
        }
    }

    if d > 0 {
        // at k = d the system is F = Φ and must reproduce the given values
        let column = layer_column(&params, h, d, d)?;
        let scale = 1.0 + max_modulus(sphere.dense()).max(max_modulus(&ball));
        let mut worst = 0.0f64;
        for face in IndexSet::subsets(n, d) {
            let work = FaceWork::new(&params, &face, d);
            let rhs = rhs_for_face(&params, &work, d, &column, sphere.dense(), &ball);
            for (&r, v) in work.support.iter().zip(rhs) {
                worst = worst.max((v - sphere.values[r]).norm());
                ball[r] = sphere.values[r];
            }
        }
        let threshold = opts.tolerance * scale;
        if opts.check_consistency && worst > threshold {
            return Err(Error::InconsistentData {
                check: "top-layer",
                residual: worst,
                threshold,
            });
        }
    }

    let out = BallData { params, d, values: ball };
    if opts.check_consistency {
        check_inner_eigen_equation(&out, h, opts.tolerance)?;
        // for d = h the restriction to W_h is onto
        if d > 0 && d < h {
            check_sphere_extends(sphere, h, opts.tolerance)?;
        }
    }
    Ok(out)
}

const EXTENSION_MAX_ITERATIONS: usize = 2000;

/// `φ` is a restriction of some `g` in `V_h` iff the least-squares fit
/// `min ||g|_{W_d} - φ||` over `V_h` is exact. The fit is found with conjugate
/// gradients on the normal equations `E_h R^* R g = E_h R^* φ`, every product
/// being a restriction followed by a spectral projection.
fn check_sphere_extends(sphere: &SphereData, h: usize, tol: f64) -> Result<()> {
    let params = sphere.params;
    let (q, n, d) = (params.q(), params.n(), sphere.d);
    let w = weights(q, n);
    let proj = |v: &mut Vec<Complex64>| {
        transform_in_place(v, q, n, Direction::Forward);
        for (x, &wt) in v.iter_mut().zip(&w) {
            if wt != h {
                *x = Complex64::zero();
            }
        }
        transform_in_place(v, q, n, Direction::Inverse);
    };
    let restrict = |v: &mut Vec<Complex64>| {
        for (x, &wt) in v.iter_mut().zip(&w) {
            if wt != d {
                *x = Complex64::zero();
            }
        }
    };
    let dot = |a: &[Complex64], b: &[Complex64]| -> f64 { a.iter().zip(b).map(|(x, y)| (x.conj() * y).re).sum() };

    let mut b = sphere.values.clone();
    proj(&mut b);
    let b_norm = dot(&b, &b).sqrt();
    let mut g = vec![Complex64::zero(); params.size()];
    let mut r = b.clone();
    let mut p = r.clone();
    let mut rr = dot(&r, &r);
    for _ in 0..EXTENSION_MAX_ITERATIONS {
        if rr.sqrt() <= 1e-14 * b_norm || rr == 0.0 {
            break;
        }
        let mut ap = p.clone();
        restrict(&mut ap);
        proj(&mut ap);
        let pap = dot(&p, &ap);
        if pap <= 0.0 {
            break;
        }
        let alpha = rr / pap;
        for i in 0..g.len() {
            g[i] += p[i] * alpha;
            r[i] -= ap[i] * alpha;
        }
        let next = dot(&r, &r);
        let beta = next / rr;
        rr = next;
        for i in 0..p.len() {
            p[i] = r[i] + p[i] * beta;
        }
    }

    let residual = (0..params.size())
        .filter(|&i| w[i] == d)
        .map(|i| (g[i] - sphere.values[i]).norm())
        .fold(0.0, f64::max);
    let threshold = tol * (1.0 + max_modulus(&sphere.values));
    if residual > threshold {
        return Err(Error::InconsistentData {
            check: "extension",
            residual,
            threshold,
        });
    }
    Ok(())
}

/// The neighbor-sum equation at every word of weight `< d` only involves
/// values inside `B_d`, so it can be checked on the reconstructed ball.
fn check_inner_eigen_equation(ball: &BallData, h: usize, tol: f64) -> Result<()> {
    if ball.d == 0 {
        return Ok(());
    }
    let params = ball.params;
    let (q, n) = (params.q(), params.n());
    let lambda = eigenvalue_of_index(q, n, h)?.lambda;
    let neighbors = apply_distance_raw(&ball.values, q, n, 1);
    let w = weights(q, n);
    let residual = (0..params.size())
        .filter(|&r| w[r] < ball.d)
        .map(|r| (neighbors[r] - ball.values[r] * lambda as f64).norm())
        .fold(0.0, f64::max);
    let threshold = tol * (1.0 + max_modulus(&ball.values)) * ((q - 1) * n + lambda.unsigned_abs() as usize) as f64;
    if residual > threshold {
        return Err(Error::InconsistentData {
            check: "eigen-equation",
            residual,
            threshold,
        });
    }
    Ok(())
}

fn check_eta_args(face: &IndexSet, beta: &Word, ball: &BallData) -> Result<()> {
    check_shape(&ball.params, face)?;
    if face.len() != ball.d {
        return Err(Error::MissingValue(format!(
            "face {face} needs a ball of radius {}, got {}",
            face.len(),
            ball.d
        )));
    }
    let beta = ball.params.word_from_digits(beta.digits().to_vec())?;
    if beta.digits().iter().enumerate().any(|(p, &v)| v != 0 && !face.contains(p + 1)) {
        return Err(Error::InvalidWord {
            text: beta.to_string(),
            reason: format!("not in the face through the origin with free positions {face}"),
        });
    }
    Ok(())
}

fn eta_closed_form(q: usize, n: usize, h: usize, v: &[Complex64]) -> Complex64 {
    let prefactor = (q as f64).powi(n as i32 - 2 * h as i32);
    let qm1 = (q - 1) as f64;
    let s: Complex64 = v
        .iter()
        .enumerate()
        .map(|(j, vj)| {
            let sign = if j % 2 == 0 { 1.0 } else { -1.0 };
            vj * (sign * qm1.powi((h - j) as i32))
        })
        .sum();
    s * prefactor
}

/// `η(β)`: the sum of `f` over the orthogonal face `Γ^Ī(β)`, computed from
/// the known values inside the `h`-face `Γ^I` (`|I| = h`, `h` the ball
/// radius) in closed form.
pub fn eta_sum(face: &IndexSet, beta: &Word, ball: &BallData) -> Result<Complex64> {
    check_eta_args(face, beta, ball)?;
    let params = ball.params;
    let v = local_components(&params, &ball.values, face, params.rank(beta));
    Ok(eta_closed_form(params.q(), params.n(), ball.d, &v))
}

/// [`eta_sum`] through the transfer coefficients instead of the closed form.
pub fn eta_sum_transfer(face: &IndexSet, beta: &Word, ball: &BallData) -> Result<Complex64> {
    check_eta_args(face, beta, ball)?;
    let params = ball.params;
    let (q, n, h) = (params.q(), params.n(), ball.d);
    let table = CoefficientTable::new(q, n, h, h)?;
    let v = local_components(&params, &ball.values, face, params.rank(beta));
    Ok(transfer_components(&table, &v, n - h).into_iter().sum())
}

pub fn reconstruct_full(sphere: &SphereData) -> Result<VertexFunction> {
    reconstruct_full_with(sphere, &ReconOptions::default())
}

/// Recovers the whole eigenfunction with index `h = d` from `f|_{W_h}`.
pub fn reconstruct_full_with(sphere: &SphereData, opts: &ReconOptions) -> Result<VertexFunction> {
    let params = sphere.params;
    let (q, n, h) = (params.q(), params.n(), sphere.d);
    condition_gate(q, n, h, h)?;
    if h == 0 {
        let c = sphere.values[0];
        return VertexFunction::new(params, vec![c; params.size()]).map(|f| f.with_eigenindex(Some(0)));
    }
    let ball = reconstruct_ball_with(sphere, h, opts)?;
    let ctx = FourierContext::new(q);
    let table = match opts.eta {
        EtaRoute::Transfer => Some(CoefficientTable::new(q, n, h, h)?),
        EtaRoute::ClosedForm => None,
    };

    let spectra: Vec<(Vec<usize>, Vec<Complex64>)> = IndexSet::subsets(n, h)
        .par_iter()
        .map(|face| {
            let face_ranks = params.face_ranks(0, face).expect("same dimension");
            let etas: Vec<Complex64> = face_ranks
                .iter()
                .map(|&b| {
                    let v = local_components(&params, &ball.values, face, b);
                    match &table {
                        Some(t) => transfer_components(t, &v, n - h).into_iter().sum(),
                        None => eta_closed_form(q, n, h, &v),
                    }
                })
                .collect();
            let support = params.full_support_ranks(face).expect("same dimension");
            let mut a_digits = vec![0u8; n];
            let mut b_digits = vec![0u8; n];
            let hats = support
                .iter()
                .map(|&a| {
                    params.digits_into(a, &mut a_digits);
                    face_ranks
                        .iter()
                        .zip(&etas)
                        .map(|(&b, eta)| {
                            params.digits_into(b, &mut b_digits);
                            let e = a_digits
                                .iter()
                                .zip(&b_digits)
                                .fold(0, |acc, (&x, &y)| (acc + x as usize * y as usize) % q);
                            eta * ctx.root(e).conj()
                        })
                        .sum()
                })
                .collect();
            (support, hats)
        })
        .collect();

    let mut values = vec![Complex64::zero(); params.size()];
    for (ranks, hats) in spectra {
        for (r, v) in ranks.into_iter().zip(hats) {
            values[r] = v;
        }
    }
    transform_in_place(&mut values, q, n, Direction::Inverse);

    if opts.check_consistency {
        let scale = 1.0 + max_modulus(&ball.values);
        let worst = ball
            .ranks()
            .into_iter()
            .map(|r| (values[r] - ball.values[r]).norm())
            .fold(0.0, f64::max);
        let threshold = opts.tolerance * scale;
        if worst > threshold {
            return Err(Error::InconsistentData {
                check: "ball-agreement",
                residual: worst,
                threshold,
            });
        }
    }
    Ok(VertexFunction::new(params, values)?.with_eigenindex(Some(h)))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::spectral::{character, random_eigenfunction};

    fn p(q: usize, n: usize) -> SchemeParams {
        SchemeParams::new(q, n).unwrap()
    }

    fn rel_err(a: &[Complex64], b: &[Complex64]) -> f64 {
        let diff = a.iter().zip(b).map(|(x, y)| (x - y).norm()).fold(0.0, f64::max);
        diff / max_modulus(b).max(f64::MIN_POSITIVE)
    }

    #[test]
    fn origin_from_characters() {
        let s = p(3, 4);
        let chi = character(&s, &s.parse_word("0110").unwrap());
        for d in 0..=2 {
            let sphere = SphereData::from_function(&chi, d).unwrap();
            if krawtchouk_value(3, d, 2, 4).unwrap().is_zero() {
                assert!(reconstruct_origin(&sphere, 2).is_err());
                continue;
            }
            let o = reconstruct_origin(&sphere, 2).unwrap();
            assert!((o - 1.0).norm() < 1e-12, "d={d}: {o}");
        }
        let zero = SphereData::zeros(s, 2).unwrap();
        assert_eq!(reconstruct_origin(&zero, 2).unwrap(), Complex64::zero());
    }

    #[test]
    fn origin_at_radius_zero_is_the_given_value() {
        let s = p(4, 3);
        let f = random_eigenfunction(&s, 2, 8).unwrap();
        let sphere = SphereData::from_function(&f, 0).unwrap();
        assert_eq!(reconstruct_origin(&sphere, 2).unwrap(), f.values()[0]);
        let ball = reconstruct_ball(&sphere, 2).unwrap();
        assert_eq!(ball.entries(), vec![(s.zero(), f.values()[0])]);
    }

    #[test]
    fn top_layer_rhs_is_the_sphere() {
        let s = p(3, 4);
        let f = random_eigenfunction(&s, 3, 2).unwrap();
        let sphere = SphereData::from_function(&f, 2).unwrap();
        let partial = BallData::from_function(&f, 1).unwrap();
        for face in IndexSet::subsets(4, 2) {
            let sys = layer_rhs(&face, &sphere, &partial, 3).unwrap();
            for (&r, v) in s.full_support_ranks(&face).unwrap().iter().zip(&sys.rhs) {
                assert!((v - f.values()[r]).norm() < 1e-12);
            }
        }
    }

    #[test]
    fn phi_words_lie_on_the_sphere() {
        let s = p(4, 4);
        for d in 1..=4 {
            for k in 1..=d {
                for face in IndexSet::subsets(4, k) {
                    let work = FaceWork::new(&s, &face, d);
                    for &a in &work.support {
                        for &o in &work.phi_offsets {
                            assert_eq!(s.weight_of_rank(a + o), d);
                            assert_eq!(s.distance_of_ranks(a, a + o), d - k);
                        }
                    }
                }
            }
        }
    }

    #[test]
    fn solved_layers_satisfy_their_systems() {
        let s = p(4, 4);
        let f = random_eigenfunction(&s, 3, 21).unwrap();
        let sphere = SphereData::from_function(&f, 3).unwrap();
        let partial = BallData::from_function(&f, 1).unwrap();
        for face in IndexSet::subsets(4, 2) {
            let sys = layer_rhs(&face, &sphere, &partial, 3).unwrap();
            let sol = solve_layer(&sys, 4, 4, 3, 3).unwrap();
            let back = apply_layer_operator(&sol, 4, 4, 3, 3, 2).unwrap();
            assert!(rel_err(&back, &sys.rhs) < 1e-9);
            let truth: Vec<Complex64> = s.full_support_ranks(&face).unwrap().iter().map(|&r| f.values()[r]).collect();
            assert!(rel_err(&sol, &truth) < 1e-9);
            let doubled = LayerSystem {
                face,
                rhs: sys.rhs.iter().map(|v| v * 2.0).collect(),
            };
            let sol2 = solve_layer(&doubled, 4, 4, 3, 3).unwrap();
            assert!(rel_err(&sol2, &sol.iter().map(|v| v * 2.0).collect::<Vec<_>>()) < 1e-12);
        }
    }

    #[test]
    fn ball_round_trip() {
        for (q, n) in [(3, 4), (4, 3), (5, 3)] {
            let s = p(q, n);
            for h in 0..=n {
                let f = random_eigenfunction(&s, h, 100 + h as u64).unwrap();
                for d in 0..=h {
                    if !check_conditions(q, n, h, d).unwrap().pass {
                        continue;
                    }
                    let sphere = SphereData::from_function(&f, d).unwrap();
                    let ball = reconstruct_ball(&sphere, h).unwrap();
                    let truth = BallData::from_function(&f, d).unwrap();
                    assert!(rel_err(ball.dense(), truth.dense()) < 1e-8, "q={q} n={n} h={h} d={d}");
                    for r in sphere.ranks() {
                        assert_eq!(ball.dense()[r], sphere.dense()[r]);
                    }
                }
            }
        }
    }

    #[test]
    fn condition_failures_are_reported() {
        // P_1(2; 3) = 0 for q = 3
        let s = p(3, 3);
        let f = random_eigenfunction(&s, 2, 4).unwrap();
        let sphere = SphereData::from_function(&f, 1).unwrap();
        match reconstruct_ball(&sphere, 2) {
            Err(Error::ConditionFailure(report)) => assert!(!report.origin_pass()),
            other => panic!("expected a condition failure, got {other:?}"),
        }
        assert!(reconstruct_ball(&sphere, 0).is_err());
    }

    #[test]
    fn inconsistent_sphere_is_rejected() {
        // |W_2| = 24 > dim V_4 = 16, so generic data is no restriction
        let s = p(3, 4);
        assert!(check_conditions(3, 4, 4, 2).unwrap().pass);
        let mut sphere = SphereData::from_function(&random_eigenfunction(&s, 4, 1).unwrap(), 2).unwrap();
        reconstruct_ball(&sphere, 4).unwrap();
        let r = sphere.ranks()[5];
        sphere.values[r] += Complex64::new(0.5, 0.0);
        assert!(matches!(
            reconstruct_ball(&sphere, 4),
            Err(Error::InconsistentData { .. })
        ));
        let lax = ReconOptions {
            check_consistency: false,
            ..Default::default()
        };
        assert!(reconstruct_ball_with(&sphere, 4, &lax).is_ok());
    }

    #[test]
    fn eta_routes_agree() {
        let s = p(3, 4);
        let f = random_eigenfunction(&s, 2, 77).unwrap();
        let ball = BallData::from_function(&f, 2).unwrap();
        for face in IndexSet::subsets(4, 2) {
            for b in s.face_ranks(0, &face).unwrap() {
                let beta = s.word(b);
                let a = eta_sum(&face, &beta, &ball).unwrap();
                let t = eta_sum_transfer(&face, &beta, &ball).unwrap();
                let direct: Complex64 = s.face_ranks(b, &face.complement()).unwrap().iter().map(|&g| f.values()[g]).sum();
                assert!((a - direct).norm() < 1e-9);
                assert!((t - direct).norm() < 1e-9);
            }
        }
        let bad = s.parse_word("1001").unwrap();
        assert!(eta_sum(&IndexSet::new(4, &[1, 2]).unwrap(), &bad, &ball).is_err());
    }

    #[test]
    fn full_round_trip() {
        for (q, n) in [(3, 4), (4, 3)] {
            let s = p(q, n);
            for h in 0..=n {
                if !check_conditions(q, n, h, h).unwrap().pass {
                    continue;
                }
                let f = random_eigenfunction(&s, h, 5).unwrap();
                let sphere = SphereData::from_function(&f, h).unwrap();
                for eta in [EtaRoute::ClosedForm, EtaRoute::Transfer] {
                    let opts = ReconOptions { eta, ..Default::default() };
                    let g = reconstruct_full_with(&sphere, &opts).unwrap();
                    assert!(rel_err(g.values(), f.values()) < 1e-8, "q={q} n={n} h={h}");
                    assert_eq!(g.eigenindex(), Some(h));
                }
            }
        }
    }

    #[test]
    fn zero_sphere_gives_zero() {
        let s = p(3, 4);
        let zero = SphereData::zeros(s, 2).unwrap();
        let ball = reconstruct_ball(&zero, 2).unwrap();
        assert!(ball.dense().iter().all(|v| *v == Complex64::zero()));
        let full = reconstruct_full(&zero).unwrap();
        assert!(full.values().iter().all(|v| *v == Complex64::zero()));
    }
}
