//! Local distributions of a vertex function inside a face, their bivariate
//! enumerators, and the transfer of an eigenfunction's distribution from a
//! face `Γ^I(α)` to the orthogonal face `Γ^Ī(α)`.
//!
//! Every distribution is computed by enumerating the face and classifying
//! words by their distance to the anchor; nothing is counted in closed form.

use num_complex::Complex64;
use num_rational::BigRational;
use num_traits::{ToPrimitive, Zero};

use crate::coeffs::CoefficientTable;
use crate::error::{Error, Result};
use crate::krawtchouk::binomial;
use crate::scheme::{IndexSet, SchemeParams, Word};
use crate::spectral::VertexFunction;

pub(crate) fn to_f64(r: &BigRational) -> f64 {
    r.to_f64().expect("rational fits in f64")
}

/// `v_j = sum of f over Γ^I(α) ∩ W_j(α)` for `j = 0..=|I|`.
#[derive(Clone, Debug, PartialEq)]
pub struct LocalDistribution {
    params: SchemeParams,
    face: IndexSet,
    anchor: Word,
    components: Vec<Complex64>,
}

impl LocalDistribution {
    pub fn params(&self) -> &SchemeParams {
        &self.params
    }

    pub fn face(&self) -> &IndexSet {
        &self.face
    }

    pub fn anchor(&self) -> &Word {
        &self.anchor
    }

    pub fn components(&self) -> &[Complex64] {
        &self.components
    }
}

fn check_face(params: &SchemeParams, face: &IndexSet, anchor: &Word) -> Result<()> {
    if face.n() != params.n() {
        return Err(Error::DimensionMismatch {
            expected: params.n(),
            actual: face.n(),
        });
    }
    params.word_from_digits(anchor.digits().to_vec())?;
    Ok(())
}

/// Local distribution over a dense value slice.
pub(crate) fn local_components(
    params: &SchemeParams,
    values: &[Complex64],
    face: &IndexSet,
    anchor: usize,
) -> Vec<Complex64> {
    let mut out = vec![Complex64::zero(); face.len() + 1];
    for b in params.face_ranks(anchor, face).expect("face checked") {
        out[params.distance_of_ranks(anchor, b)] += values[b];
    }
    out
}

pub fn local_distribution(f: &VertexFunction, face: &IndexSet, anchor: &Word) -> Result<LocalDistribution> {
    let params = *f.params();
    check_face(&params, face, anchor)?;
    let components = local_components(&params, f.values(), face, params.rank(anchor));
    Ok(LocalDistribution {
        params,
        face: *face,
        anchor: anchor.clone(),
        components,
    })
}

/// `g(x, y) = sum_j v_j y^j x^(|I|-j)`.
pub fn enumerator_eval(dist: &LocalDistribution, x: Complex64, y: Complex64) -> Complex64 {
    let k = dist.components.len() - 1;
    dist.components
        .iter()
        .enumerate()
        .map(|(j, v)| v * y.powu(j as u32) * x.powu((k - j) as u32))
        .sum()
}

/// Coefficients of `y^l x^(k-l)` in `g(x + (q-2) y, -y)`:
/// `sum_{i<=l} (-1)^i v_i (q-2)^(l-i) C(k-i, l-i)`.
pub fn substituted_coefficients(dist: &LocalDistribution) -> Vec<Complex64> {
    substitute(dist.params.q(), &dist.components)
}

fn substitute(q: usize, v: &[Complex64]) -> Vec<Complex64> {
    let k = v.len() - 1;
    let c = (q - 2) as f64;
    (0..=k)
        .map(|l| {
            (0..=l)
                .map(|i| {
                    let sign = if i % 2 == 0 { 1.0 } else { -1.0 };
                    let b = binomial((k - i) as i64, (l - i) as i64)
                        .to_f64()
                        .expect("binomial fits in f64");
                    v[i] * (sign * c.powi((l - i) as i32) * b)
                })
                .sum()
        })
        .collect()
}

/// `v^Ī_j = sum_{i<=j} r_{ij} v^I_i` for `j = 0..=max_j`, from a table built
/// for this face dimension.
pub(crate) fn transfer_components(table: &CoefficientTable, v: &[Complex64], max_j: usize) -> Vec<Complex64> {
    (0..=max_j)
        .map(|j| {
            table
                .column(j)
                .iter()
                .zip(v)
                .map(|(r, vi)| vi * to_f64(r))
                .sum()
        })
        .collect()
}

/// Predicts the local distribution in the orthogonal face `Γ^Ī(α)` of an
/// eigenfunction with index `h` from its distribution in `Γ^I(α)`. All
/// `n - k + 1` components are produced.
pub fn transfer_orthogonal(dist: &LocalDistribution, h: usize) -> Result<LocalDistribution> {
    let (q, n) = (dist.params.q(), dist.params.n());
    let k = dist.face.len();
    let table = CoefficientTable::new(q, n, h, k)?;
    let components = transfer_components(&table, &dist.components, n - k);
    Ok(LocalDistribution {
        params: dist.params,
        face: dist.face.complement(),
        anchor: dist.anchor.clone(),
        components,
    })
}

// homogeneous bivariate polynomials as coefficient vectors in y
fn times_linear(poly: &[Complex64], c: f64, times: usize) -> Vec<Complex64> {
    let mut p = poly.to_vec();
    for _ in 0..times {
        // multiply by (x + c y)
        let mut next = vec![Complex64::zero(); p.len() + 1];
        for (deg, a) in p.iter().enumerate() {
            next[deg] += a;
            next[deg + 1] += a * c;
        }
        p = next;
    }
    p
}

/// Checks the relation between the enumerators of an eigenfunction in two
/// orthogonal faces,
///
/// `(x+(q-1)y)^(h-|Ī|) g^Ī(x, y) = (x-y)^(h-|I|) g^I(x+(q-2)y, -y)`,
///
/// after multiplying through by the factors that carry negative exponents,
/// and returns the largest coefficient discrepancy.
pub fn verify_face_relation(f: &VertexFunction, face: &IndexSet, anchor: &Word, h: usize) -> Result<f64> {
    let params = *f.params();
    let (q, n) = (params.q(), params.n());
    if h > n {
        return Err(Error::OutOfRange {
            name: "h",
            value: h as i64,
            min: 0,
            max: n as i64,
        });
    }
    let inside = local_distribution(f, face, anchor)?;
    let outside = local_distribution(f, &face.complement(), anchor)?;
    let k = face.len() as i64;
    let a = h as i64 - (n as i64 - k);
    let b = h as i64 - k;
    let qm1 = (q - 1) as f64;

    let lhs = times_linear(&outside.components, qm1, a.max(0) as usize);
    let lhs = times_linear(&lhs, -1.0, (-b).max(0) as usize);
    let rhs = times_linear(&substituted_coefficients(&inside), -1.0, b.max(0) as usize);
    let rhs = times_linear(&rhs, qm1, (-a).max(0) as usize);
    debug_assert_eq!(lhs.len(), rhs.len());
    Ok(lhs
        .iter()
        .zip(&rhs)
        .map(|(x, y)| (x - y).norm())
        .fold(0.0, f64::max))
}

/// The split `v^{I}_i(α) = σ_i + δ_i` with `I = s(α)`: `σ` sums the words of
/// `Γ^I(α)` with full support `I`, `δ` the words of smaller weight.
#[derive(Clone, Debug, PartialEq)]
pub struct SigmaDelta {
    pub sigma: Vec<Complex64>,
    pub delta: Vec<Complex64>,
}

pub(crate) fn split_components(
    params: &SchemeParams,
    values: &[Complex64],
    alpha: usize,
    face_ranks: &[usize],
    k: usize,
) -> SigmaDelta {
    let mut sigma = vec![Complex64::zero(); k + 1];
    let mut delta = vec![Complex64::zero(); k + 1];
    for &b in face_ranks {
        let i = params.distance_of_ranks(alpha, b);
        if params.weight_of_rank(b) == k {
            sigma[i] += values[b];
        } else {
            delta[i] += values[b];
        }
    }
    SigmaDelta { sigma, delta }
}

pub fn sigma_delta_split(f: &VertexFunction, alpha: &Word) -> Result<SigmaDelta> {
    let params = *f.params();
    let support = alpha.support();
    check_face(&params, &support, alpha)?;
    if support.is_empty() {
        return Err(Error::ZeroAnchor);
    }
    let a = params.rank(alpha);
    let face = params.face_ranks(a, &support)?;
    Ok(split_components(&params, f.values(), a, &face, support.len()))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::spectral::random_eigenfunction;

    fn p(q: usize, n: usize) -> SchemeParams {
        SchemeParams::new(q, n).unwrap()
    }

    fn ones(params: SchemeParams) -> VertexFunction {
        VertexFunction::new(params, vec![Complex64::new(1.0, 0.0); params.size()]).unwrap()
    }

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    #[test]
    fn constant_function_counts_spheres() {
        let s = p(4, 4);
        let f = ones(s);
        let anchor = s.parse_word("1302").unwrap();
        for k in 0..=4 {
            for face in IndexSet::subsets(4, k) {
                let d = local_distribution(&f, &face, &anchor).unwrap();
                for (j, v) in d.components().iter().enumerate() {
                    let count = binomial(k as i64, j as i64).to_f64().unwrap() * 3f64.powi(j as i32);
                    assert_eq!(*v, c(count, 0.0));
                }
                for (x, y) in [(c(1.0, 0.0), c(2.0, 0.0)), (c(0.5, 1.0), c(-1.0, 0.25))] {
                    let expect = (x + y * 3.0).powu(k as u32);
                    assert!((enumerator_eval(&d, x, y) - expect).norm() < 1e-9);
                }
            }
        }
    }

    #[test]
    fn extreme_faces() {
        let s = p(3, 3);
        let f = random_eigenfunction(&s, 1, 5).unwrap();
        let anchor = s.parse_word("021").unwrap();
        let empty = local_distribution(&f, &IndexSet::empty(3), &anchor).unwrap();
        assert_eq!(empty.components(), &[f.get(&anchor)]);
        let full = local_distribution(&f, &IndexSet::full(3), &anchor).unwrap();
        let a = s.rank(&anchor);
        for (j, v) in full.components().iter().enumerate() {
            let direct: Complex64 = s.sphere_ranks(a, j).unwrap().iter().map(|&b| f.values()[b]).sum();
            assert!((v - direct).norm() < 1e-12);
        }
        let total: Complex64 = f.values().iter().sum();
        assert!((enumerator_eval(&full, c(1.0, 0.0), c(1.0, 0.0)) - total).norm() < 1e-9);
        assert_eq!(enumerator_eval(&full, c(1.0, 0.0), c(0.0, 0.0)), full.components()[0]);
    }

    #[test]
    fn substitution_matches_evaluation() {
        let s = p(5, 3);
        let f = random_eigenfunction(&s, 2, 9).unwrap();
        let face = IndexSet::new(3, &[1, 3]).unwrap();
        let d = local_distribution(&f, &face, &s.parse_word("402").unwrap()).unwrap();
        let coeffs = substituted_coefficients(&d);
        let k = face.len();
        assert_eq!(coeffs[0], d.components()[0]);
        for (x, y) in [(1.0, 1.0), (2.0, 1.0), (1.0, -1.0)] {
            let (x, y) = (c(x, 0.0), c(y, 0.0));
            let direct = enumerator_eval(&d, x + y * 3.0, -y);
            let via: Complex64 = coeffs
                .iter()
                .enumerate()
                .map(|(l, v)| v * y.powu(l as u32) * x.powu((k - l) as u32))
                .sum();
            assert!((direct - via).norm() < 1e-9);
        }
    }

    #[test]
    fn transfer_at_empty_face() {
        let s = p(3, 4);
        let f = ones(s);
        let d = local_distribution(&f, &IndexSet::empty(4), &s.zero()).unwrap();
        let t = transfer_orthogonal(&d, 0).unwrap();
        assert_eq!(t.face(), &IndexSet::full(4));
        for (j, v) in t.components().iter().enumerate() {
            let count = binomial(4, j as i64).to_f64().unwrap() * 2f64.powi(j as i32);
            assert!((v - count).norm() < 1e-12);
        }
    }

    #[test]
    fn transfer_first_component_is_the_anchor_value() {
        let s = p(3, 4);
        let f = random_eigenfunction(&s, 3, 1).unwrap();
        let anchor = s.parse_word("2101").unwrap();
        for k in 0..=3 {
            for face in IndexSet::subsets(4, k) {
                let d = local_distribution(&f, &face, &anchor).unwrap();
                let t = transfer_orthogonal(&d, 3).unwrap();
                assert!((t.components()[0] - f.get(&anchor)).norm() < 1e-12);
            }
        }
        let d = local_distribution(&f, &IndexSet::full(4), &anchor).unwrap();
        assert!(matches!(
            transfer_orthogonal(&d, 3),
            Err(Error::UnsupportedRegime { .. })
        ));
    }

    #[test]
    fn face_relation_holds_for_constants() {
        let s = p(3, 4);
        let f = ones(s);
        for k in 0..=4 {
            for face in IndexSet::subsets(4, k) {
                let r = verify_face_relation(&f, &face, &s.parse_word("0120").unwrap(), 0).unwrap();
                assert!(r < 1e-9, "residual {r}");
            }
        }
    }

    #[test]
    fn split_partitions_the_face() {
        let s = p(4, 3);
        let f = random_eigenfunction(&s, 2, 17).unwrap();
        for a in 1..s.size() {
            let alpha = s.word(a);
            let split = sigma_delta_split(&f, &alpha).unwrap();
            assert_eq!(split.sigma[0], f.values()[a]);
            assert_eq!(split.delta[0], Complex64::zero());
            let d = local_distribution(&f, &alpha.support(), &alpha).unwrap();
            for i in 0..split.sigma.len() {
                assert!((split.sigma[i] + split.delta[i] - d.components()[i]).norm() < 1e-12);
            }
        }
        assert!(matches!(sigma_delta_split(&f, &s.zero()), Err(Error::ZeroAnchor)));
    }
}
