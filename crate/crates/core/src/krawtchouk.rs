//! Exact Krawtchouk values `P^{(q)}_i(t; N)` and the eigenvalues of the
//! q-ary hypercube.

use num_bigint::BigInt;
use num_traits::{One, Zero};

use crate::error::{Error, Result};

/// `C(m, j)`, zero whenever `j < 0`, `m < 0` or `j > m`.
pub fn binomial(m: i64, j: i64) -> BigInt {
    if j < 0 || m < 0 || j > m {
        return BigInt::zero();
    }
    let j = j.min(m - j);
    let mut acc = BigInt::one();
    for step in 0..j {
        acc *= m - step;
        acc /= step + 1;
    }
    acc
}

fn pow(base: i64, exp: usize) -> BigInt {
    num_traits::pow(BigInt::from(base), exp)
}

fn in_range(name: &'static str, value: usize, min: usize, max: usize) -> Result<()> {
    if value < min || value > max {
        return Err(Error::OutOfRange {
            name,
            value: value as i64,
            min: min as i64,
            max: max as i64,
        });
    }
    Ok(())
}

/// `P^{(q)}_i(t; N) = sum_j (-1)^j (q-1)^(i-j) C(t, j) C(N-t, i-j)`.
pub fn krawtchouk_value(q: usize, i: usize, t: usize, big_n: usize) -> Result<BigInt> {
    in_range("q", q, 2, usize::MAX)?;
    in_range("i", i, 0, big_n)?;
    in_range("t", t, 0, big_n)?;
    let (t, nt) = (t as i64, (big_n - t) as i64);
    let mut acc = BigInt::zero();
    for j in 0..=i {
        let term = pow(q as i64 - 1, i - j) * binomial(t, j as i64) * binomial(nt, (i - j) as i64);
        if j % 2 == 0 {
            acc += term;
        } else {
            acc -= term;
        }
    }
    Ok(acc)
}

/// Coefficients of `y^i x^(N-i)` in `(x - y)^t (x + (q-1) y)^(N-t)`, obtained
/// by repeated polynomial multiplication.
pub fn generating_coefficients(q: usize, t: usize, big_n: usize) -> Result<Vec<BigInt>> {
    in_range("q", q, 2, usize::MAX)?;
    in_range("t", t, 0, big_n)?;
    let mut poly = vec![BigInt::one()];
    let factors = std::iter::repeat_n(-1i64, t)
        .chain(std::iter::repeat_n(q as i64 - 1, big_n - t));
    for c in factors {
        // multiply by (1 + c y)
        let mut next = vec![BigInt::zero(); poly.len() + 1];
        for (deg, a) in poly.iter().enumerate() {
            next[deg] += a;
            next[deg + 1] += a * c;
        }
        poly = next;
    }
    Ok(poly)
}

/// All values `P^{(q)}_i(t; N)` for `0 <= i, t <= N`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct KrawtchoukTable {
    q: usize,
    big_n: usize,
    values: Vec<Vec<BigInt>>,
}

impl KrawtchoukTable {
    pub fn new(q: usize, big_n: usize) -> Result<Self> {
        let values = (0..=big_n)
            .map(|i| {
                (0..=big_n)
                    .map(|t| krawtchouk_value(q, i, t, big_n))
                    .collect::<Result<Vec<_>>>()
            })
            .collect::<Result<Vec<_>>>()?;
        Ok(Self { q, big_n, values })
    }

    pub fn q(&self) -> usize {
        self.q
    }

    /// The length `N` the table was built for.
    pub fn length(&self) -> usize {
        self.big_n
    }

    /// `P_i(t; N)`.
    pub fn get(&self, i: usize, t: usize) -> &BigInt {
        &self.values[i][t]
    }

    /// CSV with one row per degree `i` and one column per argument `t`.
    pub fn to_csv(&self) -> String {
        let mut out = String::from("i");
        for t in 0..=self.big_n {
            out.push_str(&format!(",t{t}"));
        }
        out.push('\n');
        for (i, row) in self.values.iter().enumerate() {
            out.push_str(&i.to_string());
            for v in row {
                out.push(',');
                out.push_str(&v.to_string());
            }
            out.push('\n');
        }
        out
    }
}

/// An eigenvalue of the hypercube together with its index `h`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct SpectralIndex {
    pub h: usize,
    pub lambda: i64,
}

/// `lambda_h = (q-1) n - q h`.
pub fn eigenvalue_of_index(q: usize, n: usize, h: usize) -> Result<SpectralIndex> {
    in_range("h", h, 0, n)?;
    Ok(SpectralIndex {
        h,
        lambda: (q as i64 - 1) * n as i64 - (q * h) as i64,
    })
}

/// `h = ((q-1) n - lambda) / q`, when that is an integer in `[0, n]`.
pub fn index_of_eigenvalue(q: usize, n: usize, lambda: i64) -> Result<SpectralIndex> {
    let top = (q as i64 - 1) * n as i64;
    let diff = top - lambda;
    if diff < 0 || diff % q as i64 != 0 || diff / q as i64 > n as i64 {
        return Err(Error::NotAnEigenvalue { q, n, lambda });
    }
    Ok(SpectralIndex {
        h: (diff / q as i64) as usize,
        lambda,
    })
}

#[cfg(test)]
mod tests {
    use proptest::prelude::*;

    use super::*;

    #[test]
    fn small_values() {
        assert_eq!(krawtchouk_value(3, 1, 1, 4).unwrap(), BigInt::from(5));
        for t in 0..=5 {
            assert_eq!(krawtchouk_value(4, 0, t, 5).unwrap(), BigInt::one());
        }
        for i in 0..=5 {
            assert_eq!(
                krawtchouk_value(4, i, 0, 5).unwrap(),
                pow(3, i) * binomial(5, i as i64)
            );
        }
        assert!(krawtchouk_value(3, 5, 0, 4).is_err());
        assert!(krawtchouk_value(3, 0, 5, 4).is_err());
    }

    #[test]
    fn generating_function_examples() {
        let c = generating_coefficients(3, 0, 2).unwrap();
        assert_eq!(c, vec![BigInt::from(1), BigInt::from(4), BigInt::from(4)]);
        assert_eq!(generating_coefficients(3, 1, 4).unwrap()[1], BigInt::from(5));
    }

    #[test]
    fn binomial_conventions() {
        assert_eq!(binomial(5, 2), BigInt::from(10));
        assert_eq!(binomial(2, 5), BigInt::zero());
        assert_eq!(binomial(3, -1), BigInt::zero());
        assert_eq!(binomial(-1, 0), BigInt::zero());
        assert_eq!(binomial(0, 0), BigInt::one());
    }

    #[test]
    fn eigenvalues() {
        assert_eq!(eigenvalue_of_index(3, 4, 0).unwrap().lambda, 8);
        assert_eq!(eigenvalue_of_index(3, 4, 1).unwrap().lambda, 5);
        assert!(matches!(
            index_of_eigenvalue(3, 4, 7),
            Err(Error::NotAnEigenvalue { .. })
        ));
        assert!(index_of_eigenvalue(3, 4, 11).is_err());
        assert!(index_of_eigenvalue(3, 4, -7).is_err());
        assert!(eigenvalue_of_index(3, 4, 5).is_err());
    }

    #[test]
    fn degree_one_is_the_adjacency_eigenvalue() {
        for q in 2..=6 {
            for n in 1..=8 {
                for h in 0..=n {
                    let lambda = eigenvalue_of_index(q, n, h).unwrap().lambda;
                    assert_eq!(krawtchouk_value(q, 1, h, n).unwrap(), BigInt::from(lambda));
                }
            }
        }
    }

    #[test]
    fn table_csv() {
        let t = KrawtchoukTable::new(3, 2).unwrap();
        assert_eq!(t.to_csv(), "i,t0,t1,t2\n0,1,1,1\n1,4,1,-2\n2,4,-2,1\n");
    }

    proptest! {
        #[test]
        fn index_round_trip(q in 3usize..8, n in 1usize..12, h_frac in 0.0f64..1.0) {
            let h = ((n as f64) * h_frac).round() as usize;
            let s = eigenvalue_of_index(q, n, h).unwrap();
            prop_assert_eq!(index_of_eigenvalue(q, n, s.lambda).unwrap(), s);
        }
    }
}
