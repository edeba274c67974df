use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};
use serde_json::{json, Value};

use super::{TensorError, ZAlgebraWindow};

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct HilbertFunction {
    pub index: i64,
    /// `h(k)` = total dimension of `A_{p, p−k}`
    pub values: Vec<usize>,
    pub euler: Vec<i64>,
    /// least-degree exact interpolating polynomial, coefficients of `k^0, k^1, …`
    pub fit: Option<Vec<BigRational>>,
}

impl HilbertFunction {
    pub fn degree(&self) -> Option<usize> {
        self.fit.as_ref().map(|c| c.len().saturating_sub(1))
    }

    pub fn to_json(&self) -> Value {
        let fit = match &self.fit {
            Some(c) => json!({
                "degree": self.degree(),
                "coefficients": c.iter().map(|x| x.to_string()).collect::<Vec<_>>(),
            }),
            None => json!("no polynomial fit"),
        };
        json!({"index": self.index, "values": self.values, "euler": self.euler, "fit": fit})
    }
}

/// Least `n` whose `(n+1)`-th differences exist and all vanish; the polynomial through the
/// first `n+1` points.
fn fit(values: &[usize]) -> Option<Vec<BigRational>> {
    let ys: Vec<BigRational> = values.iter().map(|&v| BigRational::from_integer(BigInt::from(v))).collect();
    let mut diffs = ys.clone();
    for n in 0..ys.len().saturating_sub(1) {
        diffs = diffs.windows(2).map(|w| &w[1] - &w[0]).collect();
        if diffs.iter().all(Zero::is_zero) {
            return Some(interpolate(&ys[..=n]));
        }
    }
    None
}

/// Coefficients of the polynomial through `(k, ys[k])`, `k = 0..ys.len()`.
fn interpolate(ys: &[BigRational]) -> Vec<BigRational> {
    let n = ys.len();
    let mut out = vec![BigRational::zero(); n];
    for (i, y) in ys.iter().enumerate() {
        let mut basis = vec![BigRational::one()];
        let mut denom = BigRational::one();
        for j in (0..n).filter(|&j| j != i) {
            let xj = BigRational::from_integer(BigInt::from(j));
            let mut next = vec![BigRational::zero(); basis.len() + 1];
            for (t, c) in basis.iter().enumerate() {
                next[t + 1] += c;
                next[t] -= c * &xj;
            }
            basis = next;
            denom *= BigRational::from_integer(BigInt::from(i as i64 - j as i64));
        }
        for (t, c) in basis.iter().enumerate() {
            out[t] += c * y / &denom;
        }
    }
    while out.len() > 1 && out.last().is_some_and(Zero::is_zero) {
        out.pop();
    }
    out
}

/// `h(k) = dim A_{p, p−k}` for `0 ≤ k ≤ points − 1`.
pub fn hilbert_function(z: &ZAlgebraWindow, p: i64, points: usize) -> Result<HilbertFunction, TensorError> {
    let last = p - points as i64 + 1;
    for index in [p, last] {
        if !z.contains(index) {
            return Err(TensorError::OutOfRange { index, lo: z.lo(), hi: z.hi() });
        }
    }
    let tables: Vec<_> = (0..points as i64).map(|k| z.dims(p, p - k).cloned().unwrap_or_default()).collect();
    let values: Vec<usize> = tables.iter().map(|t| t.total()).collect();
    let euler = tables.iter().map(|t| t.euler()).collect();
    let fit = fit(&values);
    Ok(HilbertFunction { index: p, values, euler, fit })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn binomial_fit() {
        let f = fit(&[1, 3, 6, 10, 15]).unwrap();
        let half = BigRational::new(1.into(), 2.into());
        assert_eq!(f, vec![BigRational::one(), &half * BigRational::from_integer(3.into()), half]);
        assert_eq!(fit(&[1, 1, 1]).unwrap().len(), 1);
        assert_eq!(fit(&[1, 3, 6]), None);
        assert_eq!(fit(&[1]), None);
    }
}
