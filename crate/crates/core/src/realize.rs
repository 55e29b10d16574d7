//! Realization of symmetric Gram matrices as vectors in `R^{p,q}`.
//!
//! A symmetric `C = R diag(lambda) R^T` is realized by the columns of
//! `diag(sqrt|lambda|) R^T` under the metric `diag(+1, ..., +1, -1, ..., -1)`,
//! positive axes first. The floating eigendecomposition is a cyclic Jacobi
//! sweep; the inertia it produces is always checked against the exact
//! inertia from [`crate::exactmat::signature`].

use serde::Serialize;

use crate::exactmat::{self, to_f64, Rational, Signature, SymMatrix};

/// Entrywise round-trip tolerance after normalizing to unit max entry.
pub const ROUND_TRIP_TOLERANCE: f64 = 1e-10;
/// Relative threshold below which an eigenvalue is treated as zero.
pub const ZERO_EIGEN_THRESHOLD: f64 = 1e-9;

#[derive(Clone, Debug, PartialEq, Eq, thiserror::Error)]
pub enum RealizeError {
    #[error("matrix is singular; use realize_rank_deficient")]
    SingularMatrix,
    #[error("expected rank {expected}, found {found}")]
    RankMismatch { expected: usize, found: usize },
    #[error("the all-ones vector is not in the kernel")]
    OnesNotInKernel,
    #[error("vector dimensions {left} and {right} do not match metric dimension {metric}")]
    DimensionMismatch {
        left: usize,
        right: usize,
        metric: usize,
    },
    #[error("numeric inertia {numeric} disagrees with exact inertia {exact}")]
    InertiaMismatch {
        exact: Signature,
        numeric: Signature,
    },
    #[error("centered realization needs order at least 2")]
    TooSmall,
}

/// `x_1 y_1 + ... + x_p y_p - x_{p+1} y_{p+1} - ... - x_{p+q} y_{p+q}`.
pub fn pseudo_dot(x: &[f64], y: &[f64], sig: &Signature) -> Result<f64, RealizeError> {
    let metric = sig.positive + sig.negative;
    if x.len() != metric || y.len() != metric {
        return Err(RealizeError::DimensionMismatch {
            left: x.len(),
            right: y.len(),
            metric,
        });
    }
    Ok(metric_dot(x, y, sig.positive))
}

/// Indefinite product with the first `positive` axes positive.
pub(crate) fn metric_dot(x: &[f64], y: &[f64], positive: usize) -> f64 {
    x.iter()
        .zip(y)
        .enumerate()
        .map(|(k, (a, b))| if k < positive { a * b } else { -a * b })
        .sum()
}

/// Vectors in `R^{p,q}` whose pseudo Gram matrix reproduces `gram_exact`.
#[derive(Clone, Debug, PartialEq)]
pub struct RealizedSimplex {
    pub signature: Signature,
    pub vectors: Vec<Vec<f64>>,
    pub gram_exact: SymMatrix,
    /// Set for singular sources, where `p` is not determined by the matrix
    /// alone.
    pub signature_ambiguous: bool,
}

impl RealizedSimplex {
    pub fn metric_dimension(&self) -> usize {
        self.signature.positive + self.signature.negative
    }

    pub fn dot(&self, i: usize, j: usize) -> f64 {
        metric_dot(&self.vectors[i], &self.vectors[j], self.signature.positive)
    }

    /// Max entrywise `|v_i . v_j - C_ij|`, relative to `max |C_ij|`.
    pub fn max_gram_error(&self) -> f64 {
        let scale = to_f64(&self.gram_exact.max_abs_entry()).max(f64::MIN_POSITIVE);
        let n = self.vectors.len();
        let mut worst = 0.0f64;
        for i in 0..n {
            for j in i..n {
                let exact = to_f64(self.gram_exact.get(i, j));
                worst = worst.max((self.dot(i, j) - exact).abs() / scale);
            }
        }
        worst
    }

    /// Euclidean norm of `sum v_i`, relative to the largest vector norm.
    pub fn centroid_offset(&self) -> f64 {
        let dim = self.metric_dimension();
        let mut sum = vec![0.0; dim];
        let mut scale = 0.0f64;
        for v in &self.vectors {
            let norm: f64 = v.iter().map(|x| x * x).sum::<f64>().sqrt();
            scale = scale.max(norm);
            for (s, x) in sum.iter_mut().zip(v) {
                *s += x;
            }
        }
        sum.iter().map(|x| x * x).sum::<f64>().sqrt() / scale.max(f64::MIN_POSITIVE)
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(&RealizedJson::from(self)).expect("serializable")
    }
}

/// Export form: coordinates as decimal strings with 17 significant digits.
#[derive(Serialize)]
struct RealizedJson<'a> {
    signature: Signature,
    signature_ambiguous: bool,
    vertices: Vec<Vec<String>>,
    source_matrix: &'a SymMatrix,
}

impl<'a> From<&'a RealizedSimplex> for RealizedJson<'a> {
    fn from(r: &'a RealizedSimplex) -> Self {
        RealizedJson {
            signature: r.signature,
            signature_ambiguous: r.signature_ambiguous,
            vertices: r
                .vectors
                .iter()
                .map(|v| v.iter().map(|x| format_f64(*x)).collect())
                .collect(),
            source_matrix: &r.gram_exact,
        }
    }
}

/// 17 significant digits, enough to round-trip any f64.
pub fn format_f64(x: f64) -> String {
    format!("{x:.16e}")
}

/// Cyclic Jacobi eigendecomposition of a symmetric matrix. Returns the
/// eigenvalues and the eigenvectors as columns of the second result.
pub fn jacobi_eigen(a: &[Vec<f64>]) -> (Vec<f64>, Vec<Vec<f64>>) {
    let n = a.len();
    let mut a: Vec<Vec<f64>> = a.to_vec();
    let mut v: Vec<Vec<f64>> = (0..n)
        .map(|i| (0..n).map(|j| if i == j { 1.0 } else { 0.0 }).collect())
        .collect();
    let frob: f64 = a.iter().flatten().map(|x| x * x).sum::<f64>().sqrt();
    if frob == 0.0 {
        return (vec![0.0; n], v);
    }
    for _sweep in 0..100 {
        let off: f64 = (0..n)
            .flat_map(|i| (0..n).filter(move |&j| j != i).map(move |j| (i, j)))
            .map(|(i, j)| a[i][j] * a[i][j])
            .sum::<f64>()
            .sqrt();
        if off <= f64::EPSILON * 1e-3 * frob {
            break;
        }
        for p in 0..n {
            for q in (p + 1)..n {
                let apq = a[p][q];
                if apq.abs() <= f64::MIN_POSITIVE {
                    continue;
                }
                let theta = (a[q][q] - a[p][p]) / (2.0 * apq);
                let t = theta.signum() / (theta.abs() + (theta * theta + 1.0).sqrt());
                let t = if theta == 0.0 { 1.0 } else { t };
                let c = 1.0 / (t * t + 1.0).sqrt();
                let s = t * c;
                for k in 0..n {
                    let akp = a[k][p];
                    let akq = a[k][q];
                    a[k][p] = c * akp - s * akq;
                    a[k][q] = s * akp + c * akq;
                }
                for k in 0..n {
                    let apk = a[p][k];
                    let aqk = a[q][k];
                    a[p][k] = c * apk - s * aqk;
                    a[q][k] = s * apk + c * aqk;
                }
                for row in v.iter_mut() {
                    let vkp = row[p];
                    let vkq = row[q];
                    row[p] = c * vkp - s * vkq;
                    row[q] = s * vkp + c * vkq;
                }
            }
        }
    }
    ((0..n).map(|i| a[i][i]).collect(), v)
}

/// Builds the coordinates given which eigen-directions are dropped.
fn build(
    m: &SymMatrix,
    exact: Signature,
    allow_zero: bool,
) -> Result<RealizedSimplex, RealizeError> {
    let n = m.order();
    let scale_exact = m.max_abs_entry();
    let scale = to_f64(&scale_exact);
    let normalized: Vec<Vec<f64>> = if scale > 0.0 {
        let inv = Rational::from_integer(1.into()) / &scale_exact;
        m.scale(&inv).to_f64_rows()
    } else {
        m.to_f64_rows()
    };
    let (values, vectors) = jacobi_eigen(&normalized);

    // Zero directions: the `exact.zero` smallest |lambda|.
    let mut by_magnitude: Vec<usize> = (0..n).collect();
    by_magnitude.sort_by(|&a, &b| values[a].abs().total_cmp(&values[b].abs()));
    let zero_dirs: Vec<usize> = by_magnitude[..exact.zero].to_vec();
    let max_abs = values.iter().fold(0.0f64, |acc, v| acc.max(v.abs()));

    let mut positive: Vec<usize> = Vec::new();
    let mut negative: Vec<usize> = Vec::new();
    for k in 0..n {
        if zero_dirs.contains(&k) {
            continue;
        }
        if values[k] > 0.0 {
            positive.push(k);
        } else {
            negative.push(k);
        }
    }
    let numeric = Signature::new(positive.len(), negative.len(), zero_dirs.len());
    let misplaced_zero = !allow_zero
        && (0..n)
            .any(|k| !zero_dirs.contains(&k) && values[k].abs() <= ZERO_EIGEN_THRESHOLD * max_abs);
    if numeric != exact || misplaced_zero {
        return Err(RealizeError::InertiaMismatch { exact, numeric });
    }
    // Largest magnitudes first inside each block keeps the output stable.
    positive.sort_by(|&a, &b| values[b].abs().total_cmp(&values[a].abs()).then(a.cmp(&b)));
    negative.sort_by(|&a, &b| values[b].abs().total_cmp(&values[a].abs()).then(a.cmp(&b)));
    let axes: Vec<usize> = positive.iter().chain(&negative).copied().collect();

    let unscale = if scale > 0.0 { scale.sqrt() } else { 1.0 };
    let coords: Vec<Vec<f64>> = (0..n)
        .map(|i| {
            axes.iter()
                .map(|&k| values[k].abs().sqrt() * vectors[i][k] * unscale)
                .collect()
        })
        .collect();
    Ok(RealizedSimplex {
        signature: exact,
        vectors: coords,
        gram_exact: m.clone(),
        signature_ambiguous: exact.zero > 0,
    })
}

/// Realizes a nonsingular symmetric matrix as linearly independent vectors in
/// `R^{p,n-p}` with `p` the number of positive eigenvalues.
pub fn realize(c: &SymMatrix) -> Result<RealizedSimplex, RealizeError> {
    let exact = exactmat::signature(c);
    if exact.zero > 0 {
        return Err(RealizeError::SingularMatrix);
    }
    build(c, exact, false)
}

/// Realization of a possibly singular matrix: zero-eigenvalue directions are
/// dropped, so vectors live in `R^{p,q}` with `p + q = rank`.
pub fn realize_rank_deficient(c: &SymMatrix) -> Result<RealizedSimplex, RealizeError> {
    let exact = exactmat::signature(c);
    build(c, exact, true)
}

/// Realizes `U` (order `n+1`, rank `n`, `U 1 = 0`) as `n+1` vectors in
/// dimension `n` summing to zero: the leading `n x n` block is realized and
/// the last vector is minus the sum of the others.
pub fn realize_centered(u: &SymMatrix) -> Result<RealizedSimplex, RealizeError> {
    let order = u.order();
    if order < 2 {
        return Err(RealizeError::TooSmall);
    }
    if !u.annihilates_ones() {
        return Err(RealizeError::OnesNotInKernel);
    }
    let r = exactmat::rank(u);
    if r != order - 1 {
        return Err(RealizeError::RankMismatch {
            expected: order - 1,
            found: r,
        });
    }
    let leading: Vec<usize> = (0..order - 1).collect();
    let u0 = u.principal_submatrix(&leading).expect("indices in range");
    let base = realize(&u0)?;
    let dim = base.metric_dimension();
    let mut last = vec![0.0; dim];
    for v in &base.vectors {
        for (s, x) in last.iter_mut().zip(v) {
            *s -= x;
        }
    }
    let mut vectors = base.vectors;
    vectors.push(last);
    Ok(RealizedSimplex {
        signature: base.signature,
        vectors,
        gram_exact: u.clone(),
        signature_ambiguous: false,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exactmat::{int, ratio};

    #[test]
    fn pseudo_dot_examples() {
        let sig = Signature::new(1, 1, 0);
        assert_eq!(pseudo_dot(&[1.0, 0.0], &[1.0, 0.0], &sig).unwrap(), 1.0);
        assert_eq!(pseudo_dot(&[0.0, 1.0], &[0.0, 1.0], &sig).unwrap(), -1.0);
        assert_eq!(pseudo_dot(&[1.0, 1.0], &[1.0, -1.0], &sig).unwrap(), 2.0);
        assert_eq!(pseudo_dot(&[1.0, 1.0], &[1.0, 1.0], &sig).unwrap(), 0.0);
        assert!(matches!(
            pseudo_dot(&[1.0], &[1.0, 0.0], &sig),
            Err(RealizeError::DimensionMismatch { .. })
        ));
    }

    #[test]
    fn identity_is_orthonormal() {
        let r = realize(&SymMatrix::identity(3)).unwrap();
        assert_eq!(r.signature, Signature::new(3, 0, 0));
        assert!(r.max_gram_error() < 1e-14);
        for i in 0..3 {
            for j in 0..3 {
                let expected = if i == j { 1.0 } else { 0.0 };
                assert!((r.dot(i, j) - expected).abs() < 1e-14);
            }
        }
    }

    #[test]
    fn singular_matrix_rejected() {
        let m = SymMatrix::from_diagonal(&[int(1), int(0)]);
        assert_eq!(realize(&m), Err(RealizeError::SingularMatrix));
    }

    #[test]
    fn rank_deficient_cases() {
        let zero = realize_rank_deficient(&SymMatrix::zeros(2)).unwrap();
        assert_eq!(zero.signature, Signature::new(0, 0, 2));
        assert!(zero.vectors.iter().all(|v| v.is_empty()));
        let m = SymMatrix::from_diagonal(&[int(2), int(0), int(-1)]);
        let r = realize_rank_deficient(&m).unwrap();
        assert_eq!(r.signature, Signature::new(1, 1, 1));
        assert!(r.signature_ambiguous);
        assert!(r.max_gram_error() < 1e-14);
    }

    #[test]
    fn centered_regular_triangle() {
        // Unit-circumradius triangle: v_i . v_i = 1, v_i . v_j = -1/2.
        let u = SymMatrix::from_fn(3, |i, j| if i == j { int(1) } else { ratio(-1, 2) });
        let r = realize_centered(&u).unwrap();
        assert_eq!(r.signature, Signature::new(2, 0, 0));
        assert!(r.centroid_offset() < 1e-12);
        assert!(r.max_gram_error() < 1e-12);
        let bad = SymMatrix::identity(3);
        assert_eq!(realize_centered(&bad), Err(RealizeError::OnesNotInKernel));
        let rank_low = SymMatrix::zeros(3);
        assert!(matches!(
            realize_centered(&rank_low),
            Err(RealizeError::RankMismatch {
                expected: 2,
                found: 0
            })
        ));
    }

    #[test]
    fn json_has_decimal_strings() {
        let r = realize(&SymMatrix::from_diagonal(&[int(4), int(-9)])).unwrap();
        let v: serde_json::Value = serde_json::from_str(&r.to_json()).unwrap();
        assert_eq!(v["signature"]["positive"], 1);
        let x: f64 = v["vertices"][0][0].as_str().unwrap().parse().unwrap();
        assert!((x.abs() - 2.0).abs() < 1e-15);
        assert_eq!(v["source_matrix"][1][1], "-9");
    }
}
