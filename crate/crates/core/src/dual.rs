//! Dual simplices in `R^{p,q}` and the volume transfer formulas.
//!
//! For a centered simplex `P` with vertex vectors `v_1..v_{n+1}` the dual
//! `Q = {y : x . y <= c for x in P}` has vertices `Q_j` with `v_i . Q_j = c`
//! for all `i != j`. Its facet `F_i` has normal `v_i`, and the codimension-2
//! face `F_ij = F_i & F_j` has volume `c2 V_2(O P_i P_j) c^{n-2} / V_n(P)`;
//! the whole dual has volume `c0 c^n / V_n(P)`. Everything here is `f64`;
//! the exact inputs come from [`crate::families`].

use nalgebra::{DMatrix, DVector};
use num_traits::{Signed, Zero};
use serde::Serialize;

use crate::exactmat::{self, combinations, to_f64, Rational, Signature, SymMatrix};
use crate::families::{self, DeformationFamily, FamilyError, FamilyKind};
use crate::realize::{self, format_f64, metric_dot, RealizeError, RealizedSimplex};
use crate::simplex::PseudoSimplex;

/// Relative tolerance for the transfer formulas and calibration.
pub const TRANSFER_TOLERANCE: f64 = 1e-8;
/// Relative spread above which a quantity counts as varying.
pub const VARIATION_THRESHOLD: f64 = 1e-4;

#[derive(Clone, Debug, PartialEq, thiserror::Error)]
pub enum DualError {
    #[error("vertex vectors do not sum to zero (relative offset {0:e})")]
    NotCentered(f64),
    #[error("normal system for vertex {0} is singular")]
    DegenerateNormals(usize),
    #[error("v_{0}^2 = 0: the normal is parallel to its facet")]
    ParallelNormal(usize),
    #[error("scale c must be positive and finite, got {0}")]
    InvalidScale(f64),
    #[error("dimension n = {0} is too small; need n >= 3")]
    DimensionTooSmall(usize),
    #[error("calibration constants disagree: {0}")]
    CalibrationInconsistent(String),
    #[error("V_n(P) is zero")]
    ZeroVolumeP,
    #[error("transfer value {transfer:e} disagrees with direct value {direct:e} for {what}")]
    TransferMismatch {
        what: String,
        transfer: f64,
        direct: f64,
    },
    #[error("U(t) is not in U0 at t = {0}")]
    NotInU0(String),
    #[error("family kind {0} has no dual construction")]
    UnsupportedKind(FamilyKind),
    #[error(transparent)]
    Realize(#[from] RealizeError),
    #[error(transparent)]
    Family(#[from] FamilyError),
}

/// Orientation of `v_i` relative to the dual facet `F_i`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum NormalOrientation {
    Outward,
    Inward,
}

#[derive(Clone, Debug, PartialEq)]
pub struct DualSimplex {
    pub signature: Signature,
    pub vertices: Vec<Vec<f64>>,
    pub c: f64,
    pub normals: Vec<NormalOrientation>,
}

impl DualSimplex {
    pub fn dimension(&self) -> usize {
        self.vertices.len() - 1
    }

    pub fn dot(&self, x: &[f64], y: &[f64]) -> f64 {
        metric_dot(x, y, self.signature.positive)
    }

    /// Volume of the face spanned by the vertices in `subset`.
    pub fn face_volume(&self, subset: &[usize]) -> f64 {
        let pts: Vec<&[f64]> = subset
            .iter()
            .map(|&k| self.vertices[k].as_slice())
            .collect();
        simplex_volume(&pts, self.signature.positive)
    }

    pub fn volume(&self) -> f64 {
        let all: Vec<usize> = (0..self.vertices.len()).collect();
        self.face_volume(&all)
    }

    /// The codimension-2 face `F_ij`: all vertices except `i` and `j`.
    pub fn codim2_face(i: usize, j: usize, count: usize) -> Vec<usize> {
        (0..count).filter(|&k| k != i && k != j).collect()
    }

    pub fn squared_edges(&self) -> Vec<f64> {
        let n = self.vertices.len();
        let mut out = Vec::with_capacity(n * (n - 1) / 2);
        for i in 0..n {
            for j in i + 1..n {
                let d: Vec<f64> = self.vertices[i]
                    .iter()
                    .zip(&self.vertices[j])
                    .map(|(a, b)| a - b)
                    .collect();
                out.push(self.dot(&d, &d));
            }
        }
        out
    }

    /// Dual of this simplex with scale `c`; with the same `c` this recovers
    /// the original vertices.
    pub fn dual(&self, c: f64) -> Result<Vec<Vec<f64>>, DualError> {
        dual_vertices(&self.vertices, self.signature.positive, c)
    }
}

/// `sqrt|det Gram| / k!` of the simplex with the given vertices.
pub fn simplex_volume(points: &[&[f64]], positive: usize) -> f64 {
    let k = points.len() - 1;
    if k == 0 {
        return 1.0;
    }
    let base = points[0];
    let edges: Vec<Vec<f64>> = points[1..]
        .iter()
        .map(|p| p.iter().zip(base).map(|(a, b)| a - b).collect())
        .collect();
    let gram = DMatrix::from_fn(k, k, |a, b| metric_dot(&edges[a], &edges[b], positive));
    let factorial: f64 = (1..=k).map(|x| x as f64).product();
    gram.determinant().abs().sqrt() / factorial
}

/// Solves `v_i . Q_j = c` for `i != j`, for every `j`.
pub fn dual_vertices(
    vectors: &[Vec<f64>],
    positive: usize,
    c: f64,
) -> Result<Vec<Vec<f64>>, DualError> {
    if !(c > 0.0 && c.is_finite()) {
        return Err(DualError::InvalidScale(c));
    }
    let count = vectors.len();
    let n = count - 1;
    let sign = |k: usize| if k < positive { 1.0 } else { -1.0 };
    let mut out = Vec::with_capacity(count);
    for j in 0..count {
        let rows: Vec<usize> = (0..count).filter(|&i| i != j).collect();
        let m = DMatrix::from_fn(n, n, |r, k| vectors[rows[r]][k] * sign(k));
        let rhs = DVector::from_element(n, c);
        let sol = m.lu().solve(&rhs).ok_or(DualError::DegenerateNormals(j))?;
        if sol.iter().any(|x| !x.is_finite()) {
            return Err(DualError::DegenerateNormals(j));
        }
        out.push(sol.iter().copied().collect());
    }
    Ok(out)
}

/// Dual simplex of a centered realization.
pub fn dual_simplex(p: &RealizedSimplex, c: f64) -> Result<DualSimplex, DualError> {
    let offset = p.centroid_offset();
    if offset > 1e-9 {
        return Err(DualError::NotCentered(offset));
    }
    let mut normals = Vec::with_capacity(p.vectors.len());
    for i in 0..p.vectors.len() {
        let sq = p.gram_exact.get(i, i);
        normals.push(if sq.is_positive() {
            NormalOrientation::Outward
        } else if sq.is_negative() {
            NormalOrientation::Inward
        } else {
            return Err(DualError::ParallelNormal(i));
        });
    }
    let vertices = dual_vertices(&p.vectors, p.signature.positive, c)?;
    Ok(DualSimplex {
        signature: p.signature,
        vertices,
        c,
        normals,
    })
}

/// `V_n(P)` of the centered simplex with vertex Gram matrix `u`, computed
/// exactly from its squared edges `U_ii + U_jj - 2 U_ij`.
pub fn centered_volume_sq(u: &SymMatrix) -> Rational {
    let n = u.order() - 1;
    let two = exactmat::int(2);
    let p = PseudoSimplex::from_fn(n, |i, j| u.get(i, i) + u.get(j, j) - &two * u.get(i, j));
    p.signed_sq_volume().value
}

pub fn centered_volume(u: &SymMatrix) -> f64 {
    to_f64(&centered_volume_sq(u)).abs().sqrt()
}

/// `V_2(O P_i P_j) = sqrt|U_ii U_jj - U_ij^2| / 2`.
pub fn triangle_area(u: &SymMatrix, i: usize, j: usize) -> f64 {
    let minor = u.get(i, i) * u.get(j, j) - u.get(i, j) * u.get(i, j);
    to_f64(&minor).abs().sqrt() / 2.0
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct TransferConstants {
    pub c0: f64,
    pub c2: f64,
}

/// `(n+1)^{n+1} / (n!)^2`, the value `c0` must take.
pub fn c0_closed_form(n: usize) -> f64 {
    let factorial: f64 = (1..=n).map(|x| x as f64).product();
    ((n + 1) as f64).powi(n as i32 + 1) / (factorial * factorial)
}

fn relative_diff(a: f64, b: f64) -> f64 {
    (a - b).abs() / a.abs().max(b.abs()).max(f64::MIN_POSITIVE)
}

/// Values of `c0` and of `c2` for every pair `(i, j)` on one simplex.
fn constants_on(u: &SymMatrix, c: f64) -> Result<(f64, Vec<f64>), DualError> {
    let p = realize::realize_centered(u)?;
    let q = dual_simplex(&p, c)?;
    let n = u.order() - 1;
    let vp = centered_volume(u);
    if vp == 0.0 {
        return Err(DualError::ZeroVolumeP);
    }
    let c0 = q.volume() * vp / c.powi(n as i32);
    let mut c2 = Vec::new();
    for pair in combinations(n + 1, 2) {
        let (i, j) = (pair[0], pair[1]);
        let face = q.face_volume(&DualSimplex::codim2_face(i, j, n + 1));
        c2.push(face * vp / (triangle_area(u, i, j) * c.powi(n as i32 - 2)));
    }
    Ok((c0, c2))
}

/// Centered Gram matrix of integer points.
fn centered_gram(points: &[Vec<i64>]) -> SymMatrix {
    let count = points.len() as i64;
    let dim = points[0].len();
    let centered: Vec<Vec<Rational>> = points
        .iter()
        .map(|p| {
            (0..dim)
                .map(|k| {
                    let mean: i64 = points.iter().map(|q| q[k]).sum();
                    exactmat::int(p[k]) - exactmat::ratio(mean, count)
                })
                .collect()
        })
        .collect();
    SymMatrix::from_fn(points.len(), |i, j| {
        centered[i]
            .iter()
            .zip(&centered[j])
            .fold(Rational::zero(), |acc, (a, b)| acc + a * b)
    })
}

/// The regular centered simplex `(n+1) I - J`.
pub fn regular_centered(n: usize) -> SymMatrix {
    SymMatrix::from_fn(n + 1, |i, j| {
        if i == j {
            exactmat::int(n as i64)
        } else {
            exactmat::int(-1)
        }
    })
}

/// A fixed irregular Euclidean centered simplex: integer points drawn from
/// a seeded stream, redrawn until they span `R^n`.
pub fn irregular_centered(n: usize, seed: u64) -> SymMatrix {
    use rand::{Rng, SeedableRng};
    let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(seed);
    loop {
        let points: Vec<Vec<i64>> = (0..=n)
            .map(|_| (0..n).map(|_| rng.gen_range(-5..=5)).collect())
            .collect();
        let u = centered_gram(&points);
        if exactmat::rank(&u) == n {
            return u;
        }
    }
}

/// Calibrates `(c0, c2)` on two Euclidean centered simplices with `c = 1`
/// and checks that every value agrees to [`TRANSFER_TOLERANCE`].
pub fn calibrate_constants(n: usize) -> Result<TransferConstants, DualError> {
    if n < 3 {
        return Err(DualError::DimensionTooSmall(n));
    }
    let (c0, c2s) = constants_on(&regular_centered(n), 1.0)?;
    let (c0b, c2b) = constants_on(&irregular_centered(n, 7), 1.0)?;
    let c2 = c2s[0];
    if relative_diff(c0, c0b) > TRANSFER_TOLERANCE {
        return Err(DualError::CalibrationInconsistent(format!(
            "c0 = {c0:e} vs {c0b:e}"
        )));
    }
    for (k, v) in c2s.iter().chain(&c2b).enumerate() {
        if relative_diff(c2, *v) > TRANSFER_TOLERANCE || !(*v > 0.0) {
            return Err(DualError::CalibrationInconsistent(format!(
                "c2 = {c2:e} vs {v:e} (value {k})"
            )));
        }
    }
    if !(c0 > 0.0) {
        return Err(DualError::CalibrationInconsistent(format!("c0 = {c0:e}")));
    }
    Ok(TransferConstants { c0, c2 })
}

/// A centered simplex, its dual, and the transfer constants.
#[derive(Clone, Debug, PartialEq)]
pub struct DualPair {
    pub p: RealizedSimplex,
    pub q: DualSimplex,
    pub c: f64,
    pub constants: TransferConstants,
}

impl DualPair {
    pub fn new(u: &SymMatrix, c: f64, constants: TransferConstants) -> Result<Self, DualError> {
        let p = realize::realize_centered(u)?;
        let q = dual_simplex(&p, c)?;
        Ok(DualPair { p, q, c, constants })
    }

    pub fn dimension(&self) -> usize {
        self.p.vectors.len() - 1
    }

    fn volume_p(&self) -> Result<f64, DualError> {
        let v = centered_volume(&self.p.gram_exact);
        if v == 0.0 {
            return Err(DualError::ZeroVolumeP);
        }
        Ok(v)
    }
}

/// `V_{n-2}(F_ij)` by the transfer formula, checked against the direct face
/// volume of `Q`.
pub fn codim2_volume_via_transfer(pair: &DualPair, i: usize, j: usize) -> Result<f64, DualError> {
    let n = pair.dimension();
    let vp = pair.volume_p()?;
    let transfer =
        pair.constants.c2 * triangle_area(&pair.p.gram_exact, i, j) * pair.c.powi(n as i32 - 2)
            / vp;
    let direct = pair.q.face_volume(&DualSimplex::codim2_face(i, j, n + 1));
    if relative_diff(transfer, direct) > TRANSFER_TOLERANCE {
        return Err(DualError::TransferMismatch {
            what: format!("F_({},{})", i + 1, j + 1),
            transfer,
            direct,
        });
    }
    Ok(transfer)
}

/// `V_n(Q)` by the transfer formula, checked against the direct volume.
pub fn dual_volume(pair: &DualPair) -> Result<f64, DualError> {
    let n = pair.dimension();
    let transfer = pair.constants.c0 * pair.c.powi(n as i32) / pair.volume_p()?;
    let direct = pair.q.volume();
    if relative_diff(transfer, direct) > TRANSFER_TOLERANCE {
        return Err(DualError::TransferMismatch {
            what: "V_n(Q)".into(),
            transfer,
            direct,
        });
    }
    Ok(transfer)
}

fn matrix_kind(family: &DeformationFamily) -> Result<(), DualError> {
    if family.is_matrix_kind() {
        Ok(())
    } else {
        Err(DualError::UnsupportedKind(family.kind))
    }
}

fn u0_at(family: &DeformationFamily, t: &Rational) -> Result<SymMatrix, DualError> {
    let u = family.at(t)?;
    if !families::membership_u0(&u) {
        return Err(DualError::NotInU0(t.to_string()));
    }
    Ok(u)
}

/// `c(t) = (V_n(P(t)) / V_n(P(1)))^{1/(n-2)}`, so that `c(1) = 1` and every
/// `V_{n-2}(F_ij)` stays fixed along the family.
pub fn rescale_c(family: &DeformationFamily, t: &Rational) -> Result<f64, DualError> {
    matrix_kind(family)?;
    let n = family.dimension();
    let at_t = centered_volume_sq(&u0_at(family, t)?);
    let at_one = centered_volume_sq(&u0_at(family, &exactmat::int(1))?);
    if at_t.is_zero() || at_one.is_zero() {
        return Err(DualError::ZeroVolumeP);
    }
    // Squared-volume ratio is exact; one root is taken in floating point.
    let ratio = to_f64(&(at_t / at_one).abs());
    Ok(ratio.powf(1.0 / (2.0 * (n as f64 - 2.0))))
}

/// Grid near `t = 1` used for dual checks: `{4/5, 9/10, 1, 11/10, 5/4}`.
pub fn dual_grid() -> Vec<Rational> {
    [(4, 5), (9, 10), (1, 1), (11, 10), (5, 4)]
        .iter()
        .map(|&(p, q)| exactmat::ratio(p, q))
        .collect()
}

/// Relative spread `(max - min) / max |x|`.
pub fn relative_spread(values: &[f64]) -> f64 {
    let max = values.iter().copied().fold(f64::NEG_INFINITY, f64::max);
    let min = values.iter().copied().fold(f64::INFINITY, f64::min);
    let scale = values.iter().fold(0.0f64, |acc, v| acc.max(v.abs()));
    if scale == 0.0 {
        0.0
    } else {
        (max - min) / scale
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct DualVerdicts {
    pub transfer_consistent: bool,
    pub codim2_constant: bool,
    pub codim2_max_spread: f64,
    pub vn_q_constant: bool,
    pub vn_q_spread: f64,
    pub non_congruent: bool,
    pub max_edge_spread: f64,
    pub euclidean_angles: bool,
}

/// Dual verification along a matrix family.
#[derive(Clone, Debug, PartialEq)]
pub struct FamilyDualReport {
    pub n: usize,
    pub kind: FamilyKind,
    pub t_grid: Vec<Rational>,
    pub constants: TransferConstants,
    pub c_of_t: Vec<f64>,
    /// Per `t`, `V_{n-2}(F_ij)` for `i < j` in lexicographic order.
    pub codim2_volumes: Vec<Vec<((usize, usize), f64)>>,
    pub vn_q: Vec<f64>,
    pub signatures: Vec<Signature>,
    pub verdicts: DualVerdicts,
}

/// Builds `P(t)`, rescales `c(t)`, dualizes, and checks every transfer value
/// against the direct one.
pub fn family_dual_report(
    family: &DeformationFamily,
    grid: &[Rational],
) -> Result<FamilyDualReport, DualError> {
    matrix_kind(family)?;
    let n = family.dimension();
    let constants = calibrate_constants(n)?;
    let mut c_of_t = Vec::new();
    let mut codim2 = Vec::new();
    let mut vn_q = Vec::new();
    let mut edges = Vec::new();
    let mut signatures = Vec::new();
    let mut euclidean = true;
    for t in grid {
        let u = u0_at(family, t)?;
        euclidean &= exactmat::principal_minors_order2(&u)
            .iter()
            .all(|(_, v)| v.is_positive());
        let c = rescale_c(family, t)?;
        let pair = DualPair::new(&u, c, constants)?;
        let mut row = Vec::new();
        for pr in combinations(n + 1, 2) {
            let (i, j) = (pr[0], pr[1]);
            row.push(((i, j), codim2_volume_via_transfer(&pair, i, j)?));
        }
        c_of_t.push(c);
        codim2.push(row);
        vn_q.push(dual_volume(&pair)?);
        edges.push(pair.q.squared_edges());
        signatures.push(pair.p.signature);
    }
    let pairs = combinations(n + 1, 2).len();
    let codim2_max_spread = (0..pairs)
        .map(|k| relative_spread(&codim2.iter().map(|r| r[k].1).collect::<Vec<_>>()))
        .fold(0.0, f64::max);
    let max_edge_spread = (0..edges.first().map_or(0, |e| e.len()))
        .map(|k| relative_spread(&edges.iter().map(|e| e[k]).collect::<Vec<_>>()))
        .fold(0.0, f64::max);
    let vn_q_spread = relative_spread(&vn_q);
    Ok(FamilyDualReport {
        n,
        kind: family.kind,
        t_grid: grid.to_vec(),
        constants,
        c_of_t,
        codim2_volumes: codim2,
        vn_q,
        signatures,
        verdicts: DualVerdicts {
            transfer_consistent: true,
            codim2_constant: codim2_max_spread <= TRANSFER_TOLERANCE,
            codim2_max_spread,
            vn_q_constant: vn_q_spread <= TRANSFER_TOLERANCE,
            vn_q_spread,
            non_congruent: max_edge_spread > VARIATION_THRESHOLD,
            max_edge_spread,
            euclidean_angles: euclidean,
        },
    })
}

#[derive(Serialize)]
struct DualReportJson<'a> {
    n: usize,
    kind: FamilyKind,
    t_grid: Vec<String>,
    constants: [String; 2],
    c_of_t: Vec<String>,
    codim2_volumes: Vec<Vec<(usize, usize, String)>>,
    #[serde(rename = "Vn_Q")]
    vn_q: Vec<String>,
    signatures: &'a [Signature],
    verdicts: &'a DualVerdicts,
}

impl FamilyDualReport {
    /// JSON with 1-based face indices and floats as 17-digit strings.
    pub fn to_json(&self) -> String {
        let floats = |v: &[f64]| v.iter().map(|x| format_f64(*x)).collect::<Vec<_>>();
        let json = DualReportJson {
            n: self.n,
            kind: self.kind,
            t_grid: self.t_grid.iter().map(|t| t.to_string()).collect(),
            constants: [format_f64(self.constants.c0), format_f64(self.constants.c2)],
            c_of_t: floats(&self.c_of_t),
            codim2_volumes: self
                .codim2_volumes
                .iter()
                .map(|row| {
                    row.iter()
                        .map(|((i, j), v)| (i + 1, j + 1, format_f64(*v)))
                        .collect()
                })
                .collect(),
            vn_q: floats(&self.vn_q),
            signatures: &self.signatures,
            verdicts: &self.verdicts,
        };
        serde_json::to_string_pretty(&json).expect("serializable")
    }
}

/// `V_n(Q(t))` of a pseudo-simplex family, `sqrt|det C(t)| / n!`.
pub fn pseudo_family_volumes(
    family: &DeformationFamily,
    grid: &[Rational],
) -> Result<Vec<f64>, DualError> {
    let n = family.dimension();
    let factorial: f64 = (1..=n).map(|x| x as f64).product();
    grid.iter()
        .map(|t| {
            let det = exactmat::det(&family.at(t)?);
            Ok(to_f64(&det).abs().sqrt() / factorial)
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn regular_triangle() -> RealizedSimplex {
        realize::realize_centered(&regular_centered(2)).unwrap()
    }

    #[test]
    fn triangle_dual_is_polar() {
        let p = regular_triangle();
        let q = dual_simplex(&p, 1.0).unwrap();
        for j in 0..3 {
            for i in 0..3 {
                let d = q.dot(&p.vectors[i], &q.vertices[j]);
                let expected = if i == j { -2.0 } else { 1.0 };
                assert!((d - expected).abs() < 1e-12, "{i} {j} {d}");
            }
        }
        // |v_i|^2 = 2 and Q_j = -v_j: the polar triangle of this one.
        for j in 0..3 {
            for k in 0..2 {
                assert!((q.vertices[j][k] + p.vectors[j][k]).abs() < 1e-12);
            }
        }
        assert!(q.normals.iter().all(|n| *n == NormalOrientation::Outward));
    }

    #[test]
    fn bidual_recovers_p() {
        let u = irregular_centered(4, 3);
        let p = realize::realize_centered(&u).unwrap();
        let q = dual_simplex(&p, 2.5).unwrap();
        let back = q.dual(2.5).unwrap();
        for (a, b) in back.iter().zip(&p.vectors) {
            for (x, y) in a.iter().zip(b) {
                assert!((x - y).abs() < 1e-9);
            }
        }
    }

    #[test]
    fn closed_form_dual_vertices() {
        // Q_j = -c (n+1) G (V V^T)^{-1} v_j.
        let u = irregular_centered(3, 5);
        let p = realize::realize_centered(&u).unwrap();
        let c = 1.5;
        let q = dual_simplex(&p, c).unwrap();
        let n = 3;
        let vv = DMatrix::from_fn(n, n, |a, b| {
            p.vectors.iter().map(|v| v[a] * v[b]).sum::<f64>()
        });
        let inv = vv.try_inverse().unwrap();
        for (j, qj) in q.vertices.iter().enumerate() {
            let v = DVector::from_column_slice(&p.vectors[j]);
            let w = &inv * v * (-c * (n as f64 + 1.0));
            for k in 0..n {
                let g = if k < p.signature.positive { 1.0 } else { -1.0 };
                assert!((g * w[k] - qj[k]).abs() < 1e-9);
            }
        }
        let centroid: f64 = (0..n)
            .map(|k| q.vertices.iter().map(|v| v[k]).sum::<f64>().abs())
            .sum();
        assert!(centroid < 1e-9);
    }

    #[test]
    fn calibration_matches_c0_closed_form() {
        for n in 3..=6 {
            let k = calibrate_constants(n).unwrap();
            assert!(relative_diff(k.c0, c0_closed_form(n)) < 1e-9, "n = {n}");
            assert!(k.c2 > 0.0);
        }
        assert_eq!(calibrate_constants(2), Err(DualError::DimensionTooSmall(2)));
    }

    #[test]
    fn transfer_scales_with_c() {
        let n = 4;
        let k = calibrate_constants(n).unwrap();
        let u = regular_centered(n);
        let one = DualPair::new(&u, 1.0, k).unwrap();
        let two = DualPair::new(&u, 2.0, k).unwrap();
        let a = codim2_volume_via_transfer(&one, 0, 1).unwrap();
        let b = codim2_volume_via_transfer(&two, 0, 1).unwrap();
        assert!(relative_diff(b, a * 4.0) < 1e-12);
    }

    #[test]
    fn not_centered_rejected() {
        let mut p = regular_triangle();
        p.vectors[0][0] += 1.0;
        assert!(matches!(
            dual_simplex(&p, 1.0),
            Err(DualError::NotCentered(_))
        ));
        assert!(matches!(
            dual_simplex(&regular_triangle(), 0.0),
            Err(DualError::InvalidScale(_))
        ));
    }

    #[test]
    fn rescale_is_one_at_one() {
        let f = families::matrix_family(5, 1).unwrap();
        let c = rescale_c(&f, &exactmat::int(1)).unwrap();
        assert!((c - 1.0).abs() < 1e-15);
        let g = families::family_n4(
            &[exactmat::int(1), exactmat::int(1), exactmat::int(-2)],
            &[exactmat::int(2), exactmat::int(-3), exactmat::int(1)],
        )
        .unwrap();
        assert_eq!(
            rescale_c(&g, &exactmat::int(1)),
            Err(DualError::UnsupportedKind(FamilyKind::N4))
        );
    }
}
