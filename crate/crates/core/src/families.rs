//! Deformation families `C(t) = tA + (1/t)B`.
//!
//! Two constructions are built on pseudo-simplices (`N4`, `N5`): there `A`
//! and `B` are base-0 Gram matrices of pseudo-simplices whose 2-faces all
//! have zero area. The other two (`ODD_N`, `EVEN_N`) are `(n+1) x (n+1)`
//! matrices with the all-ones vector in the kernel, built as `D C D` from
//! sign matrices `C`. In every case each order-2 principal minor of `C(t)` is
//! independent of `t`.

use std::fmt;

use num_traits::{One, Signed, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::exactmat::{
    self, int, principal_minors, principal_minors_order2, ExactMatError, Rational, Signature,
    SymMatrix,
};
use crate::simplex::{PseudoSimplex, SimplexError};

#[derive(Clone, Debug, PartialEq, Eq, thiserror::Error)]
pub enum FamilyError {
    #[error("parameter {0} must be nonzero")]
    ZeroParameter(String),
    #[error("constraint violated: {0}")]
    ConstraintViolated(String),
    #[error("degenerate parameters: {0}")]
    DegenerateParameters(String),
    #[error("m = {0} is too small; the construction needs m >= 3")]
    MTooSmall(usize),
    #[error("genericity failure: {0}")]
    GenericityFailure(String),
    #[error("invalid kernel vector: {0}")]
    InvalidKernelVector(String),
    #[error("t must be positive, got {0}")]
    NonPositiveT(String),
    #[error("t = {t} is excluded for this family (t^2 = {t_sq})")]
    ExcludedT { t: String, t_sq: String },
    #[error("sweep grid is empty")]
    EmptyGrid,
    #[error(transparent)]
    Matrix(#[from] ExactMatError),
    #[error(transparent)]
    Simplex(#[from] SimplexError),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum FamilyKind {
    #[serde(rename = "N4")]
    N4,
    #[serde(rename = "N5")]
    N5,
    #[serde(rename = "ODD_N")]
    OddN,
    #[serde(rename = "EVEN_N")]
    EvenN,
}

impl fmt::Display for FamilyKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            FamilyKind::N4 => "N4",
            FamilyKind::N5 => "N5",
            FamilyKind::OddN => "ODD_N",
            FamilyKind::EvenN => "EVEN_N",
        })
    }
}

/// Generating parameters of a family.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "type", rename_all = "snake_case")]
pub enum FamilyParams {
    /// Edge parameters of the pseudo-simplex constructions.
    Edges {
        #[serde(with = "exactmat::rational_string_vec")]
        a: Vec<Rational>,
        #[serde(with = "exactmat::rational_string_vec")]
        b: Vec<Rational>,
    },
    /// Diagonal scalings of the two sign matrices.
    Kernel {
        m: usize,
        #[serde(with = "exactmat::rational_string_vec")]
        d: Vec<Rational>,
        #[serde(with = "exactmat::rational_string_vec")]
        d_prime: Vec<Rational>,
    },
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DeformationFamily {
    pub kind: FamilyKind,
    pub a: SymMatrix,
    pub b: SymMatrix,
    pub params: FamilyParams,
    /// `t*^2` at which `det C(t)` vanishes, when it is positive.
    pub excluded_t_sq: Option<Rational>,
    /// `(Q1, Q2)` for the pseudo-simplex kinds.
    pub simplices: Option<(PseudoSimplex, PseudoSimplex)>,
}

impl DeformationFamily {
    pub fn order(&self) -> usize {
        self.a.order()
    }

    /// Dimension `n` of the simplices in the family.
    pub fn dimension(&self) -> usize {
        match self.kind {
            FamilyKind::N4 | FamilyKind::N5 => self.order(),
            FamilyKind::OddN | FamilyKind::EvenN => self.order() - 1,
        }
    }

    pub fn is_matrix_kind(&self) -> bool {
        matches!(self.kind, FamilyKind::OddN | FamilyKind::EvenN)
    }

    /// Exact `tA + (1/t)B`.
    pub fn at(&self, t: &Rational) -> Result<SymMatrix, FamilyError> {
        check_positive(t)?;
        Ok(self.a.linear_combination(t, &self.b, &t.recip())?)
    }

    /// `t Q1 + (1/t) Q2` for the pseudo-simplex kinds.
    pub fn simplex_at(&self, t: &Rational) -> Result<Option<PseudoSimplex>, FamilyError> {
        check_positive(t)?;
        match &self.simplices {
            Some((q1, q2)) => Ok(Some(q1.linear_combination(t, q2, &t.recip())?)),
            None => Ok(None),
        }
    }

    pub fn is_excluded(&self, t: &Rational) -> bool {
        self.excluded_t_sq.as_ref().is_some_and(|s| &(t * t) == s)
    }

    /// The determinant tracked by sweeps: `det C(t)` for the pseudo-simplex
    /// kinds, and the leading `n x n` principal minor of `U(t)` for the matrix
    /// kinds (whose full determinant is always 0).
    pub fn tracked_det(&self, c: &SymMatrix) -> Rational {
        if self.is_matrix_kind() {
            let lead: Vec<usize> = (0..c.order() - 1).collect();
            exactmat::det(&c.principal_submatrix(&lead).expect("in range"))
        } else {
            exactmat::det(c)
        }
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(&FamilyJson {
            kind: self.kind,
            n: self.dimension(),
            order: self.order(),
            params: &self.params,
            excluded_t_sq: self.excluded_t_sq.as_ref().map(|r| r.to_string()),
            a: &self.a,
            b: &self.b,
        })
        .expect("serializable")
    }
}

#[derive(Serialize)]
struct FamilyJson<'a> {
    kind: FamilyKind,
    n: usize,
    order: usize,
    params: &'a FamilyParams,
    excluded_t_sq: Option<String>,
    #[serde(rename = "A")]
    a: &'a SymMatrix,
    #[serde(rename = "B")]
    b: &'a SymMatrix,
}

fn check_positive(t: &Rational) -> Result<(), FamilyError> {
    if !t.is_positive() {
        return Err(FamilyError::NonPositiveT(t.to_string()));
    }
    Ok(())
}

/// The pseudo 3-simplex with squared edges `a1^2, a2^2, a3^2` on opposite
/// edge pairs, `a3 = -a1 - a2`. Every 2-face has zero area.
pub fn q0(a1: &Rational, a2: &Rational) -> Result<PseudoSimplex, FamilyError> {
    let a3 = -(a1 + a2);
    for (name, v) in [("a1", a1), ("a2", a2), ("a3", &a3)] {
        if v.is_zero() {
            return Err(FamilyError::ZeroParameter(name.into()));
        }
    }
    let sq = [a1 * a1, a2 * a2, &a3 * &a3];
    Ok(PseudoSimplex::from_fn(3, |i, j| match (i, j) {
        (0, 1) | (2, 3) => sq[0].clone(),
        (0, 2) | (1, 3) => sq[1].clone(),
        _ => sq[2].clone(),
    }))
}

/// Row labels naming which parameter drives each row of `A` and `B`.
struct RowLabels {
    a: &'static [Option<&'static str>],
    b: &'static [Option<&'static str>],
}

fn check_triple(v: &[Rational], names: [&str; 3]) -> Result<(), FamilyError> {
    if v.len() != 3 {
        return Err(FamilyError::ConstraintViolated(format!(
            "expected three values for ({}), got {}",
            names.join(", "),
            v.len()
        )));
    }
    for (name, x) in names.iter().zip(v) {
        if x.is_zero() {
            return Err(FamilyError::DegenerateParameters(format!("{name} = 0")));
        }
    }
    let sum = v.iter().fold(Rational::zero(), |acc, x| acc + x);
    if !sum.is_zero() {
        return Err(FamilyError::ConstraintViolated(format!(
            "{} = {sum}, must be 0",
            names.join(" + ")
        )));
    }
    Ok(())
}

/// Builds a pseudo-simplex family and enforces 2-face positivity.
fn edge_family(
    kind: FamilyKind,
    a_params: &[Rational],
    b_params: &[Rational],
    a: SymMatrix,
    b: SymMatrix,
    labels: RowLabels,
    t_sq: Rational,
) -> Result<DeformationFamily, FamilyError> {
    let q1 = PseudoSimplex::from_gram(&a);
    let q2 = PseudoSimplex::from_gram(&b);
    let q = q1.add(&q2)?;
    for (face, simplex) in q.faces(2) {
        let area = simplex.signed_sq_volume().value;
        if area.is_positive() {
            continue;
        }
        return Err(FamilyError::DegenerateParameters(describe_face(
            &face, &a, &b, &labels,
        )));
    }
    let excluded_t_sq = t_sq.is_positive().then_some(t_sq);
    Ok(DeformationFamily {
        kind,
        a,
        b,
        params: FamilyParams::Edges {
            a: a_params.to_vec(),
            b: b_params.to_vec(),
        },
        excluded_t_sq,
        simplices: Some((q1, q2)),
    })
}

/// Names the equality that kills a 2-face. For a face `{0, i, j}` the area is
/// `(x_i y_j - s x_j y_i)^2` where `x, y` are the row parameters of `A` and
/// `B` and `s` the sign of `A_ij B_ij`.
fn describe_face(face: &[usize], a: &SymMatrix, b: &SymMatrix, labels: &RowLabels) -> String {
    if face[0] == 0 {
        let (i, j) = (face[1] - 1, face[2] - 1);
        if let (Some(ai), Some(aj), Some(bi), Some(bj)) =
            (labels.a[i], labels.a[j], labels.b[i], labels.b[j])
        {
            let s = a.get(i, j).signum() * b.get(i, j).signum();
            let sign = if s.is_negative() { "-" } else { "" };
            return format!(
                "{ai}*{bj} = {sign}{aj}*{bi} (2-face {{0,{},{}}} has zero area)",
                face[1], face[2]
            );
        }
    }
    let names: Vec<String> = face.iter().map(|v| v.to_string()).collect();
    format!("2-face {{{}}} has zero area", names.join(","))
}

/// The `n = 4` family. `a = (a1, a2, a3)` with `a1 + a2 + a3 = 0`,
/// `b = (b2, b3, b4)` with `b2 + b3 + b4 = 0`.
pub fn family_n4(a: &[Rational], b: &[Rational]) -> Result<DeformationFamily, FamilyError> {
    check_triple(a, ["a1", "a2", "a3"])?;
    check_triple(b, ["b2", "b3", "b4"])?;
    let (a1, a2, a3) = (&a[0], &a[1], &a[2]);
    let (b2, b3, b4) = (&b[0], &b[1], &b[2]);
    let z = Rational::zero;
    let am = SymMatrix::from_rows(&[
        vec![a1 * a1, -(a1 * a2), -(a1 * a3), z()],
        vec![-(a1 * a2), a2 * a2, -(a2 * a3), z()],
        vec![-(a1 * a3), -(a2 * a3), a3 * a3, z()],
        vec![z(), z(), z(), z()],
    ])?;
    let bm = SymMatrix::from_rows(&[
        vec![z(), z(), z(), z()],
        vec![z(), b2 * b2, -(b2 * b3), -(b2 * b4)],
        vec![z(), -(b2 * b3), b3 * b3, -(b3 * b4)],
        vec![z(), -(b2 * b4), -(b3 * b4), b4 * b4],
    ])?;
    let t_sq = -(b2 * b3) / (a2 * a3);
    edge_family(
        FamilyKind::N4,
        a,
        b,
        am,
        bm,
        RowLabels {
            a: &[Some("a1"), Some("a2"), Some("a3"), None],
            b: &[None, Some("b2"), Some("b3"), Some("b4")],
        },
        t_sq,
    )
}

/// The `n = 5` family. `a = (a1, a2, a3)`, `b = (b2, b4, b5)`, each summing
/// to zero.
pub fn family_n5(a: &[Rational], b: &[Rational]) -> Result<DeformationFamily, FamilyError> {
    check_triple(a, ["a1", "a2", "a3"])?;
    check_triple(b, ["b2", "b4", "b5"])?;
    let (a1, a2, a3) = (&a[0], &a[1], &a[2]);
    let (b2, b4, b5) = (&b[0], &b[1], &b[2]);
    let z = Rational::zero;
    let am = SymMatrix::from_rows(&[
        vec![a1 * a1, -(a1 * a2), -(a1 * a3), -(a1 * a3), z()],
        vec![-(a1 * a2), a2 * a2, -(a2 * a3), -(a2 * a3), z()],
        vec![-(a1 * a3), -(a2 * a3), a3 * a3, a3 * a3, z()],
        vec![-(a1 * a3), -(a2 * a3), a3 * a3, a3 * a3, z()],
        vec![z(), z(), z(), z(), z()],
    ])?;
    let bm = SymMatrix::from_rows(&[
        vec![z(), z(), z(), z(), z()],
        vec![z(), b2 * b2, b2 * b2, -(b2 * b4), -(b2 * b5)],
        vec![z(), b2 * b2, b2 * b2, -(b2 * b4), -(b2 * b5)],
        vec![z(), -(b2 * b4), -(b2 * b4), b4 * b4, -(b4 * b5)],
        vec![z(), -(b2 * b5), -(b2 * b5), -(b4 * b5), b5 * b5],
    ])?;
    let t_sq = -(b2 * b4) / (a2 * a3);
    edge_family(
        FamilyKind::N5,
        a,
        b,
        am,
        bm,
        RowLabels {
            a: &[Some("a1"), Some("a2"), Some("a3"), Some("a3"), None],
            b: &[None, Some("b2"), Some("b2"), Some("b4"), Some("b5")],
        },
        t_sq,
    )
}

/// `det C(t) = -4 a1^2 b4^2 (a2 a3 t + b2 b3 / t)^2` for the `n = 4` family.
pub fn n4_det_closed_form(a: &[Rational], b: &[Rational], t: &Rational) -> Rational {
    let inner = &a[1] * &a[2] * t + &b[0] * &b[1] / t;
    int(-4) * &a[0] * &a[0] * &b[2] * &b[2] * &inner * &inner
}

/// `det C(t) = -16 a1^2 a2 a3 b2 b4 b5^2 (a2 a3 t + b2 b4 / t)` for `n = 5`.
pub fn n5_det_closed_form(a: &[Rational], b: &[Rational], t: &Rational) -> Rational {
    let inner = &a[1] * &a[2] * t + &b[0] * &b[1] / t;
    int(-16) * &a[0] * &a[0] * &a[1] * &a[2] * &b[0] * &b[1] * &b[2] * &b[2] * inner
}

/// `(C_{2m}, C'_{2m})`: `C_{2m}` has all-ones 2x2 diagonal blocks and `-1`
/// elsewhere; `C'_{2m}` moves its last row and column to the front.
pub fn c_block_matrix(m: usize) -> Result<(SymMatrix, SymMatrix), FamilyError> {
    if m < 3 {
        return Err(FamilyError::MTooSmall(m));
    }
    let c = SymMatrix::from_fn(2 * m, |i, j| if i / 2 == j / 2 { int(1) } else { int(-1) });
    let cp = c.permuted(&rotation(2 * m))?;
    Ok((c, cp))
}

/// `[order-1, 0, 1, ..., order-2]`.
fn rotation(order: usize) -> Vec<usize> {
    std::iter::once(order - 1).chain(0..order - 1).collect()
}

/// `(x1, -x1, x2, -x2, ...)`: the kernel form of `C_{2m}`.
pub fn paired_kernel_vector(x: &[Rational]) -> Vec<Rational> {
    x.iter().flat_map(|v| [v.clone(), -v]).collect()
}

/// The kernel form of `C'_{2m}`: entry `2k+1` is `y_k` and entry
/// `(2k+2) mod 2m` is `-y_k`.
pub fn shifted_kernel_vector(y: &[Rational]) -> Vec<Rational> {
    let order = 2 * y.len();
    let mut out = vec![Rational::zero(); order];
    for (k, v) in y.iter().enumerate() {
        out[2 * k + 1] = v.clone();
        out[(2 * k + 2) % order] = -v;
    }
    out
}

/// `|d_i d'_j| != |d_j d'_i|` for all `i != j`.
pub fn ratios_distinct(d: &[Rational], dp: &[Rational]) -> bool {
    let n = d.len();
    (0..n).all(|i| (i + 1..n).all(|j| (&d[i] * &dp[j]).abs() != (&d[j] * &dp[i]).abs()))
}

const MAX_RETRIES: u64 = 1000;

fn draw_positive(rng: &mut ChaCha8Rng, count: usize) -> Vec<Rational> {
    (0..count).map(|_| int(rng.gen_range(1..=100))).collect()
}

/// Seeded generic `(d, d')` for the odd construction with `n = 2m - 1`.
/// Entries are drawn from `[1, 100]`; a draw is kept only when the pairwise
/// ratio condition holds and `A + B` is in `U0`.
pub fn choose_generic_d(
    m: usize,
    seed: u64,
) -> Result<(Vec<Rational>, Vec<Rational>), FamilyError> {
    let (c, cp) = c_block_matrix(m)?;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    for _ in 0..MAX_RETRIES {
        let d = paired_kernel_vector(&draw_positive(&mut rng, m));
        let dp = shifted_kernel_vector(&draw_positive(&mut rng, m));
        if !ratios_distinct(&d, &dp) {
            continue;
        }
        let a = c.diagonal_congruence(&d)?;
        let b = cp.diagonal_congruence(&dp)?;
        if membership_u0(&a.checked_add(&b)?) {
            return Ok((d, dp));
        }
    }
    Err(FamilyError::GenericityFailure(format!(
        "no generic parameters found for m = {m}, seed = {seed} after {MAX_RETRIES} draws"
    )))
}

/// Seeded `(d, d~)` for the even construction with `n = 2m`; both vectors are
/// in the kernel form of `C_{2m}` and `A + B` is in `U0`.
pub fn choose_generic_even(
    m: usize,
    seed: u64,
) -> Result<(Vec<Rational>, Vec<Rational>), FamilyError> {
    let (c, _) = c_block_matrix(m)?;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    for _ in 0..MAX_RETRIES {
        let d = paired_kernel_vector(&draw_positive(&mut rng, m));
        let dt = paired_kernel_vector(&draw_positive(&mut rng, m));
        let (a, b) = even_blocks(&c, &d, &dt)?;
        if membership_u0(&a.checked_add(&b)?) {
            return Ok((d, dt));
        }
    }
    Err(FamilyError::GenericityFailure(format!(
        "no generic parameters found for m = {m}, seed = {seed} after {MAX_RETRIES} draws"
    )))
}

fn check_kernel(c: &SymMatrix, v: &[Rational], name: &str) -> Result<(), FamilyError> {
    if v.len() != c.order() {
        return Err(FamilyError::InvalidKernelVector(format!(
            "{name} has length {}, expected {}",
            v.len(),
            c.order()
        )));
    }
    if let Some(i) = v.iter().position(|x| x.is_zero()) {
        return Err(FamilyError::InvalidKernelVector(format!(
            "{name}[{}] is zero",
            i + 1
        )));
    }
    if c.mul_vec(v)?.iter().any(|x| !x.is_zero()) {
        return Err(FamilyError::InvalidKernelVector(format!(
            "{name} is not in the kernel of its sign matrix"
        )));
    }
    Ok(())
}

/// Odd `n = 2m - 1`: `A = D C_{2m} D`, `B = D' C'_{2m} D'`.
pub fn family_odd_n(
    m: usize,
    d: &[Rational],
    dp: &[Rational],
) -> Result<DeformationFamily, FamilyError> {
    let (c, cp) = c_block_matrix(m)?;
    check_kernel(&c, d, "d")?;
    check_kernel(&cp, dp, "d'")?;
    let a = c.diagonal_congruence(d)?;
    let b = cp.diagonal_congruence(dp)?;
    if !membership_u0(&a.checked_add(&b)?) {
        return Err(FamilyError::GenericityFailure(
            "A + B is not in U0 for the supplied (d, d')".into(),
        ));
    }
    Ok(DeformationFamily {
        kind: FamilyKind::OddN,
        a,
        b,
        params: FamilyParams::Kernel {
            m,
            d: d.to_vec(),
            d_prime: dp.to_vec(),
        },
        excluded_t_sq: None,
        simplices: None,
    })
}

fn even_blocks(
    c: &SymMatrix,
    d: &[Rational],
    dt: &[Rational],
) -> Result<(SymMatrix, SymMatrix), FamilyError> {
    let order = c.order() + 1;
    let a = c.diagonal_congruence(d)?.embedded(order, 0);
    let b = c.diagonal_congruence(dt)?.embedded(order, 1);
    Ok((a, b))
}

/// Even `n = 2m`: `A = [[A_{2m}(d), 0], [0, 0]]` and
/// `B = [[0, 0], [0, A_{2m}(d~)]]`, both of order `2m + 1`.
///
/// Taking `d~ = d` makes the order-2 minors at index pairs `(2k, 2l)` vanish
/// identically, so a second kernel vector is required.
pub fn family_even_n(
    m: usize,
    d: &[Rational],
    dt: &[Rational],
) -> Result<DeformationFamily, FamilyError> {
    let (c, _) = c_block_matrix(m)?;
    check_kernel(&c, d, "d")?;
    check_kernel(&c, dt, "d~")?;
    let (a, b) = even_blocks(&c, d, dt)?;
    if !membership_u0(&a.checked_add(&b)?) {
        return Err(FamilyError::GenericityFailure(
            "A + B is not in U0 for the supplied (d, d~)".into(),
        ));
    }
    Ok(DeformationFamily {
        kind: FamilyKind::EvenN,
        a,
        b,
        params: FamilyParams::Kernel {
            m,
            d: d.to_vec(),
            d_prime: dt.to_vec(),
        },
        excluded_t_sq: None,
        simplices: None,
    })
}

/// Family of simplex dimension `n >= 5` with seeded generic parameters.
pub fn matrix_family(n: usize, seed: u64) -> Result<DeformationFamily, FamilyError> {
    if n % 2 == 1 {
        let m = n.div_ceil(2);
        let (d, dp) = choose_generic_d(m, seed)?;
        family_odd_n(m, &d, &dp)
    } else {
        let m = n / 2;
        let (d, dt) = choose_generic_even(m, seed)?;
        family_even_n(m, &d, &dt)
    }
}

/// Set D: all-ones in the kernel, nonnegative diagonal, every order-2
/// principal minor zero.
pub fn membership_d(m: &SymMatrix) -> bool {
    m.annihilates_ones()
        && m.diagonal().iter().all(|x| !x.is_negative())
        && principal_minors_order2(m).iter().all(|(_, v)| v.is_zero())
}

/// Set U: all-ones in the kernel, nonnegative diagonal and order-2 minors.
pub fn membership_u(m: &SymMatrix) -> bool {
    m.annihilates_ones()
        && m.diagonal().iter().all(|x| !x.is_negative())
        && principal_minors_order2(m)
            .iter()
            .all(|(_, v)| !v.is_negative())
}

/// Set U0: as U with strict positivity and rank `order - 1`.
pub fn membership_u0(m: &SymMatrix) -> bool {
    m.order() >= 2
        && m.annihilates_ones()
        && m.diagonal().iter().all(|x| x.is_positive())
        && principal_minors_order2(m)
            .iter()
            .all(|(_, v)| v.is_positive())
        && exactmat::rank(m) == m.order() - 1
}

/// Set F0: positive semidefinite, rank `order - 1`, all-ones in the kernel.
pub fn membership_f0(m: &SymMatrix) -> bool {
    if m.order() < 2 || !m.annihilates_ones() {
        return false;
    }
    let sig = exactmat::signature(m);
    sig.negative == 0 && sig.rank() == m.order() - 1
}

/// `{1/3, 1/2, 2/3, 1, 3/2, 2, 3}`.
pub fn default_grid() -> Vec<Rational> {
    [(1, 3), (1, 2), (2, 3), (1, 1), (3, 2), (2, 1), (3, 1)]
        .iter()
        .map(|&(p, q)| exactmat::ratio(p, q))
        .collect()
}

/// Exact data of one sweep point.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct SweepPoint {
    #[serde(with = "exactmat::rational_string")]
    pub t: Rational,
    /// Order-2 principal minors keyed by 0-based index pairs.
    #[serde(serialize_with = "ser_keyed")]
    pub minors: Vec<((usize, usize), Rational)>,
    #[serde(with = "exactmat::rational_string")]
    pub det: Rational,
    pub signature: Signature,
    /// Signed squared areas of the 2-faces of `Q(t)` (pseudo-simplex kinds).
    #[serde(serialize_with = "ser_faces")]
    pub face_volumes: Vec<(Vec<usize>, Rational)>,
    /// Signed squared volume of the full simplex.
    #[serde(serialize_with = "ser_opt")]
    pub volume: Option<Rational>,
    pub in_u0: bool,
}

fn ser_keyed<S: serde::Serializer>(
    v: &[((usize, usize), Rational)],
    s: S,
) -> Result<S::Ok, S::Error> {
    use serde::ser::SerializeSeq;
    let mut seq = s.serialize_seq(Some(v.len()))?;
    for ((i, j), r) in v {
        seq.serialize_element(&(i + 1, j + 1, r.to_string()))?;
    }
    seq.end()
}

fn ser_faces<S: serde::Serializer>(v: &[(Vec<usize>, Rational)], s: S) -> Result<S::Ok, S::Error> {
    use serde::ser::SerializeSeq;
    let mut seq = s.serialize_seq(Some(v.len()))?;
    for (face, r) in v {
        seq.serialize_element(&(face, r.to_string()))?;
    }
    seq.end()
}

fn ser_opt<S: serde::Serializer>(v: &Option<Rational>, s: S) -> Result<S::Ok, S::Error> {
    match v {
        Some(r) => s.serialize_some(&r.to_string()),
        None => s.serialize_none(),
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct SweepVerdicts {
    pub minors_constant: bool,
    pub det_constant: bool,
    pub face_volumes_constant: bool,
    pub signature_trace: Vec<Signature>,
    /// Smallest and largest grid point of the contiguous run around `t = 1`
    /// on which `U(t)` is in U0 (matrix kinds only).
    #[serde(serialize_with = "ser_interval")]
    pub verified_interval: Option<(Rational, Rational)>,
}

fn ser_interval<S: serde::Serializer>(
    v: &Option<(Rational, Rational)>,
    s: S,
) -> Result<S::Ok, S::Error> {
    match v {
        Some((lo, hi)) => s.serialize_some(&(lo.to_string(), hi.to_string())),
        None => s.serialize_none(),
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct SweepReport {
    pub kind: FamilyKind,
    pub n: usize,
    #[serde(with = "exactmat::rational_string_vec")]
    pub t_grid: Vec<Rational>,
    pub per_t: Vec<SweepPoint>,
    pub verdicts: SweepVerdicts,
}

fn all_equal<T: PartialEq>(items: impl IntoIterator<Item = T>) -> bool {
    let mut it = items.into_iter();
    match it.next() {
        Some(first) => it.all(|x| x == first),
        None => true,
    }
}

/// Evaluates the family on `grid` (sorted ascending, duplicates removed).
pub fn sweep(family: &DeformationFamily, grid: &[Rational]) -> Result<SweepReport, FamilyError> {
    if grid.is_empty() {
        return Err(FamilyError::EmptyGrid);
    }
    let mut ts = grid.to_vec();
    ts.sort();
    ts.dedup();
    for t in &ts {
        check_positive(t)?;
        if family.is_excluded(t) {
            return Err(FamilyError::ExcludedT {
                t: t.to_string(),
                t_sq: family.excluded_t_sq.as_ref().expect("excluded").to_string(),
            });
        }
    }
    let mut per_t = Vec::with_capacity(ts.len());
    for t in &ts {
        let c = family.at(t)?;
        let (face_volumes, volume) = match family.simplex_at(t)? {
            Some(q) => (
                q.faces(2)
                    .into_iter()
                    .map(|(face, s)| (face, s.signed_sq_volume().value))
                    .collect(),
                Some(q.signed_sq_volume().value),
            ),
            None => (Vec::new(), None),
        };
        per_t.push(SweepPoint {
            t: t.clone(),
            minors: principal_minors_order2(&c),
            det: family.tracked_det(&c),
            signature: exactmat::signature(&c),
            face_volumes,
            volume,
            in_u0: family.is_matrix_kind() && membership_u0(&c),
        });
    }
    let verified_interval = if family.is_matrix_kind() {
        verified_run(&per_t)
    } else {
        None
    };
    let verdicts = SweepVerdicts {
        minors_constant: all_equal(per_t.iter().map(|p| &p.minors)),
        det_constant: all_equal(per_t.iter().map(|p| &p.det)),
        face_volumes_constant: all_equal(per_t.iter().map(|p| &p.face_volumes)),
        signature_trace: per_t.iter().map(|p| p.signature).collect(),
        verified_interval,
    };
    Ok(SweepReport {
        kind: family.kind,
        n: family.dimension(),
        t_grid: ts,
        per_t,
        verdicts,
    })
}

fn verified_run(points: &[SweepPoint]) -> Option<(Rational, Rational)> {
    let one = Rational::one();
    let center = points.iter().position(|p| p.t == one)?;
    if !points[center].in_u0 {
        return None;
    }
    let mut lo = center;
    while lo > 0 && points[lo - 1].in_u0 {
        lo -= 1;
    }
    let mut hi = center;
    while hi + 1 < points.len() && points[hi + 1].in_u0 {
        hi += 1;
    }
    Some((points[lo].t.clone(), points[hi].t.clone()))
}

impl SweepReport {
    /// CSV with columns `t, det, p, q, z, minor_i_j..., face_vol_...`.
    /// Minor indices are 1-based, face vertex labels 0-based.
    pub fn to_csv(&self) -> Result<String, csv::Error> {
        let mut w = csv::Writer::from_writer(Vec::new());
        let mut header = vec![
            "t".to_string(),
            "det".into(),
            "p".into(),
            "q".into(),
            "z".into(),
        ];
        if let Some(first) = self.per_t.first() {
            header.extend(
                first
                    .minors
                    .iter()
                    .map(|((i, j), _)| format!("minor_{}_{}", i + 1, j + 1)),
            );
            header.extend(first.face_volumes.iter().map(|(face, _)| {
                let parts: Vec<String> = face.iter().map(|v| v.to_string()).collect();
                format!("face_vol_{}", parts.join("_"))
            }));
        }
        w.write_record(&header)?;
        for p in &self.per_t {
            let mut row = vec![
                p.t.to_string(),
                p.det.to_string(),
                p.signature.positive.to_string(),
                p.signature.negative.to_string(),
                p.signature.zero.to_string(),
            ];
            row.extend(p.minors.iter().map(|(_, v)| v.to_string()));
            row.extend(p.face_volumes.iter().map(|(_, v)| v.to_string()));
            w.write_record(&row)?;
        }
        let bytes = w.into_inner().map_err(|e| e.into_error())?;
        Ok(String::from_utf8(bytes).expect("csv output is utf-8"))
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("serializable")
    }
}

/// All `k x k` principal minors of `C(t)`, in lexicographic subset order.
pub fn minors_at(
    family: &DeformationFamily,
    k: usize,
    t: &Rational,
) -> Result<Vec<(Vec<usize>, Rational)>, FamilyError> {
    Ok(principal_minors(&family.at(t)?, k))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exactmat::ratio;

    fn ints(v: &[i64]) -> Vec<Rational> {
        v.iter().map(|&x| int(x)).collect()
    }

    #[test]
    fn q0_faces_vanish() {
        let q = q0(&int(1), &int(1)).unwrap();
        assert_eq!(q.squared_edge(0, 1), int(1));
        assert_eq!(q.squared_edge(2, 3), int(1));
        assert_eq!(q.squared_edge(0, 3), int(4));
        for (_, f) in q.faces(2) {
            assert!(f.signed_sq_volume().value.is_zero());
        }
        assert!(!q.signed_sq_volume().value.is_zero());
        assert_eq!(
            q0(&int(1), &int(-1)),
            Err(FamilyError::ZeroParameter("a3".into()))
        );
        let q = q0(&int(2), &int(3)).unwrap();
        assert!(q
            .faces(2)
            .iter()
            .all(|(_, f)| f.signed_sq_volume().value.is_zero()));
    }

    #[test]
    fn n4_example() {
        let (a, b) = (ints(&[1, 1, -2]), ints(&[2, -3, 1]));
        let f = family_n4(&a, &b).unwrap();
        assert_eq!(f.excluded_t_sq, None);
        assert_eq!(exactmat::det(&f.at(&int(1)).unwrap()), int(-256));
        assert_eq!(exactmat::det(&f.at(&int(2)).unwrap()), int(-196));
        for t in default_grid() {
            assert_eq!(
                exactmat::det(&f.at(&t).unwrap()),
                n4_det_closed_form(&a, &b, &t)
            );
        }
        let gram = f.simplices.as_ref().unwrap().0.gram(0).unwrap();
        assert_eq!(gram, f.a);
    }

    #[test]
    fn n4_exclusion_named() {
        let err = family_n4(&ints(&[1, 1, -2]), &ints(&[1, -2, 1])).unwrap_err();
        match err {
            FamilyError::DegenerateParameters(msg) => {
                assert!(msg.contains("a2*b3 = a3*b2"), "{msg}")
            }
            other => panic!("unexpected {other:?}"),
        }
        assert!(matches!(
            family_n4(&ints(&[1, 1, -1]), &ints(&[2, -3, 1])),
            Err(FamilyError::ConstraintViolated(_))
        ));
    }

    #[test]
    fn n5_example() {
        let (a, b) = (ints(&[1, 1, -2]), ints(&[2, -3, 1]));
        let f = family_n5(&a, &b).unwrap();
        assert_eq!(exactmat::det(&f.at(&int(1)).unwrap()), int(1536));
        assert_eq!(f.excluded_t_sq, None);
        let g = family_n5(&a, &ints(&[2, 3, -5])).unwrap();
        assert_eq!(g.excluded_t_sq, Some(int(3)));
        assert!(matches!(sweep(&g, &default_grid()), Ok(_)));
    }

    #[test]
    fn c_block_ranks_and_kernels() {
        let (c, cp) = c_block_matrix(3).unwrap();
        assert_eq!(exactmat::rank(&c), 3);
        assert_eq!(exactmat::rank(&cp), 3);
        assert_eq!(c_block_matrix(2), Err(FamilyError::MTooSmall(2)));
        let d = paired_kernel_vector(&ints(&[1, 2, 3]));
        assert!(c.mul_vec(&d).unwrap().iter().all(|x| x.is_zero()));
        let dp = shifted_kernel_vector(&ints(&[4, 5, 6]));
        assert!(cp.mul_vec(&dp).unwrap().iter().all(|x| x.is_zero()));
    }

    #[test]
    fn alternating_d_is_not_generic() {
        let d: Vec<Rational> = (0..6)
            .map(|i| int(if i % 2 == 0 { 1 } else { -1 }))
            .collect();
        let (c, cp) = c_block_matrix(3).unwrap();
        assert!(c.mul_vec(&d).unwrap().iter().all(|x| x.is_zero()));
        assert!(cp.mul_vec(&d).unwrap().iter().all(|x| x.is_zero()));
        assert!(!ratios_distinct(&d, &d));
    }

    #[test]
    fn odd_family_m3() {
        let (d, dp) = choose_generic_d(3, 1).unwrap();
        assert!(ratios_distinct(&d, &dp));
        let f = family_odd_n(3, &d, &dp).unwrap();
        assert!(membership_d(&f.a) && membership_d(&f.b));
        assert_eq!(exactmat::rank(&f.a), 3);
        let u = f.at(&int(1)).unwrap();
        assert_eq!(exactmat::rank(&u), 5);
        assert!(membership_u0(&u));
        assert_eq!(choose_generic_d(3, 1).unwrap(), (d, dp));
    }

    #[test]
    fn even_family_requires_second_vector() {
        let (d, dt) = choose_generic_even(3, 1).unwrap();
        let f = family_even_n(3, &d, &dt).unwrap();
        assert_eq!(exactmat::rank(&f.at(&int(1)).unwrap()), 6);
        assert!(matches!(
            family_even_n(3, &d, &d),
            Err(FamilyError::GenericityFailure(_))
        ));
    }

    #[test]
    fn invalid_kernel_vector() {
        let bad = ints(&[1, 1, 1, 1, 1, 1]);
        assert!(matches!(
            family_odd_n(3, &bad, &bad),
            Err(FamilyError::InvalidKernelVector(_))
        ));
    }

    #[test]
    fn membership_examples() {
        let alpha = ints(&[1, 2, -3]);
        assert!(membership_d(&SymMatrix::outer(&alpha)));
        let neg = SymMatrix::from_i64_rows(&[&[-1, 1], &[1, -1]]).unwrap();
        assert!(!membership_u(&neg));
        let scaled = SymMatrix::outer(&alpha).scale(&ratio(5, 2));
        assert!(membership_d(&scaled));
    }

    #[test]
    fn at_rejects_nonpositive_t() {
        let f = family_n4(&ints(&[1, 1, -2]), &ints(&[2, -3, 1])).unwrap();
        assert!(matches!(f.at(&int(0)), Err(FamilyError::NonPositiveT(_))));
        assert_eq!(f.at(&int(1)).unwrap(), f.a.checked_add(&f.b).unwrap());
    }

    #[test]
    fn sweep_csv_shape() {
        let f = family_n4(&ints(&[1, 1, -2]), &ints(&[2, -3, 1])).unwrap();
        let r = sweep(&f, &default_grid()).unwrap();
        assert!(r.verdicts.minors_constant);
        assert!(r.verdicts.face_volumes_constant);
        assert!(!r.verdicts.det_constant);
        let csv = r.to_csv().unwrap();
        let header = csv.lines().next().unwrap();
        assert!(header.starts_with("t,det,p,q,z,minor_1_2,"));
        assert!(header.contains("face_vol_0_1_2"));
        assert_eq!(csv.lines().count(), 8);
        assert_eq!(sweep(&f, &[]), Err(FamilyError::EmptyGrid));
    }
}
