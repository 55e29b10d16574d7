//! Named verification bundles run by `flexiplex lemma-check`.

use std::fmt;
use std::str::FromStr;

use num_traits::{One, Signed, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::dual::{self, relative_spread, TRANSFER_TOLERANCE, VARIATION_THRESHOLD};
use crate::exactmat::{self, int, ratio, Rational, Signature, SymMatrix};
use crate::families::{self, DeformationFamily};
use crate::realize::{self, ROUND_TRIP_TOLERANCE};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Bundle {
    Lemma2_5,
    Lemma3_2,
    Lemma3_4,
    Theorem4_7,
    Remark5_8,
    Theorem1_2,
    Theorem1_3,
    Theorem1_5,
    Theorem1_6,
}

impl Bundle {
    pub const ALL: [Bundle; 9] = [
        Bundle::Lemma2_5,
        Bundle::Lemma3_2,
        Bundle::Lemma3_4,
        Bundle::Theorem4_7,
        Bundle::Remark5_8,
        Bundle::Theorem1_2,
        Bundle::Theorem1_3,
        Bundle::Theorem1_5,
        Bundle::Theorem1_6,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Bundle::Lemma2_5 => "lemma-2.5",
            Bundle::Lemma3_2 => "lemma-3.2",
            Bundle::Lemma3_4 => "lemma-3.4",
            Bundle::Theorem4_7 => "theorem-4.7",
            Bundle::Remark5_8 => "remark-5.8",
            Bundle::Theorem1_2 => "theorem-1.2",
            Bundle::Theorem1_3 => "theorem-1.3",
            Bundle::Theorem1_5 => "theorem-1.5",
            Bundle::Theorem1_6 => "theorem-1.6",
        }
    }
}

impl fmt::Display for Bundle {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Bundle {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        Bundle::ALL
            .iter()
            .copied()
            .find(|b| b.name() == s)
            .ok_or_else(|| {
                let names: Vec<&str> = Bundle::ALL.iter().map(|b| b.name()).collect();
                format!("unknown bundle {s:?}; expected one of {}", names.join(", "))
            })
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct CheckItem {
    pub name: String,
    pub passed: bool,
    pub detail: String,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct CheckReport {
    pub bundle: String,
    pub seed: u64,
    pub passed: bool,
    pub checks: Vec<CheckItem>,
}

impl CheckReport {
    fn new(bundle: Bundle, seed: u64) -> Self {
        CheckReport {
            bundle: bundle.name().into(),
            seed,
            passed: true,
            checks: Vec::new(),
        }
    }

    fn check(&mut self, name: impl Into<String>, passed: bool, detail: impl Into<String>) {
        self.passed &= passed;
        self.checks.push(CheckItem {
            name: name.into(),
            passed,
            detail: detail.into(),
        });
    }

    /// Records an error as a failed check instead of aborting the bundle.
    fn attempt<T, E: fmt::Display>(&mut self, name: &str, r: Result<T, E>) -> Option<T> {
        match r {
            Ok(v) => Some(v),
            Err(e) => {
                self.check(name, false, e.to_string());
                None
            }
        }
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("serializable")
    }
}

/// Bundle inputs. `n = None` runs the bundle's default dimensions.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CheckParams {
    pub n: Option<usize>,
    pub seed: u64,
}

pub fn run_bundle(bundle: Bundle, params: &CheckParams) -> CheckReport {
    let mut r = CheckReport::new(bundle, params.seed);
    match bundle {
        Bundle::Lemma2_5 => lemma_2_5(&mut r, params.seed, 1000),
        Bundle::Lemma3_2 => lemma_3_2(&mut r),
        Bundle::Lemma3_4 => lemma_3_4(&mut r),
        Bundle::Theorem4_7 => {
            for n in dims(params.n, &[5, 6, 7, 8, 9, 10]) {
                theorem_4_7(&mut r, n, params.seed);
            }
        }
        Bundle::Remark5_8 => {
            for n in dims(params.n, &[5, 6, 7, 8]) {
                remark_5_8(&mut r, n, params.seed);
            }
        }
        Bundle::Theorem1_2 => theorem_1_2(&mut r),
        Bundle::Theorem1_3 => {
            for n in dims(params.n, &[5, 6]) {
                theorem_1_3(&mut r, n, params.seed);
            }
        }
        Bundle::Theorem1_5 => theorem_1_5(&mut r, params.n, params.seed),
        Bundle::Theorem1_6 => theorem_1_6(&mut r),
    }
    r
}

fn dims(n: Option<usize>, defaults: &[usize]) -> Vec<usize> {
    n.map_or_else(|| defaults.to_vec(), |n| vec![n])
}

fn ints(v: &[i64]) -> Vec<Rational> {
    v.iter().map(|&x| int(x)).collect()
}

/// `a = (1, 1, -2)`, `b = (2, -3, 1)`.
pub fn example_params() -> (Vec<Rational>, Vec<Rational>) {
    (ints(&[1, 1, -2]), ints(&[2, -3, 1]))
}

fn random_rational(rng: &mut ChaCha8Rng) -> Rational {
    ratio(rng.gen_range(-50..=50), rng.gen_range(1..=12))
}

fn lemma_grid() -> Vec<Rational> {
    [(1, 3), (1, 2), (1, 1), (2, 1), (3, 1)]
        .iter()
        .map(|&(p, q)| ratio(p, q))
        .collect()
}

/// `det(t a a^T + (1/t) b b^T) = (a1 b2 - a2 b1)^2` for random rational
/// pairs.
pub fn lemma_2_5(r: &mut CheckReport, seed: u64, samples: usize) {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let grid = lemma_grid();
    let mut failures = 0;
    for _ in 0..samples {
        let a: Vec<Rational> = (0..2).map(|_| random_rational(&mut rng)).collect();
        let b: Vec<Rational> = (0..2).map(|_| random_rational(&mut rng)).collect();
        let (am, bm) = (SymMatrix::outer(&a), SymMatrix::outer(&b));
        let cross = &a[0] * &b[1] - &a[1] * &b[0];
        let expected = &cross * &cross;
        let ok = grid.iter().all(|t| {
            let c = am
                .linear_combination(t, &bm, &t.recip())
                .expect("same order");
            exactmat::det(&c) == expected
        });
        if !ok {
            failures += 1;
        }
    }
    r.check(
        "det(tA + B/t) = (a1 b2 - a2 b1)^2 on the grid",
        failures == 0,
        format!("{samples} samples, {failures} failures"),
    );
}

fn sweep_checks(
    r: &mut CheckReport,
    family: &DeformationFamily,
    label: &str,
) -> Option<families::SweepReport> {
    let report = r.attempt(label, families::sweep(family, &families::default_grid()))?;
    r.check(
        format!("{label}: order-2 principal minors constant"),
        report.verdicts.minors_constant,
        format!("{} grid points", report.t_grid.len()),
    );
    let positive = report.per_t[0]
        .face_volumes
        .iter()
        .all(|(_, v)| v.is_positive());
    r.check(
        format!("{label}: 2-face signed squared areas constant and positive"),
        report.verdicts.face_volumes_constant && positive,
        format!("{} faces", report.per_t[0].face_volumes.len()),
    );
    r.check(
        format!("{label}: det C(t) varies"),
        !report.verdicts.det_constant,
        report
            .per_t
            .iter()
            .map(|p| format!("{}:{}", p.t, p.det))
            .collect::<Vec<_>>()
            .join(" "),
    );
    Some(report)
}

pub fn lemma_3_2(r: &mut CheckReport) {
    let (a, b) = example_params();
    let Some(f) = r.attempt("n=4 family", families::family_n4(&a, &b)) else {
        return;
    };
    let Some(report) = sweep_checks(r, &f, "n=4") else {
        return;
    };
    let closed = report
        .per_t
        .iter()
        .all(|p| p.det == families::n4_det_closed_form(&a, &b, &p.t));
    r.check(
        "n=4: det matches -4 a1^2 b4^2 (a2 a3 t + b2 b3/t)^2",
        closed,
        "",
    );
    let at_one = exactmat::det(&f.at(&int(1)).expect("t > 0"));
    r.check(
        "n=4: det C(1) = -256",
        at_one == int(-256),
        at_one.to_string(),
    );
    r.check(
        "n=4: det C(t) < 0 on the grid",
        report.per_t.iter().all(|p| p.det.is_negative()),
        "",
    );
    r.check(
        "n=4: excluded t absent for the example parameters",
        f.excluded_t_sq.is_none(),
        "-b2 b3 / (a2 a3) = -3",
    );
    let rejected = families::family_n4(&a, &ints(&[1, -2, 1]));
    r.check(
        "n=4: a2 b3 = a3 b2 rejected",
        matches!(&rejected, Err(families::FamilyError::DegenerateParameters(m)) if m.contains("a2*b3 = a3*b2")),
        format!("{rejected:?}").chars().take(120).collect::<String>(),
    );
}

pub fn lemma_3_4(r: &mut CheckReport) {
    let (a, b) = example_params();
    let Some(f) = r.attempt("n=5 family", families::family_n5(&a, &b)) else {
        return;
    };
    let Some(report) = sweep_checks(r, &f, "n=5") else {
        return;
    };
    let closed = report
        .per_t
        .iter()
        .all(|p| p.det == families::n5_det_closed_form(&a, &b, &p.t));
    r.check(
        "n=5: det matches -16 a1^2 a2 a3 b2 b4 b5^2 (a2 a3 t + b2 b4/t)",
        closed,
        "",
    );
    let at_one = exactmat::det(&f.at(&int(1)).expect("t > 0"));
    r.check(
        "n=5: det C(1) = 1536",
        at_one == int(1536),
        at_one.to_string(),
    );
    r.check(
        "n=5: t*^2 = -b2 b4/(a2 a3) is negative for the example, so nothing is excluded",
        f.excluded_t_sq.is_none(),
        "-b2 b4 / (a2 a3) = -3",
    );
    // b = (2, 3, -5): t*^2 = 3, reported but never hit by a rational t.
    if let Some(g) = r.attempt(
        "n=5 family, b = (2,3,-5)",
        families::family_n5(&a, &ints(&[2, 3, -5])),
    ) {
        r.check(
            "n=5: t*^2 = 3 reported for b = (2,3,-5)",
            g.excluded_t_sq == Some(int(3)),
            format!("{:?}", g.excluded_t_sq.map(|v| v.to_string())),
        );
    }
    // b = (2, 4, -6): t*^2 = 4, so t = 2 must be refused and det C(2) = 0.
    if let Some(g) = r.attempt(
        "n=5 family, b = (2,4,-6)",
        families::family_n5(&a, &ints(&[2, 4, -6])),
    ) {
        let refused = matches!(
            families::sweep(&g, &families::default_grid()),
            Err(families::FamilyError::ExcludedT { .. })
        );
        let det2 = exactmat::det(&g.at(&int(2)).expect("t > 0"));
        r.check(
            "n=5: excluded t = 2 refused by sweep for b = (2,4,-6)",
            g.excluded_t_sq == Some(int(4)) && refused && det2.is_zero(),
            format!("det C(2) = {det2}"),
        );
    }
}

pub fn theorem_4_7(r: &mut CheckReport, n: usize, seed: u64) {
    let label = format!("n={n}");
    let Some(f) = r.attempt(&label, families::matrix_family(n, seed)) else {
        return;
    };
    r.check(
        format!("{label}: A, B in D"),
        families::membership_d(&f.a) && families::membership_d(&f.b),
        format!(
            "rank A = {}, rank B = {}",
            exactmat::rank(&f.a),
            exactmat::rank(&f.b)
        ),
    );
    let Some(report) = r.attempt(&label, families::sweep(&f, &families::default_grid())) else {
        return;
    };
    let Some((lo, hi)) = report.verdicts.verified_interval.clone() else {
        r.check(
            format!("{label}: U(1) in U0"),
            false,
            "no verified interval",
        );
        return;
    };
    let inside: Vec<_> = report
        .per_t
        .iter()
        .filter(|p| p.t >= lo && p.t <= hi)
        .collect();
    let all_u0 = inside.iter().all(|p| p.in_u0);
    let ranks_ok = inside.iter().all(|p| p.signature.rank() == n);
    r.check(
        format!("{label}: U(t) in U0 with rank n on [{lo}, {hi}]"),
        all_u0 && ranks_ok,
        format!("{} grid points", inside.len()),
    );
    r.check(
        format!("{label}: order-2 principal minors constant"),
        report.verdicts.minors_constant,
        "",
    );
}

/// Fits `f(t) = alpha t + beta / t` through three points.
fn fits_t_plus_inverse(points: &[(Rational, Rational)]) -> Option<(Rational, Rational)> {
    let [(t1, f1), (t2, f2), (t3, f3)] = points else {
        return None;
    };
    // Solve [t1 1/t1; t2 1/t2] (alpha, beta) = (f1, f2).
    let det = t1 / t2 - t2 / t1;
    if det.is_zero() {
        return None;
    }
    let alpha = (f1 / t2 - f2 / t1) / &det;
    let beta = (t1 * f2 - t2 * f1) / &det;
    (&alpha * t3 + &beta / t3 == *f3).then_some((alpha, beta))
}

pub fn remark_5_8(r: &mut CheckReport, n: usize, seed: u64) {
    let label = format!("n={n}");
    let Some(f) = r.attempt(&label, families::matrix_family(n, seed)) else {
        return;
    };
    let grid = families::default_grid();
    if n % 2 == 0 {
        let k = n;
        let per_t: Vec<Vec<(Vec<usize>, Rational)>> = grid
            .iter()
            .map(|t| families::minors_at(&f, k, t).expect("t > 0"))
            .collect();
        let constant = per_t.iter().all(|m| m == &per_t[0]);
        r.check(
            format!("{label}: every {k}x{k} principal minor constant in t"),
            constant,
            format!("{} minors x {} grid points", per_t[0].len(), grid.len()),
        );
    } else {
        let k = n;
        let pts: Vec<Rational> = vec![ratio(1, 2), int(1), int(2)];
        let per_t: Vec<Vec<(Vec<usize>, Rational)>> = pts
            .iter()
            .map(|t| families::minors_at(&f, k, t).expect("t > 0"))
            .collect();
        let mut ok = true;
        for idx in 0..per_t[0].len() {
            let samples: Vec<(Rational, Rational)> = pts
                .iter()
                .zip(&per_t)
                .map(|(t, m)| (t.clone(), m[idx].1.clone()))
                .collect();
            let nonconstant = samples.iter().any(|(_, v)| v != &samples[0].1);
            ok &= nonconstant && fits_t_plus_inverse(&samples).is_some();
        }
        r.check(
            format!("{label}: every {k}x{k} principal minor is alpha t + beta/t, non-constant"),
            ok,
            format!("{} minors at t = 1/2, 1, 2", per_t[0].len()),
        );
    }
}

pub fn theorem_1_2(r: &mut CheckReport) {
    let (a, b) = example_params();
    let Some(f) = r.attempt("n=4 family", families::family_n4(&a, &b)) else {
        return;
    };
    let grid = families::default_grid();
    let target = Signature::new(3, 1, 0);
    let mut sig_ok = true;
    let mut worst = 0.0f64;
    let mut edges: Vec<Vec<Rational>> = Vec::new();
    for t in &grid {
        let c = f.at(t).expect("t > 0");
        sig_ok &= exactmat::signature(&c) == target;
        match realize::realize(&c) {
            Ok(real) => {
                sig_ok &= real.signature == target;
                worst = worst.max(real.max_gram_error());
            }
            Err(e) => {
                r.check(format!("n=4: realize C({t})"), false, e.to_string());
                return;
            }
        }
        let q = f
            .simplex_at(t)
            .expect("t > 0")
            .expect("pseudo-simplex kind");
        edges.push(q.edges().into_iter().map(|(_, v)| v).collect());
    }
    r.check(
        "n=4: C(t) realized in R^{3,1} on the grid",
        sig_ok,
        target.to_string(),
    );
    r.check(
        "n=4: realization round-trip",
        worst <= ROUND_TRIP_TOLERANCE,
        format!("max error {worst:e}"),
    );
    if let Some(report) = r.attempt("n=4 sweep", families::sweep(&f, &grid)) {
        let positive = report.per_t[0]
            .face_volumes
            .iter()
            .all(|(_, v)| v.is_positive());
        r.check(
            "n=4: all 2-faces Euclidean with fixed area",
            report.verdicts.face_volumes_constant && positive,
            "",
        );
    }
    r.check(
        "n=4: squared edge lengths change with t (non-congruent)",
        edges.iter().any(|e| e != &edges[0]),
        "",
    );
}

pub fn theorem_1_3(r: &mut CheckReport, n: usize, seed: u64) {
    let label = format!("n={n}");
    let Some(f) = r.attempt(&label, families::matrix_family(n, seed)) else {
        return;
    };
    let Some(report) = r.attempt(&label, dual::family_dual_report(&f, &dual::dual_grid())) else {
        return;
    };
    let v = &report.verdicts;
    r.check(
        format!("{label}: transfer formulas agree with direct volumes"),
        v.transfer_consistent,
        format!("tolerance {TRANSFER_TOLERANCE:e}"),
    );
    r.check(
        format!("{label}: codim-2 face volumes of Q(t) constant after rescaling"),
        v.codim2_constant,
        format!("max relative spread {:e}", v.codim2_max_spread),
    );
    r.check(
        format!("{label}: Q(t) non-congruent"),
        v.non_congruent,
        format!("max squared-edge spread {:e}", v.max_edge_spread),
    );
    r.check(
        format!("{label}: all dihedral angles Euclidean"),
        v.euclidean_angles,
        "order-2 minors of U(t) positive",
    );
}

fn dual_volume_spread(r: &mut CheckReport, n: usize, seed: u64) -> Option<f64> {
    let f = r.attempt(&format!("n={n}"), families::matrix_family(n, seed))?;
    let report = r.attempt(
        &format!("n={n}"),
        dual::family_dual_report(&f, &dual::dual_grid()),
    )?;
    Some(report.verdicts.vn_q_spread)
}

pub fn theorem_1_5(r: &mut CheckReport, n: Option<usize>, seed: u64) {
    let wanted = |k: usize| n.is_none_or(|n| n == k);
    if wanted(4) {
        let (a, b) = example_params();
        if let Some(f) = r.attempt("n=4 family", families::family_n4(&a, &b)) {
            let grid = families::default_grid();
            let vols = dual::pseudo_family_volumes(&f, &grid).expect("valid grid");
            let spread = relative_spread(&vols);
            r.check(
                "n=4: V_4(Q(t)) not constant",
                spread > VARIATION_THRESHOLD,
                format!("relative spread {spread:e}"),
            );
        }
    }
    let odd: Vec<usize> = match n {
        Some(k) if k >= 5 => vec![k],
        Some(_) => vec![],
        None => vec![5, 7],
    };
    for k in odd {
        let Some(spread) = dual_volume_spread(r, k, seed) else {
            continue;
        };
        if k % 2 == 1 {
            r.check(
                format!("n={k}: V_n(Q(t)) not constant"),
                spread > VARIATION_THRESHOLD,
                format!("relative spread {spread:e}"),
            );
        } else {
            r.check(
                format!("n={k}: V_n(Q(t)) constant for this even-n family"),
                spread <= TRANSFER_TOLERANCE,
                format!("relative spread {spread:e}"),
            );
        }
    }
    if n.is_none() {
        if let Some(spread) = dual_volume_spread(r, 6, seed) {
            r.check(
                "n=6: V_n(Q(t)) constant for this even-n family",
                spread <= TRANSFER_TOLERANCE,
                format!("relative spread {spread:e}"),
            );
        }
    }
}

pub fn theorem_1_6(r: &mut CheckReport) {
    let (a, b) = example_params();
    let Some(f) = r.attempt("n=5 family", families::family_n5(&a, &b)) else {
        return;
    };
    let Some(report) = sweep_checks(r, &f, "n=5") else {
        return;
    };
    let nonzero = report.per_t.iter().all(|p| !p.det.is_zero());
    let p_ok = report.per_t.iter().all(|p| p.signature.positive >= 2);
    r.check(
        "n=5: C(t) nonsingular with p >= 2 on the grid",
        nonzero && p_ok,
        report
            .verdicts
            .signature_trace
            .iter()
            .map(|s| s.to_string())
            .collect::<Vec<_>>()
            .join(" "),
    );
    let vols = dual::pseudo_family_volumes(&f, &report.t_grid).expect("valid grid");
    let spread = relative_spread(&vols);
    r.check(
        "n=5: V_5(Q(t)) not constant",
        spread > VARIATION_THRESHOLD,
        format!("relative spread {spread:e}"),
    );
    let one = Rational::one();
    let worst = report
        .t_grid
        .iter()
        .filter(|t| **t == one)
        .map(|t| realize::realize(&f.at(t).expect("t > 0")).map(|x| x.max_gram_error()))
        .next();
    r.check(
        "n=5: C(1) realizes with round-trip error within tolerance",
        matches!(worst, Some(Ok(e)) if e <= ROUND_TRIP_TOLERANCE),
        format!("{worst:?}"),
    );
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn bundle_names_round_trip() {
        for b in Bundle::ALL {
            assert_eq!(b.name().parse::<Bundle>().unwrap(), b);
        }
        assert!("lemma-9.9".parse::<Bundle>().is_err());
    }

    #[test]
    fn fit_recovers_coefficients() {
        let f = |t: &Rational| int(3) * t - int(5) / t;
        let pts: Vec<(Rational, Rational)> = [ratio(1, 2), int(1), int(2)]
            .iter()
            .map(|t| (t.clone(), f(t)))
            .collect();
        assert_eq!(fits_t_plus_inverse(&pts), Some((int(3), int(-5))));
        let bad = vec![(int(1), int(1)), (int(2), int(1)), (int(3), int(2))];
        assert_eq!(fits_t_plus_inverse(&bad), None);
    }

    #[test]
    fn cheap_bundles_pass() {
        let params = CheckParams { n: None, seed: 1 };
        for b in [
            Bundle::Lemma3_2,
            Bundle::Lemma3_4,
            Bundle::Theorem1_2,
            Bundle::Theorem1_6,
        ] {
            let r = run_bundle(b, &params);
            assert!(r.passed, "{}", r.to_json());
        }
        let r = run_bundle(
            Bundle::Theorem4_7,
            &CheckParams {
                n: Some(5),
                seed: 1,
            },
        );
        assert!(r.passed, "{}", r.to_json());
    }
}
