//! Numerical search for Euclidean members of `F0` among sums `A + B` with
//! `A, B` in the set D.
//!
//! Every member of D has the form `D C D` with `C` a symmetric sign matrix
//! (unit diagonal, entries `+-1`) and `D = diag(d)` subject to
//! `(C d)_i = 0` wherever `d_i != 0`. Sign matrices are enumerated up to
//! simultaneous row/column permutation; they correspond to graphs whose edges
//! are the `-1` entries.

use std::collections::{BTreeMap, BTreeSet};
use std::fs::{File, OpenOptions};
use std::io::{BufRead, BufReader, Write};
use std::path::Path;

use num_traits::{Signed, Zero};
use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::exactmat::{self, int, to_f64, Pivot, Rational, SymMatrix};
use crate::families;
use crate::realize::format_f64;

/// Largest `n` for which sign matrices are enumerated (order `n + 1 = 8`).
pub const MAX_ENUMERATED_N: usize = 7;
/// Largest `n` the search accepts at all (adjacency rows are `u32`).
pub const MAX_SEARCH_N: usize = 31;

#[derive(Debug, thiserror::Error)]
pub enum SearchError {
    #[error("n = {n} is too large; at most {max} is supported")]
    TooLarge { n: usize, max: usize },
    #[error("n = {0} is too small; need n >= {1}")]
    TooSmall(usize, usize),
    #[error("no admissible D stratum found for n = {0}")]
    NoStrata(usize),
    #[error("result log I/O: {0}")]
    Io(#[from] std::io::Error),
    #[error("malformed result log line {line}: {message}")]
    Log { line: usize, message: String },
}

/// Symmetric `+-1` matrix with unit diagonal, stored as the adjacency rows of
/// the graph of its `-1` entries.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct SignMatrix {
    adjacency: Vec<u32>,
}

impl SignMatrix {
    pub fn order(&self) -> usize {
        self.adjacency.len()
    }

    pub fn from_adjacency(adjacency: Vec<u32>) -> Self {
        SignMatrix { adjacency }
    }

    /// Entry `(i, j)`: `+1` on the diagonal and for non-adjacent pairs.
    pub fn entry(&self, i: usize, j: usize) -> i64 {
        if i != j && self.adjacency[i] >> j & 1 == 1 {
            -1
        } else {
            1
        }
    }

    pub fn to_sym(&self) -> SymMatrix {
        SymMatrix::from_fn(self.order(), |i, j| int(self.entry(i, j)))
    }

    /// `C` restricted to the given indices.
    pub fn restricted(&self, indices: &[usize]) -> SignMatrix {
        let adjacency = indices
            .iter()
            .map(|&i| {
                indices
                    .iter()
                    .enumerate()
                    .filter(|&(_, &j)| j != i && self.adjacency[i] >> j & 1 == 1)
                    .fold(0u32, |acc, (b, _)| acc | 1 << b)
            })
            .collect();
        SignMatrix { adjacency }
    }

    /// Canonical representative of the permutation class.
    pub fn canonical(&self) -> SignMatrix {
        let perm = canonical_labeling(&self.adjacency);
        permute(&self.adjacency, &perm)
    }

    pub fn permuted(&self, perm: &[usize]) -> SignMatrix {
        permute(&self.adjacency, perm)
    }

    pub fn rows(&self) -> Vec<Vec<i64>> {
        let n = self.order();
        (0..n)
            .map(|i| (0..n).map(|j| self.entry(i, j)).collect())
            .collect()
    }
}

/// Vertex `k` of the result is vertex `perm[k]` of the input.
fn permute(adj: &[u32], perm: &[usize]) -> SignMatrix {
    let adjacency = perm
        .iter()
        .map(|&v| {
            perm.iter()
                .enumerate()
                .filter(|&(_, &w)| adj[v] >> w & 1 == 1)
                .fold(0u32, |acc, (b, _)| acc | 1 << b)
        })
        .collect();
    SignMatrix { adjacency }
}

/// Upper-triangle bit string of the relabeled graph, row-major.
fn code(adj: &[u32], perm: &[usize]) -> u64 {
    let n = perm.len();
    let mut out = 0u64;
    for i in 0..n {
        for j in i + 1..n {
            out = out << 1 | u64::from(adj[perm[i]] >> perm[j] & 1);
        }
    }
    out
}

/// Stable color refinement; colors are ranks of sorted signatures, so the
/// final coloring is isomorphism invariant.
fn refine(adj: &[u32]) -> Vec<usize> {
    let n = adj.len();
    let mut colors = vec![0usize; n];
    let mut count = 1;
    loop {
        let sigs: Vec<(usize, Vec<usize>)> = (0..n)
            .map(|v| {
                let mut nb: Vec<usize> = (0..n)
                    .filter(|&w| adj[v] >> w & 1 == 1)
                    .map(|w| colors[w])
                    .collect();
                nb.sort_unstable();
                (colors[v], nb)
            })
            .collect();
        let distinct: Vec<&(usize, Vec<usize>)> =
            sigs.iter().collect::<BTreeSet<_>>().into_iter().collect();
        let next: Vec<usize> = sigs
            .iter()
            .map(|s| distinct.binary_search(&s).expect("present"))
            .collect();
        colors = next;
        if distinct.len() == count {
            return colors;
        }
        count = distinct.len();
    }
}

/// Lexicographically smallest code over all orderings that list the
/// refinement cells in color order.
fn canonical_labeling(adj: &[u32]) -> Vec<usize> {
    let colors = refine(adj);
    let ncolors = colors.iter().max().map_or(0, |c| c + 1);
    let cells: Vec<Vec<usize>> = (0..ncolors)
        .map(|c| (0..adj.len()).filter(|&v| colors[v] == c).collect())
        .collect();
    let mut best: Option<(u64, Vec<usize>)> = None;
    let mut current = Vec::with_capacity(adj.len());
    search_cells(adj, &cells, 0, &mut current, &mut best);
    best.expect("at least one ordering").1
}

fn search_cells(
    adj: &[u32],
    cells: &[Vec<usize>],
    cell: usize,
    current: &mut Vec<usize>,
    best: &mut Option<(u64, Vec<usize>)>,
) {
    if cell == cells.len() {
        let c = code(adj, current);
        if best.as_ref().is_none_or(|(b, _)| c < *b) {
            *best = Some((c, current.clone()));
        }
        return;
    }
    let mut members = cells[cell].clone();
    permutations(&mut members, 0, &mut |p| {
        let len = current.len();
        current.extend_from_slice(p);
        search_cells(adj, cells, cell + 1, current, best);
        current.truncate(len);
    });
}

fn permutations(items: &mut Vec<usize>, k: usize, f: &mut dyn FnMut(&[usize])) {
    if k == items.len() {
        f(items);
        return;
    }
    for i in k..items.len() {
        items.swap(k, i);
        permutations(items, k + 1, f);
        items.swap(k, i);
    }
}

/// All `(n+1) x (n+1)` sign matrices up to simultaneous permutation, in
/// ascending canonical order.
pub fn enumerate_h(n: usize) -> Result<Vec<SignMatrix>, SearchError> {
    if n > MAX_ENUMERATED_N {
        return Err(SearchError::TooLarge {
            n,
            max: MAX_ENUMERATED_N,
        });
    }
    let mut classes: BTreeSet<SignMatrix> = BTreeSet::new();
    classes.insert(SignMatrix { adjacency: vec![0] });
    for size in 1..=n {
        let mut next = BTreeSet::new();
        for g in &classes {
            for subset in 0u32..(1 << size) {
                let mut adjacency: Vec<u32> = g
                    .adjacency
                    .iter()
                    .enumerate()
                    .map(|(v, &row)| row | (subset >> v & 1) << size)
                    .collect();
                adjacency.push(subset);
                next.insert(SignMatrix { adjacency }.canonical());
            }
        }
        classes = next;
    }
    Ok(classes.into_iter().collect())
}

/// A linear family of kernel vectors `d` for one sign matrix. With
/// `zero_index = Some(k)`, `d_k = 0` and `d` restricted to the other indices
/// lies in the kernel of `C` with row and column `k` removed.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DStratum {
    pub sign: SignMatrix,
    pub zero_index: Option<usize>,
    /// Kernel basis, already expanded to full length (zero at `zero_index`).
    pub basis: Vec<Vec<Rational>>,
}

impl DStratum {
    /// `D C D` for `d = sum_k lambda_k basis_k`.
    pub fn member(&self, lambda: &[Rational]) -> SymMatrix {
        let d = self.vector(lambda);
        self.sign
            .to_sym()
            .diagonal_congruence(&d)
            .expect("lengths agree")
    }

    pub fn vector(&self, lambda: &[Rational]) -> Vec<Rational> {
        let order = self.sign.order();
        let mut d = vec![Rational::zero(); order];
        for (coef, b) in lambda.iter().zip(&self.basis) {
            for (x, y) in d.iter_mut().zip(b) {
                *x += coef * y;
            }
        }
        d
    }

    /// `d_i != 0` wherever the stratum requires it.
    pub fn is_admissible_vector(&self, d: &[Rational]) -> bool {
        d.iter()
            .enumerate()
            .all(|(i, x)| Some(i) == self.zero_index || !x.is_zero())
    }
}

fn stratum(c: &SignMatrix, zero_index: Option<usize>) -> Option<DStratum> {
    let order = c.order();
    let keep: Vec<usize> = (0..order).filter(|&i| Some(i) != zero_index).collect();
    if keep.is_empty() {
        return None;
    }
    let sub = c.restricted(&keep).to_sym();
    let kernel = exactmat::null_space(&sub);
    // Admissible when no kept coordinate vanishes on the whole kernel.
    let covers = (0..keep.len()).all(|i| kernel.iter().any(|v| !v[i].is_zero()));
    if kernel.is_empty() || !covers {
        return None;
    }
    let basis = kernel
        .into_iter()
        .map(|v| {
            let mut full = vec![Rational::zero(); order];
            for (k, &i) in keep.iter().enumerate() {
                full[i] = v[k].clone();
            }
            full
        })
        .collect();
    Some(DStratum {
        sign: c.clone(),
        zero_index,
        basis,
    })
}

/// Admissible strata of D members built on `c`: the all-nonzero stratum and
/// the strata with exactly one zero coordinate.
pub fn d_members_from(c: &SignMatrix) -> Vec<DStratum> {
    std::iter::once(None)
        .chain((0..c.order()).map(Some))
        .filter_map(|z| stratum(c, z))
        .collect()
}

/// Exact positive semidefiniteness: no negative congruence pivot.
pub fn is_psd(m: &SymMatrix) -> bool {
    exactmat::signature(m).negative == 0
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub enum Classification {
    #[serde(rename = "IN_F0")]
    InF0,
    #[serde(rename = "NEAR_MISS")]
    NearMiss,
    #[serde(rename = "REJECT")]
    Reject,
}

/// Smallest congruence pivot of `m` relative to its largest entry; a
/// `[[0, b], [b, 0]]` block counts as `-|b|`.
pub fn margin(m: &SymMatrix) -> f64 {
    let scale = to_f64(&m.max_abs_entry());
    if scale == 0.0 {
        return 0.0;
    }
    exactmat::congruence_diagonalize(m)
        .pivots
        .iter()
        .map(|p| match p {
            Pivot::Single(v) => to_f64(v),
            Pivot::Pair(b) => -to_f64(&b.abs()),
        })
        .fold(f64::INFINITY, f64::min)
        .min(0.0)
        / scale
}

/// `IN_F0` for Euclidean centered simplices, `NEAR_MISS` for members of U0
/// with exactly one negative eigenvalue, `REJECT` otherwise.
pub fn classify(u: &SymMatrix) -> Classification {
    if families::membership_f0(u) && families::membership_u0(u) {
        return Classification::InF0;
    }
    if families::membership_u0(u) && exactmat::signature(u).negative == 1 {
        return Classification::NearMiss;
    }
    Classification::Reject
}

#[derive(Clone, Debug, PartialEq)]
pub struct SearchHit {
    pub index: u64,
    pub a: SymMatrix,
    pub b: SymMatrix,
    pub classification: Classification,
    pub margin: f64,
}

/// Outcome of a sampling run. Only non-`REJECT` samples are kept as hits.
#[derive(Clone, Debug, PartialEq)]
pub struct SearchRun {
    pub n: usize,
    pub seed: u64,
    pub start: u64,
    pub samples: u64,
    pub hits: Vec<SearchHit>,
    pub counts: BTreeMap<Classification, u64>,
    /// Pairs discarded by the rank condition `max(rank A, rank B) >= ceil(n/2)`.
    pub rank_filtered: u64,
    /// Histogram of `rank` over every sampled nonzero D member.
    pub member_ranks: BTreeMap<usize, u64>,
}

/// Precomputed admissible strata for one `n`.
pub struct StrataCatalog {
    n: usize,
    strata: Vec<DStratum>,
}

impl StrataCatalog {
    /// Every admissible stratum of every sign-matrix class; `n <= 7`.
    pub fn enumerate(n: usize) -> Result<Self, SearchError> {
        let strata: Vec<DStratum> = enumerate_h(n)?.iter().flat_map(d_members_from).collect();
        if strata.is_empty() {
            return Err(SearchError::NoStrata(n));
        }
        Ok(StrataCatalog { n, strata })
    }

    pub fn len(&self) -> usize {
        self.strata.len()
    }

    pub fn is_empty(&self) -> bool {
        self.strata.is_empty()
    }

    pub fn strata(&self) -> &[DStratum] {
        &self.strata
    }

    fn pick(&self, rng: &mut ChaCha8Rng) -> DStratum {
        if self.strata.is_empty() {
            return random_stratum(self.n, rng);
        }
        self.strata[rng.gen_range(0..self.strata.len())].clone()
    }
}

/// Draws random sign matrices until one has an admissible stratum.
fn random_stratum(n: usize, rng: &mut ChaCha8Rng) -> DStratum {
    loop {
        let order = n + 1;
        let mut adjacency = vec![0u32; order];
        for i in 0..order {
            for j in i + 1..order {
                if rng.gen_bool(0.5) {
                    adjacency[i] |= 1 << j;
                    adjacency[j] |= 1 << i;
                }
            }
        }
        let strata = d_members_from(&SignMatrix { adjacency });
        if !strata.is_empty() {
            return strata[rng.gen_range(0..strata.len())].clone();
        }
    }
}

/// Kernel coordinates: integers in `[-20, 20] \ {0}`.
fn draw_coefficient(rng: &mut ChaCha8Rng) -> Rational {
    let v = rng.gen_range(1..=20);
    int(if rng.gen_bool(0.5) { v } else { -v })
}

fn draw_member(catalog: &StrataCatalog, rng: &mut ChaCha8Rng) -> SymMatrix {
    let s = catalog.pick(rng);
    loop {
        let lambda: Vec<Rational> = s.basis.iter().map(|_| draw_coefficient(rng)).collect();
        if s.is_admissible_vector(&s.vector(&lambda)) {
            let mut perm: Vec<usize> = (0..catalog.n + 1).collect();
            perm.shuffle(rng);
            return s.member(&lambda).permuted(&perm).expect("full permutation");
        }
    }
}

/// Per-sample generator: stream `index` of the ChaCha8 generator keyed by
/// `seed`, so each sample is reproducible on its own.
fn sample_rng(seed: u64, index: u64) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(index);
    rng
}

/// Runs samples `start..start + samples`.
pub fn sample_range(catalog: &StrataCatalog, start: u64, samples: u64, seed: u64) -> SearchRun {
    let n = catalog.n;
    let needed = n.div_ceil(2);
    let mut run = SearchRun {
        n,
        seed,
        start,
        samples,
        hits: Vec::new(),
        counts: BTreeMap::new(),
        rank_filtered: 0,
        member_ranks: BTreeMap::new(),
    };
    for index in start..start + samples {
        let mut rng = sample_rng(seed, index);
        let a = draw_member(catalog, &mut rng);
        let b = draw_member(catalog, &mut rng);
        let (ra, rb) = (exactmat::rank(&a), exactmat::rank(&b));
        *run.member_ranks.entry(ra).or_default() += 1;
        *run.member_ranks.entry(rb).or_default() += 1;
        let class = if ra.max(rb) < needed {
            run.rank_filtered += 1;
            Classification::Reject
        } else {
            let u = a.checked_add(&b).expect("same order");
            let class = classify(&u);
            if class != Classification::Reject {
                run.hits.push(SearchHit {
                    index,
                    margin: margin(&u),
                    a,
                    b,
                    classification: class,
                });
            }
            class
        };
        *run.counts.entry(class).or_default() += 1;
    }
    run
}

fn catalog_for(n: usize) -> Result<StrataCatalog, SearchError> {
    if n < 4 {
        return Err(SearchError::TooSmall(n, 4));
    }
    if n > MAX_SEARCH_N {
        return Err(SearchError::TooLarge {
            n,
            max: MAX_SEARCH_N,
        });
    }
    if n <= MAX_ENUMERATED_N {
        StrataCatalog::enumerate(n)
    } else {
        Ok(StrataCatalog {
            n,
            strata: Vec::new(),
        })
    }
}

/// Seeded sampling over D strata. Sign matrices are enumerated for
/// `n <= 7` and drawn at random beyond that.
pub fn sample_and_test(n: usize, samples: u64, seed: u64) -> Result<SearchRun, SearchError> {
    Ok(sample_range(&catalog_for(n)?, 0, samples, seed))
}

/// Support-wise rank probe: for every sign-matrix class on `n + 1` indices
/// and every support `S` on which some kernel vector of `C_S` is nowhere
/// zero, the D members supported on `S` all have rank `rank(C_S)`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RankProbe {
    pub n: usize,
    pub supports_checked: usize,
    pub max_rank: usize,
    /// `(class, support)` pairs with rank at least 2.
    pub witnesses: Vec<(SignMatrix, Vec<usize>)>,
}

pub fn rank_probe(n: usize) -> Result<RankProbe, SearchError> {
    let classes = enumerate_h(n)?;
    let order = n + 1;
    let mut probe = RankProbe {
        n,
        supports_checked: 0,
        max_rank: 0,
        witnesses: Vec::new(),
    };
    for c in &classes {
        for k in 2..=order {
            for support in exactmat::combinations(order, k) {
                let sub = c.restricted(&support);
                let Some(_) = stratum(&sub, None) else {
                    continue;
                };
                probe.supports_checked += 1;
                let r = exactmat::rank(&sub.to_sym());
                probe.max_rank = probe.max_rank.max(r);
                if r >= 2 {
                    probe.witnesses.push((c.clone(), support));
                }
            }
        }
    }
    Ok(probe)
}

/// One line of the JSON-lines result log.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "type", rename_all = "snake_case")]
pub enum LogRecord {
    Hit {
        n: usize,
        seed: u64,
        index: u64,
        classification: Classification,
        margin: String,
        #[serde(rename = "A")]
        a: SymMatrix,
        #[serde(rename = "B")]
        b: SymMatrix,
    },
    /// Written after each run; `next_index` is where a resumed run starts.
    Cursor {
        n: usize,
        seed: u64,
        next_index: u64,
        counts: BTreeMap<Classification, u64>,
        rank_filtered: u64,
    },
}

impl SearchRun {
    pub fn records(&self) -> Vec<LogRecord> {
        let mut out: Vec<LogRecord> = self
            .hits
            .iter()
            .map(|h| LogRecord::Hit {
                n: self.n,
                seed: self.seed,
                index: h.index,
                classification: h.classification,
                margin: format_f64(h.margin),
                a: h.a.clone(),
                b: h.b.clone(),
            })
            .collect();
        out.push(LogRecord::Cursor {
            n: self.n,
            seed: self.seed,
            next_index: self.start + self.samples,
            counts: self.counts.clone(),
            rank_filtered: self.rank_filtered,
        });
        out
    }

    /// Deterministic JSON-lines rendering of [`SearchRun::records`].
    pub fn to_jsonl(&self) -> String {
        self.records()
            .iter()
            .map(|r| serde_json::to_string(r).expect("serializable") + "\n")
            .collect()
    }

    pub fn count(&self, c: Classification) -> u64 {
        self.counts.get(&c).copied().unwrap_or(0)
    }
}

pub fn read_log(path: &Path) -> Result<Vec<LogRecord>, SearchError> {
    if !path.exists() {
        return Ok(Vec::new());
    }
    let reader = BufReader::new(File::open(path)?);
    let mut out = Vec::new();
    for (k, line) in reader.lines().enumerate() {
        let line = line?;
        if line.trim().is_empty() {
            continue;
        }
        out.push(serde_json::from_str(&line).map_err(|e| SearchError::Log {
            line: k + 1,
            message: e.to_string(),
        })?);
    }
    Ok(out)
}

/// Resume point for `(n, seed)`: the last cursor's `next_index`, or 0.
pub fn resume_index(records: &[LogRecord], n: usize, seed: u64) -> u64 {
    records
        .iter()
        .rev()
        .find_map(|r| match r {
            LogRecord::Cursor {
                n: rn,
                seed: rs,
                next_index,
                ..
            } if *rn == n && *rs == seed => Some(*next_index),
            _ => None,
        })
        .unwrap_or(0)
}

/// Runs `samples` more samples for `(n, seed)`, continuing after the last
/// cursor in the log, and appends hit and cursor records.
pub fn append_run(
    path: &Path,
    n: usize,
    samples: u64,
    seed: u64,
) -> Result<SearchRun, SearchError> {
    let start = resume_index(&read_log(path)?, n, seed);
    let run = sample_range(&catalog_for(n)?, start, samples, seed);
    let mut file = OpenOptions::new().create(true).append(true).open(path)?;
    file.write_all(run.to_jsonl().as_bytes())?;
    Ok(run)
}

#[cfg(test)]
mod tests {
    use super::*;

    /// Orbit count by minimizing over every permutation.
    fn brute_force_classes(order: usize) -> usize {
        let pairs: Vec<(usize, usize)> = (0..order)
            .flat_map(|i| (i + 1..order).map(move |j| (i, j)))
            .collect();
        let mut all_perms = Vec::new();
        let mut items: Vec<usize> = (0..order).collect();
        permutations(&mut items, 0, &mut |p| all_perms.push(p.to_vec()));
        let mut seen = BTreeSet::new();
        for mask in 0u32..(1 << pairs.len()) {
            let mut adj = vec![0u32; order];
            for (b, &(i, j)) in pairs.iter().enumerate() {
                if mask >> b & 1 == 1 {
                    adj[i] |= 1 << j;
                    adj[j] |= 1 << i;
                }
            }
            let min = all_perms.iter().map(|p| code(&adj, p)).min().unwrap();
            seen.insert(min);
        }
        seen.len()
    }

    #[test]
    fn class_counts() {
        let counts: Vec<usize> = (1..=6).map(|n| enumerate_h(n).unwrap().len()).collect();
        assert_eq!(counts, vec![2, 4, 11, 34, 156, 1044]);
        assert_eq!(brute_force_classes(3), 4);
        assert_eq!(brute_force_classes(4), 11);
        assert!(matches!(enumerate_h(8), Err(SearchError::TooLarge { .. })));
    }

    #[test]
    fn all_ones_present() {
        for n in 1..=5 {
            let all_ones = SignMatrix::from_adjacency(vec![0; n + 1]);
            assert!(enumerate_h(n).unwrap().contains(&all_ones));
        }
    }

    #[test]
    fn canonical_is_permutation_invariant() {
        let g = SignMatrix::from_adjacency(vec![0b0110, 0b0001, 0b1001, 0b0100]);
        let c = g.canonical();
        let mut items = vec![0, 1, 2, 3];
        permutations(&mut items, 0, &mut |p| {
            assert_eq!(g.permuted(p).canonical(), c)
        });
    }

    #[test]
    fn all_ones_strata_are_rank_one() {
        let c = SignMatrix::from_adjacency(vec![0; 4]);
        let strata = d_members_from(&c);
        let full = strata.iter().find(|s| s.zero_index.is_none()).unwrap();
        assert_eq!(full.basis.len(), 3);
        let a = full.member(&[int(1), int(2), int(-1)]);
        assert!(families::membership_d(&a));
        assert_eq!(exactmat::rank(&a), 1);
    }

    #[test]
    fn block_matrix_stratum() {
        let (c6, _) = families::c_block_matrix(3).unwrap();
        let adjacency = (0..6)
            .map(|i| {
                (0..6)
                    .filter(|&j| c6.get(i, j).is_negative())
                    .fold(0u32, |acc, j| acc | 1 << j)
            })
            .collect();
        let strata = d_members_from(&SignMatrix::from_adjacency(adjacency));
        let full = strata.iter().find(|s| s.zero_index.is_none()).unwrap();
        assert_eq!(full.basis.len(), 3);
        for v in &full.basis {
            for k in 0..3 {
                assert_eq!(v[2 * k], -v[2 * k + 1].clone());
            }
        }
    }

    #[test]
    fn full_rank_sign_matrix_has_only_zero_strata() {
        // All -1 off the diagonal: full rank for order 3, while each 2x2
        // restriction [[1,-1],[-1,1]] admits (1,1).
        let c = SignMatrix::from_adjacency(vec![0b110, 0b101, 0b011]);
        let strata = d_members_from(&c);
        assert_eq!(strata.len(), 3);
        assert!(strata.iter().all(|s| s.zero_index.is_some()));
    }

    #[test]
    fn no_admissible_strata() {
        // All -1 off the diagonal at order 5: it and every order-4
        // restriction are nonsingular.
        let c = SignMatrix::from_adjacency((0..5).map(|i| 0b11111 & !(1 << i)).collect());
        assert!(d_members_from(&c).is_empty());
    }

    #[test]
    fn psd_examples() {
        assert!(is_psd(&SymMatrix::from_diagonal(&[int(1), int(0)])));
        assert!(!is_psd(&SymMatrix::from_diagonal(&[
            int(1),
            exactmat::ratio(-1, 1000)
        ])));
    }

    #[test]
    fn deterministic_runs() {
        let a = sample_and_test(5, 50, 3).unwrap();
        let b = sample_and_test(5, 50, 3).unwrap();
        assert_eq!(a.to_jsonl(), b.to_jsonl());
        assert_eq!(a.counts.values().sum::<u64>(), 50);
    }

    #[test]
    fn resumed_run_matches_single_run() {
        let catalog = StrataCatalog::enumerate(4).unwrap();
        let whole = sample_range(&catalog, 0, 40, 9);
        let first = sample_range(&catalog, 0, 25, 9);
        let second = sample_range(&catalog, 25, 15, 9);
        let joined: Vec<u64> = first
            .hits
            .iter()
            .chain(&second.hits)
            .map(|h| h.index)
            .collect();
        assert_eq!(
            joined,
            whole.hits.iter().map(|h| h.index).collect::<Vec<_>>()
        );
        let mut ranks = first.member_ranks.clone();
        for (k, v) in &second.member_ranks {
            *ranks.entry(*k).or_default() += v;
        }
        assert_eq!(ranks, whole.member_ranks);
    }
}
