//! Exhaustive ground truth for small cubes: `θ(n, k)`, `θ(n, k, t)`, the
//! `n = 5` table, and the minimum cycle wirelength for `n <= 3`.
//!
//! Subsets of `V(Q_n)` (`n <= 5`) are single-word masks. k-subsets are
//! walked by the Gosper successor; the rank space is cut into contiguous
//! chunks via colex unranking so workers never share state.

use num_traits::Signed;
use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::Serialize;
use std::io::Write;
use std::sync::atomic::{AtomicU64, Ordering};
use std::sync::Arc;

use crate::cube::{mask_boundary, mask_type, theta_opt};
use crate::embed::{wirelength, Embedding, Host};
use crate::error::{Error, Result};
use crate::report::{Check, CheckBuilder, Report};
use crate::takagi::{half_type_pairs, Parabola};
use crate::{Rational, Scalar};

/// Largest dimension the subset scans accept.
pub const MAX_SCAN_DIM: u32 = 5;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum Symmetry {
    /// Every k-subset.
    None,
    /// Only subsets containing vertex 0 (translations preserve θ and type).
    FixVertexZero,
    /// As `FixVertexZero`, and sizes above `2^{n-1}` go through the complement.
    Complement,
}

#[derive(Clone, Debug)]
pub struct ScanConfig {
    pub workers: usize,
    pub symmetry: Symmetry,
    /// Incremented by the number of subsets visited, chunk by chunk.
    pub progress: Option<Arc<AtomicU64>>,
}

impl Default for ScanConfig {
    fn default() -> Self {
        ScanConfig {
            workers: std::thread::available_parallelism().map_or(1, |p| p.get()),
            symmetry: Symmetry::Complement,
            progress: None,
        }
    }
}

impl ScanConfig {
    pub fn new(workers: usize, symmetry: Symmetry) -> Result<Self> {
        if workers == 0 {
            return Err(Error::Usage("worker count must be at least 1".into()));
        }
        Ok(ScanConfig {
            workers,
            symmetry,
            progress: None,
        })
    }

    pub fn with_progress(mut self, counter: Arc<AtomicU64>) -> Self {
        self.progress = Some(counter);
        self
    }

    fn pool(&self) -> Result<rayon::ThreadPool> {
        if self.workers == 0 {
            return Err(Error::Usage("worker count must be at least 1".into()));
        }
        rayon::ThreadPoolBuilder::new()
            .num_threads(self.workers)
            .build()
            .map_err(|e| Error::Usage(format!("thread pool: {e}")))
    }
}

fn binomial_table() -> [[u64; 65]; 65] {
    let mut c = [[0u64; 65]; 65];
    for n in 0..65 {
        c[n][0] = 1;
        for k in 1..=n {
            c[n][k] = c[n - 1][k - 1] + c[n - 1][k];
        }
    }
    c
}

pub fn binomial(n: u32, k: u32) -> u64 {
    if k > n || n > 64 {
        return 0;
    }
    binomial_table()[n as usize][k as usize]
}

/// The `rank`-th `r`-subset of `{0, ..., 63}` in colex order.
fn colex_unrank(mut rank: u64, r: u32, c: &[[u64; 65]; 65]) -> u64 {
    let mut mask = 0u64;
    for i in (1..=r as usize).rev() {
        let mut pos = i - 1;
        while c[pos + 1][i] <= rank {
            pos += 1;
        }
        rank -= c[pos][i];
        mask |= 1 << pos;
    }
    mask
}

#[inline]
fn gosper_next(x: u64) -> u64 {
    let low = x & x.wrapping_neg();
    let ripple = x + low;
    ripple | (((ripple ^ x) >> 2) >> low.trailing_zeros())
}

/// Byte-table evaluation of `(type, boundary)` for `3 <= n <= 5`.
///
/// Each table entry packs, in 8-bit lanes, the popcount of a byte, its
/// counts on the upper half of axes 0..2, and the boundary edges along those
/// axes that stay inside the byte. Axes 3 and 4 pair whole bytes.
struct ByteKernel {
    n: u32,
    table: [u64; 256],
}

impl ByteKernel {
    fn new(n: u32) -> Self {
        debug_assert!((3..=5).contains(&n));
        let mut table = [0u64; 256];
        for (b, entry) in table.iter_mut().enumerate() {
            let b = b as u32;
            let internal = ((b ^ (b >> 1)) & 0x55).count_ones()
                + ((b ^ (b >> 2)) & 0x33).count_ones()
                + ((b ^ (b >> 4)) & 0x0f).count_ones();
            let lanes = [
                b.count_ones(),
                (b & 0xaa).count_ones(),
                (b & 0xcc).count_ones(),
                (b & 0xf0).count_ones(),
                internal,
            ];
            *entry = lanes
                .iter()
                .enumerate()
                .map(|(i, &v)| (v as u64) << (8 * i))
                .sum();
        }
        ByteKernel { n, table }
    }

    #[inline]
    fn pop(&self, byte: u64) -> u32 {
        (self.table[byte as usize] & 0xff) as u32
    }

    #[inline]
    fn eval(&self, mask: u64, k: u32) -> (u32, u32) {
        let b = [
            mask & 0xff,
            (mask >> 8) & 0xff,
            (mask >> 16) & 0xff,
            (mask >> 24) & 0xff,
        ];
        let sum = self.table[b[0] as usize]
            + self.table[b[1] as usize]
            + self.table[b[2] as usize]
            + self.table[b[3] as usize];
        let lane = |i: u32| ((sum >> (8 * i)) & 0xff) as u32;
        let mut boundary = lane(4);
        let mut best = k;
        for i in 1..=3 {
            let u = lane(i);
            best = best.min(u).min(k - u);
        }
        if self.n >= 4 {
            boundary += self.pop(b[0] ^ b[1]) + self.pop(b[2] ^ b[3]);
            let u = self.pop(b[1]) + self.pop(b[3]);
            best = best.min(u).min(k - u);
        }
        if self.n >= 5 {
            boundary += self.pop(b[0] ^ b[2]) + self.pop(b[1] ^ b[3]);
            let u = self.pop(b[2]) + self.pop(b[3]);
            best = best.min(u).min(k - u);
        }
        (best, boundary)
    }
}

/// Minimum boundary per type over all `k`-subsets of `Q_n`, under the given
/// symmetry (never `Complement`, which is resolved by the caller).
fn scan_masks(n: u32, k: u32, fix_zero: bool, cfg: &ScanConfig) -> Result<Vec<u32>> {
    let order = 1u32 << n;
    let slots = (k as usize) / 2 + 1;
    let mut best = vec![u32::MAX; slots];
    if k == 0 {
        best[0] = 0;
        return Ok(best);
    }
    let (free, r, shift, base) = if fix_zero {
        (order - 1, k - 1, 1, 1u64)
    } else {
        (order, k, 0, 0)
    };
    let c = binomial_table();
    let total = c[free as usize][r as usize];
    let chunks = (cfg.workers as u64 * 64).min(total).max(1);
    let per = total.div_ceil(chunks);
    let progress = cfg.progress.clone();
    let kernel = (n >= 3).then(|| ByteKernel::new(n));
    let pool = cfg.pool()?;
    let merged = pool.install(|| {
        (0..chunks)
            .into_par_iter()
            .map(|chunk| {
                let start = chunk * per;
                let end = (start + per).min(total);
                let mut local = vec![u32::MAX; slots];
                if start >= end {
                    return local;
                }
                let mut sub = colex_unrank(start, r, &c);
                for step in start..end {
                    let mask = (sub << shift) | base;
                    let (t, b) = match &kernel {
                        Some(kern) => kern.eval(mask, k),
                        None => (mask_type(n, mask, k), mask_boundary(n, mask)),
                    };
                    let t = t as usize;
                    if b < local[t] {
                        local[t] = b;
                    }
                    if step + 1 < end {
                        sub = if r == 0 { 0 } else { gosper_next(sub) };
                    }
                }
                if let Some(p) = &progress {
                    p.fetch_add(end - start, Ordering::Relaxed);
                }
                local
            })
            .reduce(
                || vec![u32::MAX; slots],
                |a, b| a.iter().zip(&b).map(|(x, y)| *x.min(y)).collect(),
            )
    });
    best.copy_from_slice(&merged);
    Ok(best)
}

fn check_scan_args(n: u32, k: u64) -> Result<()> {
    if n == 0 || n > MAX_SCAN_DIM {
        return Err(Error::BudgetExceeded(format!(
            "exhaustive scans support 1 <= n <= {MAX_SCAN_DIM}, got n={n}"
        )));
    }
    if k > 1 << n {
        return Err(Error::Usage(format!("k={k} exceeds 2^{n}")));
    }
    Ok(())
}

/// `θ(n, k, t)` for every `t`, from one exhaustive scan.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct KtTable {
    pub n: u32,
    pub k: u64,
    /// `by_type[t]` is `θ(n, k, t)`, or `None` when no k-subset has type `t`.
    pub by_type: Vec<Option<u64>>,
}

impl KtTable {
    pub fn get(&self, t: u64) -> Option<u64> {
        self.by_type.get(t as usize).copied().flatten()
    }

    /// `θ(n, k)`.
    pub fn min(&self) -> u64 {
        self.by_type
            .iter()
            .flatten()
            .copied()
            .min()
            .expect("some type is always attained")
    }
}

pub fn scan_kt(n: u32, k: u64, cfg: &ScanConfig) -> Result<KtTable> {
    check_scan_args(n, k)?;
    let half = 1u64 << (n - 1);
    let slots = k as usize / 2 + 1;
    let by_type = match cfg.symmetry {
        Symmetry::Complement if k > half => {
            let dual = scan_kt(n, (1 << n) - k, cfg)?;
            (0..slots as u64)
                .map(|t| {
                    // Type(S^c) = Type(S) + 2^{n-1} - |S|
                    (t + half).checked_sub(k).and_then(|td| dual.get(td))
                })
                .collect()
        }
        sym => {
            let fix = sym != Symmetry::None && k > 0;
            scan_masks(n, k as u32, fix, cfg)?
                .into_iter()
                .map(|b| (b != u32::MAX).then_some(b as u64))
                .collect()
        }
    };
    Ok(KtTable { n, k, by_type })
}

/// `θ(n, k)` by exhaustive search.
pub fn brute_theta(n: u32, k: u64, cfg: &ScanConfig) -> Result<u64> {
    Ok(scan_kt(n, k, cfg)?.min())
}

/// `θ(n, k, t)` by exhaustive search; `None` when type `t` is not attained.
pub fn brute_theta_kt(n: u32, k: u64, t: u64, cfg: &ScanConfig) -> Result<Option<u64>> {
    check_scan_args(n, k)?;
    if 2 * t > k {
        return Err(Error::Usage(format!("type t={t} exceeds k/2 for k={k}")));
    }
    Ok(scan_kt(n, k, cfg)?.get(t))
}

/// Every numeric cell of the published `n = 5` table, as `(k, t, θ)`.
pub const FIVE_CUBE_CELLS: [(u64, u64, u64); 16] = [
    (10, 5, 30),
    (11, 5, 31),
    (12, 5, 32),
    (13, 5, 31),
    (14, 5, 30),
    (15, 5, 29),
    (16, 5, 26),
    (12, 6, 32),
    (13, 6, 33),
    (14, 6, 32),
    (15, 6, 33),
    (16, 6, 30),
    (14, 7, 34),
    (15, 7, 33),
    (16, 7, 34),
    (16, 8, 32),
];

/// Printed footer `32·f(k/32)` to one decimal, as tenths, for `k = 10..=16`.
pub const FIVE_CUBE_FOOTER_TENTHS: [(u64, i64); 7] = [
    (10, 137),
    (11, 169),
    (12, 194),
    (13, 214),
    (14, 229),
    (15, 237),
    (16, 240),
];

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct FiveCubeCell {
    pub k: u64,
    pub t: u64,
    pub theta: u64,
    /// `32·f(k/32)`.
    #[serde(skip)]
    pub bound: Rational,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct FiveCubeTable {
    pub cells: Vec<FiveCubeCell>,
}

/// `2^n·f(k/2^n)` exactly.
pub fn scaled_parabola(n: u32, k: u64) -> Rational {
    scaled_parabola_with(&Parabola::standard(), n, k)
}

pub fn scaled_parabola_with(f: &Parabola<Rational>, n: u32, k: u64) -> Rational {
    f.eval(&Rational::dyadic(k as i64, n)) * Rational::from_int(1i64 << n)
}

/// Scans `k = 10..=16` at `n = 5` and assembles every cell with `5 <= t <= k/2`.
pub fn compute_five_cube_table(cfg: &ScanConfig) -> Result<(FiveCubeTable, Vec<KtTable>)> {
    let scans = (10..=16)
        .map(|k| scan_kt(5, k, cfg))
        .collect::<Result<Vec<_>>>()?;
    Ok((five_cube_table_from_scans(&scans)?, scans))
}

/// Assembles the table from existing `n = 5` scans that cover `k = 10..=16`.
pub fn five_cube_table_from_scans(scans: &[KtTable]) -> Result<FiveCubeTable> {
    let mut cells = Vec::new();
    for t in 5..=8 {
        for k in (2 * t).max(10)..=16 {
            let scan = scans
                .iter()
                .find(|s| s.n == 5 && s.k == k)
                .ok_or_else(|| Error::Usage(format!("no n=5 scan for k={k}")))?;
            let theta = scan.get(t).ok_or_else(|| {
                Error::verification("five_cube_table", format!("(k={k}, t={t}) infeasible"))
            })?;
            cells.push(FiveCubeCell {
                k,
                t,
                theta,
                bound: scaled_parabola(5, k),
            });
        }
    }
    Ok(FiveCubeTable { cells })
}

impl FiveCubeTable {
    pub fn get(&self, k: u64, t: u64) -> Option<&FiveCubeCell> {
        self.cells.iter().find(|c| c.k == k && c.t == t)
    }

    /// Compares with the printed cells and footer and checks `θ >= 32·f(k/32)`.
    pub fn verify(&self) -> Report {
        self.verify_with(&Parabola::standard())
    }

    /// As [`FiveCubeTable::verify`], with the footer and bound taken from `f`.
    pub fn verify_with(&self, f: &Parabola<Rational>) -> Report {
        let mut report = Report::new();
        let mut cells = CheckBuilder::new("theta(5,k,t) matches every printed table cell");
        for &(k, t, want) in &FIVE_CUBE_CELLS {
            let got = self.get(k, t).map(|c| c.theta);
            cells.record(got == Some(want), || {
                format!("(k={k}, t={t}): got {got:?}, printed {want}")
            });
        }
        cells.record(self.cells.len() == FIVE_CUBE_CELLS.len(), || {
            format!(
                "{} computed cells vs {} printed",
                self.cells.len(),
                FIVE_CUBE_CELLS.len()
            )
        });
        report.push(cells.finish());

        let mut footer = CheckBuilder::new("32 f(k/32) rounds to the printed footer");
        for &(k, tenths) in &FIVE_CUBE_FOOTER_TENTHS {
            let exact = scaled_parabola_with(f, 5, k);
            let printed = Rational::ratio(tenths, 10);
            let diff = (exact.clone() - printed).abs();
            footer.record(diff <= Rational::ratio(1, 20), || {
                format!("k={k}: {exact} vs {tenths}/10")
            });
        }
        report.push(footer.finish());

        let mut bound = CheckBuilder::new("theta(5,k,t) >= 32 f(k/32) exactly");
        for c in &self.cells {
            let b = scaled_parabola_with(f, 5, c.k);
            bound.record(Rational::from_int(c.theta as i64) >= b, || {
                format!("(k={}, t={}): {} < {b}", c.k, c.t, c.theta)
            });
        }
        report.push(bound.finish());
        report
    }

    /// CSV `k,t,theta,bound_num,bound_den`.
    pub fn write_csv<W: Write>(&self, mut out: W) -> Result<()> {
        writeln!(out, "k,t,theta,bound_num,bound_den")?;
        for c in &self.cells {
            writeln!(
                out,
                "{},{},{},{},{}",
                c.k,
                c.t,
                c.theta,
                c.bound.numer(),
                c.bound.denom()
            )?;
        }
        Ok(())
    }
}

/// Scans, verifies, and fails with the first mismatching `(k, t)`.
pub fn theta5_table(cfg: &ScanConfig) -> Result<FiveCubeTable> {
    let (table, _) = compute_five_cube_table(cfg)?;
    table.verify().ensure()?;
    Ok(table)
}

/// `θ(n, k, t) >= θ(n-1, t) + θ(n-1, k-t) + k - 2t` for every attained cell.
pub fn split_bound_check(scans: &[KtTable]) -> Check {
    let mut check = CheckBuilder::new("theta(n,k,t) >= theta(n-1,t) + theta(n-1,k-t) + k - 2t");
    for s in scans {
        if s.n < 2 {
            continue;
        }
        for (t, v) in s.by_type.iter().enumerate() {
            let Some(v) = *v else { continue };
            let t = t as u64;
            let rhs =
                theta_opt(s.n - 1, t).unwrap() + theta_opt(s.n - 1, s.k - t).unwrap() + s.k - 2 * t;
            check.record(v >= rhs, || {
                format!("n={} k={} t={t}: {v} < {rhs}", s.n, s.k)
            });
        }
    }
    check.finish()
}

/// `θ(n, k) = min_t θ(n, k, t)` agrees with the closed-form optimum.
pub fn harper_agreement_check(scans: &[KtTable]) -> Check {
    let mut check = CheckBuilder::new("brute theta(n,k) = closed-form theta(n,k)");
    for s in scans {
        let closed = theta_opt(s.n, s.k).unwrap();
        check.record(s.min() == closed, || {
            format!("n={} k={}: {} vs {closed}", s.n, s.k, s.min())
        });
    }
    check.finish()
}

/// Every `k`-table for `0 <= k <= 2^n`.
pub fn scan_all(n: u32, cfg: &ScanConfig) -> Result<Vec<KtTable>> {
    (0..=(1u64 << n)).map(|k| scan_kt(n, k, cfg)).collect()
}

/// `θ(n, k, t) >= 2^n f(k/2^n)` on the parabola-bound range, at the `θ` level.
/// Uses `scans` where present and scans the rest.
pub fn half_type_theta_check(n: u32, scans: &[KtTable], cfg: &ScanConfig) -> Result<Check> {
    if !(3..=MAX_SCAN_DIM).contains(&n) {
        return Err(Error::Usage(format!(
            "theta-level range check needs 3 <= n <= {MAX_SCAN_DIM}"
        )));
    }
    let mut owned: Vec<KtTable> = Vec::new();
    let mut check = CheckBuilder::new(format!(
        "n={n}: theta(n,k,t) >= 2^n f(k/2^n) on the bound range"
    ));
    for (k, t) in half_type_pairs(n) {
        let table = match scans.iter().chain(&owned).find(|s| s.n == n && s.k == k) {
            Some(s) => s.clone(),
            None => {
                let s = scan_kt(n, k, cfg)?;
                owned.push(s.clone());
                s
            }
        };
        let bound = scaled_parabola(n, k);
        match table.get(t) {
            Some(v) => check.record(Rational::from_int(v as i64) >= bound, || {
                format!("(k={k}, t={t}): {v} < {bound}")
            }),
            None => check.record(true, String::new),
        }
    }
    Ok(check.finish())
}

/// Exhaustive minimum cycle wirelength with one optimal embedding. Vertex 0
/// is pinned to label 1 and reflections are quotiented out.
pub fn brute_min_cycle_wl(n: u32) -> Result<(u64, Embedding)> {
    if n < 2 {
        return Err(Error::Domain(
            "cycle wirelength is defined here for n >= 2".into(),
        ));
    }
    if n > 3 {
        return Err(Error::BudgetExceeded(format!(
            "exhaustive arrangement search supports n <= 3, got n={n}"
        )));
    }
    let order = 1u32 << n;
    let mut rest: Vec<u32> = (1..order).collect();
    let mut best: Option<(u64, Vec<u32>)> = None;
    permute(&mut rest, 0, &mut |perm| {
        // perm[j] is the vertex at label j + 2; keep one of each mirror pair
        if perm[0] > perm[perm.len() - 1] {
            return;
        }
        let mut labels = vec![0u32; order as usize];
        labels[0] = 1;
        for (j, &v) in perm.iter().enumerate() {
            labels[v as usize] = j as u32 + 2;
        }
        let eta = Embedding::new(n, labels.clone()).expect("permutation is a bijection");
        let wl = wirelength(&eta, Host::Cycle).expect("n >= 2");
        if best.as_ref().is_none_or(|(b, _)| wl < *b) {
            best = Some((wl, labels));
        }
    });
    let (wl, labels) = best.expect("at least one arrangement");
    Ok((wl, Embedding::new(n, labels)?))
}

/// Number of arrangements [`brute_min_cycle_wl`] visits: `(2^n - 1)! / 2`.
pub fn cycle_arrangement_count(n: u32) -> u64 {
    (1..(1u64 << n)).product::<u64>() / 2
}

fn permute(items: &mut Vec<u32>, depth: usize, visit: &mut impl FnMut(&[u32])) {
    if depth == items.len() {
        visit(items);
        return;
    }
    for i in depth..items.len() {
        items.swap(depth, i);
        permute(items, depth + 1, visit);
        items.swap(depth, i);
    }
}

/// Uniform random embedding from a seeded ChaCha8 stream.
pub fn random_embedding(n: u32, seed: u64) -> Result<Embedding> {
    if !(2..=crate::cube::MAX_DIM).contains(&n) {
        return Err(Error::Usage(format!(
            "random embeddings need 2 <= n <= {}",
            crate::cube::MAX_DIM
        )));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut labels: Vec<u32> = (1..=(1u32 << n)).collect();
    labels.shuffle(&mut rng);
    Embedding::new(n, labels)
}

/// Full small-cube certification used by `verify-all`: closed-form agreement
/// and the split bound for `n <= 4`, plus the `θ`-level range check at `n = 3, 4`.
pub fn small_cube_report(cfg: &ScanConfig) -> Result<Report> {
    let mut report = Report::new();
    let mut all = Vec::new();
    for n in 1..=4 {
        all.extend(scan_all(n, cfg)?);
    }
    report.push(harper_agreement_check(&all));
    report.push(split_bound_check(&all));
    for n in 3..=4 {
        report.push(half_type_theta_check(n, &all, cfg)?);
    }
    Ok(report)
}
