//! Two-stage compression search for D-optimal SDS pairs.
//!
//! Fix a factorization `v = m·d`. If `(X, Y)` is a D-optimal SDS with binary
//! sequences `A, B`, then the compressions `a = A^(d)`, `b = B^(d)` satisfy
//!
//! * entries in `{m, m−2, …, −m}`,
//! * `sum(a) = v − 2r`, `sum(b) = v − 2s`,
//! * `paf_a(s) + paf_b(s) = 2m` for `s ≠ 0` and `2v + 2(m−1)` for `s = 0`,
//! * `psd_a(s), psd_b(s) ≤ 2v − 2` for `s ≠ 0`.
//!
//! Stage 1 enumerates such compressed pairs of length `d`. Stage 2 lifts each
//! one back to length `v`: every column `{j, j+d, …, j+(m−1)d}` of `A` holds
//! `±1` entries summing to `a_j`, so lifts are enumerated column by column.
//! Each lift is PSD-filtered only at frequencies that are not multiples of
//! `m`; at multiples `m·s` its PSD equals `psd_a(s)`, which stage 1 already
//! bounded. Lifts of `A` and `B` are then joined on their PAF vectors.
//!
//! Both joins are hash joins keyed by the exact integer PAF vector, so the
//! pipeline is complete: every solution compressing to an emitted candidate
//! is found.

use std::collections::{BTreeSet, HashMap, HashSet};
use std::fmt;
use std::sync::atomic::{AtomicBool, Ordering};
use std::time::{Duration, Instant};

use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::params::ParameterSet;
use crate::sds::{canonical_form, verify_doptimal, Sds};
use crate::seqcore::{compress, paf_unchecked, IntegerSequence, PsdTable, PSD_TOLERANCE};

/// Largest `v` accepted by [`exhaustive_search`].
pub const EXHAUSTIVE_MAX_V: u32 = 25;

/// Compressed images `(a, b)` of a hypothetical D-optimal pair.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct CompressedPair {
    pub a: IntegerSequence,
    pub b: IntegerSequence,
    pub m: u32,
    pub params: ParameterSet,
}

impl CompressedPair {
    pub fn d(&self) -> usize {
        self.a.len()
    }

    /// Compress both blocks of a two-block SDS to length `d`.
    pub fn from_sds(sds: &Sds, d: usize) -> Result<Self> {
        if sds.blocks().len() != 2 {
            return Err(Error::BlockCount {
                expected: 2,
                found: sds.blocks().len(),
            });
        }
        let seqs = sds.sequences();
        let a = compress(seqs[0].terms(), d)?;
        let b = compress(seqs[1].terms(), d)?;
        Ok(CompressedPair {
            a,
            b,
            m: sds.v() / d as u32,
            params: sds.params().clone(),
        })
    }

    /// Entry range and parity, target sums and PAF sums.
    pub fn satisfies_invariants(&self) -> bool {
        let (v, m) = (self.params.v() as i64, self.m as i64);
        let d = self.d();
        if d == 0 || self.b.len() != d || d as i64 * m != v || self.params.t() != 2 {
            return false;
        }
        let entry_ok = |e: &i32| (*e as i64).abs() <= m && (m - *e as i64) % 2 == 0;
        if !self.a.terms().iter().all(entry_ok) || !self.b.terms().iter().all(entry_ok) {
            return false;
        }
        if self.a.sum() != v - 2 * self.params.r() as i64
            || self.b.sum() != v - 2 * self.params.s() as i64
        {
            return false;
        }
        (0..d).all(|s| {
            let sum = paf_unchecked(self.a.terms(), s) + paf_unchecked(self.b.terms(), s);
            sum == compressed_paf_target(v, m, s)
        })
    }
}

fn compressed_paf_target(v: i64, m: i64, shift: usize) -> i64 {
    if shift == 0 {
        2 * v + 2 * (m - 1)
    } else {
        2 * m
    }
}

/// Search limits and knobs.
#[derive(Debug, Clone, PartialEq)]
pub struct SearchConfig {
    pub params: ParameterSet,
    /// Compression factor `m`; `d = v / m`.
    pub m: u32,
    pub psd_tolerance: f64,
    /// Emit stage-1 candidates only in their least simultaneous rotation.
    pub normalize: bool,
    pub workers: usize,
    pub max_candidates: Option<usize>,
    pub max_solutions: Option<usize>,
    pub time_budget: Option<Duration>,
}

impl SearchConfig {
    pub fn new(params: ParameterSet, m: u32) -> Self {
        SearchConfig {
            params,
            m,
            psd_tolerance: PSD_TOLERANCE,
            normalize: true,
            workers: 1,
            max_candidates: None,
            max_solutions: None,
            time_budget: None,
        }
    }

    pub fn d(&self) -> u32 {
        self.params.v().checked_div(self.m).unwrap_or(0)
    }

    /// Feasible parameters and `m | v`. Degenerate `m = 1` or `d = 1` pass.
    fn validate_factorization(&self) -> Result<()> {
        self.params.require_doptimal()?;
        let v = self.params.v();
        if self.m == 0 || !v.is_multiple_of(self.m) {
            return Err(Error::InvalidFactorization { v, m: self.m });
        }
        Ok(())
    }

    /// As [`Self::validate_factorization`], additionally requiring `m, d > 1`.
    pub fn validate(&self) -> Result<()> {
        self.validate_factorization()?;
        if self.m < 2 || self.d() < 2 {
            return Err(Error::InvalidFactorization {
                v: self.params.v(),
                m: self.m,
            });
        }
        Ok(())
    }
}

/// Shared deadline for one search run.
struct Budget {
    deadline: Option<Instant>,
    expired: AtomicBool,
}

impl Budget {
    fn new(limit: Option<Duration>) -> Self {
        Budget {
            deadline: limit.map(|l| Instant::now() + l),
            expired: AtomicBool::new(limit == Some(Duration::ZERO)),
        }
    }

    fn unlimited() -> Self {
        Budget::new(None)
    }

    fn expired(&self) -> bool {
        if self.expired.load(Ordering::Relaxed) {
            return true;
        }
        match self.deadline {
            Some(d) if Instant::now() >= d => {
                self.expired.store(true, Ordering::Relaxed);
                true
            }
            _ => false,
        }
    }
}

/// `true` iff both compressed sequences have `psd(s) ≤ 2v − 2 + tol` for all
/// `s = 1..d`.
pub fn psd_filter(c: &CompressedPair) -> bool {
    psd_filter_with_tolerance(c, PSD_TOLERANCE)
}

pub fn psd_filter_with_tolerance(c: &CompressedPair, tol: f64) -> bool {
    let bound = 2.0 * c.params.v() as f64 - 2.0;
    let table = PsdTable::new(c.d());
    let no_skip = |_| false;
    table.within_bound(c.a.terms(), bound, tol, no_skip)
        && table.within_bound(c.b.terms(), bound, tol, no_skip)
}

#[derive(Debug, Default, Clone, Copy, PartialEq, Eq)]
pub struct Stage1Stats {
    /// Compressed sequences with the right sum for the first block
    /// (after rotation normalization, when enabled).
    pub first_sequences: u64,
    /// Compressed sequences with the right sum for the second block.
    pub second_sequences: u64,
    /// Sequences discarded by the PSD bound.
    pub psd_rejected: u64,
    pub candidates: u64,
}

fn is_least_rotation(seq: &[i32]) -> bool {
    let d = seq.len();
    (1..d).all(|t| {
        let rotated = seq[t..].iter().chain(&seq[..t]);
        rotated.cmp(seq.iter()) != std::cmp::Ordering::Less
    })
}

fn rotate(seq: &[i32], t: usize) -> Vec<i32> {
    seq[t..].iter().chain(&seq[..t]).copied().collect()
}

/// All length-`d` sequences with entries in `{−m, …, m}` (step 2) summing to
/// `target`, in lexicographic order, that pass the PSD bound.
struct HalfEnumerator<'a> {
    d: usize,
    m: i32,
    target: i64,
    bound: f64,
    tol: f64,
    least_rotation_only: bool,
    table: &'a PsdTable,
    budget: &'a Budget,
    found: Vec<Vec<i32>>,
    seen: u64,
    rejected: u64,
}

impl HalfEnumerator<'_> {
    fn run(mut self) -> (Vec<Vec<i32>>, u64, u64) {
        let mut current = vec![0i32; self.d];
        self.descend(&mut current, 0, 0);
        (self.found, self.seen, self.rejected)
    }

    fn descend(&mut self, current: &mut [i32], pos: usize, partial: i64) {
        if pos == self.d {
            if self.least_rotation_only && !is_least_rotation(current) {
                return;
            }
            self.seen += 1;
            if self.budget.expired() {
                return;
            }
            if self
                .table
                .within_bound(current, self.bound, self.tol, |_| false)
            {
                self.found.push(current.to_vec());
            } else {
                self.rejected += 1;
            }
            return;
        }
        let remaining = (self.d - pos - 1) as i64 * self.m as i64;
        let mut value = -self.m;
        while value <= self.m {
            let next = partial + value as i64;
            if (self.target - next).abs() <= remaining {
                current[pos] = value;
                self.descend(current, pos + 1, next);
            }
            value += 2;
        }
    }
}

fn stage1_with_stats(cfg: &SearchConfig, budget: &Budget) -> (Vec<CompressedPair>, Stage1Stats) {
    let q = &cfg.params;
    let (v, m, d) = (q.v() as i64, cfg.m as i64, cfg.d() as usize);
    let bound = 2.0 * v as f64 - 2.0;
    let table = PsdTable::new(d);
    let enumerate = |target: i64, least_rotation_only: bool| {
        HalfEnumerator {
            d,
            m: m as i32,
            target,
            bound,
            tol: cfg.psd_tolerance,
            least_rotation_only,
            table: &table,
            budget,
            found: Vec::new(),
            seen: 0,
            rejected: 0,
        }
        .run()
    };
    let (firsts, first_seen, first_rejected) = enumerate(v - 2 * q.r() as i64, cfg.normalize);
    let (seconds, second_seen, second_rejected) = enumerate(v - 2 * q.s() as i64, false);

    let mut by_paf: HashMap<Vec<i64>, Vec<usize>> = HashMap::new();
    for (i, b) in seconds.iter().enumerate() {
        let key = (0..d).map(|s| paf_unchecked(b, s)).collect();
        by_paf.entry(key).or_default().push(i);
    }

    let mut candidates = Vec::new();
    for a in &firsts {
        let wanted: Vec<i64> = (0..d)
            .map(|s| compressed_paf_target(v, m, s) - paf_unchecked(a, s))
            .collect();
        let Some(matches) = by_paf.get(&wanted) else {
            continue;
        };
        let stabilizer: Vec<usize> = if cfg.normalize {
            (1..d).filter(|&t| rotate(a, t) == *a).collect()
        } else {
            Vec::new()
        };
        for &i in matches {
            let b = &seconds[i];
            if stabilizer.iter().any(|&t| rotate(b, t) < *b) {
                continue;
            }
            candidates.push(CompressedPair {
                a: IntegerSequence::new(a.clone()).expect("d >= 1"),
                b: IntegerSequence::new(b.clone()).expect("d >= 1"),
                m: cfg.m,
                params: q.clone(),
            });
        }
    }
    let stats = Stage1Stats {
        first_sequences: first_seen,
        second_sequences: second_seen,
        psd_rejected: first_rejected + second_rejected,
        candidates: candidates.len() as u64,
    };
    (candidates, stats)
}

/// Every compressed pair meeting the invariants and the PSD bound. With
/// `cfg.normalize`, only the least of the `d` simultaneous rotations of each
/// pair is emitted.
pub fn stage1_enumerate(cfg: &SearchConfig) -> Result<Vec<CompressedPair>> {
    cfg.validate_factorization()?;
    Ok(stage1_with_stats(cfg, &Budget::unlimited()).0)
}

/// Whether `c` belongs to the output of [`stage1_enumerate`] for `cfg`,
/// decided directly from the defining conditions. Usable when `d` is too
/// large to enumerate.
pub fn stage1_admits(cfg: &SearchConfig, c: &CompressedPair) -> bool {
    if c.params != cfg.params || c.m != cfg.m || !c.satisfies_invariants() {
        return false;
    }
    if !psd_filter_with_tolerance(c, cfg.psd_tolerance) {
        return false;
    }
    if !cfg.normalize {
        return true;
    }
    let (a, b) = (c.a.terms(), c.b.terms());
    (1..c.d()).all(|t| (rotate(a, t), rotate(b, t)) >= (a.to_vec(), b.to_vec()))
}

#[derive(Debug, Default, Clone, Copy, PartialEq, Eq)]
pub struct LiftStats {
    pub lifts_examined: u64,
    pub lifts_psd_rejected: u64,
    pub solutions: u64,
}

impl std::ops::AddAssign for LiftStats {
    fn add_assign(&mut self, other: LiftStats) {
        self.lifts_examined += other.lifts_examined;
        self.lifts_psd_rejected += other.lifts_psd_rejected;
        self.solutions += other.solutions;
    }
}

/// Column-by-column lifting of one compressed sequence.
struct Lifter<'a> {
    v: usize,
    d: usize,
    /// Columns in visiting order with their admissible `−1` masks.
    columns: Vec<(usize, &'a [u32])>,
    m: usize,
    bound: f64,
    tol: f64,
    table: &'a PsdTable,
    budget: &'a Budget,
    found: Vec<Vec<i32>>,
    stats: LiftStats,
}

impl Lifter<'_> {
    fn run(mut self) -> (Vec<Vec<i32>>, LiftStats) {
        let mut current = vec![1i32; self.v];
        self.descend(&mut current, 0);
        (self.found, self.stats)
    }

    fn descend(&mut self, current: &mut [i32], depth: usize) {
        if depth == self.columns.len() {
            self.stats.lifts_examined += 1;
            if self.budget.expired() {
                return;
            }
            let m = self.m;
            if self
                .table
                .within_bound(current, self.bound, self.tol, |k| k % m == 0)
            {
                self.found.push(current.to_vec());
            } else {
                self.stats.lifts_psd_rejected += 1;
            }
            return;
        }
        let (j, masks) = self.columns[depth];
        for &mask in masks {
            for i in 0..self.m {
                current[j + i * self.d] = if mask >> i & 1 == 1 { -1 } else { 1 };
            }
            self.descend(current, depth + 1);
        }
    }
}

/// All `m`-bit masks, grouped by number of set bits.
fn masks_by_weight(m: usize) -> Vec<Vec<u32>> {
    let mut out = vec![Vec::new(); m + 1];
    for mask in 0u32..(1 << m) {
        out[mask.count_ones() as usize].push(mask);
    }
    out
}

fn lift_sequence(
    target: &[i32],
    v: usize,
    m: usize,
    tol: f64,
    masks: &[Vec<u32>],
    table: &PsdTable,
    budget: &Budget,
) -> (Vec<Vec<i32>>, LiftStats) {
    let d = target.len();
    let mut columns: Vec<(usize, &[u32])> = target
        .iter()
        .enumerate()
        .map(|(j, &t)| (j, masks[(m as i64 - t as i64) as usize / 2].as_slice()))
        .collect();
    columns.sort_by_key(|&(j, choices)| (choices.len(), j));
    Lifter {
        v,
        d,
        columns,
        m,
        bound: 2.0 * v as f64 - 2.0,
        tol,
        table,
        budget,
        found: Vec::new(),
        stats: LiftStats::default(),
    }
    .run()
}

fn paf_key(seq: &[i32]) -> Vec<i16> {
    (1..=seq.len() / 2)
        .map(|s| paf_unchecked(seq, s) as i16)
        .collect()
}

fn subset_of(seq: &[i32]) -> Vec<u32> {
    seq.iter()
        .enumerate()
        .filter(|(_, &t)| t == -1)
        .map(|(i, _)| i as u32)
        .collect()
}

fn lift_with_budget(c: &CompressedPair, tol: f64, budget: &Budget) -> (Vec<Sds>, LiftStats) {
    if !c.satisfies_invariants() {
        return (Vec::new(), LiftStats::default());
    }
    let (v, m) = (c.params.v() as usize, c.m as usize);
    let masks = masks_by_weight(m);
    let table = PsdTable::new(v);
    let (firsts, mut stats) = lift_sequence(c.a.terms(), v, m, tol, &masks, &table, budget);
    let (seconds, second_stats) = lift_sequence(c.b.terms(), v, m, tol, &masks, &table, budget);
    stats += second_stats;

    let mut by_paf: HashMap<Vec<i16>, Vec<usize>> = HashMap::new();
    for (i, b) in seconds.iter().enumerate() {
        by_paf.entry(paf_key(b)).or_default().push(i);
    }
    let mut out = Vec::new();
    for a in &firsts {
        let wanted: Vec<i16> = paf_key(a).into_iter().map(|p| 2 - p).collect();
        for &i in by_paf.get(&wanted).map(Vec::as_slice).unwrap_or(&[]) {
            let sds = Sds::new(c.params.clone(), vec![subset_of(a), subset_of(&seconds[i])])
                .expect("lifted blocks lie in Z_v");
            debug_assert!(verify_doptimal(&sds).is_ok());
            out.push(sds);
        }
    }
    stats.solutions = out.len() as u64;
    (out, stats)
}

/// Every D-optimal pair whose compressions are exactly `(c.a, c.b)`. Pairs
/// violating the compressed invariants have no lifts.
pub fn stage2_lift(c: &CompressedPair, cfg: &SearchConfig) -> Vec<Sds> {
    lift_with_budget(c, cfg.psd_tolerance, &Budget::unlimited()).0
}

fn combinations(pool: &[u32], k: usize, mut visit: impl FnMut(&[u32])) {
    fn go(pool: &[u32], k: usize, start: usize, acc: &mut Vec<u32>, visit: &mut dyn FnMut(&[u32])) {
        if acc.len() == k {
            visit(acc);
            return;
        }
        let needed = k - acc.len();
        for i in start..=pool.len().saturating_sub(needed) {
            if i >= pool.len() {
                break;
            }
            acc.push(pool[i]);
            go(pool, k, i + 1, acc, visit);
            acc.pop();
        }
    }
    go(pool, k, 0, &mut Vec::with_capacity(k), &mut visit);
}

/// Blocks of size `k` up to translation: every nonempty block is taken to
/// contain `0`.
fn translation_representatives(v: u32, k: u32) -> Vec<Vec<u32>> {
    if k == 0 {
        return vec![Vec::new()];
    }
    let rest: Vec<u32> = (1..v).collect();
    let mut out = Vec::new();
    combinations(&rest, k as usize - 1, |c| {
        let mut block = Vec::with_capacity(k as usize);
        block.push(0);
        block.extend_from_slice(c);
        out.push(block);
    });
    out
}

fn block_key(block: &[u32], v: u32) -> Vec<i16> {
    let mut seq = vec![1i32; v as usize];
    for &e in block {
        seq[e as usize] = -1;
    }
    paf_key(&seq)
}

/// Brute-force search over all pairs of blocks (up to translation), for
/// `v ≤ EXHAUSTIVE_MAX_V`. Returns canonical forms, sorted and deduplicated.
pub fn exhaustive_search(params: &ParameterSet) -> Result<Vec<Sds>> {
    params.require_doptimal()?;
    let v = params.v();
    if v > EXHAUSTIVE_MAX_V {
        return Err(Error::ExhaustiveTooLarge {
            v,
            limit: EXHAUSTIVE_MAX_V,
        });
    }
    let seconds = translation_representatives(v, params.s());
    let mut by_paf: HashMap<Vec<i16>, Vec<usize>> = HashMap::new();
    for (i, y) in seconds.iter().enumerate() {
        by_paf.entry(block_key(y, v)).or_default().push(i);
    }
    let mut found = BTreeSet::new();
    for x in translation_representatives(v, params.r()) {
        let wanted: Vec<i16> = block_key(&x, v).into_iter().map(|p| 2 - p).collect();
        for &i in by_paf.get(&wanted).map(Vec::as_slice).unwrap_or(&[]) {
            let sds = Sds::new(params.clone(), vec![x.clone(), seconds[i].clone()])?;
            found.insert(canonical_form(&sds)?);
        }
    }
    Ok(found.into_iter().collect())
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SearchStatus {
    /// Every candidate was lifted.
    Exhausted,
    SolutionLimit,
    CandidateLimit,
    TimeBudget,
}

impl fmt::Display for SearchStatus {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            SearchStatus::Exhausted => "exhausted",
            SearchStatus::SolutionLimit => "solution-limit",
            SearchStatus::CandidateLimit => "candidate-limit",
            SearchStatus::TimeBudget => "time-budget",
        })
    }
}

#[derive(Debug, Clone)]
pub struct SearchReport {
    pub params: ParameterSet,
    pub m: u32,
    /// Canonical forms of distinct solutions, in discovery order.
    pub solutions: Vec<Sds>,
    pub stage1: Stage1Stats,
    pub candidates_lifted: u64,
    pub lift: LiftStats,
    pub status: SearchStatus,
    pub elapsed: Duration,
}

impl SearchReport {
    fn empty(cfg: &SearchConfig, status: SearchStatus) -> Self {
        SearchReport {
            params: cfg.params.clone(),
            m: cfg.m,
            solutions: Vec::new(),
            stage1: Stage1Stats::default(),
            candidates_lifted: 0,
            lift: LiftStats::default(),
            status,
            elapsed: Duration::ZERO,
        }
    }
}

/// Everything except wall time, so identical runs render identically.
impl fmt::Display for SearchReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(
            f,
            "search {} m={} d={}",
            self.params,
            self.m,
            self.params.v() / self.m.max(1)
        )?;
        writeln!(
            f,
            "stage1 first={} second={} psd_rejected={} candidates={}",
            self.stage1.first_sequences,
            self.stage1.second_sequences,
            self.stage1.psd_rejected,
            self.stage1.candidates
        )?;
        writeln!(
            f,
            "stage2 lifted={} lifts={} psd_rejected={} raw_solutions={}",
            self.candidates_lifted,
            self.lift.lifts_examined,
            self.lift.lifts_psd_rejected,
            self.lift.solutions
        )?;
        write!(
            f,
            "result solutions={} status={}",
            self.solutions.len(),
            self.status
        )
    }
}

/// Run stage 1, then lift candidates (in parallel when `cfg.workers > 1`),
/// deduplicating solutions by canonical form. `on_solution` receives each
/// new canonical solution as it is found, in candidate order.
pub fn search_driver<F>(cfg: &SearchConfig, mut on_solution: F) -> Result<SearchReport>
where
    F: FnMut(&Sds),
{
    cfg.validate()?;
    let start = Instant::now();
    let budget = Budget::new(cfg.time_budget);
    if budget.expired() {
        return Ok(SearchReport::empty(cfg, SearchStatus::TimeBudget));
    }

    let (mut candidates, stage1) = stage1_with_stats(cfg, &budget);
    let mut report = SearchReport {
        stage1,
        ..SearchReport::empty(cfg, SearchStatus::Exhausted)
    };
    if budget.expired() {
        report.status = SearchStatus::TimeBudget;
        report.elapsed = start.elapsed();
        return Ok(report);
    }
    if let Some(limit) = cfg.max_candidates {
        if candidates.len() > limit {
            candidates.truncate(limit);
            report.status = SearchStatus::CandidateLimit;
        }
    }
    let pool = if cfg.workers > 1 {
        Some(
            rayon::ThreadPoolBuilder::new()
                .num_threads(cfg.workers)
                .build()
                .expect("thread pool"),
        )
    } else {
        None
    };
    let batch = cfg.workers.max(1) * 2;
    let mut seen = HashSet::new();
    let lift = |c: &CompressedPair| lift_with_budget(c, cfg.psd_tolerance, &budget);

    'outer: for chunk in candidates.chunks(batch) {
        let outcomes: Vec<(Vec<Sds>, LiftStats)> = match &pool {
            Some(pool) => pool.install(|| chunk.par_iter().map(lift).collect()),
            None => chunk.iter().map(lift).collect(),
        };
        for (found, stats) in outcomes {
            if budget.expired() {
                report.status = SearchStatus::TimeBudget;
                break 'outer;
            }
            report.candidates_lifted += 1;
            report.lift += stats;
            for sds in found {
                let canon = canonical_form(&sds)?;
                if seen.insert(canon.clone()) {
                    on_solution(&canon);
                    report.solutions.push(canon);
                    if cfg
                        .max_solutions
                        .is_some_and(|n| report.solutions.len() >= n)
                    {
                        report.status = SearchStatus::SolutionLimit;
                        break 'outer;
                    }
                }
            }
        }
    }
    report.elapsed = start.elapsed();
    Ok(report)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::format::parse_sds_record;

    fn record(text: &str) -> Sds {
        parse_sds_record(text, 1).unwrap()
    }

    const V15: &str = "(15;6,4;3) [0,1,2,4,6,9] [0,1,4,9]";
    const V9: &str = "(9;3,2;1) [0,1,4] [0,2]";

    #[test]
    fn compressed_invariants_of_known_solution() {
        let c = CompressedPair::from_sds(&record(V15), 5).unwrap();
        assert_eq!(c.a.terms(), &[1, -1, 1, 3, -1]);
        assert!(c.satisfies_invariants());
        assert!(psd_filter(&c));
    }

    #[test]
    fn least_rotation() {
        assert!(is_least_rotation(&[-1, 1, 1]));
        assert!(!is_least_rotation(&[1, -1, 1]));
        assert!(is_least_rotation(&[1, 1]));
    }

    #[test]
    fn stage1_contains_compressed_solution() {
        let s = record(V15);
        let cfg = SearchConfig {
            normalize: false,
            ..SearchConfig::new(s.params().clone(), 3)
        };
        let want = CompressedPair::from_sds(&s, 5).unwrap();
        let all = stage1_enumerate(&cfg).unwrap();
        assert!(all.contains(&want));
        assert!(all
            .iter()
            .all(|c| c.satisfies_invariants() && psd_filter(c)));
    }

    #[test]
    fn stage1_degenerate_single_column() {
        let cfg = SearchConfig::new(ParameterSet::pair(5, 1, 1, 0), 5);
        let all = stage1_enumerate(&cfg).unwrap();
        assert_eq!(all.len(), 1);
        assert_eq!((all[0].a.terms(), all[0].b.terms()), (&[3][..], &[3][..]));
        assert!(psd_filter(&all[0]));
        assert!(SearchConfig::new(ParameterSet::pair(5, 1, 1, 0), 5)
            .validate()
            .is_err());
    }

    #[test]
    fn stage1_rejects_bad_configs() {
        assert!(stage1_enumerate(&SearchConfig::new(ParameterSet::pair(15, 6, 4, 3), 4)).is_err());
        assert!(stage1_enumerate(&SearchConfig::new(ParameterSet::pair(15, 6, 4, 4), 3)).is_err());
    }

    #[test]
    fn psd_filter_rejects_spike() {
        // alternating extremes concentrate energy at the Nyquist-like frequency
        let q = ParameterSet::pair(15, 6, 4, 3);
        let c = CompressedPair {
            a: IntegerSequence::new(vec![3, -3, 3, -3, 3]).unwrap(),
            b: IntegerSequence::new(vec![3, 3, 1, -1, 1]).unwrap(),
            m: 3,
            params: q,
        };
        assert!(!psd_filter(&c));
    }

    #[test]
    fn admits_matches_enumeration() {
        for (q, m) in [
            (ParameterSet::pair(9, 3, 2, 1), 3),
            (ParameterSet::pair(15, 6, 4, 3), 3),
        ] {
            for normalize in [true, false] {
                let cfg = SearchConfig {
                    normalize,
                    ..SearchConfig::new(q.clone(), m)
                };
                let emitted: HashSet<CompressedPair> =
                    stage1_enumerate(&cfg).unwrap().into_iter().collect();
                // every pair of sequences over the entry alphabet
                let d = cfg.d() as usize;
                let alphabet: Vec<i32> = (0..=m as i32).map(|i| -(m as i32) + 2 * i).collect();
                let words: Vec<Vec<i32>> = (0..alphabet.len().pow(d as u32))
                    .map(|mut n| {
                        (0..d)
                            .map(|_| {
                                let e = alphabet[n % alphabet.len()];
                                n /= alphabet.len();
                                e
                            })
                            .collect()
                    })
                    .collect();
                let mut admitted = HashSet::new();
                for a in &words {
                    for b in &words {
                        let c = CompressedPair {
                            a: IntegerSequence::new(a.clone()).unwrap(),
                            b: IntegerSequence::new(b.clone()).unwrap(),
                            m,
                            params: q.clone(),
                        };
                        if stage1_admits(&cfg, &c) {
                            admitted.insert(c);
                        }
                    }
                }
                assert_eq!(admitted, emitted, "{q} normalize={normalize}");
            }
        }
    }

    #[test]
    fn lift_round_trip() {
        let s = record(V15);
        let c = CompressedPair::from_sds(&s, 5).unwrap();
        let cfg = SearchConfig::new(s.params().clone(), 3);
        let lifts = stage2_lift(&c, &cfg);
        assert!(lifts.contains(&s));
        for l in &lifts {
            assert_eq!(verify_doptimal(l), Ok(()));
            let back = CompressedPair::from_sds(l, 5).unwrap();
            assert_eq!((back.a, back.b), (c.a.clone(), c.b.clone()));
        }
    }

    #[test]
    fn lift_rejects_invalid_pair() {
        let q = ParameterSet::pair(9, 3, 2, 1);
        let c = CompressedPair {
            a: IntegerSequence::new(vec![3, 3, 3]).unwrap(),
            b: IntegerSequence::new(vec![3, 3, 3]).unwrap(),
            m: 3,
            params: q.clone(),
        };
        assert!(!c.satisfies_invariants());
        assert!(stage2_lift(&c, &SearchConfig::new(q, 3)).is_empty());
    }

    #[test]
    fn end_to_end_v9() {
        let s = record(V9);
        let cfg = SearchConfig::new(s.params().clone(), 3);
        let target = canonical_form(&s).unwrap();
        let lifted: Vec<Sds> = stage1_enumerate(&cfg)
            .unwrap()
            .iter()
            .flat_map(|c| stage2_lift(c, &cfg))
            .map(|l| canonical_form(&l).unwrap())
            .collect();
        assert!(lifted.contains(&target));
    }

    #[test]
    fn exhaustive_small() {
        let found = exhaustive_search(&ParameterSet::pair(7, 3, 1, 1)).unwrap();
        let known = canonical_form(&record("(7;3,1;1) [0,1,3] [0]")).unwrap();
        assert!(found.contains(&known));
        let five = exhaustive_search(&ParameterSet::pair(5, 1, 1, 0)).unwrap();
        assert_eq!(
            five,
            vec![canonical_form(&record("(5;1,1;0) [0] [0]")).unwrap()]
        );
        assert!(matches!(
            exhaustive_search(&ParameterSet::pair(27, 11, 9, 7)),
            Err(Error::ExhaustiveTooLarge { .. })
        ));
        assert!(exhaustive_search(&ParameterSet::pair(11, 5, 3, 2)).is_err());
    }

    #[test]
    fn driver_v15() {
        let cfg = SearchConfig::new(ParameterSet::pair(15, 6, 4, 3), 3);
        let mut streamed = Vec::new();
        let report = search_driver(&cfg, |s| streamed.push(s.clone())).unwrap();
        assert!(!report.solutions.is_empty());
        assert_eq!(streamed, report.solutions);
        assert_eq!(report.status, SearchStatus::Exhausted);
        assert!(report.lift.lifts_examined > 0);
    }

    #[test]
    fn driver_zero_budget() {
        let cfg = SearchConfig {
            time_budget: Some(Duration::ZERO),
            ..SearchConfig::new(ParameterSet::pair(15, 6, 4, 3), 3)
        };
        let report = search_driver(&cfg, |_| panic!("no solutions expected")).unwrap();
        assert!(report.solutions.is_empty());
        assert_eq!(report.status, SearchStatus::TimeBudget);
    }

    #[test]
    fn driver_limits() {
        let base = SearchConfig::new(ParameterSet::pair(15, 6, 4, 3), 3);
        let one = SearchConfig {
            max_solutions: Some(1),
            ..base.clone()
        };
        let report = search_driver(&one, |_| {}).unwrap();
        assert_eq!(report.solutions.len(), 1);
        assert_eq!(report.status, SearchStatus::SolutionLimit);

        let none = SearchConfig {
            max_candidates: Some(0),
            ..base
        };
        let report = search_driver(&none, |_| {}).unwrap();
        assert_eq!(report.candidates_lifted, 0);
        assert_eq!(report.status, SearchStatus::CandidateLimit);
    }
}
