//! Supplementary difference sets over the cyclic group `Z_v`.
//!
//! Subsets `X_1, …, X_t` with `|X_i| = k_i` form an SDS with parameters
//! `(v; k_1, …, k_t; λ)` when every nonzero `c ∈ Z_v` arises exactly `λ`
//! times as a difference `a − b` with `a, b` in a common block. For two
//! blocks with `v = 2n + 1` this is equivalent to the associated binary
//! sequences having periodic autocorrelations summing to `2` at every
//! nonzero shift.

use std::cmp::Ordering;
use std::sync::OnceLock;

use num_integer::Integer;

use crate::designmat::{gram, Circulant};
use crate::error::{Error, Result};
use crate::format::parse_sds_file;
use crate::params::ParameterSet;
use crate::seqcore::{paf_unchecked, BinarySequence};
use crate::verdict::{Verdict, Violation};

/// Base blocks together with the parameter set they are claimed to realize.
///
/// Blocks are stored sorted. Sizes are not checked here; that is the job of
/// [`verify_sds`].
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Sds {
    params: ParameterSet,
    blocks: Vec<Vec<u32>>,
}

impl Sds {
    pub fn new(params: ParameterSet, blocks: Vec<Vec<u32>>) -> Result<Self> {
        let v = params.v();
        if v == 0 {
            return Err(Error::EmptySequence);
        }
        let mut sorted = Vec::with_capacity(blocks.len());
        for mut block in blocks {
            block.sort_unstable();
            if let Some(&element) = block.iter().find(|&&e| e >= v) {
                return Err(Error::ResidueOutOfRange {
                    element,
                    modulus: v,
                });
            }
            if let Some(w) = block.windows(2).find(|w| w[0] == w[1]) {
                return Err(Error::DuplicateResidue { element: w[0] });
            }
            sorted.push(block);
        }
        Ok(Sds {
            params,
            blocks: sorted,
        })
    }

    pub fn params(&self) -> &ParameterSet {
        &self.params
    }

    pub fn v(&self) -> u32 {
        self.params.v()
    }

    pub fn blocks(&self) -> &[Vec<u32>] {
        &self.blocks
    }

    /// First block.
    pub fn x(&self) -> &[u32] {
        self.blocks.first().map(Vec::as_slice).unwrap_or(&[])
    }

    /// Second block.
    pub fn y(&self) -> &[u32] {
        self.blocks.get(1).map(Vec::as_slice).unwrap_or(&[])
    }

    /// Binary sequences of the blocks, in block order.
    pub fn sequences(&self) -> Vec<BinarySequence> {
        self.blocks
            .iter()
            .map(|b| BinarySequence::from_subset(b, self.v()).expect("validated on construction"))
            .collect()
    }
}

/// Number of ordered triples `(a, b, i)` with `a, b ∈ X_i` and `a − b ≡ c`,
/// for each residue `c`. Index `0` is left at zero.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DifferenceTable {
    counts: Vec<u64>,
}

impl DifferenceTable {
    pub fn count(&self, difference: u32) -> u64 {
        self.counts[difference as usize]
    }

    /// `(c, count)` for every nonzero `c`.
    pub fn iter(&self) -> impl Iterator<Item = (u32, u64)> + '_ {
        self.counts
            .iter()
            .enumerate()
            .skip(1)
            .map(|(c, &n)| (c as u32, n))
    }

    pub fn total(&self) -> u64 {
        self.counts.iter().sum()
    }
}

pub fn difference_table(sds: &Sds) -> DifferenceTable {
    let v = sds.v();
    let mut counts = vec![0u64; v as usize];
    for block in sds.blocks() {
        for &a in block {
            for &b in block {
                if a != b {
                    counts[((a + v - b) % v) as usize] += 1;
                }
            }
        }
    }
    DifferenceTable { counts }
}

fn check_sizes(sds: &Sds) -> Verdict {
    let sizes = sds.params().block_sizes();
    if sizes.len() != sds.blocks().len() {
        return Err(Violation::BlockCount {
            expected: sizes.len(),
            found: sds.blocks().len(),
        });
    }
    for (i, (block, &k)) in sds.blocks().iter().zip(sizes).enumerate() {
        if block.len() != k as usize {
            return Err(Violation::BlockSize {
                block: i,
                expected: k,
                found: block.len(),
            });
        }
    }
    Ok(())
}

/// Check block sizes, the λ equation and that every nonzero difference
/// occurs exactly λ times. Any number of blocks.
pub fn verify_sds(sds: &Sds) -> Verdict {
    check_sizes(sds)?;
    let q = sds.params();
    if !q.satisfies_lambda_equation() {
        return Err(Violation::LambdaEquation {
            lambda: q.lambda(),
            lhs: q.lambda() as i64 * (q.v() as i64 - 1),
            rhs: q
                .block_sizes()
                .iter()
                .map(|&k| k as i64 * (k as i64 - 1))
                .sum(),
        });
    }
    let table = difference_table(sds);
    let uneven = table.iter().find(|&(_, n)| n != q.lambda() as u64);
    match uneven {
        Some((difference, count)) => Err(Violation::DifferenceCount {
            difference,
            count,
            expected: q.lambda(),
        }),
        None => Ok(()),
    }
}

/// The D-optimal criterion: `v = 2n + 1` and `paf_A(c) + paf_B(c) = 2` for
/// every nonzero shift `c`.
pub fn verify_doptimal(sds: &Sds) -> Verdict {
    check_sizes(sds)?;
    let q = sds.params();
    if q.t() != 2 || q.v() as i64 != 2 * q.n() + 1 {
        return Err(Violation::NotDOptimal(q.to_string()));
    }
    let seqs = sds.sequences();
    let (a, b) = (seqs[0].terms(), seqs[1].terms());
    for shift in 1..a.len() {
        let sum = paf_unchecked(a, shift) + paf_unchecked(b, shift);
        if sum != 2 {
            return Err(Violation::PafSum {
                shift: shift as u32,
                sum,
            });
        }
    }
    Ok(())
}

/// `Σ C_i C_iᵀ = 4n·I + (tv − 4n)·J`, by explicit matrix products.
pub fn verify_matnorm(sds: &Sds) -> Verdict {
    check_sizes(sds)?;
    let v = sds.v() as usize;
    let q = sds.params();
    let four_n = 4 * q.n();
    let off_diagonal = q.t() as i64 * v as i64 - four_n;
    let mut total = vec![vec![0i64; v]; v];
    for block in sds.blocks() {
        let dense = Circulant::from_subset(block, sds.v())
            .expect("validated on construction")
            .to_dense();
        for (acc, row) in total.iter_mut().zip(gram(&dense)) {
            for (a, x) in acc.iter_mut().zip(row) {
                *a += x;
            }
        }
    }
    for (i, row) in total.iter().enumerate() {
        for (j, &found) in row.iter().enumerate() {
            let expected = off_diagonal + if i == j { four_n } else { 0 };
            if found != expected {
                return Err(Violation::MatrixEntry {
                    row: i,
                    col: j,
                    expected,
                    found,
                });
            }
        }
    }
    Ok(())
}

/// Units of `Z_v`, ascending.
pub fn units(v: u32) -> Vec<u32> {
    (1..v.max(2)).filter(|u| u.gcd(&v) == 1).collect()
}

/// Lexicographically least translate `X + c` of a sorted block, as a sorted
/// list. The least translate contains `0`, so it is `X − x` for some `x ∈ X`;
/// comparing those lists is the same as comparing cyclic gap sequences.
fn min_translate(block: &[u32], v: u32) -> Vec<u32> {
    let k = block.len();
    if k == 0 {
        return Vec::new();
    }
    let gaps: Vec<u32> = (0..k)
        .map(|i| {
            let next = if i + 1 < k {
                block[i + 1]
            } else {
                block[0] + v
            };
            next - block[i]
        })
        .collect();
    let mut best = 0;
    for start in 1..k {
        let cmp = (0..k)
            .map(|i| gaps[(start + i) % k].cmp(&gaps[(best + i) % k]))
            .find(|o| *o != Ordering::Equal)
            .unwrap_or(Ordering::Equal);
        if cmp == Ordering::Less {
            best = start;
        }
    }
    let mut out = Vec::with_capacity(k);
    let mut acc = 0;
    for i in 0..k {
        out.push(acc);
        acc += gaps[(best + i) % k];
    }
    out
}

fn scale(block: &[u32], u: u32, v: u32) -> Vec<u32> {
    let mut out: Vec<u32> = block
        .iter()
        .map(|&x| ((x as u64 * u as u64) % v as u64) as u32)
        .collect();
    out.sort_unstable();
    out
}

/// Least representative of the orbit of a two-block SDS under independent
/// translations of each block, a common unit multiplier, and swapping the
/// blocks when `r = s`. Blocks compare as `(X, Y)` lexicographically.
pub fn canonical_form(sds: &Sds) -> Result<Sds> {
    if sds.blocks().len() != 2 {
        return Err(Error::BlockCount {
            expected: 2,
            found: sds.blocks().len(),
        });
    }
    let v = sds.v();
    let mut orders = vec![(sds.x(), sds.y())];
    if sds.x().len() == sds.y().len() {
        orders.push((sds.y(), sds.x()));
    }
    let mut best: Option<(Vec<u32>, Vec<u32>)> = None;
    for u in units(v) {
        for &(x, y) in &orders {
            let cx = min_translate(&scale(x, u, v), v);
            if let Some((bx, _)) = &best {
                if cx > *bx {
                    continue;
                }
            }
            let cy = min_translate(&scale(y, u, v), v);
            let candidate = (cx, cy);
            if best.as_ref().is_none_or(|b| candidate < *b) {
                best = Some(candidate);
            }
        }
    }
    let (x, y) = best.expect("Z_v has at least one unit");
    Ok(Sds {
        params: sds.params().clone(),
        blocks: vec![x, y],
    })
}

pub fn are_equivalent(first: &Sds, second: &Sds) -> Result<bool> {
    if first.params() != second.params() {
        return Err(Error::ParameterMismatch(
            first.params().to_string(),
            second.params().to_string(),
        ));
    }
    Ok(canonical_form(first)? == canonical_form(second)?)
}

/// Where a corpus entry was transcribed from.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Origin {
    /// The table giving one solution per feasible parameter set, `v < 100`.
    ParameterTable,
    /// The numbered solution lists for orders 118, 138, 150, 154 and 174;
    /// `number` counts from 1 within its parameter set.
    NewOrderListing { number: usize },
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CorpusEntry {
    pub sds: Sds,
    pub origin: Origin,
}

impl CorpusEntry {
    pub fn label(&self) -> String {
        match self.origin {
            Origin::ParameterTable => format!("table {}", self.sds.params()),
            Origin::NewOrderListing { number } => {
                format!("listing {} #{number}", self.sds.params())
            }
        }
    }
}

pub const PARAMETER_TABLE_DATA: &str = include_str!("../data/parameter_table.sds");
pub const NEW_ORDERS_DATA: &str = include_str!("../data/new_orders.sds");

/// The embedded corpus of published D-optimal SDSs: 40 table entries followed
/// by 28 listing entries.
pub fn builtin_corpus() -> &'static [CorpusEntry] {
    static CORPUS: OnceLock<Vec<CorpusEntry>> = OnceLock::new();
    CORPUS.get_or_init(|| {
        let table = parse_sds_file(PARAMETER_TABLE_DATA).expect("embedded table parses");
        let listing = parse_sds_file(NEW_ORDERS_DATA).expect("embedded listing parses");
        let mut out: Vec<CorpusEntry> = table
            .into_iter()
            .map(|(_, sds)| CorpusEntry {
                sds,
                origin: Origin::ParameterTable,
            })
            .collect();
        let mut previous: Option<ParameterSet> = None;
        let mut number = 0;
        for (_, sds) in listing {
            if previous.as_ref() == Some(sds.params()) {
                number += 1;
            } else {
                number = 1;
                previous = Some(sds.params().clone());
            }
            out.push(CorpusEntry {
                sds,
                origin: Origin::NewOrderListing { number },
            });
        }
        out
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn pair(v: u32, r: u32, s: u32, l: u32, x: &[u32], y: &[u32]) -> Sds {
        Sds::new(ParameterSet::pair(v, r, s, l), vec![x.to_vec(), y.to_vec()]).unwrap()
    }

    fn shifted(sds: &Sds, cx: u32, cy: u32, u: u32) -> Sds {
        let v = sds.v();
        let map = |b: &[u32], c: u32| b.iter().map(|&e| ((e * u) + c) % v).collect::<Vec<_>>();
        Sds::new(
            sds.params().clone(),
            vec![map(sds.x(), cx), map(sds.y(), cy)],
        )
        .unwrap()
    }

    #[test]
    fn construction_checks() {
        assert!(Sds::new(ParameterSet::pair(7, 3, 1, 1), vec![vec![0, 1, 7], vec![0]]).is_err());
        assert_eq!(
            Sds::new(ParameterSet::pair(7, 3, 1, 1), vec![vec![1, 1, 3], vec![0]]),
            Err(Error::DuplicateResidue { element: 1 })
        );
        let s = Sds::new(ParameterSet::pair(7, 3, 1, 1), vec![vec![3, 0, 1], vec![0]]).unwrap();
        assert_eq!(s.x(), &[0, 1, 3]);
    }

    #[test]
    fn difference_table_examples() {
        let t = difference_table(&pair(7, 3, 1, 1, &[0, 1, 3], &[0]));
        assert!(t.iter().all(|(_, n)| n == 1));
        let t = difference_table(&pair(5, 1, 1, 0, &[0], &[0]));
        assert!(t.iter().all(|(_, n)| n == 0));
        let single = Sds::new(ParameterSet::new(4, vec![2], 0), vec![vec![0, 1]]).unwrap();
        let t = difference_table(&single);
        assert_eq!((t.count(1), t.count(2), t.count(3)), (1, 0, 1));
        assert_eq!(t.total(), 2);
    }

    #[test]
    fn verify_sds_examples() {
        let s = pair(19, 7, 6, 4, &[0, 1, 2, 3, 7, 11, 14], &[0, 2, 5, 6, 9, 11]);
        assert_eq!(verify_sds(&s), Ok(()));

        let bad = pair(7, 3, 1, 1, &[0, 1, 2], &[0]);
        assert_eq!(
            verify_sds(&bad),
            Err(Violation::DifferenceCount {
                difference: 1,
                count: 2,
                expected: 1
            })
        );

        let fano = Sds::new(ParameterSet::new(7, vec![3], 1), vec![vec![0, 1, 3]]).unwrap();
        assert_eq!(verify_sds(&fano), Ok(()));

        let wrong_size = pair(7, 3, 1, 1, &[0, 1], &[0]);
        assert!(matches!(
            verify_sds(&wrong_size),
            Err(Violation::BlockSize { block: 0, .. })
        ));

        let wrong_lambda = pair(7, 3, 1, 2, &[0, 1, 3], &[0]);
        assert!(matches!(
            verify_sds(&wrong_lambda),
            Err(Violation::LambdaEquation { .. })
        ));
    }

    #[test]
    fn verify_doptimal_examples() {
        assert_eq!(verify_doptimal(&pair(5, 1, 1, 0, &[0], &[0])), Ok(()));
        // paf of [-1,1,1,1,1] is 1 at every nonzero shift
        let a = BinarySequence::from_subset(&[0], 5).unwrap();
        assert!((1..5).all(|s| paf_unchecked(a.terms(), s) == 1));

        let bad = pair(7, 3, 1, 1, &[0, 1, 2], &[0]);
        assert!(matches!(
            verify_doptimal(&bad),
            Err(Violation::PafSum { shift: 1, .. })
        ));
        let fano = Sds::new(ParameterSet::new(7, vec![3], 1), vec![vec![0, 1, 3]]).unwrap();
        assert!(matches!(
            verify_doptimal(&fano),
            Err(Violation::NotDOptimal(_))
        ));
    }

    #[test]
    fn verify_matnorm_examples() {
        let s = pair(7, 3, 1, 1, &[0, 1, 3], &[0]);
        assert_eq!(verify_matnorm(&s), Ok(()));
        let moved = pair(7, 3, 1, 1, &[0, 1, 4], &[0]);
        assert!(matches!(
            verify_matnorm(&moved),
            Err(Violation::MatrixEntry { .. })
        ));
    }

    #[test]
    fn exhaustive_equivalence_of_criteria_for_v7() {
        // every (X, Y) with |X| = 3, |Y| = 1 in Z_7
        let mut passing = 0;
        for mask in 0u32..128 {
            if mask.count_ones() != 3 {
                continue;
            }
            let x: Vec<u32> = (0..7).filter(|i| mask >> i & 1 == 1).collect();
            for y in 0..7 {
                let s = pair(7, 3, 1, 1, &x, &[y]);
                let by_differences = verify_sds(&s).is_ok();
                assert_eq!(by_differences, verify_doptimal(&s).is_ok());
                assert_eq!(by_differences, verify_matnorm(&s).is_ok());
                passing += by_differences as u32;
            }
        }
        // 14 perfect difference sets of size 3 in Z_7, any singleton Y
        assert_eq!(passing, 14 * 7);
    }

    #[test]
    fn min_translate_examples() {
        assert_eq!(min_translate(&[2, 3, 5], 7), vec![0, 1, 3]);
        assert_eq!(min_translate(&[0, 4, 6], 7), vec![0, 1, 5]);
        assert_eq!(min_translate(&[], 7), Vec::<u32>::new());
        assert_eq!(min_translate(&[4], 7), vec![0]);
    }

    #[test]
    fn canonical_examples() {
        let s = pair(7, 3, 1, 1, &[0, 1, 3], &[0]);
        assert!(are_equivalent(&s, &shifted(&s, 3, 5, 1)).unwrap());
        assert!(are_equivalent(&s, &shifted(&s, 0, 0, 2)).unwrap());
        let c = canonical_form(&s).unwrap();
        assert_eq!(canonical_form(&c).unwrap(), c);

        let other = pair(9, 3, 2, 1, &[0, 1, 4], &[0, 2]);
        assert!(are_equivalent(&s, &other).is_err());
    }

    #[test]
    fn canonical_swaps_equal_blocks() {
        let s = pair(13, 4, 4, 2, &[0, 1, 4, 6], &[0, 2, 3, 7]);
        let swapped = pair(13, 4, 4, 2, &[0, 2, 3, 7], &[0, 1, 4, 6]);
        assert!(are_equivalent(&s, &swapped).unwrap());
    }

    #[test]
    fn corpus_shape() {
        let corpus = builtin_corpus();
        assert_eq!(corpus.len(), 68);
        assert_eq!(
            corpus
                .iter()
                .filter(|e| e.origin == Origin::ParameterTable)
                .count(),
            40
        );
        let last = corpus.last().unwrap();
        assert_eq!(last.origin, Origin::NewOrderListing { number: 3 });
        let first87 = corpus
            .iter()
            .find(|e| e.sds.v() == 87 && e.origin == Origin::NewOrderListing { number: 1 })
            .unwrap();
        assert_eq!((first87.sds.x().len(), first87.sds.y().len()), (38, 36));
        assert!(!corpus.iter().any(|e| {
            let p = e.sds.params();
            *p == ParameterSet::pair(85, 39, 34, 31) || *p == ParameterSet::pair(99, 43, 42, 36)
        }));
    }
}
