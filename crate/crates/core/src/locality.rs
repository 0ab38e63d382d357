//! Repair-set combinatorics: repair-set checks, essential covering families,
//! the conditions C1/C2/C3, overlap searches, the C3-breaking procedure and
//! the rank-`(k-1)` witness sets behind the improved bound.
//!
//! Coordinates and block indices are 0-based.

use std::collections::BTreeSet;
use std::fmt;

use itertools::Itertools;
use rayon::prelude::*;
use serde::Serialize;

use crate::bounds::phi;
use crate::code::{binomial, Distance, LinearCode};
use crate::error::{Error, Result};

const REPAIR_SET_GUARD: u64 = 10_000_000;
const OVERLAP_EXHAUSTIVE_GUARD: u64 = 1_000_000;
const ALL_ORDERS_MAX_BLOCKS: usize = 6;

/// `(n, k, r, δ)` with `n = w(r+δ-1) + m`, `0 <= m < r+δ-1` and
/// `k = ur + v`, `0 < v <= r`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct LrcParams {
    pub n: usize,
    pub k: usize,
    pub r: usize,
    pub delta: usize,
    pub w: usize,
    pub m: usize,
    pub u: usize,
    pub v: usize,
}

impl LrcParams {
    pub fn decompose(n: usize, k: usize, r: usize, delta: usize) -> Result<Self> {
        if r == 0 {
            return Err(Error::Infeasible("r must be at least 1".into()));
        }
        if k >= n {
            return Err(Error::Infeasible(format!("k = {k} must be below n = {n}")));
        }
        if r > k {
            return Err(Error::Infeasible(format!("r = {r} exceeds k = {k}")));
        }
        if delta < 2 {
            return Err(Error::Infeasible(format!(
                "delta = {delta} must be at least 2"
            )));
        }
        let s = r + delta - 1;
        let u = (k - 1) / r;
        Ok(Self {
            n,
            k,
            r,
            delta,
            w: n / s,
            m: n % s,
            u,
            v: k - u * r,
        })
    }

    /// Maximum repair-set size `r + δ - 1`.
    pub fn s(&self) -> usize {
        self.r + self.delta - 1
    }

    /// Necessary conditions for a code with all-symbol locality to exist.
    pub fn feasible(&self) -> bool {
        self.w >= self.u && self.n >= self.s()
    }
}

impl fmt::Display for LrcParams {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "(n={}, k={}, r={}, delta={})",
            self.n, self.k, self.r, self.delta
        )
    }
}

/// An ordered family of coordinate subsets of `[n]`; each block is sorted.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RepairFamily {
    n: usize,
    blocks: Vec<Vec<usize>>,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct FamilyFlags {
    pub ecf: bool,
    pub c1: bool,
    pub c2: bool,
    pub c3: bool,
}

impl RepairFamily {
    pub fn new(n: usize, blocks: Vec<Vec<usize>>) -> Result<Self> {
        let mut out = Vec::with_capacity(blocks.len());
        for mut b in blocks {
            if b.is_empty() {
                return Err(Error::EmptyCoordinates);
            }
            b.sort_unstable();
            b.dedup();
            if let Some(&index) = b.iter().find(|&&x| x >= n) {
                return Err(Error::CoordinateOutOfRange { index, n });
            }
            out.push(b);
        }
        Ok(Self { n, blocks: out })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn blocks(&self) -> &[Vec<usize>] {
        &self.blocks
    }

    pub fn len(&self) -> usize {
        self.blocks.len()
    }

    pub fn is_empty(&self) -> bool {
        self.blocks.is_empty()
    }

    /// First coordinate not covered by any block.
    pub fn first_uncovered(&self) -> Option<usize> {
        let counts = multiplicity(self.n, self.blocks.iter());
        counts.iter().position(|&c| c == 0)
    }

    /// Covers `[n]`, every block has at most `max_block` elements and no
    /// block is redundant.
    pub fn is_ecf(&self, max_block: usize) -> bool {
        let counts = multiplicity(self.n, self.blocks.iter());
        counts.iter().all(|&c| c > 0)
            && self
                .blocks
                .iter()
                .all(|b| b.len() <= max_block && b.iter().any(|&x| counts[x] == 1))
    }

    pub fn flags(&self, max_block: usize, delta: usize) -> FamilyFlags {
        let c2 = condition_c2(&self.blocks, delta);
        FamilyFlags {
            ecf: self.is_ecf(max_block),
            c1: condition_c1(&self.blocks, delta),
            c2,
            c3: !c2,
        }
    }

    pub fn select(&self, indices: &[usize]) -> Vec<Vec<usize>> {
        indices.iter().map(|&i| self.blocks[i].clone()).collect()
    }
}

fn multiplicity<'a>(n: usize, blocks: impl Iterator<Item = &'a Vec<usize>>) -> Vec<usize> {
    let mut counts = vec![0usize; n];
    for b in blocks {
        for &x in b {
            if x >= counts.len() {
                counts.resize(x + 1, 0);
            }
            counts[x] += 1;
        }
    }
    counts
}

fn ground_size<'a>(blocks: impl Iterator<Item = &'a Vec<usize>>) -> usize {
    blocks.filter_map(|b| b.last()).max().map_or(0, |&x| x + 1)
}

fn intersection_len(a: &[usize], b: &[usize]) -> usize {
    let (mut i, mut j, mut c) = (0, 0, 0);
    while i < a.len() && j < b.len() {
        match a[i].cmp(&b[j]) {
            std::cmp::Ordering::Less => i += 1,
            std::cmp::Ordering::Greater => j += 1,
            std::cmp::Ordering::Equal => {
                c += 1;
                i += 1;
                j += 1;
            }
        }
    }
    c
}

/// Sorted union of the given blocks.
pub fn union_of<'a>(blocks: impl IntoIterator<Item = &'a Vec<usize>>) -> Vec<usize> {
    blocks
        .into_iter()
        .flatten()
        .copied()
        .collect::<BTreeSet<_>>()
        .into_iter()
        .collect()
}

fn union_idx(blocks: &[Vec<usize>], idx: &[usize]) -> Vec<usize> {
    union_of(idx.iter().map(|&i| &blocks[i]))
}

/// `|S_i ∩ S_j| >= |S_i| - δ + 1`.
fn heavy(a: &[usize], b: &[usize], delta: usize) -> bool {
    intersection_len(a, b) as i64 >= a.len() as i64 - delta as i64 + 1
}

/// `D(B) = Σ|B| - |∪B|`.
pub fn overlap(blocks: &[Vec<usize>]) -> usize {
    blocks.iter().map(Vec::len).sum::<usize>() - union_of(blocks).len()
}

/// `|V|(r+δ-1) - |∪V|`.
pub fn slack(blocks: &[Vec<usize>], s: usize) -> i64 {
    (blocks.len() * s) as i64 - union_of(blocks).len() as i64
}

/// Every block meets the union of the others in fewer than `|S_i| - δ + 1` points.
pub fn condition_c1(blocks: &[Vec<usize>], delta: usize) -> bool {
    let counts = multiplicity(ground_size(blocks.iter()), blocks.iter());
    blocks.iter().all(|b| {
        let shared = b.iter().filter(|&&x| counts[x] >= 2).count() as i64;
        shared < b.len() as i64 - delta as i64 + 1
    })
}

/// Every pair meets in fewer than `min(|S_i|, |S_j|) - δ + 1` points.
pub fn condition_c2(blocks: &[Vec<usize>], delta: usize) -> bool {
    blocks.iter().tuple_combinations().all(|(a, b)| {
        (intersection_len(a, b) as i64) < a.len().min(b.len()) as i64 - delta as i64 + 1
    })
}

pub fn condition_c3(blocks: &[Vec<usize>], delta: usize) -> bool {
    !condition_c2(blocks, delta)
}

/// `|S| <= r+δ-1` and the punctured code on `S` has distance at least `δ`.
/// A punctured code of dimension 0 qualifies.
pub fn is_repair_set(code: &LinearCode, set: &[usize], r: usize, delta: usize) -> Result<bool> {
    if set.is_empty() {
        return Err(Error::EmptyCoordinates);
    }
    code.coord_rank(set)?;
    if set.len() > r + delta - 1 {
        return Ok(false);
    }
    let punctured = code.puncture(set)?;
    if punctured.k() == 0 {
        return Ok(true);
    }
    Ok(matches!(
        punctured.column_search(Some(delta - 1))?.distance,
        Distance::AboveCap(_)
    ))
}

/// Every `(r, δ)`-repair set of the code, sorted lexicographically.
pub fn all_repair_sets(code: &LinearCode, r: usize, delta: usize) -> Result<RepairFamily> {
    let n = code.n();
    let s = (r + delta - 1).min(n);
    let work = binomial(n, s);
    if work > REPAIR_SET_GUARD {
        return Err(Error::GuardExceeded(format!(
            "C({n}, {s}) = {work} candidate repair sets"
        )));
    }
    let mut found: Vec<Vec<usize>> = (1..=s)
        .flat_map(|size| (0..n).combinations(size))
        .par_bridge()
        .filter_map(|set| match is_repair_set(code, &set, r, delta) {
            Ok(true) => Some(Ok(set)),
            Ok(false) => None,
            Err(e) => Some(Err(e)),
        })
        .collect::<Result<_>>()?;
    found.sort();
    RepairFamily::new(n, found)
}

/// Reduces a covering family to an essential covering family by dropping
/// redundant blocks, scanning from the last block to the first.
pub fn extract_ecf(
    family: &RepairFamily,
    r: usize,
    delta: usize,
    code: Option<&LinearCode>,
) -> Result<RepairFamily> {
    let s = r + delta - 1;
    if let Some(b) = family.blocks.iter().find(|b| b.len() > s) {
        return Err(Error::Precondition(format!(
            "block of size {} exceeds r + delta - 1 = {s}",
            b.len()
        )));
    }
    if let Some(x) = family.first_uncovered() {
        return Err(Error::NotCovering(x + 1));
    }
    let mut counts = multiplicity(family.n, family.blocks.iter());
    let mut keep = vec![true; family.len()];
    for i in (0..family.len()).rev() {
        if family.blocks[i].iter().all(|&x| counts[x] >= 2) {
            keep[i] = false;
            for &x in &family.blocks[i] {
                counts[x] -= 1;
            }
        }
    }
    let blocks: Vec<_> = family
        .blocks
        .iter()
        .zip(&keep)
        .filter(|(_, &k)| k)
        .map(|(b, _)| b.clone())
        .collect();
    let ecf = RepairFamily {
        n: family.n,
        blocks,
    };
    if ecf.len() < family.n.div_ceil(s) {
        return Err(Error::Invariant(format!(
            "ECF has {} blocks, fewer than ceil(n/s)",
            ecf.len()
        )));
    }
    if let Some(c) = code {
        if c.n() != family.n {
            return Err(Error::Dimension(format!(
                "family on {} coordinates, code of length {}",
                family.n,
                c.n()
            )));
        }
        if ecf.len() < c.k().div_ceil(r) {
            return Err(Error::Invariant(format!(
                "ECF has {} blocks, fewer than ceil(k/r) = {}; blocks are not repair sets",
                ecf.len(),
                c.k().div_ceil(r)
            )));
        }
    }
    Ok(ecf)
}

/// A `t`-subfamily with large slack `|V|(r+δ-1) - |∪V|`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct OverlapSubset {
    pub indices: Vec<usize>,
    pub slack: i64,
    pub guarantee: usize,
}

/// Finds a `t`-subset whose slack reaches `Φ(a, t)`, where `a` is the
/// size of the covered ground set.
///
/// Small searches are exhaustive and return the maximum-slack subset (ties
/// to the lexicographically first). Larger ones take the better of a greedy
/// pass and a scan of the `t`-subsets of the first `⌊a/s⌋ + 1` blocks.
pub fn find_overlap_subset(
    blocks: &[Vec<usize>],
    t: usize,
    r: usize,
    delta: usize,
    a: usize,
) -> Result<OverlapSubset> {
    let s = r + delta - 1;
    if t > blocks.len() {
        return Err(Error::Precondition(format!(
            "t = {t} exceeds the family size {}",
            blocks.len()
        )));
    }
    let guarantee = phi(r, delta, a, t)?;
    let score = |idx: &[usize]| (idx.len() * s) as i64 - union_idx(blocks, idx).len() as i64;
    let best_of = |cands: &mut dyn Iterator<Item = Vec<usize>>| {
        let mut best: Option<(i64, Vec<usize>)> = None;
        for c in cands {
            let sc = score(&c);
            if best.as_ref().is_none_or(|(b, _)| sc > *b) {
                best = Some((sc, c));
            }
        }
        best
    };
    let found = if binomial(blocks.len(), t) <= OVERLAP_EXHAUSTIVE_GUARD {
        best_of(&mut (0..blocks.len()).combinations(t))
    } else {
        let mut chosen: Vec<usize> = Vec::with_capacity(t);
        while chosen.len() < t {
            let next = (0..blocks.len())
                .filter(|i| !chosen.contains(i))
                .max_by_key(|&i| {
                    let mut c = chosen.clone();
                    c.push(i);
                    (score(&c), std::cmp::Reverse(i))
                })
                .expect("t <= |family|");
            chosen.push(next);
        }
        chosen.sort_unstable();
        let greedy = (score(&chosen), chosen);
        let head = (a / s + 1).min(blocks.len());
        let averaged = if t <= head && binomial(head, t) <= OVERLAP_EXHAUSTIVE_GUARD {
            best_of(&mut (0..head).combinations(t))
        } else {
            None
        };
        match averaged {
            Some(av) if av.0 > greedy.0 => Some(av),
            _ => Some(greedy),
        }
    };
    let (slack, indices) = found.expect("at least one t-subset exists");
    if slack < guarantee as i64 {
        return Err(Error::Invariant(format!(
            "best {t}-subset has slack {slack} below Phi = {guarantee}"
        )));
    }
    Ok(OverlapSubset {
        indices,
        slack,
        guarantee,
    })
}

/// Output of the C3-breaking procedure and its rank-preserving extension.
#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize)]
pub struct AlgorithmOneResult {
    pub v1: Vec<usize>,
    pub v1_prime: Vec<usize>,
    pub v1_star: Option<Vec<usize>>,
    pub upsilon: Option<Vec<usize>>,
    #[serde(rename = "M")]
    pub m: Option<usize>,
    /// Whether the cardinality bounds `|V1*|, |V1 \ V1*| <= M`, `|V1| <= 2M`
    /// were checked; they require an essential covering family.
    pub cardinality_checked: bool,
}

fn heavy_table(blocks: &[Vec<usize>], delta: usize) -> Vec<Vec<bool>> {
    blocks
        .iter()
        .map(|a| blocks.iter().map(|b| heavy(a, b, delta)).collect())
        .collect()
}

/// Runs both loops of the C3-breaking procedure, always taking the lowest
/// `i` and then the lowest `j`.
pub fn algorithm_one(blocks: &[Vec<usize>], delta: usize) -> Result<AlgorithmOneResult> {
    let h = heavy_table(blocks, delta);
    let len = blocks.len();
    let mut in_v1 = vec![false; len];
    let mut in_v1p = vec![false; len];
    while let Some((i, j)) = (0..len)
        .filter(|&i| !in_v1[i])
        .find_map(|i| (0..len).find(|&j| j != i && h[i][j]).map(|j| (i, j)))
    {
        in_v1[i] = true;
        in_v1[j] = true;
        in_v1p[i] = true;
    }
    while let Some((i, j)) = (0..len)
        .filter(|&i| in_v1[i] && !in_v1p[i])
        .find_map(|i| (0..len).find(|&j| !in_v1[j] && h[i][j]).map(|j| (i, j)))
    {
        in_v1[j] = true;
        in_v1p[i] = true;
    }
    let rest: Vec<_> = (0..len)
        .filter(|&i| !in_v1[i])
        .map(|i| blocks[i].clone())
        .collect();
    if !condition_c2(&rest, delta) {
        return Err(Error::Invariant("family minus V1 violates C2".into()));
    }
    let pick = |mask: &[bool]| (0..len).filter(|&i| mask[i]).collect::<Vec<_>>();
    Ok(AlgorithmOneResult {
        v1: pick(&in_v1),
        v1_prime: pick(&in_v1p),
        ..Default::default()
    })
}

/// Every distinct `(V1, V1')` reachable under some resolution of the
/// procedure's choices. Limited to six blocks.
pub fn algorithm_one_all_orders(
    blocks: &[Vec<usize>],
    delta: usize,
) -> Result<Vec<(Vec<usize>, Vec<usize>)>> {
    let len = blocks.len();
    if len > ALL_ORDERS_MAX_BLOCKS {
        return Err(Error::GuardExceeded(format!(
            "{len} blocks; the order enumerator handles at most 6"
        )));
    }
    let h = heavy_table(blocks, delta);
    let bit = |i: usize| 1u32 << i;
    let mut seen = BTreeSet::new();
    let mut outcomes = BTreeSet::new();
    let mut stack = vec![(0u32, 0u32, false)];
    while let Some(state @ (v1, v1p, phase_two)) = stack.pop() {
        if !seen.insert(state) {
            continue;
        }
        let mut moved = false;
        #[allow(clippy::needless_range_loop)]
        for i in 0..len {
            for j in 0..len {
                let fires = if phase_two {
                    v1 & bit(i) != 0 && v1p & bit(i) == 0 && v1 & bit(j) == 0 && h[i][j]
                } else {
                    v1 & bit(i) == 0 && j != i && h[i][j]
                };
                if fires {
                    moved = true;
                    let nv1 = if phase_two {
                        v1 | bit(j)
                    } else {
                        v1 | bit(i) | bit(j)
                    };
                    stack.push((nv1, v1p | bit(i), phase_two));
                }
            }
        }
        if !moved {
            if phase_two {
                outcomes.insert((v1, v1p));
            } else {
                stack.push((v1, v1p, true));
            }
        }
    }
    let unpack = |mask: u32| (0..len).filter(|&i| mask & bit(i) != 0).collect::<Vec<_>>();
    Ok(outcomes
        .into_iter()
        .map(|(a, b)| (unpack(a), unpack(b)))
        .collect())
}

fn check_indices(len: usize, idx: &[usize]) -> Result<()> {
    match idx.iter().find(|&&i| i >= len) {
        Some(&i) => Err(Error::Precondition(format!(
            "block index {i} outside a family of {len}"
        ))),
        None => Ok(()),
    }
}

/// `(∪_{V} S) \ (∪_{family \ V} S)`.
pub fn upsilon(blocks: &[Vec<usize>], chosen: &[usize]) -> Vec<usize> {
    let inside = union_idx(blocks, chosen);
    let others: Vec<usize> = (0..blocks.len()).filter(|i| !chosen.contains(i)).collect();
    let outside: BTreeSet<usize> = union_idx(blocks, &others).into_iter().collect();
    inside
        .into_iter()
        .filter(|x| !outside.contains(x))
        .collect()
}

/// Extends `V1'` greedily in index order to a maximal `V1*` with
/// `rank(∪V1) = rank(∪(V1 \ V1*))`, then computes `Υ` and `M`.
pub fn extend_v1star(
    code: &LinearCode,
    blocks: &[Vec<usize>],
    result: &AlgorithmOneResult,
) -> Result<AlgorithmOneResult> {
    check_indices(blocks.len(), &result.v1)?;
    check_indices(blocks.len(), &result.v1_prime)?;
    if !result.v1_prime.iter().all(|i| result.v1.contains(i)) {
        return Err(Error::Precondition("V1' is not contained in V1".into()));
    }
    let rank_of = |idx: &[usize]| code.coord_rank(&union_idx(blocks, idx));
    let full = rank_of(&result.v1)?;
    let minus = |star: &[usize]| {
        result
            .v1
            .iter()
            .copied()
            .filter(|i| !star.contains(i))
            .collect::<Vec<_>>()
    };
    if rank_of(&minus(&result.v1_prime))? != full {
        return Err(Error::Invariant(
            "rank(V1) != rank(V1 \\ V1'); blocks are not repair sets of the code".into(),
        ));
    }
    let mut star = result.v1_prime.clone();
    for &i in &result.v1 {
        if star.contains(&i) {
            continue;
        }
        let mut trial = star.clone();
        trial.push(i);
        if rank_of(&minus(&trial))? == full {
            star = trial;
        }
    }
    star.sort_unstable();
    let rest = minus(&star);
    for &i in &rest {
        let without: Vec<usize> = rest.iter().copied().filter(|&j| j != i).collect();
        if rank_of(&without)? >= full {
            return Err(Error::Invariant(format!(
                "block {i} of V1 \\ V1* contributes no rank"
            )));
        }
    }
    let ups = upsilon(blocks, &star);
    let m = ups.len();
    let family = RepairFamily::new(code.n(), blocks.to_vec())?;
    let max_block = blocks.iter().map(Vec::len).max().unwrap_or(0);
    let cardinality_checked = family.is_ecf(max_block);
    if cardinality_checked && (star.len() > m || rest.len() > m || result.v1.len() > 2 * m) {
        return Err(Error::Invariant(format!(
            "|V1*| = {}, |V1 \\ V1*| = {}, |V1| = {} against M = {m}",
            star.len(),
            rest.len(),
            result.v1.len()
        )));
    }
    Ok(AlgorithmOneResult {
        v1: result.v1.clone(),
        v1_prime: result.v1_prime.clone(),
        v1_star: Some(star),
        upsilon: Some(ups),
        m: Some(m),
        cardinality_checked,
    })
}

/// A coordinate set of rank `k - 1` grown from a C1 subfamily.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct LowRankSet {
    pub set: Vec<usize>,
    /// Block indices whose union the set contains.
    pub blocks: Vec<usize>,
    /// `k - 1 + (⌈(k+Δ)/r⌉ - 1)(δ - 1)`.
    pub bound: usize,
}

/// Grows `start` (a C1 subfamily with slack at least `slack_delta`) by
/// rank-increasing blocks to `⌈(k+Δ)/r⌉ - 1` blocks, then adds coordinates
/// while the rank stays below `k`. With `ground`, only coordinates and blocks
/// inside `ground` are used.
pub fn find_low_rank_set(
    code: &LinearCode,
    blocks: &[Vec<usize>],
    start: &[usize],
    slack_delta: usize,
    r: usize,
    delta: usize,
    ground: Option<&[usize]>,
) -> Result<LowRankSet> {
    check_indices(blocks.len(), start)?;
    let k = code.k();
    if k == 0 {
        return Err(Error::ZeroDimension);
    }
    let s = r + delta - 1;
    let u = (k - 1) / r;
    let picked: Vec<Vec<usize>> = start.iter().map(|&i| blocks[i].clone()).collect();
    if !condition_c1(&picked, delta) {
        return Err(Error::Precondition("starting subfamily violates C1".into()));
    }
    if start.len() > u {
        return Err(Error::Precondition(format!(
            "starting subfamily has {} > u = {u} blocks",
            start.len()
        )));
    }
    if slack(&picked, s) < slack_delta as i64 {
        return Err(Error::Precondition(format!(
            "starting slack below {slack_delta}"
        )));
    }
    let inside: Option<BTreeSet<usize>> = ground.map(|g| g.iter().copied().collect());
    let allowed = |b: &Vec<usize>| {
        inside
            .as_ref()
            .is_none_or(|g| b.iter().all(|x| g.contains(x)))
    };
    if !start.iter().all(|&i| allowed(&blocks[i])) {
        return Err(Error::Precondition(
            "starting blocks leave the ground set".into(),
        ));
    }
    let target = (k + slack_delta).div_ceil(r) - 1;
    let mut chosen = start.to_vec();
    let prop2 = |chosen: &[usize]| -> Result<usize> {
        let un = union_idx(blocks, chosen);
        let rank = code.coord_rank(&un)?;
        if rank + chosen.len() * (delta - 1) > un.len() {
            return Err(Error::Invariant(format!(
                "rank {rank} of a C1 union of {} points exceeds |union| - |V|(delta-1)",
                un.len()
            )));
        }
        Ok(rank)
    };
    let mut rank = prop2(&chosen)?;
    while chosen.len() < target {
        let mut next = None;
        for (t, b) in blocks.iter().enumerate() {
            if chosen.contains(&t) || !allowed(b) {
                continue;
            }
            let mut trial = chosen.clone();
            trial.push(t);
            if code.coord_rank(&union_idx(blocks, &trial))? > rank {
                next = Some(t);
                break;
            }
        }
        let t = next.ok_or_else(|| Error::Invariant("no block increases the rank".into()))?;
        chosen.push(t);
        rank = prop2(&chosen)?;
    }
    if rank >= k {
        return Err(Error::Invariant(format!(
            "{} blocks already reach rank k",
            chosen.len()
        )));
    }
    let mut set = union_idx(blocks, &chosen);
    let candidates: Vec<usize> = match ground {
        Some(g) => g.to_vec(),
        None => (0..code.n()).collect(),
    };
    for j in candidates {
        if set.contains(&j) {
            continue;
        }
        set.push(j);
        if code.coord_rank(&set)? > k - 1 {
            set.pop();
        }
    }
    set.sort_unstable();
    if code.coord_rank(&set)? != k - 1 {
        return Err(Error::Invariant("ground set does not span the code".into()));
    }
    let bound = k - 1 + target * (delta - 1);
    if set.len() < bound {
        return Err(Error::Invariant(format!(
            "low-rank set of size {} below {bound}",
            set.len()
        )));
    }
    chosen.sort_unstable();
    Ok(LowRankSet {
        set,
        blocks: chosen,
        bound,
    })
}

/// C1 subfamily of a C2-but-not-C1 family with slack at least `⌈r/2⌉`.
/// Returns indices into `blocks`.
pub fn c1_subfamily_from_c2(blocks: &[Vec<usize>], r: usize, delta: usize) -> Result<Vec<usize>> {
    if !condition_c2(blocks, delta) || condition_c1(blocks, delta) {
        return Err(Error::Precondition(
            "family must satisfy C2 but not C1".into(),
        ));
    }
    let len = blocks.len();
    let need = |i: usize, others: &[usize]| {
        let un = union_idx(blocks, others);
        intersection_len(&blocks[i], &un) as i64 >= blocks[i].len() as i64 - delta as i64 + 1
    };
    let minimal: Vec<Vec<usize>> = (0..len)
        .map(|i| {
            let others: Vec<usize> = (0..len).filter(|&j| j != i).collect();
            if !need(i, &others) {
                return (0..len).collect();
            }
            (1..=others.len())
                .find_map(|size| {
                    others
                        .iter()
                        .copied()
                        .combinations(size)
                        .find(|c| need(i, c))
                        .map(|mut c| {
                            c.push(i);
                            c.sort_unstable();
                            c
                        })
                })
                .expect("the full complement qualifies")
        })
        .collect();
    let tau = (0..len)
        .min_by_key(|&i| (minimal[i].len(), i))
        .expect("nonempty family");
    let v_tau = &minimal[tau];
    if v_tau.len() < 3 {
        return Err(Error::Invariant(
            "minimal violating subfamily has fewer than 3 blocks".into(),
        ));
    }
    let t = *v_tau
        .iter()
        .find(|&&j| j != tau)
        .expect("at least 3 blocks");
    let st = &blocks[tau];
    let result: Vec<usize> =
        if 2 * intersection_len(st, &blocks[t]) as i64 >= st.len() as i64 - delta as i64 + 1 {
            let mut pair = vec![t, tau];
            pair.sort_unstable();
            pair
        } else {
            v_tau.iter().copied().filter(|&j| j != t).collect()
        };
    let picked: Vec<Vec<usize>> = result.iter().map(|&i| blocks[i].clone()).collect();
    if !condition_c1(&picked, delta) || slack(&picked, r + delta - 1) < r.div_ceil(2) as i64 {
        return Err(Error::Invariant(
            "C2-to-C1 reduction lost C1 or the ceil(r/2) slack".into(),
        ));
    }
    Ok(result)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum WitnessCase {
    /// `u > M` and `V3` satisfies C1.
    UAboveMC1,
    /// `u > M` and `V3` satisfies C2 but not C1.
    UAboveMC2,
    /// `u <= M`.
    UAtMostM,
}

/// A set of rank `k - 1`; by the rank characterization of distance,
/// `d <= n - |set|`.
#[derive(Clone, Debug, Serialize)]
pub struct BoundWitness {
    pub params: LrcParams,
    pub set: Vec<usize>,
    #[serde(rename = "M")]
    pub m: usize,
    pub case: WitnessCase,
    /// Lower bound on `|set|` promised for the case reached.
    pub guaranteed: usize,
    pub ecf: Vec<Vec<usize>>,
    pub algorithm: AlgorithmOneResult,
}

impl BoundWitness {
    pub fn certified_distance_bound(&self) -> usize {
        self.params.n - self.set.len()
    }
}

/// ECF and its C3-breaking data for a code with `(r, δ)` all-symbol locality.
pub fn locality_structure(
    code: &LinearCode,
    r: usize,
    delta: usize,
) -> Result<(RepairFamily, AlgorithmOneResult)> {
    let gamma = all_repair_sets(code, r, delta)?;
    if let Some(x) = gamma.first_uncovered() {
        return Err(Error::LocalityAbsent(x + 1));
    }
    let ecf = extract_ecf(&gamma, r, delta, Some(code))?;
    let alg = algorithm_one(ecf.blocks(), delta)?;
    let ext = extend_v1star(code, ecf.blocks(), &alg)?;
    Ok((ecf, ext))
}

/// Builds the rank-`(k-1)` set behind the improved bound.
pub fn bound_witness(code: &LinearCode, r: usize, delta: usize) -> Result<BoundWitness> {
    if code.k() == 0 {
        return Err(Error::ZeroDimension);
    }
    let params = LrcParams::decompose(code.n(), code.k(), r, delta)?;
    let (ecf, alg) = locality_structure(code, r, delta)?;
    let blocks = ecf.blocks();
    let (n, k, u) = (params.n, params.k, params.u);
    let star = alg.v1_star.clone().expect("extended");
    let ups = alg.upsilon.clone().expect("extended");
    let big_m = ups.len();
    let ground: Vec<usize> = (0..n).filter(|x| !ups.contains(x)).collect();
    if code.coord_rank(&ground)? != k {
        return Err(Error::Invariant("deleting Upsilon lowers the rank".into()));
    }
    let rest: Vec<usize> = alg
        .v1
        .iter()
        .copied()
        .filter(|i| !star.contains(i))
        .collect();
    let d1 = delta - 1;
    let (set, case, guaranteed) = if u > big_m {
        let s_star: Vec<usize> = (0..blocks.len()).filter(|i| !star.contains(i)).collect();
        let star_blocks: Vec<Vec<usize>> = s_star.iter().map(|&i| blocks[i].clone()).collect();
        let v2 = find_overlap_subset(&star_blocks, u - big_m, r, delta, n - big_m)?;
        let mut v3: Vec<usize> = v2
            .indices
            .iter()
            .map(|&i| s_star[i])
            .chain(rest.iter().copied())
            .collect();
        v3.sort_unstable();
        v3.dedup();
        let v3_blocks = ecf.select(&v3);
        if condition_c1(&v3_blocks, delta) {
            let f = v2.guarantee;
            let low = find_low_rank_set(code, blocks, &v3, f, r, delta, Some(&ground))?;
            let mut set = low.set;
            set.extend(&ups);
            set.sort_unstable();
            (
                set,
                WitnessCase::UAboveMC1,
                big_m + k - 1 + ((k + f).div_ceil(r) - 1) * d1,
            )
        } else {
            if !condition_c2(&v3_blocks, delta) {
                return Err(Error::Invariant("V3 violates C2".into()));
            }
            let sub = c1_subfamily_from_c2(&v3_blocks, r, delta)?;
            let start: Vec<usize> = sub.iter().map(|&i| v3[i]).collect();
            let half = r.div_ceil(2);
            let low = find_low_rank_set(code, blocks, &start, half, r, delta, None)?;
            (
                low.set,
                WitnessCase::UAboveMC2,
                k - 1 + ((k + half).div_ceil(r) - 1) * d1,
            )
        }
    } else {
        let v4: Vec<usize> = rest.iter().copied().take(u).collect();
        let low = find_low_rank_set(code, blocks, &v4, 0, r, delta, Some(&ground))?;
        let span = union_idx(blocks, &v4);
        let mut set = low.set;
        for &x in &ups {
            if code.span_contains(&span, x)? {
                set.push(x);
            }
        }
        set.sort_unstable();
        (
            set,
            WitnessCase::UAtMostM,
            u + k - 1 + (k.div_ceil(r) - 1) * d1,
        )
    };
    if code.coord_rank(&set)? != k - 1 {
        return Err(Error::Invariant(
            "witness set does not have rank k - 1".into(),
        ));
    }
    if set.len() < guaranteed {
        return Err(Error::Invariant(format!(
            "witness of size {} below the promised {guaranteed}",
            set.len()
        )));
    }
    Ok(BoundWitness {
        params,
        set,
        m: big_m,
        case,
        guaranteed,
        ecf: blocks.to_vec(),
        algorithm: alg,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::gf::FieldSpec;
    use crate::matgf::Matrix;
    use crate::DistanceMethod;

    fn six_four() -> LinearCode {
        let f = FieldSpec::prime(7).unwrap();
        let h = Matrix::from_rows(&f, &[vec![1, 1, 1, 0, 0, 0], vec![0, 0, 0, 1, 1, 1]]).unwrap();
        LinearCode::from_parity(&h).unwrap()
    }

    fn fam(blocks: &[&[usize]]) -> Vec<Vec<usize>> {
        blocks
            .iter()
            .map(|b| b.iter().map(|x| x - 1).collect())
            .collect()
    }

    #[test]
    fn decompose_examples() {
        let p = LrcParams::decompose(37, 27, 4, 2).unwrap();
        assert_eq!((p.w, p.m, p.u, p.v), (7, 2, 6, 3));
        let p = LrcParams::decompose(12, 4, 2, 2).unwrap();
        assert_eq!((p.w, p.m, p.u, p.v), (4, 0, 1, 2));
        let p = LrcParams::decompose(9, 3, 3, 2).unwrap();
        assert_eq!((p.u, p.v), (0, 3));
        assert!(LrcParams::decompose(5, 5, 2, 2).is_err());
        assert!(LrcParams::decompose(9, 3, 4, 2).is_err());
        assert!(LrcParams::decompose(9, 3, 2, 1).is_err());
    }

    #[test]
    fn repair_set_examples() {
        let c = six_four();
        assert!(is_repair_set(&c, &[0, 1, 2], 2, 2).unwrap());
        assert!(!is_repair_set(&c, &[0, 1], 2, 2).unwrap());
        assert!(!is_repair_set(&c, &[4], 2, 2).unwrap());
        assert!(matches!(
            is_repair_set(&c, &[], 2, 2),
            Err(Error::EmptyCoordinates)
        ));
    }

    #[test]
    fn all_repair_sets_examples() {
        assert_eq!(
            all_repair_sets(&six_four(), 2, 2).unwrap().blocks(),
            fam(&[&[1, 2, 3], &[4, 5, 6]])
        );
        let f2 = FieldSpec::prime(2).unwrap();
        let rep =
            LinearCode::from_generator(&Matrix::from_rows(&f2, &[vec![1, 1, 1]]).unwrap()).unwrap();
        assert_eq!(
            all_repair_sets(&rep, 1, 2).unwrap().blocks(),
            fam(&[&[1, 2], &[1, 3], &[2, 3]])
        );
        let f5 = FieldSpec::prime(5).unwrap();
        let g = Matrix::from_rows(&f5, &[vec![1, 0, 0, 1], vec![0, 1, 0, 2], vec![0, 0, 1, 3]])
            .unwrap();
        let no_loc = LinearCode::from_generator(&g).unwrap();
        assert!(all_repair_sets(&no_loc, 1, 2).unwrap().is_empty());
    }

    #[test]
    fn extract_ecf_examples() {
        let f = RepairFamily::new(6, fam(&[&[1, 2, 3], &[4, 5, 6]])).unwrap();
        assert_eq!(extract_ecf(&f, 2, 2, Some(&six_four())).unwrap(), f);
        let f = RepairFamily::new(3, fam(&[&[1, 2], &[2, 3], &[1, 3]])).unwrap();
        assert_eq!(
            extract_ecf(&f, 1, 2, None).unwrap().blocks(),
            fam(&[&[1, 2], &[2, 3]])
        );
        let f = RepairFamily::new(4, fam(&[&[1, 2, 3], &[2, 3, 4], &[1, 2, 3], &[3, 4]])).unwrap();
        let e = extract_ecf(&f, 2, 2, None).unwrap();
        assert_eq!(e.blocks(), fam(&[&[1, 2, 3], &[2, 3, 4]]));
        assert!(e.is_ecf(3));
        let f = RepairFamily::new(4, fam(&[&[1, 2]])).unwrap();
        assert!(matches!(
            extract_ecf(&f, 1, 2, None),
            Err(Error::NotCovering(3))
        ));
    }

    #[test]
    fn overlap_examples() {
        assert_eq!(overlap(&fam(&[&[1, 2], &[3]])), 0);
        assert_eq!(overlap(&fam(&[&[1, 2], &[2, 3]])), 1);
        assert_eq!(overlap(&fam(&[&[1, 2, 3], &[1, 2, 3]])), 3);
    }

    #[test]
    fn condition_examples() {
        let disjoint = fam(&[&[1, 2, 3], &[4, 5, 6]]);
        assert!(condition_c1(&disjoint, 2) && condition_c2(&disjoint, 2));
        assert!(condition_c3(&fam(&[&[1, 2, 3], &[2, 3, 4]]), 2));
        assert!(condition_c2(&fam(&[&[1, 2, 3], &[3, 4, 5]]), 2));
    }

    #[test]
    fn overlap_subset_examples() {
        let s = fam(&[&[1, 2, 3], &[4, 5, 6], &[6, 7]]);
        assert_eq!(
            find_overlap_subset(&s, 0, 2, 2, 7).unwrap().indices,
            Vec::<usize>::new()
        );
        let found = find_overlap_subset(&s, 2, 2, 2, 7).unwrap();
        assert_eq!(
            (found.indices, found.slack, found.guarantee),
            (vec![1, 2], 2, 1)
        );
        let partition = fam(&[&[1, 2, 3], &[4, 5, 6]]);
        assert_eq!(
            find_overlap_subset(&partition, 1, 2, 2, 6)
                .unwrap()
                .guarantee,
            0
        );
    }

    #[test]
    fn algorithm_one_examples() {
        let disjoint = fam(&[&[1, 2], &[3, 4]]);
        let res = algorithm_one(&disjoint, 2).unwrap();
        assert!(res.v1.is_empty() && res.v1_prime.is_empty());
        let res =
            algorithm_one(&fam(&[&[1, 2, 3], &[2, 3, 4], &[5, 6, 7], &[7, 8, 9]]), 2).unwrap();
        assert_eq!((res.v1, res.v1_prime), (vec![0, 1], vec![0]));
        let res = algorithm_one(&fam(&[&[1, 2, 3], &[1, 2, 3, 4]]), 2).unwrap();
        assert_eq!((res.v1, res.v1_prime), (vec![0, 1], vec![0]));
    }

    #[test]
    fn all_orders_contains_the_deterministic_run() {
        let s = fam(&[&[1, 2, 3], &[2, 3, 4], &[3, 4, 5], &[6, 7]]);
        let det = algorithm_one(&s, 2).unwrap();
        let all = algorithm_one_all_orders(&s, 2).unwrap();
        assert!(all.contains(&(det.v1, det.v1_prime)));
        assert!(all.len() > 1);
    }

    #[test]
    fn extend_v1star_examples() {
        let c = six_four();
        let blocks = fam(&[&[1, 2, 3], &[4, 5, 6]]);
        let res = extend_v1star(&c, &blocks, &algorithm_one(&blocks, 2).unwrap()).unwrap();
        assert_eq!((res.v1_star, res.m), (Some(vec![]), Some(0)));

        // span(S1) is inside span(S2) since S1 is a subset of S2
        let f5 = FieldSpec::prime(5).unwrap();
        let g = Matrix::from_rows(&f5, &[vec![1, 0, 0, 1], vec![0, 1, 0, 1], vec![0, 0, 1, 1]])
            .unwrap();
        let c = LinearCode::from_generator(&g).unwrap();
        let blocks = fam(&[&[1, 2, 3], &[1, 2, 3, 4]]);
        let res = extend_v1star(&c, &blocks, &algorithm_one(&blocks, 2).unwrap()).unwrap();
        assert_eq!(res.v1_star, Some(vec![0]));
        assert_eq!(res.upsilon, Some(vec![]));
        assert!(!res.cardinality_checked);
    }

    #[test]
    fn low_rank_set_examples() {
        let c = six_four();
        let blocks = fam(&[&[1, 2, 3], &[4, 5, 6]]);
        let low = find_low_rank_set(&c, &blocks, &[0], 0, 2, 2, None).unwrap();
        assert_eq!(low.set.len(), 4);
        assert_eq!(&low.set[..3], &[0, 1, 2]);
        assert_eq!(c.coord_rank(&low.set).unwrap(), 3);
        let low = find_low_rank_set(&c, &blocks, &[], 0, 2, 2, None).unwrap();
        assert!(low.set.len() >= 4);
        assert!(matches!(
            find_low_rank_set(&c, &blocks, &[0, 1], 0, 2, 2, None),
            Err(Error::Precondition(_))
        ));
    }

    #[test]
    fn bound_witness_on_six_four() {
        let c = six_four();
        let w = bound_witness(&c, 2, 2).unwrap();
        assert_eq!((w.m, w.case), (0, WitnessCase::UAboveMC1));
        assert!(w.set.len() >= 4);
        let d = c
            .min_distance(DistanceMethod::Codewords, None)
            .unwrap()
            .exact()
            .unwrap();
        assert_eq!(d, 2);
        assert!(w.certified_distance_bound() >= d);
        assert_eq!(w.certified_distance_bound(), 2);
    }

    #[test]
    fn bound_witness_without_locality() {
        let f5 = FieldSpec::prime(5).unwrap();
        let g = Matrix::from_rows(&f5, &[vec![1, 0, 0, 1], vec![0, 1, 0, 2], vec![0, 0, 1, 3]])
            .unwrap();
        let c = LinearCode::from_generator(&g).unwrap();
        assert!(matches!(
            bound_witness(&c, 1, 2),
            Err(Error::LocalityAbsent(1))
        ));
    }

    #[test]
    fn c2_to_c1_reduction() {
        let blocks = fam(&[&[1, 2, 3, 4], &[1, 2, 5, 6], &[3, 4, 5, 6]]);
        assert!(condition_c2(&blocks, 2) && !condition_c1(&blocks, 2));
        let sub = c1_subfamily_from_c2(&blocks, 3, 2).unwrap();
        let picked: Vec<_> = sub.iter().map(|&i| blocks[i].clone()).collect();
        assert!(condition_c1(&picked, 2));
        assert!(slack(&picked, 4) >= 2);
    }
}
