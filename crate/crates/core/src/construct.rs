//! Optimal LRC constructions from local MDS parity checks plus Moore-matrix
//! global rows, and their end-to-end verification.

use std::fmt;

use itertools::Itertools;
use rand::seq::index::sample;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::bounds::{cor7_bound, cor8_bound};
use crate::code::{binomial, Distance, LinearCode};
use crate::error::{Error, Result};
use crate::gf::{is_prime, FieldElement, FieldSpec};
use crate::locality::{is_repair_set, LrcParams};
use crate::matgf::{block_assemble, moore_matrix, vandermonde, Matrix};

const EXHAUSTIVE_INDEPENDENCE_GUARD: u64 = 10_000_000;
const SAMPLED_SUBSETS: usize = 100_000;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum Variant {
    A,
    B,
}

impl std::str::FromStr for Variant {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "A" | "a" => Ok(Variant::A),
            "B" | "b" => Ok(Variant::B),
            other => Err(Error::Format(format!("unknown variant {other:?}"))),
        }
    }
}

/// Parameters of one construction: `n = w(r+δ-1) + m`, `k = ur + v`, local
/// codes over `GF(q)` and global rows over `GF(q^e)`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ConstructionPlan {
    pub variant: Variant,
    pub r: usize,
    pub delta: usize,
    pub m: usize,
    pub u: usize,
    pub v: usize,
    pub w: usize,
    pub q: u64,
    pub e: usize,
}

impl ConstructionPlan {
    pub fn s(&self) -> usize {
        self.r + self.delta - 1
    }

    pub fn n(&self) -> usize {
        self.w * self.s() + self.m
    }

    pub fn k(&self) -> usize {
        self.u * self.r + self.v
    }

    /// Number of Moore rows; negative values make the plan invalid.
    pub fn h(&self) -> i64 {
        let (n, k, w, m, d1) = (
            self.n() as i64,
            self.k() as i64,
            self.w as i64,
            self.m as i64,
            self.delta as i64 - 1,
        );
        match self.variant {
            Variant::A => n - k - (w + 1) * d1,
            Variant::B => n - k - m - w * d1,
        }
    }

    /// Required independence level of the Moore points.
    pub fn t(&self) -> i64 {
        let (w, u, d1) = (self.w as i64, self.u as i64, self.delta as i64 - 1);
        match self.variant {
            Variant::A => self.h() + (w - u) * d1,
            Variant::B => self.h() + (w + 1 - u) * d1,
        }
    }

    /// `h + (w - u)(δ - 1) + 1`.
    pub fn predicted_distance(&self) -> i64 {
        self.h() + (self.w as i64 - self.u as i64) * (self.delta as i64 - 1) + 1
    }

    pub fn params(&self) -> Result<LrcParams> {
        LrcParams::decompose(self.n(), self.k(), self.r, self.delta)
    }

    /// Checks every precondition, reporting the first one violated.
    pub fn validate(&self) -> Result<()> {
        let fail = |what: &str| Err(Error::InvalidPlan(format!("{what} violated")));
        let (r, d, m, u, v, w) = (self.r, self.delta, self.m, self.u, self.v, self.w);
        if r == 0 {
            return fail("r >= 1");
        }
        if d < 2 {
            return fail("delta >= 2");
        }
        let s = self.s();
        if m >= s {
            return fail("m < r+delta-1");
        }
        if !(0 < v && v < r) {
            return fail("0 < v < r");
        }
        match self.variant {
            Variant::A => {
                if m < d {
                    return fail("m >= delta");
                }
                if v <= (m + 1).saturating_sub(d).max(r / 2) {
                    return fail("v > max{m-delta+1, floor(r/2)}");
                }
                if u < (2 * (s - m)).max(s) {
                    return fail("u >= max{2(r+delta-1-m), r+delta-1}");
                }
                if w + 1 < s - m {
                    return fail("w+1 >= r+delta-1-m");
                }
            }
            Variant::B => {
                if m == 0 || m > d - 1 {
                    return fail("0 < m <= delta-1");
                }
                if v <= r / 2 {
                    return fail("v > floor(r/2)");
                }
                if u < 2 * r + d - 1 {
                    return fail("u >= 2r+delta-1");
                }
            }
        }
        if w < u {
            return fail("w >= u");
        }
        if self.h() < 0 {
            return fail("h >= 0");
        }
        if !is_prime(self.q) {
            return fail("q prime");
        }
        if (self.q as u128) < self.n() as u128 {
            return fail("q >= n");
        }
        let longest = match self.variant {
            Variant::A => s,
            Variant::B => m + s,
        };
        if (self.q as u128) < longest as u128 {
            return fail("q >= local block length");
        }
        if (self.e as i64) < self.t() || self.e == 0 {
            return fail("e >= t");
        }
        FieldSpec::new(self.q, self.e).map_err(|e| Error::InvalidPlan(e.to_string()))?;
        Ok(())
    }
}

/// `(dist-1) x len` Reed-Solomon parity check on the points `0..len` of
/// `GF(q)`.
pub fn mds_parity(len: usize, dist: usize, q: u64) -> Result<Matrix> {
    let field = FieldSpec::prime(q)?;
    if dist == 0 || dist > len {
        return Err(Error::Precondition(format!(
            "need 1 <= dist <= len, got dist = {dist}, len = {len}"
        )));
    }
    if (q as u128) < len as u128 {
        return Err(Error::Precondition(format!(
            "q = {q} is smaller than the length {len}"
        )));
    }
    if dist == 1 {
        return Ok(Matrix::zeros(&field, 0, len));
    }
    let points: Vec<FieldElement> = (0..len as u64)
        .map(|x| field.from_prime_subfield(x))
        .collect();
    vandermonde(&points, dist - 1)
}

/// Splits `A` into its first `cols - 1` columns and its last column.
pub fn split_a1(a: &Matrix) -> Result<(Matrix, Matrix)> {
    if a.cols() < 2 {
        return Err(Error::Dimension(format!(
            "cannot split a matrix with {} columns",
            a.cols()
        )));
    }
    let head: Vec<usize> = (0..a.cols() - 1).collect();
    Ok((a.select_columns(&head), a.select_columns(&[a.cols() - 1])))
}

fn subfield_matrix(points: &[FieldElement], q: u64) -> Result<Matrix> {
    let base = FieldSpec::prime(q)?;
    let rows: Vec<Vec<u64>> = points
        .iter()
        .map(|x| x.as_subfield_vector(q))
        .collect::<Result<_>>()?;
    Matrix::from_rows(&base, &rows)
}

/// Checks that every `t` of the points are linearly independent over
/// `GF(q)`: exhaustively when `C(n, t) <= 10^7`, else on `10^5` random
/// subsets drawn from `seed`.
pub fn verify_twise(points: &[FieldElement], t: usize, q: u64, seed: u64) -> Result<()> {
    let n = points.len();
    if t == 0 {
        return Ok(());
    }
    if t > n {
        return Err(Error::Precondition(format!(
            "t = {t} exceeds the {n} points"
        )));
    }
    let all = subfield_matrix(points, q)?;
    let independent = |subset: &[usize]| all.select_rows(subset).rank() == subset.len();
    let bad = if binomial(n, t) <= EXHAUSTIVE_INDEPENDENCE_GUARD {
        (0..n)
            .combinations(t)
            .par_bridge()
            .find_any(|c| !independent(c))
    } else {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        (0..SAMPLED_SUBSETS)
            .map(|_| sample(&mut rng, n, t).into_vec())
            .find(|c| !independent(c))
    };
    match bad {
        Some(c) => Err(Error::NotIndependent(format!(
            "points {c:?} are dependent over GF({q})"
        ))),
        None => Ok(()),
    }
}

/// `n` points of `GF(q^e)`, any `t` of them independent over `GF(q)`,
/// sorted by the element order.
///
/// Point `j` has coefficient vector `(1, x_j, ..., x_j^(l-1), 0, ...)` with
/// `x_j = j` and `l = min(max(t, 2), e)`. With `l = 1` the points are
/// `1, ..., n` of the prime subfield, which needs `q > n`.
pub fn twise_independent_set(n: usize, t: usize, q: u64, e: usize) -> Result<Vec<FieldElement>> {
    if !is_prime(q) {
        return Err(Error::NotPrime(q));
    }
    if (q as u128) < n as u128 {
        return Err(Error::Precondition(format!(
            "q = {q} < n = {n}; use the randomized builder"
        )));
    }
    if e < t {
        return Err(Error::Precondition(format!("e = {e} < t = {t}")));
    }
    let field = FieldSpec::new(q, e)?;
    let rows = t.max(2).min(e);
    let mut points: Vec<FieldElement> = if rows == 1 {
        if (q as u128) <= n as u128 {
            return Err(Error::Precondition(format!(
                "q = {q} must exceed n = {n} when e = 1"
            )));
        }
        (1..=n as u64)
            .map(|x| field.from_prime_subfield(x))
            .collect()
    } else {
        let base = FieldSpec::prime(q)?;
        let xs: Vec<FieldElement> = (0..n as u64).map(|x| base.from_prime_subfield(x)).collect();
        let vm = vandermonde(&xs, rows)?;
        (0..n)
            .map(|j| {
                let mut coeffs = vec![0u64; e];
                for (i, c) in coeffs.iter_mut().enumerate().take(rows) {
                    *c = vm.value(i, j);
                }
                field.element(&coeffs)
            })
            .collect::<Result<_>>()?
    };
    points.sort();
    verify_twise(&points, t, q, 0)?;
    Ok(points)
}

/// Random `t`-wise independent points for `q < n`, drawn from `seed` and
/// fully verified; gives up after 64 draws.
pub fn twise_independent_set_random(
    n: usize,
    t: usize,
    q: u64,
    e: usize,
    seed: u64,
) -> Result<Vec<FieldElement>> {
    if e < t {
        return Err(Error::Precondition(format!("e = {e} < t = {t}")));
    }
    let field = FieldSpec::new(q, e)?;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    for attempt in 0..64u64 {
        let mut points: Vec<FieldElement> = (0..n)
            .map(|_| field.from_value(rng.gen_range(1..field.order())))
            .collect::<Result<_>>()?;
        points.sort();
        if verify_twise(&points, t, q, seed ^ attempt).is_ok() {
            return Ok(points);
        }
    }
    Err(Error::NotIndependent(format!(
        "no {t}-wise independent draw of {n} points in GF({q}^{e})"
    )))
}

struct Layout {
    local: Vec<Matrix>,
    /// Coordinate sets checked for locality.
    repair_sets: Vec<Vec<usize>>,
}

fn assemble(plan: &ConstructionPlan, layout: Layout) -> Result<Matrix> {
    let ext = FieldSpec::new(plan.q, plan.e)?;
    let (n, k) = (plan.n(), plan.k());
    let h = plan.h() as usize;
    let widths: Vec<usize> = layout.local.iter().map(Matrix::cols).collect();
    if widths.iter().sum::<usize>() != n {
        return Err(Error::Invariant(format!(
            "block widths {widths:?} do not sum to n = {n}"
        )));
    }
    let blocks = layout.local.len();
    let mut grid: Vec<Vec<Option<Matrix>>> = Vec::with_capacity(blocks + 1);
    for (i, b) in layout.local.iter().enumerate() {
        let mut row = vec![None; blocks];
        row[i] = Some(b.embed_into(&ext)?);
        grid.push(row);
    }
    if h > 0 {
        let points = twise_independent_set(n, plan.t() as usize, plan.q, plan.e)?;
        let moore = moore_matrix(&points, h, plan.q)?;
        let mut start = 0;
        let mut row = Vec::with_capacity(blocks);
        for w in &widths {
            let cols: Vec<usize> = (start..start + w).collect();
            row.push(Some(moore.select_columns(&cols)));
            start += w;
        }
        grid.push(row);
    }
    let r = block_assemble(&grid)?;
    if r.rows() != n - k {
        return Err(Error::Invariant(format!(
            "parity check has {} rows, expected n - k = {}",
            r.rows(),
            n - k
        )));
    }
    Ok(r)
}

fn layout_a(plan: &ConstructionPlan) -> Result<Layout> {
    let s = plan.s();
    let a = mds_parity(s, plan.delta, plan.q)?;
    let (a1, _) = split_a1(&a)?;
    let mut local = Vec::new();
    let mut repair_sets = Vec::new();
    let mut start = 0;
    for i in 0..plan.w + 1 {
        let block = if i < s - plan.m {
            a1.clone()
        } else {
            a.clone()
        };
        repair_sets.push((start..start + block.cols()).collect());
        start += block.cols();
        local.push(block);
    }
    Ok(Layout { local, repair_sets })
}

fn layout_b(plan: &ConstructionPlan) -> Result<Layout> {
    let (s, m) = (plan.s(), plan.m);
    let p1 = mds_parity(m + s, m + plan.delta, plan.q)?;
    let p2 = mds_parity(s, plan.delta, plan.q)?;
    let mut local = vec![p1];
    let mut repair_sets = vec![(0..s).collect(), (m..m + s).collect()];
    let mut start = m + s;
    for _ in 1..plan.w {
        repair_sets.push((start..start + s).collect());
        start += s;
        local.push(p2.clone());
    }
    Ok(Layout { local, repair_sets })
}

fn layout(plan: &ConstructionPlan) -> Result<Layout> {
    match plan.variant {
        Variant::A => layout_a(plan),
        Variant::B => layout_b(plan),
    }
}

/// The full `(n-k) x n` parity-check matrix of the plan.
pub fn parity_matrix(plan: &ConstructionPlan) -> Result<Matrix> {
    plan.validate()?;
    assemble(plan, layout(plan)?)
}

/// Coordinate sets that the construction makes repair sets.
pub fn designed_repair_sets(plan: &ConstructionPlan) -> Result<Vec<Vec<usize>>> {
    plan.validate()?;
    Ok(layout(plan)?.repair_sets)
}

pub fn construction_a(plan: &ConstructionPlan) -> Result<LinearCode> {
    if plan.variant != Variant::A {
        return Err(Error::InvalidPlan("variant A expected".into()));
    }
    LinearCode::from_parity(&parity_matrix(plan)?)
}

pub fn construction_b(plan: &ConstructionPlan) -> Result<LinearCode> {
    if plan.variant != Variant::B {
        return Err(Error::InvalidPlan("variant B expected".into()));
    }
    LinearCode::from_parity(&parity_matrix(plan)?)
}

pub fn construct(plan: &ConstructionPlan) -> Result<LinearCode> {
    match plan.variant {
        Variant::A => construction_a(plan),
        Variant::B => construction_b(plan),
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct Check {
    pub name: String,
    pub passed: bool,
    pub detail: String,
}

#[derive(Clone, Debug, Serialize)]
pub struct OptimalityReport {
    pub checks: Vec<Check>,
    pub predicted_distance: i64,
    pub distance: Option<usize>,
    /// `(size, subsets checked)` for each fully independent column-subset size.
    pub independent_levels: Vec<(usize, u64)>,
    /// A dependent set of parity-check columns of size `d`.
    pub dependent_witness: Option<Vec<usize>>,
}

impl OptimalityReport {
    pub fn passed(&self) -> bool {
        self.checks.iter().all(|c| c.passed)
    }
}

impl fmt::Display for OptimalityReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for c in &self.checks {
            writeln!(
                f,
                "{} {}: {}",
                if c.passed { "PASS" } else { "FAIL" },
                c.name,
                c.detail
            )?;
        }
        Ok(())
    }
}

/// Checks dimension, locality, exact distance and agreement with the tight
/// bound for a code built from `plan`.
pub fn verify_optimal(code: &LinearCode, plan: &ConstructionPlan) -> Result<OptimalityReport> {
    plan.validate()?;
    let params = plan.params()?;
    let predicted = plan.predicted_distance();
    let mut checks = Vec::new();
    let mut push = |name: &str, passed: bool, detail: String| {
        checks.push(Check {
            name: name.into(),
            passed,
            detail,
        });
    };

    push(
        "dimension",
        code.n() == plan.n() && code.k() == plan.k(),
        format!(
            "[{}, {}] against planned [{}, {}]",
            code.n(),
            code.k(),
            plan.n(),
            plan.k()
        ),
    );

    let sets = layout(plan)?.repair_sets;
    let mut covered = vec![false; code.n()];
    let mut failing = Vec::new();
    for set in &sets {
        let ok = set.iter().all(|&x| x < code.n()) && is_repair_set(code, set, plan.r, plan.delta)?;
        if ok {
            set.iter().for_each(|&x| covered[x] = true);
        } else {
            failing.push(set.first().map_or(0, |&x| x + 1));
        }
    }
    let uncovered: Vec<usize> = (0..code.n())
        .filter(|&x| !covered[x])
        .map(|x| x + 1)
        .collect();
    push(
        "locality",
        failing.is_empty() && uncovered.is_empty(),
        if failing.is_empty() && uncovered.is_empty() {
            format!(
                "{} repair sets cover all {} coordinates",
                sets.len(),
                code.n()
            )
        } else {
            format!("sets starting at {failing:?} are not repair sets; uncovered {uncovered:?}")
        },
    );

    let (distance, levels, witness) = if code.k() == 0 || predicted < 1 {
        push("distance", false, "no distance to measure".into());
        (None, Vec::new(), None)
    } else {
        let search = code.column_search(Some(predicted as usize))?;
        let d = search.distance.exact();
        let detail = match search.distance {
            Distance::Exact(d) => format!("d = {d}, predicted {predicted}"),
            Distance::AboveCap(c) => format!("d > {c}, predicted {predicted}"),
        };
        push("distance", d == Some(predicted as usize), detail);
        (d, search.independent_levels, search.dependent_witness)
    };

    let bound = match plan.variant {
        Variant::A => cor7_bound(&params),
        Variant::B => cor8_bound(&params),
    };
    match bound {
        Ok(b) => push(
            "bound",
            distance.map(|d| d as i64) == Some(b),
            format!("tight bound {b}, measured {distance:?}"),
        ),
        Err(e) => push("bound", false, e.to_string()),
    }

    let report = OptimalityReport {
        checks,
        predicted_distance: predicted,
        distance,
        independent_levels: levels,
        dependent_witness: witness,
    };
    if report.passed() {
        Ok(report)
    } else {
        Err(Error::NotOptimal(report))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    pub(crate) fn desk_a() -> ConstructionPlan {
        ConstructionPlan {
            variant: Variant::A,
            r: 4,
            delta: 2,
            m: 2,
            u: 6,
            v: 3,
            w: 7,
            q: 37,
            e: 3,
        }
    }

    pub(crate) fn desk_b() -> ConstructionPlan {
        ConstructionPlan {
            variant: Variant::B,
            r: 3,
            delta: 2,
            m: 1,
            u: 7,
            v: 2,
            w: 8,
            q: 37,
            e: 3,
        }
    }

    #[test]
    fn plan_arithmetic() {
        let a = desk_a();
        assert_eq!(
            (a.n(), a.k(), a.h(), a.t(), a.predicted_distance()),
            (37, 27, 2, 3, 4)
        );
        a.validate().unwrap();
        let b = desk_b();
        assert_eq!(
            (b.n(), b.k(), b.h(), b.t(), b.predicted_distance()),
            (33, 23, 1, 3, 3)
        );
        b.validate().unwrap();
    }

    #[test]
    fn plan_rejections() {
        let bad = ConstructionPlan { m: 1, ..desk_a() };
        let msg = bad.validate().unwrap_err().to_string();
        assert!(msg.contains("m >= delta violated"), "{msg}");
        assert!(ConstructionPlan { q: 31, ..desk_a() }.validate().is_err());
        assert!(ConstructionPlan { q: 38, ..desk_a() }.validate().is_err());
        assert!(ConstructionPlan { e: 2, ..desk_a() }.validate().is_err());
        assert!(ConstructionPlan { v: 1, ..desk_b() }.validate().is_err());
    }

    #[test]
    fn mds_parity_examples() {
        assert_eq!(mds_parity(5, 1, 37).unwrap().rows(), 0);
        let p = mds_parity(5, 3, 37).unwrap();
        assert_eq!((p.rows(), p.cols()), (2, 5));
        assert!((0..5)
            .combinations(2)
            .all(|c| p.select_columns(&c).rank() == 2));
        let p = mds_parity(4, 2, 37).unwrap();
        assert_eq!(p.row_values(0), &[1, 1, 1, 1]);
        assert!(mds_parity(8, 3, 7).is_err());
    }

    #[test]
    fn split_examples() {
        let f = FieldSpec::prime(37).unwrap();
        let a = mds_parity(2, 2, 37).unwrap();
        let (a1, a2) = split_a1(&a).unwrap();
        assert_eq!((a1.cols(), a2.cols()), (1, 1));
        let a = mds_parity(5, 2, 37).unwrap();
        let (a1, a2) = split_a1(&a).unwrap();
        assert_eq!((a1.rows(), a1.cols(), a2.cols()), (1, 4, 1));
        let joined = block_assemble(&[vec![Some(a1), Some(a2)]]).unwrap();
        assert_eq!(joined, a);
        assert!(split_a1(&Matrix::zeros(&f, 1, 1)).is_err());
    }

    #[test]
    fn twise_examples() {
        let pts = twise_independent_set(4, 2, 5, 2).unwrap();
        assert_eq!(pts.len(), 4);
        let m = subfield_matrix(&pts, 5).unwrap();
        assert!((0..4)
            .combinations(2)
            .all(|c| m.select_rows(&c).rank() == 2));
        let pts = twise_independent_set(5, 1, 7, 1).unwrap();
        assert!(pts.iter().all(|x| !x.is_zero()));
        assert!(pts.windows(2).all(|w| w[0] < w[1]));
        assert!(twise_independent_set(8, 2, 7, 2).is_err());
        assert!(twise_independent_set(5, 3, 7, 2).is_err());
        let pts = twise_independent_set_random(9, 2, 3, 4, 7).unwrap();
        verify_twise(&pts, 2, 3, 1).unwrap();
    }

    #[test]
    fn desk_a_shape() {
        let plan = desk_a();
        let r = parity_matrix(&plan).unwrap();
        assert_eq!((r.rows(), r.cols(), r.rank()), (10, 37, 10));
        let widths: Vec<usize> = designed_repair_sets(&plan)
            .unwrap()
            .iter()
            .map(Vec::len)
            .collect();
        assert_eq!(widths, vec![4, 4, 4, 5, 5, 5, 5, 5]);
    }

    #[test]
    fn desk_b_shape() {
        let plan = desk_b();
        let r = parity_matrix(&plan).unwrap();
        assert_eq!((r.rows(), r.cols(), r.rank()), (10, 33, 10));
        let code = construction_b(&plan).unwrap();
        assert_eq!(code.k(), 23);
        let sets = designed_repair_sets(&plan).unwrap();
        assert_eq!(sets[0], (0..4).collect::<Vec<_>>());
        assert_eq!(sets[1], (1..5).collect::<Vec<_>>());
        assert!(is_repair_set(&code, &sets[0], 3, 2).unwrap());
        assert!(is_repair_set(&code, &sets[1], 3, 2).unwrap());
    }

    #[test]
    fn verify_desk_b() {
        let plan = desk_b();
        let code = construction_b(&plan).unwrap();
        let report = verify_optimal(&code, &plan).unwrap();
        assert_eq!(report.distance, Some(3));
        assert_eq!(report.independent_levels, vec![(1, 33), (2, 528)]);
        assert_eq!(report.dependent_witness.as_ref().map(Vec::len), Some(3));
    }

    #[test]
    fn tampered_code_fails() {
        let plan = desk_b();
        let mut r = parity_matrix(&plan).unwrap();
        let last = r.rows() - 1;
        for j in 0..r.cols() {
            r.set(last, j, &r.field().zero()).unwrap();
        }
        let code = LinearCode::from_parity(&r).unwrap();
        match verify_optimal(&code, &plan) {
            Err(Error::NotOptimal(rep)) => {
                assert!(rep.checks.iter().any(|c| c.name == "distance" && !c.passed));
            }
            other => panic!("expected a failed report, got {other:?}"),
        }
    }
}
