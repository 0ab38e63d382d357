//! Closed-form distance bounds for LRCs with `(r, δ)` all-symbol locality and
//! the regime classifier over the `(n, k, r, δ)` parameter space.
//!
//! Bound values are `i64`: a value `<= 0` means no code with those parameters
//! (and that `M`) exists.

use serde::Serialize;

use crate::error::{Error, Result};
use crate::locality::LrcParams;

fn ceil_div(a: i64, b: i64) -> i64 {
    debug_assert!(b > 0);
    a.div_euclid(b) + i64::from(a.rem_euclid(b) != 0)
}

/// The slack function `Φ(a, b)` for fixed `r` and `δ`.
pub fn phi(r: usize, delta: usize, a: usize, b: usize) -> Result<usize> {
    if r == 0 || delta < 2 {
        return Err(Error::Infeasible(format!("r = {r}, delta = {delta}")));
    }
    let s = r + delta - 1;
    if a < s {
        return Err(Error::Precondition(format!(
            "Phi needs a >= r + delta - 1 = {s}, got a = {a}"
        )));
    }
    let c = a % s;
    if c == 0 {
        return Ok(0);
    }
    let l = (a / s) as u128;
    let (b, gap) = (b as u128, (s - c) as u128);
    let num = b * b.saturating_sub(1) * gap;
    let den = (l + 1) * l;
    let averaged = num.div_ceil(den);
    Ok(gap.min(averaged.max(b / 2)) as usize)
}

fn require_feasible(p: &LrcParams) -> Result<()> {
    if p.feasible() {
        Ok(())
    } else {
        Err(Error::Infeasible(format!(
            "{p} admits no code with all-symbol locality"
        )))
    }
}

fn ints(p: &LrcParams) -> (i64, i64, i64, i64, i64, i64, i64, i64) {
    let c = |x: usize| x as i64;
    (
        c(p.n),
        c(p.k),
        c(p.r),
        c(p.delta),
        c(p.w),
        c(p.m),
        c(p.u),
        c(p.v),
    )
}

/// Classical Singleton bound `n - k + 1`.
pub fn eq1_bound(p: &LrcParams) -> i64 {
    p.n as i64 - p.k as i64 + 1
}

/// Generalized Singleton bound `n - k + 1 - (⌈k/r⌉ - 1)(δ - 1)`.
pub fn eq2_bound(p: &LrcParams) -> Result<i64> {
    require_feasible(p)?;
    let (n, k, r, d, ..) = ints(p);
    Ok(n - k + 1 - (ceil_div(k, r) - 1) * (d - 1))
}

/// The improved bound for a code whose repair-set family has overlap
/// parameter `M`.
pub fn improved_bound(p: &LrcParams, big_m: usize) -> Result<i64> {
    require_feasible(p)?;
    let (n, k, r, d, _, _, u, _) = ints(p);
    let mm = big_m as i64;
    if u <= mm {
        return Ok(n - k + 1 - (u + (ceil_div(k, r) - 1) * (d - 1)));
    }
    if p.n < big_m + p.s() {
        return Err(Error::Precondition(format!(
            "n - M = {} is below r + delta - 1 = {}",
            p.n.saturating_sub(big_m),
            p.s()
        )));
    }
    let f = phi(p.r, p.delta, p.n - big_m, p.u - big_m)? as i64;
    let halves = (ceil_div(k + ceil_div(r, 2), r) - 1) * (d - 1);
    let slack = mm + (ceil_div(k + f, r) - 1) * (d - 1);
    Ok(n - k + 1 - halves.min(slack))
}

/// Bound for families of pairwise disjoint repair sets.
pub fn cor5_bound(p: &LrcParams) -> Result<i64> {
    require_feasible(p)?;
    let (n, k, r, d, ..) = ints(p);
    let f = phi(p.r, p.delta, p.n, p.u)? as i64;
    Ok(n - k + 1 - (ceil_div(k + f, r) - 1) * (d - 1))
}

/// `m > 0`, `v < r`, `r < k <= n - ⌈k/r⌉(δ-1)` and `v > m - δ + 1`.
pub fn dmax_setting(p: &LrcParams) -> bool {
    let (n, k, r, d, _, m, _, v) = ints(p);
    m > 0 && v < r && r < k && k <= n - ceil_div(k, r) * (d - 1) && v > m - d + 1
}

pub fn cor7_applicable(p: &LrcParams) -> bool {
    let (_, _, r, d, _, m, u, v) = ints(p);
    let s = r + d - 1;
    p.feasible()
        && dmax_setting(p)
        && m >= d
        && r > v
        && v > (m - d + 1).max(r / 2)
        && u >= (2 * (s - m)).max(s)
}

pub fn cor7_bound(p: &LrcParams) -> Result<i64> {
    if !cor7_applicable(p) {
        return Err(Error::NotApplicable(format!("large-m tight bound at {p}")));
    }
    let (n, k, r, d, ..) = ints(p);
    Ok(n - k + 1 - ceil_div(k, r) * (d - 1))
}

pub fn cor8_applicable(p: &LrcParams) -> bool {
    let (_, _, r, d, _, m, u, v) = ints(p);
    p.feasible()
        && dmax_setting(p)
        && 0 < m
        && m <= d - 1
        && r > v
        && v > r / 2
        && u >= 2 * r + d - 1
}

pub fn cor8_bound(p: &LrcParams) -> Result<i64> {
    if !cor8_applicable(p) {
        return Err(Error::NotApplicable(format!("small-m tight bound at {p}")));
    }
    let (n, k, r, d, _, m, ..) = ints(p);
    Ok(n - k + 1 - ceil_div(k, r) * (d - 1) + (d - 1 - m))
}

/// Exact largest achievable distance where it is known in closed form.
pub fn dmax_formula(p: &LrcParams) -> Option<i64> {
    let (n, k, r, d, _, m, u, v) = ints(p);
    let s = r + d - 1;
    if !p.feasible() || !dmax_setting(p) || v <= (m - d + 1).max(r / 2) {
        return None;
    }
    let base = n - k + 1 - ceil_div(k, r) * (d - 1);
    if m >= d && u >= (2 * (s - m)).max(s) {
        Some(base)
    } else if m <= d - 1 && u >= 2 * r + d - 1 {
        Some(base + (d - 1 - m))
    } else {
        None
    }
}

/// Unachievability test for the generalized Singleton bound in the
/// small-`u` region, in exact integer arithmetic.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct Cor10 {
    /// `u > 1`, `0 < m < v+δ-1` and `min{⌈r/2⌉, u(u-1)(s-m)/((w+1)w)} > r - v`.
    pub unachievable: bool,
    /// `v > r/2`, `u > 1` and `0 < m < s - w(w+1)(r-v)/(u(u-1))`.
    pub specialized: bool,
}

pub fn cor10(p: &LrcParams) -> Cor10 {
    let (_, _, r, d, w, m, u, v) = ints(p);
    let s = (r + d - 1) as i128;
    let (w, m, u, r, v, d) = (
        w as i128, m as i128, u as i128, r as i128, v as i128, d as i128,
    );
    if !p.feasible() || u <= 1 || w <= 0 {
        return Cor10 {
            unachievable: false,
            specialized: false,
        };
    }
    let pairs = u * (u - 1);
    let unachievable =
        0 < m && m < v + d - 1 && (r + 1) / 2 > r - v && pairs * (s - m) > (r - v) * (w + 1) * w;
    let specialized = 2 * v > r && 0 < m && m * pairs < s * pairs - w * (w + 1) * (r - v);
    Cor10 {
        unachievable,
        specialized,
    }
}

pub fn cor10_unachievable(p: &LrcParams) -> bool {
    cor10(p).unachievable
}

/// Leaves of the tightness map for the generalized Singleton bound.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Regime {
    DivisibleOptimal,
    RDividesKUnachievable,
    MLargeOptimal,
    Corollary7Tight,
    Corollary8Tight,
    /// Unachievable by the large-`u` argument with neither tight bound applying.
    SongetalUnachievable,
    SongetalOptimalA,
    SongetalOptimalB,
    WesterbackUnachievableA,
    /// `w = 2(s-m) - 1` with `u > r - v`: covered by no leaf of the map.
    UnclassifiedGap,
    WesterbackUnachievableB,
    Corollary10Unachievable,
    #[serde(rename = "open-RI")]
    OpenRI,
    #[serde(rename = "open-RII")]
    OpenRII,
}

impl Regime {
    pub const ALL: [Regime; 14] = [
        Regime::DivisibleOptimal,
        Regime::RDividesKUnachievable,
        Regime::MLargeOptimal,
        Regime::Corollary7Tight,
        Regime::Corollary8Tight,
        Regime::SongetalUnachievable,
        Regime::SongetalOptimalA,
        Regime::SongetalOptimalB,
        Regime::WesterbackUnachievableA,
        Regime::UnclassifiedGap,
        Regime::WesterbackUnachievableB,
        Regime::Corollary10Unachievable,
        Regime::OpenRI,
        Regime::OpenRII,
    ];

    pub fn as_str(self) -> &'static str {
        match self {
            Regime::DivisibleOptimal => "divisible-optimal",
            Regime::RDividesKUnachievable => "r-divides-k-unachievable",
            Regime::MLargeOptimal => "m-large-optimal",
            Regime::Corollary7Tight => "corollary7-tight",
            Regime::Corollary8Tight => "corollary8-tight",
            Regime::SongetalUnachievable => "songetal-unachievable",
            Regime::SongetalOptimalA => "songetal-optimal-a",
            Regime::SongetalOptimalB => "songetal-optimal-b",
            Regime::WesterbackUnachievableA => "westerback-unachievable-a",
            Regime::UnclassifiedGap => "unclassified-gap",
            Regime::WesterbackUnachievableB => "westerback-unachievable-b",
            Regime::Corollary10Unachievable => "corollary10-unachievable",
            Regime::OpenRI => "open-RI",
            Regime::OpenRII => "open-RII",
        }
    }

    pub fn citation(self) -> &'static str {
        match self {
            Regime::DivisibleOptimal => "optimal codes known (Rawat et al. 2014; Song et al. 2014; Tamo-Barg 2014; Cai et al. 2020)",
            Regime::RDividesKUnachievable | Regime::SongetalUnachievable => "unachievable (Song et al. 2014)",
            Regime::MLargeOptimal => "optimal codes known (Tamo et al. 2016; Song et al. 2014)",
            Regime::Corollary7Tight => "tight large-m bound; optimal codes by the Moore-matrix construction A",
            Regime::Corollary8Tight => "tight small-m bound; optimal codes by the Moore-matrix construction B",
            Regime::SongetalOptimalA | Regime::SongetalOptimalB => "optimal codes known (Song et al. 2014)",
            Regime::WesterbackUnachievableA | Regime::WesterbackUnachievableB => {
                "unachievable (Westerback et al. 2016)"
            }
            Regime::UnclassifiedGap => "no result on record",
            Regime::Corollary10Unachievable => "unachievable by the improved bound",
            Regime::OpenRI | Regime::OpenRII => "still open",
        }
    }
}

impl std::fmt::Display for Regime {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(self.as_str())
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Condition {
    pub text: String,
    pub holds: bool,
}

#[derive(Clone, Debug, Serialize)]
pub struct Classification {
    pub regime: Regime,
    pub chain: Vec<Condition>,
}

struct Chain(Vec<Condition>);

impl Chain {
    fn check(&mut self, text: impl Into<String>, holds: bool) -> bool {
        self.0.push(Condition {
            text: text.into(),
            holds,
        });
        holds
    }
}

fn leaf_conditions(p: &LrcParams, leaf: Regime) -> Vec<Condition> {
    let (_, _, r, d, w, m, u, v) = ints(p);
    let s = r + d - 1;
    let rv = r - v;
    let pairs = u * (u - 1);
    let c10 = s * pairs - w * (w + 1) * rv;
    let mut c = Chain(Vec::new());
    let base3 = |c: &mut Chain| {
        c.check("m != 0", m != 0);
        c.check("v < r", v < r);
        c.check("m < v+delta-1", m < v + d - 1);
        c.check("u < 2(r-v)+1", u < 2 * rv + 1);
    };
    let cor7 = 2 * v > r && m >= d && u >= s && u >= 2 * (s - m);
    let cor8 = m <= d - 1 && 2 * v > r && u >= 2 * r + d - 1;
    match leaf {
        Regime::DivisibleOptimal => {
            c.check("m = 0", m == 0);
        }
        Regime::RDividesKUnachievable => {
            c.check("m != 0", m != 0);
            c.check("v = r", v == r);
        }
        Regime::MLargeOptimal => {
            c.check("m != 0", m != 0);
            c.check("v < r", v < r);
            c.check("m >= v+delta-1", m >= v + d - 1);
        }
        Regime::Corollary7Tight | Regime::Corollary8Tight | Regime::SongetalUnachievable => {
            c.check("m != 0", m != 0);
            c.check("v < r", v < r);
            c.check("m < v+delta-1", m < v + d - 1);
            c.check("u >= 2(r-v)+1", u >= 2 * rv + 1);
            match leaf {
                Regime::Corollary7Tight => {
                    c.check("2v > r", 2 * v > r);
                    c.check("m >= delta", m >= d);
                    c.check("u >= r+delta-1", u >= s);
                    c.check("u >= 2(r+delta-1-m)", u >= 2 * (s - m));
                }
                Regime::Corollary8Tight => {
                    c.check("m <= delta-1", m <= d - 1);
                    c.check("2v > r", 2 * v > r);
                    c.check("u >= 2r+delta-1", u >= 2 * r + d - 1);
                }
                _ => {
                    c.check("large-m tight conditions fail", !cor7);
                    c.check("small-m tight conditions fail", !cor8);
                }
            }
        }
        Regime::SongetalOptimalA => {
            base3(&mut c);
            c.check("r-v >= u", rv >= u);
            c.check("w >= r+delta-1-m", w >= s - m);
        }
        Regime::SongetalOptimalB => {
            base3(&mut c);
            c.check("w >= 2(r+delta-1-m)", w >= 2 * (s - m));
            c.check(
                "not (r-v >= u and w >= r+delta-1-m)",
                !(rv >= u && w >= s - m),
            );
        }
        Regime::WesterbackUnachievableA => {
            base3(&mut c);
            c.check("r+delta-1-m <= w", s - m <= w);
            c.check("w < 2(r+delta-1-m)-1", w < 2 * (s - m) - 1);
            c.check("r-v < u", rv < u);
        }
        Regime::UnclassifiedGap => {
            base3(&mut c);
            c.check("w = 2(r+delta-1-m)-1", w == 2 * (s - m) - 1);
            c.check("r-v < u", rv < u);
        }
        Regime::WesterbackUnachievableB => {
            base3(&mut c);
            c.check("w < r+delta-1-m", w < s - m);
            c.check("r-v < u", rv < u);
        }
        Regime::Corollary10Unachievable => {
            base3(&mut c);
            c.check("w < r+delta-1-m", w < s - m);
            c.check("u <= r-v", u <= rv);
            c.check("2v > r", 2 * v > r);
            c.check("u > 1", u > 1);
            c.check(
                "m(u^2-u) < (r+delta-1)(u^2-u) - w(w+1)(r-v)",
                m * pairs < c10,
            );
        }
        Regime::OpenRI => {
            base3(&mut c);
            c.check("w < r+delta-1-m", w < s - m);
            c.check("u <= r-v", u <= rv);
            c.check("2v <= r", 2 * v <= r);
        }
        Regime::OpenRII => {
            base3(&mut c);
            c.check("w < r+delta-1-m", w < s - m);
            c.check("u <= r-v", u <= rv);
            c.check("2v > r", 2 * v > r);
            c.check(
                "m(u^2-u) >= (r+delta-1)(u^2-u) - w(w+1)(r-v)",
                m * pairs >= c10,
            );
        }
    }
    c.0
}

/// Every leaf whose full condition chain holds, each evaluated on its own.
pub fn matching_leaves(p: &LrcParams) -> Vec<Regime> {
    Regime::ALL
        .into_iter()
        .filter(|&leaf| leaf_conditions(p, leaf).iter().all(|c| c.holds))
        .collect()
}

fn walk(p: &LrcParams) -> Regime {
    let (_, _, r, d, w, m, u, v) = ints(p);
    let s = r + d - 1;
    let rv = r - v;
    if m == 0 {
        return Regime::DivisibleOptimal;
    }
    if v == r {
        return Regime::RDividesKUnachievable;
    }
    if m >= v + d - 1 {
        return Regime::MLargeOptimal;
    }
    if u >= 2 * rv + 1 {
        return if 2 * v > r && m >= d && u >= s && u >= 2 * (s - m) {
            Regime::Corollary7Tight
        } else if m <= d - 1 && 2 * v > r && u >= 2 * r + d - 1 {
            Regime::Corollary8Tight
        } else {
            Regime::SongetalUnachievable
        };
    }
    if w >= s - m {
        return if rv >= u {
            Regime::SongetalOptimalA
        } else if w >= 2 * (s - m) {
            Regime::SongetalOptimalB
        } else if w < 2 * (s - m) - 1 {
            Regime::WesterbackUnachievableA
        } else {
            Regime::UnclassifiedGap
        };
    }
    if rv < u {
        return Regime::WesterbackUnachievableB;
    }
    if 2 * v <= r {
        return Regime::OpenRI;
    }
    let pairs = u * (u - 1);
    if u > 1 && m * pairs < s * pairs - w * (w + 1) * rv {
        Regime::Corollary10Unachievable
    } else {
        Regime::OpenRII
    }
}

/// Locates feasible parameters with `u >= 1` in the tightness map.
pub fn classify(p: &LrcParams) -> Result<Classification> {
    require_feasible(p)?;
    if p.u == 0 {
        return Err(Error::Precondition(
            "k = r (u = 0) reduces to the classical Singleton bound".into(),
        ));
    }
    let regime = walk(p);
    let matches = matching_leaves(p);
    if matches != [regime] {
        return Err(Error::Invariant(format!(
            "{p}: tree walk gives {regime}, leaf chains match {matches:?}"
        )));
    }
    Ok(Classification {
        regime,
        chain: leaf_conditions(p, regime),
    })
}

/// Every bound evaluated at one parameter point.
#[derive(Clone, Debug, Serialize)]
pub struct BoundReport {
    pub params: LrcParams,
    pub eq1: i64,
    pub eq2: i64,
    pub cor5: i64,
    #[serde(rename = "M")]
    pub big_m: Option<usize>,
    pub improved: Option<i64>,
    pub cor7: Option<i64>,
    pub cor8: Option<i64>,
    pub dmax: Option<i64>,
    pub cor10: Cor10,
    pub regime: Option<Classification>,
    pub citations: Vec<String>,
}

pub fn report(p: &LrcParams, big_m: Option<usize>) -> Result<BoundReport> {
    require_feasible(p)?;
    let improved = big_m.map(|mm| improved_bound(p, mm)).transpose()?;
    let regime = if p.u >= 1 { Some(classify(p)?) } else { None };
    let mut citations = vec![
        "eq1: classical Singleton bound".to_string(),
        "eq2: generalized Singleton bound for (r,delta) locality".to_string(),
        "cor5: bound for pairwise disjoint repair sets".to_string(),
    ];
    if improved.is_some() {
        citations.push("improved: overlap-sensitive bound with parameter M".into());
    }
    if let Some(c) = &regime {
        citations.push(format!("regime {}: {}", c.regime, c.regime.citation()));
    }
    Ok(BoundReport {
        params: p.clone(),
        eq1: eq1_bound(p),
        eq2: eq2_bound(p)?,
        cor5: cor5_bound(p)?,
        big_m,
        improved,
        cor7: cor7_bound(p).ok(),
        cor8: cor8_bound(p).ok(),
        dmax: dmax_formula(p),
        cor10: cor10(p),
        regime,
        citations,
    })
}
