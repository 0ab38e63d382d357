//! Shared generators and independent oracles for the integration suites.
//!
//! The prime-field oracles below use plain `u64` arithmetic mod `p` and never
//! call into the library's field or matrix code.

#![allow(dead_code)]

use itertools::Itertools;
use lrc_core::construct::mds_parity;
use lrc_core::{FieldSpec, LinearCode, Matrix};
use rand::seq::SliceRandom;
use rand::Rng;
use rand_chacha::ChaCha8Rng;

pub use rand::SeedableRng;

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

fn inv_mod(a: u64, p: u64) -> u64 {
    let (mut result, mut base, mut exp) = (1u64, a % p, p - 2);
    while exp > 0 {
        if exp & 1 == 1 {
            result = result * base % p;
        }
        base = base * base % p;
        exp >>= 1;
    }
    result
}

/// Row echelon form mod `p`; returns the pivot columns.
fn echelon(m: &mut [Vec<u64>], p: u64) -> Vec<usize> {
    let rows = m.len();
    let cols = m.first().map_or(0, Vec::len);
    let mut pivots = Vec::new();
    let mut row = 0;
    for col in 0..cols {
        let Some(piv) = (row..rows).find(|&i| m[i][col] != 0) else {
            continue;
        };
        m.swap(row, piv);
        let inv = inv_mod(m[row][col], p);
        for x in m[row].iter_mut() {
            *x = *x * inv % p;
        }
        for i in 0..rows {
            if i != row && m[i][col] != 0 {
                let f = m[i][col];
                let pivot_row = m[row].clone();
                for (x, y) in m[i].iter_mut().zip(&pivot_row) {
                    *x = (*x + (p - f) * y) % p;
                }
            }
        }
        pivots.push(col);
        row += 1;
        if row == rows {
            break;
        }
    }
    pivots
}

pub fn rank_mod_p(m: &[Vec<u64>], p: u64) -> usize {
    let mut work = m.to_vec();
    echelon(&mut work, p).len()
}

/// Basis of `{x : H x = 0}` mod `p`.
pub fn kernel_mod_p(h: &[Vec<u64>], n: usize, p: u64) -> Vec<Vec<u64>> {
    let mut work = h.to_vec();
    let pivots = echelon(&mut work, p);
    let free: Vec<usize> = (0..n).filter(|c| !pivots.contains(c)).collect();
    free.iter()
        .map(|&f| {
            let mut x = vec![0u64; n];
            x[f] = 1;
            for (i, &pc) in pivots.iter().enumerate() {
                x[pc] = (p - work[i][f]) % p;
            }
            x
        })
        .collect()
}

/// Minimum Hamming weight over all nonzero codewords of `ker H`, by full
/// enumeration. `None` for the zero code.
pub fn brute_distance_mod_p(h: &[Vec<u64>], n: usize, p: u64) -> Option<usize> {
    let basis = kernel_mod_p(h, n, p);
    let k = basis.len();
    if k == 0 {
        return None;
    }
    let total = p.pow(k as u32);
    let mut best = n;
    let mut coeffs = vec![0u64; k];
    for _ in 1..total {
        for c in coeffs.iter_mut() {
            *c += 1;
            if *c == p {
                *c = 0;
            } else {
                break;
            }
        }
        let weight = (0..n)
            .filter(|&j| {
                coeffs
                    .iter()
                    .zip(&basis)
                    .map(|(c, b)| c * b[j])
                    .sum::<u64>()
                    % p
                    != 0
            })
            .count();
        best = best.min(weight);
    }
    Some(best)
}

pub fn matrix_rows(m: &Matrix) -> Vec<Vec<u64>> {
    (0..m.rows()).map(|i| m.row_values(i).to_vec()).collect()
}

pub fn random_rows(rng: &mut ChaCha8Rng, rows: usize, cols: usize, p: u64) -> Vec<Vec<u64>> {
    (0..rows)
        .map(|_| (0..cols).map(|_| rng.gen_range(0..p)).collect())
        .collect()
}

/// A random code over GF(p) given by a random parity-check matrix.
pub fn random_code(
    rng: &mut ChaCha8Rng,
    n: usize,
    checks: usize,
    p: u64,
) -> (LinearCode, Vec<Vec<u64>>) {
    let field = FieldSpec::prime(p).unwrap();
    let h = random_rows(rng, checks, n, p);
    let code = LinearCode::from_parity(&Matrix::from_rows(&field, &h).unwrap()).unwrap();
    (code, h)
}

/// A covering family of `[n]` with block sizes in `lo..=hi`: a shuffled
/// partition plus `extra` random blocks.
pub fn random_cover(
    rng: &mut ChaCha8Rng,
    n: usize,
    lo: usize,
    hi: usize,
    extra: usize,
) -> Vec<Vec<usize>> {
    let mut perm: Vec<usize> = (0..n).collect();
    perm.shuffle(rng);
    let mut blocks = Vec::new();
    let mut i = 0;
    while i < n {
        if n - i < lo {
            // Pad a short tail with random coordinates.
            let mut b: Vec<usize> = perm[i..].to_vec();
            while b.len() < lo {
                let x = rng.gen_range(0..n);
                if !b.contains(&x) {
                    b.push(x);
                }
            }
            blocks.push(b);
            break;
        }
        let size = rng.gen_range(lo..=hi).min(n - i);
        blocks.push(perm[i..i + size].to_vec());
        i += size;
    }
    for _ in 0..extra {
        let size = rng.gen_range(lo..=hi);
        blocks.push(
            (0..n)
                .collect_vec()
                .choose_multiple(rng, size)
                .copied()
                .collect(),
        );
    }
    blocks.shuffle(rng);
    for b in &mut blocks {
        b.sort_unstable();
    }
    blocks
}

/// Parity checks making every block a `(|B| - δ + 1, δ)` local code: a
/// column-scaled Reed-Solomon parity check when `p >= |B|`, else `δ - 1`
/// random rows. Plus `global` random rows over all of `[n]`.
pub fn local_parity(
    rng: &mut ChaCha8Rng,
    n: usize,
    blocks: &[Vec<usize>],
    delta: usize,
    global: usize,
    p: u64,
) -> Vec<Vec<u64>> {
    let mut rows = Vec::new();
    for b in blocks {
        let local = if p as usize >= b.len() {
            let m = mds_parity(b.len(), delta, p).unwrap();
            let scale: Vec<u64> = (0..b.len()).map(|_| rng.gen_range(1..p)).collect();
            matrix_rows(&m)
                .into_iter()
                .map(|row| row.iter().zip(&scale).map(|(x, s)| x * s % p).collect())
                .collect()
        } else {
            random_rows(rng, delta - 1, b.len(), p)
        };
        for lr in local {
            let mut row = vec![0u64; n];
            for (j, &x) in b.iter().enumerate() {
                row[x] = lr[j];
            }
            rows.push(row);
        }
    }
    rows.extend(random_rows(rng, global, n, p));
    rows
}

pub fn code_from_rows(h: &[Vec<u64>], n: usize, p: u64) -> LinearCode {
    let field = FieldSpec::prime(p).unwrap();
    let m = if h.is_empty() {
        Matrix::zeros(&field, 0, n)
    } else {
        Matrix::from_rows(&field, h).unwrap()
    };
    LinearCode::from_parity(&m).unwrap()
}

/// Independent evaluation of `Φ(a, b)` straight from its definition.
pub fn phi_oracle(r: usize, delta: usize, a: usize, b: usize) -> usize {
    let s = r + delta - 1;
    let c = a % s;
    if c == 0 {
        return 0;
    }
    let l = a / s;
    let num = b * b.saturating_sub(1) * (s - c);
    let den = (l + 1) * l;
    let avg = num.div_ceil(den);
    (s - c).min((b / 2).max(avg))
}

pub fn ceil_div(a: i64, b: i64) -> i64 {
    (a + b - 1).div_euclid(b)
}

/// `n - k + 1 - (⌈k/r⌉ - 1)(δ - 1)`.
pub fn eq2_oracle(n: i64, k: i64, r: i64, delta: i64) -> i64 {
    n - k + 1 - (ceil_div(k, r) - 1) * (delta - 1)
}

/// Slack `|V| s - |∪V|` of a subfamily.
pub fn slack_oracle(blocks: &[&Vec<usize>], s: usize) -> i64 {
    let union: std::collections::BTreeSet<usize> =
        blocks.iter().flat_map(|b| b.iter().copied()).collect();
    (blocks.len() * s) as i64 - union.len() as i64
}

/// Largest slack over all `t`-subsets.
pub fn best_slack(blocks: &[Vec<usize>], t: usize, s: usize) -> i64 {
    blocks
        .iter()
        .combinations(t)
        .map(|c| slack_oracle(&c, s))
        .max()
        .unwrap_or(0)
}
