//! Linear codes, coordinate-set rank, puncturing and minimum distance.
//!
//! Coordinates are 0-based in this API. The JSON formats and the CLI use
//! 1-based coordinates.

use itertools::Itertools;
use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::gf::FieldSpec;
use crate::matgf::Matrix;

const CODEWORD_GUARD: u128 = 1 << 24;
const LEMMA1_MAX_N: usize = 24;

/// An `[n, k]` linear code with a full-rank generator and parity-check matrix.
#[derive(Clone, Debug)]
pub struct LinearCode {
    field: FieldSpec,
    n: usize,
    k: usize,
    generator: Matrix,
    parity: Matrix,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum DistanceMethod {
    /// Enumerate all `q^k` codewords.
    Codewords,
    /// Smallest dependent set of parity-check columns.
    Columns,
    /// `n - max{|N| : rank(N) < k}` over all coordinate sets.
    Lemma1,
}

impl std::str::FromStr for DistanceMethod {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "codewords" => Ok(Self::Codewords),
            "columns" => Ok(Self::Columns),
            "lemma1" => Ok(Self::Lemma1),
            other => Err(Error::Format(format!("unknown distance method {other:?}"))),
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Distance {
    Exact(usize),
    /// No dependent column set of size `<= cap`, so `d > cap`.
    AboveCap(usize),
}

impl Distance {
    pub fn exact(self) -> Option<usize> {
        match self {
            Self::Exact(d) => Some(d),
            Self::AboveCap(_) => None,
        }
    }
}

/// Outcome of the parity-check column search.
#[derive(Clone, Debug)]
pub struct ColumnSearch {
    pub distance: Distance,
    /// `(size, subsets checked)` for every fully swept subset size.
    pub independent_levels: Vec<(usize, u64)>,
    /// Lexicographically first dependent column set of size `d`.
    pub dependent_witness: Option<Vec<usize>>,
}

impl LinearCode {
    /// Code with the given parity-check matrix; `H` need not be full rank.
    pub fn from_parity(h: &Matrix) -> Result<Self> {
        let generator = h.kernel();
        let parity = h.row_basis();
        Ok(Self {
            field: h.field().clone(),
            n: h.cols(),
            k: generator.rows(),
            generator,
            parity,
        })
    }

    /// Code spanned by the rows of `g`; `g` need not be full rank.
    pub fn from_generator(g: &Matrix) -> Result<Self> {
        let generator = g.row_basis();
        let parity = generator.kernel();
        Ok(Self {
            field: g.field().clone(),
            n: g.cols(),
            k: generator.rows(),
            generator,
            parity,
        })
    }

    /// Validates and adopts an explicit `(G, H)` pair.
    pub fn from_pair(g: &Matrix, h: &Matrix) -> Result<Self> {
        if g.field() != h.field() || g.cols() != h.cols() {
            return Err(Error::Dimension(
                "G and H do not share a field and length".into(),
            ));
        }
        let code = Self::from_generator(g)?;
        if !g.mul(&h.transpose())?.is_zero() || h.rank() != code.n - code.k {
            return Err(Error::Format("G and H are not dual".into()));
        }
        Ok(code)
    }

    pub fn field(&self) -> &FieldSpec {
        &self.field
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn k(&self) -> usize {
        self.k
    }

    pub fn generator(&self) -> &Matrix {
        &self.generator
    }

    pub fn parity_check(&self) -> &Matrix {
        &self.parity
    }

    fn check_coords(&self, coords: &[usize]) -> Result<()> {
        match coords.iter().find(|&&c| c >= self.n) {
            Some(&index) => Err(Error::CoordinateOutOfRange { index, n: self.n }),
            None => Ok(()),
        }
    }

    /// Dimension of the span of the generator columns indexed by `coords`.
    pub fn coord_rank(&self, coords: &[usize]) -> Result<usize> {
        self.check_coords(coords)?;
        if coords.is_empty() || self.k == 0 {
            return Ok(0);
        }
        Ok(self.generator.select_columns(coords).rank())
    }

    /// Whether generator column `j` lies in the span of the columns `coords`.
    pub fn span_contains(&self, coords: &[usize], j: usize) -> Result<bool> {
        self.check_coords(coords)?;
        self.check_coords(&[j])?;
        if coords.contains(&j) {
            return Ok(true);
        }
        let mut with = coords.to_vec();
        with.push(j);
        Ok(self.coord_rank(&with)? == self.coord_rank(coords)?)
    }

    /// The punctured code on `coords` (sorted, deduplicated).
    pub fn puncture(&self, coords: &[usize]) -> Result<Self> {
        if coords.is_empty() {
            return Err(Error::EmptyCoordinates);
        }
        self.check_coords(coords)?;
        let mut cols = coords.to_vec();
        cols.sort_unstable();
        cols.dedup();
        Self::from_generator(&self.generator.select_columns(&cols))
    }

    /// Exact minimum distance by the chosen method. `cap` only affects
    /// [`DistanceMethod::Columns`] and defaults to `n - k + 1`.
    pub fn min_distance(&self, method: DistanceMethod, cap: Option<usize>) -> Result<Distance> {
        if self.k == 0 {
            return Err(Error::ZeroDimension);
        }
        match method {
            DistanceMethod::Codewords => self.distance_by_codewords().map(Distance::Exact),
            DistanceMethod::Columns => Ok(self.column_search(cap)?.distance),
            DistanceMethod::Lemma1 => self.distance_by_lemma1().map(Distance::Exact),
        }
    }

    fn distance_by_codewords(&self) -> Result<usize> {
        let q = self.field.order() as u128;
        let total = (0..self.k)
            .try_fold(1u128, |acc, _| acc.checked_mul(q))
            .unwrap_or(u128::MAX);
        if total > CODEWORD_GUARD {
            return Err(Error::GuardExceeded(format!("q^k = {total} codewords")));
        }
        let f = &self.field;
        let n = self.n;
        // scaled[i][a] = a * g_i for every field value a
        let scaled: Vec<Vec<Vec<u64>>> = (0..self.k)
            .map(|i| {
                (0..f.order())
                    .map(|a| {
                        self.generator
                            .row_values(i)
                            .iter()
                            .map(|&g| f.mul_raw(a, g))
                            .collect()
                    })
                    .collect()
            })
            .collect();
        let mut best = n;
        let mut partial = vec![vec![0u64; n]; self.k + 1];
        // Depth-first over message symbols; `nonzero` tracks whether any
        // earlier symbol was nonzero.
        fn walk(
            depth: usize,
            nonzero: bool,
            scaled: &[Vec<Vec<u64>>],
            partial: &mut Vec<Vec<u64>>,
            f: &FieldSpec,
            best: &mut usize,
        ) {
            if depth == scaled.len() {
                if nonzero {
                    let w = partial[depth].iter().filter(|&&v| v != 0).count();
                    *best = (*best).min(w);
                }
                return;
            }
            for (a, row) in scaled[depth].iter().enumerate() {
                let (head, tail) = partial.split_at_mut(depth + 1);
                for (dst, (&src, &add)) in tail[0].iter_mut().zip(head[depth].iter().zip(row)) {
                    *dst = f.add_raw(src, add);
                }
                walk(depth + 1, nonzero || a != 0, scaled, partial, f, best);
            }
        }
        walk(0, false, &scaled, &mut partial, f, &mut best);
        Ok(best)
    }

    fn distance_by_lemma1(&self) -> Result<usize> {
        if self.n > LEMMA1_MAX_N {
            return Err(Error::GuardExceeded(format!(
                "2^{} coordinate sets",
                self.n
            )));
        }
        // Largest rank-deficient coordinate set, scanning sizes downward.
        for size in (0..self.n).rev() {
            let deficient = (0..self.n)
                .combinations(size)
                .par_bridge()
                .any(|set| self.generator.select_columns(&set).rank() < self.k);
            if deficient {
                return Ok(self.n - size);
            }
        }
        unreachable!("the empty set has rank 0 < k")
    }

    /// Ascends subset sizes `1..=cap` over the parity-check columns and stops
    /// at the first size containing a dependent set.
    pub fn column_search(&self, cap: Option<usize>) -> Result<ColumnSearch> {
        if self.k == 0 {
            return Err(Error::ZeroDimension);
        }
        let cap = cap.unwrap_or(self.n - self.k + 1).min(self.n);
        let h = &self.parity;
        let mut levels = Vec::new();
        for size in 1..=cap {
            let witness = (0..self.n).into_par_iter().find_map_first(|first| {
                ((first + 1)..self.n)
                    .combinations(size - 1)
                    .find_map(|rest| {
                        let mut set = Vec::with_capacity(size);
                        set.push(first);
                        set.extend(rest);
                        (h.select_columns(&set).rank() < size).then_some(set)
                    })
            });
            if let Some(w) = witness {
                return Ok(ColumnSearch {
                    distance: Distance::Exact(size),
                    independent_levels: levels,
                    dependent_witness: Some(w),
                });
            }
            levels.push((size, binomial(self.n, size)));
        }
        Ok(ColumnSearch {
            distance: Distance::AboveCap(cap),
            independent_levels: levels,
            dependent_witness: None,
        })
    }
}

pub(crate) fn binomial(n: usize, k: usize) -> u64 {
    if k > n {
        return 0;
    }
    let k = k.min(n - k);
    (0..k).fold(1u64, |acc, i| {
        acc.saturating_mul((n - i) as u64) / (i as u64 + 1)
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn gf(p: u64) -> FieldSpec {
        FieldSpec::prime(p).unwrap()
    }

    fn six_four() -> LinearCode {
        let h =
            Matrix::from_rows(&gf(7), &[vec![1, 1, 1, 0, 0, 0], vec![0, 0, 0, 1, 1, 1]]).unwrap();
        LinearCode::from_parity(&h).unwrap()
    }

    fn all_methods(c: &LinearCode) -> [usize; 3] {
        [
            DistanceMethod::Codewords,
            DistanceMethod::Columns,
            DistanceMethod::Lemma1,
        ]
        .map(|m| c.min_distance(m, None).unwrap().exact().unwrap())
    }

    #[test]
    fn from_parity_examples() {
        let even =
            LinearCode::from_parity(&Matrix::from_rows(&gf(2), &[vec![1, 1, 1]]).unwrap()).unwrap();
        assert_eq!((even.n(), even.k()), (3, 2));
        let zero = LinearCode::from_parity(&Matrix::identity(&gf(2), 4)).unwrap();
        assert_eq!(zero.k(), 0);
        assert!(matches!(
            zero.min_distance(DistanceMethod::Codewords, None),
            Err(Error::ZeroDimension)
        ));
        // a zero column in H gives a free coordinate
        let free =
            LinearCode::from_parity(&Matrix::from_rows(&gf(2), &[vec![1, 1, 0]]).unwrap()).unwrap();
        assert_eq!(all_methods(&free), [1, 1, 1]);
    }

    #[test]
    fn coord_rank_examples() {
        let c = six_four();
        assert_eq!(c.coord_rank(&[]).unwrap(), 0);
        assert_eq!(c.coord_rank(&(0..6).collect::<Vec<_>>()).unwrap(), 4);
        assert_eq!(c.coord_rank(&[0, 1, 2]).unwrap(), 2);
        assert!(matches!(
            c.coord_rank(&[6]),
            Err(Error::CoordinateOutOfRange { index: 6, n: 6 })
        ));
    }

    #[test]
    fn span_contains_examples() {
        let c = six_four();
        assert!(c.span_contains(&[0, 3], 0).unwrap());
        assert!(!c.span_contains(&[], 0).unwrap());
        assert!(c.span_contains(&[0, 1], 2).unwrap());
        assert!(!c.span_contains(&[0, 1], 3).unwrap());
    }

    #[test]
    fn puncture_examples() {
        let rep = LinearCode::from_generator(&Matrix::from_rows(&gf(2), &[vec![1, 1, 1]]).unwrap())
            .unwrap();
        let p = rep.puncture(&[0, 1]).unwrap();
        assert_eq!((p.n(), p.k()), (2, 1));
        assert_eq!(all_methods(&p), [2, 2, 2]);
        assert!(rep
            .puncture(&[0, 1, 2])
            .unwrap()
            .generator()
            .same_row_space(rep.generator()));

        let c = six_four();
        let p = c.puncture(&[0, 1, 2]).unwrap();
        assert_eq!((p.n(), p.k()), (3, 2));
        assert_eq!(all_methods(&p), [2, 2, 2]);
        assert!(matches!(c.puncture(&[]), Err(Error::EmptyCoordinates)));
    }

    #[test]
    fn repetition_and_hamming() {
        let rep = LinearCode::from_generator(&Matrix::from_rows(&gf(2), &[vec![1, 1, 1]]).unwrap())
            .unwrap();
        assert_eq!(all_methods(&rep), [3, 3, 3]);
        let h = Matrix::from_rows(
            &gf(2),
            &[
                vec![1, 0, 1, 0, 1, 0, 1],
                vec![0, 1, 1, 0, 0, 1, 1],
                vec![0, 0, 0, 1, 1, 1, 1],
            ],
        )
        .unwrap();
        let ham = LinearCode::from_parity(&h).unwrap();
        assert_eq!(ham.k(), 4);
        assert_eq!(all_methods(&ham), [3, 3, 3]);
    }

    #[test]
    fn column_search_respects_cap() {
        let rep =
            LinearCode::from_generator(&Matrix::from_rows(&gf(2), &[vec![1, 1, 1, 1]]).unwrap())
                .unwrap();
        let s = rep.column_search(Some(2)).unwrap();
        assert_eq!(s.distance, Distance::AboveCap(2));
        assert_eq!(s.independent_levels, vec![(1, 4), (2, 6)]);
        let s = rep.column_search(None).unwrap();
        assert_eq!(s.distance, Distance::Exact(4));
        assert_eq!(s.dependent_witness, Some(vec![0, 1, 2, 3]));
    }

    #[test]
    fn codeword_guard() {
        let f = FieldSpec::new(2, 20).unwrap();
        let g = Matrix::identity(&f, 2);
        let c = LinearCode::from_generator(&g).unwrap();
        assert!(matches!(
            c.min_distance(DistanceMethod::Codewords, None),
            Err(Error::GuardExceeded(_))
        ));
    }

    #[test]
    fn binomials() {
        assert_eq!(binomial(37, 3), 7770);
        assert_eq!(binomial(33, 2), 528);
        assert_eq!(binomial(5, 7), 0);
    }
}
