//! Exchange seeds, matrix mutation, index swaps and mutation paths.
//!
//! Indices are 0-based everywhere in this crate; the JSON layer converts
//! to the 1-based labels used in the file formats and CLI.

use crate::{Error, Rat, Result};
use num_traits::{Signed, Zero};
use std::fmt;

/// The index set 0..n with the unfrozen block 0..n_uf.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct IndexSet {
    pub n: usize,
    pub n_uf: usize,
}

impl IndexSet {
    pub fn new(n: usize, n_uf: usize) -> Result<IndexSet> {
        if n_uf == 0 || n_uf > n {
            return Err(Error::Config(format!(
                "need 1 <= n_uf <= n, got n_uf={n_uf}, n={n}"
            )));
        }
        Ok(IndexSet { n, n_uf })
    }

    pub fn is_frozen(&self, i: usize) -> bool {
        i >= self.n_uf
    }
}

/// A seed: index set plus skew-symmetric exchange matrix. Entries are
/// exact rationals; integrality is enforced outside the frozen block.
#[derive(Clone, PartialEq, Eq)]
pub struct ExchangeSeed {
    pub index_set: IndexSet,
    b: Vec<Rat>,
}

impl ExchangeSeed {
    pub fn new(index_set: IndexSet, rows: Vec<Vec<Rat>>) -> Result<ExchangeSeed> {
        let n = index_set.n;
        if rows.len() != n || rows.iter().any(|r| r.len() != n) {
            return Err(Error::DimensionMismatch { expected: n, got: rows.len() });
        }
        let mut b = Vec::with_capacity(n * n);
        for row in &rows {
            b.extend(row.iter().cloned());
        }
        let seed = ExchangeSeed { index_set, b };
        seed.validate()?;
        Ok(seed)
    }

    pub fn from_i64(n_uf: usize, rows: Vec<Vec<i64>>) -> ExchangeSeed {
        let n = rows.len();
        let rat_rows = rows
            .into_iter()
            .map(|r| r.into_iter().map(crate::rat_int).collect())
            .collect();
        ExchangeSeed::new(IndexSet::new(n, n_uf).unwrap(), rat_rows).unwrap()
    }

    fn validate(&self) -> Result<()> {
        let n = self.index_set.n;
        for i in 0..n {
            for j in 0..n {
                if self.entry(i, j) != &-self.entry(j, i).clone() {
                    return Err(Error::NotSkewSymmetric { i: i + 1, j: j + 1 });
                }
                let both_frozen =
                    self.index_set.is_frozen(i) && self.index_set.is_frozen(j);
                if !both_frozen && !self.entry(i, j).is_integer() {
                    return Err(Error::NonIntegerEntry { i: i + 1, j: j + 1 });
                }
            }
        }
        Ok(())
    }

    pub fn n(&self) -> usize {
        self.index_set.n
    }

    pub fn n_uf(&self) -> usize {
        self.index_set.n_uf
    }

    pub fn entry(&self, i: usize, j: usize) -> &Rat {
        &self.b[i * self.index_set.n + j]
    }

    pub fn rows(&self) -> Vec<Vec<Rat>> {
        let n = self.index_set.n;
        (0..n)
            .map(|i| (0..n).map(|j| self.entry(i, j).clone()).collect())
            .collect()
    }

    fn check_unfrozen(&self, k: usize) -> Result<()> {
        if k >= self.index_set.n_uf {
            return Err(Error::IndexOutOfRange { index: k + 1, n_uf: self.index_set.n_uf });
        }
        Ok(())
    }

    /// Matrix mutation in direction k: entries in row/column k flip sign,
    /// the rest pick up [b_ik]_+[b_kj]_+ - [-b_ik]_+[-b_kj]_+.
    pub fn mutate(&self, k: usize) -> Result<ExchangeSeed> {
        self.check_unfrozen(k)?;
        let n = self.index_set.n;
        let mut out = self.clone();
        for i in 0..n {
            for j in 0..n {
                let v = if i == k || j == k {
                    -self.entry(i, j).clone()
                } else {
                    let pos = rat_plus(self.entry(i, k)) * rat_plus(self.entry(k, j));
                    let neg = rat_plus(&-self.entry(i, k).clone())
                        * rat_plus(&-self.entry(k, j).clone());
                    self.entry(i, j).clone() + pos - neg
                };
                out.b[i * n + j] = v;
            }
        }
        debug_assert!(out.validate().is_ok());
        Ok(out)
    }

    /// Relabel by a block-preserving permutation: (σ.B)_ij = B_{σ⁻¹i, σ⁻¹j}.
    pub fn permute(&self, sigma: &Permutation) -> Result<ExchangeSeed> {
        sigma.check_block_preserving(&self.index_set)?;
        let n = self.index_set.n;
        let inv = sigma.inverse();
        let mut out = self.clone();
        for i in 0..n {
            for j in 0..n {
                out.b[i * n + j] = self.entry(inv.image(i), inv.image(j)).clone();
            }
        }
        Ok(out)
    }
}

impl fmt::Debug for ExchangeSeed {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "ExchangeSeed(n={}, n_uf={})", self.n(), self.n_uf())?;
        for i in 0..self.n() {
            write!(f, "  [")?;
            for j in 0..self.n() {
                if j > 0 {
                    write!(f, ", ")?;
                }
                write!(f, "{}", self.entry(i, j))?;
            }
            writeln!(f, "]")?;
        }
        Ok(())
    }
}

fn rat_plus(v: &Rat) -> Rat {
    if v.is_positive() {
        v.clone()
    } else {
        Rat::zero()
    }
}

/// A bijection of 0..n.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Permutation {
    images: Vec<usize>,
}

impl Permutation {
    pub fn identity(n: usize) -> Permutation {
        Permutation { images: (0..n).collect() }
    }

    pub fn from_images(images: Vec<usize>) -> Result<Permutation> {
        let n = images.len();
        let mut seen = vec![false; n];
        for &v in &images {
            if v >= n || seen[v] {
                return Err(Error::Parse("not a bijection".into()));
            }
            seen[v] = true;
        }
        Ok(Permutation { images })
    }

    pub fn transposition(n: usize, i: usize, j: usize) -> Result<Permutation> {
        if i >= n || j >= n || i == j {
            return Err(Error::Parse(format!(
                "invalid transposition ({}, {}) on {} indices",
                i + 1,
                j + 1,
                n
            )));
        }
        let mut images: Vec<usize> = (0..n).collect();
        images.swap(i, j);
        Ok(Permutation { images })
    }

    pub fn n(&self) -> usize {
        self.images.len()
    }

    pub fn image(&self, i: usize) -> usize {
        self.images[i]
    }

    pub fn inverse(&self) -> Permutation {
        let mut images = vec![0; self.images.len()];
        for (i, &v) in self.images.iter().enumerate() {
            images[v] = i;
        }
        Permutation { images }
    }

    pub fn check_block_preserving(&self, index_set: &IndexSet) -> Result<()> {
        if self.images.len() != index_set.n {
            return Err(Error::DimensionMismatch {
                expected: index_set.n,
                got: self.images.len(),
            });
        }
        for i in 0..index_set.n {
            if index_set.is_frozen(i) != index_set.is_frozen(self.images[i]) {
                return Err(Error::BlockMixingPermutation { n_uf: index_set.n_uf });
            }
        }
        Ok(())
    }

    /// Permute coordinates of a point: x'_i = x_{σ⁻¹(i)}.
    pub fn apply_point(&self, x: &[Rat]) -> Vec<Rat> {
        let inv = self.inverse();
        (0..x.len().min(self.images.len()))
            .map(|i| x[inv.image(i)].clone())
            .collect()
    }
}

/// One edge of a path: a mutation or a transposition of two labels.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum PathStep {
    /// Mutate at an unfrozen index.
    Mutate(usize),
    /// Swap two labels within one block.
    Swap(usize, usize),
}

/// A path of mutations and swaps starting at a fixed seed.
#[derive(Debug, Clone)]
pub struct MutationPath {
    pub start: ExchangeSeed,
    pub steps: Vec<PathStep>,
}

impl MutationPath {
    pub fn new(start: ExchangeSeed, steps: Vec<PathStep>) -> Result<MutationPath> {
        let path = MutationPath { start, steps };
        path.validate()?;
        Ok(path)
    }

    fn validate(&self) -> Result<()> {
        let idx = self.start.index_set;
        for step in &self.steps {
            match *step {
                PathStep::Mutate(k) => {
                    if k >= idx.n_uf {
                        return Err(Error::IndexOutOfRange { index: k + 1, n_uf: idx.n_uf });
                    }
                }
                PathStep::Swap(i, j) => {
                    Permutation::transposition(idx.n, i, j)?
                        .check_block_preserving(&idx)?;
                }
            }
        }
        Ok(())
    }

    pub fn horizontal_len(&self) -> usize {
        self.steps
            .iter()
            .filter(|s| matches!(s, PathStep::Mutate(_)))
            .count()
    }

    /// Seed at the endpoint of the path.
    pub fn endpoint(&self) -> Result<ExchangeSeed> {
        let mut seed = self.start.clone();
        for step in &self.steps {
            seed = apply_step(&seed, step)?;
        }
        Ok(seed)
    }

    /// True iff the endpoint exchange matrix equals the start entrywise.
    pub fn is_mutation_loop(&self) -> Result<bool> {
        Ok(self.endpoint()? == self.start)
    }

    pub fn require_loop(&self) -> Result<()> {
        if self.is_mutation_loop()? {
            Ok(())
        } else {
            Err(Error::NotALoop)
        }
    }
}

pub fn apply_step(seed: &ExchangeSeed, step: &PathStep) -> Result<ExchangeSeed> {
    match *step {
        PathStep::Mutate(k) => seed.mutate(k),
        PathStep::Swap(i, j) => {
            let sigma = Permutation::transposition(seed.n(), i, j)?;
            seed.permute(&sigma)
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn a2() -> ExchangeSeed {
        ExchangeSeed::from_i64(2, vec![vec![0, 1], vec![-1, 0]])
    }

    fn kronecker(l: i64) -> ExchangeSeed {
        ExchangeSeed::from_i64(2, vec![vec![0, -l], vec![l, 0]])
    }

    #[test]
    fn mutate_a2() {
        let m = a2().mutate(0).unwrap();
        assert_eq!(m, ExchangeSeed::from_i64(2, vec![vec![0, -1], vec![1, 0]]));
    }

    #[test]
    fn mutate_zero_matrix_fixed() {
        let z = ExchangeSeed::from_i64(1, vec![vec![0, 0], vec![0, 0]]);
        assert_eq!(z.mutate(0).unwrap(), z);
    }

    #[test]
    fn mutate_kronecker() {
        let m = kronecker(2).mutate(0).unwrap();
        assert_eq!(m, ExchangeSeed::from_i64(2, vec![vec![0, 2], vec![-2, 0]]));
    }

    #[test]
    fn mutation_is_involutive() {
        for seed in [a2(), kronecker(3)] {
            for k in 0..seed.n_uf() {
                assert_eq!(seed.mutate(k).unwrap().mutate(k).unwrap(), seed);
            }
        }
    }

    #[test]
    fn permute_swap_negates_2x2() {
        let sigma = Permutation::transposition(2, 0, 1).unwrap();
        let p = a2().permute(&sigma).unwrap();
        assert_eq!(p, ExchangeSeed::from_i64(2, vec![vec![0, -1], vec![1, 0]]));
        let id = Permutation::identity(2);
        assert_eq!(a2().permute(&id).unwrap(), a2());
    }

    #[test]
    fn permute_three_cycle() {
        // b_01 = 1, b_12 = 1; relabel by the cycle 0->1->2->0
        let b = ExchangeSeed::from_i64(
            3,
            vec![vec![0, 1, 0], vec![-1, 0, 1], vec![0, -1, 0]],
        );
        let sigma = Permutation::from_images(vec![1, 2, 0]).unwrap();
        let p = b.permute(&sigma).unwrap();
        assert_eq!(p.entry(1, 2), &crate::rat_int(1));
        assert_eq!(p.entry(2, 0), &crate::rat_int(1));
    }

    #[test]
    fn permute_inverse_round_trip() {
        let b = kronecker(2);
        let sigma = Permutation::transposition(2, 0, 1).unwrap();
        let back = b.permute(&sigma).unwrap().permute(&sigma.inverse()).unwrap();
        assert_eq!(back, b);
    }

    #[test]
    fn block_mixing_rejected() {
        let seed = ExchangeSeed::from_i64(1, vec![vec![0, 1], vec![-1, 0]]);
        let sigma = Permutation::transposition(2, 0, 1).unwrap();
        assert!(matches!(
            seed.permute(&sigma),
            Err(Error::BlockMixingPermutation { .. })
        ));
    }

    #[test]
    fn apply_path_a2_five_mutations() {
        let steps = vec![
            PathStep::Mutate(0),
            PathStep::Mutate(1),
            PathStep::Mutate(0),
            PathStep::Mutate(1),
            PathStep::Mutate(0),
        ];
        let path = MutationPath::new(a2(), steps).unwrap();
        let end = path.endpoint().unwrap();
        assert_eq!(end.entry(0, 1), &crate::rat_int(-1));
        // a single swap returns it to the start
        let mut steps = path.steps.clone();
        steps.push(PathStep::Swap(0, 1));
        let pentagon = MutationPath::new(a2(), steps).unwrap();
        assert!(pentagon.is_mutation_loop().unwrap());
    }

    #[test]
    fn empty_path_is_identity() {
        let path = MutationPath::new(a2(), vec![]).unwrap();
        assert_eq!(path.endpoint().unwrap(), a2());
    }

    #[test]
    fn kronecker_twist_is_loop() {
        let path = MutationPath::new(
            kronecker(2),
            vec![PathStep::Mutate(0), PathStep::Swap(0, 1)],
        )
        .unwrap();
        assert!(path.is_mutation_loop().unwrap());
        // a bare mutation is not
        let single = MutationPath::new(a2(), vec![PathStep::Mutate(0)]).unwrap();
        assert!(!single.is_mutation_loop().unwrap());
    }
}
