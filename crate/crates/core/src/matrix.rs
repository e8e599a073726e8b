//! Dense square integer matrices.
//!
//! Everything downstream composes determinant-±1 matrices, so exact
//! integer arithmetic is both feasible and mandatory. Characteristic
//! polynomials go through rational arithmetic internally and are asserted
//! integral on the way out.

use crate::poly::IntPoly;
use crate::{Error, Int, Rat, Result};
use num_traits::{One, Signed, Zero};
use std::fmt;
use std::ops::{Index, IndexMut};

#[derive(Clone, PartialEq, Eq)]
pub struct IntMat {
    n: usize,
    data: Vec<Int>,
}

impl IntMat {
    pub fn zero(n: usize) -> IntMat {
        IntMat { n, data: vec![Int::zero(); n * n] }
    }

    pub fn identity(n: usize) -> IntMat {
        let mut m = IntMat::zero(n);
        for i in 0..n {
            m[(i, i)] = Int::one();
        }
        m
    }

    pub fn from_rows(rows: Vec<Vec<i64>>) -> IntMat {
        let n = rows.len();
        let mut m = IntMat::zero(n);
        for (i, row) in rows.iter().enumerate() {
            assert_eq!(row.len(), n, "matrix must be square");
            for (j, v) in row.iter().enumerate() {
                m[(i, j)] = Int::from(*v);
            }
        }
        m
    }

    pub fn size(&self) -> usize {
        self.n
    }

    /// Permutation matrix of `images` (0-based): maps basis vector j to
    /// basis vector images[j].
    pub fn permutation(images: &[usize]) -> IntMat {
        let n = images.len();
        let mut m = IntMat::zero(n);
        for (j, &i) in images.iter().enumerate() {
            m[(i, j)] = Int::one();
        }
        m
    }

    pub fn mul(&self, rhs: &IntMat) -> IntMat {
        assert_eq!(self.n, rhs.n);
        let n = self.n;
        let mut out = IntMat::zero(n);
        for i in 0..n {
            for k in 0..n {
                let a = &self[(i, k)];
                if a.is_zero() {
                    continue;
                }
                for j in 0..n {
                    let term = a * &rhs[(k, j)];
                    out[(i, j)] += term;
                }
            }
        }
        out
    }

    pub fn mul_vec(&self, v: &[Rat]) -> Vec<Rat> {
        assert_eq!(v.len(), self.n);
        (0..self.n)
            .map(|i| {
                (0..self.n)
                    .map(|j| Rat::from_integer(self[(i, j)].clone()) * &v[j])
                    .fold(Rat::zero(), |a, b| a + b)
            })
            .collect()
    }

    pub fn mul_vec_f64(&self, v: &[f64]) -> Vec<f64> {
        use num_traits::ToPrimitive;
        (0..self.n)
            .map(|i| {
                (0..self.n)
                    .map(|j| self[(i, j)].to_f64().unwrap() * v[j])
                    .sum()
            })
            .collect()
    }

    pub fn transpose(&self) -> IntMat {
        let mut out = IntMat::zero(self.n);
        for i in 0..self.n {
            for j in 0..self.n {
                out[(j, i)] = self[(i, j)].clone();
            }
        }
        out
    }

    /// Determinant by fraction-free Gaussian elimination (Bareiss).
    pub fn det(&self) -> Int {
        let n = self.n;
        if n == 0 {
            return Int::one();
        }
        let mut a: Vec<Vec<Int>> = (0..n)
            .map(|i| (0..n).map(|j| self[(i, j)].clone()).collect())
            .collect();
        let mut sign = Int::one();
        let mut prev = Int::one();
        for k in 0..n - 1 {
            if a[k][k].is_zero() {
                match (k + 1..n).find(|&r| !a[r][k].is_zero()) {
                    Some(r) => {
                        a.swap(k, r);
                        sign = -sign;
                    }
                    None => return Int::zero(),
                }
            }
            for i in k + 1..n {
                for j in k + 1..n {
                    let num = &a[k][k] * &a[i][j] - &a[i][k] * &a[k][j];
                    a[i][j] = num / &prev;
                }
                a[i][k] = Int::zero();
            }
            prev = a[k][k].clone();
        }
        sign * a[n - 1][n - 1].clone()
    }

    /// Exact inverse. Errors unless the inverse is again integral
    /// (determinant ±1), which is the only case this library needs.
    pub fn inverse_unimodular(&self) -> Result<IntMat> {
        let n = self.n;
        let mut a: Vec<Vec<Rat>> = (0..n)
            .map(|i| {
                (0..2 * n)
                    .map(|j| {
                        if j < n {
                            Rat::from_integer(self[(i, j)].clone())
                        } else if j - n == i {
                            Rat::one()
                        } else {
                            Rat::zero()
                        }
                    })
                    .collect()
            })
            .collect();
        for col in 0..n {
            let pivot = (col..n)
                .find(|&r| !a[r][col].is_zero())
                .ok_or_else(|| Error::Anomaly("singular matrix has no inverse".into()))?;
            a.swap(col, pivot);
            let p = a[col][col].clone();
            for j in 0..2 * n {
                a[col][j] = &a[col][j] / &p;
            }
            for r in 0..n {
                if r != col && !a[r][col].is_zero() {
                    let f = a[r][col].clone();
                    for j in 0..2 * n {
                        let t = &a[col][j] * &f;
                        a[r][j] = &a[r][j] - &t;
                    }
                }
            }
        }
        let mut out = IntMat::zero(n);
        for i in 0..n {
            for j in 0..n {
                let v = &a[i][n + j];
                if !v.is_integer() {
                    return Err(Error::Anomaly(
                        "inverse is not integral; determinant is not ±1".into(),
                    ));
                }
                out[(i, j)] = v.to_integer();
            }
        }
        Ok(out)
    }

    /// Exact characteristic polynomial det(x·I − M) via Faddeev–LeVerrier.
    pub fn char_poly(&self) -> IntPoly {
        let n = self.n;
        let rat = |m: &IntMat, i: usize, j: usize| Rat::from_integer(m[(i, j)].clone());
        // coeffs[k] multiplies x^k; monic of degree n.
        let mut coeffs = vec![Rat::zero(); n + 1];
        coeffs[n] = Rat::one();
        let mut aux = IntMat::identity(n);
        for k in 1..=n {
            aux = self.mul(&aux);
            let trace = (0..n).fold(Rat::zero(), |acc, i| acc + rat(&aux, i, i));
            let c = -trace / Rat::from_integer(Int::from(k as i64));
            coeffs[n - k] = c.clone();
            if k < n {
                let ci = c.to_integer();
                debug_assert!(c.is_integer());
                for i in 0..n {
                    aux[(i, i)] += &ci;
                }
            }
        }
        let ints = coeffs
            .into_iter()
            .map(|c| {
                debug_assert!(c.is_integer(), "characteristic polynomial must be integral");
                c.to_integer()
            })
            .collect();
        IntPoly::new(ints)
    }

    /// Entrywise absolute value (used by power-iteration cross-checks).
    pub fn abs(&self) -> IntMat {
        let mut out = self.clone();
        for v in &mut out.data {
            *v = v.abs();
        }
        out
    }

    pub fn rows_i64(&self) -> Option<Vec<Vec<i64>>> {
        use num_traits::ToPrimitive;
        (0..self.n)
            .map(|i| (0..self.n).map(|j| self[(i, j)].to_i64()).collect())
            .collect()
    }
}

impl Index<(usize, usize)> for IntMat {
    type Output = Int;
    fn index(&self, (i, j): (usize, usize)) -> &Int {
        &self.data[i * self.n + j]
    }
}

impl IndexMut<(usize, usize)> for IntMat {
    fn index_mut(&mut self, (i, j): (usize, usize)) -> &mut Int {
        &mut self.data[i * self.n + j]
    }
}

impl fmt::Debug for IntMat {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for i in 0..self.n {
            write!(f, "[")?;
            for j in 0..self.n {
                if j > 0 {
                    write!(f, ", ")?;
                }
                write!(f, "{}", self[(i, j)])?;
            }
            writeln!(f, "]")?;
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn det_and_inverse() {
        let m = IntMat::from_rows(vec![vec![2, 1], vec![-1, 0]]);
        assert_eq!(m.det(), Int::one());
        let inv = m.inverse_unimodular().unwrap();
        assert_eq!(m.mul(&inv), IntMat::identity(2));
    }

    #[test]
    fn char_poly_known() {
        // trace 2, det 1
        let m = IntMat::from_rows(vec![vec![2, 1], vec![-1, 0]]);
        let p = m.char_poly();
        assert_eq!(p.coeffs_i64(), vec![1, -2, 1]);
        let id = IntMat::identity(3);
        assert_eq!(id.char_poly().coeffs_i64(), vec![-1, 3, -3, 1]);
    }

    #[test]
    fn permutation_matrix_action() {
        // swap of indices 0 and 1 in dimension 3
        let p = IntMat::permutation(&[1, 0, 2]);
        let v = vec![crate::rat_int(5), crate::rat_int(7), crate::rat_int(9)];
        let w = p.mul_vec(&v);
        assert_eq!(w, vec![crate::rat_int(7), crate::rat_int(5), crate::rat_int(9)]);
    }
}
