//! Smith normal form over the integers, with unimodular transforms.
//!
//! Pivoting always takes the entry of least absolute value in the remaining
//! block and reduces its row and column completely before moving on, so the
//! diagonal comes out as a divisibility chain with trailing zeros.

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};

use super::{IntMatrix, LinalgError};

/// `u · a · v = diag(d)`, padded with zero rows/columns.
#[derive(Clone, Debug)]
pub struct SnfResult {
    /// Invariant factors, nonnegative, `min(rows, cols)` of them.
    pub d: Vec<BigInt>,
    pub u: IntMatrix,
    pub v: IntMatrix,
    u_inv: IntMatrix,
}

impl SnfResult {
    /// Number of nonzero invariant factors.
    pub fn rank(&self) -> usize {
        self.d.iter().take_while(|x| !x.is_zero()).count()
    }

    pub fn u_inv(&self) -> &IntMatrix {
        &self.u_inv
    }

    /// The full diagonal matrix `u · a · v`.
    pub fn diagonal_matrix(&self) -> IntMatrix {
        let mut m = IntMatrix::zeros(self.u.rows(), self.v.cols());
        for (i, x) in self.d.iter().enumerate() {
            m.set(i, i, x.clone());
        }
        m
    }
}

struct Reducer {
    a: IntMatrix,
    u: IntMatrix,
    u_inv: IntMatrix,
    v: IntMatrix,
}

impl Reducer {
    fn swap_rows(&mut self, i: usize, k: usize) {
        if i == k {
            return;
        }
        for m in [&mut self.a, &mut self.u] {
            for j in 0..m.cols() {
                let tmp = m.get(i, j).clone();
                let other = m.get(k, j).clone();
                m.set(i, j, other);
                m.set(k, j, tmp);
            }
        }
        swap_cols(&mut self.u_inv, i, k);
    }

    fn swap_cols(&mut self, j: usize, k: usize) {
        swap_cols(&mut self.a, j, k);
        swap_cols(&mut self.v, j, k);
    }

    /// row_i += q · row_t
    fn add_row(&mut self, i: usize, t: usize, q: &BigInt) {
        for m in [&mut self.a, &mut self.u] {
            for j in 0..m.cols() {
                let delta = m.get(t, j) * q;
                *m.get_mut(i, j) += delta;
            }
        }
        // inverse picks up col_t -= q · col_i
        for r in 0..self.u_inv.rows() {
            let delta = self.u_inv.get(r, i) * q;
            *self.u_inv.get_mut(r, t) -= delta;
        }
    }

    /// col_j += q · col_t
    fn add_col(&mut self, j: usize, t: usize, q: &BigInt) {
        for m in [&mut self.a, &mut self.v] {
            for r in 0..m.rows() {
                let delta = m.get(r, t) * q;
                *m.get_mut(r, j) += delta;
            }
        }
    }

    fn negate_row(&mut self, i: usize) {
        for m in [&mut self.a, &mut self.u] {
            for j in 0..m.cols() {
                let x = -m.get(i, j).clone();
                m.set(i, j, x);
            }
        }
        for r in 0..self.u_inv.rows() {
            let x = -self.u_inv.get(r, i).clone();
            self.u_inv.set(r, i, x);
        }
    }

    fn min_abs_pivot(&self, t: usize) -> Option<(usize, usize)> {
        let mut best: Option<(usize, usize, BigInt)> = None;
        for i in t..self.a.rows() {
            for j in t..self.a.cols() {
                let x = self.a.get(i, j);
                if x.is_zero() {
                    continue;
                }
                let ax = x.abs();
                if best.as_ref().is_none_or(|(_, _, b)| ax < *b) {
                    let is_one = ax.is_one();
                    best = Some((i, j, ax));
                    if is_one {
                        break;
                    }
                }
            }
        }
        best.map(|(i, j, _)| (i, j))
    }

    fn non_divisible_below(&self, t: usize) -> Option<usize> {
        let p = self.a.get(t, t);
        for i in t + 1..self.a.rows() {
            for j in t + 1..self.a.cols() {
                if !self.a.get(i, j).is_multiple_of(p) {
                    return Some(i);
                }
            }
        }
        None
    }
}

fn swap_cols(m: &mut IntMatrix, j: usize, k: usize) {
    if j == k {
        return;
    }
    for r in 0..m.rows() {
        let tmp = m.get(r, j).clone();
        let other = m.get(r, k).clone();
        m.set(r, j, other);
        m.set(r, k, tmp);
    }
}

/// Smith normal form of `a`. Zero-sized inputs are fine.
pub fn snf(a: &IntMatrix) -> SnfResult {
    let (m, n) = (a.rows(), a.cols());
    let mut r = Reducer {
        a: a.clone(),
        u: IntMatrix::identity(m),
        u_inv: IntMatrix::identity(m),
        v: IntMatrix::identity(n),
    };

    'diag: for t in 0..m.min(n) {
        loop {
            let Some((pi, pj)) = r.min_abs_pivot(t) else {
                break 'diag;
            };
            r.swap_rows(t, pi);
            r.swap_cols(t, pj);

            let pivot = r.a.get(t, t).clone();
            let mut clean = true;
            for i in t + 1..m {
                if r.a.get(i, t).is_zero() {
                    continue;
                }
                let q = r.a.get(i, t).div_floor(&pivot);
                r.add_row(i, t, &-q);
                clean &= r.a.get(i, t).is_zero();
            }
            for j in t + 1..n {
                if r.a.get(t, j).is_zero() {
                    continue;
                }
                let q = r.a.get(t, j).div_floor(&pivot);
                r.add_col(j, t, &-q);
                clean &= r.a.get(t, j).is_zero();
            }
            if !clean {
                continue;
            }
            if let Some(i) = r.non_divisible_below(t) {
                r.add_row(t, i, &BigInt::one());
                continue;
            }
            break;
        }
        if r.a.get(t, t).is_negative() {
            r.negate_row(t);
        }
    }

    let d = (0..m.min(n)).map(|t| r.a.get(t, t).clone()).collect();
    SnfResult {
        d,
        u: r.u,
        v: r.v,
        u_inv: r.u_inv,
    }
}

/// Solves `a · x = b` over the integers. `Ok(None)` means `b` is outside the
/// column lattice of `a`.
pub fn solve_membership(a: &IntMatrix, b: &[BigInt]) -> Result<Option<Vec<BigInt>>, LinalgError> {
    if b.len() != a.rows() {
        return Err(LinalgError::DimensionMismatch {
            op: "solve_membership",
            expected: a.rows(),
            found: b.len(),
        });
    }
    let s = snf(a);
    let c = s.u.mul_vec(b)?;
    let rank = s.rank();
    if c[rank..].iter().any(|x| !x.is_zero()) {
        return Ok(None);
    }
    let mut y = vec![BigInt::zero(); a.cols()];
    for i in 0..rank {
        let (q, rem) = c[i].div_rem(&s.d[i]);
        if !rem.is_zero() {
            return Ok(None);
        }
        y[i] = q;
    }
    Ok(Some(s.v.mul_vec(&y)?))
}

/// Exponent of the prime `p` in the nonzero integer `x`.
pub fn valuation(x: &BigInt, p: u64) -> u32 {
    debug_assert!(!x.is_zero());
    let p = BigInt::from(p);
    let mut x = x.clone();
    let mut k = 0;
    loop {
        let (q, r) = x.div_rem(&p);
        if !r.is_zero() {
            return k;
        }
        x = q;
        k += 1;
    }
}

/// Whether `b` lies in the ℤ₍p₎-span of the columns of `a`, i.e. some
/// integer prime to `p` multiplies `b` into the column lattice.
pub fn member_localized(a: &IntMatrix, b: &[BigInt], p: u64) -> Result<bool, LinalgError> {
    if b.len() != a.rows() {
        return Err(LinalgError::DimensionMismatch {
            op: "member_localized",
            expected: a.rows(),
            found: b.len(),
        });
    }
    let s = snf(a);
    let c = s.u.mul_vec(b)?;
    let rank = s.rank();
    if c[rank..].iter().any(|x| !x.is_zero()) {
        return Ok(false);
    }
    Ok((0..rank).all(|i| c[i].is_zero() || valuation(&c[i], p) >= valuation(&s.d[i], p)))
}

/// Basis (as columns) of the integer kernel `{x : a·x = 0}`. The kernel is a
/// saturated lattice, so this basis also spans it over every localization.
pub fn kernel_basis(a: &IntMatrix) -> IntMatrix {
    let s = snf(a);
    let r = s.rank();
    s.v.submatrix(0..a.cols(), r..a.cols())
}

/// A basis (full column rank) for the lattice spanned by the columns of `a`.
pub fn column_basis(a: &IntMatrix) -> IntMatrix {
    let s = snf(a);
    let r = s.rank();
    let mut basis = s.u_inv().submatrix(0..a.rows(), 0..r);
    for j in 0..r {
        for i in 0..basis.rows() {
            let x = basis.get(i, j) * &s.d[j];
            basis.set(i, j, x);
        }
    }
    basis
}
