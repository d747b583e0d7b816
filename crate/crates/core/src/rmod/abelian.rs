//! Finitely presented abelian groups and homology of complexes of them.

use std::fmt;

use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};

use super::{RModError, ZpModule};
use crate::linalg::{
    column_basis, kernel_basis, member_localized, snf, solve_membership, valuation, IntMatrix,
    Partition,
};

/// `ℤ^gens / (column span of rels)`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Presentation {
    gens: usize,
    rels: IntMatrix,
}

impl Presentation {
    pub fn new(gens: usize, rels: IntMatrix) -> Result<Self, RModError> {
        if rels.rows() != gens {
            return Err(RModError::Shape(format!(
                "relation matrix has {} rows for {} generators",
                rels.rows(),
                gens
            )));
        }
        Ok(Presentation { gens, rels })
    }

    pub fn free(n: usize) -> Self {
        Presentation {
            gens: n,
            rels: IntMatrix::zeros(n, 0),
        }
    }

    pub fn zero() -> Self {
        Self::free(0)
    }

    pub fn gens(&self) -> usize {
        self.gens
    }

    pub fn rels(&self) -> &IntMatrix {
        &self.rels
    }

    pub fn normal_form(&self) -> FgAbelian {
        let s = snf(&self.rels);
        let nonzero: Vec<BigInt> = s.d.iter().filter(|x| !x.is_zero()).cloned().collect();
        FgAbelian {
            rank: self.gens - nonzero.len(),
            invariants: nonzero.into_iter().filter(|x| !x.is_one()).collect(),
        }
    }

    /// Localization at the prime `p`: free rank plus the p-primary torsion.
    pub fn p_local(&self, p: u64) -> ZpModule {
        self.normal_form().p_part(p)
    }

    /// Whether the vector `v` (in generator coordinates) is zero in the group.
    pub fn is_zero_element(&self, v: &[BigInt]) -> Result<bool, RModError> {
        Ok(solve_membership(&self.rels, v)?.is_some())
    }

    /// Whether `v` becomes zero after inverting everything prime to `p`.
    pub fn is_zero_element_at(&self, v: &[BigInt], p: u64) -> Result<bool, RModError> {
        Ok(member_localized(&self.rels, v, p)?)
    }

    pub fn direct_sum(&self, other: &Presentation) -> Presentation {
        Presentation {
            gens: self.gens + other.gens,
            rels: IntMatrix::block_diag(&[&self.rels, &other.rels]),
        }
    }
}

/// Normal form `ℤ^rank ⊕ ⊕ ℤ/dᵢ` with `1 < d₁ | d₂ | …`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Default)]
pub struct FgAbelian {
    pub rank: usize,
    pub invariants: Vec<BigInt>,
}

impl FgAbelian {
    pub fn free(rank: usize) -> Self {
        FgAbelian {
            rank,
            invariants: Vec::new(),
        }
    }

    /// Normalizes an arbitrary list of cyclic orders (zeros count as free
    /// summands, ±1 are dropped).
    pub fn from_cyclic_orders(rank: usize, orders: &[BigInt]) -> Self {
        let free_extra = orders.iter().filter(|x| x.is_zero()).count();
        let finite: Vec<BigInt> = orders
            .iter()
            .filter(|x| !x.is_zero())
            .map(|x| x.abs())
            .collect();
        let pres = Presentation {
            gens: finite.len(),
            rels: IntMatrix::diagonal(&finite),
        };
        let mut nf = pres.normal_form();
        nf.rank += rank + free_extra;
        nf
    }

    pub fn is_zero(&self) -> bool {
        self.rank == 0 && self.invariants.is_empty()
    }

    pub fn torsion_order(&self) -> BigInt {
        self.invariants.iter().fold(BigInt::one(), |acc, d| acc * d)
    }

    pub fn presentation(&self) -> Presentation {
        let n = self.rank + self.invariants.len();
        let mut rels = IntMatrix::zeros(n, self.invariants.len());
        for (i, d) in self.invariants.iter().enumerate() {
            rels.set(self.rank + i, i, d.clone());
        }
        Presentation { gens: n, rels }
    }

    pub fn direct_sum(&self, other: &FgAbelian) -> FgAbelian {
        let mut orders = self.invariants.clone();
        orders.extend(other.invariants.iter().cloned());
        FgAbelian::from_cyclic_orders(self.rank + other.rank, &orders)
    }

    /// `⊗ ℤ₍p₎`: keeps the rank and the p-power part of each invariant factor.
    pub fn p_part(&self, p: u64) -> ZpModule {
        let mut parts = Vec::new();
        for d in &self.invariants {
            let k = valuation(d, p);
            let mut rest = d.clone();
            for _ in 0..k {
                rest /= p;
            }
            if !rest.is_one() {
                log::debug!("localizing at {p}: discarding torsion Z/{rest} prime to {p}");
            }
            if k > 0 {
                parts.push(k);
            }
        }
        ZpModule::from_parts_unchecked(p, self.rank, Partition::from_unsorted(parts))
    }
}

impl fmt::Display for FgAbelian {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        let mut terms = Vec::new();
        if self.rank == 1 {
            terms.push("Z".to_string());
        } else if self.rank > 1 {
            terms.push(format!("Z^{}", self.rank));
        }
        for d in &self.invariants {
            terms.push(format!("Z/{d}"));
        }
        write!(f, "{}", terms.join(" + "))
    }
}

/// Basis of `{x ∈ ℤ^n : g·x ∈ col(target_rels)}`.
pub fn preimage_basis(g: &IntMatrix, target_rels: &IntMatrix) -> Result<IntMatrix, RModError> {
    let n = g.cols();
    let stacked = IntMatrix::hconcat(&[g, &target_rels.neg()])?;
    let ker = kernel_basis(&stacked);
    let span = ker.submatrix(0..n, 0..ker.cols());
    Ok(column_basis(&span))
}

/// `K / (K ∩ N)` where `k_basis` is a basis of the lattice K (as columns) and
/// `n_span` spans N, presented on the basis of K.
pub fn subquotient(k_basis: &IntMatrix, n_span: &IntMatrix) -> Result<Presentation, RModError> {
    let k = k_basis.cols();
    let stacked = IntMatrix::hconcat(&[k_basis, &n_span.neg()])?;
    let ker = kernel_basis(&stacked);
    let rels = ker.submatrix(0..k, 0..ker.cols());
    Presentation::new(k, rels)
}

fn check_shape(name: &str, m: &IntMatrix, rows: usize, cols: usize) -> Result<(), RModError> {
    if m.rows() != rows || m.cols() != cols {
        return Err(RModError::Shape(format!(
            "{name} is {}x{}, expected {rows}x{cols}",
            m.rows(),
            m.cols()
        )));
    }
    Ok(())
}

/// Which notion of "zero" to use when checking maps: integral, or after
/// inverting everything prime to `p`.
#[derive(Clone, Copy, Debug)]
pub(crate) enum Locality {
    Integral,
    AtPrime(u64),
}

pub(crate) fn columns_vanish(
    target: &Presentation,
    m: &IntMatrix,
    locality: Locality,
) -> Result<bool, RModError> {
    for col in m.columns() {
        let ok = match locality {
            Locality::Integral => target.is_zero_element(&col)?,
            Locality::AtPrime(p) => target.is_zero_element_at(&col, p)?,
        };
        if !ok {
            return Ok(false);
        }
    }
    Ok(true)
}

/// Checks that `f: a → b` is a well-defined homomorphism of presented groups.
pub(crate) fn check_map(
    name: &str,
    f: &IntMatrix,
    a: &Presentation,
    b: &Presentation,
    locality: Locality,
) -> Result<(), RModError> {
    check_shape(name, f, b.gens, a.gens)?;
    let image_of_rels = f.checked_mul(&a.rels)?;
    if !columns_vanish(b, &image_of_rels, locality)? {
        return Err(RModError::IllDefinedMap(format!(
            "{name} does not send relations to relations"
        )));
    }
    Ok(())
}

pub(crate) fn homology_presentation(
    f: &IntMatrix,
    g: &IntMatrix,
    a: &Presentation,
    b: &Presentation,
    c: &Presentation,
    locality: Locality,
) -> Result<Presentation, RModError> {
    check_map("f", f, a, b, locality)?;
    check_map("g", g, b, c, locality)?;
    let gf = g.checked_mul(f)?;
    if !columns_vanish(c, &gf, locality)? {
        return Err(RModError::NotAComplex(
            "g∘f is not the zero map".to_string(),
        ));
    }
    let cycles = preimage_basis(g, &c.rels)?;
    let boundaries = IntMatrix::hconcat(&[f, &b.rels])?;
    subquotient(&cycles, &boundaries)
}

/// `ker g / im f` for `a --f--> b --g--> c`, computed over ℤ.
pub fn homology(
    f: &IntMatrix,
    g: &IntMatrix,
    a: &Presentation,
    b: &Presentation,
    c: &Presentation,
) -> Result<FgAbelian, RModError> {
    Ok(homology_presentation(f, g, a, b, c, Locality::Integral)?.normal_form())
}

#[cfg(test)]
mod tests {
    use super::*;

    fn big(v: &[i64]) -> Vec<BigInt> {
        v.iter().map(|&x| BigInt::from(x)).collect()
    }

    #[test]
    fn normal_forms() {
        let p = Presentation::new(2, IntMatrix::from_rows(&[vec![2, 0], vec![0, 3]])).unwrap();
        assert_eq!(
            p.normal_form(),
            FgAbelian {
                rank: 0,
                invariants: big(&[6])
            }
        );
        assert_eq!(Presentation::free(3).normal_form(), FgAbelian::free(3));
        let g = FgAbelian::from_cyclic_orders(1, &big(&[4, 6, 1, 0]));
        assert_eq!(g.rank, 2);
        assert_eq!(g.invariants, big(&[2, 12]));
    }

    #[test]
    fn p_parts() {
        let g = FgAbelian::from_cyclic_orders(1, &big(&[12, 9]));
        let at3 = g.p_part(3);
        assert_eq!(at3.rank(), 1);
        assert_eq!(at3.torsion().parts(), &[2, 1]);
        let at2 = g.p_part(2);
        assert_eq!(at2.torsion().parts(), &[2]);
        assert!(g.p_part(5).torsion().is_empty());
    }

    #[test]
    fn homology_of_multiplication() {
        // ℤ --2--> ℤ --> 0 has homology ℤ/2 in the middle
        let z = Presentation::free(1);
        let zero = Presentation::zero();
        let f = IntMatrix::from_rows(&[vec![2]]);
        let g = IntMatrix::zeros(0, 1);
        let h = homology(&f, &g, &z, &z, &zero).unwrap();
        assert_eq!(h.invariants, big(&[2]));
        assert_eq!(h.rank, 0);
        // 0 --> ℤ --2--> ℤ is exact at the middle
        let f = IntMatrix::zeros(1, 0);
        let g = IntMatrix::from_rows(&[vec![2]]);
        assert!(homology(&f, &g, &zero, &z, &z).unwrap().is_zero());
    }

    #[test]
    fn homology_rejects_non_complex() {
        let z = Presentation::free(1);
        let one = IntMatrix::from_rows(&[vec![1]]);
        assert!(matches!(
            homology(&one, &one, &z, &z, &z),
            Err(RModError::NotAComplex(_))
        ));
    }

    #[test]
    fn homology_with_torsion_target() {
        // ℤ/4 --2--> ℤ/4 --2--> ℤ/4 : ker = {0,2}, im = {0,2}
        let z4 = Presentation::new(1, IntMatrix::from_rows(&[vec![4]])).unwrap();
        let two = IntMatrix::from_rows(&[vec![2]]);
        assert!(homology(&two, &two, &z4, &z4, &z4).unwrap().is_zero());
        // ℤ/4 --0--> ℤ/4 --2--> ℤ/4 : ker/im = ℤ/2
        let zero = IntMatrix::from_rows(&[vec![0]]);
        let h = homology(&zero, &two, &z4, &z4, &z4).unwrap();
        assert_eq!(h.invariants, big(&[2]));
    }

    #[test]
    fn ill_defined_map_is_rejected() {
        let z2 = Presentation::new(1, IntMatrix::from_rows(&[vec![2]])).unwrap();
        let z = Presentation::free(1);
        let one = IntMatrix::from_rows(&[vec![1]]);
        let zero_map = IntMatrix::zeros(0, 1);
        assert!(matches!(
            homology(&one, &zero_map, &z2, &z, &Presentation::zero()),
            Err(RModError::IllDefinedMap(_))
        ));
    }
}
