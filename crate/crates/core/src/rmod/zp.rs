//! Finitely generated modules over the discrete valuation ring ℤ₍p₎, kept in
//! normal form `ℤ₍p₎^rank ⊕ ⊕ ℤ/p^{kᵢ}`.

use std::fmt;

use num_bigint::BigInt;
use num_traits::Pow;

use super::abelian::{homology_presentation, Locality, Presentation};
use super::RModError;
use crate::linalg::{IntMatrix, Partition};
use crate::rep_ring::is_prime;

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct ZpModule {
    p: u64,
    rank: usize,
    torsion: Partition,
}

impl ZpModule {
    pub fn new(p: u64, rank: usize, torsion: Partition) -> Result<Self, RModError> {
        if !is_prime(p) {
            return Err(RModError::NotPrime(p));
        }
        Ok(ZpModule { p, rank, torsion })
    }

    pub(crate) fn from_parts_unchecked(p: u64, rank: usize, torsion: Partition) -> Self {
        ZpModule { p, rank, torsion }
    }

    pub fn zero(p: u64) -> Result<Self, RModError> {
        Self::new(p, 0, Partition::empty())
    }

    pub fn free(p: u64, rank: usize) -> Result<Self, RModError> {
        Self::new(p, rank, Partition::empty())
    }

    /// `ℤ/p^k`.
    pub fn cyclic(p: u64, k: u32) -> Result<Self, RModError> {
        Self::new(p, 0, Partition::from_unsorted(vec![k]))
    }

    pub fn p(&self) -> u64 {
        self.p
    }

    pub fn rank(&self) -> usize {
        self.rank
    }

    pub fn torsion(&self) -> &Partition {
        &self.torsion
    }

    /// p-length of the torsion submodule.
    pub fn length(&self) -> u32 {
        self.torsion.size()
    }

    pub fn is_zero(&self) -> bool {
        self.rank == 0 && self.torsion.is_empty()
    }

    /// Number of generators of the normal-form presentation.
    pub fn generators(&self) -> usize {
        self.rank + self.torsion.len()
    }

    /// Free generators first, then one generator per torsion part with
    /// relation `p^k`.
    pub fn presentation(&self) -> Presentation {
        let n = self.generators();
        let mut rels = IntMatrix::zeros(n, self.torsion.len());
        for (i, &k) in self.torsion.parts().iter().enumerate() {
            rels.set(self.rank + i, i, BigInt::from(self.p).pow(k));
        }
        Presentation::new(n, rels).expect("normal form presentation is well shaped")
    }

    pub fn direct_sum(&self, other: &ZpModule) -> Result<ZpModule, RModError> {
        same_prime(self, other)?;
        Ok(ZpModule {
            p: self.p,
            rank: self.rank + other.rank,
            torsion: self.torsion.union(&other.torsion),
        })
    }
}

impl fmt::Display for ZpModule {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        let mut terms = Vec::new();
        match self.rank {
            0 => {}
            1 => terms.push(format!("Z_({})", self.p)),
            r => terms.push(format!("Z_({})^{r}", self.p)),
        }
        for &k in self.torsion.parts() {
            if k == 1 {
                terms.push(format!("Z/{}", self.p));
            } else {
                terms.push(format!("Z/{}^{k}", self.p));
            }
        }
        write!(f, "{}", terms.join(" + "))
    }
}

fn same_prime(a: &ZpModule, b: &ZpModule) -> Result<(), RModError> {
    if a.p != b.p {
        return Err(RModError::MismatchedPrime(a.p, b.p));
    }
    Ok(())
}

/// `a ⊗ b` over ℤ₍p₎, using ℤ/p^a ⊗ ℤ/p^b = ℤ/p^{min(a,b)}.
pub fn tensor_zp(a: &ZpModule, b: &ZpModule) -> Result<ZpModule, RModError> {
    same_prime(a, b)?;
    let mut parts = Vec::new();
    for &k in a.torsion.parts() {
        parts.extend(std::iter::repeat_n(k, b.rank));
    }
    for &k in b.torsion.parts() {
        parts.extend(std::iter::repeat_n(k, a.rank));
    }
    for &x in a.torsion.parts() {
        for &y in b.torsion.parts() {
            parts.push(x.min(y));
        }
    }
    Ok(ZpModule {
        p: a.p,
        rank: a.rank * b.rank,
        torsion: Partition::from_unsorted(parts),
    })
}

/// `Tor₁(a, b)` over ℤ₍p₎; only torsion against torsion contributes.
pub fn tor1_zp(a: &ZpModule, b: &ZpModule) -> Result<ZpModule, RModError> {
    same_prime(a, b)?;
    let parts = a
        .torsion
        .parts()
        .iter()
        .flat_map(|&x| b.torsion.parts().iter().map(move |&y| x.min(y)))
        .collect();
    Ok(ZpModule {
        p: a.p,
        rank: 0,
        torsion: Partition::from_unsorted(parts),
    })
}

/// Homology `ker g / im f` at the middle of `a --f--> b --g--> c`, where the
/// modules are in normal form and the maps are integer matrices on the
/// normal-form generators, read p-locally. A zero result certifies exactness.
pub fn homology_at(
    a: &ZpModule,
    b: &ZpModule,
    c: &ZpModule,
    f: &IntMatrix,
    g: &IntMatrix,
) -> Result<ZpModule, RModError> {
    same_prime(a, b)?;
    same_prime(b, c)?;
    let h = homology_presentation(
        f,
        g,
        &a.presentation(),
        &b.presentation(),
        &c.presentation(),
        Locality::AtPrime(a.p),
    )?;
    Ok(h.p_local(a.p))
}

/// A ℤ/2-graded ℤ₍p₎-module.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct GradedZpModule {
    pub even: ZpModule,
    pub odd: ZpModule,
}

impl GradedZpModule {
    pub fn new(even: ZpModule, odd: ZpModule) -> Result<Self, RModError> {
        same_prime(&even, &odd)?;
        Ok(GradedZpModule { even, odd })
    }

    pub fn zero(p: u64) -> Result<Self, RModError> {
        Ok(GradedZpModule {
            even: ZpModule::zero(p)?,
            odd: ZpModule::zero(p)?,
        })
    }

    pub fn p(&self) -> u64 {
        self.even.p
    }

    /// Component in degree `d` (mod 2).
    pub fn degree(&self, d: i64) -> &ZpModule {
        if d.rem_euclid(2) == 0 {
            &self.even
        } else {
            &self.odd
        }
    }

    pub fn is_zero(&self) -> bool {
        self.even.is_zero() && self.odd.is_zero()
    }

    pub fn total_rank(&self) -> usize {
        self.even.rank + self.odd.rank
    }

    pub fn total_length(&self) -> u32 {
        self.even.length() + self.odd.length()
    }

    pub fn direct_sum(&self, other: &GradedZpModule) -> Result<GradedZpModule, RModError> {
        Ok(GradedZpModule {
            even: self.even.direct_sum(&other.even)?,
            odd: self.odd.direct_sum(&other.odd)?,
        })
    }

    /// Degree shift; odd shifts swap the two components.
    pub fn shift(&self, by: i64) -> GradedZpModule {
        if by.rem_euclid(2) == 0 {
            self.clone()
        } else {
            GradedZpModule {
                even: self.odd.clone(),
                odd: self.even.clone(),
            }
        }
    }
}

impl fmt::Display for GradedZpModule {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "even: {}, odd: {}", self.even, self.odd)
    }
}
