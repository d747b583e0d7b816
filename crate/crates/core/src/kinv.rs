//! The paired invariant 𝕂 = (K*_G, K*_{G,−}, φ, ψ), its localizations, the
//! six-term sequence relating it to non-equivariant K-theory, and the
//! forgetful short exact sequence.

use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, ToPrimitive, Zero};
use thiserror::Error;

use crate::linalg::{lr_extension_feasible, IntMatrix};
use crate::rep_ring::{LocalizationMode, PrimeSpot, RingElem, Support};
use crate::rmod::{
    homology, one_minus_t_nilpotency_bound, validate_module, FgAbelian, FgRModule, GradedZpModule,
    Presentation, RModError, RModuleMap,
};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum KinvError {
    #[error(transparent)]
    Module(#[from] RModError),
    #[error("{0} is not a maximal ideal")]
    NotMaximal(PrimeSpot),
    #[error("invalid 𝕂-invariant: {}", .0.join("; "))]
    Invalid(Vec<String>),
    #[error("not free-space data: {0}")]
    NotFreeSpace(String),
    #[error("shape error: {0}")]
    Shape(String),
}

/// `kg[i]`, `kgm[i]` are the degree-`i` parts of K*_G and K*_{G,−};
/// `phi[i]: kgm[i] → kg[i]` and `psi[i]: kg[i] → kgm[i]` as matrices on
/// generators.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct KInvariant {
    pub kg: [FgRModule; 2],
    pub kgm: [FgRModule; 2],
    pub phi: [IntMatrix; 2],
    pub psi: [IntMatrix; 2],
}

impl KInvariant {
    pub fn new(
        kg: [FgRModule; 2],
        kgm: [FgRModule; 2],
        phi: [IntMatrix; 2],
        psi: [IntMatrix; 2],
    ) -> Result<Self, KinvError> {
        for i in 0..2 {
            let (g, m) = (kg[i].gens(), kgm[i].gens());
            if phi[i].rows() != g || phi[i].cols() != m {
                return Err(KinvError::Shape(format!(
                    "phi in degree {i} is {}x{}, expected {g}x{m}",
                    phi[i].rows(),
                    phi[i].cols()
                )));
            }
            if psi[i].rows() != m || psi[i].cols() != g {
                return Err(KinvError::Shape(format!(
                    "psi in degree {i} is {}x{}, expected {m}x{g}",
                    psi[i].rows(),
                    psi[i].cols()
                )));
            }
        }
        Ok(KInvariant { kg, kgm, phi, psi })
    }

    pub fn zero() -> Self {
        let z = FgRModule::zero;
        let m = || IntMatrix::zeros(0, 0);
        KInvariant {
            kg: [z(), z()],
            kgm: [z(), z()],
            phi: [m(), m()],
            psi: [m(), m()],
        }
    }

    pub fn phi_map(&self, degree: usize) -> RModuleMap {
        RModuleMap {
            source: self.kgm[degree].clone(),
            target: self.kg[degree].clone(),
            matrix: self.phi[degree].clone(),
        }
    }

    pub fn psi_map(&self, degree: usize) -> RModuleMap {
        RModuleMap {
            source: self.kg[degree].clone(),
            target: self.kgm[degree].clone(),
            matrix: self.psi[degree].clone(),
        }
    }

    pub fn direct_sum(&self, other: &KInvariant) -> KInvariant {
        let sum = |a: &FgRModule, b: &FgRModule| FgRModule::direct_sum(&[a, b]);
        let diag = |a: &IntMatrix, b: &IntMatrix| IntMatrix::block_diag(&[a, b]);
        KInvariant {
            kg: [0, 1].map(|i| sum(&self.kg[i], &other.kg[i])),
            kgm: [0, 1].map(|i| sum(&self.kgm[i], &other.kgm[i])),
            phi: [0, 1].map(|i| diag(&self.phi[i], &other.phi[i])),
            psi: [0, 1].map(|i| diag(&self.psi[i], &other.psi[i])),
        }
    }

    /// Suspension by a trivial line: swaps the two degrees.
    pub fn shift(&self) -> KInvariant {
        let swap = |x: &[FgRModule; 2]| [x[1].clone(), x[0].clone()];
        let swap_m = |x: &[IntMatrix; 2]| [x[1].clone(), x[0].clone()];
        KInvariant {
            kg: swap(&self.kg),
            kgm: swap(&self.kgm),
            phi: swap_m(&self.phi),
            psi: swap_m(&self.psi),
        }
    }

    /// Product with the sign representation: exchanges the two modules and
    /// the two maps.
    pub fn twist(&self) -> KInvariant {
        KInvariant {
            kg: self.kgm.clone(),
            kgm: self.kg.clone(),
            phi: self.psi.clone(),
            psi: self.phi.clone(),
        }
    }

    pub fn modules(&self) -> [(&'static str, &FgRModule); 4] {
        [
            ("kG^0", &self.kg[0]),
            ("kG^1", &self.kg[1]),
            ("kG-^0", &self.kgm[0]),
            ("kG-^1", &self.kgm[1]),
        ]
    }
}

/// Lists everything wrong with `k`: module axioms, well-definedness and
/// R-linearity of φ and ψ, and both composites being `1 − t`.
pub fn validate_kinvariant(k: &KInvariant) -> Vec<String> {
    let mut problems = Vec::new();
    for (name, m) in k.modules() {
        for p in validate_module(m) {
            problems.push(format!("{name}: {p}"));
        }
    }
    let one_minus_t = RingElem::one_minus_t();
    for i in 0..2 {
        let phi = k.phi_map(i);
        let psi = k.psi_map(i);
        for p in phi.validate() {
            problems.push(format!("phi^{i}: {p}"));
        }
        for p in psi.validate() {
            problems.push(format!("psi^{i}: {p}"));
        }
        let checks = [
            (&k.kg[i], &k.phi[i], &k.psi[i], "phi∘psi", "kG"),
            (&k.kgm[i], &k.psi[i], &k.phi[i], "psi∘phi", "kG-"),
        ];
        for (module, outer, inner, label, on) in checks {
            let diff = outer
                .checked_mul(inner)
                .and_then(|c| c.checked_sub(&module.action_of(&one_minus_t)));
            match diff
                .map_err(RModError::from)
                .and_then(|d| module.annihilates_columns(&d))
            {
                Ok(true) => {}
                Ok(false) => {
                    problems.push(format!("{label} is not multiplication by 1-t on {on}^{i}"))
                }
                Err(e) => problems.push(format!("{label} in degree {i}: {e}")),
            }
        }
    }
    problems
}

/// Localizes at a maximal ideal. At (I,p) the result is regraded, with
/// `kG⁰ ⊕ kG-¹` even and `kG-⁰ ⊕ kG¹` odd; at ideals with support G only
/// K*_G is used.
pub fn localize_kinvariant(
    k: &KInvariant,
    s: &PrimeSpot,
    mode: LocalizationMode,
) -> Result<GradedZpModule, KinvError> {
    if !s.is_maximal() {
        return Err(KinvError::NotMaximal(*s));
    }
    let loc = |m: &FgRModule| m.localize(s, mode);
    let graded = match s.support() {
        Support::Trivial => {
            let even = loc(&k.kg[0])?.direct_sum(&loc(&k.kgm[1])?)?;
            let odd = loc(&k.kgm[0])?.direct_sum(&loc(&k.kg[1])?)?;
            GradedZpModule::new(even, odd)?
        }
        Support::Whole => GradedZpModule::new(loc(&k.kg[0])?, loc(&k.kg[1])?)?,
    };
    Ok(graded)
}

/// Whether every φ and ψ becomes the zero map at `s`.
pub fn maps_vanish_at(k: &KInvariant, s: &PrimeSpot) -> Result<bool, KinvError> {
    for i in 0..2 {
        if !k.phi_map(i).localizes_to_zero(s)? || !k.psi_map(i).localizes_to_zero(s)? {
            return Ok(false);
        }
    }
    Ok(true)
}

/// A 𝕂-invariant together with non-equivariant K-theory and the maps
/// closing up the hexagon
///
/// ```text
/// K⁰_{G,-} --φ⁰--> K⁰_G --f⁰--> K⁰ --∂⁰--> K¹_{G,-} --φ¹--> K¹_G --f¹--> K¹ --∂¹--> K⁰_{G,-}
/// ```
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SixTermData {
    pub kinv: KInvariant,
    pub k: [Presentation; 2],
    /// `f[i]: kG^i → K^i`
    pub f: [IntMatrix; 2],
    /// `boundary[i]: K^i → kG-^{i+1}`
    pub boundary: [IntMatrix; 2],
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SpotHomology {
    pub spot: &'static str,
    pub homology: FgAbelian,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SixTermReport {
    pub spots: Vec<SpotHomology>,
}

impl SixTermReport {
    pub fn is_exact(&self) -> bool {
        self.spots.iter().all(|s| s.homology.is_zero())
    }

    pub fn failing_spots(&self) -> Vec<&'static str> {
        self.spots
            .iter()
            .filter(|s| !s.homology.is_zero())
            .map(|s| s.spot)
            .collect()
    }
}

pub const SIX_TERM_SPOTS: [&str; 6] = ["K0_G-", "K0_G", "K0", "K1_G-", "K1_G", "K1"];

/// Homology at each of the six spots; fails if some composite is nonzero.
pub fn six_term_verify(d: &SixTermData) -> Result<SixTermReport, KinvError> {
    let kg = |i: usize| d.kinv.kg[i].underlying();
    let kgm = |i: usize| d.kinv.kgm[i].underlying();
    let objects = [kgm(0), kg(0), d.k[0].clone(), kgm(1), kg(1), d.k[1].clone()];
    let maps = [
        &d.kinv.phi[0],
        &d.f[0],
        &d.boundary[0],
        &d.kinv.phi[1],
        &d.f[1],
        &d.boundary[1],
    ];
    // maps[j] goes from objects[j] to objects[j + 1]
    let mut spots = Vec::with_capacity(6);
    for (j, spot) in SIX_TERM_SPOTS.iter().enumerate() {
        let prev = (j + 5) % 6;
        let h = homology(
            maps[prev],
            maps[j],
            &objects[prev],
            &objects[j],
            &objects[(j + 1) % 6],
        )
        .map_err(|e| match e {
            RModError::NotAComplex(_) => {
                RModError::NotAComplex(format!("composite through {spot} is not zero"))
            }
            other => other,
        })?;
        spots.push(SpotHomology { spot, homology: h });
    }
    Ok(SixTermReport { spots })
}

/// End terms of `0 → coker φ^i → K^i → ker φ^{i+1} → 0`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ForgetfulEnds {
    pub degree: usize,
    pub coker: FgRModule,
    pub ker: FgRModule,
}

impl ForgetfulEnds {
    pub fn sub(&self) -> FgAbelian {
        self.coker.underlying().normal_form()
    }

    pub fn quot(&self) -> FgAbelian {
        self.ker.underlying().normal_form()
    }

    /// Whether `middle` can sit between the two end terms. The conditions
    /// are rank additivity, `|tors sub|` dividing `|tors middle|`, and
    /// `|tors middle|` dividing `|tors sub|·|tors quot|`. When the sub is
    /// finite, the torsion parts form a short exact sequence themselves, and
    /// the test becomes exact via Littlewood–Richardson positivity at each
    /// prime.
    pub fn admits_middle(&self, middle: &FgAbelian) -> bool {
        admits_middle(&self.sub(), middle, &self.quot())
    }
}

pub fn admits_middle(sub: &FgAbelian, middle: &FgAbelian, quot: &FgAbelian) -> bool {
    if middle.rank != sub.rank + quot.rank {
        return false;
    }
    let (a, e, b) = (
        sub.torsion_order(),
        middle.torsion_order(),
        quot.torsion_order(),
    );
    if !e.is_multiple_of(&a) || !(&a * &b).is_multiple_of(&e) {
        return false;
    }
    if sub.rank > 0 {
        return true;
    }
    if e != &a * &b {
        return false;
    }
    prime_factors(&e).into_iter().all(|p| {
        lr_extension_feasible(
            middle.p_part(p).torsion(),
            sub.p_part(p).torsion(),
            quot.p_part(p).torsion(),
        )
    })
}

/// Distinct prime factors by trial division.
pub fn prime_factors(n: &BigInt) -> Vec<u64> {
    let mut n = n.magnitude().clone();
    let mut out = Vec::new();
    let mut p: u64 = 2;
    while n > One::one() {
        if n.to_u64().is_some_and(|m| m < p.saturating_mul(p)) {
            out.push(n.to_u64().expect("checked"));
            break;
        }
        if (&n % p).is_zero() {
            out.push(p);
            while (&n % p).is_zero() {
                n /= p;
            }
        }
        p += if p == 2 { 1 } else { 2 };
    }
    out
}

/// The end terms of the forgetful sequence in both degrees.
pub fn forgetful_ses(k: &KInvariant) -> Result<[ForgetfulEnds; 2], KinvError> {
    let ends = |i: usize| -> Result<ForgetfulEnds, KinvError> {
        Ok(ForgetfulEnds {
            degree: i,
            coker: k.phi_map(i).cokernel(),
            ker: k.phi_map(1 - i).kernel()?,
        })
    };
    Ok([ends(0)?, ends(1)?])
}

/// Whether multiplication by `q` is a bijection on `m`.
pub fn uniquely_divisible(m: &FgAbelian, q: u64) -> bool {
    m.rank == 0 && m.torsion_order().gcd(&BigInt::from(q)).is_one()
}

/// The R-module K*_G(X) of a free G-space X from K*(X/G) and the action of
/// the line bundle `X ×_G V` on it.
pub fn free_space_module(
    quotient_k: &Presentation,
    line_bundle_action: &IntMatrix,
) -> Result<FgRModule, KinvError> {
    let m = FgRModule::new(
        quotient_k.gens(),
        quotient_k.rels().clone(),
        line_bundle_action.clone(),
    )?;
    let problems = validate_module(&m);
    if !problems.is_empty() {
        return Err(KinvError::NotFreeSpace(problems.join("; ")));
    }
    let bound = one_minus_t_nilpotency_bound(&m);
    match m.nilpotency_index(&RingElem::one_minus_t(), bound)? {
        Some(_) => Ok(m),
        None => Err(KinvError::NotFreeSpace(format!(
            "1 - t is not nilpotent (checked up to power {bound})"
        ))),
    }
}

impl fmt::Display for KInvariant {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (name, m) in self.modules() {
            writeln!(f, "{name}: {}", m.underlying().normal_form())?;
        }
        Ok(())
    }
}
