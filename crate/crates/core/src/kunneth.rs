//! Künneth sequences for localized 𝕂-invariants.
//!
//! At a maximal ideal with support G only K*_G matters and the sequence
//! splits. At (I,p) the full regraded 𝕂-invariant is needed; the sequence
//! reads
//!
//! ```text
//! 0 → ⊕_{a+b=n} 𝕂^a ⊗ 𝕂^b → 𝕂^n(X × Y) → ⊕_{a+b=n} Tor₁(𝕂^a, 𝕂^{b+1}) → 0
//! ```
//!
//! and its middle term is only determined up to extension when Tor ≠ 0.

use thiserror::Error;

use crate::kinv::{localize_kinvariant, maps_vanish_at, KInvariant, KinvError};
use crate::rep_ring::{LocalizationMode, PrimeSpot, RingElem, SpotKind, Support};
use crate::rmod::{
    one_minus_t_nilpotency_bound, tensor_zp, tor1_zp, GradedZpModule, RModError, ZpModule,
};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum KunnethError {
    #[error(transparent)]
    Module(#[from] RModError),
    #[error(transparent)]
    Kinv(#[from] KinvError),
    #[error("{0} is not a maximal ideal")]
    NotMaximal(PrimeSpot),
    #[error("inputs localized at different primes: {0} and {1}")]
    MismatchedPrime(u64, u64),
    #[error("(I,2) is experimental; pass the experimental p = 2 flag to compute there")]
    Experimental,
    #[error("{0}")]
    Unsupported(String),
}

/// Knobs shared by every computation that localizes.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Hash)]
pub struct Settings {
    pub mode: LocalizationMode,
    pub experimental_p2: bool,
}

impl Settings {
    /// Rejects minimal primes, and (I,2) unless experimental mode is on.
    pub fn check_spot(&self, s: &PrimeSpot) -> Result<u64, KunnethError> {
        let p = s.prime().ok_or(KunnethError::NotMaximal(*s))?;
        if p == 2 && !self.experimental_p2 {
            return Err(KunnethError::Experimental);
        }
        Ok(p)
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct KunnethResult {
    pub prime: PrimeSpot,
    pub tensor: GradedZpModule,
    pub tor: GradedZpModule,
    /// The split representative `tensor ⊕ tor`.
    pub middle: GradedZpModule,
    /// Set when the middle is not determined by the end terms.
    pub ambiguous: bool,
}

fn graded_tensor(x: &GradedZpModule, y: &GradedZpModule) -> Result<GradedZpModule, RModError> {
    let t = tensor_zp;
    let even = t(&x.even, &y.even)?.direct_sum(&t(&x.odd, &y.odd)?)?;
    let odd = t(&x.even, &y.odd)?.direct_sum(&t(&x.odd, &y.even)?)?;
    GradedZpModule::new(even, odd)
}

/// `Tor₁(x^a, y^{b+1})` placed in degree `a + b`.
fn graded_tor(x: &GradedZpModule, y: &GradedZpModule) -> Result<GradedZpModule, RModError> {
    let t = tor1_zp;
    let even = t(&x.even, &y.odd)?.direct_sum(&t(&x.odd, &y.even)?)?;
    let odd = t(&x.even, &y.even)?.direct_sum(&t(&x.odd, &y.odd)?)?;
    GradedZpModule::new(even, odd)
}

/// Künneth computation for two graded modules already localized at `s`
/// (regraded 𝕂 at (I,p), K*_G alone at support-G ideals).
pub fn kunneth_local(
    x: &GradedZpModule,
    y: &GradedZpModule,
    s: &PrimeSpot,
) -> Result<KunnethResult, KunnethError> {
    let p = s.prime().ok_or(KunnethError::NotMaximal(*s))?;
    for m in [x, y] {
        if m.p() != p {
            return Err(KunnethError::MismatchedPrime(m.p(), p));
        }
    }
    let tensor = graded_tensor(x, y)?;
    let tor = graded_tor(x, y)?;
    let middle = tensor.direct_sum(&tor)?;
    let ambiguous = s.support() == Support::Trivial && !tor.is_zero();
    Ok(KunnethResult {
        prime: *s,
        tensor,
        tor,
        middle,
        ambiguous,
    })
}

/// Localizes two 𝕂-invariants and runs [`kunneth_local`].
pub fn kunneth_kinvariants(
    x: &KInvariant,
    y: &KInvariant,
    s: &PrimeSpot,
    settings: Settings,
) -> Result<KunnethResult, KunnethError> {
    settings.check_spot(s)?;
    let lx = localize_kinvariant(x, s, settings.mode)?;
    let ly = localize_kinvariant(y, s, settings.mode)?;
    kunneth_local(&lx, &ly, s)
}

/// Ranks and lengths compared in the doubling identity.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Size {
    pub rank: usize,
    pub length: u32,
}

impl Size {
    pub fn of(m: &GradedZpModule) -> Size {
        Size {
            rank: m.total_rank(),
            length: m.total_length(),
        }
    }

    pub fn of_pair(even: &ZpModule, odd: &ZpModule) -> Size {
        Size {
            rank: even.rank() + odd.rank(),
            length: even.length() + odd.length(),
        }
    }

    pub fn doubled(self) -> Size {
        Size {
            rank: 2 * self.rank,
            length: 2 * self.length,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DoublingReport {
    pub prime: PrimeSpot,
    /// Size of the Künneth middle for `X × G`.
    pub product: Size,
    /// Size of K*(X) localized at p.
    pub nonequivariant: Size,
    pub holds: bool,
}

/// Checks that the Künneth middle for `X × G` is twice as large as K*(X)
/// at p. `k_x` is K*(X) as a graded abelian group localized at p.
pub fn doubling_check(
    x: &KInvariant,
    g: &KInvariant,
    k_x: (&ZpModule, &ZpModule),
    s: &PrimeSpot,
    settings: Settings,
) -> Result<DoublingReport, KunnethError> {
    require_odd_i(s)?;
    let r = kunneth_kinvariants(x, g, s, settings)?;
    let product = Size::of(&r.middle);
    let nonequivariant = Size::of_pair(k_x.0, k_x.1);
    Ok(DoublingReport {
        prime: *s,
        product,
        nonequivariant,
        holds: product == nonequivariant.doubled(),
    })
}

fn require_odd_i(s: &PrimeSpot) -> Result<u64, KunnethError> {
    match s.kind() {
        SpotKind::MaximalI(p) if p != 2 => Ok(p),
        _ => Err(KunnethError::Unsupported(format!(
            "{s} is not of the form (I,p) with p odd"
        ))),
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RemarkFailureReport {
    pub prime: PrimeSpot,
    /// Even rank predicted by Künneth on K*_G alone.
    pub naive_rank: usize,
    /// Rank of K⁰_G of the product, localized.
    pub true_rank: usize,
    /// Even rank from Künneth on the full 𝕂-invariants.
    pub full_even_rank: usize,
    /// Even rank of the directly evaluated 𝕂 of the product.
    pub direct_even_rank: usize,
    pub mismatch: bool,
    pub resolved: bool,
}

/// Compares Künneth on K*_G alone with the truth at (I,p), for factors with
/// 𝕂-invariants `x`, `y` and a directly known `product`.
pub fn remark_failure_demo(
    x: &KInvariant,
    y: &KInvariant,
    product: &KInvariant,
    s: &PrimeSpot,
    settings: Settings,
) -> Result<RemarkFailureReport, KunnethError> {
    require_odd_i(s)?;
    let mode = settings.mode;
    let kg_only = |k: &KInvariant| -> Result<GradedZpModule, KunnethError> {
        Ok(GradedZpModule::new(
            k.kg[0].localize(s, mode)?,
            k.kg[1].localize(s, mode)?,
        )?)
    };
    let naive = graded_tensor(&kg_only(x)?, &kg_only(y)?)?
        .direct_sum(&graded_tor(&kg_only(x)?, &kg_only(y)?)?)?;
    let true_rank = product.kg[0].localize(s, mode)?.rank();
    let full = kunneth_kinvariants(x, y, s, settings)?;
    let direct = localize_kinvariant(product, s, mode)?;
    Ok(RemarkFailureReport {
        prime: *s,
        naive_rank: naive.even.rank(),
        true_rank,
        full_even_rank: full.middle.even.rank(),
        direct_even_rank: direct.even.rank(),
        mismatch: naive.even.rank() != true_rank,
        resolved: full.middle == direct,
    })
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SupportGReport {
    pub prime: PrimeSpot,
    /// Whether `1 − t` is nilpotent on all four modules.
    pub free: bool,
    /// Localizations of kG⁰, kG¹, kG-⁰, kG-¹.
    pub localized: Vec<ZpModule>,
    pub vanishes: bool,
}

/// At (J,p), p odd, everything built from a free space must localize to zero.
pub fn support_g_vanishing(
    x: &KInvariant,
    s: &PrimeSpot,
    settings: Settings,
) -> Result<SupportGReport, KunnethError> {
    match s.kind() {
        SpotKind::MaximalJ(p) if p != 2 => {}
        _ => {
            return Err(KunnethError::Unsupported(format!(
                "{s} is not of the form (J,p) with p odd"
            )))
        }
    }
    let one_minus_t = RingElem::one_minus_t();
    let mut free = true;
    let mut localized = Vec::new();
    for (_, m) in x.modules() {
        let bound = one_minus_t_nilpotency_bound(m);
        free &= m.nilpotency_index(&one_minus_t, bound)?.is_some();
        localized.push(m.localize(s, settings.mode)?);
    }
    let vanishes = localized.iter().all(ZpModule::is_zero);
    Ok(SupportGReport {
        prime: *s,
        free,
        localized,
        vanishes,
    })
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct P2Diagnostic {
    /// 𝕂(pt) at (I,2) under the quotient convention.
    pub point: GradedZpModule,
    /// Künneth middle for pt × pt.
    pub square: KunnethResult,
    /// Whether pt × pt = pt is reproduced; expected false.
    pub consistent: bool,
    /// Whether φ and ψ of 𝕂(pt) vanish at (I,2); expected false.
    pub maps_vanish: bool,
    /// Outcome of genuine localization of K⁰_G(pt) at (I,2).
    pub genuine: Result<ZpModule, String>,
}

/// The pt × pt self-consistency check at (I,2) in quotient mode.
pub fn p2_diagnostic(point: &KInvariant) -> Result<P2Diagnostic, KunnethError> {
    let s = PrimeSpot::maximal_i(2).map_err(|e| KunnethError::Unsupported(e.to_string()))?;
    let settings = Settings {
        mode: LocalizationMode::Quotient,
        experimental_p2: true,
    };
    let local = localize_kinvariant(point, &s, settings.mode)?;
    let square = kunneth_local(&local, &local, &s)?;
    let genuine = point.kg[0]
        .localize(&s, LocalizationMode::Genuine)
        .map_err(|e| e.to_string());
    Ok(P2Diagnostic {
        consistent: square.middle == local,
        maps_vanish: maps_vanish_at(point, &s)?,
        point: local,
        square,
        genuine,
    })
}
