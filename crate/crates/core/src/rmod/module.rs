//! Finitely generated R-modules, presented as abelian groups with an
//! involution `T` giving the action of `t`.

use num_bigint::BigInt;
use num_traits::Zero;

use super::abelian::{columns_vanish, preimage_basis, Locality, Presentation};
use super::{RModError, ZpModule};
use crate::linalg::{solve_membership, valuation, IntMatrix};
use crate::rep_ring::{LocalizationMode, PrimeSpot, RingElem, SpotKind};

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FgRModule {
    gens: usize,
    /// `gens` rows, one column per relation
    rels: IntMatrix,
    t_action: IntMatrix,
}

impl FgRModule {
    /// Checks shapes only; see [`validate_module`] for the R-module axioms.
    pub fn new(gens: usize, rels: IntMatrix, t_action: IntMatrix) -> Result<Self, RModError> {
        if rels.rows() != gens {
            return Err(RModError::Shape(format!(
                "relation matrix has {} rows for {gens} generators",
                rels.rows()
            )));
        }
        if t_action.rows() != gens || t_action.cols() != gens {
            return Err(RModError::Shape(format!(
                "t-action is {}x{}, expected {gens}x{gens}",
                t_action.rows(),
                t_action.cols()
            )));
        }
        Ok(FgRModule {
            gens,
            rels,
            t_action,
        })
    }

    pub fn zero() -> Self {
        FgRModule {
            gens: 0,
            rels: IntMatrix::zeros(0, 0),
            t_action: IntMatrix::zeros(0, 0),
        }
    }

    /// R itself on the basis {1, t}.
    pub fn regular() -> Self {
        FgRModule {
            gens: 2,
            rels: IntMatrix::zeros(2, 0),
            t_action: IntMatrix::from_rows(&[vec![0, 1], vec![1, 0]]),
        }
    }

    /// R/I ≅ ℤ with t acting trivially.
    pub fn r_mod_i() -> Self {
        Self::cyclic_with_sign(1)
    }

    /// R/J ≅ ℤ with t acting by −1.
    pub fn r_mod_j() -> Self {
        Self::cyclic_with_sign(-1)
    }

    fn cyclic_with_sign(sign: i64) -> Self {
        FgRModule {
            gens: 1,
            rels: IntMatrix::zeros(1, 0),
            t_action: IntMatrix::from_rows(&[vec![sign]]),
        }
    }

    pub fn gens(&self) -> usize {
        self.gens
    }

    pub fn rels(&self) -> &IntMatrix {
        &self.rels
    }

    pub fn t_action(&self) -> &IntMatrix {
        &self.t_action
    }

    /// The underlying abelian group.
    pub fn underlying(&self) -> Presentation {
        Presentation::new(self.gens, self.rels.clone()).expect("shape checked at construction")
    }

    /// Matrix of multiplication by `x` on generators.
    pub fn action_of(&self, x: &RingElem) -> IntMatrix {
        x.act_on(&self.t_action)
    }

    pub fn direct_sum(modules: &[&FgRModule]) -> FgRModule {
        let rels: Vec<&IntMatrix> = modules.iter().map(|m| &m.rels).collect();
        let ts: Vec<&IntMatrix> = modules.iter().map(|m| &m.t_action).collect();
        FgRModule {
            gens: modules.iter().map(|m| m.gens).sum(),
            rels: IntMatrix::block_diag(&rels),
            t_action: IntMatrix::block_diag(&ts),
        }
    }

    /// Whether every column of `m` (a map into this module) is zero here.
    pub fn annihilates_columns(&self, m: &IntMatrix) -> Result<bool, RModError> {
        columns_vanish(&self.underlying(), m, Locality::Integral)
    }

    /// The abelian group `M / (T ∓ 1)M` obtained by imposing t = ±1.
    pub fn specialize(&self, t_sign: i8) -> Presentation {
        let shift = IntMatrix::scalar(self.gens, &BigInt::from(t_sign));
        let relation = self.t_action.checked_sub(&shift).expect("square");
        let rels = IntMatrix::hconcat(&[&self.rels, &relation]).expect("same row count");
        Presentation::new(self.gens, rels).expect("shape")
    }

    /// Smallest `k ≥ 1` with `x^k` acting as zero, searched up to `bound`.
    pub fn nilpotency_index(&self, x: &RingElem, bound: u32) -> Result<Option<u32>, RModError> {
        let step = self.action_of(x);
        let mut power = step.clone();
        for k in 1..=bound {
            if self.annihilates_columns(&power)? {
                return Ok(Some(k));
            }
            power = power.checked_mul(&step)?;
        }
        Ok(None)
    }

    /// Localization at a maximal ideal.
    ///
    /// QUOTIENT imposes t = ±1 and localizes the resulting abelian group at p.
    /// GENUINE localizes the abelian group at p keeping `T`; for odd p this
    /// is the image of `1 ± T`, and at (I,2) it only succeeds when `T` already
    /// acts as ±1 on the 2-localized group.
    pub fn localize(&self, s: &PrimeSpot, mode: LocalizationMode) -> Result<ZpModule, RModError> {
        let p = s.prime().ok_or(RModError::NotMaximal(*s))?;
        match mode {
            LocalizationMode::Quotient => Ok(self.specialize(s.t_sign()).p_local(p)),
            LocalizationMode::Genuine if p != 2 => {
                let sign = BigInt::from(s.t_sign());
                let projector = IntMatrix::identity(self.gens)
                    .checked_add(&self.t_action.scale(&sign))
                    .expect("square");
                let kernel = preimage_basis(&projector, &self.rels)?;
                Ok(Presentation::new(self.gens, kernel)?.p_local(p))
            }
            LocalizationMode::Genuine => self.localize_genuine_at_two(),
        }
    }

    fn localize_genuine_at_two(&self) -> Result<ZpModule, RModError> {
        let local = self.underlying();
        for sign in [1i64, -1] {
            let shift = IntMatrix::scalar(self.gens, &BigInt::from(sign));
            let diff = self.t_action.checked_sub(&shift).expect("square");
            if columns_vanish(&local, &diff, Locality::AtPrime(2))? {
                return Ok(local.p_local(2));
            }
        }
        Err(RModError::NotDvrModule(NotDvrReport {
            underlying: local.p_local(2),
            reason: "t acts neither as +1 nor as -1 on the 2-localized group, so the module \
                     does not come from Z_(2) under either sign"
                .to_string(),
        }))
    }

    /// Dimension over ℚ of the localization at a minimal prime.
    pub fn rank_at_minimal(&self, s: &PrimeSpot) -> Result<usize, RModError> {
        match s.kind() {
            SpotKind::MinimalI | SpotKind::MinimalJ => {
                Ok(self.specialize(s.t_sign()).normal_form().rank)
            }
            _ => Err(RModError::NotMinimal(*s)),
        }
    }
}

/// Returned instead of a normal form when genuine localization at (I,2)
/// leaves a module on which `t` acts nontrivially.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct NotDvrReport {
    /// The 2-localized abelian group with the involution forgotten.
    pub underlying: ZpModule,
    pub reason: String,
}

/// Lists violated module axioms; empty means `m` is a valid R-module.
pub fn validate_module(m: &FgRModule) -> Vec<String> {
    let mut problems = Vec::new();
    let t = &m.t_action;
    match t
        .checked_mul(t)
        .and_then(|t2| t2.checked_sub(&IntMatrix::identity(m.gens)))
    {
        Ok(diff) => match m.annihilates_columns(&diff) {
            Ok(true) => {}
            Ok(false) => problems.push("t^2 != 1 modulo relations".to_string()),
            Err(e) => problems.push(format!("t^2 check failed: {e}")),
        },
        Err(e) => problems.push(format!("t^2 check failed: {e}")),
    }
    match t.checked_mul(&m.rels) {
        Ok(image) => match m.annihilates_columns(&image) {
            Ok(true) => {}
            Ok(false) => problems.push("t does not preserve the relation lattice".to_string()),
            Err(e) => problems.push(format!("relation check failed: {e}")),
        },
        Err(e) => problems.push(format!("relation check failed: {e}")),
    }
    problems
}

/// An R-linear map given on generators (`target.gens × source.gens`).
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RModuleMap {
    pub source: FgRModule,
    pub target: FgRModule,
    pub matrix: IntMatrix,
}

impl RModuleMap {
    pub fn new(source: FgRModule, target: FgRModule, matrix: IntMatrix) -> Result<Self, RModError> {
        if matrix.rows() != target.gens || matrix.cols() != source.gens {
            return Err(RModError::Shape(format!(
                "map matrix is {}x{}, expected {}x{}",
                matrix.rows(),
                matrix.cols(),
                target.gens,
                source.gens
            )));
        }
        Ok(RModuleMap {
            source,
            target,
            matrix,
        })
    }

    pub fn zero(source: FgRModule, target: FgRModule) -> Self {
        let matrix = IntMatrix::zeros(target.gens, source.gens);
        RModuleMap {
            source,
            target,
            matrix,
        }
    }

    /// Lists violations of well-definedness and R-linearity.
    pub fn validate(&self) -> Vec<String> {
        let mut problems = Vec::new();
        let check = |m: Result<IntMatrix, _>, what: &str, problems: &mut Vec<String>| match m {
            Ok(m) => match self.target.annihilates_columns(&m) {
                Ok(true) => {}
                Ok(false) => problems.push(what.to_string()),
                Err(e) => problems.push(format!("{what}: {e}")),
            },
            Err(e) => problems.push(format!("{what}: {e}")),
        };
        check(
            self.matrix.checked_mul(&self.source.rels),
            "map does not send source relations into target relations",
            &mut problems,
        );
        let commutator = self
            .matrix
            .checked_mul(&self.source.t_action)
            .and_then(|a| {
                self.target
                    .t_action
                    .checked_mul(&self.matrix)
                    .and_then(|b| a.checked_sub(&b))
            });
        check(
            commutator,
            "map does not commute with t (not R-linear)",
            &mut problems,
        );
        problems
    }

    /// `self ∘ first`.
    pub fn compose_after(&self, first: &RModuleMap) -> Result<RModuleMap, RModError> {
        RModuleMap::new(
            first.source.clone(),
            self.target.clone(),
            self.matrix.checked_mul(&first.matrix)?,
        )
    }

    /// Whether this map is zero modulo target relations.
    pub fn is_zero(&self) -> Result<bool, RModError> {
        self.target.annihilates_columns(&self.matrix)
    }

    /// Whether the map becomes zero after localizing at the maximal ideal `s`
    /// in quotient mode (impose t = ±1, invert primes other than p).
    pub fn localizes_to_zero(&self, s: &PrimeSpot) -> Result<bool, RModError> {
        let p = s.prime().ok_or(RModError::NotMaximal(*s))?;
        let target = self.target.specialize(s.t_sign());
        columns_vanish(&target, &self.matrix, Locality::AtPrime(p))
    }

    /// Cokernel as an R-module.
    pub fn cokernel(&self) -> FgRModule {
        let rels = IntMatrix::hconcat(&[&self.target.rels, &self.matrix]).expect("rows match");
        FgRModule {
            gens: self.target.gens,
            rels,
            t_action: self.target.t_action.clone(),
        }
    }

    /// Kernel as an R-submodule of the source, presented on a basis of the
    /// lattice `{x : f(x) ∈ target relations}`.
    pub fn kernel(&self) -> Result<FgRModule, RModError> {
        let basis = preimage_basis(&self.matrix, &self.target.rels)?;
        let k = basis.cols();
        let coords = |v: &[BigInt]| -> Result<Vec<BigInt>, RModError> {
            solve_membership(&basis, v)?.ok_or_else(|| {
                RModError::IllDefinedMap(
                    "kernel is not closed under t or relations (map not R-linear?)".to_string(),
                )
            })
        };
        let rel_cols = self
            .source
            .rels
            .columns()
            .iter()
            .map(|c| coords(c))
            .collect::<Result<Vec<_>, _>>()?;
        let moved = self.source.t_action.checked_mul(&basis)?;
        let t_cols = moved
            .columns()
            .iter()
            .map(|c| coords(c))
            .collect::<Result<Vec<_>, _>>()?;
        Ok(FgRModule {
            gens: k,
            rels: IntMatrix::from_columns(k, &rel_cols)?,
            t_action: IntMatrix::from_columns(k, &t_cols)?,
        })
    }
}

/// Upper bound on the nilpotency index of `1 − t` for a module with
/// `t² = 1`: since `(1 − t)² = 2(1 − t)`, it is one more than the largest
/// power of 2 in an invariant factor.
pub fn one_minus_t_nilpotency_bound(m: &FgRModule) -> u32 {
    let nf = m.underlying().normal_form();
    nf.invariants
        .iter()
        .filter(|d| !d.is_zero())
        .map(|d| valuation(d, 2))
        .max()
        .unwrap_or(0)
        + 1
}

#[cfg(test)]
mod tests {
    use super::*;

    fn spot(s: &str) -> PrimeSpot {
        s.parse().unwrap()
    }

    #[test]
    fn validate_examples() {
        assert!(validate_module(&FgRModule::regular()).is_empty());
        let bad =
            FgRModule::new(1, IntMatrix::zeros(1, 0), IntMatrix::from_rows(&[vec![2]])).unwrap();
        assert_eq!(validate_module(&bad).len(), 1);
        assert!(validate_module(&FgRModule::r_mod_i()).is_empty());
    }

    #[test]
    fn validate_relation_preservation() {
        // ℤ² / ⟨(2,0)⟩ with t swapping the generators does not preserve relations
        let m = FgRModule::new(
            2,
            IntMatrix::from_rows(&[vec![2], vec![0]]),
            IntMatrix::from_rows(&[vec![0, 1], vec![1, 0]]),
        )
        .unwrap();
        let problems = validate_module(&m);
        assert!(problems.iter().any(|p| p.contains("relation lattice")));
    }

    #[test]
    fn t_squared_only_modulo_relations() {
        // ℤ/3 with t = 2: t² = 4 ≡ 1
        let m = FgRModule::new(
            1,
            IntMatrix::from_rows(&[vec![3]]),
            IntMatrix::from_rows(&[vec![2]]),
        )
        .unwrap();
        assert!(validate_module(&m).is_empty());
    }

    #[test]
    fn localize_examples() {
        let q = LocalizationMode::Quotient;
        let r_i = FgRModule::r_mod_i().localize(&spot("I,3"), q).unwrap();
        assert_eq!((r_i.rank(), r_i.length()), (1, 0));
        assert!(FgRModule::r_mod_j()
            .localize(&spot("I,3"), q)
            .unwrap()
            .is_zero());
        let at2 = FgRModule::r_mod_j().localize(&spot("I,2"), q).unwrap();
        assert_eq!((at2.rank(), at2.torsion().parts()), (0, &[1][..]));
        let reg = FgRModule::regular().localize(&spot("J,5"), q).unwrap();
        assert_eq!((reg.rank(), reg.length()), (1, 0));
    }

    #[test]
    fn localize_rejects_minimal() {
        assert!(matches!(
            FgRModule::regular().localize(&spot("I"), LocalizationMode::Quotient),
            Err(RModError::NotMaximal(_))
        ));
        assert_eq!(FgRModule::regular().rank_at_minimal(&spot("I")).unwrap(), 1);
        assert_eq!(FgRModule::r_mod_i().rank_at_minimal(&spot("J")).unwrap(), 0);
    }

    #[test]
    fn genuine_agrees_for_odd_primes() {
        let modules = [
            FgRModule::regular(),
            FgRModule::r_mod_i(),
            FgRModule::r_mod_j(),
            FgRModule::direct_sum(&[&FgRModule::regular(), &FgRModule::r_mod_j()]),
        ];
        for m in &modules {
            for s in ["I,3", "J,3", "I,5", "J,7"] {
                let s = spot(s);
                assert_eq!(
                    m.localize(&s, LocalizationMode::Quotient).unwrap(),
                    m.localize(&s, LocalizationMode::Genuine).unwrap(),
                    "{m:?} at {s}"
                );
            }
        }
    }

    #[test]
    fn genuine_at_two() {
        let g = LocalizationMode::Genuine;
        let s = spot("I,2");
        // R/J: t = −1 acts as a sign, so the 2-localized group is ℤ₍₂₎
        let m = FgRModule::r_mod_j().localize(&s, g).unwrap();
        assert_eq!((m.rank(), m.length()), (1, 0));
        // R itself keeps a nontrivial involution
        match FgRModule::regular().localize(&s, g) {
            Err(RModError::NotDvrModule(report)) => assert_eq!(report.underlying.rank(), 2),
            other => panic!("expected a not-a-DVR report, got {other:?}"),
        }
    }

    #[test]
    fn kernel_and_cokernel_of_inclusion() {
        // I ≅ R/J ↪ R, 1 ↦ 1 − t
        let phi = RModuleMap::new(
            FgRModule::r_mod_j(),
            FgRModule::regular(),
            IntMatrix::from_rows(&[vec![1], vec![-1]]),
        )
        .unwrap();
        assert!(phi.validate().is_empty());
        let ker = phi.kernel().unwrap();
        assert!(ker.underlying().normal_form().is_zero());
        let coker = phi.cokernel();
        assert!(validate_module(&coker).is_empty());
        assert_eq!(coker.underlying().normal_form().rank, 1);
        // t acts trivially on R/I
        assert_eq!(coker.rank_at_minimal(&spot("J")).unwrap(), 0);
    }

    #[test]
    fn kernel_of_projection() {
        // R → R/J, kernel J ≅ R/I
        let psi = RModuleMap::new(
            FgRModule::regular(),
            FgRModule::r_mod_j(),
            IntMatrix::from_rows(&[vec![1, -1]]),
        )
        .unwrap();
        let ker = psi.kernel().unwrap();
        assert!(validate_module(&ker).is_empty());
        assert_eq!(ker.gens(), 1);
        assert_eq!(ker.t_action(), &IntMatrix::from_rows(&[vec![1]]));
    }

    #[test]
    fn non_linear_map_detected() {
        let bad = RModuleMap::new(
            FgRModule::r_mod_j(),
            FgRModule::regular(),
            IntMatrix::from_rows(&[vec![1], vec![0]]),
        )
        .unwrap();
        assert!(bad.validate().iter().any(|p| p.contains("R-linear")));
    }

    #[test]
    fn nilpotency() {
        let omt = RingElem::one_minus_t();
        assert_eq!(
            FgRModule::r_mod_i().nilpotency_index(&omt, 3).unwrap(),
            Some(1)
        );
        assert_eq!(
            FgRModule::regular().nilpotency_index(&omt, 8).unwrap(),
            None
        );
        // ℤ/4 with t = −1: 1 − t = 2, squares to zero
        let m = FgRModule::new(
            1,
            IntMatrix::from_rows(&[vec![4]]),
            IntMatrix::from_rows(&[vec![-1]]),
        )
        .unwrap();
        let bound = one_minus_t_nilpotency_bound(&m);
        assert_eq!(bound, 3);
        assert_eq!(m.nilpotency_index(&omt, bound).unwrap(), Some(2));
    }
}
