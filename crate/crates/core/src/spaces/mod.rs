//! Space expressions built from catalog atoms, evaluated either globally
//! (without products) or one maximal ideal at a time through the Künneth
//! sequences.

mod catalog;

use std::fmt;

use serde_json::{Map, Value};
use thiserror::Error;

use crate::json::{self, JsonError};
use crate::kinv::{forgetful_ses, localize_kinvariant, KInvariant, KinvError};
use crate::kunneth::{kunneth_local, KunnethError, Settings};
use crate::linalg::IntMatrix;
use crate::rep_ring::{PrimeSpot, SpotKind, Support};
use crate::rmod::{FgAbelian, FgRModule, GradedZpModule, RModError};

pub use catalog::{
    entry_from_json, entry_to_json, six_term_file_from_json, BrokenSixTerm, Catalog, CatalogEntry,
    CatalogError, Mutant, BROKEN_FILE, ENTRY_FILES, MUTANT_FILES,
};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum SpaceError {
    #[error(transparent)]
    Kunneth(#[from] KunnethError),
    #[error(transparent)]
    Kinv(#[from] KinvError),
    #[error(transparent)]
    Module(#[from] RModError),
    #[error("{0} contains a product; only localized evaluation handles products")]
    GlobalProduct(SpaceExpr),
    #[error("{0}")]
    Unsupported(String),
    #[error("catalog data for {0} is inconsistent: {1}")]
    Inconsistent(String, String),
}

/// A ℤ/2-space built from points, the sign representation, the free orbit
/// and cells.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum SpaceExpr {
    Pt,
    V,
    G,
    /// ℝⁿ with trivial action.
    TrivialCell(u32),
    /// G × ℝⁿ.
    FreeCell(u32),
    Product(Box<SpaceExpr>, Box<SpaceExpr>),
    DisjointUnion(Vec<SpaceExpr>),
    SuspendR(Box<SpaceExpr>),
    SuspendV(Box<SpaceExpr>),
}

impl SpaceExpr {
    pub fn product(a: SpaceExpr, b: SpaceExpr) -> SpaceExpr {
        SpaceExpr::Product(Box::new(a), Box::new(b))
    }

    pub fn suspend_r(e: SpaceExpr) -> SpaceExpr {
        SpaceExpr::SuspendR(Box::new(e))
    }

    pub fn suspend_v(e: SpaceExpr) -> SpaceExpr {
        SpaceExpr::SuspendV(Box::new(e))
    }

    pub fn is_leaf(&self) -> bool {
        matches!(
            self,
            SpaceExpr::Pt
                | SpaceExpr::V
                | SpaceExpr::G
                | SpaceExpr::TrivialCell(_)
                | SpaceExpr::FreeCell(_)
        )
    }

    pub fn has_product(&self) -> bool {
        match self {
            SpaceExpr::Product(..) => true,
            SpaceExpr::DisjointUnion(parts) => parts.iter().any(SpaceExpr::has_product),
            SpaceExpr::SuspendR(e) | SpaceExpr::SuspendV(e) => e.has_product(),
            _ => false,
        }
    }

    /// Whether G acts freely.
    pub fn is_free(&self) -> bool {
        match self {
            SpaceExpr::G | SpaceExpr::FreeCell(_) => true,
            SpaceExpr::Pt | SpaceExpr::V | SpaceExpr::TrivialCell(_) => false,
            SpaceExpr::Product(a, b) => a.is_free() || b.is_free(),
            SpaceExpr::DisjointUnion(parts) => parts.iter().all(SpaceExpr::is_free),
            SpaceExpr::SuspendR(e) | SpaceExpr::SuspendV(e) => e.is_free(),
        }
    }

    pub fn from_json(v: &Value) -> Result<SpaceExpr, JsonError> {
        space_from_json(v, "")
    }

    pub fn to_json(&self) -> Value {
        let mut obj = Map::new();
        let (key, value) = match self {
            SpaceExpr::Product(a, b) => ("product", Value::Array(vec![a.to_json(), b.to_json()])),
            SpaceExpr::DisjointUnion(parts) => (
                "union",
                Value::Array(parts.iter().map(SpaceExpr::to_json).collect()),
            ),
            SpaceExpr::SuspendR(e) => ("suspendR", e.to_json()),
            SpaceExpr::SuspendV(e) => ("suspendV", e.to_json()),
            leaf => ("atom", Value::from(leaf.to_string())),
        };
        obj.insert(key.into(), value);
        Value::Object(obj)
    }
}

fn atom_from_name(name: &str) -> Option<SpaceExpr> {
    let cell = |rest: &str| rest.parse::<u32>().ok().filter(|&n| n >= 1);
    match name {
        "pt" | "Pt" => Some(SpaceExpr::Pt),
        "V" => Some(SpaceExpr::V),
        "G" => Some(SpaceExpr::G),
        _ => {
            if let Some(rest) = name.strip_prefix("GxR^") {
                cell(rest).map(SpaceExpr::FreeCell)
            } else if let Some(rest) = name.strip_prefix("R^") {
                cell(rest).map(SpaceExpr::TrivialCell)
            } else {
                None
            }
        }
    }
}

/// `{"atom": name}`, `{"product": [e, e, …]}`, `{"union": [e, …]}`,
/// `{"suspendR": e}` or `{"suspendV": e}`.
pub fn space_from_json(v: &Value, ptr: &str) -> Result<SpaceExpr, JsonError> {
    let obj = json::object(
        v,
        ptr,
        &["atom", "product", "union", "suspendR", "suspendV"],
    )?;
    if obj.len() != 1 {
        return Err(JsonError::new(
            ptr,
            "a space expression has exactly one key",
        ));
    }
    let (key, inner) = obj.iter().next().expect("one key");
    let ptr = json::child(ptr, key);
    let list = |min: usize| -> Result<Vec<SpaceExpr>, JsonError> {
        let items = json::array(inner, &ptr)?;
        if items.len() < min {
            return Err(JsonError::new(
                &ptr,
                format!("needs at least {min} operands"),
            ));
        }
        items
            .iter()
            .enumerate()
            .map(|(i, e)| space_from_json(e, &json::index(&ptr, i)))
            .collect()
    };
    match key.as_str() {
        "atom" => {
            let name = json::string(inner, &ptr)?;
            atom_from_name(name).ok_or_else(|| {
                JsonError::new(
                    &ptr,
                    format!("unknown atom {name:?}; expected pt, V, G, R^n or GxR^n with n >= 1"),
                )
            })
        }
        "product" => {
            let mut items = list(2)?.into_iter();
            let first = items.next().expect("two operands");
            Ok(items.fold(first, SpaceExpr::product))
        }
        "union" => Ok(SpaceExpr::DisjointUnion(list(1)?)),
        "suspendR" => Ok(SpaceExpr::suspend_r(space_from_json(inner, &ptr)?)),
        "suspendV" => Ok(SpaceExpr::suspend_v(space_from_json(inner, &ptr)?)),
        _ => unreachable!("keys filtered above"),
    }
}

impl fmt::Display for SpaceExpr {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            SpaceExpr::Pt => write!(f, "pt"),
            SpaceExpr::V => write!(f, "V"),
            SpaceExpr::G => write!(f, "G"),
            SpaceExpr::TrivialCell(n) => write!(f, "R^{n}"),
            SpaceExpr::FreeCell(n) => write!(f, "GxR^{n}"),
            SpaceExpr::Product(a, b) => write!(f, "({a} x {b})"),
            SpaceExpr::DisjointUnion(parts) => {
                let parts: Vec<String> = parts.iter().map(|p| p.to_string()).collect();
                write!(f, "({})", parts.join(" + "))
            }
            SpaceExpr::SuspendR(e) => write!(f, "S_R({e})"),
            SpaceExpr::SuspendV(e) => write!(f, "S_V({e})"),
        }
    }
}

fn shift_by(k: KInvariant, n: u32) -> KInvariant {
    if n % 2 == 1 {
        k.shift()
    } else {
        k
    }
}

/// The global 𝕂-invariant of a product-free expression.
pub fn eval_kinvariant(e: &SpaceExpr, cat: &Catalog) -> Result<KInvariant, SpaceError> {
    Ok(match e {
        SpaceExpr::Pt => cat.pt.kinv.clone(),
        SpaceExpr::V => cat.v.kinv.clone(),
        SpaceExpr::G => cat.g.kinv.clone(),
        SpaceExpr::TrivialCell(n) => shift_by(cat.pt.kinv.clone(), *n),
        SpaceExpr::FreeCell(n) => shift_by(cat.g.kinv.clone(), *n),
        SpaceExpr::Product(..) => return Err(SpaceError::GlobalProduct(e.clone())),
        SpaceExpr::DisjointUnion(parts) => {
            let mut acc = KInvariant::zero();
            for p in parts {
                acc = acc.direct_sum(&eval_kinvariant(p, cat)?);
            }
            acc
        }
        SpaceExpr::SuspendR(inner) => eval_kinvariant(inner, cat)?.shift(),
        SpaceExpr::SuspendV(inner) => eval_kinvariant(inner, cat)?.twist(),
    })
}

/// Non-equivariant K⁰ and K¹ of a product-free expression, from the catalog
/// six-term data.
pub fn nonequivariant_k(e: &SpaceExpr, cat: &Catalog) -> Result<[FgAbelian; 2], SpaceError> {
    let of = |entry: &CatalogEntry| entry.six_term.k.clone().map(|p| p.normal_form());
    let shifted = |[a, b]: [FgAbelian; 2], n: u32| if n % 2 == 1 { [b, a] } else { [a, b] };
    Ok(match e {
        SpaceExpr::Pt => of(&cat.pt),
        SpaceExpr::V => of(&cat.v),
        SpaceExpr::G => of(&cat.g),
        SpaceExpr::TrivialCell(n) => shifted(of(&cat.pt), *n),
        SpaceExpr::FreeCell(n) => shifted(of(&cat.g), *n),
        SpaceExpr::Product(..) => return Err(SpaceError::GlobalProduct(e.clone())),
        SpaceExpr::DisjointUnion(parts) => {
            let mut acc = [FgAbelian::default(), FgAbelian::default()];
            for p in parts {
                let [a, b] = nonequivariant_k(p, cat)?;
                acc = [acc[0].direct_sum(&a), acc[1].direct_sum(&b)];
            }
            acc
        }
        // V is a line after forgetting the action
        SpaceExpr::SuspendR(inner) | SpaceExpr::SuspendV(inner) => {
            shifted(nonequivariant_k(inner, cat)?, 1)
        }
    })
}

/// Which Künneth sequence drives the localized evaluation.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Side {
    /// At (I,p), with full regraded 𝕂-invariants.
    Main,
    /// At ideals with support G, with K*_G alone.
    SupportG,
}

impl Side {
    pub fn for_spot(s: &PrimeSpot) -> Side {
        match s.support() {
            Support::Trivial => Side::Main,
            Support::Whole => Side::SupportG,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LocalEval {
    pub module: GradedZpModule,
    /// Set once any Künneth step in the tree left its middle undetermined.
    pub ambiguous: bool,
}

/// Localized 𝕂 (MAIN) or K*_G (PHILLIPS) of an expression at `s`.
pub fn eval_local(
    e: &SpaceExpr,
    s: &PrimeSpot,
    side: Side,
    settings: Settings,
    cat: &Catalog,
) -> Result<LocalEval, SpaceError> {
    settings.check_spot(s)?;
    if Side::for_spot(s) != side {
        return Err(SpaceError::Unsupported(format!(
            "{s} does not match the {side:?} side"
        )));
    }
    eval_local_rec(e, s, side, settings, cat)
}

fn eval_local_rec(
    e: &SpaceExpr,
    s: &PrimeSpot,
    side: Side,
    settings: Settings,
    cat: &Catalog,
) -> Result<LocalEval, SpaceError> {
    let unambiguous = |module| LocalEval {
        module,
        ambiguous: false,
    };
    let rec = |e: &SpaceExpr| eval_local_rec(e, s, side, settings, cat);
    Ok(match e {
        leaf if leaf.is_leaf() => unambiguous(localize_kinvariant(
            &eval_kinvariant(leaf, cat)?,
            s,
            settings.mode,
        )?),
        SpaceExpr::Product(a, b) => {
            let (x, y) = (rec(a)?, rec(b)?);
            let r = kunneth_local(&x.module, &y.module, s)?;
            LocalEval {
                module: r.middle,
                ambiguous: x.ambiguous || y.ambiguous || r.ambiguous,
            }
        }
        SpaceExpr::DisjointUnion(parts) => {
            let mut acc = unambiguous(GradedZpModule::zero(s.prime().expect("maximal"))?);
            for p in parts {
                let x = rec(p)?;
                acc = LocalEval {
                    module: acc.module.direct_sum(&x.module)?,
                    ambiguous: acc.ambiguous || x.ambiguous,
                };
            }
            acc
        }
        SpaceExpr::SuspendR(inner) => {
            let x = rec(inner)?;
            LocalEval {
                module: x.module.shift(1),
                ambiguous: x.ambiguous,
            }
        }
        // Regrading turns the twist into a shift at (I,p); at support-G
        // ideals φ becomes an isomorphism since ψφ = 1 − t ↦ 2 is a unit.
        SpaceExpr::SuspendV(inner) => {
            let x = rec(inner)?;
            match side {
                Side::Main => LocalEval {
                    module: x.module.shift(1),
                    ambiguous: x.ambiguous,
                },
                Side::SupportG => x,
            }
        }
        _ => unreachable!("leaves handled above"),
    })
}

fn require_odd_i(s: &PrimeSpot) -> Result<u64, SpaceError> {
    match s.kind() {
        SpotKind::MaximalI(p) if p != 2 => Ok(p),
        _ => Err(SpaceError::Unsupported(format!(
            "{s} is not of the form (I,p) with p odd"
        ))),
    }
}

/// Checks the catalog K*(x) against the forgetful sequence of 𝕂(x).
fn checked_nonequivariant_k(x: &SpaceExpr, cat: &Catalog) -> Result<[FgAbelian; 2], SpaceError> {
    let k = nonequivariant_k(x, cat)?;
    let ends = forgetful_ses(&eval_kinvariant(x, cat)?)?;
    for (i, e) in ends.iter().enumerate() {
        if !e.admits_middle(&k[i]) {
            return Err(SpaceError::Inconsistent(
                x.to_string(),
                format!(
                    "K^{i} = {} cannot sit between {} and {}",
                    k[i],
                    e.sub(),
                    e.quot()
                ),
            ));
        }
    }
    Ok(k)
}

/// 𝕂(x × G) at (I,p) without Künneth: K*_G(x × G) is K*(x) and
/// K*_{G,−}(x × G) is K^{*+1}(x), so after regrading each degree of K*(x)
/// appears twice.
pub fn free_oracle(
    e: &SpaceExpr,
    s: &PrimeSpot,
    cat: &Catalog,
) -> Result<GradedZpModule, SpaceError> {
    let p = require_odd_i(s)?;
    let x = match e {
        SpaceExpr::Product(a, b) if **b == SpaceExpr::G && !a.has_product() => a,
        SpaceExpr::Product(a, b) if **a == SpaceExpr::G && !b.has_product() => b,
        _ => {
            return Err(SpaceError::Unsupported(format!(
                "{e} is not of the form x × G with x product-free"
            )))
        }
    };
    let [k0, k1] = checked_nonequivariant_k(x, cat)?;
    let twice = |a: &FgAbelian| {
        let local = a.p_part(p);
        local.direct_sum(&local)
    };
    Ok(GradedZpModule::new(twice(&k0)?, twice(&k1)?)?)
}

/// R-module with `t` acting trivially on a presented abelian group.
fn trivial_action(a: &FgAbelian) -> FgRModule {
    let pres = a.presentation();
    FgRModule::new(
        pres.gens(),
        pres.rels().clone(),
        IntMatrix::identity(pres.gens()),
    )
    .expect("square action")
}

/// Global 𝕂 of `leaf × y` for `y` product-free, from the geometry of the
/// leaf alone: a trivial cell suspends, V twists, and a free factor G
/// makes the product free over `y`. In the free case only the modules are
/// determined; φ and ψ are recorded as zero.
pub fn direct_product_kinvariant(
    leaf: &SpaceExpr,
    y: &SpaceExpr,
    cat: &Catalog,
) -> Result<KInvariant, SpaceError> {
    if y.has_product() {
        return Err(SpaceError::GlobalProduct(y.clone()));
    }
    let ky = || eval_kinvariant(y, cat);
    Ok(match leaf {
        SpaceExpr::Pt => ky()?,
        SpaceExpr::V => ky()?.twist(),
        SpaceExpr::TrivialCell(n) => shift_by(ky()?, *n),
        SpaceExpr::G | SpaceExpr::FreeCell(_) => {
            let [k0, k1] = checked_nonequivariant_k(y, cat)?;
            let kg = [trivial_action(&k0), trivial_action(&k1)];
            let kgm = [trivial_action(&k1), trivial_action(&k0)];
            let phi = [0, 1].map(|i| IntMatrix::zeros(kg[i].gens(), kgm[i].gens()));
            let psi = [0, 1].map(|i| IntMatrix::zeros(kgm[i].gens(), kg[i].gens()));
            let k = KInvariant::new(kg, kgm, phi, psi)?;
            match leaf {
                SpaceExpr::FreeCell(n) => shift_by(k, *n),
                _ => k,
            }
        }
        other => return Err(SpaceError::Unsupported(format!("{other} is not a leaf"))),
    })
}

/// Localized 𝕂 computed without the Künneth engine. Handles product-free
/// expressions and binary products in which one factor is a leaf.
pub fn direct_eval(
    e: &SpaceExpr,
    s: &PrimeSpot,
    settings: Settings,
    cat: &Catalog,
) -> Result<GradedZpModule, SpaceError> {
    settings.check_spot(s)?;
    let k = match e {
        SpaceExpr::Product(a, b) if a.is_leaf() => direct_product_kinvariant(a, b, cat)?,
        SpaceExpr::Product(a, b) if b.is_leaf() => direct_product_kinvariant(b, a, cat)?,
        other if !other.has_product() => eval_kinvariant(other, cat)?,
        other => {
            return Err(SpaceError::Unsupported(format!(
                "no direct evaluation for {other}"
            )))
        }
    };
    Ok(localize_kinvariant(&k, s, settings.mode)?)
}

/// K*(x) localized at p, as (even, odd).
pub fn nonequivariant_local(
    x: &SpaceExpr,
    p: u64,
    cat: &Catalog,
) -> Result<GradedZpModule, SpaceError> {
    let [k0, k1] = checked_nonequivariant_k(x, cat)?;
    Ok(GradedZpModule::new(k0.p_part(p), k1.p_part(p))?)
}

#[cfg(test)]
mod tests {
    use super::*;
    use serde_json::json;

    fn spot(s: &str) -> PrimeSpot {
        s.parse().unwrap()
    }

    #[test]
    fn parse_and_print() {
        let v = json!({"product": [{"atom": "G"}, {"suspendV": {"atom": "pt"}}]});
        let e = SpaceExpr::from_json(&v).unwrap();
        assert_eq!(e.to_string(), "(G x S_V(pt))");
        assert_eq!(e.to_json(), v);
        let e = SpaceExpr::from_json(&json!({"atom": "GxR^2"})).unwrap();
        assert_eq!(e, SpaceExpr::FreeCell(2));
        let err = SpaceExpr::from_json(&json!({"union": [{"atom": "X"}]})).unwrap_err();
        assert_eq!(err.pointer, "/union/0/atom");
        let err = SpaceExpr::from_json(&json!({"product": [{"atom": "G"}]})).unwrap_err();
        assert_eq!(err.pointer, "/product");
        assert!(SpaceExpr::from_json(&json!({"atom": "R^0"})).is_err());
    }

    #[test]
    fn products_fold_left() {
        let v = json!({"product": [{"atom": "pt"}, {"atom": "V"}, {"atom": "G"}]});
        let e = SpaceExpr::from_json(&v).unwrap();
        assert_eq!(e.to_string(), "((pt x V) x G)");
    }

    #[test]
    fn global_eval() {
        let cat = Catalog::bundled();
        assert_eq!(
            eval_kinvariant(&SpaceExpr::suspend_v(SpaceExpr::Pt), &cat).unwrap(),
            cat.v.kinv
        );
        assert_eq!(
            eval_kinvariant(&SpaceExpr::suspend_r(SpaceExpr::G), &cat).unwrap(),
            cat.g_r.kinv
        );
        assert!(matches!(
            eval_kinvariant(&SpaceExpr::product(SpaceExpr::Pt, SpaceExpr::Pt), &cat),
            Err(SpaceError::GlobalProduct(_))
        ));
    }

    #[test]
    fn local_eval_examples() {
        let cat = Catalog::bundled();
        let st = Settings::default();
        let gg = SpaceExpr::product(SpaceExpr::G, SpaceExpr::G);
        let r = eval_local(&gg, &spot("I,3"), Side::Main, st, &cat).unwrap();
        assert_eq!((r.module.even.rank(), r.module.odd.rank()), (4, 0));
        assert!(!r.ambiguous);
        let vv = SpaceExpr::product(SpaceExpr::V, SpaceExpr::V);
        let pt = eval_local(&SpaceExpr::Pt, &spot("I,3"), Side::Main, st, &cat).unwrap();
        assert_eq!(
            eval_local(&vv, &spot("I,3"), Side::Main, st, &cat).unwrap(),
            pt
        );
        let pp = SpaceExpr::product(SpaceExpr::Pt, SpaceExpr::Pt);
        let r = eval_local(&pp, &spot("J,3"), Side::SupportG, st, &cat).unwrap();
        assert_eq!((r.module.even.rank(), r.module.odd.rank()), (1, 0));
        assert!(eval_local(&pp, &spot("J,3"), Side::Main, st, &cat).is_err());
    }

    #[test]
    fn free_oracle_examples() {
        let cat = Catalog::bundled();
        let s = spot("I,3");
        let of = |x| free_oracle(&SpaceExpr::product(x, SpaceExpr::G), &s, &cat).unwrap();
        assert_eq!(
            (of(SpaceExpr::Pt).even.rank(), of(SpaceExpr::Pt).odd.rank()),
            (2, 0)
        );
        assert_eq!(of(SpaceExpr::G).total_rank(), 4);
        assert_eq!(
            (of(SpaceExpr::V).even.rank(), of(SpaceExpr::V).odd.rank()),
            (0, 2)
        );
        assert!(free_oracle(&SpaceExpr::G, &s, &cat).is_err());
    }

    #[test]
    fn nonequivariant_k_of_atoms() {
        let cat = Catalog::bundled();
        let ranks = |e: &SpaceExpr| nonequivariant_k(e, &cat).unwrap().map(|a| a.rank);
        assert_eq!(ranks(&SpaceExpr::Pt), [1, 0]);
        assert_eq!(ranks(&SpaceExpr::V), [0, 1]);
        assert_eq!(ranks(&SpaceExpr::G), [2, 0]);
        assert_eq!(ranks(&SpaceExpr::FreeCell(1)), [0, 2]);
        assert_eq!(ranks(&SpaceExpr::suspend_v(SpaceExpr::V)), [1, 0]);
    }
}
