use eqk_core::kinv::{forgetful_ses, maps_vanish_at, six_term_verify, validate_kinvariant};
use eqk_core::kunneth::{doubling_check, p2_diagnostic, remark_failure_demo, support_g_vanishing};
use eqk_core::rep_ring::{SpotKind, Support};
use eqk_core::spaces::{
    direct_eval, direct_product_kinvariant, eval_kinvariant, eval_local, free_oracle,
    nonequivariant_local, Side,
};
use eqk_core::{Catalog, LocalizationMode, PrimeSpot, Settings, SpaceExpr};
use rayon::prelude::*;
use serde_json::{json, Value};

use crate::commands::p2_checks;
use crate::report::{Check, CommandOutput, Outcome};

#[derive(Clone, Copy, Debug, PartialEq, Eq, clap::ValueEnum)]
pub enum Suite {
    Catalog,
    Oracles,
    P2,
    All,
}

type Case<'a> = Box<dyn Fn() -> Vec<Check> + Send + Sync + 'a>;

fn fail(id: &str, location: impl Into<String>, e: impl std::fmt::Display) -> Vec<Check> {
    vec![Check::new(id, location, Outcome::Fail, e.to_string())]
}

fn one(id: &str, location: impl Into<String>, ok: bool, detail: impl Into<String>) -> Vec<Check> {
    vec![Check::new(id, location, Outcome::from_bool(ok), detail)]
}

const ATOMS: [SpaceExpr; 3] = [SpaceExpr::Pt, SpaceExpr::V, SpaceExpr::G];

fn catalog_cases<'a>(
    cat: &'a Catalog,
    primes: &'a [PrimeSpot],
    settings: Settings,
) -> Vec<Case<'a>> {
    let mut cases: Vec<Case<'a>> = Vec::new();
    for e in cat.entries() {
        cases.push(Box::new(move || {
            let problems = validate_kinvariant(&e.kinv);
            one(
                "kinv.valid",
                &e.name,
                problems.is_empty(),
                problems.join("; "),
            )
        }));
    }
    for m in &cat.mutants {
        cases.push(Box::new(move || {
            let problems = validate_kinvariant(&m.kinv);
            one(
                "kinv.mutant_rejected",
                &m.name,
                !problems.is_empty(),
                problems.join("; "),
            )
        }));
    }
    for e in cat.entries() {
        cases.push(Box::new(move || match six_term_verify(&e.six_term) {
            Ok(r) => one(
                "six_term.exact",
                &e.name,
                r.is_exact(),
                r.failing_spots().join(", "),
            ),
            Err(err) => fail("six_term.exact", &e.name, err),
        }));
        cases.push(Box::new(move || {
            let ends = match forgetful_ses(&e.kinv) {
                Ok(ends) => ends,
                Err(err) => return fail("forgetful.middle_admitted", &e.name, err),
            };
            let k = e.six_term.k.clone().map(|p| p.normal_form());
            (0..2)
                .map(|i| {
                    Check::new(
                        "forgetful.middle_admitted",
                        format!("{} degree {i}", e.name),
                        Outcome::from_bool(ends[i].admits_middle(&k[i])),
                        format!("{} between {} and {}", k[i], ends[i].sub(), ends[i].quot()),
                    )
                })
                .collect()
        }));
    }
    let b = &cat.broken;
    cases.push(Box::new(move || match six_term_verify(&b.data) {
        Ok(r) => {
            let failing = r.failing_spots();
            one(
                "six_term.broken_detected",
                &b.name,
                failing.contains(&b.predicted_spot.as_str()),
                format!(
                    "predicted {}; nonzero at {}",
                    b.predicted_spot,
                    failing.join(", ")
                ),
            )
        }
        Err(err) => fail("six_term.broken_detected", &b.name, err),
    }));
    for s in primes {
        match s.kind() {
            SpotKind::MaximalI(2) => cases.push(Box::new(move || {
                vec![Check::new(
                    "kinv.maps_vanish",
                    s.to_string(),
                    Outcome::Skipped,
                    "p = 2 is covered by the p2 suite",
                )]
            })),
            SpotKind::MaximalI(_) => {
                for e in cat.entries() {
                    cases.push(Box::new(move || {
                        let loc = format!("{} at {s}", e.name);
                        match maps_vanish_at(&e.kinv, s) {
                            Ok(ok) => one("kinv.maps_vanish", loc, ok, ""),
                            Err(err) => fail("kinv.maps_vanish", loc, err),
                        }
                    }));
                }
            }
            SpotKind::MaximalJ(_) => {
                for e in cat.entries() {
                    cases.push(Box::new(move || {
                        let loc = format!("{} at {s}", e.name);
                        match support_g_vanishing(&e.kinv, s, settings) {
                            Ok(r) if e.free => one(
                                "support_g.vanishing",
                                loc,
                                r.free && r.vanishes,
                                format!("free: {}, vanishes: {}", r.free, r.vanishes),
                            ),
                            Ok(r) => one(
                                "support_g.nonfree_rejected",
                                loc,
                                !r.free && !r.vanishes,
                                format!("free: {}, vanishes: {}", r.free, r.vanishes),
                            ),
                            Err(err) => fail("support_g.vanishing", loc, err),
                        }
                    }));
                }
            }
            SpotKind::MinimalI | SpotKind::MinimalJ => {}
        }
    }
    cases
}

fn oracle_cases<'a>(
    cat: &'a Catalog,
    primes: &'a [PrimeSpot],
    settings: Settings,
) -> Vec<Case<'a>> {
    let mut cases: Vec<Case<'a>> = Vec::new();
    for s in primes {
        let side = Side::for_spot(s);
        let eval = move |e: &SpaceExpr| eval_local(e, s, side, settings, cat);
        match s.kind() {
            SpotKind::MaximalI(2) => cases.push(Box::new(move || {
                vec![Check::new(
                    "kunneth.oracle_equivalence",
                    s.to_string(),
                    Outcome::Skipped,
                    "p = 2 is covered by the p2 suite",
                )]
            })),
            SpotKind::MaximalI(_) => {
                for a in &ATOMS {
                    for b in &ATOMS {
                        cases.push(Box::new(move || {
                            let e = SpaceExpr::product(a.clone(), b.clone());
                            let loc = format!("{e} at {s}");
                            match (eval(&e), direct_eval(&e, s, settings, cat)) {
                                (Ok(k), Ok(d)) => one(
                                    "kunneth.oracle_equivalence",
                                    loc,
                                    k.module == d,
                                    format!("kunneth {} vs direct {d}", k.module),
                                ),
                                (Err(err), _) | (_, Err(err)) => {
                                    fail("kunneth.oracle_equivalence", loc, err)
                                }
                            }
                        }));
                    }
                }
                for x in &ATOMS {
                    cases.push(Box::new(move || {
                        let e = SpaceExpr::product(x.clone(), SpaceExpr::G);
                        let loc = format!("{e} at {s}");
                        match (eval(&e), free_oracle(&e, s, cat)) {
                            (Ok(k), Ok(o)) => one(
                                "kunneth.free_oracle",
                                loc,
                                k.module == o,
                                format!("kunneth {} vs oracle {o}", k.module),
                            ),
                            (Err(err), _) | (_, Err(err)) => fail("kunneth.free_oracle", loc, err),
                        }
                    }));
                    cases.push(Box::new(move || {
                        let loc = format!("{x} at {s}");
                        let run = || -> Result<_, String> {
                            let kx = eval_kinvariant(x, cat).map_err(|e| e.to_string())?;
                            let p = s.prime().expect("maximal");
                            let k = nonequivariant_local(x, p, cat).map_err(|e| e.to_string())?;
                            doubling_check(&kx, &cat.g.kinv, (&k.even, &k.odd), s, settings)
                                .map_err(|e| e.to_string())
                        };
                        match run() {
                            Ok(r) => one(
                                "doubling.size",
                                loc,
                                r.holds,
                                format!(
                                    "rank {} length {} vs K* rank {} length {}",
                                    r.product.rank,
                                    r.product.length,
                                    r.nonequivariant.rank,
                                    r.nonequivariant.length
                                ),
                            ),
                            Err(err) => fail("doubling.size", loc, err),
                        }
                    }));
                }
                for y in [
                    SpaceExpr::Pt,
                    SpaceExpr::V,
                    SpaceExpr::G,
                    SpaceExpr::FreeCell(1),
                    SpaceExpr::TrivialCell(1),
                ] {
                    cases.push(Box::new(move || {
                        let loc = format!("{y} at {s}");
                        let unit = SpaceExpr::product(SpaceExpr::Pt, y.clone());
                        let twice = SpaceExpr::suspend_v(SpaceExpr::suspend_v(y.clone()));
                        match (eval(&y), eval(&unit), eval(&twice)) {
                            (Ok(a), Ok(b), Ok(c)) => vec![
                                Check::new(
                                    "kunneth.unit_law",
                                    loc.clone(),
                                    Outcome::from_bool(a == b),
                                    "",
                                ),
                                Check::new(
                                    "spaces.double_twist",
                                    loc,
                                    Outcome::from_bool(a == c),
                                    "",
                                ),
                            ],
                            (Err(err), _, _) | (_, Err(err), _) | (_, _, Err(err)) => {
                                fail("kunneth.unit_law", loc, err)
                            }
                        }
                    }));
                }
                cases.push(Box::new(move || {
                    let loc = format!("G x G at {s}");
                    let run = || -> Result<_, String> {
                        let product = direct_product_kinvariant(&SpaceExpr::G, &SpaceExpr::G, cat)
                            .map_err(|e| e.to_string())?;
                        remark_failure_demo(&cat.g.kinv, &cat.g.kinv, &product, s, settings)
                            .map_err(|e| e.to_string())
                    };
                    match run() {
                        Ok(r) => one(
                            "remark_failure.reproduced",
                            loc,
                            r.naive_rank == 1 && r.true_rank == 2 && r.mismatch && r.resolved,
                            format!(
                                "naive rank {}, true rank {}, full even rank {}, direct even rank {}",
                                r.naive_rank, r.true_rank, r.full_even_rank, r.direct_even_rank
                            ),
                        ),
                        Err(err) => fail("remark_failure.reproduced", loc, err),
                    }
                }));
            }
            SpotKind::MaximalJ(_) => {
                for a in [SpaceExpr::Pt, SpaceExpr::V] {
                    for b in [SpaceExpr::Pt, SpaceExpr::V] {
                        let a = a.clone();
                        cases.push(Box::new(move || {
                            let e = SpaceExpr::product(a.clone(), b.clone());
                            let loc = format!("{e} at {s}");
                            match (eval(&e), direct_eval(&e, s, settings, cat)) {
                                (Ok(k), Ok(d)) => one(
                                    "support_g.bott",
                                    loc,
                                    k.module == d && !k.ambiguous,
                                    format!("kunneth {} vs direct {d}", k.module),
                                ),
                                (Err(err), _) | (_, Err(err)) => fail("support_g.bott", loc, err),
                            }
                        }));
                    }
                }
            }
            SpotKind::MinimalI | SpotKind::MinimalJ => {}
        }
    }
    cases
}

fn p2_cases<'a>(cat: &'a Catalog) -> Vec<Case<'a>> {
    vec![
        Box::new(move || match p2_diagnostic(&cat.pt.kinv) {
            Ok(d) => p2_checks(&d),
            Err(err) => fail("p2.point_square_consistency", "(I,2)", err),
        }),
        Box::new(move || {
            let s = PrimeSpot::maximal_i(2).expect("2 is prime");
            let r = cat.pt.kinv.kg[0].localize(&s, LocalizationMode::Genuine);
            one(
                "p2.genuine_not_dvr",
                "pt at (I,2) genuine",
                r.is_err(),
                match r {
                    Ok(z) => format!("unexpectedly localized to {z}"),
                    Err(e) => e.to_string(),
                },
            )
        }),
    ]
}

pub fn verify(
    suite: Suite,
    primes: &[PrimeSpot],
    settings: Settings,
    cat: &Catalog,
) -> CommandOutput {
    let mut cases = Vec::new();
    let mut notes = Vec::new();
    if matches!(suite, Suite::Catalog | Suite::All) {
        cases.extend(catalog_cases(cat, primes, settings));
    }
    if matches!(suite, Suite::Oracles | Suite::All) {
        cases.extend(oracle_cases(cat, primes, settings));
    }
    if matches!(suite, Suite::P2 | Suite::All) {
        if settings.experimental_p2 {
            cases.extend(p2_cases(cat));
        } else {
            notes.push("p2 checks skipped: pass --experimental-p2 to run them".to_string());
        }
    }
    let checks: Vec<Check> = cases.par_iter().flat_map_iter(|case| case()).collect();
    let minimal: Vec<String> = primes
        .iter()
        .filter(|s| !s.is_maximal())
        .map(|s| s.to_string())
        .collect();
    if !minimal.is_empty() {
        notes.push(format!("minimal primes ignored: {}", minimal.join(" ")));
    }
    let support: Vec<Value> = primes
        .iter()
        .map(|s| {
            json!({
                "prime": s.to_string(),
                "support": if s.support() == Support::Trivial { "{1}" } else { "G" },
            })
        })
        .collect();
    CommandOutput {
        results: json!({
            "suite": format!("{suite:?}").to_lowercase(),
            "primes": support,
            "notes": notes,
        }),
        lines: notes,
        checks,
    }
}

/// Primes for `verify` when none are given.
pub fn default_primes() -> Vec<PrimeSpot> {
    ["I,3", "J,3", "I,5"]
        .iter()
        .map(|s| s.parse().expect("valid"))
        .collect()
}
