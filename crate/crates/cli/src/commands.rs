use eqk_core::json::{self, graded_to_json, kunneth_result_to_json, zp_to_json};
use eqk_core::kinv::{localize_kinvariant, six_term_verify, validate_kinvariant, SixTermData};
use eqk_core::kunneth::{p2_diagnostic, remark_failure_demo, KunnethError, P2Diagnostic};
use eqk_core::rep_ring::{localization_target, spec_r_points, Support};
use eqk_core::rmod::{tensor_zp, tor1_zp, validate_module, RModError};
use eqk_core::spaces::{
    direct_eval, direct_product_kinvariant, eval_kinvariant, eval_local, free_oracle,
    nonequivariant_local, six_term_file_from_json, Side, SpaceError,
};
use eqk_core::{kunneth, Catalog, KInvariant, PrimeSpot, Settings, SpaceExpr};
use serde_json::{json, Map, Value};

use crate::input::InputError;
use crate::report::{Check, CommandOutput, Outcome};

pub type CommandResult = Result<CommandOutput, InputError>;

/// Computation errors caused by the request itself (wrong kind of prime,
/// unsupported shape) are input errors.
pub fn usage<E: std::fmt::Display>(context: &str) -> impl Fn(E) -> InputError + '_ {
    move |e| InputError(format!("{context}: {e}"))
}

pub fn spec_r(max_prime: u64) -> CommandResult {
    let points = spec_r_points(max_prime);
    let mut lines = vec![
        "Spec R(Z/2) = Spec Z[t]/(t^2 - 1)".to_string(),
        String::new(),
        "  minimal:   I = (t - 1), support {1}        J = (t + 1), support G".to_string(),
    ];
    let maximal: Vec<&PrimeSpot> = points.iter().filter(|s| s.is_maximal()).collect();
    let left: Vec<String> = maximal
        .iter()
        .filter(|s| s.support() == Support::Trivial && s.prime() != Some(2))
        .map(|s| s.to_string())
        .collect();
    let right: Vec<String> = maximal
        .iter()
        .filter(|s| s.support() == Support::Whole)
        .map(|s| s.to_string())
        .collect();
    lines.push(format!(
        "  maximal:   ... {}  (I,2)=(J,2)  {} ...",
        left.join(" "),
        right.join(" ")
    ));
    lines.push(
        "             |<------ support {1} ------>|           |<-- support G -->|".to_string(),
    );
    lines.push(String::new());
    let mut listing = Vec::new();
    for s in &points {
        let support = match s.support() {
            Support::Trivial => "{1}",
            Support::Whole => "G",
        };
        let target = localization_target(s).to_string();
        lines.push(format!(
            "  {:<8} support {:<4} localization {}",
            s.to_string(),
            support,
            target
        ));
        listing.push(json!({
            "ideal": s.to_string(),
            "maximal": s.is_maximal(),
            "support": support,
            "localization": target,
        }));
    }
    Ok(CommandOutput {
        results: json!({"points": listing, "coincidences": ["(I,2) = (J,2)"]}),
        checks: Vec::new(),
        lines,
    })
}

pub enum LocalizeInput {
    Module(Value),
    KInvariant(Value),
}

pub fn localize(input: &LocalizeInput, s: &PrimeSpot, settings: Settings) -> CommandResult {
    match input {
        LocalizeInput::Module(v) => {
            let m = json::module_from_json(v, "").map_err(|e| InputError::json("--module", e))?;
            let problems = validate_module(&m);
            let checks = vec![Check::new(
                "module.valid",
                "--module",
                Outcome::from_bool(problems.is_empty()),
                problems.join("; "),
            )];
            if !problems.is_empty() {
                return Ok(CommandOutput {
                    results: json!({"valid": false, "problems": problems}),
                    checks,
                    lines: vec!["module is not a valid R-module".to_string()],
                });
            }
            if !s.is_maximal() {
                let rank = m.rank_at_minimal(s).map_err(usage("--prime"))?;
                return Ok(CommandOutput {
                    results: json!({"prime": s.to_string(), "rank_over_Q": rank}),
                    checks,
                    lines: vec![format!("dim over Q at {s}: {rank}")],
                });
            }
            if s.prime() == Some(2) && !settings.experimental_p2 {
                return Err(InputError(KunnethError::Experimental.to_string()));
            }
            match m.localize(s, settings.mode) {
                Ok(z) => Ok(CommandOutput {
                    results: json!({"prime": s.to_string(), "mode": settings.mode.to_string(), "module": zp_to_json(&z)}),
                    checks,
                    lines: vec![format!("localized at {s} ({}): {z}", settings.mode)],
                }),
                Err(RModError::NotDvrModule(report)) => Ok(CommandOutput {
                    results: json!({
                        "prime": s.to_string(),
                        "mode": settings.mode.to_string(),
                        "not_dvr": {"underlying": zp_to_json(&report.underlying), "reason": report.reason},
                    }),
                    checks,
                    lines: vec![
                        format!("not a module over a DVR at {s}: {}", report.reason),
                        format!("underlying 2-local group: {}", report.underlying),
                    ],
                }),
                Err(e) => Err(InputError(format!("localize: {e}"))),
            }
        }
        LocalizeInput::KInvariant(v) => {
            // Catalog entries carry the invariant under "kinvariant".
            let (v, ptr) = match v.get("kinvariant") {
                Some(inner) => (inner, "/kinvariant"),
                None => (v, ""),
            };
            let k = json::kinvariant_from_json(v, ptr)
                .map_err(|e| InputError::json("--kinvariant", e))?;
            let problems = validate_kinvariant(&k);
            let checks = vec![Check::new(
                "kinvariant.valid",
                "--kinvariant",
                Outcome::from_bool(problems.is_empty()),
                problems.join("; "),
            )];
            if !problems.is_empty() {
                return Ok(CommandOutput {
                    results: json!({"valid": false, "problems": problems}),
                    checks,
                    lines: vec!["input is not a valid K-invariant".to_string()],
                });
            }
            settings.check_spot(s).map_err(usage("--prime"))?;
            let g = localize_kinvariant(&k, s, settings.mode).map_err(usage("localize"))?;
            Ok(CommandOutput {
                results: json!({"prime": s.to_string(), "mode": settings.mode.to_string(), "graded": graded_to_json(&g)}),
                checks,
                lines: vec![format!("localized at {s}: {g}")],
            })
        }
    }
}

pub fn tensor_or_tor(left: &Value, right: &Value, tor: bool) -> CommandResult {
    let a = json::zp_from_json(left, "").map_err(|e| InputError::json("--left", e))?;
    let b = json::zp_from_json(right, "").map_err(|e| InputError::json("--right", e))?;
    let r = if tor {
        tor1_zp(&a, &b)
    } else {
        tensor_zp(&a, &b)
    }
    .map_err(usage("arguments"))?;
    let op = if tor { "Tor_1" } else { "tensor" };
    Ok(CommandOutput {
        results: json!({"operation": op, "result": zp_to_json(&r)}),
        checks: Vec::new(),
        lines: vec![format!("{op}({a}, {b}) = {r}")],
    })
}

fn space_error(e: SpaceError) -> InputError {
    InputError(format!("space expression: {e}"))
}

fn diagnostic_json(d: &P2Diagnostic) -> Value {
    json!({
        "point": graded_to_json(&d.point),
        "square": kunneth_result_to_json(&d.square, Vec::new()),
        "consistent": d.consistent,
        "maps_vanish": d.maps_vanish,
        "genuine": match &d.genuine {
            Ok(z) => json!({"module": zp_to_json(z)}),
            Err(e) => json!({"error": e}),
        },
    })
}

pub fn p2_checks(d: &P2Diagnostic) -> Vec<Check> {
    let outcome = |ok: bool| {
        if ok {
            Outcome::Pass
        } else {
            Outcome::ExpectedFail
        }
    };
    vec![
        Check::new(
            "p2.point_square_consistency",
            "(I,2) quotient",
            outcome(d.consistent),
            format!(
                "pt x pt gives {} but pt localizes to {}; Kunneth is not asserted at p = 2",
                d.square.middle, d.point
            ),
        ),
        Check::new(
            "p2.maps_vanish",
            "(I,2) quotient",
            outcome(d.maps_vanish),
            "psi of pt does not become zero at (I,2)".to_string(),
        ),
    ]
}

pub fn kunneth_cmd(
    e: &SpaceExpr,
    s: &PrimeSpot,
    settings: Settings,
    cat: &Catalog,
) -> CommandResult {
    settings.check_spot(s).map_err(usage("--prime"))?;
    let side = Side::for_spot(s);
    let eval = |x: &SpaceExpr| eval_local(x, s, side, settings, cat).map_err(space_error);
    let mut lines = Vec::new();
    let mut checks = Vec::new();
    let mut results = Map::new();
    results.insert("space".into(), Value::from(e.to_string()));
    results.insert(
        "side".into(),
        Value::from(format!("{side:?}").to_lowercase()),
    );
    let whole = eval(e)?;
    if let SpaceExpr::Product(a, b) = e {
        let (x, y) = (eval(a)?, eval(b)?);
        let r = kunneth::kunneth_local(&x.module, &y.module, s).map_err(usage("kunneth"))?;
        lines.push(format!("{e} at {s}"));
        lines.push(format!("  tensor: {}", r.tensor));
        lines.push(format!("  tor:    {}", r.tor));
        lines.push(format!("  middle: {}", r.middle));
        lines.push(format!("  ambiguous: {}", whole.ambiguous));
        results.insert("kunneth".into(), kunneth_result_to_json(&r, Vec::new()));
    } else {
        lines.push(format!("{e} at {s}: {}", whole.module));
    }
    results.insert("graded".into(), graded_to_json(&whole.module));
    results.insert("ambiguous".into(), Value::Bool(whole.ambiguous));
    let experimental = s.prime() == Some(2);
    results.insert("experimental".into(), Value::Bool(experimental));
    if experimental {
        let d = p2_diagnostic(&cat.pt.kinv).map_err(usage("p2 diagnostic"))?;
        results.insert("p2_diagnostic".into(), diagnostic_json(&d));
        checks.extend(p2_checks(&d));
    } else {
        if let Ok(direct) = direct_eval(e, s, settings, cat) {
            checks.push(Check::new(
                "kunneth.direct_evaluation",
                format!("{e} at {s}"),
                Outcome::from_bool(direct == whole.module),
                format!("direct: {direct}"),
            ));
        }
        if let Ok(oracle) = free_oracle(e, s, cat) {
            checks.push(Check::new(
                "kunneth.free_oracle",
                format!("{e} at {s}"),
                Outcome::from_bool(oracle == whole.module),
                format!("oracle: {oracle}"),
            ));
        }
    }
    Ok(CommandOutput {
        results: Value::Object(results),
        checks,
        lines,
    })
}

fn six_term_one(
    name: &str,
    d: &SixTermData,
    expect_spot: Option<&str>,
) -> Result<(Value, Vec<Check>, Vec<String>), InputError> {
    let report = six_term_verify(d).map_err(usage(name))?;
    let mut lines = vec![format!("{name}:")];
    let mut spots = Map::new();
    for sp in &report.spots {
        lines.push(format!("  H at {:<6} = {}", sp.spot, sp.homology));
        spots.insert(sp.spot.to_string(), json::abelian_to_json(&sp.homology));
    }
    let failing = report.failing_spots();
    let check = match expect_spot {
        None => Check::new(
            "six_term.exact",
            name,
            Outcome::from_bool(report.is_exact()),
            if failing.is_empty() {
                String::new()
            } else {
                format!("nonzero homology at {}", failing.join(", "))
            },
        ),
        Some(spot) => Check::new(
            "six_term.broken_detected",
            name,
            Outcome::from_bool(failing.contains(&spot)),
            format!(
                "predicted {spot}; nonzero homology at {}",
                failing.join(", ")
            ),
        ),
    };
    Ok((Value::Object(spots), vec![check], lines))
}

pub fn six_term(data: Option<&Value>, cat: &Catalog) -> CommandResult {
    let mut out = CommandOutput::default();
    let mut results = Map::new();
    let mut add = |name: &str, d: &SixTermData, spot: Option<&str>| -> Result<(), InputError> {
        let (v, checks, lines) = six_term_one(name, d, spot)?;
        results.insert(name.to_string(), v);
        out.checks.extend(checks);
        out.lines.extend(lines);
        Ok(())
    };
    match data {
        Some(v) => {
            let (name, d) =
                six_term_file_from_json(v).map_err(|e| InputError::json("--data", e))?;
            add(&name, &d, None)?;
        }
        None => {
            for e in cat.entries() {
                add(&e.name, &e.six_term, None)?;
            }
            add(
                &cat.broken.name,
                &cat.broken.data,
                Some(&cat.broken.predicted_spot),
            )?;
        }
    }
    out.results = Value::Object(results);
    Ok(out)
}

pub fn doubling(x: &SpaceExpr, s: &PrimeSpot, settings: Settings, cat: &Catalog) -> CommandResult {
    let p = s
        .prime()
        .ok_or_else(|| InputError(format!("--prime {s}: not maximal")))?;
    let kx = eval_k(x, cat)?;
    let k_local = nonequivariant_local(x, p, cat).map_err(space_error)?;
    let r = kunneth::doubling_check(&kx, &cat.g.kinv, (&k_local.even, &k_local.odd), s, settings)
        .map_err(usage("doubling"))?;
    Ok(CommandOutput {
        results: json!({
            "space": x.to_string(),
            "prime": s.to_string(),
            "product": {"rank": r.product.rank, "length": r.product.length},
            "nonequivariant": {"rank": r.nonequivariant.rank, "length": r.nonequivariant.length},
        }),
        checks: vec![Check::new(
            "doubling.size",
            format!("{x} at {s}"),
            Outcome::from_bool(r.holds),
            format!(
                "X x G has rank {} and length {}; K*(X) has rank {} and length {}",
                r.product.rank, r.product.length, r.nonequivariant.rank, r.nonequivariant.length
            ),
        )],
        lines: vec![format!("K*({x}) at p = {p}: {k_local}")],
    })
}

fn eval_k(x: &SpaceExpr, cat: &Catalog) -> Result<KInvariant, InputError> {
    eval_kinvariant(x, cat).map_err(space_error)
}

pub fn remark_failure(
    left: &SpaceExpr,
    right: &SpaceExpr,
    s: &PrimeSpot,
    settings: Settings,
    cat: &Catalog,
) -> CommandResult {
    if !left.is_leaf() {
        return Err(InputError(format!("--left {left}: must be an atom")));
    }
    let product = direct_product_kinvariant(left, right, cat).map_err(space_error)?;
    let r = remark_failure_demo(
        &eval_k(left, cat)?,
        &eval_k(right, cat)?,
        &product,
        s,
        settings,
    )
    .map_err(usage("remark-failure"))?;
    let location = format!("{left} x {right} at {s}");
    Ok(CommandOutput {
        results: json!({
            "prime": s.to_string(),
            "left": left.to_string(),
            "right": right.to_string(),
            "naive_rank": r.naive_rank,
            "true_rank": r.true_rank,
            "full_even_rank": r.full_even_rank,
            "direct_even_rank": r.direct_even_rank,
            "mismatch": r.mismatch,
            "resolved": r.resolved,
        }),
        checks: vec![Check::new(
            "remark_failure.resolved",
            location.clone(),
            Outcome::from_bool(r.resolved),
            format!(
                "full K-invariant Kunneth even rank {} vs direct {}",
                r.full_even_rank, r.direct_even_rank
            ),
        )],
        lines: vec![
            format!("{location}"),
            format!("  K_G-only Kunneth predicts K0_G rank {}", r.naive_rank),
            format!("  actual K0_G rank {}", r.true_rank),
            format!(
                "  {}",
                if r.mismatch {
                    "mismatch: K_G alone does not satisfy Kunneth here"
                } else {
                    "no mismatch"
                }
            ),
        ],
    })
}
