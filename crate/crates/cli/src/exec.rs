use std::sync::Arc;

use serde_json::{json, Map, Value};
use tropdiff_core::algebra::GroupVector;
use tropdiff_core::amalg::{
    decide_amalgamation, is_amalgamation_base, reduce_valued_to_residue, AmalgProblem, AmalgVerdict, BaseReport,
    CycloDiffSubfield, ValueGroupData, ValuedAmalgProblem,
};
use tropdiff_core::demo::demo_fixed_field;
use tropdiff_core::lattice::{connected_component_map, IntLattice};
use tropdiff_core::sigma::HenselConfig;
use tropdiff_core::syntax::{
    parse_group_vector, parse_laurent, parse_series, parse_sigma_poly, parse_zsigma, split_list, split_matrix,
};
use tropdiff_core::tropical::{initial_form, kapranov_check, tropicalize, KapranovReport};
use tropdiff_core::zsigma::{check_orbit_membership, matrix_to_coset, purity_transfer, ZSigmaMatrix};
use tropdiff_core::{Field, Rational, Series, Value as GroupValue};

use crate::request::{json_argument, load_model, rational_from_json, Request};
use crate::CliError;

/// Precision used by `sigma hensel` and `demo fixed-field` when `--precision` is absent.
pub const DEFAULT_PRECISION: i64 = 4;

pub const COMMANDS: &[&str] = &[
    "hahn eval",
    "hahn v",
    "hahn ac",
    "hahn sigma",
    "hahn inv",
    "trop roots",
    "trop initial",
    "trop kapranov",
    "sigma hensel",
    "sigma config",
    "sigma complexity",
    "zsigma coset",
    "zsigma check",
    "zsigma transfer",
    "lattice saturate",
    "lattice cc-map",
    "amalg decide",
    "amalg base",
    "amalg reduce",
    "demo fixed-field",
];

/// Preset used when a request names no model.
pub fn default_model(command: &str) -> &'static str {
    if command == "demo fixed-field" {
        "ISO"
    } else {
        "PC"
    }
}

pub fn group_value(g: &GroupValue) -> Value {
    match g.coords() {
        None => json!("inf"),
        Some([x]) => json!(x.to_string()),
        Some(c) => Value::Array(c.iter().map(|x| json!(x.to_string())).collect()),
    }
}

fn series_list(ctx: &Arc<Field>, src: &str) -> Result<Vec<Series>, CliError> {
    Ok(split_list(src)?.iter().map(|s| parse_series(ctx, s)).collect::<Result<_, _>>()?)
}

fn int_matrix(src: &str) -> Result<Vec<Vec<i64>>, CliError> {
    split_matrix(src)?
        .iter()
        .map(|row| {
            row.iter()
                .map(|x| x.parse::<i64>().map_err(|_| CliError::Usage(format!("{x:?} is not an integer"))))
                .collect()
        })
        .collect()
}

fn zsigma_matrix(src: &str) -> Result<ZSigmaMatrix, CliError> {
    let rows = split_matrix(src)?
        .iter()
        .map(|row| row.iter().map(|p| parse_zsigma(p)).collect::<Result<Vec<_>, _>>())
        .collect::<Result<Vec<_>, _>>()?;
    Ok(ZSigmaMatrix::new(rows)?)
}

/// `1/2`, `(1,0)` or a list `[1, (0,1)]`.
fn group_points(src: &str) -> Result<Vec<GroupValue>, CliError> {
    let items = if src.trim_start().starts_with('[') { split_list(src)? } else { vec![src.to_string()] };
    Ok(items.iter().map(|s| parse_group_vector(s)).collect::<Result<_, _>>()?)
}

fn precision(req: &Request) -> Result<GroupValue, CliError> {
    match req.option("precision") {
        Some(p) => Ok(parse_group_vector(p)?),
        None => Ok(GroupVector::from_ints(&[DEFAULT_PRECISION])),
    }
}

fn strings<T: ToString>(xs: impl IntoIterator<Item = T>) -> Value {
    Value::Array(xs.into_iter().map(|x| json!(x.to_string())).collect())
}

fn subfield_json(x: &CycloDiffSubfield) -> Value {
    json!({"H": x.subgroup(), "b": x.sigma_representative()})
}

fn field_usize(obj: &Value, key: &str, ctx: &str) -> Result<u64, CliError> {
    obj.get(key)
        .and_then(Value::as_u64)
        .ok_or_else(|| CliError::Usage(format!("{ctx}: missing or non-integer \"{key}\"")))
}

fn subfield_from_json(n: u32, obj: &Value, ctx: &str) -> Result<CycloDiffSubfield, CliError> {
    let h: Vec<u32> = obj
        .get("H")
        .and_then(Value::as_array)
        .ok_or_else(|| CliError::Usage(format!("{ctx}: missing \"H\"")))?
        .iter()
        .map(|x| x.as_u64().and_then(|v| u32::try_from(v).ok()))
        .collect::<Option<_>>()
        .ok_or_else(|| CliError::Usage(format!("{ctx}: \"H\" must list non-negative integers")))?;
    let b = obj
        .get("b")
        .and_then(Value::as_i64)
        .ok_or_else(|| CliError::Usage(format!("{ctx}: missing or non-integer \"b\"")))?;
    Ok(CycloDiffSubfield::new(n, &h, b)?)
}

fn conductor(doc: &Value) -> Result<u32, CliError> {
    u32::try_from(field_usize(doc, "n", "problem")?).map_err(|_| CliError::Usage("problem: \"n\" too large".into()))
}

fn amalg_problem(doc: &Value) -> Result<AmalgProblem, CliError> {
    let n = conductor(doc)?;
    let side = |key: &str| -> Result<CycloDiffSubfield, CliError> {
        let obj = doc.get(key).ok_or_else(|| CliError::Usage(format!("problem: missing \"{key}\"")))?;
        subfield_from_json(n, obj, key)
    };
    Ok(AmalgProblem::new(side("base")?, side("left")?, side("right")?)?)
}

/// Each side may carry `"value_group": {"rank": r, "sigma": [[...]]}`;
/// the default is rank 1 with the identity.
fn valued_problem(doc: &Value) -> Result<ValuedAmalgProblem<Rational>, CliError> {
    let n = conductor(doc)?;
    let side = |key: &str| -> Result<(CycloDiffSubfield, ValueGroupData<Rational>), CliError> {
        let obj = doc.get(key).ok_or_else(|| CliError::Usage(format!("problem: missing \"{key}\"")))?;
        let residue = subfield_from_json(n, obj, key)?;
        let vg = match obj.get("value_group") {
            None => ValueGroupData { rank: 1, sigma: vec![vec![Rational::from_integer(1.into())]] },
            Some(vg) => {
                let rank = field_usize(vg, "rank", key)? as usize;
                let sigma = vg
                    .get("sigma")
                    .and_then(Value::as_array)
                    .ok_or_else(|| CliError::Usage(format!("{key}: value_group needs \"sigma\"")))?
                    .iter()
                    .map(|row| {
                        row.as_array()
                            .ok_or_else(|| CliError::Usage(format!("{key}: sigma rows must be arrays")))?
                            .iter()
                            .map(rational_from_json)
                            .collect::<Result<Vec<_>, _>>()
                    })
                    .collect::<Result<Vec<_>, _>>()?;
                ValueGroupData { rank, sigma }
            }
        };
        Ok((residue, vg))
    };
    Ok(ValuedAmalgProblem { base: side("base")?, left: side("left")?, right: side("right")? })
}

fn verdict_json(v: &AmalgVerdict) -> Value {
    match v {
        AmalgVerdict::Solvable { witness } => json!({"solvable": true, "witness": subfield_json(witness)}),
        AmalgVerdict::Unsolvable => json!({"solvable": false}),
    }
}

pub fn execute(req: &Request) -> Result<Value, CliError> {
    let command = req.command.split_whitespace().collect::<Vec<_>>().join(" ");
    let ctx = || load_model(req.model.as_ref(), default_model(&command));
    let expr = || req.positional(0, "expr");
    let result = match command.as_str() {
        "hahn eval" => {
            let s = parse_series(&ctx()?, expr()?)?;
            json!({"value": s.to_string(), "precision": group_value(s.precision())})
        }
        "hahn v" => json!({"valuation": group_value(&parse_series(&ctx()?, expr()?)?.valuation()?)}),
        "hahn ac" => {
            let ctx = ctx()?;
            let s = parse_series(&ctx, expr()?)?;
            json!({"ac": ctx.field().format(&s.ac()?)})
        }
        "hahn sigma" => {
            let power = match req.option("power") {
                Some(p) => p.parse::<i64>().map_err(|_| CliError::Usage(format!("--power {p:?} is not an integer")))?,
                None => 1,
            };
            json!({"sigma": parse_series(&ctx()?, expr()?)?.sigma(power).to_string()})
        }
        "hahn inv" => {
            let s = parse_series(&ctx()?, expr()?)?;
            let inv = match req.option("precision") {
                Some(p) => s.inv_to(&parse_group_vector(p)?)?,
                None => s.inv()?,
            };
            json!({"inverse": inv.to_string()})
        }
        "trop roots" => {
            let f = parse_laurent(&ctx()?, expr()?)?;
            json!({"roots": strings(tropicalize(&f)?.roots_univariate()?)})
        }
        "trop initial" => {
            let f = parse_laurent(&ctx()?, expr()?)?;
            let at = group_points(req.required("at")?)?;
            json!({"initial_form": initial_form(&f, &at)?.to_string()})
        }
        "trop kapranov" => {
            let f = parse_laurent(&ctx()?, expr()?)?;
            match kapranov_check(&f)? {
                KapranovReport::Pass { roots } => json!({"pass": true, "roots": strings(roots)}),
                KapranovReport::RootSetMismatch { tropical, newton } => {
                    json!({"pass": false, "tropical_roots": strings(tropical), "newton_valuations": strings(newton)})
                }
                KapranovReport::MonomialInitialForm { root } => {
                    json!({"pass": false, "monomial_initial_form_at": group_value(&root)})
                }
            }
        }
        "sigma hensel" => {
            let ctx = ctx()?;
            let g = parse_sigma_poly(&ctx, expr()?)?;
            let start = parse_series(&ctx, req.required("start")?)?;
            let lift = g.hensel_lift(&start, &precision(req)?)?;
            json!({
                "root": lift.root.to_string(),
                "delta": group_value(&lift.delta),
                "iterations": lift.iterations,
                "residual": lift.residual.to_string(),
            })
        }
        "sigma config" => {
            let ctx = ctx()?;
            let g = parse_sigma_poly(&ctx, expr()?)?;
            let start = parse_series(&ctx, req.required("start")?)?;
            match g.hensel_config(&start)? {
                HenselConfig::Yes { delta } => json!({"config": true, "delta": group_value(&delta)}),
                HenselConfig::No(reason) => json!({"config": false, "reason": reason.to_string()}),
            }
        }
        "sigma complexity" => {
            let c = parse_sigma_poly(&ctx()?, expr()?)?.complexity()?;
            json!({"order": c.order, "top_degree": c.top_degree, "total_degree": c.total_degree})
        }
        "zsigma coset" => {
            let a = zsigma_matrix(req.required("A")?)?;
            let b = series_list(&ctx()?, req.required("b")?)?;
            let mc = matrix_to_coset(&a, &b)?;
            let c: Vec<Vec<i64>> = (0..mc.c.len()).map(|i| mc.flattened(i)).collect();
            json!({
                "ell": mc.ell,
                "shifts": mc.shifts,
                "C": c,
                "targets": strings(mc.coset.targets()),
            })
        }
        "zsigma check" => {
            let ctx = ctx()?;
            let a = zsigma_matrix(req.required("A")?)?;
            let b = series_list(&ctx, req.required("b")?)?;
            let z = series_list(&ctx, req.required("z")?)?;
            let mc = matrix_to_coset(&a, &b)?;
            let (direct, via_coset) = check_orbit_membership(&mc, &a, &b, &z)?;
            json!({"direct": direct, "via_coset": via_coset})
        }
        "zsigma transfer" => {
            let ctx = ctx()?;
            let a = zsigma_matrix(req.required("A")?)?;
            let b = series_list(&ctx, req.required("b")?)?;
            let z = series_list(&ctx, req.required("z")?)?;
            let u = purity_transfer(&a, &b, &z)?;
            let vals: Vec<Value> = u.iter().map(|x| x.valuation().map(|v| group_value(&v))).collect::<Result<_, _>>()?;
            json!({"u": strings(&u), "valuations": vals})
        }
        "lattice saturate" => {
            let rows = int_matrix(req.positional(0, "rows")?)?;
            let lattice = IntLattice::from_rows(&rows)?;
            let sat = lattice.saturate();
            let index = lattice.index_in(&sat).map(|i| i.to_string());
            json!({"basis": sat.basis(), "rank": sat.rank(), "index": index, "primitive": lattice.is_primitive()})
        }
        "lattice cc-map" => {
            let psi = int_matrix(req.positional(0, "rows")?)?;
            let map = connected_component_map(&psi)?;
            let primitive = match IntLattice::from_rows(&map) {
                Ok(l) => l.is_primitive(),
                Err(_) => true,
            };
            json!({"map": map, "primitive": primitive})
        }
        "amalg decide" => verdict_json(&decide_amalgamation(&amalg_problem(&json_argument(req.positional(0, "problem")?)?)?)?),
        "amalg base" => {
            let doc = json_argument(req.positional(0, "subfield")?)?;
            let x = subfield_from_json(conductor(&doc)?, &doc, "subfield")?;
            let report = is_amalgamation_base(&x)?;
            let mut out = Map::new();
            out.insert("is_base".into(), json!(report.is_base));
            out.insert("qualifier".into(), json!(BaseReport::QUALIFIER));
            out.insert("extensions_checked".into(), json!(report.extensions_checked));
            if let Some((l, r)) = &report.certificate {
                out.insert("certificate".into(), json!({"left": subfield_json(l), "right": subfield_json(r)}));
            }
            Value::Object(out)
        }
        "amalg reduce" => {
            let p = reduce_valued_to_residue(&valued_problem(&json_argument(req.positional(0, "problem")?)?)?)?;
            let mut out = verdict_json(&decide_amalgamation(&p)?);
            out["residue_problem"] = json!({
                "n": p.base.conductor(),
                "base": subfield_json(&p.base),
                "left": subfield_json(&p.left),
                "right": subfield_json(&p.right),
            });
            out
        }
        "demo fixed-field" => {
            let report = demo_fixed_field(&ctx()?, &precision(req)?)?;
            let checks: Vec<Value> = report.checks.iter().map(|(name, ok)| json!({"check": name, "ok": ok})).collect();
            json!({
                "passed": report.passed(),
                "polynomial": report.polynomial.to_string(),
                "root": report.root.to_string(),
                "iterations": report.iterations,
                "checks": checks,
                "conclusion": report.conclusion,
            })
        }
        other => return Err(CliError::Usage(format!("unknown command {other:?}; expected one of: {}", COMMANDS.join(", ")))),
    };
    Ok(result)
}
