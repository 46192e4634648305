use std::path::Path;

use serde_json::{json, Map, Value};

use super::{BaseArgs, CliError, Command, FitArgs, KindArg, RunConfig, EXIT_NEGATIVE, EXIT_OK};
use crate::algebra::{is_prime, Rat, RatFn, TruncSeries};
use crate::counting::{Base, CountKind, CountSequence, Engine};
use crate::groth::{
    chi_c_cover, euler_integrality_check, CoverSpec, GrothError, K0Elem, SpecKind, SpecializationMap,
};
use crate::rationality::{
    curve_shape_check, denominator_shape, find_recurrence, functional_equation_check, FunctionalEquation,
    RecurrenceResult,
};
use crate::series::{self, SeriesError, DEFAULT_PADIC_ORDER, DEFAULT_WEIL_ORDER};
use crate::varieties::{parse_variety, VarietyPresentation};

/// Output of one command: human-readable text, the JSON document and the
/// exit status.
#[derive(Clone, Debug)]
pub struct Report {
    pub text: String,
    pub json: Value,
    pub status: i32,
}

impl From<GrothError> for CliError {
    fn from(e: GrothError) -> Self {
        CliError::Input(e.to_string())
    }
}

impl From<SeriesError> for CliError {
    fn from(e: SeriesError) -> Self {
        CliError::Internal(e.to_string())
    }
}

fn s(x: impl ToString) -> Value {
    Value::String(x.to_string())
}

fn rat_str(r: &Rat) -> String {
    format!("{}/{}", r.numer(), r.denom())
}

fn load_variety(path: &Path) -> Result<VarietyPresentation, CliError> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| CliError::Input(format!("{}: {e}", path.display())))?;
    parse_variety(&text).map_err(|e| CliError::Input(format!("{}: {e}", path.display())))
}

/// Writes `q` as `p^m` with `p` prime.
fn split_prime_power(q: u64) -> Option<(u64, u32)> {
    let p = (2..=q).find(|d| q % d == 0 || d * d > q).map(|d| if q % d == 0 { d } else { q })?;
    let mut rest = q;
    let mut m = 0;
    while rest % p == 0 {
        rest /= p;
        m += 1;
    }
    (rest == 1 && is_prime(p)).then_some((p, m))
}

fn field_base(b: &BaseArgs) -> Result<(u64, u32), CliError> {
    let (p, m) = match (b.q, b.p) {
        (Some(q), _) => {
            let (p, m) =
                split_prime_power(q).ok_or_else(|| CliError::Input(format!("--q {q} is not a prime power")))?;
            if b.p.is_some_and(|x| x != p) || b.m.is_some_and(|x| x != m) {
                return Err(CliError::Input(format!("--q {q} disagrees with --p/--m")));
            }
            (p, m)
        }
        (None, Some(p)) => (p, b.m.unwrap_or(1)),
        (None, None) => return Err(CliError::Input("give --p (and --m) or --q".into())),
    };
    if !is_prime(p) {
        return Err(CliError::Input(format!("{p} is not prime")));
    }
    if m == 0 {
        return Err(CliError::Input("--m must be at least 1".into()));
    }
    Ok((p, m))
}

fn prime_base(b: &BaseArgs) -> Result<u64, CliError> {
    if b.m.is_some_and(|m| m != 1) {
        return Err(CliError::Input("p-adic counts are over Z_p; --m must be 1".into()));
    }
    let p = b.p.or(b.q).ok_or_else(|| CliError::Input("give --p".into()))?;
    if !is_prime(p) {
        return Err(CliError::Input(format!("{p} is not prime")));
    }
    Ok(p)
}

fn base_json(base: Base) -> Value {
    match base {
        Base::Field { p, m } => json!({"p": s(p), "m": s(m)}),
        Base::Prime(p) => json!({"p": s(p)}),
    }
}

fn base_text(base: Base) -> String {
    match base {
        Base::Field { p, m: 1 } => format!("F_{p}"),
        Base::Field { p, m } => format!("F_{p}^{m}"),
        Base::Prime(p) => format!("Z_{p}"),
    }
}

pub(super) fn execute(cmd: &Command, cfg: &RunConfig) -> Result<Report, CliError> {
    match cmd {
        Command::Count { variety, kind, base, n } => {
            let v = load_variety(variety)?;
            let engine = cfg.engine()?;
            cmd_count(&engine, cfg, &v, *kind, base, *n)
        }
        Command::Zeta { variety, base, fit } => {
            let v = load_variety(variety)?;
            let (p, m) = field_base(base)?;
            let order = fit.order.unwrap_or(DEFAULT_WEIL_ORDER);
            let counts = cfg.engine()?.weil_sequence(&v, p, m, order)?;
            let z = series::hasse_weil(&counts, order)?;
            series_report("zeta", &v, &counts, &z, p.pow(m), fit)
        }
        Command::Igusa { variety, base, fit } => {
            let v = load_variety(variety)?;
            let p = prime_base(base)?;
            let order = fit.order.unwrap_or(DEFAULT_PADIC_ORDER);
            let counts = cfg.engine()?.igusa_sequence(&v, p, order)?;
            let q = series::igusa_series(&counts, order)?;
            series_report("igusa", &v, &counts, &q, p, fit)
        }
        Command::Serre { variety, base, fit } => {
            let v = load_variety(variety)?;
            let p = prime_base(base)?;
            let order = fit.order.unwrap_or(DEFAULT_PADIC_ORDER);
            let counts = cfg.engine()?.serre_sequence(&v, p, order, cfg.stab_window)?;
            let ps = series::serre_series(&counts, order)?;
            series_report("serre", &v, &counts, &ps, p, fit)
        }
        Command::Kapranov { variety, base, fit } => {
            let v = load_variety(variety)?;
            let (p, m) = field_base(base)?;
            cmd_kapranov(&cfg.engine()?, &v, p, m, fit)
        }
        Command::Groth {
            cover,
            expr,
            specs,
            count_values,
            euler_values,
            hodge_values,
        } => {
            let mut maps = Vec::new();
            for spec in specs {
                let mut map = SpecializationMap::parse_kind(spec)?;
                let values = match map.kind {
                    SpecKind::Counting(_) => count_values,
                    SpecKind::Euler => euler_values,
                    SpecKind::Hodge => hodge_values,
                };
                for assignment in values {
                    let (name, value) = assignment
                        .split_once('=')
                        .ok_or_else(|| CliError::Input(format!("expected NAME=VALUE, got {assignment:?}")))?;
                    map.assign(name.trim().trim_matches(|c| c == '"' || c == '\''), value)?;
                }
                maps.push(map);
            }
            match (cover, expr) {
                (Some(path), _) => {
                    let text = std::fs::read_to_string(path)
                        .map_err(|e| CliError::Input(format!("{}: {e}", path.display())))?;
                    cmd_groth_cover(&CoverSpec::from_json(&text)?, &maps)
                }
                (None, Some(e)) => cmd_groth_expr(&K0Elem::parse(e)?, &maps),
                (None, None) => Err(CliError::Input("give --cover or --expr".into())),
            }
        }
    }
}

fn cmd_count(
    engine: &Engine,
    cfg: &RunConfig,
    v: &VarietyPresentation,
    kind: KindArg,
    base: &BaseArgs,
    n: usize,
) -> Result<Report, CliError> {
    let (kind, base) = match kind {
        KindArg::Weil => {
            let (p, m) = field_base(base)?;
            if n == 0 {
                return Err(CliError::Input("Weil counts start at n = 1".into()));
            }
            (CountKind::Weil, Base::Field { p, m })
        }
        KindArg::Igusa => (CountKind::Igusa, Base::Prime(prime_base(base)?)),
        KindArg::Serre => (CountKind::Serre, Base::Prime(prime_base(base)?)),
    };
    let (value, meta) = engine.count_at(v, kind, base, n, cfg.stab_window)?;
    Ok(Report {
        text: format!("{value}\n"),
        json: json!({
            "command": "count",
            "variety": v.name,
            "variety_hash": v.content_hash(),
            "kind": kind.as_str(),
            "base": base_json(base),
            "n": s(n),
            "value": s(value),
            "meta": meta,
        }),
        status: EXIT_OK,
    })
}

fn ratfn_json(f: &RatFn) -> Value {
    let (a, b) = f.cleared();
    json!({
        "numer": a.iter().map(s).collect::<Vec<_>>(),
        "denom": b.iter().map(s).collect::<Vec<_>>(),
        "text": f.to_string(),
    })
}

fn detect(coeffs: &[Rat], fit: &FitArgs) -> Result<Option<RecurrenceResult>, CliError> {
    let max_order = fit
        .max_order
        .unwrap_or(coeffs.len().saturating_sub(fit.min_guard) / 2);
    find_recurrence(coeffs, max_order, fit.min_guard).map_err(|e| CliError::Input(e.to_string()))
}

fn counts_section(counts: &CountSequence, text: &mut String) -> Value {
    text.push_str("counts:\n");
    let first = counts.first_index();
    let mut out = Vec::new();
    for (i, (value, meta)) in counts.values.iter().zip(&counts.meta).enumerate() {
        text.push_str(&format!("{}\t{value}\t{meta}\n", first + i));
        out.push(json!({"n": s(first + i), "value": s(value), "meta": meta}));
    }
    Value::Array(out)
}

fn series_report(
    command: &str,
    v: &VarietyPresentation,
    counts: &CountSequence,
    series: &TruncSeries,
    q: u64,
    fit: &FitArgs,
) -> Result<Report, CliError> {
    let mut text = format!(
        "variety: {} ({})\nbase: {}\n",
        v.name,
        &counts.variety_hash[..12],
        base_text(counts.base)
    );
    let counts_json = counts_section(counts, &mut text);
    text.push_str("series:\n");
    text.push_str(&series.to_lines());
    let mut json = Map::new();
    json.insert("command".into(), s(command));
    json.insert("variety".into(), s(&v.name));
    json.insert("variety_hash".into(), s(&counts.variety_hash));
    json.insert("base".into(), base_json(counts.base));
    json.insert("counts".into(), counts_json);
    json.insert(
        "series".into(),
        Value::Array(series.coeffs().iter().map(|c| s(rat_str(c))).collect()),
    );
    let found = detect(series.coeffs(), fit)?;
    let status = match &found {
        None => {
            text.push_str("rational: not found\n");
            json.insert("found".into(), Value::Bool(false));
            EXIT_NEGATIVE
        }
        Some(r) => {
            text.push_str(&format!(
                "rational: {}\nrecurrence order: {}\nguard: {}\n",
                r.ratfn, r.recurrence_order, r.guard
            ));
            json.insert("found".into(), Value::Bool(true));
            json.insert("ratfn".into(), ratfn_json(&r.ratfn));
            json.insert("recurrence_order".into(), s(r.recurrence_order));
            json.insert("guard".into(), s(r.guard));
            let a = 2 * v.nvars() as i64;
            let b = r.recurrence_order.max(1) as u32;
            match denominator_shape(&r.ratfn, q, -a..=a, 1..=b) {
                Some(shape) => {
                    text.push_str(&format!("shape: {shape}\n"));
                    let pairs: Vec<Value> = shape.pairs.iter().map(|(a, b)| json!({"a": s(a), "b": s(b)})).collect();
                    json.insert("shape".into(), Value::Array(pairs));
                    EXIT_OK
                }
                None => {
                    text.push_str("shape: not found\n");
                    json.insert("shape".into(), Value::Null);
                    EXIT_NEGATIVE
                }
            }
        }
    };
    Ok(Report {
        text,
        json: Value::Object(json),
        status,
    })
}

fn cmd_kapranov(
    engine: &Engine,
    v: &VarietyPresentation,
    p: u64,
    m: u32,
    fit: &FitArgs,
) -> Result<Report, CliError> {
    let order = fit.order.unwrap_or(6);
    let q = p.pow(m);
    let counts = engine.weil_sequence(v, p, m, order)?;
    let b = series::sym_product_counts(&counts, order)?;
    let mut text = format!(
        "variety: {} ({})\nbase: {}\n",
        v.name,
        &counts.variety_hash[..12],
        base_text(counts.base)
    );
    let counts_json = counts_section(&counts, &mut text);
    text.push_str("symmetric products:\n");
    for (n, bn) in b.iter().enumerate() {
        text.push_str(&format!("{n}\t{bn}\n"));
    }
    let mut json = Map::new();
    json.insert("command".into(), s("kapranov"));
    json.insert("variety".into(), s(&v.name));
    json.insert("variety_hash".into(), s(&counts.variety_hash));
    json.insert("base".into(), base_json(counts.base));
    json.insert("counts".into(), counts_json);
    json.insert("symmetric_products".into(), Value::Array(b.iter().map(s).collect()));
    let coeffs: Vec<Rat> = b.iter().cloned().map(Rat::from_integer).collect::<Vec<_>>();
    let Some(r) = detect(&coeffs, fit)? else {
        text.push_str("rational: not found\n");
        json.insert("found".into(), Value::Bool(false));
        return Ok(Report {
            text,
            json: Value::Object(json),
            status: EXIT_NEGATIVE,
        });
    };
    text.push_str(&format!("rational: {}\nguard: {}\n", r.ratfn, r.guard));
    json.insert("found".into(), Value::Bool(true));
    json.insert("ratfn".into(), ratfn_json(&r.ratfn));
    json.insert("guard".into(), s(r.guard));
    let status = match curve_shape_check(&r.ratfn, q) {
        Err(mismatch) => {
            text.push_str(&format!("curve shape: mismatch, {mismatch}\n"));
            json.insert("curve_shape".into(), json!({"holds": false, "detail": mismatch.to_string()}));
            EXIT_NEGATIVE
        }
        Ok(g) => {
            text.push_str(&format!("curve shape: genus {g}\n"));
            json.insert("curve_shape".into(), json!({"holds": true, "genus": s(g)}));
            match functional_equation_check(&r.ratfn, q, g) {
                FunctionalEquation::Holds => {
                    text.push_str("functional equation: holds\n");
                    json.insert("functional_equation".into(), json!({"holds": true}));
                    EXIT_OK
                }
                FunctionalEquation::Violation(res) => {
                    text.push_str(&format!("functional equation: violated, residual {res}\n"));
                    json.insert(
                        "functional_equation".into(),
                        json!({"holds": false, "residual": ratfn_json(&res)}),
                    );
                    EXIT_NEGATIVE
                }
            }
        }
    };
    Ok(Report {
        text,
        json: Value::Object(json),
        status,
    })
}

fn specializations(x: &K0Elem, maps: &[SpecializationMap], text: &mut String) -> Result<Value, CliError> {
    let mut out = Vec::new();
    for map in maps {
        let value = x.specialize(map)?;
        text.push_str(&format!("{}: {value}\n", map.label()));
        out.push(json!({"spec": map.label(), "value": value.to_string()}));
    }
    Ok(Value::Array(out))
}

fn cmd_groth_expr(x: &K0Elem, maps: &[SpecializationMap]) -> Result<Report, CliError> {
    let mut text = format!("element: {x}\n");
    let specs = specializations(x, maps, &mut text)?;
    Ok(Report {
        text,
        json: json!({"command": "groth", "element": x.to_string(), "specializations": specs}),
        status: EXIT_OK,
    })
}

fn cmd_groth_cover(spec: &CoverSpec, maps: &[SpecializationMap]) -> Result<Report, CliError> {
    let chi = chi_c_cover(spec);
    let mut text = format!(
        "cover: |C| = {}, |N_G(C)| = {}, |G| = {}\ntable:\n",
        spec.c_order(),
        spec.normalizer_order(),
        spec.group_order()
    );
    let mut table = Map::new();
    for (d, t) in &chi.table {
        text.push_str(&format!("{d}\t{t}\n"));
        table.insert(d.to_string(), s(t));
    }
    text.push_str(&format!("result: {}\n", chi.result));
    let specs = specializations(&chi.result, maps, &mut text)?;
    let mut json = json!({
        "command": "groth",
        "c_order": s(spec.c_order()),
        "normalizer_order": s(spec.normalizer_order()),
        "group_order": s(spec.group_order()),
        "table": table,
        "result": chi.result.to_string(),
        "specializations": specs,
    });
    let mut status = EXIT_OK;
    if let Some(euler) = maps.iter().find(|m| m.kind == SpecKind::Euler) {
        let check = match euler_integrality_check(spec, euler) {
            Ok(rep) => json!({"passed": true, "value": rep.result.to_string()}),
            Err(e @ (GrothError::EulerNotIntegral(_) | GrothError::EulerNonzero { .. })) => {
                status = EXIT_NEGATIVE;
                json!({"passed": false, "detail": e.to_string()})
            }
            Err(e) => return Err(e.into()),
        };
        text.push_str(&format!(
            "euler integrality: {}\n",
            if status == EXIT_OK { "passed" } else { "failed" }
        ));
        json["euler_integrality"] = check;
    }
    Ok(Report { text, json, status })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn prime_powers() {
        assert_eq!(split_prime_power(2), Some((2, 1)));
        assert_eq!(split_prime_power(25), Some((5, 2)));
        assert_eq!(split_prime_power(1024), Some((2, 10)));
        assert_eq!(split_prime_power(7), Some((7, 1)));
        assert_eq!(split_prime_power(12), None);
        assert_eq!(split_prime_power(1), None);
        assert_eq!(split_prime_power(0), None);
    }
}
