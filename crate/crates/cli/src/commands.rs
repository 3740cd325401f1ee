use mcmlab::catalog::{catalog_list, catalog_run};
use mcmlab::field::FieldSpec;
use mcmlab::homology::{etor, tor_table};
use mcmlab::module::complexity_estimate;
use mcmlab::newton::{check_intclosum, NewtonPolyhedron};
use mcmlab::poly::Monomial;
use mcmlab::{DynFp, EtorMethod, Field, Fp, Polynomial, Rational};
use serde_json::{json, Map, Value};

use crate::output::Table;
use crate::problem::{Problem, Source};
use crate::{CatalogAction, Cli, CliError, Command, Outcome};

pub const SCHEMA: &str = "mcmlab.v1";

fn header(command: &str) -> Map<String, Value> {
    let mut m = Map::new();
    m.insert("schema".into(), json!(SCHEMA));
    m.insert("version".into(), json!(env!("CARGO_PKG_VERSION")));
    m.insert("command".into(), json!(command));
    m
}

fn extend(mut head: Map<String, Value>, body: Value) -> Value {
    if let Value::Object(b) = body {
        head.extend(b);
    }
    Value::Object(head)
}

fn as_map(v: Value) -> Map<String, Value> {
    match v {
        Value::Object(m) => m,
        _ => Map::new(),
    }
}

fn done(value: Value) -> Outcome {
    Outcome {
        value,
        ok: true,
        table: None,
    }
}

fn parse_window(text: &str) -> Result<(u32, u32), CliError> {
    let bad = || CliError::Input(format!("window must look like `a..b`, got `{text}`"));
    let (a, b) = text.split_once("..").ok_or_else(bad)?;
    let a: u32 = a.trim().parse().map_err(|_| bad())?;
    let b: u32 = b.trim().trim_start_matches('=').parse().map_err(|_| bad())?;
    if a > b {
        return Err(bad());
    }
    Ok((a, b))
}

fn file_of(cmd: &Command) -> Option<&std::path::Path> {
    match cmd {
        Command::Validate { file }
        | Command::Hilbert { file, .. }
        | Command::Tor { file, .. }
        | Command::Etor { file, .. }
        | Command::Tsplit { file, .. }
        | Command::Betti { file, .. }
        | Command::Intclosure { file, .. }
        | Command::Superficial { file, .. } => Some(file),
        Command::Catalog { .. } => None,
    }
}

pub fn run(cli: &Cli) -> Result<Outcome, CliError> {
    if let Command::Catalog { action } = &cli.command {
        return run_catalog(action);
    }
    let src = Source::read(file_of(&cli.command).expect("file argument"))?;
    if let Some(cap) = cli.cap_dim.or(src.doc.options.cap_dim) {
        mcmlab::truncate::set_dimension_cap(cap);
    }
    let p = cli.field.unwrap_or_else(|| src.characteristic());
    FieldSpec::new(p)?;
    match p {
        0 => run_with::<Rational>(cli, &src),
        3 => run_with::<Fp<3>>(cli, &src),
        32003 => run_with::<Fp<32003>>(cli, &src),
        p => {
            DynFp::set_modulus(p as u32)?;
            run_with::<DynFp>(cli, &src)
        }
    }
}

fn run_catalog(action: &CatalogAction) -> Result<Outcome, CliError> {
    match action {
        CatalogAction::List => Ok(done(extend(header("catalog list"), json!({ "scenarios": catalog_list() })))),
        CatalogAction::Run { name } => {
            let report = catalog_run(name).map_err(|e| CliError::Input(e.to_string()))?;
            let ok = report.passed;
            Ok(Outcome {
                value: extend(header("catalog run"), serde_json::to_value(report).expect("report")),
                ok,
                table: None,
            })
        }
    }
}

/// Compares the listed keys with the output; keys the command does not
/// produce are ignored.
fn check_expectations(out: &mut Outcome, expect: Option<&toml::Table>) {
    let Some(expect) = expect else { return };
    let Value::Object(obj) = &mut out.value else { return };
    let mut results = Vec::new();
    for (key, want) in expect {
        let Some(have) = obj.get(key) else { continue };
        let want = serde_json::to_value(want).expect("toml value");
        let passed = &want == have;
        out.ok &= passed;
        results.push(json!({ "key": key, "expected": want, "actual": have, "passed": passed }));
    }
    if !results.is_empty() {
        obj.insert("expectations".into(), Value::Array(results));
    }
}

fn show_monomial(e: &[u32], names: &[String]) -> String {
    Polynomial::<Fp<3>>::monomial(Monomial::from_exponents(e)).display(names).to_string()
}

fn run_with<K: Field>(cli: &Cli, src: &Source) -> Result<Outcome, CliError> {
    let prob = Problem::<K>::build(src)?;
    let ring = &prob.ring;
    let d = ring.dimension() as u32;
    let level = cli.level.or(src.doc.options.level).unwrap_or(6);
    let window = match cli.window.as_ref().or(src.doc.options.window.as_ref()) {
        Some(w) => Some(parse_window(w)?),
        None => None,
    };
    let field = K::characteristic();
    match &cli.command {
        Command::Validate { .. } => {
            let diag = ring.validate()?;
            let mut ok = true;
            let mut modules = Map::new();
            for (name, m) in &prob.modules {
                let mut entry = json!({
                    "backend": m.backend(),
                    "generators": m.cover_rank(),
                    "graded": m.grading().is_some(),
                });
                if d == 1 && !m.is_mf() {
                    let probe = m.mcm_probe(0, 4)?;
                    entry["mcm_probe"] = serde_json::to_value(probe).expect("probe");
                }
                modules.insert(name.clone(), entry);
            }
            let mut filtrations = Map::new();
            for (name, f) in &prob.filtrations {
                let rep = f.check_admissible(level)?;
                ok &= rep.passed();
                filtrations.insert(name.clone(), serde_json::to_value(rep).expect("report"));
            }
            let mut sequences = Map::new();
            for (name, s) in &prob.sequences {
                let f = mcmlab::Filtration::maximal(ring);
                let rep = s.verify(&f, 0, level)?;
                ok &= rep.exact();
                let mut v = serde_json::to_value(&rep).expect("report");
                v["exact"] = json!(rep.exact());
                sequences.insert(name.clone(), v);
            }
            let value = extend(
                header("validate"),
                json!({
                    "field": field,
                    "ring": diag,
                    "modules": modules,
                    "filtrations": filtrations,
                    "sequences": sequences,
                    "valid": ok,
                }),
            );
            Ok(Outcome { value, ok, table: None })
        }
        Command::Hilbert { module, filtration, .. } => {
            let m = prob.module(module)?;
            let f = prob.filtration(filtration)?;
            let (table, fit) = f.hilbert_fit(m.phi())?;
            let (lo, hi) = window.unwrap_or((table.start as u32, (table.start + table.values.len()) as u32 - 1));
            let values = f.hilbert_values(m.phi(), lo, hi)?;
            let coeffs = fit.hilbert_coefficients(d as usize);
            let rows = (lo..=hi).zip(&values).map(|(n, v)| vec![n.to_string(), v.to_string()]).collect();
            let mut out = Outcome {
                value: extend(
                    header("hilbert"),
                    json!({
                        "field": field,
                        "module": module,
                        "filtration": filtration,
                        "window": [lo, hi],
                        "values": values,
                        "fit": fit.summary(),
                        "coefficients": coeffs,
                    }),
                ),
                ok: true,
                table: Some(Table::new(&["n", "length"], rows)),
            };
            check_expectations(&mut out, prob.module_expect.get(module));
            Ok(out)
        }
        Command::Tor { module, filtration, i, .. } => {
            let m = prob.module(module)?;
            let f = prob.filtration(filtration)?;
            let (lo, hi) = window.unwrap_or((0, 2 * d + 8));
            let t = tor_table(&m, *i, &f, lo, hi)?;
            let rows = (lo..=hi).zip(&t.values).map(|(n, v)| vec![n.to_string(), v.to_string()]).collect();
            let mut out = Outcome {
                value: extend(
                    header("tor"),
                    json!({
                        "field": field,
                        "module": module,
                        "filtration": filtration,
                        "i": i,
                        "window": [lo, hi],
                        "values": t.values,
                    }),
                ),
                ok: true,
                table: Some(Table::new(&["n", "length"], rows)),
            };
            check_expectations(&mut out, prob.module_expect.get(module));
            Ok(out)
        }
        Command::Etor { module, filtration, method, .. } => {
            let m = prob.module(module)?;
            let f = prob.filtration(filtration)?;
            let method: EtorMethod = method.parse().map_err(|e: mcmlab::Error| CliError::Input(e.to_string()))?;
            let rep = etor(&m, &f, method)?;
            let head = extend(header("etor"), json!({ "field": field, "module": module, "filtration": filtration }));
            let mut out = done(extend(as_map(head), serde_json::to_value(rep).expect("report")));
            check_expectations(&mut out, prob.module_expect.get(module));
            Ok(out)
        }
        Command::Tsplit { sequence, filtration, .. } => {
            let s = prob.sequence(sequence)?;
            let f = prob.filtration(filtration)?;
            let exactness = s.verify(&f, 0, level)?;
            let mut body = Map::new();
            body.insert("field".into(), json!(field));
            body.insert("sequence".into(), json!(sequence));
            body.insert("filtration".into(), json!(filtration));
            if exactness.exact() {
                let rep = s.etor(&f)?;
                body.insert("etor_alpha".into(), json!(rep.etor_alpha));
                body.insert("tsplit".into(), json!(rep.tsplit));
                body.insert("etor_n".into(), json!(rep.etor_n));
                body.insert("etor_e".into(), json!(rep.etor_e));
                body.insert("etor_m".into(), json!(rep.etor_m));
            }
            body.insert("exact".into(), json!(exactness.exact()));
            body.insert("exactness".into(), serde_json::to_value(&exactness).expect("report"));
            let mut out = Outcome {
                value: extend(header("tsplit"), Value::Object(body)),
                ok: exactness.exact(),
                table: None,
            };
            check_expectations(&mut out, prob.sequence_expect.get(sequence));
            Ok(out)
        }
        Command::Betti { module, max, .. } => {
            let m = prob.module(module)?;
            let betti = m.betti(*max)?;
            let cx = complexity_estimate(&betti);
            let rows = betti.iter().enumerate().map(|(i, b)| vec![i.to_string(), b.to_string()]).collect();
            let mut out = Outcome {
                value: extend(
                    header("betti"),
                    json!({ "field": field, "module": module, "betti": betti, "complexity": cx }),
                ),
                ok: true,
                table: Some(Table::new(&["i", "betti"], rows)),
            };
            check_expectations(&mut out, prob.module_expect.get(module));
            Ok(out)
        }
        Command::Intclosure { filtration, .. } => {
            let f = prob.filtration(filtration)?;
            let names = ring.names();
            let nv = ring.nvars();
            let exps = f
                .ideal()
                .iter()
                .map(|p| {
                    if p.is_monomial() {
                        Ok(p.terms().next().expect("monomial").0.exponents(nv))
                    } else {
                        Err(CliError::Input(format!("{} is not a monomial", ring.show(p))))
                    }
                })
                .collect::<Result<Vec<_>, _>>()?;
            let np = NewtonPolyhedron::new(nv, exps.clone())?;
            let (lo, hi) = window.unwrap_or((1, level.min(4)));
            let mut levels = Vec::new();
            let mut checks = Vec::new();
            let mut ok = true;
            for n in lo..=hi {
                let gens: Vec<String> = np.closure_generators(n).iter().map(|e| show_monomial(e, names)).collect();
                levels.push(json!({ "n": n, "generators": gens }));
                if nv < mcmlab::poly::MAX_VARS {
                    let rep = check_intclosum(nv, &exps, n)?;
                    ok &= rep.equal;
                    checks.push(json!({ "n": n, "equal": rep.equal, "generators": rep.closure_of_power.len() }));
                }
            }
            let ideal: Vec<String> = f.ideal().iter().map(|p| ring.show(p)).collect();
            let value = extend(
                header("intclosure"),
                json!({
                    "field": field,
                    "filtration": filtration,
                    "ideal": ideal,
                    "levels": levels,
                    "intclosum": checks,
                }),
            );
            Ok(Outcome { value, ok, table: None })
        }
        Command::Superficial { element, module, filtration, c, .. } => {
            let m = prob.module(module)?;
            let f = prob.filtration(filtration)?;
            let x = ring
                .parse_poly(element)
                .map_err(|e| CliError::Input(format!("element `{element}`: {e}")))?;
            let (lo, hi) = window.unwrap_or((*c, (*c).max(level)));
            if lo != *c {
                return Err(CliError::Input("the window must start at c".into()));
            }
            let rep = f.superficial_check(&x, m.phi(), lo, hi)?;
            let ok = rep.holds_in_window;
            let head = extend(
                header("superficial"),
                json!({ "field": field, "element": element, "module": module, "filtration": filtration }),
            );
            let value = extend(as_map(head), serde_json::to_value(rep).expect("report"));
            let mut out = Outcome { value, ok, table: None };
            check_expectations(&mut out, prob.module_expect.get(module));
            Ok(out)
        }
        Command::Catalog { .. } => unreachable!(),
    }
}
