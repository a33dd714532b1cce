//! The `thickres` command line: JSON in, JSON or DOT out.
//!
//! Exit codes: 0 success, 2 negative verdict, 3 bad input or failed
//! precondition, 4 fuel exhausted.

use std::collections::BTreeMap;
use std::ffi::OsString;
use std::io::{Read, Write};
use std::path::PathBuf;

use clap::{Parser, Subcommand, ValueEnum};
use serde_json::{json, Value};

use crate::blowup::{to_dot, BlowupTree, Center};
use crate::chart::verify_ptm;
use crate::error::{Error, Result};
use crate::json::{self, parse_input, ChartJson, InputDoc, RetractJson};
use crate::pipeline::{
    embed_log_smooth, resolve_over_b, smooth_away_from_snc, verify_distinguished, BaseSpec,
    BPairWitness,
};
use crate::principalize::{
    monomialize_divisor, pushforward_principalization, MonomialOracle, DEFAULT_FUEL,
};
use crate::selftest::{run_all, DEFAULT_SEED};
use crate::structure::{extend_retract, factor_trivial_modification};

pub const EXIT_OK: i32 = 0;
pub const EXIT_NEGATIVE: i32 = 2;
pub const EXIT_INPUT: i32 = 3;
pub const EXIT_FUEL: i32 = 4;

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Json,
    Dot,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum OracleChoice {
    Builtin,
}

#[derive(Debug, Parser)]
#[command(name = "thickres", version, about = "Blowups and resolution over k[pi]/(pi^n)")]
pub struct CliConfig {
    #[command(subcommand)]
    pub command: Command,
    /// Input JSON document; standard input when omitted.
    #[arg(long = "in", global = true)]
    pub input: Option<PathBuf>,
    /// Output file; standard output when omitted.
    #[arg(long, global = true)]
    pub out: Option<PathBuf>,
    #[arg(long, value_enum, default_value = "json", global = true)]
    pub format: Format,
    /// Maximum number of blowups the oracle may schedule.
    #[arg(long, default_value_t = DEFAULT_FUEL as u64, value_parser = clap::value_parser!(u64).range(1..), global = true)]
    pub fuel: u64,
    #[arg(long, default_value_t = DEFAULT_SEED, global = true)]
    pub seed: u64,
    #[arg(long, value_enum, default_value = "builtin", global = true)]
    pub oracle: OracleChoice,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Subcommand)]
pub enum Command {
    /// Certify hypersurfaces `k[vars]/(f)` as ptm charts.
    VerifyPtm,
    /// Check `pi = unit * eps * (boundary monomial)` on every chart.
    VerifyBpair,
    /// Apply a sequence of regular or reduced-divisor centers.
    Blowup,
    /// Apply log blowups of boundary variables.
    Logblow,
    /// Principalize an ideal with the built-in oracle.
    Principalize,
    /// Make a divisor boundary-monomial.
    Monomialize,
    /// Factor a trivial-reduction chart map into divisor blowups.
    Factor,
    /// Extend generic retracts to regular ones.
    RetractExtend,
    /// Resolve charts over `k[pi]/(pi^n)`.
    Resolve,
    /// Resolve, then embed each leaf into a log smooth chart.
    Embed,
    /// Run the acceptance checks.
    Selftest,
}

enum Outcome {
    Positive(String),
    Negative(String),
}

/// Run the command line and return the exit code.
pub fn run<I, T>(argv: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cfg = match CliConfig::try_parse_from(argv) {
        Ok(c) => c,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() { EXIT_INPUT } else { EXIT_OK };
        }
    };
    let result = read_input(&cfg).and_then(|text| execute(&cfg, &text));
    let (code, body) = match result {
        Ok(Outcome::Positive(s)) => (EXIT_OK, s),
        Ok(Outcome::Negative(s)) => (EXIT_NEGATIVE, s),
        Err(e) => {
            eprintln!("error: {e}");
            let body = match &e {
                Error::FuelExhausted { partial, .. } if cfg.format == Format::Json => {
                    json::to_pretty(&json!({"error": e.to_string(), "partial": json::tree(partial)}))
                }
                Error::FuelExhausted { partial, .. } => to_dot(partial),
                _ => return e.exit_code(),
            };
            (e.exit_code(), body)
        }
    };
    match write_output(&cfg, &body) {
        Ok(()) => code,
        Err(e) => {
            eprintln!("error: {e}");
            EXIT_INPUT
        }
    }
}

fn read_input(cfg: &CliConfig) -> Result<String> {
    if cfg.command == Command::Selftest {
        return Ok(String::new());
    }
    let mut text = String::new();
    match &cfg.input {
        Some(p) => {
            text = std::fs::read_to_string(p)
                .map_err(|e| Error::InvalidInput(format!("{}: {e}", p.display())))?;
        }
        None => {
            std::io::stdin()
                .read_to_string(&mut text)
                .map_err(|e| Error::InvalidInput(format!("standard input: {e}")))?;
        }
    }
    Ok(text)
}

fn write_output(cfg: &CliConfig, body: &str) -> Result<()> {
    match &cfg.out {
        Some(p) => std::fs::write(p, body)
            .map_err(|e| Error::InvalidInput(format!("{}: {e}", p.display()))),
        None => std::io::stdout()
            .write_all(body.as_bytes())
            .map_err(|e| Error::InvalidInput(format!("standard output: {e}"))),
    }
}

fn execute(cfg: &CliConfig, text: &str) -> Result<Outcome> {
    let oracle = MonomialOracle {
        fuel: usize::try_from(cfg.fuel).unwrap_or(usize::MAX),
    };
    if cfg.command == Command::Selftest {
        return selftest(cfg, oracle.fuel);
    }
    let doc = parse_input(text)?;
    let out = |v: Value, tree: Option<&BlowupTree>| -> Result<String> {
        match (cfg.format, tree) {
            (Format::Json, _) => Ok(json::to_pretty(&v)),
            (Format::Dot, Some(t)) => Ok(to_dot(t)),
            (Format::Dot, None) => Err(Error::InvalidInput(
                "dot output is only available for commands that build a blowup tree".into(),
            )),
        }
    };
    match cfg.command {
        Command::VerifyPtm => {
            if doc.hypersurfaces.is_empty() {
                return Err(Error::InvalidInput("no `hypersurfaces` given".into()));
            }
            let mut all = true;
            let mut results = Vec::new();
            for h in &doc.hypersurfaces {
                let v = verify_ptm(&h.presentation()?);
                all &= v.ok;
                results.push(json!({
                    "id": h.id,
                    "ok": v.ok,
                    "nilpotent": v.witness.as_ref().map(|w| &w.0),
                    "thickness": v.witness.as_ref().map(|w| w.1),
                    "reason": v.reason,
                }));
            }
            verdict(all, out(json!({ "results": results }), None)?)
        }
        Command::VerifyBpair => {
            let charts = doc.chart_list()?;
            if charts.is_empty() {
                return Err(Error::InvalidInput("no charts given".into()));
            }
            let mut all = true;
            let mut results = Vec::new();
            for c in &charts {
                match verify_distinguished(c)? {
                    Ok(w) => results.push(json!({"chart": c.id, "ok": true, "witness": witness(&w)})),
                    Err(f) => {
                        all = false;
                        results.push(json!({"chart": c.id, "ok": false, "reason": f.code(), "detail": f.to_string()}));
                    }
                }
            }
            verdict(all, out(json!({ "results": results }), None)?)
        }
        Command::Blowup | Command::Logblow => {
            let atlas = doc.atlas()?;
            let selectors = doc.selectors()?;
            if selectors.is_empty() {
                return Err(Error::InvalidInput("no `centers` given".into()));
            }
            let log = cfg.command == Command::Logblow;
            if let Some(s) = selectors
                .iter()
                .find(|s| matches!(s.center, Center::LogReducedDivisor(_)) != log)
            {
                return Err(Error::BadCenter(format!(
                    "{} center {} given to {}",
                    s.center.kind(),
                    s.center,
                    if log { "logblow" } else { "blowup" }
                )));
            }
            let mut tree = BlowupTree::from_atlas(&atlas)?;
            tree.run_sequence(&selectors)?;
            positive(out(json::tree(&tree), Some(&tree))?)
        }
        Command::Principalize => {
            let atlas = doc.atlas()?;
            let z = doc.subscheme(&atlas)?;
            if z.gens.is_empty() {
                return Err(Error::InvalidInput("no `ideal` given".into()));
            }
            let res = pushforward_principalization(&atlas, &z, &oracle)?;
            let boundary: BTreeMap<&String, Value> = res
                .final_boundary
                .iter()
                .map(|(id, e)| (id, json::boundary(e)))
                .collect();
            let v = json!({
                "tree": json::tree(&res.tree),
                "boundary": boundary,
                "skipped": res.skipped,
                "transform": json::subscheme(&res.transform),
            });
            positive(out(v, Some(&res.tree))?)
        }
        Command::Monomialize => {
            let atlas = doc.atlas()?;
            let d = doc.cartier_divisor(&atlas)?;
            let res = monomialize_divisor(&atlas, &d)?;
            let mults: BTreeMap<&String, Value> = res
                .multiplicities
                .iter()
                .map(|(id, m)| (id, json::monomial_divisor(m)))
                .collect();
            let v = json!({
                "tree": json::tree(&res.tree),
                "divisor": json::cartier_divisor(&res.divisor),
                "multiplicities": mults,
            });
            positive(out(v, Some(&res.tree))?)
        }
        Command::Factor => {
            let (x, y, map) = doc.chart_map()?;
            let f = factor_trivial_modification(&x, &y, &map)?;
            let v = json!({
                "pre_sequence": json::tree(&f.pre_sequence),
                "y_chart": f.y_chart,
                "path": f.path.steps.iter().map(|s| json!({"label": s.label, "var": s.var})).collect::<Vec<_>>(),
                "replay": json::tree(&f.replay),
                "iso": json::ring_map(&f.iso),
            });
            positive(out(v, Some(&f.replay))?)
        }
        Command::RetractExtend => {
            let atlas = doc.atlas()?;
            let res = extend_retract(&atlas, &doc.retract_list()?)?;
            let v = json!({
                "tree": json::tree(&res.tree),
                "retracts": res.retracts.values().map(RetractJson::from_retract).collect::<Vec<_>>(),
                "maxima": res.maxima.iter().map(|(n, l)| json!({"n": n, "label": l})).collect::<Vec<_>>(),
            });
            positive(out(v, Some(&res.tree))?)
        }
        Command::Resolve => {
            let (atlas, base, z) = pipeline_input(&doc)?;
            let res = resolve_over_b(&atlas, &z, &base, &oracle)?;
            let smooth = smooth_away_from_snc(&atlas, &base, &oracle)?;
            let stages: Vec<Value> = res
                .stages
                .iter()
                .map(|s| json!({"name": s.name, "tree": json::steps(&res.tree.steps()[s.steps.clone()])}))
                .collect();
            let leaves: Vec<Value> = res
                .tree
                .leaf_charts()
                .map(|c| {
                    json!({
                        "chart": ChartJson::from_chart(c),
                        "witness": res.witnesses.get(&c.id).map(witness),
                        "failure": res.failures.get(&c.id).map(|f| f.to_string()),
                        "z_divisor": res.z_divisor.get(&c.id).map(json::monomial_divisor),
                    })
                })
                .collect();
            let loci: Vec<Value> = smooth
                .loci
                .iter()
                .map(|l| json!({"chart": l.chart, "vars": l.vars, "labels": l.labels, "in_boundary": l.in_boundary}))
                .collect();
            let v = json!({
                "input": json::atlas(&atlas),
                "stages": stages,
                "tree": json::tree(&res.tree),
                "leaves": leaves,
                "non_smooth_locus": loci,
            });
            verdict(
                res.is_distinguished() && smooth.all_in_boundary(),
                out(v, Some(&res.tree))?,
            )
        }
        Command::Embed => {
            let (atlas, base, z) = pipeline_input(&doc)?;
            let res = resolve_over_b(&atlas, &z, &base, &oracle)?;
            if !res.is_distinguished() {
                let failed: Vec<String> = res.failures.iter().map(|(c, f)| format!("{c}: {f}")).collect();
                return Ok(Outcome::Negative(out(
                    json!({"failures": failed}),
                    Some(&res.tree),
                )?));
            }
            let retracts = doc
                .retract_list()?
                .into_iter()
                .map(|r| (r.chart.clone(), r))
                .collect();
            let embs = embed_log_smooth(&res, &retracts)?;
            if cfg.format == Format::Dot {
                return positive(embs.iter().map(|e| to_dot(&e.tree)).collect());
            }
            let v: Vec<Value> = embs
                .iter()
                .map(|e| {
                    let pis: BTreeMap<&String, String> =
                        e.pi_images.iter().map(|(c, m)| (c, m.to_string())).collect();
                    json!({
                        "leaf": e.leaf,
                        "y_prime": ChartJson::from_chart(&e.y_prime),
                        "path": e.factorization.path.steps.iter().map(|s| json!({"label": s.label, "var": s.var})).collect::<Vec<_>>(),
                        "tree": json::tree(&e.tree),
                        "component_chart": e.component_chart,
                        "pi": pis,
                    })
                })
                .collect();
            positive(out(json!({ "embeddings": v }), None)?)
        }
        Command::Selftest => unreachable!("handled above"),
    }
}

fn pipeline_input(doc: &InputDoc) -> Result<(crate::chart::Atlas, BaseSpec, crate::divisors::Subscheme)> {
    let atlas = doc.atlas()?;
    let base = BaseSpec::new(atlas.base_exponent)?;
    let z = doc.subscheme(&atlas)?;
    Ok((atlas, base, z))
}

fn witness(w: &BPairWitness) -> Value {
    json!({"eps": w.eps, "d": json::monomial_divisor(&w.d), "unit": w.unit.to_string()})
}

fn positive(s: String) -> Result<Outcome> {
    Ok(Outcome::Positive(s))
}

fn verdict(ok: bool, s: String) -> Result<Outcome> {
    Ok(if ok {
        Outcome::Positive(s)
    } else {
        Outcome::Negative(s)
    })
}

fn selftest(cfg: &CliConfig, fuel: usize) -> Result<Outcome> {
    if cfg.format == Format::Dot {
        return Err(Error::InvalidInput("selftest has no dot output".into()));
    }
    let results = run_all(cfg.seed, fuel);
    for r in &results {
        eprintln!("{r}");
    }
    let v: Vec<Value> = results
        .iter()
        .map(|r| json!({"id": r.id, "name": r.name, "passed": r.passed, "detail": r.detail}))
        .collect();
    verdict(
        results.iter().all(|r| r.passed),
        json::to_pretty(&json!({"seed": cfg.seed, "fuel": fuel, "criteria": v})),
    )
}
