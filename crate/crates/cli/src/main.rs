//! `lrc`: bound tables, parameter classification, code construction and
//! verification for locally repairable codes.
//!
//! Exit codes: 0 on success, 1 when a verification check fails, 2 on usage
//! or parameter errors.

use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};
use serde_json::{json, Value};

use lrc_core::bounds::{
    cor5_bound, cor7_bound, cor8_bound, dmax_formula, eq1_bound, eq2_bound, improved_bound, phi,
    report, BoundReport,
};
use lrc_core::construct::{construct, verify_optimal, ConstructionPlan, Variant};
use lrc_core::io::{read_json, write_json, CodeJson, FamilyJson};
use lrc_core::locality::{
    algorithm_one, all_repair_sets, bound_witness, extend_v1star, extract_ecf, AlgorithmOneResult,
    LrcParams, RepairFamily,
};
use lrc_core::{Distance, DistanceMethod, Error, LinearCode};

#[derive(Parser)]
#[command(
    name = "lrc",
    version,
    about = "Singleton-type bounds and optimal constructions for locally repairable codes"
)]
struct Cli {
    /// Emit JSON instead of text.
    #[arg(long, global = true)]
    json: bool,
    #[command(subcommand)]
    command: Command,
}

#[derive(clap::Args, Clone, Copy)]
struct ParamArgs {
    #[arg(long)]
    n: usize,
    #[arg(long)]
    k: usize,
    #[arg(long)]
    r: usize,
    #[arg(long)]
    delta: usize,
}

#[derive(Clone, Copy, ValueEnum)]
enum BoundKind {
    Eq1,
    Eq2,
    Improved,
    Cor5,
    Cor7,
    Cor8,
    Dmax,
}

#[derive(Subcommand)]
enum Command {
    /// Classify a parameter point and list every applicable bound.
    Classify {
        #[command(flatten)]
        params: ParamArgs,
        /// Overlap parameter for the improved bound.
        #[arg(long = "M")]
        big_m: Option<usize>,
    },
    /// Evaluate one bound.
    Bound {
        #[arg(long, value_enum)]
        kind: BoundKind,
        #[command(flatten)]
        params: ParamArgs,
        #[arg(long = "M")]
        big_m: Option<usize>,
    },
    /// Guaranteed slack `Φ(a, b)` of a b-subfamily covering a points.
    Phi {
        #[arg(long)]
        r: usize,
        #[arg(long)]
        delta: usize,
        #[arg(long)]
        a: usize,
        #[arg(long)]
        b: usize,
    },
    /// Build an optimal code and write it as JSON.
    Construct {
        /// `A` or `B`.
        #[arg(long)]
        variant: Variant,
        #[arg(long)]
        r: usize,
        #[arg(long)]
        delta: usize,
        #[arg(long)]
        m: usize,
        #[arg(long)]
        u: usize,
        #[arg(long)]
        v: usize,
        #[arg(long)]
        w: usize,
        #[arg(long)]
        q: u64,
        #[arg(long)]
        e: usize,
        #[arg(long)]
        out: PathBuf,
    },
    /// Check locality, distance and bounds of a code file.
    Verify {
        #[arg(long)]
        code: PathBuf,
        #[arg(long)]
        r: Option<usize>,
        #[arg(long)]
        delta: Option<usize>,
        #[arg(long = "expect-d")]
        expect_d: Option<usize>,
    },
    /// Minimum distance of a code file.
    Distance {
        #[arg(long)]
        code: PathBuf,
        #[arg(long, default_value = "columns")]
        method: DistanceMethod,
        #[arg(long)]
        cap: Option<usize>,
    },
    /// Essential covering family, C1/C2/C3 and the C3-breaking output.
    Ecf {
        #[arg(long, conflicts_with = "family", required_unless_present = "family")]
        code: Option<PathBuf>,
        #[arg(long)]
        family: Option<PathBuf>,
        #[arg(long)]
        r: usize,
        #[arg(long)]
        delta: usize,
    },
}

enum Failure {
    Check(String),
    Usage(String),
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        Failure::Usage(e.to_string())
    }
}

type Outcome = std::result::Result<(), Failure>;

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(&cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(Failure::Check(msg)) => {
            eprintln!("{msg}");
            ExitCode::from(1)
        }
        Err(Failure::Usage(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(2)
        }
    }
}

fn run(cli: &Cli) -> Outcome {
    match &cli.command {
        Command::Classify { params, big_m } => run_classify(*params, *big_m, cli.json),
        Command::Bound {
            kind,
            params,
            big_m,
        } => run_bound(*kind, *params, *big_m, cli.json),
        Command::Phi { r, delta, a, b } => {
            let value = phi(*r, *delta, *a, *b)?;
            emit(cli.json, &json!({ "phi": value }), &value.to_string());
            Ok(())
        }
        Command::Construct {
            variant,
            r,
            delta,
            m,
            u,
            v,
            w,
            q,
            e,
            out,
        } => {
            let plan = ConstructionPlan {
                variant: *variant,
                r: *r,
                delta: *delta,
                m: *m,
                u: *u,
                v: *v,
                w: *w,
                q: *q,
                e: *e,
            };
            run_construct(&plan, out, cli.json)
        }
        Command::Verify {
            code,
            r,
            delta,
            expect_d,
        } => run_verify(code, *r, *delta, *expect_d, cli.json),
        Command::Distance { code, method, cap } => {
            let c = load_code(code)?.0;
            let d = c.min_distance(*method, *cap)?;
            let (value, text) = match d {
                Distance::Exact(d) => (json!({ "distance": d, "exact": true }), d.to_string()),
                Distance::AboveCap(c) => (
                    json!({ "distance": null, "above_cap": c }),
                    format!("> {c}"),
                ),
            };
            emit(cli.json, &value, &text);
            Ok(())
        }
        Command::Ecf {
            code,
            family,
            r,
            delta,
        } => run_ecf(code.as_ref(), family.as_ref(), *r, *delta, cli.json),
    }
}

fn emit(as_json: bool, value: &Value, text: &str) {
    if as_json {
        println!(
            "{}",
            serde_json::to_string_pretty(value).expect("serializable")
        );
    } else {
        println!("{text}");
    }
}

fn params_of(p: ParamArgs) -> Result<LrcParams, Failure> {
    Ok(LrcParams::decompose(p.n, p.k, p.r, p.delta)?)
}

fn show(x: Option<i64>) -> String {
    x.map_or_else(|| "-".into(), |v| v.to_string())
}

fn render_report(rep: &BoundReport) -> String {
    let p = &rep.params;
    let mut out = format!(
        "{p}\nu = {}, v = {}, w = {}, m = {}, r+delta-1 = {}\n",
        p.u,
        p.v,
        p.w,
        p.m,
        p.s()
    );
    if let Some(c) = &rep.regime {
        out.push_str(&format!("regime: {}\n", c.regime));
        for cond in &c.chain {
            out.push_str(&format!(
                "  [{}] {}\n",
                if cond.holds { "yes" } else { "no" },
                cond.text
            ));
        }
    }
    let rows: [(&str, Option<i64>); 8] = [
        ("eq1", Some(rep.eq1)),
        ("eq2", Some(rep.eq2)),
        ("cor5", Some(rep.cor5)),
        ("improved", rep.improved),
        ("cor7", rep.cor7),
        ("cor8", rep.cor8),
        ("d_max", rep.dmax),
        ("M", rep.big_m.map(|m| m as i64)),
    ];
    out.push_str("bound     value\n");
    for (name, v) in rows {
        out.push_str(&format!("{name:<9} {}\n", show(v)));
    }
    out.push_str(&format!(
        "cor10 unachievable: {}, specialized: {}\n",
        rep.cor10.unachievable, rep.cor10.specialized
    ));
    for c in &rep.citations {
        out.push_str(&format!("- {c}\n"));
    }
    out.trim_end().to_string()
}

fn run_classify(params: ParamArgs, big_m: Option<usize>, as_json: bool) -> Outcome {
    let p = params_of(params)?;
    let rep = report(&p, big_m)?;
    let value = serde_json::to_value(&rep).map_err(Error::from)?;
    emit(as_json, &value, &render_report(&rep));
    Ok(())
}

fn run_bound(kind: BoundKind, params: ParamArgs, big_m: Option<usize>, as_json: bool) -> Outcome {
    let p = params_of(params)?;
    let value = match kind {
        BoundKind::Eq1 => eq1_bound(&p),
        BoundKind::Eq2 => eq2_bound(&p)?,
        BoundKind::Cor5 => cor5_bound(&p)?,
        BoundKind::Cor7 => cor7_bound(&p)?,
        BoundKind::Cor8 => cor8_bound(&p)?,
        BoundKind::Improved => {
            let m = big_m
                .ok_or_else(|| Failure::Usage("--M is required for the improved bound".into()))?;
            improved_bound(&p, m)?
        }
        BoundKind::Dmax => dmax_formula(&p)
            .ok_or_else(|| Failure::Usage(format!("no closed-form d_max for {p}")))?,
    };
    emit(as_json, &json!({ "bound": value }), &value.to_string());
    Ok(())
}

fn run_construct(plan: &ConstructionPlan, out: &Path, as_json: bool) -> Outcome {
    let code = construct(plan)?;
    write_json(out, &CodeJson::with_plan(&code, plan))?;
    let value = json!({
        "n": code.n(),
        "k": code.k(),
        "predicted_d": plan.predicted_distance(),
        "out": out.display().to_string(),
    });
    let text = format!(
        "(n, k, predicted d) = ({}, {}, {}) written to {}",
        code.n(),
        code.k(),
        plan.predicted_distance(),
        out.display()
    );
    emit(as_json, &value, &text);
    Ok(())
}

fn load_code(path: &Path) -> Result<(LinearCode, Option<ConstructionPlan>), Failure> {
    let file: CodeJson = read_json(path)?;
    Ok((file.to_code()?, file.plan))
}

fn run_verify(
    path: &Path,
    r: Option<usize>,
    delta: Option<usize>,
    expect_d: Option<usize>,
    as_json: bool,
) -> Outcome {
    let (code, plan) = load_code(path)?;
    if let Some(plan) = plan {
        if r.is_some_and(|r| r != plan.r) || delta.is_some_and(|d| d != plan.delta) {
            return Err(Failure::Usage(
                "--r/--delta disagree with the plan stored in the file".into(),
            ));
        }
        let (report, passed) = match verify_optimal(&code, &plan) {
            Ok(rep) => (rep, true),
            Err(Error::NotOptimal(rep)) => (rep, false),
            Err(e) => return Err(e.into()),
        };
        let expect_ok = expect_d.is_none_or(|d| report.distance == Some(d));
        let mut text = report.to_string();
        if let Some(d) = expect_d {
            text.push_str(&format!(
                "{} expected distance: {d}, measured {:?}\n",
                tag(expect_ok),
                report.distance
            ));
        }
        let value = serde_json::to_value(&report).map_err(Error::from)?;
        emit(as_json, &value, text.trim_end());
        return if passed && expect_ok {
            Ok(())
        } else {
            Err(Failure::Check("verification failed".into()))
        };
    }

    let (r, delta) = match (r, delta) {
        (Some(r), Some(d)) => (r, d),
        _ => {
            return Err(Failure::Usage(
                "--r and --delta are required for codes without a plan".into(),
            ))
        }
    };
    let witness = match bound_witness(&code, r, delta) {
        Ok(w) => w,
        Err(e @ Error::LocalityAbsent(_)) => return Err(Failure::Check(e.to_string())),
        Err(e) => return Err(e.into()),
    };
    let d = code
        .min_distance(DistanceMethod::Columns, None)?
        .exact()
        .expect("uncapped search is exact");
    let p = &witness.params;
    let improved = improved_bound(p, witness.m)?;
    let eq2 = eq2_bound(p)?;
    let mut checks = vec![
        (
            "locality",
            true,
            format!("ECF with {} blocks", witness.ecf.len()),
        ),
        (
            "witness",
            d <= witness.certified_distance_bound(),
            format!(
                "rank-(k-1) set of size {} gives d <= {}",
                witness.set.len(),
                witness.certified_distance_bound()
            ),
        ),
        (
            "improved",
            d as i64 <= improved,
            format!("d = {d} <= {improved} with M = {}", witness.m),
        ),
        ("eq2", d as i64 <= eq2, format!("d = {d} <= {eq2}")),
    ];
    if let Some(e) = expect_d {
        checks.push(("distance", d == e, format!("d = {d}, expected {e}")));
    }
    let passed = checks.iter().all(|c| c.1);
    let text: Vec<String> = checks
        .iter()
        .map(|(n, ok, det)| format!("{} {n}: {det}", tag(*ok)))
        .collect();
    let value = json!({
        "distance": d,
        "M": witness.m,
        "checks": checks.iter().map(|(n, ok, det)| json!({ "name": n, "passed": ok, "detail": det })).collect::<Vec<_>>(),
    });
    emit(as_json, &value, &text.join("\n"));
    if passed {
        Ok(())
    } else {
        Err(Failure::Check("verification failed".into()))
    }
}

fn tag(ok: bool) -> &'static str {
    if ok {
        "PASS"
    } else {
        "FAIL"
    }
}

fn one_based(v: &[usize]) -> Vec<usize> {
    v.iter().map(|x| x + 1).collect()
}

fn run_ecf(
    code: Option<&PathBuf>,
    family: Option<&PathBuf>,
    r: usize,
    delta: usize,
    as_json: bool,
) -> Outcome {
    let s = r + delta - 1;
    let (ecf, alg): (RepairFamily, AlgorithmOneResult) = match (code, family) {
        (Some(path), _) => {
            let c = load_code(path)?.0;
            let gamma = all_repair_sets(&c, r, delta)?;
            if let Some(x) = gamma.first_uncovered() {
                return Err(Failure::Check(Error::LocalityAbsent(x + 1).to_string()));
            }
            let ecf = extract_ecf(&gamma, r, delta, Some(&c))?;
            let alg = extend_v1star(&c, ecf.blocks(), &algorithm_one(ecf.blocks(), delta)?)?;
            (ecf, alg)
        }
        (None, Some(path)) => {
            let fam = read_json::<FamilyJson>(path)?.to_family()?;
            let ecf = extract_ecf(&fam, r, delta, None)?;
            let alg = algorithm_one(ecf.blocks(), delta)?;
            (ecf, alg)
        }
        (None, None) => {
            return Err(Failure::Usage(
                "one of --code or --family is required".into(),
            ))
        }
    };
    let flags = ecf.flags(s, delta);
    let value = json!({
        "ecf": FamilyJson::from(&ecf),
        "flags": flags,
        "algorithm": {
            "v1": one_based(&alg.v1),
            "v1_prime": one_based(&alg.v1_prime),
            "v1_star": alg.v1_star.as_deref().map(one_based),
            "upsilon": alg.upsilon.as_deref().map(one_based),
            "M": alg.m,
        },
    });
    let mut text = format!("ECF ({} blocks on n = {}):\n", ecf.len(), ecf.n());
    for (i, b) in ecf.blocks().iter().enumerate() {
        text.push_str(&format!("  S{} = {:?}\n", i + 1, one_based(b)));
    }
    text.push_str(&format!(
        "C1: {}, C2: {}, C3: {}\n",
        flags.c1, flags.c2, flags.c3
    ));
    text.push_str(&format!(
        "V1 = {:?}, V1' = {:?}\n",
        one_based(&alg.v1),
        one_based(&alg.v1_prime)
    ));
    if let Some(star) = &alg.v1_star {
        text.push_str(&format!("V1* = {:?}\n", one_based(star)));
    }
    if let Some(ups) = &alg.upsilon {
        text.push_str(&format!("Upsilon = {:?}\n", one_based(ups)));
    }
    text.push_str(&format!(
        "M = {}",
        alg.m.map_or_else(|| "-".into(), |m| m.to_string())
    ));
    emit(as_json, &value, &text);
    Ok(())
}
