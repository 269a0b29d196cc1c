//! Command-line front end: rate-distortion tables, adversarial
//! simulation of the constructions, property verification, generator
//! search, and decoding. All outputs are files with the effective
//! configuration echoed into their headers; identical configuration and
//! seed produce byte-identical files.

use std::fs;
use std::io::Write as _;
use std::path::{Path, PathBuf};
use std::process::ExitCode;
use std::time::Instant;

use clap::{Args, Parser, Subcommand};
use serde::Deserialize;
use serde_json::{json, Value};

use vpec::adversary::{worst_case_distortion, Strategy, TraceRecord};
use vpec::bounds::{
    achievable_curves, asymptotic_curves, converse_curves, rd, NamedCurve, RdCurve,
};
use vpec::code::VpecCode;
use vpec::gf::field_build;
use vpec::lincode::{grs_build, is_l_mds, is_list_decodable, search_l_mds, LinearCode};
use vpec::lmds_vpec::{packetize, LmdsVpecCode};
use vpec::packet::{PacketLayout, PacketSet};
use vpec::ratio::{format_rational, parse_rational, Distortion, Rational};
use vpec::reference::{check_vpec_conditions, CodeTable};
use vpec::rep_vpec::RepVpecCode;
use vpec::serial::{
    curves_to_csv, curves_to_json, payload_from_json, ArrayPayload, CodeFile, PacketsPayload,
    SearchFile, SimulateReport, TraceLine,
};
use vpec::{Budget, Error, Result};

#[derive(Parser)]
#[command(
    name = "vpec",
    version,
    about = "Packet codes that tolerate adversarial alterations: bounds, simulation, verification"
)]
struct Cli {
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Subcommand)]
enum Cmd {
    /// Write converse and achievable rate-distortion curves.
    Bounds(BoundsArgs),
    /// Run a construction's decoder against an adversary and report.
    Simulate(SimulateArgs),
    /// Check properties of a code file.
    Verify(VerifyArgs),
    /// Search for a list-decodable generator and write its parameters.
    SearchLmds(SearchArgs),
    /// Decode a received word from a payload file.
    Decode(DecodeArgs),
    /// Write the data files behind the comparison figures.
    Figure(FigureArgs),
}

/// Optional values loadable from a JSON config file. Flags win over these;
/// these win over defaults.
#[derive(Debug, Default, Deserialize)]
#[serde(deny_unknown_fields)]
struct FileConfig {
    n: Option<usize>,
    t: Option<usize>,
    l: Option<Vec<usize>>,
    s: Option<usize>,
    q: Option<u32>,
    k: Option<usize>,
    d: Option<String>,
    seed: Option<u64>,
    trials: Option<u64>,
    budget: Option<u64>,
    adversary: Option<String>,
    construction: Option<String>,
    format: Option<String>,
    out: Option<PathBuf>,
    code: Option<PathBuf>,
    input: Option<PathBuf>,
    rounds: Option<usize>,
    packets: Option<usize>,
    max_iters: Option<u64>,
    out_dir: Option<PathBuf>,
    timing: Option<bool>,
    dump: Option<PathBuf>,
}

impl FileConfig {
    fn load(path: &Option<PathBuf>) -> Result<FileConfig> {
        match path {
            None => Ok(FileConfig::default()),
            Some(p) => {
                let text = fs::read_to_string(p)?;
                serde_json::from_str(&text).map_err(|e| Error::Parse(e.to_string()))
            }
        }
    }
}

fn pick<T>(flag: Option<T>, cfg: Option<T>, default: T) -> T {
    flag.or(cfg).unwrap_or(default)
}

fn need<T>(flag: Option<T>, cfg: Option<T>, name: &str) -> Result<T> {
    flag.or(cfg)
        .ok_or_else(|| Error::Infeasible(format!("missing required parameter --{name}")))
}

/// Budget precedence: --budget flag, then VPEC_BUDGET, then the default.
fn resolve_budget(flag: Option<u64>, cfg: Option<u64>) -> Result<Budget> {
    if let Some(b) = flag.or(cfg) {
        return Ok(Budget::new(b));
    }
    match std::env::var("VPEC_BUDGET") {
        Ok(v) => Ok(Budget::new(v.parse().map_err(|_| {
            Error::Parse(format!("VPEC_BUDGET must be an integer, got {v:?}"))
        })?)),
        Err(_) => Ok(Budget::default()),
    }
}

fn error_kind(err: &Error) -> &'static str {
    match err {
        Error::PropertyViolation(_) => "property_violation",
        Error::ZeroInverse => "property_violation",
        Error::Infeasible(_) | Error::LengthMismatch { .. } => "infeasible",
        Error::Budget { .. } => "budget",
        Error::Parse(_) => "parse",
        Error::Io(_) => "io",
        Error::SearchExhausted { .. } => "search_exhausted",
    }
}

fn error_exit(err: &Error) -> u8 {
    match err {
        Error::PropertyViolation(_) | Error::ZeroInverse => 1,
        Error::Infeasible(_) | Error::LengthMismatch { .. } => 2,
        Error::Budget { .. } => 3,
        Error::Parse(_) | Error::Io(_) => 4,
        Error::SearchExhausted { .. } => 5,
    }
}

fn report_error(err: &Error, hint: Option<&str>) -> ExitCode {
    let mut obj = json!({"error": error_kind(err), "detail": err.to_string()});
    if let Some(h) = hint {
        obj["hint"] = Value::String(h.into());
    }
    eprintln!("{obj}");
    ExitCode::from(error_exit(err))
}

/// Loads a linear code from either file form: a generator matrix, or
/// search output carrying evaluation points and multipliers.
fn load_code(path: &Path) -> Result<LinearCode> {
    let text = fs::read_to_string(path)?;
    if let Ok(file) = CodeFile::from_json(&text) {
        return file.to_code();
    }
    let file = SearchFile::from_json(&text).map_err(|_| {
        Error::Parse(format!(
            "{} is neither a generator-matrix file nor search output",
            path.display()
        ))
    })?;
    let field = field_build(file.p, file.m)?;
    grs_build(&field, file.n, file.k, &file.params())
}

fn write_file(path: &Path, content: &str) -> Result<()> {
    fs::write(path, content)?;
    println!("wrote {}", path.display());
    Ok(())
}

fn json_with_config(value: Value, config: Value) -> String {
    let mut obj = match value {
        Value::Object(m) => m,
        other => {
            let mut m = serde_json::Map::new();
            m.insert("value".into(), other);
            m
        }
    };
    obj.insert("effective_config".into(), config);
    let mut s = serde_json::to_string_pretty(&Value::Object(obj)).expect("plain data");
    s.push('\n');
    s
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let outcome = match cli.cmd {
        Cmd::Bounds(a) => run_bounds(a),
        Cmd::Simulate(a) => run_simulate(a),
        Cmd::Verify(a) => run_verify(a),
        Cmd::SearchLmds(a) => run_search(a),
        Cmd::Decode(a) => run_decode(a),
        Cmd::Figure(a) => run_figure(a),
    };
    match outcome {
        Ok(code) => code,
        Err(err) => {
            let hint = matches!(err, Error::Budget { .. })
                .then_some("exhaustive enumeration too large; try --adversary random or raise --budget");
            report_error(&err, hint)
        }
    }
}

#[derive(Args)]
struct BoundsArgs {
    #[arg(long)]
    n: Option<usize>,
    #[arg(long)]
    t: Option<usize>,
    /// List size for the interleaved-window curves; repeatable.
    #[arg(long)]
    l: Vec<usize>,
    /// Alphabet size; when given, gates curves on their field premises.
    #[arg(long)]
    q: Option<u32>,
    /// csv (default) or json.
    #[arg(long)]
    format: Option<String>,
    #[arg(long)]
    out: Option<PathBuf>,
    #[arg(long)]
    config: Option<PathBuf>,
}

fn run_bounds(a: BoundsArgs) -> Result<ExitCode> {
    let cfg = FileConfig::load(&a.config)?;
    let n = need(a.n, cfg.n, "n")?;
    let t = need(a.t, cfg.t, "t")?;
    let ls = if a.l.is_empty() {
        cfg.l.unwrap_or_default()
    } else {
        a.l
    };
    let q = a.q.or(cfg.q);
    let format = pick(a.format, cfg.format, "csv".into());
    let out = pick(
        a.out,
        cfg.out,
        PathBuf::from(format!("bounds_n{n}_t{t}.{format}")),
    );

    let effective = json!({
        "command": "bounds", "n": n, "t": t, "l": ls, "q": q,
        "format": format, "out": out.display().to_string(),
    });
    let conv = converse_curves(n, t)?;
    let ach = achievable_curves(n, t, q, &ls)?;

    let mut comments = vec![format!("effective config: {effective}")];
    let mut curves = conv.curves.clone();
    curves.extend(ach.curves.clone());
    for c in &curves {
        if let Some(note) = &c.note {
            comments.push(format!("note {}: {}", c.name, note));
        }
    }
    for (name, reason) in conv.omitted.iter().chain(&ach.omitted) {
        comments.push(format!("omitted {name}: {reason}"));
    }

    let content = match format.as_str() {
        "csv" => curves_to_csv(&comments, &curves),
        "json" => curves_to_json(&comments, &curves),
        other => {
            return Err(Error::Infeasible(format!(
                "unknown format {other:?}; use csv or json"
            )))
        }
    };
    write_file(&out, &content)?;

    if let Some((_, reason)) = conv.omitted.first() {
        let err = Error::Infeasible(reason.clone());
        eprintln!(
            "{}",
            json!({"error": error_kind(&err), "detail": err.to_string()})
        );
        return Ok(ExitCode::from(2));
    }
    Ok(ExitCode::SUCCESS)
}

#[derive(Args)]
struct SimulateArgs {
    /// rep or lmds.
    #[arg(long)]
    construction: Option<String>,
    #[arg(long)]
    t: Option<usize>,
    /// Window width of the repetition construction.
    #[arg(long)]
    s: Option<usize>,
    #[arg(long)]
    q: Option<u32>,
    /// Batching rounds for the repetition construction.
    #[arg(long)]
    rounds: Option<usize>,
    /// Code file for the interleaved construction.
    #[arg(long)]
    code: Option<PathBuf>,
    /// List size for the interleaved construction.
    #[arg(long)]
    l: Option<usize>,
    /// exhaustive (default), random, or swap.
    #[arg(long)]
    adversary: Option<String>,
    #[arg(long)]
    seed: Option<u64>,
    #[arg(long)]
    trials: Option<u64>,
    #[arg(long)]
    budget: Option<u64>,
    #[arg(long)]
    out: Option<PathBuf>,
    /// Write every decoded case as a JSON line to this file.
    #[arg(long)]
    dump: Option<PathBuf>,
    /// Record wall-clock time in the report (off by default so reruns are
    /// byte-identical).
    #[arg(long)]
    timing: bool,
    #[arg(long)]
    config: Option<PathBuf>,
}

fn build_construction(
    construction: &str,
    a: &SimulateArgs,
    cfg: &FileConfig,
    budget: Budget,
) -> Result<(Box<dyn VpecCode>, Value)> {
    match construction {
        "rep" => {
            let t = need(a.t, cfg.t, "t")?;
            let s = need(a.s, cfg.s, "s")?;
            let q = need(a.q, cfg.q, "q")?;
            let rounds = pick(a.rounds, cfg.rounds, 1);
            let detail = json!({"t": t, "s": s, "q": q, "rounds": rounds});
            let code = RepVpecCode::new(t, s, q)?;
            if rounds == 1 {
                Ok((Box::new(code), detail))
            } else {
                Ok((Box::new(code.batched(rounds)?), detail))
            }
        }
        "lmds" => {
            let t = need(a.t, cfg.t, "t")?;
            let l = need(a.l, cfg.l.as_ref().and_then(|v| v.first().copied()), "l")?;
            let path = need(a.code.clone(), cfg.code.clone(), "code")?;
            let base = load_code(&path)?;
            let detail = json!({"t": t, "l": l, "code": path.display().to_string()});
            Ok((Box::new(LmdsVpecCode::build(base, t, l, budget)?), detail))
        }
        other => Err(Error::Infeasible(format!(
            "unknown construction {other:?}; use rep or lmds"
        ))),
    }
}

fn run_simulate(a: SimulateArgs) -> Result<ExitCode> {
    let cfg = FileConfig::load(&a.config)?;
    let construction = need(a.construction.clone(), cfg.construction.clone(), "construction")?;
    let adversary = pick(a.adversary.clone(), cfg.adversary.clone(), "exhaustive".into());
    let seed = pick(a.seed, cfg.seed, 0);
    let trials = pick(a.trials, cfg.trials, 10_000);
    let timing = a.timing || cfg.timing.unwrap_or(false);
    let budget = resolve_budget(a.budget, cfg.budget)?;
    let out = pick(
        a.out.clone(),
        cfg.out.clone(),
        PathBuf::from(format!("simulate_{construction}.json")),
    );
    let dump = a.dump.clone().or(cfg.dump.clone());

    let strategy = match adversary.as_str() {
        "exhaustive" => Strategy::Exhaustive,
        "random" => Strategy::Random { seed, trials },
        "swap" => Strategy::SwapToCodeword { seed, trials },
        other => {
            return Err(Error::Infeasible(format!(
                "unknown adversary {other:?}; use exhaustive, random, or swap"
            )))
        }
    };

    let (code, detail) = build_construction(&construction, &a, &cfg, budget)?;
    let t = code.params().errors;
    let effective = json!({
        "command": "simulate", "construction": construction, "parameters": detail,
        "adversary": adversary, "seed": seed, "trials": trials,
        "budget": budget.enumeration, "timing": timing,
        "out": out.display().to_string(),
        "dump": dump.as_ref().map(|p| p.display().to_string()),
    });

    let started = Instant::now();
    let mut writer = match &dump {
        Some(path) => Some(std::io::BufWriter::new(fs::File::create(path)?)),
        None => None,
    };
    let mut sink = |rec: &TraceRecord| -> Result<()> {
        if let Some(w) = writer.as_mut() {
            w.write_all(TraceLine::from_record(rec).to_json_line().as_bytes())?;
        }
        Ok(())
    };
    let survey = worst_case_distortion(code.as_ref(), t, &strategy, budget, Some(&mut sink))?;
    if let Some(mut w) = writer {
        w.flush()?;
        println!("wrote {}", dump.as_ref().expect("writer implies path").display());
    }
    let elapsed_ms = if timing {
        started.elapsed().as_millis() as u64
    } else {
        0
    };

    let params = code.params();
    let report = SimulateReport::new(&construction, &params, &strategy, &survey, elapsed_ms);
    let content = json_with_config(serde_json::to_value(&report).expect("plain data"), effective);
    write_file(&out, &content)?;
    println!(
        "worst {} over {} cases, {} wrong symbols, max {} erasures",
        report.worst_distortion, report.trials_or_space_size,
        report.wrong_symbol_events, report.max_erasures
    );

    if survey.wrong_symbol_events > 0 {
        let err = Error::PropertyViolation("decoder produced a wrong symbol".into());
        eprintln!(
            "{}",
            json!({"error": error_kind(&err), "detail": err.to_string()})
        );
        return Ok(ExitCode::from(1));
    }
    if survey.exhaustive && survey.worst > Distortion::Finite(params.distortion.clone()) {
        let err = Error::PropertyViolation(format!(
            "worst distortion {} exceeds the declared budget {}",
            survey.worst,
            format_rational(&params.distortion)
        ));
        eprintln!(
            "{}",
            json!({"error": error_kind(&err), "detail": err.to_string()})
        );
        return Ok(ExitCode::from(1));
    }
    Ok(ExitCode::SUCCESS)
}

#[derive(Args)]
struct VerifyArgs {
    /// Code file to check.
    #[arg(long)]
    code: Option<PathBuf>,
    /// Check the packet-code conditions: needs --packets, --t, --d.
    #[arg(long)]
    lemma1: bool,
    /// Packets to group the code's coordinates into (lemma1).
    #[arg(long)]
    packets: Option<usize>,
    #[arg(long)]
    t: Option<usize>,
    /// Distortion budget as p/q (lemma1).
    #[arg(long)]
    d: Option<String>,
    /// Check strong list decodability at this list size.
    #[arg(long)]
    lmds: Option<usize>,
    /// Check plain list decodability at this radius (with --list-size).
    #[arg(long)]
    list_radius: Option<usize>,
    #[arg(long)]
    list_size: Option<usize>,
    #[arg(long)]
    budget: Option<u64>,
    #[arg(long)]
    out: Option<PathBuf>,
    #[arg(long)]
    config: Option<PathBuf>,
}

fn run_verify(a: VerifyArgs) -> Result<ExitCode> {
    let cfg = FileConfig::load(&a.config)?;
    let budget = resolve_budget(a.budget, cfg.budget)?;
    let path = need(a.code.clone(), cfg.code.clone(), "code")?;
    let code = load_code(&path)?;

    let mut results: Vec<(String, bool, String)> = Vec::new();

    if a.lemma1 {
        let packets = need(a.packets, cfg.packets, "packets")?;
        let t = need(a.t, cfg.t, "t")?;
        let d = parse_rational(&need(a.d.clone(), cfg.d.clone(), "d")?)?;
        if packets == 0 || code.n() % packets != 0 {
            return Err(Error::Infeasible(format!(
                "cannot group {} coordinates into {packets} equal packets",
                code.n()
            )));
        }
        let len = code.n() / packets;
        let layout = PacketLayout::uniform(packets, len, code.field().order());
        let table = CodeTable::from_fn(layout, code.k(), budget, |msg| {
            let word = code.encode(msg)?;
            Ok(PacketSet::new(word.chunks(len).map(|c| c.to_vec()).collect()))
        })?;
        let report = check_vpec_conditions(&table, t, &d, budget)?;
        let detail = if report.holds() {
            format!(
                "packet distance {} >= {} and every reachable ball agrees on enough coordinates",
                report.packet_distance, report.required_distance
            )
        } else if !report.distance_ok {
            format!(
                "packet distance {} < required {}",
                report.packet_distance, report.required_distance
            )
        } else {
            let w = report.witness.as_ref().expect("agreement failure carries a witness");
            format!(
                "a received word reaches {} codewords agreeing on only {} coordinates: {:?}",
                w.ball_size, w.agreement, w.received.packets
            )
        };
        results.push((format!("lemma1 t={t} d={}", format_rational(&d)), report.holds(), detail));
    }

    if let Some(l) = a.lmds {
        match is_l_mds(&code, l, budget)? {
            None => results.push((
                format!("lmds l={l}"),
                true,
                "no ball at the strong radius holds more codewords than allowed".into(),
            )),
            Some(v) => results.push((
                format!("lmds l={l}"),
                false,
                format!(
                    "received {:?} has {} codewords within summed distance {}",
                    v.received,
                    v.codewords.len(),
                    v.sum_distance
                ),
            )),
        }
    }

    if let Some(tau) = a.list_radius {
        let l = need(a.list_size, None, "list-size")?;
        match is_list_decodable(&code, tau, l, budget)? {
            None => results.push((
                format!("list-decodable tau={tau} l={l}"),
                true,
                "every ball holds at most the allowed number of codewords".into(),
            )),
            Some(v) => results.push((
                format!("list-decodable tau={tau} l={l}"),
                false,
                format!(
                    "ball around {:?} holds {} codewords",
                    v.received,
                    v.codewords.len()
                ),
            )),
        }
    }

    if results.is_empty() {
        return Err(Error::Infeasible(
            "no property requested; use --lemma1, --lmds, or --list-radius".into(),
        ));
    }

    for (name, pass, detail) in &results {
        println!("{name}: {} ({detail})", if *pass { "pass" } else { "fail" });
    }

    if let Some(out) = a.out.or(cfg.out) {
        let effective = json!({
            "command": "verify", "code": path.display().to_string(),
            "budget": budget.enumeration,
        });
        let rows: Vec<Value> = results
            .iter()
            .map(|(name, pass, detail)| json!({"property": name, "pass": pass, "detail": detail}))
            .collect();
        write_file(&out, &json_with_config(json!({ "results": rows }), effective))?;
    }

    if results.iter().all(|(_, pass, _)| *pass) {
        Ok(ExitCode::SUCCESS)
    } else {
        Ok(ExitCode::from(1))
    }
}

#[derive(Args)]
struct SearchArgs {
    #[arg(long)]
    n: Option<usize>,
    #[arg(long)]
    k: Option<usize>,
    #[arg(long)]
    l: Option<usize>,
    /// Field order; prime powers are factored automatically.
    #[arg(long)]
    q: Option<u32>,
    #[arg(long)]
    seed: Option<u64>,
    #[arg(long)]
    max_iters: Option<u64>,
    #[arg(long)]
    budget: Option<u64>,
    #[arg(long)]
    out: Option<PathBuf>,
    #[arg(long)]
    config: Option<PathBuf>,
}

/// Factors a prime power q = p^m; anything else is infeasible.
fn factor_order(q: u32) -> Result<(u32, u32)> {
    if q < 2 {
        return Err(Error::Infeasible("field order must be at least 2".into()));
    }
    let mut p: u32 = 2;
    while (p as u64) * (p as u64) <= q as u64 {
        if q % p == 0 {
            let (mut rest, mut m) = (q, 0);
            while rest % p == 0 {
                rest /= p;
                m += 1;
            }
            if rest != 1 {
                return Err(Error::Infeasible(format!("{q} is not a prime power")));
            }
            return Ok((p, m));
        }
        p += 1;
    }
    Ok((q, 1))
}

fn run_search(a: SearchArgs) -> Result<ExitCode> {
    let cfg = FileConfig::load(&a.config)?;
    let n = need(a.n, cfg.n, "n")?;
    let k = need(a.k, cfg.k, "k")?;
    let l = need(a.l, cfg.l.as_ref().and_then(|v| v.first().copied()), "l")?;
    let q = need(a.q, cfg.q, "q")?;
    let seed = pick(a.seed, cfg.seed, 1);
    let max_iters = pick(a.max_iters, cfg.max_iters, 10_000);
    let budget = resolve_budget(a.budget, cfg.budget)?;
    let out = pick(
        a.out,
        cfg.out,
        PathBuf::from(format!("lmds_n{n}_k{k}_l{l}_q{q}.json")),
    );

    let (p, m) = factor_order(q)?;
    let field = field_build(p, m)?;
    let outcome = search_l_mds(&field, n, k, l, seed, max_iters, budget)?;
    let file = SearchFile::new(p, m, n, k, &outcome.params, &outcome.report, seed)?;
    let effective = json!({
        "command": "search-lmds", "n": n, "k": k, "l": l, "q": q,
        "seed": seed, "max_iters": max_iters, "budget": budget.enumeration,
        "out": out.display().to_string(),
    });
    let content = json_with_config(serde_json::to_value(&file).expect("plain data"), effective);
    write_file(&out, &content)?;
    println!(
        "found parameters after {} candidates (min distance {})",
        file.verification.iterations, file.verification.min_distance
    );
    Ok(ExitCode::SUCCESS)
}

#[derive(Args)]
struct DecodeArgs {
    /// rep or lmds.
    #[arg(long)]
    construction: Option<String>,
    #[arg(long)]
    t: Option<usize>,
    #[arg(long)]
    s: Option<usize>,
    #[arg(long)]
    q: Option<u32>,
    #[arg(long)]
    rounds: Option<usize>,
    #[arg(long)]
    code: Option<PathBuf>,
    #[arg(long)]
    l: Option<usize>,
    /// Received payload: {"packets": [[..]]} for rep, {"array": [[..]]}
    /// for lmds.
    #[arg(long)]
    input: Option<PathBuf>,
    #[arg(long)]
    budget: Option<u64>,
    #[arg(long)]
    out: Option<PathBuf>,
    #[arg(long)]
    config: Option<PathBuf>,
}

fn run_decode(a: DecodeArgs) -> Result<ExitCode> {
    let cfg = FileConfig::load(&a.config)?;
    let construction = need(a.construction.clone(), cfg.construction.clone(), "construction")?;
    let input = need(a.input.clone(), cfg.input.clone(), "input")?;
    let budget = resolve_budget(a.budget, cfg.budget)?;
    let out = pick(a.out.clone(), cfg.out.clone(), PathBuf::from("decoded.json"));
    let text = fs::read_to_string(&input)?;

    let (body, detail) = match construction.as_str() {
        "rep" => {
            let t = need(a.t, cfg.t, "t")?;
            let s = need(a.s, cfg.s, "s")?;
            let q = need(a.q, cfg.q, "q")?;
            let rounds = pick(a.rounds, cfg.rounds, 1);
            let payload: PacketsPayload = payload_from_json(&text)?;
            let received = PacketSet::new(payload.packets);
            let word = if rounds == 1 {
                RepVpecCode::new(t, s, q)?.decode(&received)?
            } else {
                RepVpecCode::new(t, s, q)?.batched(rounds)?.decode(&received)?
            };
            (
                json!({ "word": word }),
                json!({"t": t, "s": s, "q": q, "rounds": rounds}),
            )
        }
        "lmds" => {
            let t = need(a.t, cfg.t, "t")?;
            let l = need(a.l, cfg.l.as_ref().and_then(|v| v.first().copied()), "l")?;
            let path = need(a.code.clone(), cfg.code.clone(), "code")?;
            let base = load_code(&path)?;
            let code = LmdsVpecCode::build(base, t, l, budget)?;
            let payload: ArrayPayload = payload_from_json(&text)?;
            let received = packetize(&payload.array)?;
            let outcome = code.decode_detailed(&received)?;
            (
                json!({
                    "word": outcome.word,
                    "erased_columns": outcome.erased_columns,
                    "membership": outcome.membership,
                    "empty_list": outcome.empty_list,
                }),
                json!({"t": t, "l": l, "code": path.display().to_string()}),
            )
        }
        other => {
            return Err(Error::Infeasible(format!(
                "unknown construction {other:?}; use rep or lmds"
            )))
        }
    };

    let effective = json!({
        "command": "decode", "construction": construction, "parameters": detail,
        "input": input.display().to_string(), "out": out.display().to_string(),
    });
    write_file(&out, &json_with_config(body, effective))?;
    Ok(ExitCode::SUCCESS)
}

#[derive(Args)]
struct FigureArgs {
    /// 1, 2, or 3.
    #[arg(long)]
    id: u32,
    #[arg(long)]
    out_dir: Option<PathBuf>,
    #[arg(long)]
    config: Option<PathBuf>,
}

fn panel(
    dir: &Path,
    file: &str,
    n: usize,
    t: usize,
    ls: &[usize],
    keep: &[&str],
) -> Result<()> {
    let conv = converse_curves(n, t)?;
    let ach = achievable_curves(n, t, None, ls)?;
    let mut curves = conv.curves;
    curves.extend(ach.curves);
    curves.retain(|c| keep.contains(&c.name.as_str()));
    let effective = json!({"command": "figure", "panel": file, "n": n, "t": t, "l": ls});
    let comments = vec![format!("effective config: {effective}")];
    write_file(&dir.join(file), &curves_to_csv(&comments, &curves))
}

fn asymptotic_panel(dir: &Path, file: &str, theta: &Rational, ls: &[usize]) -> Result<()> {
    let base = asymptotic_curves(theta, ls[0])?;
    let mut curves = vec![
        NamedCurve {
            name: "converse".into(),
            note: None,
            curve: base.converse.clone(),
        },
        NamedCurve {
            name: "mds".into(),
            note: None,
            curve: base.mds.clone(),
        },
    ];
    for &l in ls {
        let a = asymptotic_curves(theta, l)?;
        curves.push(NamedCurve {
            name: format!("lmds_l{l}"),
            note: None,
            curve: RdCurve::new(vec![rd(a.lmds_point.r, a.lmds_point.d)])?,
        });
    }
    let effective = json!({
        "command": "figure", "panel": file,
        "theta": format_rational(theta), "l": ls,
        "overall_rate": true,
    });
    let comments = vec![
        format!("effective config: {effective}"),
        "rates are overall (summed per-packet) rates".into(),
        "the polytope line's distortion diverges in this regime".into(),
    ];
    write_file(&dir.join(file), &curves_to_csv(&comments, &curves))
}

fn run_figure(a: FigureArgs) -> Result<ExitCode> {
    let cfg = FileConfig::load(&a.config)?;
    let dir = pick(a.out_dir, cfg.out_dir, PathBuf::from("."));
    fs::create_dir_all(&dir)?;
    let fig1_keep = ["converse", "converse_singleton", "mds", "polytope", "cons2"];
    match a.id {
        1 => {
            panel(&dir, "figure1_n3_t1.csv", 3, 1, &[], &fig1_keep)?;
            panel(&dir, "figure1_n5_t2.csv", 5, 2, &[], &fig1_keep)?;
        }
        2 => {
            panel(
                &dir,
                "figure2_n128_t18.csv",
                128,
                18,
                &[2, 3],
                &["converse", "mds", "polytope", "cons1_l2", "cons1_l3", "cons1"],
            )?;
        }
        3 => {
            asymptotic_panel(&dir, "figure3_theta_1_10.csv", &vpec::ratio::rat(1, 10), &[2, 3])?;
            asymptotic_panel(&dir, "figure3_theta_1_20.csv", &vpec::ratio::rat(1, 20), &[2, 3])?;
        }
        other => {
            return Err(Error::Infeasible(format!(
                "unknown figure id {other}; use 1, 2, or 3"
            )))
        }
    }
    Ok(ExitCode::SUCCESS)
}
