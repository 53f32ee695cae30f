//! The `modpoly` command line.

use std::ffi::OsString;
use std::io::Write;
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand, ValueEnum};
use rayon::prelude::*;
use serde_json::{json, Value};
use sha2::{Digest, Sha256};

use crate::diagram::Diagram;
use crate::error::{Error, Result};
use crate::matrep::ModMatrixRep;
use crate::polytopality::{self, parse_word, Guards, Verdict};
use crate::toroids::{self, classify_all, TypeVector};

pub const EXIT_OK: i32 = 0;
pub const EXIT_NEGATIVE: i32 = 1;
pub const EXIT_PARSE: i32 = 2;
pub const EXIT_GUARD: i32 = 3;

/// Order guard applied unless `--long` or `--guard-order` is given.
pub const DEFAULT_ORDER_GUARD: u128 = 1_000_000_000;

#[derive(Debug, Parser)]
#[command(name = "modpoly", version, about = "Modular reductions of crystallographic string Coxeter groups")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Decide whether the reduced group is a string C-group.
    Verify(Common),
    /// Classify every maximal spherical or Euclidean window.
    Classify(Common),
    /// Verify the subgroup generated by words in the generators.
    Subgroup(Common),
    /// Recompute the bundled published results.
    Reproduce(Common),
    /// Parse a diagram and print its Cartan data.
    Parse(Common),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Text,
    Json,
}

#[derive(Debug, Clone, Args)]
pub struct Common {
    /// Diagram such as "1 - 2 - 1".
    #[arg(short = 'd', long = "diagram", conflicts_with = "file")]
    pub diagram: Option<String>,
    /// File with one diagram per line.
    #[arg(short = 'f', long = "file")]
    pub file: Option<PathBuf>,
    #[arg(short = 'm', long = "mod")]
    pub modulus: Option<u64>,
    /// Inclusive modulus range `A..B`.
    #[arg(long = "mod-range", conflicts_with = "modulus")]
    pub mod_range: Option<String>,
    #[arg(long, value_enum, default_value = "text")]
    pub format: Format,
    /// Lift the default order guard.
    #[arg(long)]
    pub long: bool,
    #[arg(long = "guard-order")]
    pub guard_order: Option<u128>,
    #[arg(long = "guard-orbit")]
    pub guard_orbit: Option<usize>,
    #[arg(long)]
    pub cache: Option<PathBuf>,
    /// Generator word such as "2 1 2"; repeat once per generator.
    #[arg(short = 'w', long = "word")]
    pub words: Vec<String>,
    /// Also print the reduced generating matrices.
    #[arg(long = "dump-rep")]
    pub dump_rep: bool,
}

impl Common {
    pub fn guards(&self) -> Guards {
        let mut g = Guards::default();
        g.order = match (self.guard_order, self.long) {
            (Some(n), _) => Some(n),
            (None, true) => None,
            (None, false) => Some(DEFAULT_ORDER_GUARD),
        };
        if let Some(o) = self.guard_orbit {
            g.orbit = o;
        }
        g
    }

    fn diagrams(&self) -> Result<Vec<Diagram>> {
        match (&self.diagram, &self.file) {
            (Some(d), _) => Ok(vec![Diagram::parse(d)?]),
            (None, Some(path)) => {
                let body = std::fs::read_to_string(path)
                    .map_err(|e| Error::InvalidDiagram(format!("{}: {e}", path.display())))?;
                Diagram::parse_lines(&body)
            }
            (None, None) => Err(Error::InvalidDiagram("no diagram given (use -d or -f)".into())),
        }
    }

    fn moduli(&self) -> Result<Vec<u64>> {
        let list = match (self.modulus, &self.mod_range) {
            (Some(m), _) => vec![m],
            (None, Some(r)) => parse_range(r)?,
            (None, None) => return Err(Error::InvalidDiagram("no modulus given (use -m or --mod-range)".into())),
        };
        match list.iter().find(|&&m| m < 2) {
            Some(&m) => Err(Error::InvalidModulus(m)),
            None => Ok(list),
        }
    }

    fn cache_dir(&self) -> Option<PathBuf> {
        std::env::var_os("MODPOLY_CACHE").map(PathBuf::from).or_else(|| self.cache.clone())
    }
}

fn parse_range(text: &str) -> Result<Vec<u64>> {
    let bad = || Error::InvalidDiagram(format!("modulus range {text:?} is not of the form A..B"));
    let (a, b) = text.split_once("..").ok_or_else(bad)?;
    let a: u64 = a.trim().parse().map_err(|_| bad())?;
    let b: u64 = b.trim().parse().map_err(|_| bad())?;
    if a > b {
        return Err(bad());
    }
    Ok((a..=b).collect())
}

fn exit_for(e: &Error) -> i32 {
    if e.is_guard() {
        EXIT_GUARD
    } else {
        EXIT_PARSE
    }
}

/// One computed unit of output.
struct Unit {
    json: Value,
    text: String,
    status: i32,
}

impl Unit {
    fn to_value(&self) -> Value {
        json!({ "json": self.json, "text": self.text, "status": self.status })
    }

    fn from_value(v: &Value) -> Option<Unit> {
        Some(Unit {
            json: v.get("json")?.clone(),
            text: v.get("text")?.as_str()?.to_string(),
            status: i32::try_from(v.get("status")?.as_i64()?).ok()?,
        })
    }
}

fn cache_key(parts: &[String]) -> String {
    let mut h = Sha256::new();
    for p in parts {
        h.update(p.as_bytes());
        h.update([0u8]);
    }
    hex::encode(h.finalize())
}

fn cached(dir: Option<&Path>, parts: &[String], compute: impl FnOnce() -> Result<Unit>) -> Result<Unit> {
    let Some(dir) = dir else { return compute() };
    let path = dir.join(format!("{}.json", cache_key(parts)));
    if let Some(unit) = std::fs::read_to_string(&path)
        .ok()
        .and_then(|s| serde_json::from_str::<Value>(&s).ok())
        .and_then(|v| Unit::from_value(&v))
    {
        return Ok(unit);
    }
    let unit = compute()?;
    if std::fs::create_dir_all(dir).is_ok() {
        let _ = std::fs::write(&path, unit.to_value().to_string());
    }
    Ok(unit)
}

fn guard_parts(g: Guards) -> String {
    format!("order={:?};orbit={}", g.order, g.orbit)
}

fn verdict_status(v: Verdict) -> i32 {
    if v == Verdict::StringCGroup {
        EXIT_OK
    } else {
        EXIT_NEGATIVE
    }
}

fn verify_unit(d: &Diagram, m: u64, c: &Common) -> Result<Unit> {
    let guards = c.guards();
    let parts = vec!["verify".into(), d.to_string(), m.to_string(), guard_parts(guards), c.dump_rep.to_string()];
    cached(c.cache_dir().as_deref(), &parts, || {
        let r = polytopality::verify(d, m, guards)?;
        let mut json = r.to_json();
        let mut text = r.to_text();
        if c.dump_rep {
            let rep = ModMatrixRep::new(d, m)?;
            json["rep"] = rep.to_json();
            text.push_str(&format!("rep:      {}\n", rep.to_json()));
        }
        Ok(Unit { json, text, status: verdict_status(r.verdict) })
    })
}

fn classify_unit(d: &Diagram, m: u64, c: &Common) -> Result<Unit> {
    let parts = vec!["classify".into(), d.to_string(), m.to_string()];
    cached(c.cache_dir().as_deref(), &parts, || {
        let sections = classify_all(d, m)?;
        let json = json!({
            "diagram": d.to_string(),
            "modulus": m,
            "sections": sections.iter().map(|s| s.to_json()).collect::<Vec<_>>(),
        });
        let mut text = format!("{d} mod {m}\n");
        for s in &sections {
            text.push_str(&format!("  {s}\n"));
        }
        let status = if sections.iter().all(|s| s.consistent()) { EXIT_OK } else { EXIT_NEGATIVE };
        Ok(Unit { json, text, status })
    })
}

fn subgroup_unit(d: &Diagram, m: u64, c: &Common, words: &[Vec<usize>]) -> Result<Unit> {
    let guards = c.guards();
    let mut parts = vec!["subgroup".into(), d.to_string(), m.to_string(), guard_parts(guards)];
    parts.extend(c.words.iter().cloned());
    cached(c.cache_dir().as_deref(), &parts, || {
        let r = polytopality::verify_subgroup(d, m, words, guards)?;
        Ok(Unit { json: r.to_json(), text: r.to_text(), status: verdict_status(r.report.verdict) })
    })
}

fn parse_unit(d: &Diagram, c: &Common) -> Result<Unit> {
    let cartan = d.cartan().rows();
    let periods: Vec<String> = d.branch_periods().iter().map(|p| p.to_string()).collect();
    let parity: Vec<String> = d.node_parity().iter().map(|p| p.to_string()).collect();
    let mut json = json!({
        "diagram": d.to_string(),
        "rank": d.rank(),
        "labels": d.labels(),
        "cartan": cartan,
        "periods": periods,
        "parity": parity,
    });
    let mut text = format!(
        "diagram: {d}\nrank:    {}\nperiods: {}\nparity:  {}\ncartan:\n",
        d.rank(),
        periods.join(" "),
        parity.join(" ")
    );
    for row in &cartan {
        let r: Vec<String> = row.iter().map(|x| format!("{x:>3}")).collect();
        text.push_str(&format!("  {}\n", r.join("")));
    }
    if c.dump_rep {
        let mut reps = Vec::new();
        for m in c.moduli()? {
            let rep = ModMatrixRep::new(d, m)?;
            text.push_str(&format!("rep mod {m}: {}\n", rep.to_json()));
            reps.push(rep.to_json());
        }
        json["reps"] = json!(reps);
    }
    Ok(Unit { json, text, status: EXIT_OK })
}

fn emit(out: &mut dyn Write, format: Format, units: &[Unit]) -> std::io::Result<()> {
    match format {
        Format::Json => {
            let v = if units.len() == 1 {
                units[0].json.clone()
            } else {
                Value::Array(units.iter().map(|u| u.json.clone()).collect())
            };
            writeln!(out, "{}", serde_json::to_string_pretty(&v).expect("json"))
        }
        Format::Text => {
            for u in units {
                write!(out, "{}", u.text)?;
            }
            Ok(())
        }
    }
}

fn run_units(cmd: &Command, c: &Common) -> Result<Vec<Unit>> {
    let diagrams = c.diagrams()?;
    let mut units = Vec::new();
    match cmd {
        Command::Parse(_) => {
            for d in &diagrams {
                units.push(parse_unit(d, c)?);
            }
        }
        Command::Subgroup(_) => {
            let words: Vec<Vec<usize>> = c.words.iter().map(|w| parse_word(w)).collect::<Result<_>>()?;
            if words.is_empty() {
                return Err(Error::InvalidWord("no words given (use -w)".into()));
            }
            for d in &diagrams {
                for m in c.moduli()? {
                    units.push(subgroup_unit(d, m, c, &words)?);
                }
            }
        }
        Command::Verify(_) | Command::Classify(_) => {
            for d in &diagrams {
                for m in c.moduli()? {
                    units.push(match cmd {
                        Command::Verify(_) => verify_unit(d, m, c)?,
                        _ => classify_unit(d, m, c)?,
                    });
                }
            }
        }
        Command::Reproduce(_) => unreachable!("handled separately"),
    }
    Ok(units)
}

/// Runs the command line and returns the process exit code.
pub fn run<I, T>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_PARSE } else { EXIT_OK };
            let _ = if e.use_stderr() { write!(err, "{e}") } else { write!(out, "{e}") };
            return code;
        }
    };
    let common = match &cli.command {
        Command::Verify(c) | Command::Classify(c) | Command::Subgroup(c) | Command::Reproduce(c) | Command::Parse(c) => c,
    };
    if let Command::Reproduce(c) = &cli.command {
        return reproduce(c, out);
    }
    match run_units(&cli.command, common) {
        Ok(units) => {
            let _ = emit(out, common.format, &units);
            units.iter().map(|u| u.status).max().unwrap_or(EXIT_OK)
        }
        Err(e) => {
            let _ = writeln!(err, "error: {e}");
            exit_for(&e)
        }
    }
}

/// What a bundled case expects.
#[derive(Debug, Clone)]
pub enum Expect {
    Verify { order: &'static str, verdict: Verdict, schlafli: &'static [u64] },
    Subgroup { words: &'static [&'static str], index: &'static str, order: &'static str },
    Type { start: usize, end: usize, q: &'static [u64] },
}

/// A published computational result.
#[derive(Debug, Clone)]
pub struct KnownCase {
    pub id: &'static str,
    pub diagram: &'static str,
    pub modulus: u64,
    pub expect: Expect,
    pub note: &'static str,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum CaseStatus {
    Pass,
    Fail(String),
    Skipped,
}

const H_WORDS: &[&str] = &["1", "0", "2 1 2", "3", "4", "5"];
const K_WORDS: &[&str] = &["2", "1", "0", "3 2 1 2 3", "4", "5"];

pub fn registry() -> Vec<KnownCase> {
    use Expect::*;
    use Verdict::*;
    let v = |id, diagram, modulus, order, verdict, schlafli, note| KnownCase {
        id,
        diagram,
        modulus,
        expect: Verify { order, verdict, schlafli },
        note,
    };
    let t = |id, diagram, modulus, start, end, q, note| KnownCase {
        id,
        diagram,
        modulus,
        expect: Type { start, end, q },
        note,
    };
    let s = |id, diagram, modulus, words, index, order, note| KnownCase {
        id,
        diagram,
        modulus,
        expect: Subgroup { words, index, order },
        note,
    };
    vec![
        v("square-121-mod4", "1-2-1", 4, "32", StringCGroup, &[4, 4], "has order 32, 128 and 64"),
        v("square-124-mod4", "1-2-4", 4, "128", StringCGroup, &[4, 4], "has order 32, 128 and 64"),
        v("square-212-mod4", "2-1-2", 4, "64", StringCGroup, &[4, 4], "has order 32, 128 and 64"),
        v("cubic464-mod2", "2-1-3-6", 2, "96", StringCGroup, &[4, 3, 4], "[4,6,4] example modulo 2"),
        v("cubic464-mod3", "2-1-3-6", 3, "5184", StringCGroup, &[4, 6, 4], "[4,6,4] example modulo 3"),
        v("cubic464-mod6", "2-1-3-6", 6, "248832", IntersectionFails, &[4, 6, 4], "the intersection condition fails"),
        v("rank3-right-mod6", "1-4=4", 6, "", IntersectionFails, &[], "fails precisely when the modulus d = 2s"),
        v("rank3-right-mod10", "1-4=4", 10, "", IntersectionFails, &[], "fails precisely when the modulus d = 2s"),
        v("rank3-left-mod6", "4-1=1", 6, "", StringCGroup, &[6, 3], "type {d, d/2} for even d"),
        v("hex363-mod4", "3-3-1-1", 4, "7680", StringCGroup, &[3, 6, 3], "{3,6}_(4,0), {6,3}_(4,0)"),
        t("hex363-facet-mod4", "3-3-1-1", 4, 0, 2, &[4, 0], "{3,6}_(4,0)"),
        t("hex363-vertex-mod4", "3-3-1-1", 4, 1, 3, &[4, 0], "{6,3}_(4,0)"),
        t("hex363-vertex-mod6", "3-3-1-1", 6, 1, 3, &[2, 2], "r = (d/3, d/3) when 3 | d"),
        t("hex363-vertex-mod9", "3-3-1-1", 9, 1, 3, &[3, 3], "r = (d/3, d/3) when 3 | d"),
        v("rank5-a-mod4", "1-2-2-4-4", 4, "589824", StringCGroup, &[4, 3, 4, 3], "g = 2^16 3^2"),
        v("rank5-b-mod4", "1-2-2-1-1", 4, "589824", StringCGroup, &[4, 3, 4, 3], "g = 2^16 3^2"),
        v("rank5-c-mod4", "2-1-1-2-2", 4, "2359296", StringCGroup, &[4, 3, 4, 3], "4g"),
        v("rank5-d-mod4", "4-2-2-1-1", 4, "9437184", StringCGroup, &[4, 3, 4, 3], "order 16g"),
        t("rank5-d-facet-mod4", "4-2-2-1-1", 4, 0, 3, &[4, 4, 0], "{4,3,4}_(4,4,0)"),
        v("rank5-a-mod2", "1-2-2-4-4", 2, "576", NotSGGI, &[2, 3, 4, 3], "r_0 = e (mod 2)"),
        v("rank5-b-mod2", "1-2-2-1-1", 2, "576", NotSGGI, &[2, 3, 4, 3], "r_0 = e (mod 2)"),
        v("rank5-c-mod2", "2-1-1-2-2", 2, "2304", StringCGroup, &[4, 3, 4, 3], "order 2304"),
        v("rank5-d-mod2", "4-2-2-1-1", 2, "9216", StringCGroup, &[4, 3, 4, 3], "order 9216"),
        v("rank5-a-mod3", "1-2-2-4-4", 3, "103680", StringCGroup, &[4, 3, 4, 3], "p^4 (p^4 - 1)(p^2 - 1), doubled"),
        v("rank5-a-mod5", "1-2-2-4-4", 5, "18720000", StringCGroup, &[4, 3, 4, 3], "O(5,p,0) for p = -3 mod 8"),
        v("rank6-G4-a", "1-1-2-2-2-2", 4, "3019898880", StringCGroup, &[3, 4, 3, 3, 3], "2^26 3^2 5"),
        v("rank6-G4-b", "2-2-1-1-1-1", 4, "3019898880", StringCGroup, &[3, 4, 3, 3, 3], "2^26 3^2 5"),
        s("rank6-H4", "2-2-1-1-1-1", 4, H_WORDS, "5", "603979776", "index 5 in G^4"),
        s("rank6-K4", "1-1-2-2-2-2", 4, K_WORDS, "10", "301989888", "index 10"),
        v("rank6-K4-c", "4-2-2-2-1-1", 4, "4831838208", StringCGroup, &[4, 3, 3, 4, 3], "(unexpected) order 2^29 3^2"),
        v("rank6-K4-b", "1-2-2-2-1-1", 4, "", IntersectionFails, &[4, 3, 3, 4, 3], "fails for diagrams (b)(d)"),
        v("rank6-K4-d", "1-2-2-2-4-4", 4, "", IntersectionFails, &[4, 3, 3, 4, 3], "fails for diagrams (b)(d)"),
        v("rank6-K6-b", "1-2-2-2-1-1", 6, "", IntersectionFails, &[4, 3, 3, 4, 3], "fails for diagrams (b)(d)"),
        v("rank6-K6-d", "1-2-2-2-4-4", 6, "", IntersectionFails, &[4, 3, 3, 4, 3], "fails for diagrams (b)(d)"),
        v("rank6-G3", "1-1-2-2-2-2", 3, "24261120", StringCGroup, &[3, 4, 3, 3, 3], "O(6,3,+1)"),
        s("rank6-H3", "2-2-1-1-1-1", 3, H_WORDS, "1", "24261120", "indices collapse to 1"),
        s("rank6-K3", "1-1-2-2-2-2", 3, K_WORDS, "1", "24261120", "indices collapse to 1"),
    ]
}

fn mismatch(what: &str, want: &str, got: &str) -> Option<String> {
    (want != got).then(|| format!("{what}: expected {want}, got {got}"))
}

/// Runs one case; guard overruns are reported as skipped.
pub fn run_case(case: &KnownCase, guards: Guards) -> CaseStatus {
    let outcome = (|| -> Result<Vec<String>> {
        let d = Diagram::parse(case.diagram)?;
        let mut diffs = Vec::new();
        match &case.expect {
            Expect::Verify { order, verdict, schlafli } => {
                let r = polytopality::verify(&d, case.modulus, guards)?;
                diffs.extend(mismatch("verdict", verdict.as_str(), r.verdict.as_str()));
                if !order.is_empty() {
                    diffs.extend(mismatch("order", order, &r.order.to_string()));
                }
                if !schlafli.is_empty() {
                    diffs.extend(mismatch("schlafli", &format!("{schlafli:?}"), &format!("{:?}", r.schlafli)));
                }
            }
            Expect::Subgroup { words, index, order } => {
                let ws: Vec<Vec<usize>> = words.iter().map(|w| parse_word(w)).collect::<Result<_>>()?;
                let r = polytopality::verify_subgroup(&d, case.modulus, &ws, guards)?;
                diffs.extend(mismatch("verdict", "StringCGroup", r.report.verdict.as_str()));
                let got_index = r.index.map_or("-".to_string(), |i| i.to_string());
                diffs.extend(mismatch("index", index, &got_index));
                diffs.extend(mismatch("order", order, &r.report.order.to_string()));
            }
            Expect::Type { start, end, q } => {
                let c = toroids::classify_euclidean(&d, *start, *end, case.modulus)?;
                let got = c.measured_q().map(|t: TypeVector| t.entries());
                diffs.extend(mismatch("type vector", &format!("{:?}", Some(q.to_vec())), &format!("{got:?}")));
            }
        }
        Ok(diffs)
    })();
    match outcome {
        Ok(d) if d.is_empty() => CaseStatus::Pass,
        Ok(d) => CaseStatus::Fail(d.join("; ")),
        Err(e) if e.is_guard() => CaseStatus::Skipped,
        Err(e) => CaseStatus::Fail(e.to_string()),
    }
}

pub fn run_registry(cases: &[KnownCase], guards: Guards) -> Vec<(&'static str, CaseStatus)> {
    let mut results: Vec<_> = cases.par_iter().map(|c| (c.id, run_case(c, guards))).collect();
    results.sort_by(|a, b| a.0.cmp(b.0));
    results
}

fn reproduce(c: &Common, out: &mut dyn Write) -> i32 {
    let cases = registry();
    let results = run_registry(&cases, c.guards());
    let label = |s: &CaseStatus| match s {
        CaseStatus::Pass => "PASS",
        CaseStatus::Fail(_) => "FAIL",
        CaseStatus::Skipped => "SKIPPED(long)",
    };
    let _ = match c.format {
        Format::Json => {
            let rows: Vec<Value> = results
                .iter()
                .map(|(id, s)| {
                    let case = cases.iter().find(|x| x.id == *id).expect("case");
                    let mut v = json!({ "id": id, "status": label(s), "note": case.note });
                    if let CaseStatus::Fail(d) = s {
                        v["diff"] = json!(d);
                    }
                    v
                })
                .collect();
            writeln!(out, "{}", serde_json::to_string_pretty(&rows).expect("json"))
        }
        Format::Text => results.iter().try_for_each(|(id, s)| match s {
            CaseStatus::Fail(d) => writeln!(out, "{:<14} {id}: {d}", label(s)),
            _ => writeln!(out, "{:<14} {id}", label(s)),
        }),
    };
    if results.iter().any(|(_, s)| matches!(s, CaseStatus::Fail(_))) {
        EXIT_NEGATIVE
    } else {
        EXIT_OK
    }
}
