//! Deciding whether a reduced group is a string C-group.

use std::collections::HashMap;
use std::sync::{Arc, Mutex};

use num_bigint::BigUint;
use serde::Serialize;
use serde_json::{json, Value};

use crate::diagram::{Branch, Diagram, NodeParity, Period};
use crate::error::{Error, Result};
use crate::group::{ChainOptions, Element, StabChain};
use crate::matrep::{IntMatrixRep, ModMatrixRep};
use crate::matrix::{IntMatrix, ModMatrix};

/// Resource limits for group computations.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Guards {
    /// Largest group order a stabilizer chain may reach.
    pub order: Option<u128>,
    /// Largest coset orbit explored by an intersection computation.
    pub orbit: usize,
}

impl Default for Guards {
    fn default() -> Self {
        Guards { order: None, orbit: 20_000_000 }
    }
}

/// Generator collapses and rotation periods predicted from node parities.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct CollapsePrediction {
    /// `collapses[i]` is true when `r_i = e`.
    pub collapses: Vec<bool>,
    /// Predicted period of `r_{i} r_{i+1}` for each branch.
    pub periods: Vec<u64>,
}

pub fn predict_collapses(d: &Diagram, s: u64) -> CollapsePrediction {
    let parity = d.node_parity();
    let ee = |i: usize| parity[i] == NodeParity::EE;
    let collapses = (0..d.rank()).map(|i| s == 2 && ee(i)).collect();
    let periods = d
        .branch_periods()
        .into_iter()
        .enumerate()
        .map(|(i, p)| match p {
            Period::Finite(p) if s > 2 => u64::from(p),
            Period::Finite(3 | 6) => 3,
            Period::Finite(4) if ee(i) || ee(i + 1) => 2,
            Period::Finite(2) if ee(i) && ee(i + 1) => 1,
            Period::Finite(p) => u64::from(p),
            Period::Infinite if s % 2 == 1 => s,
            Period::Infinite if d.branches()[i] == Branch::Double => {
                if ee(i) && ee(i + 1) {
                    s / 2
                } else {
                    s
                }
            }
            Period::Infinite => {
                let small = if d.labels()[i] < d.labels()[i + 1] { i } else { i + 1 };
                if parity[small] == NodeParity::OE {
                    2 * s
                } else {
                    s
                }
            }
        })
        .collect();
    CollapsePrediction { collapses, periods }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
pub enum Verdict {
    StringCGroup,
    /// Some generator is trivial or not an involution.
    NotSGGI,
    IntersectionFails,
    /// Generators two or more apart fail to commute.
    Degenerate,
}

impl Verdict {
    pub fn as_str(self) -> &'static str {
        match self {
            Verdict::StringCGroup => "StringCGroup",
            Verdict::NotSGGI => "NotSGGI",
            Verdict::IntersectionFails => "IntersectionFails",
            Verdict::Degenerate => "Degenerate",
        }
    }
}

/// One piece of evidence in a report.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Check {
    pub name: String,
    pub pass: bool,
    pub witness: Option<String>,
}

impl Check {
    pub fn new(name: impl Into<String>, pass: bool, witness: Option<String>) -> Self {
        Check { name: name.into(), pass, witness }
    }
}

/// First failing instance of the intersection criterion: within the
/// generators `0..len`, `|<0..len-1> ∩ <k..len>|` exceeds `|<k..len-1>|`
/// by `index`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct IntersectionWitness {
    pub len: usize,
    pub k: usize,
    pub index: u128,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct VerificationReport {
    pub diagram: Option<String>,
    pub modulus: u64,
    pub generators: Vec<String>,
    pub verdict: Verdict,
    pub schlafli: Vec<u64>,
    pub order: BigUint,
    pub checks: Vec<Check>,
    pub witness: Option<IntersectionWitness>,
    pub notes: Vec<String>,
}

impl VerificationReport {
    pub fn is_string_c_group(&self) -> bool {
        self.verdict == Verdict::StringCGroup
    }

    pub fn to_json(&self) -> Value {
        let checks: Vec<Value> = self
            .checks
            .iter()
            .map(|c| {
                let mut v = json!({ "name": c.name, "pass": c.pass });
                if let Some(w) = &c.witness {
                    v["witness"] = json!(w);
                }
                v
            })
            .collect();
        let mut v = json!({
            "diagram": self.diagram,
            "modulus": self.modulus,
            "verdict": self.verdict.as_str(),
            "schlafli": self.schlafli,
            "order": self.order.to_string(),
            "checks": checks,
        });
        if let Some(w) = self.witness {
            v["intersection_index"] = json!(w.index.to_string());
        }
        if !self.notes.is_empty() {
            v["notes"] = json!(self.notes);
        }
        v
    }

    pub fn to_text(&self) -> String {
        let mut out = String::new();
        if let Some(d) = &self.diagram {
            out.push_str(&format!("diagram:  {d}\n"));
        }
        out.push_str(&format!("modulus:  {}\n", self.modulus));
        out.push_str(&format!("verdict:  {}\n", self.verdict.as_str()));
        let sch: Vec<String> = self.schlafli.iter().map(|p| p.to_string()).collect();
        out.push_str(&format!("schlafli: {{{}}}\n", sch.join(",")));
        out.push_str(&format!("order:    {}\n", self.order));
        if let Some(w) = self.witness {
            out.push_str(&format!("index:    {}\n", w.index));
        }
        for c in &self.checks {
            let mark = if c.pass { "ok  " } else { "FAIL" };
            match &c.witness {
                Some(w) => out.push_str(&format!("  [{mark}] {} ({w})\n", c.name)),
                None => out.push_str(&format!("  [{mark}] {}\n", c.name)),
            }
        }
        for n in &self.notes {
            out.push_str(&format!("  note: {n}\n"));
        }
        out
    }
}

/// Stabilizer chains for subgroups generated by subsets of a fixed list of
/// matrices, built on demand and cached.
pub struct Subgroups {
    gens: Vec<ModMatrix>,
    identity: ModMatrix,
    guards: Guards,
    cache: Mutex<HashMap<Vec<usize>, Arc<StabChain<ModMatrix>>>>,
}

impl Subgroups {
    pub fn new(gens: Vec<ModMatrix>, guards: Guards) -> Result<Self> {
        let first = gens.first().ok_or_else(|| Error::Internal("no generators".into()))?;
        let identity = ModMatrix::identity(first.dim(), first.modulus());
        Ok(Subgroups { gens, identity, guards, cache: Mutex::new(HashMap::new()) })
    }

    pub fn gens(&self) -> &[ModMatrix] {
        &self.gens
    }

    pub fn identity(&self) -> &ModMatrix {
        &self.identity
    }

    pub fn guards(&self) -> Guards {
        self.guards
    }

    /// Chain for `<gens[i] : i in idx>`.
    pub fn chain(&self, idx: &[usize]) -> Result<Arc<StabChain<ModMatrix>>> {
        let mut key = idx.to_vec();
        key.sort_unstable();
        key.dedup();
        if let Some(c) = self.cache.lock().expect("cache lock").get(&key) {
            return Ok(c.clone());
        }
        let gens: Vec<ModMatrix> = key.iter().map(|&i| self.gens[i]).collect();
        let opts = ChainOptions { order_limit: self.guards.order, ..Default::default() };
        let chain = Arc::new(StabChain::with_options(self.identity, &gens, &opts)?);
        self.cache.lock().expect("cache lock").insert(key, chain.clone());
        Ok(chain)
    }

    pub fn order(&self, idx: &[usize]) -> Result<u128> {
        Ok(self.chain(idx)?.order_u128())
    }

    pub fn intersection_order(&self, a: &[usize], b: &[usize]) -> Result<u128> {
        let (ca, cb) = (self.chain(a)?, self.chain(b)?);
        StabChain::intersection_order(&ca, &cb, self.guards.orbit)
    }

    /// First failure of the right-hand recursive intersection criterion over
    /// the generators listed in `order`.
    pub fn intersection_failure(&self, order: &[usize], checks: &mut Vec<Check>, names: &[String]) -> Result<Option<IntersectionWitness>> {
        for len in 2..=order.len() {
            let facet = &order[..len - 1];
            for k in 1..len {
                let tail = &order[k..len];
                let expected = self.order(&order[k..len - 1])?;
                let got = self.intersection_order(facet, tail)?;
                let name = format!(
                    "intersection <{}> & <{}>",
                    join_names(names, facet),
                    join_names(names, tail)
                );
                if got != expected {
                    let index = got / expected;
                    checks.push(Check::new(name, false, Some(format!("index {index}"))));
                    return Ok(Some(IntersectionWitness { len, k, index }));
                }
                checks.push(Check::new(name, true, None));
            }
        }
        Ok(None)
    }
}

fn join_names(names: &[String], idx: &[usize]) -> String {
    idx.iter().map(|&i| names[i].as_str()).collect::<Vec<_>>().join(",")
}

/// Verifies the generators `gens` (in string order) directly.
pub fn verify_gens(gens: &[ModMatrix], names: &[String], guards: Guards) -> Result<VerificationReport> {
    let sub = Subgroups::new(gens.to_vec(), guards)?;
    verify_in(&sub, names)
}

fn verify_in(sub: &Subgroups, names: &[String]) -> Result<VerificationReport> {
    let gens = sub.gens();
    let n = gens.len();
    let all: Vec<usize> = (0..n).collect();
    let order = sub.chain(&all)?.order();
    let modulus = u64::from(sub.identity().modulus());
    let mut checks = Vec::new();
    let mut verdict = Verdict::StringCGroup;

    for (i, g) in gens.iter().enumerate() {
        let name = format!("involution {}", names[i]);
        if g.is_identity() {
            checks.push(Check::new(name, false, Some(format!("{} = e", names[i]))));
            verdict = Verdict::NotSGGI;
        } else if !g.mul(g).is_identity() {
            let p = Element::period(g);
            checks.push(Check::new(name, false, Some(format!("{} has period {p}", names[i]))));
            verdict = Verdict::NotSGGI;
        } else {
            checks.push(Check::new(name, true, None));
        }
    }
    for i in 0..n {
        for j in i + 2..n {
            let ok = gens[i].mul(&gens[j]) == gens[j].mul(&gens[i]);
            let name = format!("commute {} {}", names[i], names[j]);
            checks.push(Check::new(name, ok, (!ok).then(|| "non-commuting".to_string())));
            if !ok && verdict == Verdict::StringCGroup {
                verdict = Verdict::Degenerate;
            }
        }
    }
    let schlafli: Vec<u64> =
        (1..n).map(|i| Element::period(&gens[i - 1].mul(&gens[i]))).collect();

    let mut witness = None;
    let mut notes = Vec::new();
    if verdict == Verdict::StringCGroup {
        witness = sub.intersection_failure(&all, &mut checks, names)?;
        if witness.is_some() {
            verdict = Verdict::IntersectionFails;
            let rev: Vec<usize> = all.iter().rev().copied().collect();
            let mut dual_checks = Vec::new();
            let dual = sub.intersection_failure(&rev, &mut dual_checks, names)?;
            checks.push(Check::new(
                "dual intersection criterion",
                dual.is_none(),
                dual.map(|w| format!("index {}", w.index)),
            ));
            if dual.is_none() {
                notes.push("left and right criteria disagree".into());
            }
        }
    }
    Ok(VerificationReport {
        diagram: None,
        modulus,
        generators: names.to_vec(),
        verdict,
        schlafli,
        order,
        checks,
        witness,
        notes,
    })
}

fn window_of(indices: &[usize]) -> Option<(usize, usize)> {
    let (&first, &last) = (indices.first()?, indices.last()?);
    (indices.windows(2).all(|w| w[1] == w[0] + 1)).then_some((first, last))
}

/// Verifies `<r_j : j in window>` for a representation, cross-checking
/// the collapse prediction when the representation carries a diagram.
pub fn verify_string_c_group(rep: &ModMatrixRep, window: &[usize], guards: Guards) -> Result<VerificationReport> {
    if window.is_empty() {
        return Err(Error::InvalidWindow("empty generator window".into()));
    }
    let gens = rep.select(window)?;
    let names: Vec<String> = window.iter().map(|i| format!("r{i}")).collect();
    let mut report = verify_gens(&gens, &names, guards)?;
    report.modulus = rep.modulus();
    if let (Some(d), Some((j, k))) = (rep.diagram(), window_of(window)) {
        let full = predict_collapses(d, rep.modulus());
        let collapses = full.collapses[j..=k].to_vec();
        let periods = full.periods[j..k].to_vec();
        let measured_collapse: Vec<bool> = gens.iter().map(|g| g.is_identity()).collect();
        let ok = collapses == measured_collapse && periods == report.schlafli;
        let witness = (!ok).then(|| format!("predicted periods {periods:?}, collapses {collapses:?}"));
        report.checks.push(Check::new("collapse prediction", ok, witness));
        report.diagram = Some(if j == 0 && k + 1 == d.rank() { d.to_string() } else { d.window(j, k)?.to_string() });
    }
    Ok(report)
}

/// Verifies the full group of a diagram modulo `d`.
pub fn verify(diagram: &Diagram, modulus: u64, guards: Guards) -> Result<VerificationReport> {
    let rep = ModMatrixRep::new(diagram, modulus)?;
    let all: Vec<usize> = (0..diagram.rank()).collect();
    verify_string_c_group(&rep, &all, guards)
}

/// Measured periods of consecutive rotations.
pub fn schlafli_type(rep: &ModMatrixRep, window: &[usize]) -> Result<Vec<u64>> {
    let gens = rep.select(window)?;
    Ok((1..gens.len()).map(|i| Element::period(&gens[i - 1].mul(&gens[i]))).collect())
}

/// Parses a whitespace-separated generator word such as `"2 1 2"`.
pub fn parse_word(text: &str) -> Result<Vec<usize>> {
    let word: Vec<usize> = text
        .split_whitespace()
        .map(|t| t.parse::<usize>().map_err(|_| Error::InvalidWord(text.to_string())))
        .collect::<Result<_>>()?;
    if word.is_empty() {
        return Err(Error::InvalidWord(text.to_string()));
    }
    Ok(word)
}

/// A subgroup generated by words in the standard generators, verified in
/// its own right and compared with the parent group.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SubgroupReport {
    pub words: Vec<Vec<usize>>,
    pub report: VerificationReport,
    pub parent_order: BigUint,
    /// `|G| / |H|`, when it is an integer.
    pub index: Option<BigUint>,
    pub derived: Option<Diagram>,
}

impl SubgroupReport {
    pub fn to_json(&self) -> Value {
        let mut v = self.report.to_json();
        let words: Vec<String> = self
            .words
            .iter()
            .map(|w| w.iter().map(|i| i.to_string()).collect::<Vec<_>>().join(" "))
            .collect();
        v["words"] = json!(words);
        v["parent_order"] = json!(self.parent_order.to_string());
        v["index"] = json!(self.index.as_ref().map(|i| i.to_string()));
        v["derived_diagram"] = json!(self.derived.as_ref().map(|d| d.to_string()));
        v
    }

    pub fn to_text(&self) -> String {
        let mut out = self.report.to_text();
        out.push_str(&format!("parent:   {}\n", self.parent_order));
        match &self.index {
            Some(i) => out.push_str(&format!("index:    {i}\n")),
            None => out.push_str("index:    not an integer\n"),
        }
        if let Some(d) = &self.derived {
            out.push_str(&format!("derived:  {d}\n"));
        }
        out
    }
}

fn check_word(word: &[usize], rank: usize) -> Result<()> {
    match word.iter().find(|&&i| i >= rank) {
        Some(i) => Err(Error::InvalidWord(format!("generator {i} out of range for rank {rank}"))),
        None if word.is_empty() => Err(Error::InvalidWord("empty word".into())),
        None => Ok(()),
    }
}

/// Diagram of the roots attached to palindromic words `u i u^-1`, read off
/// from the action of the derived reflections on those roots.
pub fn derived_diagram(d: &Diagram, words: &[Vec<usize>]) -> Result<Diagram> {
    let rep = IntMatrixRep::new(d);
    let mut roots = Vec::with_capacity(words.len());
    let mut refl = Vec::with_capacity(words.len());
    for w in words {
        check_word(w, d.rank())?;
        let l = w.len();
        if l % 2 == 0 || w.iter().ne(w.iter().rev()) {
            return Err(Error::InvalidWord(format!("{w:?} is not palindromic")));
        }
        let u = rep.word(&w[..l / 2]).unwrap_or_else(|_| IntMatrix::identity(d.rank()));
        roots.push(u.column(w[l / 2]));
        refl.push(rep.word(w)?);
    }
    let cartan = |k: usize, l: usize| -> Result<i64> {
        let img = refl[k].mul_vec(&roots[l]);
        let diff: Vec<i64> = img.iter().zip(&roots[l]).map(|(a, b)| a - b).collect();
        let pivot = roots[k].iter().position(|&x| x != 0).expect("nonzero root");
        let (num, den) = (diff[pivot], roots[k][pivot]);
        if num % den != 0 || diff.iter().zip(&roots[k]).any(|(&x, &y)| x * den != num * y) {
            return Err(Error::InvalidWord(format!("derived reflections {k} and {l} do not share a root system")));
        }
        Ok((num / den).abs())
    };
    let n = words.len();
    for k in 0..n {
        for l in k + 2..n {
            if cartan(k, l)? != 0 || cartan(l, k)? != 0 {
                return Err(Error::InvalidWord("derived diagram is not a string".into()));
            }
        }
    }
    let mut labels = vec![1u64];
    let mut branches = Vec::new();
    for k in 0..n.saturating_sub(1) {
        let cur = *labels.last().expect("nonempty");
        let (x, y) = (cartan(k, k + 1)?, cartan(k + 1, k)?);
        let (next, branch) = match (x, y) {
            (0, 0) => (cur, Branch::None),
            (2, 2) => (cur, Branch::Double),
            (x, 1) if x >= 1 => (cur * x as u64, Branch::Single),
            (1, y) => {
                let y = y as u64;
                if cur % y != 0 {
                    labels.iter_mut().for_each(|a| *a *= y);
                }
                (*labels.last().expect("nonempty") / y, Branch::Single)
            }
            _ => return Err(Error::InvalidWord(format!("unsupported Cartan pair ({x}, {y})"))),
        };
        labels.push(next);
        branches.push(branch);
    }
    Diagram::new(labels, branches)
}

/// Verifies the subgroup generated by `words` modulo `modulus`.
pub fn verify_subgroup(d: &Diagram, modulus: u64, words: &[Vec<usize>], guards: Guards) -> Result<SubgroupReport> {
    let rep = IntMatrixRep::new(d);
    let mut gens = Vec::with_capacity(words.len());
    for w in words {
        check_word(w, d.rank())?;
        gens.push(rep.word(w)?.reduce(modulus)?);
    }
    let names: Vec<String> = (0..words.len()).map(|i| format!("s{i}")).collect();
    let mut report = verify_gens(&gens, &names, guards)?;
    report.modulus = modulus;
    let parent_rep = ModMatrixRep::new(d, modulus)?;
    let all: Vec<usize> = (0..d.rank()).collect();
    let parent = Subgroups::new(parent_rep.select(&all)?, guards)?;
    let parent_order = parent.chain(&all)?.order();
    let index = (&parent_order % &report.order == BigUint::from(0u32)).then(|| &parent_order / &report.order);
    let derived = derived_diagram(d, words).ok();
    report.diagram = derived.as_ref().map(|x| x.to_string());
    Ok(SubgroupReport { words: words.to_vec(), report, parent_order, index, derived })
}
