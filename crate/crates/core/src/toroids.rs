//! Spherical and Euclidean sections of a reduced group: predicted and
//! measured structure, translation subgroups and the quotient criterion.

use std::fmt;

use rustc_hash::FxHashSet;
use serde::Serialize;
use serde_json::{json, Value};

use crate::diagram::{Diagram, NodeParity};
use crate::error::{Error, Result};
use crate::group::{enumerate_small, ChainOptions, Element, StabChain};
use crate::matrep::{is_int_transvection, radical_vector, IntMatrixRep, ModMatrixRep, RadicalVector};
use crate::matrix::{IntMatrix, ModMatrix};
use crate::patterns::{self, EuclideanKind, Family, SphericalKind, SphericalPattern};
use crate::polytopality::{self, Check, Guards, Verdict};

const POINT_GROUP_LIMIT: usize = 1 << 20;
const TRANSLATION_ENUM_LIMIT: usize = 1 << 22;

/// Type vector `(q^k, 0^(m-k))` of a toroid of affine dimension `m`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
pub struct TypeVector {
    pub q: u64,
    pub k: usize,
    pub m: usize,
}

impl TypeVector {
    pub fn new(q: u64, k: usize, m: usize) -> Self {
        TypeVector { q, k, m }
    }

    pub fn entries(&self) -> Vec<u64> {
        (0..self.m).map(|i| if i < self.k { self.q } else { 0 }).collect()
    }
}

impl fmt::Display for TypeVector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let e: Vec<String> = self.entries().iter().map(|x| x.to_string()).collect();
        write!(f, "({})", e.join(","))
    }
}

#[derive(Debug, Clone, Copy)]
enum ModulusRule {
    Odd,
    EvenAtLeast4,
    Even,
    Two,
    AtLeast3,
    /// `s > 2` and `3` does not divide `s`.
    CoprimeTo3,
    DivisibleBy3,
}

impl ModulusRule {
    fn holds(self, s: u64) -> bool {
        match self {
            ModulusRule::Odd => s % 2 == 1 && s >= 3,
            ModulusRule::EvenAtLeast4 => s.is_multiple_of(2) && s >= 4,
            ModulusRule::Even => s.is_multiple_of(2),
            ModulusRule::Two => s == 2,
            ModulusRule::AtLeast3 => s >= 3,
            ModulusRule::CoprimeTo3 => s > 2 && !s.is_multiple_of(3),
            ModulusRule::DivisibleBy3 => s.is_multiple_of(3),
        }
    }
}

#[derive(Debug, Clone, Copy)]
enum DimRule {
    Any,
    Odd,
    Even,
}

/// Constraint on the end nodes of a window read with its affine node first.
#[derive(Debug, Clone, Copy)]
enum NodeRule {
    Any,
    SomeEndOO,
    SomeEndOE,
    BothEndsOO,
    BothEndsOE,
    BothEndsEE,
    FirstOO,
    FirstOE,
    LastEE,
    LastOE,
    /// Cartan integer from the affine node outward is `±1 mod 3`.
    OuterUnitMod3,
    OuterZeroMod3,
}

#[derive(Debug, Clone, Copy)]
enum Shape {
    /// `(s, 0, ..., 0)`
    Full1,
    /// `(s/2, 0, ..., 0)`
    Half1,
    /// `(s/2, ..., s/2)`
    HalfAll,
    /// `(s, s, 0, ..., 0)`
    Full2,
    /// `(s/2, s/2, 0, ..., 0)`
    Half2,
    /// `(s/3, s/3)`
    Third2,
    /// `(2s)`
    Double1,
}

impl Shape {
    fn vector(self, s: u64, m: usize) -> TypeVector {
        match self {
            Shape::Full1 => TypeVector::new(s, 1, m),
            Shape::Half1 => TypeVector::new(s / 2, 1, m),
            Shape::HalfAll => TypeVector::new(s / 2, m, m),
            Shape::Full2 => TypeVector::new(s, 2, m),
            Shape::Half2 => TypeVector::new(s / 2, 2, m),
            Shape::Third2 => TypeVector::new(s / 3, 2, m),
            Shape::Double1 => TypeVector::new(2 * s, 1, m),
        }
    }
}

/// One row of the toroid tables: a basic system, a modulus condition and
/// end-node constraints determine the type vector.
#[derive(Debug, Clone, Copy)]
pub struct TableRow {
    pub id: &'static str,
    pub kind: EuclideanKind,
    modulus: ModulusRule,
    dim: DimRule,
    nodes: NodeRule,
    shape: Shape,
}

const fn row(id: &'static str, kind: EuclideanKind, modulus: ModulusRule, dim: DimRule, nodes: NodeRule, shape: Shape) -> TableRow {
    TableRow { id, kind, modulus, dim, nodes, shape }
}

pub static TABLE: &[TableRow] = {
    use DimRule as D;
    use EuclideanKind::*;
    use ModulusRule as M;
    use NodeRule as N;
    use Shape as S;
    &[
        row("cubic-2a-odd", CubicEnds2, M::Odd, D::Any, N::Any, S::Full1),
        row("cubic-2a-even-modd-oo", CubicEnds2, M::EvenAtLeast4, D::Odd, N::SomeEndOO, S::Full1),
        row("cubic-2a-even-modd-oe", CubicEnds2, M::EvenAtLeast4, D::Odd, N::BothEndsOE, S::HalfAll),
        row("cubic-2a-even-meven", CubicEnds2, M::EvenAtLeast4, D::Even, N::Any, S::HalfAll),
        row("cubic-2a-two", CubicEnds2, M::Two, D::Odd, N::BothEndsOO, S::Full1),
        row("cubic-a-odd", CubicEnds1, M::Odd, D::Any, N::Any, S::Full1),
        row("cubic-a-even-oe", CubicEnds1, M::EvenAtLeast4, D::Any, N::SomeEndOE, S::Full1),
        row("cubic-a-even-ee", CubicEnds1, M::EvenAtLeast4, D::Any, N::BothEndsEE, S::Half1),
        row("cubic-a-two", CubicEnds1, M::Two, D::Any, N::BothEndsOE, S::Full1),
        row("cubic-4a-odd", CubicEnds4, M::Odd, D::Any, N::Any, S::Full1),
        row("cubic-4a-even-ee", CubicEnds4, M::EvenAtLeast4, D::Any, N::LastEE, S::Full1),
        row("cubic-4a-even-oe", CubicEnds4, M::Even, D::Any, N::LastOE, S::Full2),
        row("f4-short-odd", F4Short, M::Odd, D::Any, N::Any, S::Full1),
        row("f4-short-even-oo", F4Short, M::EvenAtLeast4, D::Any, N::FirstOO, S::Full1),
        row("f4-short-even-oe", F4Short, M::EvenAtLeast4, D::Any, N::FirstOE, S::Half2),
        row("f4-long", F4Long, M::AtLeast3, D::Any, N::Any, S::Full1),
        row("hex-short-coprime", HexShort, M::CoprimeTo3, D::Any, N::Any, S::Full1),
        row("hex-short-unit", HexShort, M::DivisibleBy3, D::Any, N::OuterUnitMod3, S::Full1),
        row("hex-short-zero", HexShort, M::DivisibleBy3, D::Any, N::OuterZeroMod3, S::Third2),
        row("hex-long", HexLong, M::AtLeast3, D::Any, N::Any, S::Full1),
        row("apeirogon-double-odd", InfDouble, M::Odd, D::Any, N::Any, S::Full1),
        row("apeirogon-double-even-oe", InfDouble, M::EvenAtLeast4, D::Any, N::SomeEndOE, S::Full1),
        row("apeirogon-double-even-ee", InfDouble, M::EvenAtLeast4, D::Any, N::BothEndsEE, S::Half1),
        row("apeirogon-double-two", InfDouble, M::Two, D::Any, N::BothEndsOE, S::Full1),
        row("apeirogon-single-odd", InfSingle, M::Odd, D::Any, N::Any, S::Full1),
        row("apeirogon-single-even-ee", InfSingle, M::EvenAtLeast4, D::Any, N::LastEE, S::Full1),
        row("apeirogon-single-even-oe", InfSingle, M::Even, D::Any, N::LastOE, S::Double1),
    ]
};

/// A Euclidean window with a chosen affine node, read affine node first.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct EuclideanWindow {
    pub start: usize,
    pub end: usize,
    /// Either `start` or `end`.
    pub affine: usize,
    pub kind: EuclideanKind,
    pub m: usize,
}

impl EuclideanWindow {
    /// Matches `start..=end`, preferring the affine node on the left.
    pub fn find(d: &Diagram, start: usize, end: usize) -> Option<Self> {
        if end >= d.rank() || start >= end {
            return None;
        }
        if let Some(p) = patterns::euclidean_left(d, start, end) {
            return Some(EuclideanWindow { start, end, affine: start, kind: p.kind, m: p.m });
        }
        patterns::euclidean_right(d, start, end)
            .map(|p| EuclideanWindow { start, end, affine: end, kind: p.kind, m: p.m })
    }

    /// Matches `start..=end` with the given affine node. Apeirogons accept
    /// either end.
    pub fn with_affine(d: &Diagram, start: usize, end: usize, affine: usize) -> Option<Self> {
        if end >= d.rank() || start >= end {
            return None;
        }
        let left = patterns::euclidean_left(d, start, end);
        let right = patterns::euclidean_right(d, start, end);
        let p = if affine == start {
            left.or(right.filter(|p| p.m == 1))
        } else if affine == end {
            right.or(left.filter(|p| p.m == 1))
        } else {
            None
        }?;
        Some(EuclideanWindow { start, end, affine, kind: p.kind, m: p.m })
    }

    pub fn family(&self) -> Family {
        self.kind.family()
    }

    /// Window nodes from the affine node outward.
    pub fn oriented(&self) -> Vec<usize> {
        if self.affine == self.start {
            (self.start..=self.end).collect()
        } else {
            (self.start..=self.end).rev().collect()
        }
    }

    /// Point group nodes extended away from the affine node to the end of
    /// the diagram.
    pub fn far_side(&self, rank: usize) -> Vec<usize> {
        if self.affine == self.start {
            (self.start + 1..rank).collect()
        } else {
            (0..self.end).collect()
        }
    }

    fn outer_cartan(&self, d: &Diagram) -> i64 {
        let (l, r) = d.side_cartans(self.affine);
        if self.affine == self.start {
            l
        } else {
            r
        }
    }
}

fn node_rule_holds(rule: NodeRule, d: &Diagram, w: &EuclideanWindow) -> bool {
    let o = w.oriented();
    let first = d.parity_of(o[0]);
    let last = d.parity_of(*o.last().expect("window"));
    use NodeParity::*;
    match rule {
        NodeRule::Any => true,
        NodeRule::SomeEndOO => first == OO || last == OO,
        NodeRule::SomeEndOE => first == OE || last == OE,
        NodeRule::BothEndsOO => first == OO && last == OO,
        NodeRule::BothEndsOE => first == OE && last == OE,
        NodeRule::BothEndsEE => first == EE && last == EE,
        NodeRule::FirstOO => first == OO,
        NodeRule::FirstOE => first == OE,
        NodeRule::LastEE => last == EE,
        NodeRule::LastOE => last == OE,
        NodeRule::OuterUnitMod3 => w.outer_cartan(d).rem_euclid(3) != 0,
        NodeRule::OuterZeroMod3 => w.outer_cartan(d).rem_euclid(3) == 0,
    }
}

/// The table row covering a window at modulus `s`, if any.
pub fn lookup_row(d: &Diagram, w: &EuclideanWindow, s: u64) -> Option<&'static TableRow> {
    TABLE.iter().find(|r| {
        r.kind == w.kind
            && r.modulus.holds(s)
            && match r.dim {
                DimRule::Any => true,
                DimRule::Odd => w.m % 2 == 1,
                DimRule::Even => w.m.is_multiple_of(2),
            }
            && node_rule_holds(r.nodes, d, w)
    })
}

/// Predicted type vector for a window at modulus `s`.
pub fn predicted_type(d: &Diagram, w: &EuclideanWindow, s: u64) -> Option<(TypeVector, &'static str)> {
    lookup_row(d, w, s).map(|r| (r.shape.vector(s, w.m), r.id))
}

/// Standard translation generators of a Euclidean window, exact over the
/// integers and acting on the ambient module.
#[derive(Debug, Clone)]
pub struct TranslationSubgroup {
    pub window: EuclideanWindow,
    pub radical: RadicalVector,
    pub gens: Vec<IntMatrix>,
}

impl TranslationSubgroup {
    pub fn reduce(&self, modulus: u64) -> Result<Vec<ModMatrix>> {
        self.gens.iter().map(|t| t.reduce(modulus)).collect()
    }

    /// Order of `T^s` together with the periods of `t_1`, `t_1 t_2` and
    /// `t_1 ... t_m`.
    pub fn key_periods(&self, s: u64) -> Result<KeyPeriods> {
        let gens = self.reduce(s)?;
        let mut prod = gens[0];
        let p1 = prod.period();
        let mut p12 = p1;
        for (i, g) in gens.iter().enumerate().skip(1) {
            prod = prod.mul(g);
            if i == 1 {
                p12 = prod.period();
            }
        }
        let p1m = prod.period();
        let id = ModMatrix::identity(gens[0].dim(), gens[0].modulus());
        let order = StabChain::new(id, &gens)?.order_u128();
        Ok(KeyPeriods { p1, p12, p1m, order })
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct KeyPeriods {
    pub p1: u64,
    pub p12: u64,
    pub p1m: u64,
    pub order: u128,
}

fn int_closure(n: usize, gens: &[IntMatrix], limit: usize) -> Result<Vec<IntMatrix>> {
    let id = IntMatrix::identity(n);
    let mut seen = FxHashSet::default();
    seen.insert(id.clone());
    let mut queue = vec![id];
    let mut k = 0;
    while k < queue.len() {
        for g in gens {
            let y = g.mul(&queue[k]);
            if seen.insert(y.clone()) {
                if queue.len() >= limit {
                    return Err(Error::Internal("point group is not finite".into()));
                }
                queue.push(y);
            }
        }
        k += 1;
    }
    Ok(queue)
}

/// Translation generators for the window `start..=end`, affine node on the
/// left when possible.
pub fn translation_generators(d: &Diagram, start: usize, end: usize) -> Result<TranslationSubgroup> {
    let w = EuclideanWindow::find(d, start, end)
        .ok_or_else(|| Error::NotEuclidean(format!("{start}..={end}")))?;
    translations_for(d, w)
}

/// Builds `t_1 = r_a h` with `h` in the point group, then conjugates along
/// the window: `t_{i+1} = r_{p_i} t_i r_{p_i}`.
pub fn translations_for(d: &Diagram, w: EuclideanWindow) -> Result<TranslationSubgroup> {
    let rep = IntMatrixRep::new(d);
    let n = d.rank();
    let radical = radical_vector(d, w.start, w.end)?;
    let oriented = w.oriented();
    let point: Vec<IntMatrix> = oriented[1..].iter().map(|&i| rep.gen(i).clone()).collect();
    let h_all = int_closure(n, &point, POINT_GROUP_LIMIT)?;
    let ra = rep.gen(w.affine);
    let mut found = h_all.iter().map(|h| ra.mul(h)).filter(|t| is_int_transvection(t, &radical));
    let t1 = found
        .next()
        .ok_or_else(|| Error::Internal(format!("no translation in window {}..={}", w.start, w.end)))?;
    if found.next().is_some() {
        return Err(Error::Internal("translation is not unique".into()));
    }
    let mut gens = vec![t1];
    for &p in &oriented[1..w.m] {
        let r = rep.gen(p);
        let next = r.mul(gens.last().expect("nonempty")).mul(r);
        gens.push(next);
    }
    for t in &gens {
        if !is_int_transvection(t, &radical) {
            return Err(Error::Internal("conjugated generator is not a transvection".into()));
        }
    }
    for a in &gens {
        for b in &gens {
            if a.mul(b) != b.mul(a) {
                return Err(Error::Internal("translations do not commute".into()));
            }
        }
    }
    Ok(TranslationSubgroup { window: w, radical, gens })
}

/// Multipliers of `q` for the key periods of each legal shape, and the
/// index `mu` with `|T^s| = mu q^m`.
struct Signature {
    k: usize,
    p1: u64,
    p12: Option<u64>,
    p1m: Option<u64>,
    mu: u128,
}

fn signatures(family: Family, m: usize) -> Vec<Signature> {
    let sig = |k, p1, p12, p1m, mu| Signature { k, p1, p12, p1m, mu };
    match family {
        Family::Cubic if m == 2 => vec![sig(1, 1, Some(1), Some(1), 1), sig(2, 2, Some(1), Some(1), 2)],
        Family::Cubic => vec![
            sig(1, 1, Some(1), Some(1), 1),
            sig(2, 2, Some(1), Some(if m.is_multiple_of(2) { 1 } else { 2 }), 2),
            sig(m, 2, Some(2), Some(1), 1u128 << (m - 1)),
        ],
        Family::F4Affine => vec![sig(1, 1, Some(1), None, 1), sig(2, 2, None, None, 4)],
        Family::Hexagonal => vec![sig(1, 1, Some(1), Some(1), 1), sig(2, 3, None, None, 3)],
        Family::Apeirogon => vec![sig(1, 1, Some(1), Some(1), 1)],
    }
}

/// Type vector read off the key periods, or `None` when they fit no legal
/// shape. Shapes with all four entries equal on the `[3,3,4,3]` lattice are
/// reported in their equivalent single-entry form.
pub fn type_vector(tsub: &TranslationSubgroup, s: u64) -> Result<Option<TypeVector>> {
    let kp = tsub.key_periods(s)?;
    Ok(decide_type(tsub.window.family(), tsub.window.m, &kp))
}

fn decide_type(family: Family, m: usize, kp: &KeyPeriods) -> Option<TypeVector> {
    let mut hits = signatures(family, m).into_iter().filter_map(|sg| {
        if !kp.p1.is_multiple_of(sg.p1) {
            return None;
        }
        let q = kp.p1 / sg.p1;
        let qm = (q as u128).checked_pow(m as u32)?;
        let ok = sg.mu * qm == kp.order
            && sg.p12.is_none_or(|a| a * q == kp.p12)
            && sg.p1m.is_none_or(|a| a * q == kp.p1m);
        ok.then(|| TypeVector::new(q, sg.k, m))
    });
    let first = hits.next()?;
    hits.all(|t| t == first).then_some(first)
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub enum SectionKind {
    Spherical {
        name: String,
        collapsed: bool,
        predicted_order: u128,
        measured_order: u128,
    },
    Euclidean {
        family: String,
        affine: usize,
        predicted: Option<TypeVector>,
        measured: Option<TypeVector>,
        row: Option<&'static str>,
    },
    Other {
        note: String,
    },
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct SectionClass {
    pub start: usize,
    pub end: usize,
    pub kind: SectionKind,
}

impl SectionClass {
    /// Whether measurement agrees with prediction.
    pub fn consistent(&self) -> bool {
        match &self.kind {
            SectionKind::Spherical { predicted_order, measured_order, .. } => predicted_order == measured_order,
            SectionKind::Euclidean { predicted, measured, .. } => predicted.is_none() || predicted == measured,
            SectionKind::Other { .. } => true,
        }
    }

    pub fn measured_q(&self) -> Option<TypeVector> {
        match &self.kind {
            SectionKind::Euclidean { measured, .. } => *measured,
            _ => None,
        }
    }

    pub fn to_json(&self) -> Value {
        let window = json!([self.start, self.end]);
        let vec = |t: &Option<TypeVector>| t.map(|t| json!(t.entries()));
        match &self.kind {
            SectionKind::Spherical { name, collapsed, predicted_order, measured_order } => json!({
                "window": window,
                "kind": "spherical",
                "family": name,
                "collapsed": collapsed,
                "predicted_order": predicted_order.to_string(),
                "measured_order": measured_order.to_string(),
                "predicted_q": null,
                "measured_q": null,
                "constraints_row_id": null,
            }),
            SectionKind::Euclidean { family, affine, predicted, measured, row } => json!({
                "window": window,
                "kind": "euclidean",
                "family": family,
                "affine_node": affine,
                "predicted_q": vec(predicted),
                "measured_q": vec(measured),
                "constraints_row_id": row,
            }),
            SectionKind::Other { note } => json!({
                "window": window,
                "kind": "other",
                "family": null,
                "note": note,
                "predicted_q": null,
                "measured_q": null,
                "constraints_row_id": null,
            }),
        }
    }
}

impl fmt::Display for SectionClass {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let opt = |t: &Option<TypeVector>| t.map_or("-".to_string(), |t| t.to_string());
        write!(f, "[{}..{}] ", self.start, self.end)?;
        match &self.kind {
            SectionKind::Spherical { name, collapsed, predicted_order, measured_order } => {
                write!(f, "spherical {name} order {measured_order} (predicted {predicted_order})")?;
                if *collapsed {
                    write!(f, " collapsed")?;
                }
                Ok(())
            }
            SectionKind::Euclidean { family, affine, predicted, measured, row } => write!(
                f,
                "euclidean {family} affine node {affine} q={} (predicted {}, row {})",
                opt(measured),
                opt(predicted),
                row.unwrap_or("-")
            ),
            SectionKind::Other { note } => write!(f, "other: {note}"),
        }
    }
}

fn spherical_prediction(d: &Diagram, start: usize, end: usize, p: &SphericalPattern, s: u64) -> (String, bool, u128) {
    let at = |i: usize| if p.flipped { end - i } else { start + i };
    let m = p.rank;
    let fact = |k: usize| (1..=k as u128).product::<u128>();
    let par = |i: usize| d.parity_of(at(i));
    match p.kind {
        SphericalKind::BShort if s == 2 && par(0) == NodeParity::EE => (format!("A{}", m - 1), true, fact(m)),
        SphericalKind::BLong if s == 2 => {
            let (a, b) = (par(0), par(m - 1));
            let hemi = (a == NodeParity::OE && b == NodeParity::OE) || (a == NodeParity::OO && b == NodeParity::OE && m.is_multiple_of(2));
            if hemi {
                (format!("B{m}/{{±e}}"), false, p.order() / 2)
            } else {
                (p.name(), false, p.order())
            }
        }
        SphericalKind::F4 if s == 2 => ("F4/{±e}".into(), false, 576),
        SphericalKind::G2 if s == 2 => ("I2(3)".into(), false, 6),
        _ => (p.name(), false, p.order()),
    }
}

/// Order of `<r_i : i in idx>` modulo `s`.
pub fn subgroup_order(rep: &ModMatrixRep, idx: &[usize]) -> Result<u128> {
    let gens = rep.select(idx)?;
    let id = ModMatrix::identity(rep.dim(), rep.modulus() as u32);
    Ok(StabChain::new(id, &gens)?.order_u128())
}

pub fn classify_spherical(d: &Diagram, start: usize, end: usize, s: u64) -> Result<SectionClass> {
    let p = patterns::spherical(d, start, end)
        .ok_or_else(|| Error::InvalidWindow(format!("{start}..={end} is not spherical")))?;
    let (name, collapsed, predicted_order) = spherical_prediction(d, start, end, &p, s);
    let rep = ModMatrixRep::new(d, s)?;
    let idx: Vec<usize> = (start..=end).collect();
    let measured_order = subgroup_order(&rep, &idx)?;
    Ok(SectionClass { start, end, kind: SectionKind::Spherical { name, collapsed, predicted_order, measured_order } })
}

/// Classifies a Euclidean window: table prediction and measurement.
pub fn classify_euclidean(d: &Diagram, start: usize, end: usize, s: u64) -> Result<SectionClass> {
    let Some(w) = EuclideanWindow::find(d, start, end) else {
        return Ok(SectionClass {
            start,
            end,
            kind: SectionKind::Other { note: "no Euclidean pattern".into() },
        });
    };
    classify_window(d, w, s)
}

pub fn classify_window(d: &Diagram, w: EuclideanWindow, s: u64) -> Result<SectionClass> {
    let (start, end) = (w.start, w.end);
    let prediction = predicted_type(d, &w, s);
    let family = w.family().schlafli(w.m);
    let affine = w.affine;
    let tsub = translations_for(d, w)?;
    let measured = type_vector(&tsub, s)?;
    if prediction.is_none() {
        let note = format!(
            "{family} modulo {s} is outside the toroid tables: it either fails to have involutory generators or is locally projective"
        );
        return Ok(SectionClass { start, end, kind: SectionKind::Other { note } });
    }
    Ok(SectionClass {
        start,
        end,
        kind: SectionKind::Euclidean {
            family,
            affine,
            predicted: prediction.map(|p| p.0),
            measured,
            row: prediction.map(|p| p.1),
        },
    })
}

/// Every maximal window of length at least two that is spherical or
/// Euclidean, scanned left to right.
pub fn classify_all(d: &Diagram, s: u64) -> Result<Vec<SectionClass>> {
    let n = d.rank();
    let mut found: Vec<(usize, usize, bool)> = Vec::new();
    for a in 0..n {
        for b in a + 1..n {
            if EuclideanWindow::find(d, a, b).is_some() {
                found.push((a, b, true));
            } else if patterns::spherical(d, a, b).is_some() {
                found.push((a, b, false));
            }
        }
    }
    let maximal: Vec<_> = found
        .iter()
        .filter(|&&(a, b, _)| !found.iter().any(|&(c, e, _)| c <= a && b <= e && (c, e) != (a, b)))
        .copied()
        .collect();
    maximal
        .into_iter()
        .map(|(a, b, euc)| if euc { classify_euclidean(d, a, b, s) } else { classify_spherical(d, a, b, s) })
        .collect()
}

/// Outcome of the three computational checks behind a toroid reduction.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ReductionReport {
    pub start: usize,
    pub end: usize,
    pub modulus: u64,
    pub translation_order: u128,
    pub point_order: u128,
    pub section_order: u128,
    pub faithful: bool,
    pub intersection_trivial: bool,
    pub checks: Vec<Check>,
}

impl ReductionReport {
    pub fn all_pass(&self) -> bool {
        self.checks.iter().all(|c| c.pass)
    }
}

/// `T^s` restricted to the window's own coordinates.
fn restrict(g: &ModMatrix, nodes: &[usize]) -> ModMatrix {
    let rows: Vec<Vec<i64>> =
        nodes.iter().map(|&i| nodes.iter().map(|&j| i64::from(g.get(i, j))).collect()).collect();
    ModMatrix::from_rows(&rows, g.modulus()).expect("restriction of a reduced matrix")
}

/// Nontrivial elements of `T^d` lying in `<r_i : i in far>^d`.
fn translation_meets(tsub: &TranslationSubgroup, rep: &ModMatrixRep, far: &[usize]) -> Result<Option<ModMatrix>> {
    let tg = tsub.reduce(rep.modulus())?;
    let id = ModMatrix::identity(rep.dim(), rep.modulus() as u32);
    let elements = enumerate_small(&id, &tg, TRANSLATION_ENUM_LIMIT)?;
    let k = StabChain::new(id, &rep.select(far)?)?;
    let mut hits: Vec<ModMatrix> = elements.into_iter().filter(|t| !t.is_identity() && k.contains(t)).collect();
    hits.sort_by_key(|t| t.rows());
    Ok(hits.into_iter().next())
}

pub fn check_reduction(d: &Diagram, start: usize, end: usize, s: u64, guards: Guards) -> Result<ReductionReport> {
    let w = EuclideanWindow::find(d, start, end)
        .ok_or_else(|| Error::NotEuclidean(format!("{start}..={end}")))?;
    check_reduction_window(d, w, s, guards)
}

pub fn check_reduction_window(d: &Diagram, w: EuclideanWindow, s: u64, guards: Guards) -> Result<ReductionReport> {
    let rep = ModMatrixRep::new(d, s)?;
    let oriented = w.oriented();
    let far = w.far_side(d.rank());
    let (start, end) = (w.start, w.end);
    let tsub = translations_for(d, w)?;
    let id = ModMatrix::identity(rep.dim(), s as u32);
    let opts = ChainOptions { order_limit: guards.order, ..Default::default() };
    let tg = tsub.reduce(s)?;
    let translation_order = StabChain::with_options(id, &tg, &opts)?.order_u128();
    let point_order = subgroup_order(&rep, &oriented[1..])?;
    let point_char0 = IntMatrixRep::new(d);
    let point_int: Vec<IntMatrix> = oriented[1..].iter().map(|&i| point_char0.gen(i).clone()).collect();
    let point_exact = int_closure(d.rank(), &point_int, POINT_GROUP_LIMIT)?.len() as u128;
    let window: Vec<usize> = (start..=end).collect();
    let section_order = subgroup_order(&rep, &window)?;

    let mut checks = Vec::new();
    let split = section_order == translation_order * point_order && point_order == point_exact;
    checks.push(Check::new(
        "splitting",
        split,
        (!split).then(|| format!("|E| = {section_order}, |T| = {translation_order}, |H| = {point_order} of {point_exact}")),
    ));
    let sc = polytopality::verify_string_c_group(&rep, &window, guards)?;
    let ok = sc.verdict == Verdict::StringCGroup;
    checks.push(Check::new("string C-group", ok, (!ok).then(|| sc.verdict.as_str().to_string())));

    let restricted: Vec<ModMatrix> = tg.iter().map(|t| restrict(t, &window)).collect();
    let rid = ModMatrix::identity(window.len(), s as u32);
    let faithful = StabChain::new(rid, &restricted)?.order_u128() == translation_order;
    let meet = translation_meets(&tsub, &rep, &far)?;
    let intersection_trivial = meet.is_none();
    let c_ok = !faithful || intersection_trivial;
    let witness = meet.map(|t| format!("translation of period {} lies in <{}>", t.period(), names(&far)));
    checks.push(Check::new("faithful action implies trivial intersection", c_ok, witness));
    Ok(ReductionReport {
        start,
        end,
        modulus: s,
        translation_order,
        point_order,
        section_order,
        faithful,
        intersection_trivial,
        checks,
    })
}

fn names(idx: &[usize]) -> String {
    idx.iter().map(|i| format!("r{i}")).collect::<Vec<_>>().join(",")
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum CriterionOutcome {
    /// Hypotheses verified: the group at the larger modulus is a string
    /// C-group.
    Accepted,
    /// Euclidean case with the translation intersection condition failing.
    Refused,
    /// Hypotheses could not be established.
    Inapplicable,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CriterionReport {
    pub outcome: CriterionOutcome,
    /// True when the accepted or refusing form is the dual one.
    pub dual: bool,
    pub case: Option<char>,
    pub evidence: Vec<String>,
    /// Direct verification at the larger modulus, when the criterion did not
    /// accept and a fallback was requested.
    pub fallback: Option<Verdict>,
}

impl CriterionReport {
    pub fn verdict_str(&self) -> &'static str {
        match self.outcome {
            CriterionOutcome::Accepted => "StringCGroup-by-criterion",
            CriterionOutcome::Refused => "Refused",
            CriterionOutcome::Inapplicable => "Inapplicable",
        }
    }

    pub fn to_json(&self) -> Value {
        json!({
            "verdict": self.verdict_str(),
            "dual": self.dual,
            "case": self.case.map(|c| c.to_string()),
            "evidence": self.evidence,
            "fallback": self.fallback.map(|v| v.as_str()),
        })
    }
}

fn criterion_one_side(d: &Diagram, s: u64, dd: u64, evidence: &mut Vec<String>, tag: &str) -> Result<(CriterionOutcome, Option<char>)> {
    let n = d.rank();
    if n < 2 {
        evidence.push(format!("{tag}: rank below 2"));
        return Ok((CriterionOutcome::Inapplicable, None));
    }
    let rep_s = ModMatrixRep::new(d, s)?;
    let facet: Vec<usize> = (0..n - 1).collect();
    if let Some(p) = patterns::spherical(d, 0, n - 2) {
        let got = subgroup_order(&rep_s, &facet)?;
        if got == p.order() {
            evidence.push(format!("{tag}: facet group {} is faithful modulo {s} (order {got})", p.name()));
            return Ok((CriterionOutcome::Accepted, Some('a')));
        }
        evidence.push(format!("{tag}: facet group {} has order {got} modulo {s}, not {}", p.name(), p.order()));
        return Ok((CriterionOutcome::Inapplicable, None));
    }
    if n < 3 {
        evidence.push(format!("{tag}: facet is neither spherical nor Euclidean"));
        return Ok((CriterionOutcome::Inapplicable, None));
    }
    let Some(w) = EuclideanWindow::with_affine(d, 0, n - 2, 0) else {
        evidence.push(format!("{tag}: facet is neither spherical nor Euclidean with affine node 0"));
        return Ok((CriterionOutcome::Inapplicable, None));
    };
    let point: Vec<usize> = (1..n - 1).collect();
    let pp = patterns::spherical(d, 1, n - 2)
        .ok_or_else(|| Error::Internal("point group of a Euclidean window is not spherical".into()))?;
    let got = subgroup_order(&rep_s, &point)?;
    if got != pp.order() {
        evidence.push(format!("{tag}: point group {} has order {got} modulo {s}, not {}", pp.name(), pp.order()));
        return Ok((CriterionOutcome::Inapplicable, None));
    }
    evidence.push(format!("{tag}: facet {} with faithful point group {}", w.family().schlafli(w.m), pp.name()));
    let tsub = translations_for(d, w)?;
    let rep_d = ModMatrixRep::new(d, dd)?;
    let far: Vec<usize> = (1..n).collect();
    match translation_meets(&tsub, &rep_d, &far)? {
        None => {
            evidence.push(format!("{tag}: T^{dd} meets <{}> trivially", names(&far)));
            Ok((CriterionOutcome::Accepted, Some('b')))
        }
        Some(t) => {
            evidence.push(format!(
                "{tag}: translation of period {} modulo {dd} lies in <{}>",
                t.period(),
                names(&far)
            ));
            Ok((CriterionOutcome::Refused, Some('b')))
        }
    }
}

/// Applies the quotient criterion to pass from a verified modulus `s` to a
/// multiple `dd`, trying the dual form when the direct form does not accept.
pub fn quotient_criterion(d: &Diagram, s: u64, dd: u64, guards: Guards, fallback: bool) -> Result<CriterionReport> {
    if s < 2 || !dd.is_multiple_of(s) {
        return Err(Error::InvalidModulus(dd));
    }
    let mut evidence = Vec::new();
    let base = polytopality::verify(d, s, guards)?;
    let mut outcome = (CriterionOutcome::Inapplicable, None, false);
    if base.verdict != Verdict::StringCGroup {
        evidence.push(format!("modulus {s}: {}", base.verdict.as_str()));
    } else {
        evidence.push(format!("modulus {s}: verified directly, order {}", base.order));
        let right = criterion_one_side(d, s, dd, &mut evidence, "right")?;
        outcome = (right.0, right.1, false);
        if right.0 != CriterionOutcome::Accepted {
            let left = criterion_one_side(&d.flip(), s, dd, &mut evidence, "dual")?;
            if left.0 == CriterionOutcome::Accepted || right.0 == CriterionOutcome::Inapplicable {
                outcome = (left.0, left.1, true);
            }
        }
    }
    let fb = if fallback && outcome.0 != CriterionOutcome::Accepted {
        Some(polytopality::verify(d, dd, guards)?.verdict)
    } else {
        None
    };
    Ok(CriterionReport { outcome: outcome.0, dual: outcome.2, case: outcome.1, evidence, fallback: fb })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn d(s: &str) -> Diagram {
        Diagram::parse(s).unwrap()
    }

    fn euclid(c: &SectionClass) -> (Option<TypeVector>, Option<TypeVector>) {
        match &c.kind {
            SectionKind::Euclidean { predicted, measured, .. } => (*predicted, *measured),
            other => panic!("not Euclidean: {other:?}"),
        }
    }

    #[test]
    fn square_tilings() {
        let (p, m) = euclid(&classify_euclidean(&d("1 - 2 - 1"), 0, 2, 4).unwrap());
        assert_eq!(p, Some(TypeVector::new(2, 1, 2)));
        assert_eq!(p, m);
        let (p, m) = euclid(&classify_euclidean(&d("1 - 2 - 4"), 0, 2, 4).unwrap());
        assert_eq!(p, Some(TypeVector::new(4, 1, 2)));
        assert_eq!(p, m);
        let (p, m) = euclid(&classify_euclidean(&d("2 - 1 - 2"), 0, 2, 4).unwrap());
        assert_eq!(p, Some(TypeVector::new(2, 2, 2)));
        assert_eq!(p, m);
    }

    #[test]
    fn hexagonal_windows() {
        let dg = d("3 - 3 - 1 - 1");
        for s in 3..=12 {
            let (p, m) = euclid(&classify_euclidean(&dg, 1, 3, s).unwrap());
            let want = if s % 3 == 0 { TypeVector::new(s / 3, 2, 2) } else { TypeVector::new(s, 1, 2) };
            assert_eq!(p, Some(want), "s = {s}");
            assert_eq!(m, Some(want), "s = {s}");
        }
        let (p, m) = euclid(&classify_euclidean(&dg, 0, 2, 4).unwrap());
        assert_eq!(p, Some(TypeVector::new(4, 1, 2)));
        assert_eq!(m, p);
    }

    #[test]
    fn translations_are_transvections() {
        let dg = d("4 - 2 - 2 - 1 - 1");
        let t = translation_generators(&dg, 0, 3).unwrap();
        assert_eq!(t.gens.len(), 3);
        for s in [3, 4, 5] {
            for g in t.reduce(s).unwrap() {
                assert!(crate::matrep::is_transvection(&g, &t.radical));
            }
        }
        let (p, m) = euclid(&classify_euclidean(&dg, 0, 3, 4).unwrap());
        assert_eq!(p, Some(TypeVector::new(4, 2, 3)));
        assert_eq!(m, p);
    }

    #[test]
    fn spherical_windows() {
        let c = classify_spherical(&d("1 - 1 - 2 - 2"), 0, 3, 2).unwrap();
        assert!(matches!(c.kind, SectionKind::Spherical { predicted_order: 576, measured_order: 576, .. }));
        let c = classify_spherical(&d("1 - 2 - 2"), 0, 2, 2).unwrap();
        assert!(matches!(c.kind, SectionKind::Spherical { collapsed: true, predicted_order: 6, measured_order: 6, .. }));
        let c = classify_spherical(&d("1 - 1 - 1"), 0, 2, 5).unwrap();
        assert!(c.consistent());
    }

    #[test]
    fn maximal_windows() {
        let all = classify_all(&d("3 - 3 - 1 - 1"), 4).unwrap();
        let spans: Vec<_> = all.iter().map(|c| (c.start, c.end)).collect();
        assert_eq!(spans, vec![(0, 2), (1, 3)]);
        assert!(all.iter().all(|c| c.consistent()));
    }

    #[test]
    fn apeirogon_failure_modulo_twice_odd() {
        let dg = d("1 - 4 = 4");
        let w = EuclideanWindow::with_affine(&dg, 0, 1, 0).unwrap();
        for s in [3u64, 5] {
            let r = check_reduction_window(&dg, w.clone(), 2 * s, Guards::default()).unwrap();
            assert!(!r.intersection_trivial, "d = {}", 2 * s);
            let q = quotient_criterion(&dg, s, 2 * s, Guards::default(), true).unwrap();
            assert_eq!(q.outcome, CriterionOutcome::Refused);
            assert_eq!(q.fallback, Some(Verdict::IntersectionFails));
        }
    }

    #[test]
    fn criterion_accepts_hexagonal_multiples() {
        let dg = d("3 - 3 - 1 - 1");
        for dd in [8, 12] {
            let q = quotient_criterion(&dg, 4, dd, Guards::default(), false).unwrap();
            assert_eq!(q.outcome, CriterionOutcome::Accepted, "{:?}", q.evidence);
        }
    }
}
