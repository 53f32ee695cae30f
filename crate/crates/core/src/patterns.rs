//! Recognition of spherical and Euclidean label patterns on diagram windows.

use serde::Serialize;

use crate::diagram::{Branch, Diagram};

/// Spherical basic systems, named by the family of the finite group.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
pub enum SphericalKind {
    /// `a - a - ... - a`.
    A,
    /// `a - 2a - ... - 2a`.
    BShort,
    /// `2a - a - ... - a`, rank at least 3.
    BLong,
    /// `a - a - 2a - 2a`.
    F4,
    /// `a - 3a`.
    G2,
}

/// A spherical window read in a fixed orientation.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
pub struct SphericalPattern {
    pub kind: SphericalKind,
    pub rank: usize,
    /// True when the pattern only matches after reversing the window.
    pub flipped: bool,
}

impl SphericalPattern {
    /// Order of the group in characteristic zero.
    pub fn order(&self) -> u128 {
        let m = self.rank as u128;
        let fact: u128 = (1..=m).product();
        match self.kind {
            SphericalKind::A => fact * (m + 1),
            SphericalKind::BShort | SphericalKind::BLong => (1u128 << m) * fact,
            SphericalKind::F4 => 1152,
            SphericalKind::G2 => 12,
        }
    }

    pub fn name(&self) -> String {
        match self.kind {
            SphericalKind::A => format!("A{}", self.rank),
            SphericalKind::BShort | SphericalKind::BLong => format!("B{}", self.rank),
            SphericalKind::F4 => "F4".into(),
            SphericalKind::G2 => "I2(6)".into(),
        }
    }
}

/// Euclidean basic systems with the affine node first.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
pub enum EuclideanKind {
    /// `2a - a - ... - a - 2a`.
    CubicEnds2,
    /// `a - 2a - ... - 2a - a`.
    CubicEnds1,
    /// `4a - 2a - ... - 2a - a`.
    CubicEnds4,
    /// `a - a - a - 2a - 2a`.
    F4Short,
    /// `2a - 2a - 2a - a - a`.
    F4Long,
    /// `a - a - 3a`.
    HexShort,
    /// `3a - 3a - a`.
    HexLong,
    /// `a = a`.
    InfDouble,
    /// `4a - a`.
    InfSingle,
}

/// Affine family of a Euclidean window.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
pub enum Family {
    Cubic,
    F4Affine,
    Hexagonal,
    Apeirogon,
}

impl EuclideanKind {
    pub fn family(self) -> Family {
        use EuclideanKind::*;
        match self {
            CubicEnds2 | CubicEnds1 | CubicEnds4 => Family::Cubic,
            F4Short | F4Long => Family::F4Affine,
            HexShort | HexLong => Family::Hexagonal,
            InfDouble | InfSingle => Family::Apeirogon,
        }
    }

    /// Integral radical vector with coefficient 1 at the affine node.
    pub fn radical(self, len: usize) -> Vec<i64> {
        use EuclideanKind::*;
        match self {
            CubicEnds2 => {
                let mut c = vec![2; len];
                c[0] = 1;
                c[len - 1] = 1;
                c
            }
            CubicEnds1 => vec![1; len],
            CubicEnds4 => {
                let mut c = vec![2; len];
                c[0] = 1;
                c
            }
            F4Short => vec![1, 2, 3, 2, 1],
            F4Long => vec![1, 2, 3, 4, 2],
            HexShort => vec![1, 2, 1],
            HexLong => vec![1, 2, 3],
            InfDouble => vec![1, 1],
            InfSingle => vec![1, 2],
        }
    }
}

impl Family {
    /// Schläfli symbol of the tessellation, for affine dimension `m`.
    pub fn schlafli(self, m: usize) -> String {
        match self {
            Family::Cubic => {
                let mut parts = vec!["4".to_string()];
                parts.extend(std::iter::repeat_n("3".to_string(), m.saturating_sub(2)));
                parts.push("4".into());
                format!("{{{}}}", parts.join(","))
            }
            Family::F4Affine => "{3,3,4,3}".into(),
            Family::Hexagonal => "{3,6}".into(),
            Family::Apeirogon => "{inf}".into(),
        }
    }
}

/// A Euclidean window whose affine node sits at its left end.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
pub struct EuclideanPattern {
    pub kind: EuclideanKind,
    /// Affine dimension; the window has `m + 1` nodes.
    pub m: usize,
}

fn singles(d: &Diagram) -> bool {
    d.branches().iter().all(|&b| b == Branch::Single)
}

/// Matches `window` (already normalized) against the spherical patterns in
/// its given orientation.
fn spherical_oriented(w: &Diagram) -> Option<SphericalKind> {
    let l = w.labels();
    let n = l.len();
    if n == 1 {
        return Some(SphericalKind::A);
    }
    if !singles(w) {
        return None;
    }
    if l.iter().all(|&a| a == l[0]) {
        return Some(SphericalKind::A);
    }
    if l[0] == 1 && l[1..].iter().all(|&a| a == 2) {
        return Some(SphericalKind::BShort);
    }
    if n >= 3 && l[0] == 2 && l[1..].iter().all(|&a| a == 1) {
        return Some(SphericalKind::BLong);
    }
    if l == [1, 1, 2, 2] {
        return Some(SphericalKind::F4);
    }
    if l == [1, 3] {
        return Some(SphericalKind::G2);
    }
    None
}

/// Spherical pattern of the subdiagram on nodes `start..=end`, trying the
/// given orientation first and then the reversed one.
pub fn spherical(d: &Diagram, start: usize, end: usize) -> Option<SphericalPattern> {
    let w = d.window(start, end).ok()?;
    let rank = w.rank();
    if let Some(kind) = spherical_oriented(&w) {
        return Some(SphericalPattern { kind, rank, flipped: false });
    }
    spherical_oriented(&w.flip()).map(|kind| SphericalPattern { kind, rank, flipped: true })
}

/// Euclidean pattern of nodes `start..=end` with the affine node at `start`.
pub fn euclidean_left(d: &Diagram, start: usize, end: usize) -> Option<EuclideanPattern> {
    use EuclideanKind::*;
    let w = d.window(start, end).ok()?;
    let l = w.labels();
    let n = l.len();
    let m = n.checked_sub(1)?;
    if n == 2 && w.branches()[0] == Branch::Double {
        return Some(EuclideanPattern { kind: InfDouble, m });
    }
    if !singles(&w) {
        return None;
    }
    let kind = match l {
        [4, 1] => InfSingle,
        [1, 1, 3] => HexShort,
        [3, 3, 1] => HexLong,
        [1, 1, 1, 2, 2] => F4Short,
        [2, 2, 2, 1, 1] => F4Long,
        _ if n >= 3 && l[0] == 2 && l[n - 1] == 2 && l[1..n - 1].iter().all(|&a| a == 1) => {
            CubicEnds2
        }
        _ if n >= 3 && l[0] == 1 && l[n - 1] == 1 && l[1..n - 1].iter().all(|&a| a == 2) => {
            CubicEnds1
        }
        _ if n >= 3 && l[0] == 4 && l[n - 1] == 1 && l[1..n - 1].iter().all(|&a| a == 2) => {
            CubicEnds4
        }
        _ => return None,
    };
    Some(EuclideanPattern { kind, m })
}

/// Euclidean pattern of nodes `start..=end` with the affine node at `end`.
pub fn euclidean_right(d: &Diagram, start: usize, end: usize) -> Option<EuclideanPattern> {
    let n = d.rank();
    if end >= n {
        return None;
    }
    euclidean_left(&d.flip(), n - 1 - end, n - 1 - start)
}
