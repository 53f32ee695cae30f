//! Labelled string diagrams for crystallographic Coxeter groups.
//!
//! A diagram is a string of nodes, each labelled by the squared length of
//! its root, joined by branches. The textual form is
//!
//! ```text
//! diagram := label (branch label)* ;  label := positive integer ;
//! branch  := "-" | "=" | "," ;
//! ```
//!
//! where `-` is a single branch (the label ratio fixes the period), `=` a
//! double branch (period infinity, equal labels) and `,` no branch at all
//! (commuting generators).

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// The kind of branch joining two consecutive nodes.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Branch {
    None,
    Single,
    Double,
}

impl Branch {
    fn symbol(self) -> &'static str {
        match self {
            Branch::None => ",",
            Branch::Single => "-",
            Branch::Double => "=",
        }
    }
}

/// Period of a rotation `r_{i-1} r_i` in the Coxeter group.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Period {
    Finite(u32),
    Infinite,
}

impl fmt::Display for Period {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Period::Finite(p) => write!(f, "{p}"),
            Period::Infinite => write!(f, "inf"),
        }
    }
}

/// Parity class of a node, from the parities of its two adjacent Cartan
/// integers (missing neighbours count as 0).
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum NodeParity {
    /// Both adjacent Cartan integers even.
    EE,
    /// Exactly one adjacent Cartan integer even.
    OE,
    /// Both adjacent Cartan integers odd.
    OO,
}

impl fmt::Display for NodeParity {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            NodeParity::EE => "e-e",
            NodeParity::OE => "o-e",
            NodeParity::OO => "o-o",
        })
    }
}

/// A validated string diagram with gcd-normalized labels.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Diagram {
    labels: Vec<u64>,
    branches: Vec<Branch>,
}

/// Integer Cartan matrix `m[i][j]`, with `r_i(b_j) = b_j + m[i][j] b_i`.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct CartanMatrix {
    n: usize,
    entries: Vec<i64>,
}

impl CartanMatrix {
    pub fn rank(&self) -> usize {
        self.n
    }

    pub fn get(&self, i: usize, j: usize) -> i64 {
        self.entries[i * self.n + j]
    }

    pub fn rows(&self) -> Vec<Vec<i64>> {
        self.entries.chunks(self.n).map(|r| r.to_vec()).collect()
    }
}

fn gcd(mut a: u64, mut b: u64) -> u64 {
    while b != 0 {
        (a, b) = (b, a % b);
    }
    a
}

impl Diagram {
    /// Builds a diagram from raw labels and branches, validating each branch
    /// and dividing every connected component by the gcd of its labels.
    pub fn new(labels: Vec<u64>, branches: Vec<Branch>) -> Result<Self> {
        if labels.is_empty() {
            return Err(Error::InvalidDiagram("a diagram needs at least one node".into()));
        }
        if branches.len() + 1 != labels.len() {
            return Err(Error::InvalidDiagram(format!(
                "{} labels need {} branches, got {}",
                labels.len(),
                labels.len() - 1,
                branches.len()
            )));
        }
        if let Some(i) = labels.iter().position(|&a| a == 0) {
            return Err(Error::InvalidDiagram(format!("label of node {i} must be positive")));
        }
        for (i, &b) in branches.iter().enumerate() {
            let (a, c) = (labels[i], labels[i + 1]);
            match b {
                Branch::None => {}
                Branch::Double if a != c => {
                    return Err(Error::InvalidDiagram(format!(
                        "double branch between nodes {i} and {} needs equal labels, got {a} and {c}",
                        i + 1
                    )));
                }
                Branch::Double => {}
                Branch::Single => {
                    let (lo, hi) = (a.min(c), a.max(c));
                    if hi % lo != 0 || !(1..=4).contains(&(hi / lo)) {
                        return Err(Error::InvalidDiagram(format!(
                            "labels {a} and {c} on nodes {i} and {} are not in ratio 1, 2, 3 or 4",
                            i + 1
                        )));
                    }
                }
            }
        }
        let mut labels = labels;
        let mut start = 0;
        for end in 0..labels.len() {
            let last = end + 1 == labels.len() || branches[end] == Branch::None;
            if last {
                let g = labels[start..=end].iter().fold(0, |g, &a| gcd(g, a));
                labels[start..=end].iter_mut().for_each(|a| *a /= g);
                start = end + 1;
            }
        }
        Ok(Diagram { labels, branches })
    }

    /// Parses the diagram DSL.
    pub fn parse(text: &str) -> Result<Self> {
        let mut labels = Vec::new();
        let mut branches = Vec::new();
        let mut chars = text.char_indices().peekable();
        let mut expect_label = true;
        while let Some(&(pos, ch)) = chars.peek() {
            if ch.is_whitespace() {
                chars.next();
                continue;
            }
            if expect_label {
                if !ch.is_ascii_digit() {
                    return Err(Error::Syntax { pos, msg: format!("expected a label, found {ch:?}") });
                }
                let mut value: u64 = 0;
                while let Some(&(p, d)) = chars.peek() {
                    let Some(digit) = d.to_digit(10) else { break };
                    value = value
                        .checked_mul(10)
                        .and_then(|v| v.checked_add(u64::from(digit)))
                        .ok_or(Error::Syntax { pos: p, msg: "label too large".into() })?;
                    chars.next();
                }
                if value == 0 {
                    return Err(Error::Syntax { pos, msg: "labels must be positive".into() });
                }
                labels.push(value);
            } else {
                let b = match ch {
                    '-' => Branch::Single,
                    '=' => Branch::Double,
                    ',' => Branch::None,
                    _ => {
                        return Err(Error::Syntax {
                            pos,
                            msg: format!("expected '-', '=' or ',', found {ch:?}"),
                        })
                    }
                };
                branches.push(b);
                chars.next();
            }
            expect_label = !expect_label;
        }
        if labels.is_empty() {
            return Err(Error::Syntax { pos: 0, msg: "empty diagram".into() });
        }
        if expect_label {
            return Err(Error::Syntax { pos: text.len(), msg: "diagram ends with a branch".into() });
        }
        Diagram::new(labels, branches)
    }

    /// Reads diagrams from a file body: one per line, `#` starts a comment.
    pub fn parse_lines(body: &str) -> Result<Vec<Self>> {
        body.lines()
            .map(|l| l.split('#').next().unwrap_or("").trim())
            .filter(|l| !l.is_empty())
            .map(Diagram::parse)
            .collect()
    }

    pub fn rank(&self) -> usize {
        self.labels.len()
    }

    pub fn labels(&self) -> &[u64] {
        &self.labels
    }

    pub fn branches(&self) -> &[Branch] {
        &self.branches
    }

    pub fn is_connected(&self) -> bool {
        self.branches.iter().all(|&b| b != Branch::None)
    }

    /// Cartan integers of the branch between nodes `i` and `i + 1`, as
    /// `(m[i][i+1], m[i+1][i])`.
    pub fn branch_cartan(&self, i: usize) -> (i64, i64) {
        let (a, c) = (self.labels[i], self.labels[i + 1]);
        match self.branches[i] {
            Branch::None => (0, 0),
            Branch::Double => (2, 2),
            Branch::Single if a <= c => ((c / a) as i64, 1),
            Branch::Single => (1, (a / c) as i64),
        }
    }

    pub fn cartan(&self) -> CartanMatrix {
        let n = self.rank();
        let mut entries = vec![0; n * n];
        for i in 0..n {
            entries[i * n + i] = -2;
        }
        for i in 0..n.saturating_sub(1) {
            let (fwd, back) = self.branch_cartan(i);
            entries[i * n + i + 1] = fwd;
            entries[(i + 1) * n + i] = back;
        }
        CartanMatrix { n, entries }
    }

    pub fn branch_periods(&self) -> Vec<Period> {
        (0..self.branches.len())
            .map(|i| {
                let (x, y) = self.branch_cartan(i);
                match x * y {
                    0 => Period::Finite(2),
                    1 => Period::Finite(3),
                    2 => Period::Finite(4),
                    3 => Period::Finite(6),
                    _ => Period::Infinite,
                }
            })
            .collect()
    }

    /// Cartan integer of node `i` towards `i - 1` and `i + 1`, with zero past
    /// either end of the string.
    pub fn side_cartans(&self, i: usize) -> (i64, i64) {
        let left = if i == 0 { 0 } else { self.branch_cartan(i - 1).1 };
        let right = if i + 1 >= self.rank() { 0 } else { self.branch_cartan(i).0 };
        (left, right)
    }

    pub fn node_parity(&self) -> Vec<NodeParity> {
        (0..self.rank()).map(|i| self.parity_of(i)).collect()
    }

    pub fn parity_of(&self, i: usize) -> NodeParity {
        let (l, r) = self.side_cartans(i);
        match (l % 2 == 0, r % 2 == 0) {
            (true, true) => NodeParity::EE,
            (false, false) => NodeParity::OO,
            _ => NodeParity::OE,
        }
    }

    /// The same diagram read end-for-end.
    pub fn flip(&self) -> Diagram {
        let mut labels = self.labels.clone();
        labels.reverse();
        let mut branches = self.branches.clone();
        branches.reverse();
        Diagram { labels, branches }
    }

    /// The subdiagram on nodes `start..=end`, renormalized.
    pub fn window(&self, start: usize, end: usize) -> Result<Diagram> {
        if start > end || end >= self.rank() {
            return Err(Error::InvalidWindow(format!("{start}..={end} in rank {}", self.rank())));
        }
        Diagram::new(self.labels[start..=end].to_vec(), self.branches[start..end].to_vec())
    }
}

impl fmt::Display for Diagram {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.labels[0])?;
        for (b, a) in self.branches.iter().zip(&self.labels[1..]) {
            write!(f, " {} {}", b.symbol(), a)?;
        }
        Ok(())
    }
}

impl FromStr for Diagram {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Diagram::parse(s)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn d(s: &str) -> Diagram {
        Diagram::parse(s).unwrap()
    }

    #[test]
    fn parses_square_tiling_diagram() {
        let g = d("1 - 2 - 1");
        assert_eq!(g.rank(), 3);
        assert_eq!(g.labels(), &[1, 2, 1]);
        assert_eq!(g.branches(), &[Branch::Single, Branch::Single]);
    }

    #[test]
    fn parses_rank_one_and_double() {
        let g = d("1");
        assert_eq!(g.rank(), 1);
        assert!(g.branches().is_empty());
        let g = d("1 = 1");
        assert_eq!(g.branches(), &[Branch::Double]);
        assert_eq!(g.branch_periods(), vec![Period::Infinite]);
    }

    #[test]
    fn whitespace_is_insignificant() {
        assert_eq!(d("2-1-3-6"), d(" 2 -1-  3 - 6 "));
    }

    #[test]
    fn normalizes_per_component() {
        let g = d("2 - 4 , 3 - 9");
        assert_eq!(g.labels(), &[1, 2, 1, 3]);
        let g = d("4 = 4");
        assert_eq!(g.labels(), &[1, 1]);
    }

    #[test]
    fn syntax_errors_report_position() {
        match Diagram::parse("1 - x") {
            Err(Error::Syntax { pos, .. }) => assert_eq!(pos, 4),
            other => panic!("unexpected {other:?}"),
        }
        assert!(matches!(Diagram::parse("1 -"), Err(Error::Syntax { .. })));
        assert!(matches!(Diagram::parse(""), Err(Error::Syntax { .. })));
        assert!(matches!(Diagram::parse("1 2"), Err(Error::Syntax { .. })));
        assert!(matches!(Diagram::parse("0 - 1"), Err(Error::Syntax { .. })));
    }

    #[test]
    fn rejects_illegal_branches() {
        assert!(matches!(Diagram::parse("1 - 5"), Err(Error::InvalidDiagram(_))));
        assert!(matches!(Diagram::parse("2 - 3"), Err(Error::InvalidDiagram(_))));
        assert!(matches!(Diagram::parse("1 = 2"), Err(Error::InvalidDiagram(_))));
        assert!(Diagram::parse("1 , 5").is_ok());
    }

    #[test]
    fn cartan_integers_follow_label_ratio() {
        let c = d("1 - 2").cartan();
        assert_eq!((c.get(0, 1), c.get(1, 0)), (2, 1));
        let c = d("1 - 4").cartan();
        assert_eq!((c.get(0, 1), c.get(1, 0)), (4, 1));
        assert_eq!(d("1 - 4").branch_periods(), vec![Period::Infinite]);
        let c = d("3 - 1").cartan();
        assert_eq!((c.get(0, 1), c.get(1, 0)), (1, 3));
        let c = d("1 , 5").cartan();
        assert_eq!((c.get(0, 1), c.get(1, 0)), (0, 0));
        let c = d("1 = 1").cartan();
        assert_eq!((c.get(0, 1), c.get(1, 0)), (2, 2));
        let c = d("1 - 2 - 1").cartan();
        assert_eq!(c.get(0, 2), 0);
        assert!((0..3).all(|i| c.get(i, i) == -2));
    }

    #[test]
    fn periods() {
        use Period::*;
        assert_eq!(d("1 - 2 - 1").branch_periods(), vec![Finite(4), Finite(4)]);
        assert_eq!(d("2 - 1 - 3 - 6").branch_periods(), vec![Finite(4), Finite(6), Finite(4)]);
        assert_eq!(d("1 - 1 , 1").branch_periods(), vec![Finite(3), Finite(2)]);
    }

    #[test]
    fn parities() {
        assert_eq!(d("2 - 1 - 2").parity_of(1), NodeParity::EE);
        assert_eq!(d("3 - 1 - 2").parity_of(1), NodeParity::OE);
        assert_eq!(d("1 - 1").parity_of(0), NodeParity::OE);
        assert_eq!(d("2 - 1 - 1").parity_of(1), NodeParity::OE);
        assert_eq!(d("1 - 1 - 1").parity_of(1), NodeParity::OO);
        assert_eq!(d("1 = 1 - 1").parity_of(1), NodeParity::OE);
    }

    #[test]
    fn end_nodes_are_never_odd_odd() {
        for s in ["1 - 1", "2 - 1 - 3 - 6", "1 - 1 - 1", "3 - 3 - 1 - 1", "1 = 1"] {
            let p = d(s).node_parity();
            assert_ne!(p[0], NodeParity::OO);
            assert_ne!(*p.last().unwrap(), NodeParity::OO);
        }
    }

    #[test]
    fn flips() {
        assert_eq!(d("1 - 2 - 4").flip(), d("4 - 2 - 1"));
        assert_eq!(d("2 - 1 - 2").flip(), d("2 - 1 - 2"));
        assert_eq!(d("1 - 2 - 2 - 2 - 1 - 1").flip(), d("1 - 1 - 2 - 2 - 2 - 1"));
    }

    #[test]
    fn reads_files() {
        let body = "# rank 5\n1 - 2 - 2 - 4 - 4\n\n2 - 1 - 1 - 2 - 2  # (c)\n";
        let ds = Diagram::parse_lines(body).unwrap();
        assert_eq!(ds.len(), 2);
        assert_eq!(ds[1].labels(), &[2, 1, 1, 2, 2]);
    }

    fn arb_diagram() -> impl Strategy<Value = Diagram> {
        (1usize..7, any::<u64>()).prop_map(|(n, seed)| {
            let mut labels = vec![1 + seed % 3];
            let mut branches = Vec::new();
            let mut x = seed;
            for _ in 1..n {
                x = x.wrapping_mul(6364136223846793005).wrapping_add(1442695040888963407);
                let prev = *labels.last().unwrap();
                let (b, next) = match (x >> 33) % 9 {
                    0 => (Branch::None, 1 + (x >> 40) % 5),
                    1 => (Branch::Double, prev),
                    2 => (Branch::Single, prev * 2),
                    3 => (Branch::Single, prev * 3),
                    4 => (Branch::Single, prev * 4),
                    5 if prev % 2 == 0 => (Branch::Single, prev / 2),
                    6 if prev % 3 == 0 => (Branch::Single, prev / 3),
                    _ => (Branch::Single, prev),
                };
                labels.push(next);
                branches.push(b);
            }
            Diagram::new(labels, branches).unwrap()
        })
    }

    proptest! {
        #[test]
        fn render_parse_round_trip(g in arb_diagram()) {
            prop_assert_eq!(Diagram::parse(&g.to_string()).unwrap(), g);
        }

        #[test]
        fn flip_is_involutive_and_transposes_cartan(g in arb_diagram()) {
            prop_assert_eq!(g.flip().flip(), g.clone());
            let n = g.rank();
            let (c, f) = (g.cartan(), g.flip().cartan());
            for i in 0..n {
                for j in 0..n {
                    prop_assert_eq!(f.get(i, j), c.get(n - 1 - i, n - 1 - j));
                }
            }
        }

        #[test]
        fn components_are_coprime(g in arb_diagram()) {
            let mut start = 0;
            for end in 0..g.rank() {
                if end + 1 == g.rank() || g.branches()[end] == Branch::None {
                    let c = g.labels()[start..=end].iter().fold(0, |a, &b| gcd(a, b));
                    prop_assert_eq!(c, 1);
                    start = end + 1;
                }
            }
        }

        #[test]
        fn cartan_products_match_periods(g in arb_diagram()) {
            for (i, p) in g.branch_periods().into_iter().enumerate() {
                let (x, y) = g.branch_cartan(i);
                let expected = match p {
                    Period::Finite(2) => 0,
                    Period::Finite(3) => 1,
                    Period::Finite(4) => 2,
                    Period::Finite(6) => 3,
                    Period::Infinite => 4,
                    Period::Finite(_) => unreachable!(),
                };
                prop_assert_eq!(x * y, expected);
            }
        }
    }
}
