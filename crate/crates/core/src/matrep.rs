//! Reflection representations over the integers and their reductions.

use num_rational::Ratio;
use num_traits::{One, Zero};
use serde_json::{json, Value};

use crate::diagram::Diagram;
use crate::error::{Error, Result};
use crate::matrix::{IntMatrix, ModMatrix};
use crate::patterns;

/// Exact generating reflections `r_i(b_j) = b_j + m_ij b_i`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct IntMatrixRep {
    diagram: Diagram,
    gens: Vec<IntMatrix>,
}

impl IntMatrixRep {
    pub fn new(diagram: &Diagram) -> Self {
        let n = diagram.rank();
        let m = diagram.cartan();
        let gens = (0..n)
            .map(|i| {
                let mut g = IntMatrix::identity(n);
                for j in 0..n {
                    let v = g.get(i, j) + m.get(i, j);
                    g.set(i, j, v);
                }
                g
            })
            .collect();
        IntMatrixRep { diagram: diagram.clone(), gens }
    }

    pub fn diagram(&self) -> &Diagram {
        &self.diagram
    }

    pub fn rank(&self) -> usize {
        self.gens.len()
    }

    pub fn gens(&self) -> &[IntMatrix] {
        &self.gens
    }

    pub fn gen(&self, i: usize) -> &IntMatrix {
        &self.gens[i]
    }

    /// Product `r_{w[0]} r_{w[1]} ...` of generators.
    pub fn word(&self, word: &[usize]) -> Result<IntMatrix> {
        let mut acc = IntMatrix::identity(self.rank());
        for &i in word {
            let g = self
                .gens
                .get(i)
                .ok_or_else(|| Error::InvalidWord(format!("generator index {i} out of range")))?;
            acc = acc.mul(g);
        }
        Ok(acc)
    }

    pub fn reduce(&self, modulus: u64) -> Result<ModMatrixRep> {
        let gens = self.gens.iter().map(|g| g.reduce(modulus)).collect::<Result<Vec<_>>>()?;
        Ok(ModMatrixRep { modulus, gens, diagram: Some(self.diagram.clone()) })
    }
}

/// Generators reduced modulo `d`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ModMatrixRep {
    modulus: u64,
    gens: Vec<ModMatrix>,
    diagram: Option<Diagram>,
}

impl ModMatrixRep {
    /// The reduced reflection representation of a diagram.
    pub fn new(diagram: &Diagram, modulus: u64) -> Result<Self> {
        IntMatrixRep::new(diagram).reduce(modulus)
    }

    /// A representation from arbitrary matrices, with no diagram attached.
    pub fn from_gens(modulus: u64, gens: Vec<ModMatrix>) -> Result<Self> {
        if modulus < 2 {
            return Err(Error::InvalidModulus(modulus));
        }
        if gens.iter().any(|g| u64::from(g.modulus()) != modulus) {
            return Err(Error::Internal("generator modulus mismatch".into()));
        }
        Ok(ModMatrixRep { modulus, gens, diagram: None })
    }

    pub fn modulus(&self) -> u64 {
        self.modulus
    }

    pub fn rank(&self) -> usize {
        self.gens.len()
    }

    pub fn dim(&self) -> usize {
        self.gens.first().map_or(0, |g| g.dim())
    }

    pub fn gens(&self) -> &[ModMatrix] {
        &self.gens
    }

    pub fn diagram(&self) -> Option<&Diagram> {
        self.diagram.as_ref()
    }

    /// Generators selected by index, in the given order.
    pub fn select(&self, indices: &[usize]) -> Result<Vec<ModMatrix>> {
        indices
            .iter()
            .map(|&i| {
                self.gens
                    .get(i)
                    .copied()
                    .ok_or_else(|| Error::InvalidWindow(format!("generator {i} out of range")))
            })
            .collect()
    }

    pub fn to_json(&self) -> Value {
        let gens: Vec<Vec<u32>> =
            self.gens.iter().map(|g| g.rows().into_iter().flatten().collect()).collect();
        json!({ "modulus": self.modulus, "gens": gens })
    }
}

/// Gram matrix `[b_i . b_j]` in exact rationals.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GramForm {
    entries: Vec<Vec<Ratio<i64>>>,
}

impl GramForm {
    pub fn new(diagram: &Diagram) -> Self {
        let n = diagram.rank();
        let m = diagram.cartan();
        let labels = diagram.labels();
        let entries = (0..n)
            .map(|i| {
                (0..n)
                    .map(|j| {
                        if i == j {
                            Ratio::from_integer(labels[i] as i64)
                        } else {
                            Ratio::new(-m.get(i, j) * labels[i] as i64, 2)
                        }
                    })
                    .collect()
            })
            .collect();
        GramForm { entries }
    }

    pub fn get(&self, i: usize, j: usize) -> Ratio<i64> {
        self.entries[i][j]
    }

    pub fn dim(&self) -> usize {
        self.entries.len()
    }

    /// `x . y` for integer coordinate vectors.
    pub fn pair(&self, x: &[i64], y: &[i64]) -> Ratio<i64> {
        let mut acc = Ratio::zero();
        for (i, &a) in x.iter().enumerate() {
            if a == 0 {
                continue;
            }
            for (j, &b) in y.iter().enumerate() {
                acc += self.entries[i][j] * (a * b);
            }
        }
        acc
    }

    /// Entries reduced modulo `d`, available only when `gcd(6, d) = 1`.
    pub fn reduce(&self, d: u64) -> Option<Vec<Vec<u64>>> {
        if d < 2 || d.is_multiple_of(2) || d.is_multiple_of(3) {
            return None;
        }
        let d = d as i64;
        let inv2 = (d + 1) / 2;
        Some(
            self.entries
                .iter()
                .map(|row| {
                    row.iter()
                        .map(|r| {
                            let num = r.numer().rem_euclid(d);
                            let den = if r.denom().is_one() { 1 } else { inv2 };
                            ((num * den).rem_euclid(d)) as u64
                        })
                        .collect()
                })
                .collect(),
        )
    }
}

/// Radical vector of a Euclidean window, as coefficients on the window's
/// nodes `start..start + coeffs.len()`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RadicalVector {
    pub start: usize,
    pub coeffs: Vec<i64>,
    /// Index of the affine node (coefficient 1).
    pub affine: usize,
}

impl RadicalVector {
    /// The vector in the ambient basis of rank `n`.
    pub fn ambient(&self, n: usize) -> Vec<i64> {
        let mut v = vec![0; n];
        v[self.start..self.start + self.coeffs.len()].copy_from_slice(&self.coeffs);
        v
    }

    pub fn end(&self) -> usize {
        self.start + self.coeffs.len() - 1
    }
}

/// Radical vector of nodes `start..=end`, taken from the pattern table and
/// checked to be fixed by every window reflection. The affine node is the
/// left end when the window matches with that orientation, otherwise the
/// right end.
pub fn radical_vector(d: &Diagram, start: usize, end: usize) -> Result<RadicalVector> {
    let len = end.checked_sub(start).map(|x| x + 1).unwrap_or(0);
    let rv = if let Some(p) = patterns::euclidean_left(d, start, end) {
        RadicalVector { start, coeffs: p.kind.radical(len), affine: start }
    } else if let Some(p) = patterns::euclidean_right(d, start, end) {
        let mut coeffs = p.kind.radical(len);
        coeffs.reverse();
        RadicalVector { start, coeffs, affine: end }
    } else {
        return Err(Error::NotEuclidean(format!("{start}..={end}")));
    };
    let rep = IntMatrixRep::new(d);
    let c = rv.ambient(d.rank());
    for k in start..=end {
        if rep.gen(k).mul_vec(&c) != c {
            return Err(Error::Internal(format!("radical vector not fixed by r{k}")));
        }
    }
    Ok(rv)
}

/// True when `g - 1` maps each basis vector `b_k` of the window into the
/// `Z_d`-span of `c`.
pub fn is_transvection(g: &ModMatrix, c: &RadicalVector) -> bool {
    let n = g.dim();
    let d = u64::from(g.modulus());
    let cv: Vec<u64> = c.ambient(n).iter().map(|&x| x.rem_euclid(d as i64) as u64).collect();
    let affine = c.affine;
    (c.start..=c.end()).all(|k| {
        let mut col: Vec<u64> = g.column(k)[..n].iter().map(|&x| u64::from(x)).collect();
        col[k] = (col[k] + d - 1) % d;
        let lambda = col[affine];
        (0..n).all(|i| col[i] == lambda * cv[i] % d)
    })
}

/// Exact version of [`is_transvection`] over the integers.
pub fn is_int_transvection(g: &IntMatrix, c: &RadicalVector) -> bool {
    let n = g.dim();
    let cv = c.ambient(n);
    (c.start..=c.end()).all(|k| {
        let mut col = g.column(k);
        col[k] -= 1;
        let lambda = col[c.affine];
        (0..n).all(|i| col[i] == lambda * cv[i])
    })
}
