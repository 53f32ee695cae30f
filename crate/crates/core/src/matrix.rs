//! Dense square matrices over the integers and over `Z_d`.

use std::fmt;
use std::hash::{Hash, Hasher};

use crate::error::{Error, Result};

/// Largest rank supported by [`ModMatrix`].
pub const MAX_RANK: usize = 8;

/// Square integer matrix, row-major.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct IntMatrix {
    n: usize,
    e: Vec<i64>,
}

impl IntMatrix {
    pub fn identity(n: usize) -> Self {
        let mut e = vec![0; n * n];
        for i in 0..n {
            e[i * n + i] = 1;
        }
        IntMatrix { n, e }
    }

    pub fn from_rows(rows: &[Vec<i64>]) -> Self {
        let n = rows.len();
        assert!(rows.iter().all(|r| r.len() == n), "matrix must be square");
        IntMatrix { n, e: rows.concat() }
    }

    pub fn dim(&self) -> usize {
        self.n
    }

    pub fn get(&self, i: usize, j: usize) -> i64 {
        self.e[i * self.n + j]
    }

    pub fn set(&mut self, i: usize, j: usize, v: i64) {
        self.e[i * self.n + j] = v;
    }

    pub fn rows(&self) -> Vec<Vec<i64>> {
        self.e.chunks(self.n).map(|r| r.to_vec()).collect()
    }

    /// Column `j`, the image of the `j`-th basis vector.
    pub fn column(&self, j: usize) -> Vec<i64> {
        (0..self.n).map(|i| self.get(i, j)).collect()
    }

    pub fn is_identity(&self) -> bool {
        *self == IntMatrix::identity(self.n)
    }

    /// Matrix product `self * other` (apply `other` first).
    pub fn mul(&self, other: &IntMatrix) -> IntMatrix {
        assert_eq!(self.n, other.n);
        let n = self.n;
        let mut e = vec![0; n * n];
        for i in 0..n {
            for k in 0..n {
                let a = self.e[i * n + k];
                if a == 0 {
                    continue;
                }
                for j in 0..n {
                    e[i * n + j] += a * other.e[k * n + j];
                }
            }
        }
        IntMatrix { n, e }
    }

    pub fn pow(&self, mut k: u64) -> IntMatrix {
        let mut base = self.clone();
        let mut acc = IntMatrix::identity(self.n);
        while k > 0 {
            if k & 1 == 1 {
                acc = acc.mul(&base);
            }
            k >>= 1;
            if k > 0 {
                base = base.mul(&base);
            }
        }
        acc
    }

    pub fn mul_vec(&self, v: &[i64]) -> Vec<i64> {
        (0..self.n)
            .map(|i| (0..self.n).map(|j| self.get(i, j) * v[j]).sum())
            .collect()
    }

    pub fn sub_identity(&self) -> IntMatrix {
        let mut m = self.clone();
        for i in 0..self.n {
            m.e[i * self.n + i] -= 1;
        }
        m
    }

    /// Entrywise reduction into canonical residues.
    pub fn reduce(&self, modulus: u64) -> Result<ModMatrix> {
        if modulus < 2 {
            return Err(Error::InvalidModulus(modulus));
        }
        if modulus > u64::from(u32::MAX) {
            return Err(Error::InvalidModulus(modulus));
        }
        if self.n > MAX_RANK {
            return Err(Error::InvalidDiagram(format!(
                "rank {} exceeds the supported maximum of {MAX_RANK}",
                self.n
            )));
        }
        let mut m = ModMatrix::zero(self.n, modulus as u32);
        for i in 0..self.n {
            for j in 0..self.n {
                m.set(i, j, self.get(i, j).rem_euclid(modulus as i64) as u32);
            }
        }
        Ok(m)
    }
}

impl fmt::Debug for IntMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_list().entries(self.e.chunks(self.n)).finish()
    }
}

/// Square matrix over `Z_d` of rank at most [`MAX_RANK`], stored inline so
/// that group elements are cheap to copy and hash.
#[derive(Clone, Copy)]
pub struct ModMatrix {
    n: u8,
    modulus: u32,
    e: [u32; MAX_RANK * MAX_RANK],
}

impl PartialEq for ModMatrix {
    fn eq(&self, other: &Self) -> bool {
        self.n == other.n && self.modulus == other.modulus && self.entries() == other.entries()
    }
}

impl Eq for ModMatrix {}

impl Hash for ModMatrix {
    fn hash<H: Hasher>(&self, state: &mut H) {
        self.entries().hash(state);
    }
}

impl ModMatrix {
    pub fn zero(n: usize, modulus: u32) -> Self {
        assert!(n <= MAX_RANK);
        ModMatrix { n: n as u8, modulus, e: [0; MAX_RANK * MAX_RANK] }
    }

    pub fn identity(n: usize, modulus: u32) -> Self {
        let mut m = ModMatrix::zero(n, modulus);
        for i in 0..n {
            m.e[i * n + i] = 1 % modulus;
        }
        m
    }

    pub fn from_rows(rows: &[Vec<i64>], modulus: u32) -> Result<Self> {
        IntMatrix::from_rows(rows).reduce(u64::from(modulus))
    }

    pub fn dim(&self) -> usize {
        self.n as usize
    }

    pub fn modulus(&self) -> u32 {
        self.modulus
    }

    fn entries(&self) -> &[u32] {
        &self.e[..self.dim() * self.dim()]
    }

    pub fn get(&self, i: usize, j: usize) -> u32 {
        self.e[i * self.dim() + j]
    }

    pub fn set(&mut self, i: usize, j: usize, v: u32) {
        let n = self.dim();
        self.e[i * n + j] = v % self.modulus;
    }

    pub fn rows(&self) -> Vec<Vec<u32>> {
        self.entries().chunks(self.dim()).map(|r| r.to_vec()).collect()
    }

    pub fn is_identity(&self) -> bool {
        *self == ModMatrix::identity(self.dim(), self.modulus)
    }

    /// Matrix product `self * other` (apply `other` first).
    pub fn mul(&self, other: &ModMatrix) -> ModMatrix {
        debug_assert_eq!(self.n, other.n);
        debug_assert_eq!(self.modulus, other.modulus);
        let n = self.dim();
        let d = u64::from(self.modulus);
        let mut out = ModMatrix::zero(n, self.modulus);
        for i in 0..n {
            let mut row = [0u64; MAX_RANK];
            for k in 0..n {
                let a = u64::from(self.e[i * n + k]);
                if a == 0 {
                    continue;
                }
                for (j, r) in row.iter_mut().enumerate().take(n) {
                    *r += a * u64::from(other.e[k * n + j]);
                }
                if d > 1 << 16 {
                    row.iter_mut().take(n).for_each(|r| *r %= d);
                }
            }
            for j in 0..n {
                out.e[i * n + j] = (row[j] % d) as u32;
            }
        }
        out
    }

    pub fn pow(&self, mut k: u64) -> ModMatrix {
        let mut base = *self;
        let mut acc = ModMatrix::identity(self.dim(), self.modulus);
        while k > 0 {
            if k & 1 == 1 {
                acc = acc.mul(&base);
            }
            k >>= 1;
            if k > 0 {
                base = base.mul(&base);
            }
        }
        acc
    }

    /// Image of a column vector.
    pub fn mul_vec(&self, v: &[u32]) -> [u32; MAX_RANK] {
        let n = self.dim();
        let d = u64::from(self.modulus);
        let mut out = [0u32; MAX_RANK];
        for (i, o) in out.iter_mut().enumerate().take(n) {
            let mut acc = 0u64;
            for j in 0..n {
                acc += u64::from(self.e[i * n + j]) * u64::from(v[j]);
                if d > 1 << 16 {
                    acc %= d;
                }
            }
            *o = (acc % d) as u32;
        }
        out
    }

    pub fn column(&self, j: usize) -> [u32; MAX_RANK] {
        let mut out = [0u32; MAX_RANK];
        for (i, o) in out.iter_mut().enumerate().take(self.dim()) {
            *o = self.get(i, j);
        }
        out
    }

    /// Inverse by unimodular row reduction over the integers followed by
    /// scaling with a unit of `Z_d`.
    pub fn inverse(&self) -> Result<ModMatrix> {
        let n = self.dim();
        let d = i128::from(self.modulus);
        let mut a: Vec<Vec<i128>> = (0..n)
            .map(|i| {
                let mut row: Vec<i128> = (0..n).map(|j| i128::from(self.get(i, j))).collect();
                row.extend((0..n).map(|j| i128::from(i == j)));
                row
            })
            .collect();
        let reduce_row = |row: &mut Vec<i128>| row.iter_mut().for_each(|x| *x = x.rem_euclid(d));
        for c in 0..n {
            loop {
                let mut nz: Vec<usize> = (c..n).filter(|&r| a[r][c] != 0).collect();
                if nz.is_empty() {
                    return Err(Error::NotInvertible(u64::from(self.modulus)));
                }
                nz.sort_by_key(|&r| a[r][c]);
                let p = nz[0];
                if nz.len() == 1 {
                    a.swap(c, p);
                    break;
                }
                for &r in &nz[1..] {
                    let q = a[r][c] / a[p][c];
                    for k in 0..2 * n {
                        a[r][k] -= q * a[p][k];
                    }
                    reduce_row(&mut a[r]);
                }
            }
            let inv = mod_inverse(a[c][c].rem_euclid(d), d)
                .ok_or(Error::NotInvertible(u64::from(self.modulus)))?;
            for k in 0..2 * n {
                a[c][k] = (a[c][k] * inv).rem_euclid(d);
            }
            for r in 0..n {
                if r != c && a[r][c] != 0 {
                    let f = a[r][c];
                    for k in 0..2 * n {
                        a[r][k] = (a[r][k] - f * a[c][k]).rem_euclid(d);
                    }
                }
            }
        }
        let mut out = ModMatrix::zero(n, self.modulus);
        for i in 0..n {
            for j in 0..n {
                out.e[i * n + j] = a[i][n + j] as u32;
            }
        }
        Ok(out)
    }

    /// Lifts entries to their canonical integer representatives.
    pub fn lift(&self) -> IntMatrix {
        let rows: Vec<Vec<i64>> =
            self.rows().into_iter().map(|r| r.into_iter().map(i64::from).collect()).collect();
        IntMatrix::from_rows(&rows)
    }
}

fn mod_inverse(a: i128, m: i128) -> Option<i128> {
    let (mut r0, mut r1) = (a, m);
    let (mut s0, mut s1) = (1i128, 0i128);
    while r1 != 0 {
        let q = r0 / r1;
        (r0, r1) = (r1, r0 - q * r1);
        (s0, s1) = (s1, s0 - q * s1);
    }
    (r0 == 1 || m == 1).then(|| s0.rem_euclid(m))
}

impl fmt::Debug for ModMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "mod {} ", self.modulus)?;
        f.debug_list().entries(self.entries().chunks(self.dim())).finish()
    }
}
