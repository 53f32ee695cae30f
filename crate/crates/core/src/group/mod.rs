//! Finite group computations for matrix groups acting on `Z_d^n`.

mod chain;
mod enumerate;
mod perm;
mod points;

use std::fmt::Debug;
use std::hash::Hash;

pub use chain::{ChainOptions, StabChain};
pub use enumerate::{enumerate_small, period_by_powers};
pub use perm::Perm;
pub use points::PointSpace;

use crate::matrix::ModMatrix;

/// A group element acting on points `0..degree`.
///
/// Products compose right to left: `a.mul(b)` applies `b` first.
pub trait Element: Clone + Eq + Hash + Send + Sync + Debug {
    fn mul(&self, other: &Self) -> Self;
    fn inverse(&self) -> Self;
    fn identity_like(&self) -> Self;
    fn is_identity(&self) -> bool;
    fn apply(&self, point: u32) -> u32;
    /// Number of points acted on, when known.
    fn degree(&self) -> u64;
    /// Preferred base points; a chain built from these is short.
    fn natural_base(&self) -> Vec<u32>;
    fn first_moved_point(&self) -> Option<u32>;
    /// Least `k >= 1` with `self^k = e`.
    fn period(&self) -> u64;
}

fn lcm(a: u64, b: u64) -> u64 {
    let (mut x, mut y) = (a, b);
    while y != 0 {
        (x, y) = (y, x % y);
    }
    a / x * b
}

impl Element for ModMatrix {
    fn mul(&self, other: &Self) -> Self {
        ModMatrix::mul(self, other)
    }

    fn inverse(&self) -> Self {
        ModMatrix::inverse(self).expect("group elements are invertible")
    }

    fn identity_like(&self) -> Self {
        ModMatrix::identity(self.dim(), self.modulus())
    }

    fn is_identity(&self) -> bool {
        ModMatrix::is_identity(self)
    }

    fn apply(&self, point: u32) -> u32 {
        let space = PointSpace::unchecked(u64::from(self.modulus()), self.dim());
        space.encode(&self.mul_vec(&space.decode(point)))
    }

    fn degree(&self) -> u64 {
        u64::from(self.modulus()).saturating_pow(self.dim() as u32)
    }

    fn natural_base(&self) -> Vec<u32> {
        let space = PointSpace::unchecked(u64::from(self.modulus()), self.dim());
        (0..self.dim()).map(|k| space.basis(k)).collect()
    }

    fn first_moved_point(&self) -> Option<u32> {
        let space = PointSpace::unchecked(u64::from(self.modulus()), self.dim());
        (0..self.dim()).find_map(|k| {
            let col = self.column(k);
            let moved = (0..self.dim()).any(|i| col[i] != u32::from(i == k));
            moved.then(|| space.basis(k))
        })
    }

    /// Least common multiple of the cycle lengths of the basis vectors.
    fn period(&self) -> u64 {
        let n = self.dim();
        let mut acc = 1u64;
        for k in 0..n {
            let start = self.column(k);
            let mut v = start;
            let mut len = 1u64;
            let mut e = [0u32; crate::matrix::MAX_RANK];
            e[k] = 1 % self.modulus();
            while v[..n] != e[..n] {
                v = self.mul_vec(&v);
                len += 1;
            }
            acc = lcm(acc, len);
        }
        acc
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn matrix_period_is_lcm_of_basis_cycles() {
        let m = ModMatrix::from_rows(&[vec![1, 1], vec![0, 1]], 6).unwrap();
        assert_eq!(Element::period(&m), 6);
        assert_eq!(period_by_powers(&m, 100), Some(6));
        let id = ModMatrix::identity(3, 5);
        assert_eq!(Element::period(&id), 1);
        let neg = ModMatrix::from_rows(&[vec![-1]], 3).unwrap();
        assert_eq!(Element::period(&neg), 2);
    }

    #[test]
    fn matrix_action_on_points() {
        let neg = ModMatrix::from_rows(&[vec![-1]], 3).unwrap();
        assert_eq!((0..3).map(|p| neg.apply(p)).collect::<Vec<_>>(), vec![0, 2, 1]);
        assert_eq!(neg.first_moved_point(), Some(1));
        assert_eq!(ModMatrix::identity(2, 4).first_moved_point(), None);
    }
}
