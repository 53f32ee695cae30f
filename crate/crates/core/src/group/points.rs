use crate::error::{Error, Result};
use crate::matrix::MAX_RANK;

/// Default bound on the number of points, `2^31`.
pub const DEFAULT_POINT_LIMIT: u64 = 1 << 31;

/// Mixed-radix indexing of `Z_d^n`, little-endian in basis order.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct PointSpace {
    modulus: u64,
    rank: usize,
}

impl PointSpace {
    pub fn new(modulus: u64, rank: usize) -> Result<Self> {
        Self::with_limit(modulus, rank, DEFAULT_POINT_LIMIT)
    }

    pub fn with_limit(modulus: u64, rank: usize, limit: u64) -> Result<Self> {
        if modulus < 2 {
            return Err(Error::InvalidModulus(modulus));
        }
        let overflow = Error::PointSpaceOverflow { modulus, rank, limit };
        if rank > MAX_RANK {
            return Err(overflow);
        }
        match modulus.checked_pow(rank as u32) {
            Some(size) if size <= limit => Ok(PointSpace { modulus, rank }),
            _ => Err(overflow),
        }
    }

    pub(crate) fn unchecked(modulus: u64, rank: usize) -> Self {
        PointSpace { modulus, rank }
    }

    pub fn size(&self) -> u64 {
        self.modulus.pow(self.rank as u32)
    }

    pub fn rank(&self) -> usize {
        self.rank
    }

    pub fn modulus(&self) -> u64 {
        self.modulus
    }

    pub fn encode(&self, v: &[u32]) -> u32 {
        let mut p = 0u64;
        for k in (0..self.rank).rev() {
            p = p * self.modulus + u64::from(v[k]);
        }
        p as u32
    }

    pub fn decode(&self, mut p: u32) -> [u32; MAX_RANK] {
        let mut v = [0u32; MAX_RANK];
        let d = self.modulus as u32;
        for x in v.iter_mut().take(self.rank) {
            *x = p % d;
            p /= d;
        }
        v
    }

    /// Index of the basis vector `b_k`.
    pub fn basis(&self, k: usize) -> u32 {
        self.modulus.pow(k as u32) as u32
    }
}
