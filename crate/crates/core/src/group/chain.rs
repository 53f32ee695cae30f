//! Deterministic Schreier–Sims.

use num_bigint::BigUint;
use rustc_hash::{FxHashMap, FxHashSet};

use super::points::DEFAULT_POINT_LIMIT;
use super::Element;
use crate::error::{Error, Result};

const DENSE_INDEX_LIMIT: u64 = 1 << 20;

/// Limits and base hints for chain construction.
#[derive(Debug, Clone)]
pub struct ChainOptions {
    /// Abort once the group is known to be larger than this.
    pub order_limit: Option<u128>,
    /// Largest admissible number of points.
    pub point_limit: u64,
    /// Base points to use first, in order.
    pub base: Vec<u32>,
}

impl Default for ChainOptions {
    fn default() -> Self {
        ChainOptions { order_limit: None, point_limit: DEFAULT_POINT_LIMIT, base: Vec::new() }
    }
}

#[derive(Debug, Clone)]
enum OrbitIndex {
    Dense(Vec<u32>),
    Sparse(FxHashMap<u32, u32>),
}

impl OrbitIndex {
    fn new(degree: u64) -> Self {
        if degree <= DENSE_INDEX_LIMIT {
            OrbitIndex::Dense(vec![u32::MAX; degree as usize])
        } else {
            OrbitIndex::Sparse(FxHashMap::default())
        }
    }

    fn get(&self, p: u32) -> Option<usize> {
        match self {
            OrbitIndex::Dense(v) => match v[p as usize] {
                u32::MAX => None,
                i => Some(i as usize),
            },
            OrbitIndex::Sparse(m) => m.get(&p).map(|&i| i as usize),
        }
    }

    fn insert(&mut self, p: u32, i: usize) {
        match self {
            OrbitIndex::Dense(v) => v[p as usize] = i as u32,
            OrbitIndex::Sparse(m) => {
                m.insert(p, i as u32);
            }
        }
    }
}

#[derive(Debug, Clone)]
struct Level<E> {
    base: u32,
    gens: Vec<(E, E)>,
    orbit: Vec<u32>,
    index: OrbitIndex,
    reps: Vec<E>,
    inv_reps: Vec<E>,
    /// Per orbit point, how many of `gens` have had their Schreier
    /// generator sifted.
    tested: Vec<usize>,
}

impl<E: Element> Level<E> {
    fn new(base: u32, identity: &E, degree: u64) -> Self {
        let mut index = OrbitIndex::new(degree);
        index.insert(base, 0);
        Level {
            base,
            gens: Vec::new(),
            orbit: vec![base],
            index,
            reps: vec![identity.clone()],
            inv_reps: vec![identity.clone()],
            tested: vec![0],
        }
    }

    fn push_point(&mut self, q: u32, rep: E, inv: E) {
        self.index.insert(q, self.orbit.len());
        self.orbit.push(q);
        self.reps.push(rep);
        self.inv_reps.push(inv);
        self.tested.push(0);
    }

    fn add_gen(&mut self, g: E) {
        let g_inv = g.inverse();
        let old = self.orbit.len();
        for k in 0..old {
            let q = g.apply(self.orbit[k]);
            if self.index.get(q).is_none() {
                let rep = g.mul(&self.reps[k]);
                let inv = self.inv_reps[k].mul(&g_inv);
                self.push_point(q, rep, inv);
            }
        }
        self.gens.push((g, g_inv));
        let mut k = old;
        while k < self.orbit.len() {
            for gi in 0..self.gens.len() {
                let q = self.gens[gi].0.apply(self.orbit[k]);
                if self.index.get(q).is_none() {
                    let rep = self.gens[gi].0.mul(&self.reps[k]);
                    let inv = self.inv_reps[k].mul(&self.gens[gi].1);
                    self.push_point(q, rep, inv);
                }
            }
            k += 1;
        }
    }
}

/// Base and strong generating set with explicit transversals.
#[derive(Debug, Clone)]
pub struct StabChain<E> {
    identity: E,
    gens: Vec<E>,
    levels: Vec<Level<E>>,
    degree: u64,
    base_hints: Vec<u32>,
    order_limit: Option<u128>,
}

impl<E: Element> StabChain<E> {
    pub fn new(identity: E, gens: &[E]) -> Result<Self> {
        Self::with_options(identity, gens, &ChainOptions::default())
    }

    pub fn with_options(identity: E, gens: &[E], opts: &ChainOptions) -> Result<Self> {
        let degree = identity.degree();
        if degree > opts.point_limit {
            return Err(Error::PointSpaceOverflow {
                modulus: degree,
                rank: 1,
                limit: opts.point_limit,
            });
        }
        let mut base_hints = opts.base.clone();
        for p in identity.natural_base() {
            if !base_hints.contains(&p) {
                base_hints.push(p);
            }
        }
        let gens: Vec<E> = gens.iter().filter(|g| !g.is_identity()).cloned().collect();
        let mut chain = StabChain {
            identity,
            gens: gens.clone(),
            levels: Vec::new(),
            degree,
            base_hints,
            order_limit: opts.order_limit,
        };
        for p in opts.base.iter().copied() {
            if chain.levels.iter().all(|l| l.base != p) {
                chain.levels.push(Level::new(p, &chain.identity, degree));
            }
        }
        for g in &gens {
            if chain.levels.iter().all(|l| g.apply(l.base) == l.base) {
                let b = chain.pick_base(g);
                chain.levels.push(Level::new(b, &chain.identity, degree));
            }
        }
        for g in &gens {
            for l in 0..chain.levels.len() {
                chain.levels[l].add_gen(g.clone());
                let b = chain.levels[l].base;
                if g.apply(b) != b {
                    break;
                }
            }
        }
        chain.check_order()?;
        chain.schreier_sims()?;
        Ok(chain)
    }

    fn pick_base(&self, g: &E) -> u32 {
        self.base_hints
            .iter()
            .copied()
            .find(|&p| g.apply(p) != p && self.levels.iter().all(|l| l.base != p))
            .or_else(|| g.first_moved_point())
            .expect("non-identity element moves a point")
    }

    fn check_order(&self) -> Result<()> {
        if let Some(limit) = self.order_limit {
            let mut acc: u128 = 1;
            for l in &self.levels {
                acc = acc.saturating_mul(l.orbit.len() as u128);
                if acc > limit {
                    return Err(Error::OrderGuard(limit));
                }
            }
        }
        Ok(())
    }

    fn schreier_sims(&mut self) -> Result<()> {
        let mut i = self.levels.len() as isize - 1;
        while i >= 0 {
            match self.test_level(i as usize)? {
                Some(j) => i = j as isize,
                None => i -= 1,
            }
        }
        Ok(())
    }

    /// Sifts untested Schreier generators of level `li`; on the first
    /// nontrivial residue, adds it and returns the deepest level touched.
    fn test_level(&mut self, li: usize) -> Result<Option<usize>> {
        let mut k = 0;
        while k < self.levels[li].orbit.len() {
            while self.levels[li].tested[k] < self.levels[li].gens.len() {
                let level = &self.levels[li];
                let gi = level.tested[k];
                let s = &level.gens[gi].0;
                let q = s.apply(level.orbit[k]);
                let qi = level.index.get(q).expect("orbit is closed");
                let h = level.inv_reps[qi].mul(&s.mul(&level.reps[k]));
                self.levels[li].tested[k] += 1;
                if h.is_identity() {
                    continue;
                }
                let (residue, j) = self.sift(h, li + 1);
                if !residue.is_identity() {
                    self.add_strong(residue, li + 1, j)?;
                    return Ok(Some(j));
                }
            }
            k += 1;
        }
        Ok(None)
    }

    fn add_strong(&mut self, h: E, from: usize, to: usize) -> Result<()> {
        if to == self.levels.len() {
            let b = self.pick_base(&h);
            self.levels.push(Level::new(b, &self.identity, self.degree));
        }
        for l in from..=to {
            self.levels[l].add_gen(h.clone());
        }
        self.check_order()
    }

    /// Strips `h` through levels `start..`, returning the residue and the
    /// level at which stripping stopped.
    fn sift(&self, mut h: E, start: usize) -> (E, usize) {
        for (l, level) in self.levels.iter().enumerate().skip(start) {
            let b = h.apply(level.base);
            match level.index.get(b) {
                Some(idx) => h = level.inv_reps[idx].mul(&h),
                None => return (h, l),
            }
        }
        (h, self.levels.len())
    }

    pub fn contains(&self, g: &E) -> bool {
        g.degree() == self.degree && self.sift(g.clone(), 0).0.is_identity()
    }

    pub fn order_u128(&self) -> u128 {
        self.levels.iter().map(|l| l.orbit.len() as u128).product()
    }

    pub fn order(&self) -> BigUint {
        self.levels.iter().fold(BigUint::from(1u32), |acc, l| acc * BigUint::from(l.orbit.len()))
    }

    pub fn base(&self) -> Vec<u32> {
        self.levels.iter().map(|l| l.base).collect()
    }

    pub fn orbit_sizes(&self) -> Vec<usize> {
        self.levels.iter().map(|l| l.orbit.len()).collect()
    }

    pub fn generators(&self) -> &[E] {
        &self.gens
    }

    pub fn identity(&self) -> &E {
        &self.identity
    }

    pub fn strong_generators(&self) -> Vec<E> {
        let mut out: Vec<E> = Vec::new();
        for l in &self.levels {
            for (g, _) in &l.gens {
                if !out.contains(g) {
                    out.push(g.clone());
                }
            }
        }
        out
    }

    /// Canonical representative of the left coset `x H`, where `H` is the
    /// group of this chain: at each level the transversal element is chosen
    /// to minimize the image of the base point.
    pub fn canonical_coset(&self, x: &E) -> E {
        let mut x = x.clone();
        for level in &self.levels {
            let (k, _) = level
                .orbit
                .iter()
                .enumerate()
                .map(|(k, &p)| (k, x.apply(p)))
                .min_by_key(|&(_, img)| img)
                .expect("orbit is nonempty");
            if k != 0 {
                x = x.mul(&level.reps[k]);
            }
        }
        x
    }

    /// `|A ∩ B|`, from the orbit of the coset `B` under left multiplication
    /// by the smaller group.
    pub fn intersection_order(a: &Self, b: &Self, orbit_limit: usize) -> Result<u128> {
        let (act, sub) = if a.order_u128() <= b.order_u128() { (a, b) } else { (b, a) };
        let orbit = Self::coset_orbit(act, sub, orbit_limit)?;
        Ok(act.order_u128() / orbit as u128)
    }

    fn coset_orbit(act: &Self, sub: &Self, orbit_limit: usize) -> Result<usize> {
        let start = sub.canonical_coset(&sub.identity);
        let mut seen: FxHashSet<E> = FxHashSet::default();
        seen.insert(start.clone());
        let mut queue = vec![start];
        let mut k = 0;
        while k < queue.len() {
            for g in &act.gens {
                let y = sub.canonical_coset(&g.mul(&queue[k]));
                if seen.insert(y.clone()) {
                    if seen.len() > orbit_limit {
                        return Err(Error::OrbitGuard(orbit_limit));
                    }
                    queue.push(y);
                }
            }
            k += 1;
        }
        Ok(queue.len())
    }
}
