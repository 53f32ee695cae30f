use super::{lcm, Element};

/// Permutation of `0..len`, stored as its image list.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Perm {
    images: Vec<u32>,
}

impl Perm {
    pub fn identity(degree: usize) -> Self {
        Perm { images: (0..degree as u32).collect() }
    }

    /// Builds a permutation from images, checking bijectivity.
    pub fn from_images(images: Vec<u32>) -> Option<Self> {
        let mut seen = vec![false; images.len()];
        for &i in &images {
            let slot = seen.get_mut(i as usize)?;
            if *slot {
                return None;
            }
            *slot = true;
        }
        Some(Perm { images })
    }

    /// Permutation given by disjoint cycles on `0..degree`.
    pub fn from_cycles(degree: usize, cycles: &[&[u32]]) -> Option<Self> {
        let mut images: Vec<u32> = (0..degree as u32).collect();
        for c in cycles {
            for (k, &p) in c.iter().enumerate() {
                *images.get_mut(p as usize)? = c[(k + 1) % c.len()];
            }
        }
        Perm::from_images(images)
    }

    /// The permutation induced by any element on `0..degree`.
    pub fn induced<E: Element>(g: &E, degree: usize) -> Self {
        Perm { images: (0..degree as u32).map(|p| g.apply(p)).collect() }
    }

    pub fn images(&self) -> &[u32] {
        &self.images
    }

    pub fn len(&self) -> usize {
        self.images.len()
    }

    pub fn is_empty(&self) -> bool {
        self.images.is_empty()
    }
}

impl Element for Perm {
    fn mul(&self, other: &Self) -> Self {
        Perm { images: other.images.iter().map(|&p| self.images[p as usize]).collect() }
    }

    fn inverse(&self) -> Self {
        let mut images = vec![0; self.images.len()];
        for (p, &q) in self.images.iter().enumerate() {
            images[q as usize] = p as u32;
        }
        Perm { images }
    }

    fn identity_like(&self) -> Self {
        Perm::identity(self.images.len())
    }

    fn is_identity(&self) -> bool {
        self.images.iter().enumerate().all(|(p, &q)| p as u32 == q)
    }

    fn apply(&self, point: u32) -> u32 {
        self.images[point as usize]
    }

    fn degree(&self) -> u64 {
        self.images.len() as u64
    }

    fn natural_base(&self) -> Vec<u32> {
        Vec::new()
    }

    fn first_moved_point(&self) -> Option<u32> {
        self.images.iter().enumerate().find(|(p, &q)| *p as u32 != q).map(|(p, _)| p as u32)
    }

    fn period(&self) -> u64 {
        let mut seen = vec![false; self.images.len()];
        let mut acc = 1;
        for start in 0..self.images.len() {
            if seen[start] {
                continue;
            }
            let mut len = 0;
            let mut p = start;
            while !seen[p] {
                seen[p] = true;
                p = self.images[p] as usize;
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
    fn composition_applies_right_first() {
        let a = Perm::from_cycles(3, &[&[0, 1]]).unwrap();
        let b = Perm::from_cycles(3, &[&[1, 2]]).unwrap();
        assert_eq!(a.mul(&b).apply(1), 2);
        assert_eq!(b.mul(&a).apply(1), 0);
        assert_eq!(a.mul(&b).apply(0), 1);
    }

    #[test]
    fn inverse_and_period() {
        let c = Perm::from_cycles(5, &[&[0, 1, 2], &[3, 4]]).unwrap();
        assert!(c.mul(&c.inverse()).is_identity());
        assert_eq!(c.period(), 6);
        assert_eq!(Perm::identity(4).period(), 1);
        assert!(Perm::from_images(vec![0, 0]).is_none());
    }
}
