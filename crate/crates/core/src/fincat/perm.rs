use std::fmt;

use crate::error::{Error, Result};

/// A permutation of `{0, .., n-1}` stored by its images.
///
/// Products compose as functions: `(p * q)(i) = p(q(i))`. With that product,
/// `x.permuted(p)` (`x[p(i)]` at slot `i`) is a right action on sequences.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Perm(Vec<u8>);

impl Perm {
    pub fn identity(n: usize) -> Self {
        Perm((0..n as u8).collect())
    }

    pub fn from_images(images: Vec<usize>) -> Result<Self> {
        let n = images.len();
        let mut seen = vec![false; n];
        for &i in &images {
            if i >= n || seen[i] {
                return Err(Error::InvalidPermutation(images));
            }
            seen[i] = true;
        }
        Ok(Perm(images.into_iter().map(|i| i as u8).collect()))
    }

    pub fn degree(&self) -> usize {
        self.0.len()
    }

    #[inline]
    pub fn apply(&self, i: usize) -> usize {
        self.0[i] as usize
    }

    pub fn images(&self) -> impl Iterator<Item = usize> + '_ {
        self.0.iter().map(|&v| v as usize)
    }

    /// `self ∘ other`.
    pub fn compose(&self, other: &Perm) -> Perm {
        debug_assert_eq!(self.degree(), other.degree());
        Perm(other.0.iter().map(|&j| self.0[j as usize]).collect())
    }

    pub fn inverse(&self) -> Perm {
        let mut inv = vec![0u8; self.0.len()];
        for (i, &v) in self.0.iter().enumerate() {
            inv[v as usize] = i as u8;
        }
        Perm(inv)
    }

    pub fn is_identity(&self) -> bool {
        self.0.iter().enumerate().all(|(i, &v)| i == v as usize)
    }

    /// Reorders a sequence: slot `i` of the result holds `seq[self(i)]`.
    pub fn permute<T: Clone>(&self, seq: &[T]) -> Vec<T> {
        assert_eq!(seq.len(), self.degree(), "permutation degree mismatch");
        self.0.iter().map(|&j| seq[j as usize].clone()).collect()
    }

    /// Block sum `p_1 ⊕ .. ⊕ p_k`, acting on consecutive segments.
    pub fn block_sum(parts: &[&Perm]) -> Perm {
        let mut out = Vec::with_capacity(parts.iter().map(|p| p.degree()).sum());
        let mut offset = 0u8;
        for p in parts {
            out.extend(p.0.iter().map(|&v| v + offset));
            offset += p.degree() as u8;
        }
        Perm(out)
    }

    /// Permutes whole blocks: block `i` of the result is block `self(i)` of
    /// the source, with block sizes given in source order.
    pub fn block_permutation(&self, sizes: &[usize]) -> Perm {
        assert_eq!(sizes.len(), self.degree());
        let mut starts = Vec::with_capacity(sizes.len());
        let mut acc = 0;
        for &s in sizes {
            starts.push(acc);
            acc += s;
        }
        let mut out = Vec::with_capacity(acc);
        for i in 0..self.degree() {
            let j = self.apply(i);
            out.extend((starts[j]..starts[j] + sizes[j]).map(|v| v as u8));
        }
        Perm(out)
    }

    /// All permutations of degree `n` in lexicographic order.
    pub fn all(n: usize) -> Vec<Perm> {
        let mut out = Vec::new();
        let mut cur: Vec<u8> = (0..n as u8).collect();
        loop {
            out.push(Perm(cur.clone()));
            // next lexicographic permutation
            let Some(i) = (1..n).rev().find(|&i| cur[i - 1] < cur[i]) else {
                break;
            };
            let j = (i..n).rev().find(|&j| cur[j] > cur[i - 1]).unwrap();
            cur.swap(i - 1, j);
            cur[i..].reverse();
        }
        out
    }

    pub fn transposition(n: usize, a: usize, b: usize) -> Perm {
        let mut v: Vec<u8> = (0..n as u8).collect();
        v.swap(a, b);
        Perm(v)
    }
}

impl fmt::Debug for Perm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

impl fmt::Display for Perm {
    /// One-line notation, 1-based.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[")?;
        for (i, v) in self.0.iter().enumerate() {
            if i > 0 {
                write!(f, " ")?;
            }
            write!(f, "{}", v + 1)?;
        }
        write!(f, "]")
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn all_is_lexicographic_and_complete() {
        let ps = Perm::all(4);
        assert_eq!(ps.len(), 24);
        assert!(ps.windows(2).all(|w| w[0] < w[1]));
        assert_eq!(Perm::all(0).len(), 1);
    }

    #[test]
    fn permute_is_a_right_action() {
        let seq = ['a', 'b', 'c', 'd'];
        for p in Perm::all(4) {
            for q in Perm::all(4) {
                let lhs = p.compose(&q).permute(&seq);
                let rhs = q.permute(&p.permute(&seq));
                assert_eq!(lhs, rhs);
            }
        }
    }

    #[test]
    fn block_permutation_moves_blocks() {
        let swap = Perm::transposition(2, 0, 1);
        let bp = swap.block_permutation(&[2, 1]);
        assert_eq!(bp.permute(&['x', 'y', 'z']), vec!['z', 'x', 'y']);
    }

    #[test]
    fn rejects_non_bijection() {
        assert!(Perm::from_images(vec![0, 0]).is_err());
        assert!(Perm::from_images(vec![2, 0]).is_err());
    }
}
