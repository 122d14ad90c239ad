use std::ops::Range;

use crate::error::{Error, Result};
use crate::invariants::{eigen_blocks, DEGENERACY_GAP};
use crate::scalar::Real;
use crate::state::EigenSystem;

/// Largest degenerate block whose permutations are enumerated.
pub const MAX_BLOCK: usize = 6;

/// Lazy enumeration of eigenvector relabelings of the second state: the
/// identity on non-degenerate eigenvalues crossed with every permutation
/// inside each block of equal eigenvalues. Item `p` maps position `i` of
/// the first state to position `p[i]` of the second.
#[derive(Clone, Debug)]
pub struct Orderings {
    n: usize,
    blocks: Vec<Range<usize>>,
    perms: Vec<Vec<Vec<usize>>>,
    counter: Vec<usize>,
    exhausted: bool,
}

impl Orderings {
    fn empty() -> Self {
        Self {
            n: 0,
            blocks: Vec::new(),
            perms: Vec::new(),
            counter: Vec::new(),
            exhausted: true,
        }
    }

    /// Total number of orderings.
    pub fn count_total(&self) -> usize {
        if self.exhausted && self.n == 0 {
            return 0;
        }
        self.perms.iter().map(Vec::len).product()
    }
}

impl Iterator for Orderings {
    type Item = Vec<usize>;

    fn next(&mut self) -> Option<Vec<usize>> {
        if self.exhausted {
            return None;
        }
        let mut out: Vec<usize> = (0..self.n).collect();
        for ((block, perms), &c) in self.blocks.iter().zip(&self.perms).zip(&self.counter) {
            for (off, &p) in perms[c].iter().enumerate() {
                out[block.start + off] = block.start + p;
            }
        }
        // Odometer, last block fastest.
        self.exhausted = true;
        for b in (0..self.counter.len()).rev() {
            self.counter[b] += 1;
            if self.counter[b] < self.perms[b].len() {
                self.exhausted = false;
                break;
            }
            self.counter[b] = 0;
        }
        Some(out)
    }
}

/// Permutations of `0..k` in lexicographic order.
fn permutations(k: usize) -> Vec<Vec<usize>> {
    let mut cur: Vec<usize> = (0..k).collect();
    let mut all = vec![cur.clone()];
    loop {
        let Some(i) = (1..k).rev().find(|&i| cur[i - 1] < cur[i]) else {
            return all;
        };
        let j = (i..k).rev().find(|&j| cur[j] > cur[i - 1]).unwrap();
        cur.swap(i - 1, j);
        cur[i..].reverse();
        all.push(cur.clone());
    }
}

/// Admissible eigenvector orderings of `b` relative to `a`. Empty when the
/// nonzero spectra differ by more than `tol`; an error when a degenerate
/// block exceeds `max_block`.
pub fn align_ordering<T: Real>(a: &EigenSystem<T>, b: &EigenSystem<T>, tol: T, max_block: usize) -> Result<Orderings> {
    if a.rank() != b.rank()
        || a.lambdas.iter().zip(&b.lambdas).any(|(x, y)| (*x - *y).abs() > tol)
    {
        return Ok(Orderings::empty());
    }
    let blocks = eigen_blocks(&a.lambdas, T::tol(DEGENERACY_GAP));
    if let Some(big) = blocks.iter().find(|r| r.len() > max_block) {
        return Err(Error::BlockTooLarge {
            size: big.len(),
            cap: max_block,
        });
    }
    let blocks: Vec<Range<usize>> = blocks.into_iter().filter(|r| r.len() > 1).collect();
    let perms: Vec<Vec<Vec<usize>>> = blocks.iter().map(|r| permutations(r.len())).collect();
    Ok(Orderings {
        n: a.rank(),
        counter: vec![0; blocks.len()],
        blocks,
        perms,
        exhausted: a.rank() == 0,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn es(lambdas: &[f64]) -> EigenSystem<f64> {
        EigenSystem {
            dim: 2,
            lambdas: lambdas.to_vec(),
            vectors: vec![vec![]; lambdas.len()],
        }
    }

    #[test]
    fn distinct_spectrum_gives_identity_only() {
        let o: Vec<_> = align_ordering(&es(&[1.0 / 3.0, 2.0 / 3.0]), &es(&[1.0 / 3.0, 2.0 / 3.0]), 1e-8, MAX_BLOCK)
            .unwrap()
            .collect();
        assert_eq!(o, vec![vec![0, 1]]);
    }

    #[test]
    fn degenerate_pair_gives_identity_and_swap() {
        let o: Vec<_> = align_ordering(&es(&[0.5, 0.5]), &es(&[0.5, 0.5]), 1e-8, MAX_BLOCK)
            .unwrap()
            .collect();
        assert_eq!(o, vec![vec![0, 1], vec![1, 0]]);
    }

    #[test]
    fn different_spectra_give_nothing() {
        let o = align_ordering(&es(&[1.0 / 3.0, 2.0 / 3.0]), &es(&[0.5, 0.5]), 1e-8, MAX_BLOCK).unwrap();
        assert_eq!(o.count(), 0);
        let o = align_ordering(&es(&[1.0]), &es(&[0.5, 0.5]), 1e-8, MAX_BLOCK).unwrap();
        assert_eq!(o.count(), 0);
    }

    #[test]
    fn blocks_multiply() {
        let l = [0.1, 0.1, 0.2, 0.3, 0.3, 0.3];
        let o = align_ordering(&es(&l), &es(&l), 1e-8, MAX_BLOCK).unwrap();
        assert_eq!(o.count_total(), 12);
        let all: Vec<_> = o.collect();
        assert_eq!(all.len(), 12);
        assert_eq!(all[0], vec![0, 1, 2, 3, 4, 5]);
        assert!(all.iter().all(|p| p[2] == 2));
    }

    #[test]
    fn oversized_block_is_refused() {
        let l = [0.125; 8];
        assert!(matches!(
            align_ordering(&es(&l), &es(&l), 1e-8, MAX_BLOCK),
            Err(Error::BlockTooLarge { size: 8, cap: 6 })
        ));
    }

    #[test]
    fn permutation_counts() {
        assert_eq!(permutations(1).len(), 1);
        assert_eq!(permutations(3).len(), 6);
        assert_eq!(permutations(4).len(), 24);
    }
}
