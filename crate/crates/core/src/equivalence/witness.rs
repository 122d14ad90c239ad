use std::fmt;

use rand::Rng;
use rand_distr::StandardNormal;

use crate::gen::Seed;
use crate::linalg::{herm_eig, polar_unitary, ComplexMatrix};
use crate::scalar::Real;

/// Controls for [`unitary_witness`].
#[derive(Clone, Copy, Debug)]
pub struct WitnessOptions<T> {
    /// Bound on `max_k ||u M_k u^dagger - M'_k||_F`.
    pub tol: T,
    /// Extra random combinations tried after the first one fails.
    pub retries: usize,
    pub seed: Seed,
}

impl<T: Real> Default for WitnessOptions<T> {
    fn default() -> Self {
        Self {
            tol: T::tol(1e-8),
            retries: 8,
            seed: Seed(0),
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct UnitaryMatch<T> {
    pub u: ComplexMatrix<T>,
    pub residual: T,
}

/// Why no unitary was found, with the smallest residual seen (infinite when
/// no candidate was ever formed).
#[derive(Clone, Debug, PartialEq)]
pub struct WitnessFailure<T> {
    pub reason: &'static str,
    pub best_residual: T,
}

impl<T: Real> fmt::Display for WitnessFailure<T> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} (best residual {:e})", self.reason, self.best_residual)
    }
}

fn fail<T: Real>(reason: &'static str, best_residual: T) -> WitnessFailure<T> {
    WitnessFailure { reason, best_residual }
}

/// Consecutive runs of (descending) eigenvalues closer than `gap`.
fn clusters<T: Real>(values: &[T], gap: T) -> Vec<(usize, usize)> {
    let mut out = Vec::new();
    let mut start = 0;
    for i in 1..=values.len() {
        if i == values.len() || (values[i - 1] - values[i]).abs() > gap {
            out.push((start, i - start));
            start = i;
        }
    }
    out
}

fn family_residual<T: Real>(u: &ComplexMatrix<T>, ms: &[ComplexMatrix<T>], ms2: &[ComplexMatrix<T>]) -> T {
    ms.iter()
        .zip(ms2)
        .map(|(m, m2)| m.conjugate_by(u).distance(m2))
        .fold(T::zero(), T::max)
}

/// Find a unitary `u` with `u M_k u^dagger = M'_k` for every `k`, given two
/// families of Hermitian matrices.
///
/// A random real combination `L = Σ t_k M_k` is diagonalized on both sides.
/// Within each eigenspace of `L` the unknown unitary is a block; blocks are
/// fixed one at a time along a maximum-weight spanning tree of the coupling
/// between eigenspaces, starting from the identity on each root. Every
/// candidate is checked against the whole family before being returned.
pub fn unitary_witness<T: Real>(
    ms: &[ComplexMatrix<T>],
    ms2: &[ComplexMatrix<T>],
    opts: &WitnessOptions<T>,
) -> Result<UnitaryMatch<T>, WitnessFailure<T>> {
    if ms.len() != ms2.len() {
        return Err(fail("families differ in length", T::infinity()));
    }
    let Some(first) = ms.first() else {
        return Err(fail("empty family", T::infinity()));
    };
    let n = first.rows();
    if ms.iter().chain(ms2).any(|m| m.shape() != (n, n)) {
        return Err(fail("family members differ in shape", T::infinity()));
    }
    let scale = ms
        .iter()
        .map(ComplexMatrix::frobenius_norm)
        .fold(T::one(), T::max);
    let mut rng = opts.seed.rng();
    let mut best = T::infinity();

    for _ in 0..=opts.retries {
        let t: Vec<T> = (0..ms.len())
            .map(|_| T::lit(rng.sample::<f64, _>(StandardNormal)))
            .collect();
        let combine = |fam: &[ComplexMatrix<T>]| {
            let mut l = ComplexMatrix::zeros(n, n);
            for (m, &tk) in fam.iter().zip(&t) {
                l.add_scaled(num_complex::Complex::new(tk, T::zero()), m);
            }
            l.hermitian_part()
        };
        let l = combine(ms);
        let l2 = combine(ms2);
        let (Ok(e), Ok(e2)) = (herm_eig(&l, T::tol(1e-6)), herm_eig(&l2, T::tol(1e-6))) else {
            continue;
        };
        let lnorm = l.frobenius_norm().max(T::one());
        let spread = e
            .values
            .iter()
            .zip(&e2.values)
            .map(|(a, b)| (*a - *b).abs())
            .fold(T::zero(), T::max);
        let weight: T = t.iter().fold(T::zero(), |acc, x| acc + x.abs());
        if spread > opts.tol * scale * weight.max(T::one()) {
            return Err(fail("spectra of the combined families differ", best));
        }

        let gap = T::tol(1e-9) * lnorm;
        let cl = clusters(&e.values, gap);
        if cl != clusters(&e2.values, gap) {
            continue;
        }
        let ea = e.vectors.adjoint();
        let e2a = e2.vectors.adjoint();
        let s: Vec<ComplexMatrix<T>> = ms.iter().map(|m| &(&ea * m) * &e.vectors).collect();
        let s2: Vec<ComplexMatrix<T>> = ms2.iter().map(|m| &(&e2a * m) * &e2.vectors).collect();

        // Strongest coupling between clusters and the family member carrying it.
        let k = cl.len();
        let mut weight_of = vec![vec![(T::zero(), 0usize); k]; k];
        for c in 0..k {
            for d in 0..k {
                if c == d {
                    continue;
                }
                for (idx, sm) in s.iter().enumerate() {
                    let w = sm.block(cl[c].0, cl[d].0, cl[c].1, cl[d].1).frobenius_norm();
                    if w > weight_of[c][d].0 {
                        weight_of[c][d] = (w, idx);
                    }
                }
            }
        }
        let edge_cut = T::tol(1e-7) * scale;
        let mut blocks: Vec<Option<ComplexMatrix<T>>> = vec![None; k];
        let mut ok = true;
        for root in 0..k {
            if blocks[root].is_some() {
                continue;
            }
            blocks[root] = Some(ComplexMatrix::identity(cl[root].1));
            // Prim: repeatedly attach the strongest edge leaving the tree.
            loop {
                let mut pick: Option<(T, usize, usize)> = None;
                for c in (0..k).filter(|&c| blocks[c].is_some()) {
                    for d in (0..k).filter(|&d| blocks[d].is_none()) {
                        let w = weight_of[c][d].0;
                        if w > edge_cut && pick.is_none_or(|p| w > p.0) {
                            pick = Some((w, c, d));
                        }
                    }
                }
                let Some((_, c, d)) = pick else { break };
                let idx = weight_of[c][d].1;
                let b = s[idx].block(cl[c].0, cl[d].0, cl[c].1, cl[d].1);
                let b2 = s2[idx].block(cl[c].0, cl[d].0, cl[c].1, cl[d].1);
                let vc = blocks[c].as_ref().unwrap();
                // b2 = vc b vd^dagger  =>  vd = polar(b2^dagger vc b)
                let target = &(&b2.adjoint() * vc) * &b;
                match polar_unitary(&target, T::tol(1e-10)) {
                    Ok(vd) => blocks[d] = Some(vd),
                    Err(_) => {
                        ok = false;
                        break;
                    }
                }
            }
            if !ok {
                break;
            }
        }
        if !ok {
            continue;
        }
        let mut v = ComplexMatrix::zeros(n, n);
        for (c, blk) in blocks.iter().enumerate() {
            v.set_block(cl[c].0, cl[c].0, blk.as_ref().unwrap());
        }
        let u = &(&e2.vectors * &v) * &ea;
        let residual = family_residual(&u, ms, ms2);
        if residual <= opts.tol {
            return Ok(UnitaryMatch { u, residual });
        }
        best = best.min(residual);
    }
    Err(fail("no unitary satisfied the whole family", best))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::gen::haar_unitary;

    type M = ComplexMatrix<f64>;

    fn random_hermitian(n: usize, seed: u64) -> M {
        let g = haar_unitary::<f64>(n, Seed(seed));
        let d = M::diag(&(0..n).map(|i| i as f64 * 0.37 - 0.5).collect::<Vec<_>>());
        d.conjugate_by(&g)
    }

    #[test]
    fn recovers_conjugation_of_generic_family() {
        let u = haar_unitary::<f64>(3, Seed(99));
        let ms: Vec<M> = (0..3).map(|s| random_hermitian(3, s)).collect();
        let ms2: Vec<M> = ms.iter().map(|m| m.conjugate_by(&u)).collect();
        let found = unitary_witness(&ms, &ms2, &WitnessOptions::default()).unwrap();
        assert!(found.residual <= 1e-8);
        assert!(found.u.unitarity_defect() < 1e-10);
    }

    #[test]
    fn identity_family_accepts_anything() {
        let ms = vec![M::identity(2).scale_real(0.5)];
        let found = unitary_witness(&ms, &ms, &WitnessOptions::default()).unwrap();
        assert!(found.residual <= 1e-12);
    }

    #[test]
    fn degenerate_combination_is_resolved_by_coupling() {
        // Both members commute with nothing but a scalar on the degenerate
        // space of the first, so the block must be fixed by the second.
        let u = haar_unitary::<f64>(4, Seed(5));
        let p = M::diag(&[1.0, 1.0, 0.0, 0.0]);
        let q = random_hermitian(4, 17);
        let ms = vec![p, q];
        let ms2: Vec<M> = ms.iter().map(|m| m.conjugate_by(&u)).collect();
        let found = unitary_witness(&ms, &ms2, &WitnessOptions::default()).unwrap();
        assert!(found.residual <= 1e-8);
    }

    #[test]
    fn different_spectra_fail() {
        let ms = vec![M::diag(&[1.0, 0.0])];
        let ms2 = vec![M::diag(&[0.5, 0.5])];
        let err = unitary_witness(&ms, &ms2, &WitnessOptions::default()).unwrap_err();
        assert_eq!(err.reason, "spectra of the combined families differ");
    }

    #[test]
    fn same_spectra_but_not_conjugate_fail() {
        let a = M::diag(&[1.0, 0.0]);
        let x = M::from_real_rows(&[&[0.0, 1.0], &[1.0, 0.0]]);
        let z = M::from_real_rows(&[&[1.0, 0.0], &[0.0, -1.0]]);
        // {Z, X} vs {Z, Z}: each member isospectral, jointly not conjugate.
        let ms = vec![a.clone(), z.clone(), x];
        let ms2 = vec![a, z.clone(), z];
        assert!(unitary_witness(&ms, &ms2, &WitnessOptions::default()).is_err());
    }

    #[test]
    fn length_mismatch_fails() {
        let ms = vec![M::identity(2)];
        assert!(unitary_witness(&ms, &[], &WitnessOptions::default()).is_err());
        assert!(unitary_witness::<f64>(&[], &[], &WitnessOptions::default()).is_err());
    }
}
