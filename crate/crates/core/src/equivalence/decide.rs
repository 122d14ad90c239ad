use std::f64::consts::TAU;
use std::fmt;

use num_complex::Complex;
use rand::Rng;
use rand_distr::StandardNormal;

use super::compare::{certificate_compare, Certificate, Comparison, Discriminator};
use super::ordering::{align_ordering, MAX_BLOCK};
use super::witness::{unitary_witness, WitnessOptions};
use crate::error::{Error, Result};
use crate::gen::Seed;
use crate::invariants::{certificates_for, eigen_blocks, independent_subset, j_moments_from, DEGENERACY_GAP};
use crate::linalg::{polar_unitary, ComplexMatrix};
use crate::scalar::Real;
use crate::state::{coefficient_matrices, eigensystem, DensityMatrix, RANK_TOL};

/// Local unitaries `(u, w)` with `rho_b = (u ⊗ w) rho_a (u ⊗ w)^dagger`.
#[derive(Clone, Debug, PartialEq)]
pub struct Witness<T> {
    pub u: ComplexMatrix<T>,
    pub w: ComplexMatrix<T>,
}

#[derive(Clone, Debug, PartialEq)]
pub enum Verdict<T> {
    Equivalent { witness: Witness<T>, residual: T },
    Inequivalent(Discriminator<T>),
    Inconclusive { reason: String },
}

impl<T: Real> Verdict<T> {
    pub fn label(&self) -> &'static str {
        match self {
            Verdict::Equivalent { .. } => "equivalent",
            Verdict::Inequivalent(_) => "inequivalent",
            Verdict::Inconclusive { .. } => "inconclusive",
        }
    }
}

impl<T: Real> fmt::Display for Verdict<T> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Verdict::Equivalent { residual, .. } => write!(f, "equivalent (residual {residual:e})"),
            Verdict::Inequivalent(d) => write!(f, "inequivalent: {d}"),
            Verdict::Inconclusive { reason } => write!(f, "inconclusive: {reason}"),
        }
    }
}

#[derive(Clone, Copy, Debug)]
pub struct DecideOptions<T> {
    /// Tolerance for invariant comparison and witness verification.
    pub tol: T,
    pub seed: Seed,
    /// Largest degenerate eigenvalue block whose orderings are searched.
    pub max_block: usize,
    /// Retries inside each unitary search.
    pub retries: usize,
    /// Cap on gauge-phase candidates per ordering.
    pub max_gauges: usize,
}

impl<T: Real> Default for DecideOptions<T> {
    fn default() -> Self {
        Self {
            tol: T::tol(1e-8),
            seed: Seed(0),
            max_block: MAX_BLOCK,
            retries: 8,
            max_gauges: 64,
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Verification<T> {
    pub holds: bool,
    pub residual: T,
}

/// Check a claimed witness directly:
/// `||rho_b - (u ⊗ w) rho_a (u ⊗ w)^dagger||_F / max(1, ||rho_a||_F) <= tol`.
pub fn verify_witness<T: Real>(
    a: &DensityMatrix<T>,
    b: &DensityMatrix<T>,
    witness: &Witness<T>,
    tol: T,
) -> Result<Verification<T>> {
    let n = a.dim();
    if b.dim() != n {
        return Err(Error::SubsystemMismatch { left: n, right: b.dim() });
    }
    for (m, op) in [(&witness.u, "verify_witness(u)"), (&witness.w, "verify_witness(w)")] {
        if m.shape() != (n, n) {
            return Err(Error::DimensionMismatch {
                op,
                left: m.shape(),
                right: (n, n),
            });
        }
    }
    let moved = a.matrix().conjugate_by(&witness.u.kron(&witness.w));
    let residual = moved.distance(b.matrix()) / a.matrix().frobenius_norm().max(T::one());
    Ok(Verification {
        holds: residual <= tol,
        residual,
    })
}

fn real<T: Real>(x: T) -> Complex<T> {
    Complex::new(x, T::zero())
}

fn inequivalent<T: Real>(certificate: Certificate, indices: Vec<usize>, a: T, b: T) -> Verdict<T> {
    Verdict::Inequivalent(Discriminator {
        certificate,
        indices,
        a: real(a),
        b: real(b),
    })
}

/// Decide whether `b` is obtained from `a` by a product of local unitaries.
///
/// Unequal invariants give `Inequivalent` with the first differing entry.
/// Otherwise a witness is searched for and returned only after it passes
/// [`verify_witness`] at `opts.tol`; when no candidate verifies, the answer
/// is `Inconclusive`.
pub fn decide<T: Real>(a: &DensityMatrix<T>, b: &DensityMatrix<T>, opts: &DecideOptions<T>) -> Result<Verdict<T>> {
    if a.dim() != b.dim() {
        return Err(Error::SubsystemMismatch {
            left: a.dim(),
            right: b.dim(),
        });
    }
    let n = a.dim();
    let rank_tol = T::tol(RANK_TOL);
    let es_a = eigensystem(a, rank_tol)?;
    let es_b = eigensystem(b, rank_tol)?;

    let ja = j_moments_from(&es_a.lambdas, n * n);
    let jb = j_moments_from(&es_b.lambdas, n * n);
    if let Some(s) = (0..ja.len()).find(|&s| (ja[s] - jb[s]).abs() > opts.tol) {
        return Ok(inequivalent(Certificate::J, vec![s], ja[s], jb[s]));
    }
    if es_a.rank() != es_b.rank() {
        let count = |r: usize| T::from_usize(r).unwrap();
        return Ok(inequivalent(Certificate::Rank, vec![], count(es_a.rank()), count(es_b.rank())));
    }
    if let Some(i) = (0..es_a.rank()).find(|&i| (es_a.lambdas[i] - es_b.lambdas[i]).abs() > opts.tol) {
        return Ok(inequivalent(Certificate::Spectrum, vec![i], es_a.lambdas[i], es_b.lambdas[i]));
    }

    let blocks = eigen_blocks(&es_a.lambdas, T::tol(DEGENERACY_GAP));
    let ca = certificates_for(&es_a, &blocks)?;
    let cb = certificates_for(&es_b, &blocks)?;
    if let Comparison::Mismatch(d) = certificate_compare(&ca, &cb, opts.tol) {
        return Ok(Verdict::Inequivalent(d));
    }

    let orderings = match align_ordering(&es_a, &es_b, opts.tol, opts.max_block) {
        Ok(o) => o,
        Err(Error::BlockTooLarge { size, cap }) => {
            return Ok(Verdict::Inconclusive {
                reason: format!("degenerate eigenvalue block of size {size} exceeds the search cap {cap}"),
            })
        }
        Err(e) => return Err(e),
    };
    let coeffs_a = coefficient_matrices(&es_a)?;
    let coeffs_b = coefficient_matrices(&es_b)?;
    let mut best = T::infinity();
    let mut tried = 0usize;
    for (k, perm) in orderings.enumerate() {
        tried += 1;
        let permuted: Vec<ComplexMatrix<T>> = perm.iter().map(|&p| coeffs_b[p].clone()).collect();
        let seed = Seed(opts.seed.0.wrapping_add(k as u64));
        match search_ordering(a, b, &coeffs_a, &permuted, seed, opts) {
            Ok((witness, residual)) => return Ok(Verdict::Equivalent { witness, residual }),
            Err(r) => best = best.min(r),
        }
    }
    Ok(Verdict::Inconclusive {
        reason: if best.is_finite() {
            format!("no candidate witness verified over {tried} ordering(s); best residual {best:e}")
        } else {
            format!("no candidate witness could be formed over {tried} ordering(s)")
        },
    })
}

/// Relative phase information between eigenvectors `i < j`: the second
/// state's cross term equals `e^{i m (phi_i - phi_j)}` times the first's
/// under the sought local unitaries, detected through a trace of order `m`.
#[derive(Clone, Copy, Debug)]
struct PhaseEdge<T> {
    i: usize,
    j: usize,
    m: usize,
    angle: f64,
    strength: T,
}

enum EdgeProbe<T> {
    Silent,
    Inconsistent,
    Found { m: usize, angle: f64, strength: T },
}

fn probe<T: Real>(k: &ComplexMatrix<T>, k2: &ComplexMatrix<T>, z: &ComplexMatrix<T>, z2: &ComplexMatrix<T>) -> EdgeProbe<T> {
    let n = k.rows();
    let p = k * z;
    let p2 = k2 * z2;
    let base = (k.frobenius_norm() * z.frobenius_norm()).max(T::min_positive_value());
    let cut = T::tol(1e-6);
    let mut pw = p.clone();
    let mut pw2 = p2.clone();
    for m in 1..=n {
        if m > 1 {
            pw = &pw * &p;
            pw2 = &pw2 * &p2;
        }
        let scale = base.powi(m as i32);
        let g = pw.trace();
        let g2 = pw2.trace();
        let (r, r2) = (g.norm() / scale, g2.norm() / scale);
        if r > cut || r2 > cut {
            if (r - r2).abs() > cut * r.max(r2) {
                return EdgeProbe::Inconsistent;
            }
            return EdgeProbe::Found {
                m,
                angle: (g2 / g).arg().to_f64_lossy(),
                strength: r,
            };
        }
    }
    EdgeProbe::Silent
}

fn random_combination<T: Real>(mats: &[ComplexMatrix<T>], t: &[T]) -> ComplexMatrix<T> {
    let n = mats[0].rows();
    let mut z = ComplexMatrix::identity(n);
    for (m, &tk) in mats.iter().zip(t) {
        z.add_scaled(real(tk), m);
    }
    z
}

/// Search for a witness under one eigenvector labeling. On failure returns
/// the best verification residual reached (infinite if none was formed).
fn search_ordering<T: Real>(
    a: &DensityMatrix<T>,
    b: &DensityMatrix<T>,
    ca: &[ComplexMatrix<T>],
    cb: &[ComplexMatrix<T>],
    seed: Seed,
    opts: &DecideOptions<T>,
) -> std::result::Result<(Witness<T>, T), T> {
    let r = ca.len();
    let mut rng = seed.rng();
    let rho_a: Vec<ComplexMatrix<T>> = ca.iter().map(|x| x * &x.adjoint()).collect();
    let rho_b: Vec<ComplexMatrix<T>> = cb.iter().map(|x| x * &x.adjoint()).collect();
    let th_a: Vec<ComplexMatrix<T>> = ca.iter().map(|x| &x.transpose() * &x.conj()).collect();
    let th_b: Vec<ComplexMatrix<T>> = cb.iter().map(|x| &x.transpose() * &x.conj()).collect();
    let mut draw = |len: usize| -> Vec<T> { (0..len).map(|_| T::lit(rng.sample::<f64, _>(StandardNormal))).collect() };
    let t = draw(r);
    let s = draw(r);
    let (z_a, z_b) = (random_combination(&rho_a, &t), random_combination(&rho_b, &t));
    let (y_a, y_b) = (random_combination(&th_a, &s), random_combination(&th_b, &s));

    let small = T::tol(1e-10);
    let mut edges = Vec::new();
    let mut cross = Vec::new();
    for i in 0..r {
        for j in i + 1..r {
            let k_a = &ca[i] * &ca[j].adjoint();
            let k_b = &cb[i] * &cb[j].adjoint();
            let mut found = probe(&k_a, &k_b, &z_a, &z_b);
            if matches!(found, EdgeProbe::Silent) {
                let l_a = &ca[i].transpose() * &ca[j].conj();
                let l_b = &cb[i].transpose() * &cb[j].conj();
                found = probe(&l_a, &l_b, &y_a, &y_b);
            }
            match found {
                EdgeProbe::Inconsistent => return Err(T::infinity()),
                EdgeProbe::Found { m, angle, strength } => edges.push(PhaseEdge { i, j, m, angle, strength }),
                EdgeProbe::Silent => {}
            }
            if k_a.frobenius_norm() > small || k_b.frobenius_norm() > small {
                cross.push((i, j, k_a, k_b));
            }
        }
    }

    // Spanning forest: low order first, then strongest signal.
    let mut order: Vec<usize> = (0..edges.len()).collect();
    order.sort_by(|&x, &y| {
        edges[x]
            .m
            .cmp(&edges[y].m)
            .then(edges[y].strength.partial_cmp(&edges[x].strength).unwrap_or(std::cmp::Ordering::Equal))
    });
    let mut parent: Vec<usize> = (0..r).collect();
    fn root(parent: &mut [usize], mut x: usize) -> usize {
        while parent[x] != x {
            parent[x] = parent[parent[x]];
            x = parent[x];
        }
        x
    }
    let mut tree = Vec::new();
    let mut rest = Vec::new();
    for e in order {
        let (ri, rj) = (root(&mut parent, edges[e].i), root(&mut parent, edges[e].j));
        if ri != rj {
            parent[ri] = rj;
            tree.push(edges[e]);
        } else {
            rest.push(edges[e]);
        }
    }
    // Orient tree edges outward from the lowest vertex of each component.
    let mut known = vec![false; r];
    let mut oriented: Vec<(PhaseEdge<T>, bool)> = Vec::new();
    for start in 0..r {
        if known[start] {
            continue;
        }
        known[start] = true;
        let mut frontier = vec![start];
        while let Some(v) = frontier.pop() {
            for e in &tree {
                let (from_i, other) = if e.i == v { (true, e.j) } else if e.j == v { (false, e.i) } else { continue };
                if !known[other] {
                    known[other] = true;
                    oriented.push((*e, from_i));
                    frontier.push(other);
                }
            }
        }
    }

    let total: usize = oriented.iter().map(|(e, _)| e.m).product();
    let candidates = total.min(opts.max_gauges.max(1));
    let wopts = WitnessOptions {
        tol: opts.tol,
        retries: opts.retries,
        seed,
    };
    let mut best = T::infinity();
    for c in 0..candidates {
        let mut phi = vec![0.0f64; r];
        let mut digit = c;
        for (e, from_i) in &oriented {
            let branch = digit % e.m;
            digit /= e.m;
            let delta = (e.angle + TAU * branch as f64) / e.m as f64;
            // delta = phi_i - phi_j
            if *from_i {
                phi[e.j] = phi[e.i] - delta;
            } else {
                phi[e.i] = phi[e.j] + delta;
            }
        }
        let consistent = rest.iter().all(|e| {
            let d = e.m as f64 * (phi[e.i] - phi[e.j]) - e.angle;
            (d - TAU * (d / TAU).round()).abs() < 1e-4
        });
        if !consistent {
            continue;
        }

        let mut src = rho_a.clone();
        let mut dst = rho_b.clone();
        let i_unit = Complex::new(T::zero(), T::one());
        for (i, j, k_a, k_b) in &cross {
            let k = k_a.scale(Complex::from_polar(T::one(), T::lit(phi[*i] - phi[*j])));
            let ka = k.adjoint();
            let kba = k_b.adjoint();
            src.push(&k + &ka);
            dst.push(k_b + &kba);
            src.push((&k - &ka).scale(i_unit));
            dst.push((k_b - &kba).scale(i_unit));
        }
        let keep = independent_subset(&src, T::tol(1e-10));
        let src: Vec<ComplexMatrix<T>> = keep.iter().map(|&x| src[x].clone()).collect();
        let dst: Vec<ComplexMatrix<T>> = keep.iter().map(|&x| dst[x].clone()).collect();
        let u = match unitary_witness(&src, &dst, &wopts) {
            Ok(found) => found.u,
            Err(f) => {
                best = best.min(f.best_residual);
                continue;
            }
        };
        // Second factor by orthogonal Procrustes on the stacked coefficients.
        let n = a.dim();
        let mut gram = ComplexMatrix::zeros(n, n);
        for i in 0..r {
            let bi = (&u * &ca[i]).scale(Complex::from_polar(T::one(), T::lit(phi[i])));
            gram = &gram + &(&bi.adjoint() * &cb[i]);
        }
        let Ok(big_w) = polar_unitary(&gram, T::tol(1e-10)) else {
            continue;
        };
        let witness = Witness { u, w: big_w.transpose() };
        if let Ok(v) = verify_witness(a, b, &witness, opts.tol) {
            if v.holds {
                return Ok((witness, v.residual));
            }
            best = best.min(v.residual);
        }
    }
    Err(best)
}
