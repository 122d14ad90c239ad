//! JSON reports written to standard output.

use lueq::invariants::{CertificateSet, ExtendedCertificateSet, Genericity, StructureConstants};
use lueq::{Discriminator, Verdict};
use serde_json::{json, Value};

use crate::formats::{matrix_value, pair, tensor_value};

fn one_based(ix: &[usize]) -> Vec<usize> {
    ix.iter().map(|i| i + 1).collect()
}

pub fn genericity(g: &Genericity<f64>) -> Value {
    json!({
        "generic": g.is_generic(),
        "omega_nonsingular": g.omega,
        "theta_nonsingular": g.theta,
        "det_omega": g.det_omega,
        "det_theta": g.det_theta,
    })
}

pub fn certificates(c: &CertificateSet<f64>, g: &Genericity<f64>) -> Value {
    json!({
        "dim": c.dim,
        "n": c.n,
        "rank": c.block_sizes.iter().sum::<usize>(),
        "lambdas": c.lambdas,
        "block_sizes": c.block_sizes,
        "omega": matrix_value(&c.omega),
        "theta": matrix_value(&c.theta),
        "x": tensor_value(&c.x),
        "y": tensor_value(&c.y),
        "j": c.j,
        "genericity": genericity(g),
    })
}

pub fn extended(e: &ExtendedCertificateSet<f64>) -> Value {
    json!({
        "ancillary_supplied": e.basis.supplied,
        "rho_subset": one_based(&e.basis.rho_subset),
        "theta_subset": one_based(&e.basis.theta_subset),
        "ancillary_rho": e.basis.ancillary_rhos().iter().map(matrix_value).collect::<Vec<_>>(),
        "ancillary_theta": e.basis.ancillary_thetas().iter().map(matrix_value).collect::<Vec<_>>(),
        "omega": matrix_value(&e.omega_t),
        "theta": matrix_value(&e.theta_t),
        "x": tensor_value(&e.x_t),
        "y": tensor_value(&e.y_t),
    })
}

pub fn discriminator(d: &Discriminator<f64>) -> Value {
    json!({
        "certificate": d.certificate.name(),
        "indices": one_based(&d.indices),
        "a": pair(d.a),
        "b": pair(d.b),
    })
}

pub fn verdict(v: &Verdict<f64>) -> Value {
    match v {
        Verdict::Equivalent { witness, residual } => json!({
            "verdict": v.label(),
            "residual": residual,
            "witness": { "u": matrix_value(&witness.u), "w": matrix_value(&witness.w) },
        }),
        Verdict::Inequivalent(d) => json!({
            "verdict": v.label(),
            "discriminator": discriminator(d),
        }),
        Verdict::Inconclusive { reason } => json!({
            "verdict": v.label(),
            "reason": reason,
        }),
    }
}

pub fn structure(sc: &StructureConstants<f64>, bound: f64) -> Value {
    json!({
        "residual": sc.residual,
        "bound": bound,
        "c": tensor_value(&sc.c),
    })
}
