//! Jacobson radicals.
//!
//! Over `F_p` the radical is cut out by the descending chain
//! `I_{-1} = A`, `I_i = {x in I_{i-1} : g_i(x y) = 0 for all y}`, where
//! `g_i(z) = (Tr(L(z)~^(p^i)) mod p^(i+1)) / p^i` for an integer lift of the
//! left-regular matrix `L(z)`; `I_l` is the radical for `l = floor(log_p d)`.
//! With `p > d` this is the kernel of the trace form.

use super::fp::{mul_mod, FpMat, Subspace};
use super::{Ideal, StructuredRing};
use crate::error::{Error, Result};

/// `R / pR` for a ring of `p`-power order.
pub fn reduce_mod_p(r: &StructuredRing, p: u64) -> StructuredRing {
    let t = r.rank();
    let mut alpha = Vec::with_capacity(t * t * t);
    for i in 0..t {
        for j in 0..t {
            for k in 0..t {
                alpha.push(r.alpha(i, j, k) % p);
            }
        }
    }
    let one = r.one().iter().map(|&x| x % p).collect();
    StructuredRing::from_flat(vec![p; t], alpha, one).expect("quotient of a ring")
}

/// The prime `p` with `|R|` a power of `p`.
pub fn characteristic_prime(r: &StructuredRing) -> Option<u64> {
    let mut prime = None;
    for &m in r.moduli() {
        let ps = super::field::prime_factors(m);
        if ps.len() != 1 || prime.is_some_and(|q| q != ps[0]) {
            return None;
        }
        prime = Some(ps[0]);
    }
    prime
}

fn left_matrix_lift(a: &StructuredRing, z: &[u64]) -> Vec<u64> {
    let d = a.rank();
    let mut m = vec![0u64; d * d];
    for j in 0..d {
        let col = a.mul(z, &a.basis(j));
        for i in 0..d {
            m[i * d + j] = col[i];
        }
    }
    m
}

fn mat_mul_mod(x: &[u64], y: &[u64], d: usize, m: u64) -> Vec<u64> {
    let mut out = vec![0u64; d * d];
    for i in 0..d {
        for k in 0..d {
            let a = x[i * d + k];
            if a == 0 {
                continue;
            }
            for j in 0..d {
                let idx = i * d + j;
                out[idx] = (out[idx] + mul_mod(a, y[k * d + j], m)) % m;
            }
        }
    }
    out
}

fn g_value(a: &StructuredRing, z: &[u64], p: u64, i: u32) -> u64 {
    let d = a.rank();
    let pi = p.pow(i);
    let m = pi * p;
    let mut base = left_matrix_lift(a, z);
    let mut result: Option<Vec<u64>> = None;
    let mut e = pi;
    while e > 0 {
        if e & 1 == 1 {
            result = Some(match result {
                None => base.clone(),
                Some(r) => mat_mul_mod(&r, &base, d, m),
            });
        }
        e >>= 1;
        if e > 0 {
            base = mat_mul_mod(&base, &base, d, m);
        }
    }
    let pw = result.expect("exponent is positive");
    let tr = (0..d).fold(0u64, |acc, k| (acc + pw[k * d + k]) % m);
    debug_assert_eq!(tr % pi, 0, "trace not divisible on I_(i-1)");
    (tr / pi) % p
}

/// Radical of an `F_p`-algebra, as a subspace of its coordinate space.
pub fn radical_fp(a: &StructuredRing) -> Subspace {
    let p = a.prime_field().expect("an F_p-algebra");
    let d = a.rank();
    let mut basis: Vec<Vec<u64>> = (0..d).map(|i| a.basis(i)).collect();
    if d == 0 {
        return Subspace::new(p, 0);
    }
    let mut l = 0u32;
    while p.pow(l + 1) <= d as u64 {
        l += 1;
    }
    for i in 0..=l {
        if basis.is_empty() {
            break;
        }
        // values[b][a] = g_i(x_a e_b)
        let mut values = FpMat::zeros(p, d, basis.len());
        for (ai, x) in basis.iter().enumerate() {
            for b in 0..d {
                let z = a.mul(x, &a.basis(b));
                values.set(b, ai, g_value(a, &z, p, i));
            }
        }
        basis = values
            .nullspace()
            .iter()
            .map(|c| {
                let mut v = vec![0u64; d];
                for (ai, &ca) in c.iter().enumerate() {
                    if ca == 0 {
                        continue;
                    }
                    for k in 0..d {
                        v[k] = (v[k] + mul_mod(ca, basis[ai][k], p)) % p;
                    }
                }
                v
            })
            .collect();
    }
    Subspace::spanned_by(p, d, &basis)
}

/// Jacobson radical of a ring of prime-power order: the preimage of the
/// radical of `R/pR`.
pub fn jacobson_radical(r: &StructuredRing) -> Result<Ideal> {
    let p = characteristic_prime(r)
        .ok_or_else(|| Error::InvalidRing("jacobson_radical expects a ring of prime-power order".into()))?;
    let rbar = reduce_mod_p(r, p);
    let rad = radical_fp(&rbar);
    let mut generators = rad.basis();
    for k in 0..r.rank() {
        if r.moduli()[k] > p {
            generators.push(r.scale(&r.basis(k), p));
        }
    }
    Ok(Ideal { generators })
}
