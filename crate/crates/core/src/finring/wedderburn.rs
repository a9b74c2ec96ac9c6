//! Simple components of a semisimple `F_p`-algebra and explicit
//! isomorphisms with full matrix rings `M_n(F_q)`.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use super::field::{FiniteField, FqMatrix};
use super::fp::{FpMat, Subspace};
use super::poly::{factor, Poly};
use super::radical::radical_fp;
use super::{Ideal, StructuredRing};
use crate::error::{Error, Result};

const SEED: u64 = 0x5eed_0f_1dea1;

/// A minimal two-sided ideal `M` of a semisimple algebra `S`, with the ring
/// isomorphism `M -> M_n(F_q)` given by left multiplication on a minimal
/// left ideal.
#[derive(Clone, Debug)]
pub struct MatrixRingIso {
    pub ideal: Ideal,
    /// central idempotent generating `ideal`, the identity of `M`
    pub idempotent: Vec<u64>,
    pub n: usize,
    pub field: FiniteField,
    ring: StructuredRing,
    /// `F_p` basis of the minimal left ideal: `zeta^k v_j` at `j f + k`
    module_basis: FpMat,
    /// `F_p` basis of `ideal`
    ideal_basis: Vec<Vec<u64>>,
    /// flattened matrix coordinates to `ideal_basis` coefficients
    from_flat: FpMat,
}

impl MatrixRingIso {
    pub fn q(&self) -> u64 {
        self.field.order()
    }

    /// Matrix of left multiplication by `x` (projected to `M`).
    pub fn to_matrix(&self, x: &[u64]) -> FqMatrix {
        let (n, f) = (self.n, self.field.f);
        let s = &self.ring;
        let mut m = FqMatrix::zeros(&self.field, n);
        for j in 0..n {
            let vj = self.module_basis.column(j * f);
            let image = s.mul(x, &vj);
            let c = self.module_basis.solve(&image).expect("left ideal is closed");
            for l in 0..n {
                m.entries[l * n + j] = c[l * f..(l + 1) * f].to_vec();
            }
        }
        m
    }

    pub fn from_matrix(&self, m: &FqMatrix) -> Vec<u64> {
        let flat = flatten(m, self.field.f);
        let c = self.from_flat.mul_vec(&flat);
        let s = &self.ring;
        c.iter()
            .zip(&self.ideal_basis)
            .fold(s.zero(), |acc, (&ca, b)| s.add(&acc, &s.scale(b, ca)))
    }
}

fn flatten(m: &FqMatrix, f: usize) -> Vec<u64> {
    let mut out = Vec::with_capacity(m.n * m.n * f);
    for e in &m.entries {
        out.extend_from_slice(&e[..f]);
    }
    out
}

fn combine(s: &StructuredRing, coeffs: &[u64], basis: &[Vec<u64>]) -> Vec<u64> {
    coeffs
        .iter()
        .zip(basis)
        .filter(|(&c, _)| c != 0)
        .fold(s.zero(), |acc, (&c, b)| s.add(&acc, &s.scale(b, c)))
}

/// Minimal polynomial of `a` in an algebra with identity `unit`.
fn minimal_polynomial(s: &StructuredRing, a: &[u64], unit: &[u64], p: u64) -> Poly {
    let d = s.rank();
    let mut powers = vec![unit.to_vec()];
    loop {
        let next = s.mul(powers.last().expect("nonempty"), a);
        let m = FpMat::from_columns(p, d, &powers);
        if let Some(c) = m.solve(&next) {
            let mut coeffs: Vec<u64> = c.iter().map(|&x| (p - x) % p).collect();
            coeffs.push(1);
            return Poly::new(p, coeffs);
        }
        powers.push(next);
    }
}

fn eval_poly(s: &StructuredRing, g: &Poly, a: &[u64], unit: &[u64]) -> Vec<u64> {
    g.coeffs
        .iter()
        .rev()
        .fold(s.zero(), |acc, &c| s.add(&s.mul(&acc, a), &s.scale(unit, c)))
}

fn span_basis(p: u64, d: usize, vectors: impl IntoIterator<Item = Vec<u64>>) -> Vec<Vec<u64>> {
    let mut sub = Subspace::new(p, d);
    let mut out = Vec::new();
    for v in vectors {
        if sub.insert(&v) {
            out.push(v);
        }
    }
    out
}

fn center(s: &StructuredRing, p: u64) -> Vec<Vec<u64>> {
    let d = s.rank();
    let mut m = FpMat::zeros(p, d * d, d);
    for i in 0..d {
        let ei = s.basis(i);
        for j in 0..d {
            let ej = s.basis(j);
            let c = s.sub(&s.mul(&ei, &ej), &s.mul(&ej, &ei));
            for k in 0..d {
                m.set(j * d + k, i, c[k]);
            }
        }
    }
    m.nullspace()
}

/// Primitive idempotents of the split subalgebra `{z in Z : z^p = z}`.
fn central_idempotents(s: &StructuredRing, z: &[Vec<u64>], p: u64) -> Vec<Vec<u64>> {
    let d = s.rank();
    let frob: Vec<Vec<u64>> = z.iter().map(|b| s.sub(&s.pow(b, p), b)).collect();
    let kernel = FpMat::from_columns(p, d, &frob).nullspace();
    let split: Vec<Vec<u64>> = kernel.iter().map(|c| combine(s, c, z)).collect();
    let mut idems = vec![s.one().to_vec()];
    for b in &split {
        let mut next = Vec::new();
        for eps in &idems {
            let be = s.mul(b, eps);
            for c in 0..p {
                let shifted = s.sub(&be, &s.scale(eps, c));
                let ind = s.sub(eps, &pow_nonzero(s, &shifted, p - 1));
                if !s.is_zero(&ind) {
                    next.push(ind);
                }
            }
        }
        idems = next;
    }
    idems
}

fn pow_nonzero(s: &StructuredRing, x: &[u64], e: u64) -> Vec<u64> {
    let mut acc = x.to_vec();
    for _ in 1..e {
        acc = s.mul(&acc, x);
    }
    acc
}

/// `e S e` as an `F_p` basis.
fn corner(s: &StructuredRing, e: &[u64], p: u64) -> Vec<Vec<u64>> {
    span_basis(p, s.rank(), (0..s.rank()).map(|j| s.mul(&s.mul(e, &s.basis(j)), e)))
}

/// A primitive idempotent below `eps` in the simple component it generates.
fn primitive_idempotent(s: &StructuredRing, eps: &[u64], f: usize, p: u64, rng: &mut ChaCha8Rng) -> Vec<u64> {
    let d = s.rank();
    let mut e = eps.to_vec();
    let mut c = corner(s, &e, p);
    while c.len() > f {
        let coeffs: Vec<u64> = (0..c.len()).map(|_| rng.gen_range(0..p)).collect();
        let a = combine(s, &coeffs, &c);
        let mu = minimal_polynomial(s, &a, &e, p);
        let factors = factor(&mu);
        let split = if factors.len() >= 2 {
            let (g, k) = &factors[0];
            let h = (0..*k).fold(Poly::one(p), |acc, _| acc.mul(g));
            let r = mu.divrem(&h).0;
            let (_, _, t) = h.ext_gcd(&r);
            eval_poly(s, &t.mul(&r), &a, &e)
        } else if factors[0].1 >= 2 {
            let z = eval_poly(s, &factors[0].0, &a, &e);
            let w = span_basis(p, d, c.iter().map(|x| s.mul(&z, x)));
            // left identity of the right ideal z C
            let mut sys = FpMat::zeros(p, d * w.len(), w.len());
            let mut rhs = vec![0u64; d * w.len()];
            for (b, wb) in w.iter().enumerate() {
                for (ai, wa) in w.iter().enumerate() {
                    let prod = s.mul(wa, wb);
                    for k in 0..d {
                        sys.set(b * d + k, ai, prod[k]);
                    }
                }
                rhs[b * d..(b + 1) * d].copy_from_slice(wb);
            }
            let coef = sys.solve(&rhs).expect("right ideals of a semisimple ring are generated by idempotents");
            combine(s, &coef, &w)
        } else {
            continue;
        };
        let other = s.sub(&e, &split);
        let (c1, c2) = (corner(s, &split, p), corner(s, &other, p));
        if c1.len() <= c2.len() {
            (e, c) = (split, c1);
        } else {
            (e, c) = (other, c2);
        }
    }
    e
}

/// Splits a semisimple `F_p`-algebra into its simple components.
pub fn wedderburn(s: &StructuredRing) -> Result<Vec<MatrixRingIso>> {
    let d = s.rank();
    if d == 0 {
        return Ok(Vec::new());
    }
    let p = s
        .prime_field()
        .ok_or_else(|| Error::InvalidRing("wedderburn expects an algebra over a prime field".into()))?;
    let rad = radical_fp(s).dim();
    if rad > 0 {
        return Err(Error::NotSemisimple { radical_dim: rad });
    }
    let z = center(s, p);
    let mut rng = ChaCha8Rng::seed_from_u64(SEED);
    central_idempotents(s, &z, p)
        .into_iter()
        .map(|eps| component(s, &z, &eps, p, &mut rng))
        .collect()
}

fn component(s: &StructuredRing, z: &[Vec<u64>], eps: &[u64], p: u64, rng: &mut ChaCha8Rng) -> Result<MatrixRingIso> {
    let d = s.rank();
    let ideal_basis = span_basis(p, d, (0..d).map(|j| s.mul(eps, &s.basis(j))));
    let zi = span_basis(p, d, z.iter().map(|b| s.mul(eps, b)));
    let f = zi.len();
    let n = (1..).find(|n| n * n * f >= ideal_basis.len()).expect("some n");
    if n * n * f != ideal_basis.len() {
        return Err(Error::InvalidRing("simple component has non-square dimension over its center".into()));
    }

    let (zeta, mu) = if f == 1 {
        (eps.to_vec(), Poly::new(p, vec![p - 1, 1]))
    } else {
        let total = p.pow(f as u32);
        (1..total)
            .map(|mut idx| {
                let coeffs: Vec<u64> = (0..f)
                    .map(|_| {
                        let c = idx % p;
                        idx /= p;
                        c
                    })
                    .collect();
                combine(s, &coeffs, &zi)
            })
            .map(|x| {
                let m = minimal_polynomial(s, &x, eps, p);
                (x, m)
            })
            .find(|(_, m)| m.degree() == Some(f))
            .expect("finite field has a primitive element")
    };
    let field = FiniteField::new(p, mu.coeffs.clone())?;

    let e = primitive_idempotent(s, eps, f, p, rng);
    let mut vcols: Vec<Vec<u64>> = Vec::new();
    let mut span = Subspace::new(p, d);
    for j in 0..d {
        if vcols.len() == n * f {
            break;
        }
        let v = s.mul(&s.mul(eps, &s.basis(j)), &e);
        if span.contains(&v) {
            continue;
        }
        let mut x = v;
        for _ in 0..f {
            span.insert(&x);
            vcols.push(x.clone());
            x = s.mul(&zeta, &x);
        }
    }
    if vcols.len() != n * f {
        return Err(Error::InvalidRing("minimal left ideal has unexpected dimension".into()));
    }
    let module_basis = FpMat::from_columns(p, d, &vcols);

    let mut iso = MatrixRingIso {
        ideal: Ideal {
            generators: ideal_basis.clone(),
        },
        idempotent: eps.to_vec(),
        n,
        field,
        ring: s.clone(),
        module_basis,
        ideal_basis,
        from_flat: FpMat::identity(p, 1),
    };
    let columns: Vec<Vec<u64>> = iso
        .ideal_basis
        .iter()
        .map(|b| flatten(&iso.to_matrix(b), f))
        .collect();
    iso.from_flat = FpMat::from_columns(p, n * n * f, &columns)
        .inverse()
        .ok_or_else(|| Error::InvalidRing("left multiplication is not faithful on the component".into()))?;
    verify_matrix_units(&iso)?;
    Ok(iso)
}

fn verify_matrix_units(iso: &MatrixRingIso) -> Result<()> {
    let (n, field, s) = (iso.n, &iso.field, &iso.ring);
    let units: Vec<Vec<u64>> = (0..n * n)
        .map(|ij| iso.from_matrix(&FqMatrix::unit(field, n, ij / n, ij % n)))
        .collect();
    for i in 0..n {
        for j in 0..n {
            for k in 0..n {
                for l in 0..n {
                    let prod = s.mul(&units[i * n + j], &units[k * n + l]);
                    let expected = if j == k { units[i * n + l].clone() } else { s.zero() };
                    if prod != expected {
                        return Err(Error::InvalidRing("recovered matrix units do not multiply correctly".into()));
                    }
                }
            }
        }
    }
    let sum = (0..n).fold(s.zero(), |acc, i| s.add(&acc, &units[i * n + i]));
    if sum != iso.idempotent {
        return Err(Error::InvalidRing("diagonal matrix units do not sum to the component identity".into()));
    }
    Ok(())
}
