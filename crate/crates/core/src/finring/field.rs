//! Finite fields `F_p[x]/(poly)` and matrices over them.

use serde::{Deserialize, Serialize};

use super::fp::mul_mod;
use super::poly::{is_irreducible, Poly};
use crate::error::{Error, Result};

/// `F_q`, `q = p^f`, as `F_p[x]/(poly)` with `poly` monic irreducible of
/// degree `f`. Elements are coefficient vectors of length `f`, lowest first.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct FiniteField {
    pub p: u64,
    pub f: usize,
    /// monic, lowest degree first, length `f + 1`
    pub poly: Vec<u64>,
}

pub type Fq = Vec<u64>;

impl FiniteField {
    pub fn new(p: u64, poly: Vec<u64>) -> Result<Self> {
        let q = Poly::new(p, poly);
        if q.lead() != 1 || !is_irreducible(&q) {
            return Err(Error::InvalidRing(format!("{:?} is not monic irreducible mod {p}", q.coeffs)));
        }
        Ok(FiniteField {
            p,
            f: q.degree().expect("nonzero"),
            poly: q.coeffs,
        })
    }

    pub fn prime(p: u64) -> Self {
        FiniteField {
            p,
            f: 1,
            poly: vec![0, 1],
        }
    }

    pub fn order(&self) -> u64 {
        self.p.pow(self.f as u32)
    }

    pub fn zero(&self) -> Fq {
        vec![0; self.f]
    }

    pub fn one(&self) -> Fq {
        let mut v = self.zero();
        v[0] = 1 % self.p;
        v
    }

    /// Class of `x^k`.
    pub fn x_pow(&self, k: usize) -> Fq {
        let mut v = Poly::x(self.p).pow_mod(k as u128, &self.modulus()).coeffs;
        v.resize(self.f, 0);
        v
    }

    pub fn from_int(&self, c: u64) -> Fq {
        let mut v = self.zero();
        v[0] = c % self.p;
        v
    }

    fn modulus(&self) -> Poly {
        Poly::new(self.p, self.poly.clone())
    }

    pub fn is_zero(&self, a: &Fq) -> bool {
        a.iter().all(|&c| c == 0)
    }

    pub fn add(&self, a: &Fq, b: &Fq) -> Fq {
        a.iter().zip(b).map(|(&x, &y)| (x + y) % self.p).collect()
    }

    pub fn sub(&self, a: &Fq, b: &Fq) -> Fq {
        a.iter().zip(b).map(|(&x, &y)| (x + self.p - y) % self.p).collect()
    }

    pub fn mul(&self, a: &Fq, b: &Fq) -> Fq {
        if self.f == 1 {
            return vec![mul_mod(a[0], b[0], self.p)];
        }
        let prod = Poly::new(self.p, a.clone()).mul(&Poly::new(self.p, b.clone()));
        let mut v = prod.rem(&self.modulus()).coeffs;
        v.resize(self.f, 0);
        v
    }

    pub fn pow(&self, a: &Fq, mut e: u64) -> Fq {
        let mut result = self.one();
        let mut base = a.clone();
        while e > 0 {
            if e & 1 == 1 {
                result = self.mul(&result, &base);
            }
            base = self.mul(&base, &base);
            e >>= 1;
        }
        result
    }

    pub fn inv(&self, a: &Fq) -> Option<Fq> {
        if self.is_zero(a) {
            return None;
        }
        Some(self.pow(a, self.order() - 2))
    }

    /// Element with the given base-`p` digit index (`sum c_k p^k`).
    pub fn element(&self, mut index: u64) -> Fq {
        let mut v = self.zero();
        for c in v.iter_mut() {
            *c = index % self.p;
            index /= self.p;
        }
        v
    }

    pub fn index(&self, a: &Fq) -> u64 {
        a.iter().rev().fold(0, |acc, &c| acc * self.p + c)
    }

    pub fn multiplicative_order(&self, a: &Fq) -> u64 {
        assert!(!self.is_zero(a), "zero has no multiplicative order");
        let n = self.order() - 1;
        let mut ord = n;
        for r in prime_factors(n) {
            while ord % r == 0 && self.pow(a, ord / r) == self.one() {
                ord /= r;
            }
        }
        ord
    }
}

pub fn prime_factors(mut n: u64) -> Vec<u64> {
    let mut out = Vec::new();
    let mut d = 2;
    while d * d <= n {
        if n % d == 0 {
            out.push(d);
            while n % d == 0 {
                n /= d;
            }
        }
        d += 1;
    }
    if n > 1 {
        out.push(n);
    }
    out
}

/// First element, in increasing digit index, that generates `F_q^×`.
pub fn field_unit_generator(field: &FiniteField) -> Fq {
    let n = field.order() - 1;
    let primes = prime_factors(n);
    (1..field.order())
        .map(|i| field.element(i))
        .find(|a| primes.iter().all(|&r| field.pow(a, n / r) != field.one()))
        .expect("F_q^× is cyclic")
}

/// Square matrix over `F_q`, row-major.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct FqMatrix {
    pub n: usize,
    pub entries: Vec<Fq>,
}

impl FqMatrix {
    pub fn identity(field: &FiniteField, n: usize) -> Self {
        let mut entries = vec![field.zero(); n * n];
        for i in 0..n {
            entries[i * n + i] = field.one();
        }
        FqMatrix { n, entries }
    }

    pub fn zeros(field: &FiniteField, n: usize) -> Self {
        FqMatrix {
            n,
            entries: vec![field.zero(); n * n],
        }
    }

    pub fn unit(field: &FiniteField, n: usize, i: usize, j: usize) -> Self {
        let mut m = Self::zeros(field, n);
        m.entries[i * n + j] = field.one();
        m
    }

    pub fn get(&self, i: usize, j: usize) -> &Fq {
        &self.entries[i * self.n + j]
    }

    pub fn mul(&self, other: &FqMatrix, field: &FiniteField) -> FqMatrix {
        let n = self.n;
        let mut out = Self::zeros(field, n);
        for i in 0..n {
            for j in 0..n {
                let mut acc = field.zero();
                for k in 0..n {
                    acc = field.add(&acc, &field.mul(self.get(i, k), other.get(k, j)));
                }
                out.entries[i * n + j] = acc;
            }
        }
        out
    }

    /// `M v` for a column vector over `F_q`.
    pub fn apply(&self, v: &[Fq], field: &FiniteField) -> Vec<Fq> {
        (0..self.n)
            .map(|i| {
                (0..self.n).fold(field.zero(), |acc, k| field.add(&acc, &field.mul(self.get(i, k), &v[k])))
            })
            .collect()
    }
}

/// Generators of `GL_n(F_q)`: transvections `I + a E_ij` for `a` in the
/// `F_p`-basis `1, x, ..., x^(f-1)`, plus `diag(z, 1, ..., 1)` with `z` a
/// primitive root.
pub fn gl_generators(n: usize, field: &FiniteField) -> Vec<FqMatrix> {
    assert!(n >= 1, "matrix size must be positive");
    let mut out = Vec::new();
    for i in 0..n {
        for j in 0..n {
            if i == j {
                continue;
            }
            for k in 0..field.f {
                let mut m = FqMatrix::identity(field, n);
                m.entries[i * n + j] = field.x_pow(k);
                out.push(m);
            }
        }
    }
    let mut d = FqMatrix::identity(field, n);
    d.entries[0] = field_unit_generator(field);
    out.push(d);
    out
}
