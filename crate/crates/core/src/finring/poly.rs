//! Univariate polynomials over `F_p` and Berlekamp factorization.
//!
//! Coefficients are stored lowest degree first with no trailing zeros; the
//! zero polynomial is the empty vector.

use super::fp::{inv_mod, mul_mod, FpMat};

#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Poly {
    pub p: u64,
    pub coeffs: Vec<u64>,
}

impl Poly {
    pub fn new(p: u64, coeffs: Vec<u64>) -> Self {
        let mut q = Poly {
            p,
            coeffs: coeffs.into_iter().map(|c| c % p).collect(),
        };
        q.trim();
        q
    }

    pub fn zero(p: u64) -> Self {
        Poly { p, coeffs: vec![] }
    }

    pub fn one(p: u64) -> Self {
        Poly::new(p, vec![1])
    }

    /// `x`
    pub fn x(p: u64) -> Self {
        Poly::new(p, vec![0, 1])
    }

    fn trim(&mut self) {
        while self.coeffs.last() == Some(&0) {
            self.coeffs.pop();
        }
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    /// Degree; `None` for zero.
    pub fn degree(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    pub fn lead(&self) -> u64 {
        self.coeffs.last().copied().unwrap_or(0)
    }

    pub fn monic(&self) -> Poly {
        if self.is_zero() {
            return self.clone();
        }
        let inv = inv_mod(self.lead(), self.p);
        self.scale(inv)
    }

    pub fn scale(&self, c: u64) -> Poly {
        Poly::new(self.p, self.coeffs.iter().map(|&a| mul_mod(a, c, self.p)).collect())
    }

    pub fn add(&self, other: &Poly) -> Poly {
        let n = self.coeffs.len().max(other.coeffs.len());
        let c = (0..n)
            .map(|i| (self.coeffs.get(i).unwrap_or(&0) + other.coeffs.get(i).unwrap_or(&0)) % self.p)
            .collect();
        Poly::new(self.p, c)
    }

    pub fn sub(&self, other: &Poly) -> Poly {
        self.add(&other.scale(self.p - 1))
    }

    pub fn mul(&self, other: &Poly) -> Poly {
        if self.is_zero() || other.is_zero() {
            return Poly::zero(self.p);
        }
        let mut c = vec![0u64; self.coeffs.len() + other.coeffs.len() - 1];
        for (i, &a) in self.coeffs.iter().enumerate() {
            if a == 0 {
                continue;
            }
            for (j, &b) in other.coeffs.iter().enumerate() {
                c[i + j] = (c[i + j] + mul_mod(a, b, self.p)) % self.p;
            }
        }
        Poly::new(self.p, c)
    }

    pub fn divrem(&self, d: &Poly) -> (Poly, Poly) {
        assert!(!d.is_zero(), "division by zero polynomial");
        let p = self.p;
        let dd = d.degree().expect("nonzero");
        let inv = inv_mod(d.lead(), p);
        let mut r = self.coeffs.clone();
        if r.len() <= dd {
            return (Poly::zero(p), self.clone());
        }
        let mut q = vec![0u64; r.len() - dd];
        for i in (dd..r.len()).rev() {
            let c = mul_mod(r[i], inv, p);
            if c == 0 {
                continue;
            }
            q[i - dd] = c;
            for (j, &b) in d.coeffs.iter().enumerate() {
                let idx = i - dd + j;
                r[idx] = (r[idx] + p - mul_mod(c, b, p)) % p;
            }
        }
        (Poly::new(p, q), Poly::new(p, r))
    }

    pub fn rem(&self, d: &Poly) -> Poly {
        self.divrem(d).1
    }

    /// Monic gcd.
    pub fn gcd(&self, other: &Poly) -> Poly {
        let (mut a, mut b) = (self.clone(), other.clone());
        while !b.is_zero() {
            let r = a.rem(&b);
            a = b;
            b = r;
        }
        a.monic()
    }

    /// `(g, s, t)` with `s*self + t*other = g`, `g` monic.
    pub fn ext_gcd(&self, other: &Poly) -> (Poly, Poly, Poly) {
        let p = self.p;
        let (mut r0, mut r1) = (self.clone(), other.clone());
        let (mut s0, mut s1) = (Poly::one(p), Poly::zero(p));
        let (mut t0, mut t1) = (Poly::zero(p), Poly::one(p));
        while !r1.is_zero() {
            let (q, r) = r0.divrem(&r1);
            r0 = std::mem::replace(&mut r1, r);
            let s = s0.sub(&q.mul(&s1));
            s0 = std::mem::replace(&mut s1, s);
            let t = t0.sub(&q.mul(&t1));
            t0 = std::mem::replace(&mut t1, t);
        }
        if r0.is_zero() {
            return (r0, s0, t0);
        }
        let inv = inv_mod(r0.lead(), p);
        (r0.scale(inv), s0.scale(inv), t0.scale(inv))
    }

    pub fn derivative(&self) -> Poly {
        let c = self
            .coeffs
            .iter()
            .enumerate()
            .skip(1)
            .map(|(i, &a)| mul_mod(a, i as u64 % self.p, self.p))
            .collect();
        Poly::new(self.p, c)
    }

    pub fn pow_mod(&self, mut e: u128, m: &Poly) -> Poly {
        let mut result = Poly::one(self.p).rem(m);
        let mut base = self.rem(m);
        while e > 0 {
            if e & 1 == 1 {
                result = result.mul(&base).rem(m);
            }
            base = base.mul(&base).rem(m);
            e >>= 1;
        }
        result
    }

    /// `f(x^(1/p))` for a polynomial in `x^p` (coefficients are fixed by
    /// Frobenius over a prime field).
    fn pth_root(&self) -> Poly {
        let p = self.p as usize;
        let c = self.coeffs.iter().step_by(p).copied().collect();
        Poly::new(self.p, c)
    }

    pub fn eval(&self, x: u64) -> u64 {
        self.coeffs
            .iter()
            .rev()
            .fold(0, |acc, &c| (mul_mod(acc, x, self.p) + c) % self.p)
    }
}

/// Square-free decomposition: pairs `(g, e)` with `f = lead * prod g^e`, each
/// `g` monic and square-free.
pub fn squarefree_factorization(f: &Poly) -> Vec<(Poly, u32)> {
    let p = f.p;
    let mut out = Vec::new();
    sff(&f.monic(), 1, p, &mut out);
    out.sort_by(|a, b| (a.1, &a.0).cmp(&(b.1, &b.0)));
    out
}

fn sff(f: &Poly, mult: u32, p: u64, out: &mut Vec<(Poly, u32)>) {
    if f.degree().unwrap_or(0) == 0 {
        return;
    }
    let d = f.derivative();
    if d.is_zero() {
        sff(&f.pth_root(), mult * p as u32, p, out);
        return;
    }
    let mut c = f.gcd(&d);
    let mut w = f.divrem(&c).0;
    let mut i = 1u32;
    while w.degree().unwrap_or(0) > 0 {
        let y = w.gcd(&c);
        let z = w.divrem(&y).0;
        if z.degree().unwrap_or(0) > 0 {
            out.push((z.monic(), i * mult));
        }
        w = y;
        c = c.divrem(&w).0;
        i += 1;
    }
    if c.degree().unwrap_or(0) > 0 {
        sff(&c.pth_root(), mult * p as u32, p, out);
    }
}

/// Irreducible factors of a monic square-free polynomial (Berlekamp).
pub fn berlekamp(f: &Poly) -> Vec<Poly> {
    let p = f.p;
    let n = match f.degree() {
        None | Some(0) => return Vec::new(),
        Some(1) => return vec![f.monic()],
        Some(n) => n,
    };
    // Q - I, where column i holds x^(p i) mod f
    let xp = Poly::x(p).pow_mod(p as u128, f);
    let mut q = FpMat::zeros(p, n, n);
    let mut cur = Poly::one(p);
    for i in 0..n {
        for j in 0..n {
            let c = cur.coeffs.get(j).copied().unwrap_or(0);
            let v = if i == j { (c + p - 1) % p } else { c };
            q.set(j, i, v);
        }
        cur = cur.mul(&xp).rem(f);
    }
    let kernel = q.nullspace();
    let r = kernel.len();
    let mut factors = vec![f.monic()];
    if r == 1 {
        return factors;
    }
    for v in kernel.iter() {
        let vp = Poly::new(p, v.clone());
        if vp.degree().unwrap_or(0) == 0 {
            continue;
        }
        let mut next = Vec::new();
        for g in factors {
            if g.degree() == Some(1) {
                next.push(g);
                continue;
            }
            let mut rest = g.clone();
            for c in 0..p {
                let h = rest.gcd(&vp.sub(&Poly::new(p, vec![c])));
                if h.degree().unwrap_or(0) > 0 && h.degree() < rest.degree() {
                    next.push(h.clone());
                    rest = rest.divrem(&h).0.monic();
                } else if h.degree() == rest.degree() {
                    break;
                }
            }
            if rest.degree().unwrap_or(0) > 0 {
                next.push(rest);
            }
        }
        factors = next;
        if factors.len() == r {
            break;
        }
    }
    factors.sort();
    factors
}

/// Complete factorization into monic irreducibles with multiplicities,
/// sorted by (factor, multiplicity).
pub fn factor(f: &Poly) -> Vec<(Poly, u32)> {
    let mut out: Vec<(Poly, u32)> = Vec::new();
    for (g, e) in squarefree_factorization(f) {
        for h in berlekamp(&g) {
            out.push((h, e));
        }
    }
    out.sort();
    out
}

pub fn is_irreducible(f: &Poly) -> bool {
    f.degree().unwrap_or(0) >= 1 && {
        let fs = factor(f);
        fs.len() == 1 && fs[0].1 == 1
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn all_monic(p: u64, deg: usize) -> Vec<Poly> {
        let count = (p as usize).pow(deg as u32);
        (0..count)
            .map(|mut idx| {
                let mut c = Vec::new();
                for _ in 0..deg {
                    c.push((idx % p as usize) as u64);
                    idx /= p as usize;
                }
                c.push(1);
                Poly::new(p, c)
            })
            .collect()
    }

    /// Irreducible by trial division against every monic of lower degree.
    fn brute_irreducible(f: &Poly) -> bool {
        let d = f.degree().unwrap();
        (1..=d / 2).all(|k| all_monic(f.p, k).iter().all(|g| !f.rem(g).is_zero()))
    }

    #[test]
    fn factorization_recombines() {
        for p in [2u64, 3, 5] {
            for deg in 1..=5usize {
                if (p as usize).pow(deg as u32) > 800 {
                    continue;
                }
                for f in all_monic(p, deg) {
                    let fs = factor(&f);
                    let prod = fs.iter().fold(Poly::one(p), |acc, (g, e)| {
                        (0..*e).fold(acc, |a, _| a.mul(g))
                    });
                    assert_eq!(prod, f, "p={p} f={f:?}");
                    for (g, _) in &fs {
                        assert!(brute_irreducible(g), "{g:?} not irreducible");
                    }
                    assert_eq!(is_irreducible(&f), brute_irreducible(&f));
                }
            }
        }
    }

    #[test]
    fn ext_gcd_identity() {
        let p = 7;
        let a = Poly::new(p, vec![1, 2, 3, 1]);
        let b = Poly::new(p, vec![5, 0, 1]);
        let (g, s, t) = a.ext_gcd(&b);
        assert_eq!(s.mul(&a).add(&t.mul(&b)), g);
        assert_eq!(g, a.gcd(&b));
    }

    #[test]
    fn squarefree_parts() {
        // (x+1)^2 (x^2+x+1) over F_2, and x^4 + 1 = (x+1)^4
        let p = 2;
        let f = Poly::new(p, vec![1, 1]).mul(&Poly::new(p, vec![1, 1])).mul(&Poly::new(p, vec![1, 1, 1]));
        let fs = factor(&f);
        assert_eq!(fs, vec![(Poly::new(p, vec![1, 1]), 2), (Poly::new(p, vec![1, 1, 1]), 1)]);
        let g = Poly::new(p, vec![1, 0, 0, 0, 1]);
        assert_eq!(factor(&g), vec![(Poly::new(p, vec![1, 1]), 4)]);
    }
}
